//! The bundled reference models, parsed once from `data/examples.baut`.

use std::sync::OnceLock;

use crate::dsl::{self, NamedProblem, Workspace};
use crate::model::{RelativeModel, SullivanModel};

pub const SOURCE: &str = include_str!("../data/examples.baut");

pub fn workspace() -> &'static Workspace {
    static WS: OnceLock<Workspace> = OnceLock::new();
    WS.get_or_init(|| dsl::parse_files(&[("examples.baut", SOURCE)]).expect("bundled models parse"))
}

fn model(name: &str) -> SullivanModel {
    workspace().model(name).expect("bundled model").clone()
}

fn relative(name: &str) -> RelativeModel {
    workspace().relative(name).expect("bundled relative model").clone()
}

pub fn problem(name: &str) -> &'static NamedProblem {
    workspace().problem(name).expect("bundled problem")
}

pub fn s2() -> SullivanModel {
    model("S2")
}

pub fn s3() -> SullivanModel {
    model("S3")
}

pub fn s4() -> SullivanModel {
    model("S4")
}

pub fn s6() -> SullivanModel {
    model("S6")
}

pub fn cp2() -> SullivanModel {
    model("CP2")
}

/// The total space S⁷ of the Hopf fibration, as a (non-minimal) model.
pub fn hopf_total() -> SullivanModel {
    model("HopfTotal")
}

pub fn hopf_relative() -> RelativeModel {
    relative("Hopf")
}

pub fn s4_over_k() -> RelativeModel {
    relative("S4overK")
}

/// S⁵×S⁷ fibered over S³.
pub fn counter_one() -> RelativeModel {
    relative("C1")
}

/// S⁷×S⁹ fibered over a space with cohomology of S³×S³ minus the top class.
pub fn counter_two() -> RelativeModel {
    relative("C2")
}

pub fn su6_relative() -> RelativeModel {
    relative("SU6F")
}

pub fn liftable_example() -> RelativeModel {
    relative("Ex5a")
}

pub fn obstructed_example() -> RelativeModel {
    relative("Ex5b")
}

pub fn cp2_relative() -> RelativeModel {
    relative("CP2F")
}

pub fn cp2_trivial() -> RelativeModel {
    relative("CP2Triv")
}
