//! Exact computations with Sullivan models and their derivation Lie algebras.

pub mod algebra;
pub mod cohomology;
pub mod corpus;
pub mod cstar;
pub mod der;
pub mod dsl;
pub mod fibration;
pub mod linalg;
pub mod model;
pub mod obstruction;

pub type Rational = num_rational::BigRational;

pub use algebra::{AlgElement, FreeAlgebra, Generator, Monomial};
pub use der::{DerComplex, Derivation};
pub use dsl::{Diagnostic, Workspace};
pub use model::{RelativeModel, SullivanModel};
pub use obstruction::{LieExpr, LiftingProblem, QuillenData};
