//! Conversions from core types into the oracle's raw input format.
#![allow(dead_code)]

use baut_core::obstruction::{DglMapData, LieExpr};
use baut_core::{AlgElement, Derivation, SullivanModel};
use baut_oracle::{DenseModel, OLie, RawMapEntry, RawPoly};

pub fn raw(a: &AlgElement) -> RawPoly {
    a.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

pub fn dense(m: &SullivanModel) -> DenseModel {
    DenseModel::new(
        m.generators().iter().map(|g| g.degree).collect(),
        m.diff_images().iter().map(raw).collect(),
    )
}

pub fn raw_der(d: &Derivation) -> Vec<(usize, RawPoly)> {
    d.images().iter().map(|(&g, p)| (g, raw(p))).collect()
}

pub fn olie(e: &LieExpr) -> Option<OLie> {
    Some(match e {
        LieExpr::Zero => return None,
        LieExpr::Gen(g) => OLie::Gen(*g),
        LieExpr::Bracket(a, b) => OLie::Bracket(Box::new(olie(a)?), Box::new(olie(b)?)),
        LieExpr::Scale(c, a) => OLie::Scale(c.clone(), Box::new(olie(a)?)),
        LieExpr::Sum(es) => OLie::Sum(es.iter().filter_map(olie).collect()),
    })
}

pub fn raw_map(map: &DglMapData) -> Vec<RawMapEntry> {
    map.images.iter().map(|(&g, d)| (g, d.shift(), raw_der(d))).collect()
}
