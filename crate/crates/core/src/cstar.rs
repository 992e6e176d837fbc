//! The Chevalley–Eilenberg cochain algebra C*(L) of a finite-type DGL,
//! truncated at a degree cutoff.
//!
//! For a basis e_a of L (|e_a| = n_a ≥ 1) with ∂e_a = Σ_b A_ba e_b and
//! [e_a, e_c] = Σ_b C^b_ac e_b, the generator ζ_b dual to s e_b has degree
//! n_b + 1 and
//!
//! D ζ_b = Σ_a (−1)^{n_a} A_ba ζ_a − ½ Σ_{a,c} (−1)^{n_a(n_c+1)} C^b_ac ζ_a ζ_c.
//!
//! With this normalization D² = 0 exactly; the property tests check it on
//! every corpus model.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgElement, Generator, Monomial};
use crate::der::{der_boundary, der_bracket, DerBasis, DerComplex, Derivation};
use crate::linalg;
use crate::model::SullivanModel;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CstarError {
    #[error("cutoff {0} leaves no generators")]
    CutoffTooSmall(i64),
    #[error("{0} leaves the span of the given elements")]
    NotClosed(String),
    #[error("element {0} has degree below 1")]
    DegreeTooLow(String),
}

type Sparse = Vec<(usize, Rational)>;

/// A finite-dimensional DGL given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDgl {
    degrees: Vec<i64>,
    labels: Vec<String>,
    boundary: Vec<Sparse>,
    bracket: BTreeMap<(usize, usize), Sparse>,
}

impl FiniteDgl {
    /// The abelian DGL with zero differential on the given basis.
    pub fn abelian(degrees: Vec<i64>, labels: Vec<String>) -> Result<Self, CstarError> {
        assert_eq!(degrees.len(), labels.len());
        if let Some(k) = degrees.iter().position(|&d| d < 1) {
            return Err(CstarError::DegreeTooLow(labels[k].clone()));
        }
        let n = degrees.len();
        Ok(FiniteDgl {
            degrees,
            labels,
            boundary: vec![Vec::new(); n],
            bracket: BTreeMap::new(),
        })
    }

    pub fn set_boundary(&mut self, a: usize, image: Sparse) {
        self.boundary[a] = image.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }

    pub fn set_bracket(&mut self, a: usize, c: usize, image: Sparse) {
        let image: Sparse = image.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if image.is_empty() {
            self.bracket.remove(&(a, c));
        } else {
            self.bracket.insert((a, c), image);
        }
    }

    /// Structure constants of the span of `elements` inside Der M. Brackets
    /// landing above `max_degree` are dropped; anything else must stay in the
    /// span.
    pub fn from_derivations(
        m: &SullivanModel,
        elements: Vec<Derivation>,
        labels: Vec<String>,
        max_degree: i64,
    ) -> Result<Self, CstarError> {
        let degrees: Vec<i64> = elements.iter().map(Derivation::shift).collect();
        let mut dgl = FiniteDgl::abelian(degrees.clone(), labels.clone())?;
        let mut by_degree: BTreeMap<i64, DegreeBlock> = BTreeMap::new();
        for (k, e) in elements.iter().enumerate() {
            let entry = by_degree
                .entry(e.shift())
                .or_insert_with(|| (DerBasis::new(m, e.shift(), |_| true), Vec::new(), Vec::new()));
            let coords = entry.0.coords(e).ok_or_else(|| CstarError::NotClosed(labels[k].clone()))?;
            entry.1.push(k);
            entry.2.push(coords);
        }
        let express = |sigma: &Derivation, what: &dyn Fn() -> String| -> Result<Sparse, CstarError> {
            if sigma.is_zero() {
                return Ok(Vec::new());
            }
            let (basis, ids, vecs) = by_degree.get(&sigma.shift()).ok_or_else(|| CstarError::NotClosed(what()))?;
            let target = basis.coords(sigma).ok_or_else(|| CstarError::NotClosed(what()))?;
            let coeffs = linalg::in_span(vecs, &target)
                .expect("consistent lengths")
                .ok_or_else(|| CstarError::NotClosed(what()))?;
            Ok(ids.iter().copied().zip(coeffs).collect())
        };
        for (a, e) in elements.iter().enumerate() {
            let b = der_boundary(m, e);
            if degrees[a] > 1 {
                dgl.set_boundary(a, express(&b, &|| format!("∂{}", labels[a]))?);
            }
        }
        for (a, ea) in elements.iter().enumerate() {
            for (c, ec) in elements.iter().enumerate() {
                if degrees[a] + degrees[c] > max_degree {
                    continue;
                }
                let br = der_bracket(m, ea, ec);
                dgl.set_bracket(a, c, express(&br, &|| format!("[{},{}]", labels[a], labels[c]))?);
            }
        }
        Ok(dgl)
    }

    /// Der M in degrees 1..=max_degree, with the degree-1 part cut down to
    /// ∂-cycles.
    pub fn from_der(m: &SullivanModel, max_degree: i64) -> Result<Self, CstarError> {
        let complex = DerComplex::full(m);
        let alg = m.algebra();
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        if let Some(b1) = complex.basis(1) {
            for (k, v) in complex.cycle_basis(1).iter().enumerate() {
                elements.push(b1.from_coords(v));
                labels.push(format!("c{}", k + 1));
            }
        }
        for n in 2..=max_degree.min(complex.top_degree()) {
            let basis = complex.basis(n).expect("degree in range");
            elements.extend(basis.derivations(alg));
            labels.extend(basis.labels(alg));
        }
        Self::from_derivations(m, elements, labels, max_degree)
    }

    /// The graded Lie algebra H(Der M) in degrees 1..=max_degree with the
    /// induced bracket. Its cochains model Baut₁X when Der M is formal.
    pub fn homology_of(m: &SullivanModel, max_degree: i64) -> Self {
        let complex = DerComplex::full(m);
        let alg = m.algebra();
        let mut reps: Vec<Derivation> = Vec::new();
        let mut degrees = Vec::new();
        let mut labels = Vec::new();
        for n in 1..=max_degree.min(complex.top_degree()) {
            for class in complex.homology(n) {
                degrees.push(n);
                labels.push(format!("[{}]", class.representative.display(alg)));
                reps.push(class.representative);
            }
        }
        let mut dgl = FiniteDgl::abelian(degrees.clone(), labels).expect("positive degrees");
        for a in 0..reps.len() {
            for c in 0..reps.len() {
                let n = degrees[a] + degrees[c];
                if n > max_degree {
                    continue;
                }
                let br = der_bracket(m, &reps[a], &reps[c]);
                if br.is_zero() {
                    continue;
                }
                let basis = complex.basis(n).expect("bracket degree is in range");
                let ids: Vec<usize> = (0..reps.len()).filter(|&k| degrees[k] == n).collect();
                let mut span: Vec<Vec<Rational>> = ids
                    .iter()
                    .map(|&k| basis.coords(&reps[k]).expect("representative lies in Der"))
                    .collect();
                span.extend(complex.boundary_vectors(n));
                let target = basis.coords(&br).expect("bracket lies in Der");
                let coeffs = linalg::in_span(&span, &target)
                    .expect("consistent lengths")
                    .expect("bracket of cycles is a cycle");
                dgl.set_bracket(a, c, ids.iter().copied().zip(coeffs).collect());
            }
        }
        dgl
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn boundary_of(&self, a: usize) -> &[(usize, Rational)] {
        &self.boundary[a]
    }

    pub fn bracket_of(&self, a: usize, c: usize) -> &[(usize, Rational)] {
        self.bracket.get(&(a, c)).map_or(&[], Vec::as_slice)
    }
}

/// Basis of one degree, positions of its elements, and their coordinates.
type DegreeBlock = (DerBasis, Vec<usize>, Vec<Vec<Rational>>);

/// A truncated C*(L): generators ζ_a for |e_a| + 1 ≤ cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CstarModel {
    pub cutoff: i64,
    pub model: SullivanModel,
    /// For each generator, the index of the basis element of L it is dual to.
    pub sources: Vec<usize>,
}

impl CstarModel {
    /// Generators where D² ≠ 0. Truncation can only cause this when D of the
    /// generator reaches past the cutoff.
    pub fn d_squared_defects(&self) -> Vec<usize> {
        (0..self.model.len())
            .filter(|&i| !self.model.d(self.model.diff_of(i)).is_zero())
            .collect()
    }

    /// Generators whose image degree stays within the cutoff.
    pub fn exact_generators(&self) -> Vec<usize> {
        (0..self.model.len())
            .filter(|&i| self.model.generators()[i].degree < self.cutoff)
            .collect()
    }
}

fn parity(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn cstar_model(dgl: &FiniteDgl, cutoff: i64) -> Result<CstarModel, CstarError> {
    let mut order: Vec<usize> = (0..dgl.len()).filter(|&a| dgl.degrees[a] < cutoff).collect();
    if cutoff < 2 || order.is_empty() {
        return Err(CstarError::CutoffTooSmall(cutoff));
    }
    order.sort_by_key(|&a| (dgl.degrees[a], a));
    let mut slot = vec![None; dgl.len()];
    for (i, &a) in order.iter().enumerate() {
        slot[a] = Some(i);
    }
    let gens: Vec<Generator> = order
        .iter()
        .map(|&a| Generator::new(format!("s{}", dgl.labels[a]), dgl.degrees[a] + 1))
        .collect();
    let alg = crate::algebra::FreeAlgebra::new(gens.clone());
    let mut images = vec![AlgElement::zero(); order.len()];
    for a in 0..dgl.len() {
        let Some(ia) = slot[a] else { continue };
        let sign = parity(dgl.degrees[a]);
        for (b, coef) in &dgl.boundary[a] {
            if let Some(ib) = slot[*b] {
                images[ib].add_term(Monomial::generator(ia), &sign * coef);
            }
        }
    }
    let half = Rational::new(1.into(), 2.into());
    for ((a, c), image) in &dgl.bracket {
        let (Some(ia), Some(ic)) = (slot[*a], slot[*c]) else { continue };
        let prod = alg.multiply(&AlgElement::generator(ia), &AlgElement::generator(ic));
        let sign = -parity(dgl.degrees[*a] * (dgl.degrees[*c] + 1)) * &half;
        for (b, coef) in image {
            if let Some(ib) = slot[*b] {
                images[ib].add_scaled(&prod, &(&sign * coef));
            }
        }
    }
    let model = SullivanModel::new(gens, images).expect("generator degrees are at least 2");
    Ok(CstarModel {
        cutoff,
        model,
        sources: order,
    })
}
