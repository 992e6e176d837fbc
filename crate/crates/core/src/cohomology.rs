//! Cohomology of free CDGAs in bounded degrees, finite quotient rings
//! ℚ[x₁..x_n]/(f₁..f_m), their negative-degree derivations, and torus
//! extensions ℚ[t₁..t_r]⊗ΛV.
//!
//! All quotient computations are degreewise: the ideal in degree n is the
//! span of monomial·f_j, and everything reduces to exact linear algebra.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgElement, FreeAlgebra, Generator, Homogeneity, Monomial};
use crate::linalg::{self, RatMatrix};
use crate::model::{ModelError, SullivanModel};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("model is not pure")]
    NotPure,
    #[error("model is not an F0 model: {0}")]
    NotF0(String),
    #[error("ring generator {0} has odd degree")]
    OddRingGenerator(String),
    #[error("not a KS extension: {0}")]
    NotAKSExtension(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Coordinates of homogeneous elements in a monomial basis.
struct MonomialIndex {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    fn new(alg: &FreeAlgebra, degree: i64) -> Self {
        let basis = alg.monomial_basis(degree);
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialIndex { basis, index }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, a: &AlgElement) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len()];
        for (m, c) in a.terms() {
            let k = *self.index.get(m).expect("element has the expected degree");
            v[k] = c.clone();
        }
        v
    }

    fn element(&self, coords: &[Rational]) -> AlgElement {
        let mut a = AlgElement::zero();
        for (m, c) in self.basis.iter().zip(coords) {
            a.add_term(m.clone(), c.clone());
        }
        a
    }
}

/// Cohomology dimensions and cocycle representatives in degrees 0..=cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub cutoff: i64,
    pub dims: Vec<usize>,
    pub reps: Vec<Vec<AlgElement>>,
    /// Degree past which the cohomology is known to vanish, when certified.
    pub certified_zero_beyond: Option<i64>,
}

impl CohomologyTable {
    pub fn dim(&self, n: i64) -> usize {
        if n < 0 {
            0
        } else {
            self.dims.get(n as usize).copied().unwrap_or(0)
        }
    }

    pub fn reps(&self, n: i64) -> &[AlgElement] {
        if n < 0 {
            &[]
        } else {
            self.reps.get(n as usize).map_or(&[], Vec::as_slice)
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Matrix of d from degree n to degree n + 1, in monomial coordinates.
fn diff_matrix(m: &SullivanModel, from: &MonomialIndex, to: &MonomialIndex) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = from
        .basis
        .iter()
        .map(|mono| to.coords(&m.d(&AlgElement::monomial(mono.clone(), Rational::one()))))
        .collect();
    RatMatrix::from_columns(to.len(), &cols).expect("consistent lengths")
}

/// H^n(ΛV, d) for 0 ≤ n ≤ cutoff via kernels and images of d.
pub fn cdga_cohomology(m: &SullivanModel, cutoff: i64) -> CohomologyTable {
    let alg = m.algebra();
    let cutoff = cutoff.max(0);
    let mut dims = Vec::new();
    let mut reps = Vec::new();
    let mut prev = MonomialIndex::new(alg, -1);
    let mut cur = MonomialIndex::new(alg, 0);
    let mut incoming = RatMatrix::zeros(cur.len(), 0);
    for n in 0..=cutoff {
        let next = MonomialIndex::new(alg, n + 1);
        let outgoing = diff_matrix(m, &cur, &next);
        let cycles = outgoing.kernel_basis();
        let bounds: Vec<Vec<Rational>> = (0..incoming.cols()).map(|c| incoming.column(c)).collect();
        let chosen = linalg::quotient_basis(cur.len(), &bounds, &cycles);
        reps.push(chosen.iter().map(|&k| cur.element(&cycles[k])).collect::<Vec<_>>());
        dims.push(chosen.len());
        prev = std::mem::replace(&mut cur, next);
        incoming = outgoing;
    }
    drop(prev);
    CohomologyTable {
        cutoff,
        dims,
        reps,
        certified_zero_beyond: None,
    }
}

/// The same dimensions computed as (cols − rank d_n) − rank d_{n−1}.
pub fn cohomology_dims_by_rank(m: &SullivanModel, cutoff: i64) -> Vec<usize> {
    let alg = m.algebra();
    (0..=cutoff.max(0))
        .map(|n| {
            let below = MonomialIndex::new(alg, n - 1);
            let here = MonomialIndex::new(alg, n);
            let above = MonomialIndex::new(alg, n + 1);
            let out = diff_matrix(m, &here, &above);
            let inc = diff_matrix(m, &below, &here);
            here.len() - out.rank() - inc.rank()
        })
        .collect()
}

/// Σ_odd |y| − Σ_even (|x| − 1): the top degree of the cohomology of a pure
/// model with finite cohomology.
pub fn formal_dimension(m: &SullivanModel) -> i64 {
    m.generators()
        .iter()
        .map(|g| if g.is_odd() { g.degree } else { -(g.degree - 1) })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F0Verdict {
    pub is_f0: bool,
    pub equal_counts: bool,
    pub formal_dimension: i64,
    /// H^odd = 0 in degrees ≤ 2N.
    pub odd_vanishes: bool,
    /// H = 0 in degrees (N, 2N].
    pub vanishes_past_top: bool,
    pub table: CohomologyTable,
}

/// Decides the F₀ property of a pure model from its cohomology up to twice
/// the formal dimension.
pub fn f0_certify(m: &SullivanModel) -> Result<F0Verdict, CohomologyError> {
    let c = m.classify();
    if !c.pure {
        return Err(CohomologyError::NotPure);
    }
    let n = formal_dimension(m);
    let equal_counts = c.even_generators == c.odd_generators;
    let cutoff = (2 * n).max(0);
    let mut table = cdga_cohomology(m, cutoff);
    let odd_vanishes = (0..=cutoff).filter(|d| d % 2 == 1).all(|d| table.dim(d) == 0);
    let vanishes_past_top = n >= 0 && (n + 1..=cutoff).all(|d| table.dim(d) == 0);
    let is_f0 = equal_counts && odd_vanishes && vanishes_past_top;
    if is_f0 {
        table.certified_zero_beyond = Some(n);
    }
    Ok(F0Verdict {
        is_f0,
        equal_counts,
        formal_dimension: n,
        odd_vanishes,
        vanishes_past_top,
        table,
    })
}

/// ℚ[x₁..x_n]/(f₁..f_m) with even-degree generators and homogeneous relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGradedRing {
    algebra: FreeAlgebra,
    relations: Vec<AlgElement>,
}

/// One degree of a quotient ring: the ideal span and a monomial basis of the quotient.
struct QuotientDegree {
    ambient: MonomialIndex,
    ideal: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl QuotientDegree {
    /// Coordinates of `a` in the quotient basis.
    fn reduce(&self, a: &AlgElement) -> Vec<Rational> {
        let target = self.ambient.coords(a);
        let mut span: Vec<Vec<Rational>> = self
            .basis
            .iter()
            .map(|&k| {
                let mut e = vec![Rational::zero(); self.ambient.len()];
                e[k] = Rational::one();
                e
            })
            .collect();
        span.extend(self.ideal.iter().cloned());
        let coeffs = linalg::in_span(&span, &target)
            .expect("lengths agree")
            .expect("quotient basis and ideal span the degree");
        coeffs[..self.basis.len()].to_vec()
    }
}

impl FiniteGradedRing {
    pub fn new(gens: Vec<Generator>, relations: Vec<AlgElement>) -> Result<Self, CohomologyError> {
        if let Some(g) = gens.iter().find(|g| g.is_odd()) {
            return Err(CohomologyError::OddRingGenerator(g.name.clone()));
        }
        Ok(FiniteGradedRing {
            algebra: FreeAlgebra::new(gens),
            relations,
        })
    }

    /// ℚ[x]/(d y) for a pure model Λ(x)⊗Λ(y) whose even generators come first
    /// or are interleaved; odd generators are dropped.
    pub fn from_pure_model(m: &SullivanModel) -> Result<Self, CohomologyError> {
        if !m.classify().pure {
            return Err(CohomologyError::NotPure);
        }
        let gens = m.generators();
        let even: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_odd()).collect();
        let mut position = vec![usize::MAX; gens.len()];
        for (k, &i) in even.iter().enumerate() {
            position[i] = k;
        }
        let ring_gens: Vec<Generator> = even.iter().map(|&i| gens[i].clone()).collect();
        let target = FreeAlgebra::new(ring_gens.clone());
        let relations = (0..gens.len())
            .filter(|&i| gens[i].is_odd())
            .map(|i| crate::model::remap(&target, m.diff_of(i), &position))
            .collect();
        FiniteGradedRing::new(ring_gens, relations)
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn relations(&self) -> &[AlgElement] {
        &self.relations
    }

    fn degree(&self, n: i64) -> QuotientDegree {
        let ambient = MonomialIndex::new(&self.algebra, n);
        let mut ideal = Vec::new();
        for f in &self.relations {
            let Homogeneity::Degree(df) = self.algebra.homogeneity(f) else { continue };
            for m in self.algebra.monomial_basis(n - df) {
                let p = self.algebra.multiply(&AlgElement::monomial(m, Rational::one()), f);
                ideal.push(ambient.coords(&p));
            }
        }
        let units: Vec<Vec<Rational>> = (0..ambient.len())
            .map(|k| {
                let mut e = vec![Rational::zero(); ambient.len()];
                e[k] = Rational::one();
                e
            })
            .collect();
        let basis = linalg::quotient_basis(ambient.len(), &ideal, &units);
        QuotientDegree { ambient, ideal, basis }
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < 0 {
            0
        } else {
            self.degree(n).basis.len()
        }
    }

    /// Monomials spanning the quotient in degree n.
    pub fn basis(&self, n: i64) -> Vec<Monomial> {
        let q = self.degree(n);
        q.basis.iter().map(|&k| q.ambient.basis[k].clone()).collect()
    }

    /// Σ(|f_j| − |x_i|), the top degree when the relations form a regular sequence.
    pub fn socle_bound(&self) -> i64 {
        let rel: i64 = self
            .relations
            .iter()
            .filter_map(|f| match self.algebra.homogeneity(f) {
                Homogeneity::Degree(d) => Some(d),
                _ => None,
            })
            .sum();
        let gens: i64 = self.algebra.generators().iter().map(|g| g.degree).sum();
        rel - gens
    }

    /// True when the quotient vanishes on (N, 2N] for the socle bound N.
    pub fn appears_finite(&self) -> bool {
        let n = self.socle_bound();
        n >= 0 && (n + 1..=2 * n.max(1)).all(|d| self.dim(d) == 0)
    }
}

/// Degree −k derivations of a quotient ring, with a basis of witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegDerivations {
    pub k: i64,
    pub dim: usize,
    /// Each witness lists θ(x_i) for every ring generator.
    pub witnesses: Vec<Vec<AlgElement>>,
}

/// θ is determined by θ(x_i) ∈ R^{|x_i|−k} and is well defined iff every
/// θ(f_j) vanishes in R; this is a homogeneous linear system.
pub fn neg_derivations_of_ring(r: &FiniteGradedRing, k: i64) -> NegDerivations {
    let alg = &r.algebra;
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for (i, g) in alg.generators().iter().enumerate() {
        for m in r.basis(g.degree - k) {
            unknowns.push((i, m));
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for f in &r.relations {
        let Homogeneity::Degree(df) = alg.homogeneity(f) else { continue };
        let q = r.degree(df - k);
        if q.basis.is_empty() {
            continue;
        }
        let cols: Vec<Vec<Rational>> = unknowns
            .iter()
            .map(|(i, m)| {
                let img = AlgElement::monomial(m.clone(), Rational::one());
                let theta_f = alg.leibniz_extend(|g| if g == *i { Some(&img) } else { None }, k, f);
                q.reduce(&theta_f)
            })
            .collect();
        for row in 0..q.basis.len() {
            rows.push(cols.iter().map(|c| c[row].clone()).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns.len())
            .map(|j| {
                let mut e = vec![Rational::zero(); unknowns.len()];
                e[j] = Rational::one();
                e
            })
            .collect()
    } else {
        RatMatrix::from_rows(rows).expect("equal row lengths").kernel_basis()
    };
    let witnesses = kernel
        .iter()
        .map(|v| {
            let mut images = vec![AlgElement::zero(); alg.len()];
            for ((i, m), c) in unknowns.iter().zip(v) {
                images[*i].add_term(m.clone(), c.clone());
            }
            images
        })
        .collect();
    NegDerivations {
        k,
        dim: kernel.len(),
        witnesses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalperinVerdict {
    pub holds: bool,
    /// (k, dim of degree −k derivations) for k = 1..=max|x_i|.
    pub dims: Vec<(i64, usize)>,
    pub witness: Option<NegDerivations>,
}

/// Der^{<0} R = 0, scanned over k = 1..=max|x_i|.
pub fn halperin_ring_test(r: &FiniteGradedRing) -> HalperinVerdict {
    let top = r.algebra.generators().iter().map(|g| g.degree).max().unwrap_or(0);
    let mut dims = Vec::new();
    let mut witness = None;
    for k in 1..=top {
        let nd = neg_derivations_of_ring(r, k);
        dims.push((k, nd.dim));
        if nd.dim > 0 && witness.is_none() {
            witness = Some(nd);
        }
    }
    HalperinVerdict {
        holds: witness.is_none(),
        dims,
        witness,
    }
}

/// The negative-derivation test on the cohomology ring of an F₀ model.
pub fn halperin_test(m: &SullivanModel) -> Result<HalperinVerdict, CohomologyError> {
    let v = f0_certify(m)?;
    if !v.is_f0 {
        let reason = if !v.equal_counts {
            "unequal numbers of even and odd generators"
        } else if !v.odd_vanishes {
            "odd cohomology is nonzero"
        } else {
            "cohomology does not vanish above the formal dimension"
        };
        return Err(CohomologyError::NotF0(reason.to_string()));
    }
    Ok(halperin_ring_test(&FiniteGradedRing::from_pure_model(m)?))
}

/// A KS extension ℚ[t₁..t_r]⊗ΛV with |t_i| = 2, D t_i = 0 and D v ≡ d v mod (t).
/// Generators are ordered V first, then t₁..t_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorelExtension {
    base: SullivanModel,
    rank: usize,
    total: SullivanModel,
}

impl BorelExtension {
    /// `images` holds D of every generator of the extension: one entry per
    /// generator of `base`, then one per t_i.
    pub fn new(base: &SullivanModel, rank: usize, images: Vec<AlgElement>) -> Result<Self, CohomologyError> {
        let n = base.len();
        let mut gens = base.generators().to_vec();
        for i in 1..=rank {
            gens.push(Generator::new(format!("t{i}"), 2));
        }
        if images.len() != n + rank {
            return Err(CohomologyError::NotAKSExtension(format!(
                "expected {} images, found {}",
                n + rank,
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate().skip(n) {
            if !img.is_zero() {
                return Err(CohomologyError::NotAKSExtension(format!("D {} must be 0", gens[i].name)));
            }
        }
        let total = SullivanModel::new(gens, images)?;
        for i in 0..n {
            let img = total.diff_of(i);
            let name = &total.generators()[i].name;
            let expected = total.generators()[i].degree + 1;
            match total.algebra().homogeneity(img) {
                Homogeneity::Zero => {}
                Homogeneity::Degree(d) if d == expected => {}
                _ => {
                    return Err(CohomologyError::NotAKSExtension(format!(
                        "D {name} must have degree {expected}"
                    )))
                }
            }
            if img.truncate_to(n) != *base.diff_of(i) {
                return Err(CohomologyError::NotAKSExtension(format!(
                    "D {name} is not congruent to d {name} modulo (t)"
                )));
            }
            if !total.d(img).is_zero() {
                return Err(CohomologyError::NotAKSExtension(format!("D(D {name}) != 0")));
            }
        }
        Ok(BorelExtension {
            base: base.clone(),
            rank,
            total,
        })
    }

    pub fn base(&self) -> &SullivanModel {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn total(&self) -> &SullivanModel {
        &self.total
    }

    /// The images D v for v ∈ V.
    pub fn images(&self) -> &[AlgElement] {
        &self.total.diff_images()[..self.base.len()]
    }
}

/// Bounded-degree cohomology of a Borel extension. Says nothing about
/// degrees above the cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelReport {
    pub table: CohomologyTable,
    /// Nonzero cohomology in one of the two top degrees, as happens when a
    /// polynomial generator survives.
    pub growth_at_cutoff: bool,
}

pub fn borel_extend(
    m: &SullivanModel,
    rank: usize,
    images: Vec<AlgElement>,
    cutoff: i64,
) -> Result<(BorelExtension, BorelReport), CohomologyError> {
    let ext = BorelExtension::new(m, rank, images)?;
    let report = borel_report(&ext, cutoff);
    Ok((ext, report))
}

pub fn borel_report(ext: &BorelExtension, cutoff: i64) -> BorelReport {
    let table = cdga_cohomology(&ext.total, cutoff);
    let growth_at_cutoff = table.dim(cutoff) > 0 || table.dim(cutoff - 1) > 0;
    BorelReport { table, growth_at_cutoff }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn gen(name: &str, d: i64) -> Generator {
        Generator::new(name, d)
    }

    fn mono(e: &[u32]) -> AlgElement {
        AlgElement::monomial(Monomial::from_exponents(e.to_vec()), Rational::one())
    }

    #[test]
    fn spheres() {
        let t = cdga_cohomology(&corpus::s3(), 6);
        assert_eq!(t.dims, vec![1, 0, 0, 1, 0, 0, 0]);
        let t = cdga_cohomology(&corpus::s4(), 12);
        let expected: Vec<usize> = (0..=12).map(|n| usize::from(n == 0 || n == 4)).collect();
        assert_eq!(t.dims, expected);
        assert_eq!(t.reps[0], vec![AlgElement::one()]);
    }

    #[test]
    fn counter_two_base_fixture() {
        let base = corpus::counter_two().base();
        assert_eq!(cdga_cohomology(&base, 8).dims, vec![1, 0, 0, 2, 0, 0, 0, 0, 2]);
        assert_eq!(cohomology_dims_by_rank(&base, 8), vec![1, 0, 0, 2, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn f0_examples() {
        let v = f0_certify(&corpus::s4()).unwrap();
        assert!(v.is_f0);
        assert_eq!(v.formal_dimension, 4);
        assert_eq!(f0_certify(&corpus::counter_two().base()), Err(CohomologyError::NotPure));
        assert!(!f0_certify(&corpus::su6_relative().base()).unwrap().is_f0);
        let s7 = f0_certify(&corpus::hopf_total()).unwrap();
        assert!(!s7.is_f0 && !s7.odd_vanishes);
        assert_eq!(s7.table.dim(7), 1);
    }

    #[test]
    fn quotient_rings() {
        let r = FiniteGradedRing::new(vec![gen("x", 4)], vec![mono(&[2])]).unwrap();
        assert_eq!(neg_derivations_of_ring(&r, 4).dim, 0);
        let cp2 = FiniteGradedRing::new(vec![gen("x", 2)], vec![mono(&[3])]).unwrap();
        for k in 1..=4 {
            assert_eq!(neg_derivations_of_ring(&cp2, k).dim, 0);
        }
        let two = FiniteGradedRing::new(vec![gen("x", 2), gen("y", 2)], vec![mono(&[2]), mono(&[0, 2])]).unwrap();
        assert_eq!(neg_derivations_of_ring(&two, 2).dim, 0);
        assert_eq!((0..=6).map(|n| two.dim(n)).collect::<Vec<_>>(), vec![1, 0, 2, 0, 1, 0, 0]);
        assert!(two.appears_finite());
    }

    #[test]
    fn halperin_on_spheres_and_cp2() {
        for m in [corpus::s2(), corpus::s4(), corpus::s6(), corpus::cp2()] {
            assert!(halperin_test(&m).unwrap().holds);
        }
        assert!(matches!(
            halperin_test(&corpus::counter_two().base()),
            Err(CohomologyError::NotPure | CohomologyError::NotF0(_))
        ));
    }

    #[test]
    fn negative_derivation_on_a_non_complete_intersection() {
        let r = FiniteGradedRing::new(
            vec![gen("x", 2), gen("y", 4)],
            vec![mono(&[2]), mono(&[1, 1]), mono(&[0, 2])],
        )
        .unwrap();
        let v = halperin_ring_test(&r);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.k, 2);
        assert!(w.witnesses.iter().any(|imgs| imgs[1] == AlgElement::generator(0)));
    }

    #[test]
    fn borel_circle_action_on_s3() {
        let s3 = corpus::s3();
        let t2 = mono(&[0, 2]);
        let (ext, report) = borel_extend(&s3, 1, vec![t2, AlgElement::zero()], 8).unwrap();
        assert_eq!(ext.total().generators()[1].name, "t1");
        assert_eq!(report.table.dims, vec![1, 0, 1, 0, 0, 0, 0, 0, 0]);
        assert!(!report.growth_at_cutoff);
    }

    #[test]
    fn borel_product_grows() {
        let s3 = corpus::s3();
        let (_, report) = borel_extend(&s3, 1, vec![AlgElement::zero(), AlgElement::zero()], 8).unwrap();
        assert_eq!(report.table.dims, vec![1, 0, 1, 1, 1, 1, 1, 1, 1]);
        assert!(report.growth_at_cutoff);
    }

    #[test]
    fn borel_rejections() {
        let s3 = corpus::s3();
        let bad_t = BorelExtension::new(&s3, 1, vec![AlgElement::zero(), mono(&[0, 1])]);
        assert!(matches!(bad_t, Err(CohomologyError::NotAKSExtension(_))));
        let s4 = corpus::s4();
        // D y = x² + t⁴ is congruent to d y; D y = t⁴ is not.
        let ok = BorelExtension::new(&s4, 1, vec![AlgElement::zero(), &mono(&[2]) + &mono(&[0, 0, 4]), AlgElement::zero()]);
        assert!(ok.is_ok());
        let bad = BorelExtension::new(&s4, 1, vec![AlgElement::zero(), mono(&[0, 0, 4]), AlgElement::zero()]);
        assert!(matches!(bad, Err(CohomologyError::NotAKSExtension(_))));
    }
}
