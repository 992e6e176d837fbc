//! Derivation-level analysis of a relative model (ΛV, d) → (ΛV⊗ΛW, D).
//!
//! Base generators come first in the total model, so a derivation of ΛV is
//! already a derivation of the total algebra once every W-generator is sent
//! to zero. The fiber part Der(ΛW, ΛV⊗ΛW) is the subcomplex of elementary
//! derivations (w, m) with w ∈ W.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgElement, Monomial};
use crate::cohomology::{cdga_cohomology, CohomologyTable};
use crate::der::{der_boundary, der_bracket, DerBasis, DerComplex, Derivation, HomologyClass};
use crate::linalg;
use crate::model::{RelativeModel, Separability};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("not separable: fiber generator {fiber} has lower degree than base generator {base}")]
    NotSeparable { fiber: String, base: String },
    #[error("derivation is not a cycle of the base derivation complex")]
    NotACycle,
    #[error("base model is not a single odd-degree generator")]
    BaseNotOddSphere,
    #[error("cohomology cutoff {given} is below the needed degree {needed}")]
    CutoffInsufficient { needed: i64, given: i64 },
}

fn require_separable(rm: &RelativeModel) -> Result<(), FibrationError> {
    match rm.separability() {
        Separability::Separable => Ok(()),
        Separability::NotSeparable { fiber, base } => {
            let g = rm.total().generators();
            Err(FibrationError::NotSeparable {
                fiber: g[fiber].name.clone(),
                base: g[base].name.clone(),
            })
        }
    }
}

/// proj_V ∘ σ without the separability check.
fn project(rm: &RelativeModel, sigma: &Derivation) -> Derivation {
    let k = rm.base_len();
    let mut out = Derivation::zero(sigma.shift());
    for (&g, img) in sigma.images() {
        if g < k {
            out.set_image(g, img.with_filter(|m| m.lies_below(k)));
        }
    }
    out
}

/// b_f(σ) = proj_V ∘ σ, restricted to the base generators.
pub fn b_f_project(rm: &RelativeModel, sigma: &Derivation) -> Result<Derivation, FibrationError> {
    require_separable(rm)?;
    Ok(project(rm, sigma))
}

/// The fiber component of a derivation of the total model.
pub fn fiber_part(rm: &RelativeModel, sigma: &Derivation) -> Derivation {
    sigma.restrict(|g| !rm.is_base(g))
}

/// The component supported on base generators.
pub fn base_part(rm: &RelativeModel, sigma: &Derivation) -> Derivation {
    sigma.restrict(|g| rm.is_base(g))
}

/// τ(σ): the fiber component of ∂_X applied to σ (a base derivation is
/// zero-extended on W automatically).
pub fn tau(rm: &RelativeModel, sigma: &Derivation) -> Derivation {
    fiber_part(rm, &der_boundary(rm.total(), sigma))
}

/// Outcome of checking that b_f is a DGL map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionCheck {
    /// b_f commutes with ∂ on every elementary derivation and preserves every
    /// elementary bracket.
    Pass { derivations: usize, brackets: usize },
    /// b_f([(w,1),(v,w)]) = b_f(v,1) ≠ 0 while [b_f(w,1), b_f(v,w)] = 0.
    Fail {
        fiber: usize,
        base: usize,
        left: Derivation,
        right: Derivation,
        bracket: Derivation,
    },
}

impl ProjectionCheck {
    pub fn passed(&self) -> bool {
        matches!(self, ProjectionCheck::Pass { .. })
    }
}

pub fn strict_projection_check(rm: &RelativeModel) -> ProjectionCheck {
    let total = rm.total();
    let alg = total.algebra();
    if let Separability::NotSeparable { fiber, base } = rm.separability() {
        let w = Monomial::generator(fiber);
        let left = Derivation::elementary(alg, fiber, Monomial::one());
        let right = Derivation::elementary(alg, base, w);
        let bracket = der_bracket(total, &left, &right);
        debug_assert!(!project(rm, &bracket).is_zero());
        return ProjectionCheck::Fail {
            fiber,
            base,
            left,
            right,
            bracket,
        };
    }
    let base = rm.base();
    let top = total.max_degree();
    let mut elements = Vec::new();
    for n in 1..=top {
        elements.extend(DerBasis::new(total, n, |_| true).derivations(alg));
    }
    for s in &elements {
        let lhs = project(rm, &der_boundary(total, s));
        let rhs = der_boundary(&base, &project(rm, s));
        assert_eq!(lhs, rhs, "b_f fails to commute with the boundary");
    }
    let mut brackets = 0;
    for s in &elements {
        for t in &elements {
            if s.shift() + t.shift() > top {
                continue;
            }
            let lhs = project(rm, &der_bracket(total, s, t));
            let rhs = der_bracket(&base, &project(rm, s), &project(rm, t));
            assert_eq!(lhs, rhs, "b_f fails to preserve a bracket");
            brackets += 1;
        }
    }
    ProjectionCheck::Pass {
        derivations: elements.len(),
        brackets,
    }
}

/// The three derivation complexes attached to a relative model.
#[derive(Debug, Clone)]
pub struct FibrationComplexes {
    rm: RelativeModel,
    base: DerComplex,
    full: DerComplex,
    fiber: DerComplex,
}

impl FibrationComplexes {
    pub fn new(rm: &RelativeModel) -> Self {
        let k = rm.base_len();
        FibrationComplexes {
            rm: rm.clone(),
            base: DerComplex::full(&rm.base()),
            full: DerComplex::full(rm.total()),
            fiber: DerComplex::with_sources(rm.total(), move |g| g >= k),
        }
    }

    pub fn relative(&self) -> &RelativeModel {
        &self.rm
    }

    pub fn base(&self) -> &DerComplex {
        &self.base
    }

    pub fn full(&self) -> &DerComplex {
        &self.full
    }

    pub fn fiber(&self) -> &DerComplex {
        &self.fiber
    }

    /// δ_f on a base cycle of degree ≥ 2.
    pub fn delta(&self, sigma: &Derivation) -> Result<DeltaImage, FibrationError> {
        require_separable(&self.rm)?;
        if !self.base.is_cycle(sigma) {
            return Err(FibrationError::NotACycle);
        }
        let image = der_boundary(self.rm.total(), sigma);
        assert!(
            base_part(&self.rm, &image).is_zero(),
            "the base component of the boundary of a base cycle must vanish"
        );
        let zero = self.fiber.is_boundary(&image);
        Ok(DeltaImage {
            degree: sigma.shift() - 1,
            image,
            zero,
        })
    }

    /// Rank of δ_f: H_n(base) → H_{n−1}(fiber), for n ≥ 2.
    pub fn delta_rank(&self, n: i64) -> usize {
        if n < 2 {
            return 0;
        }
        let images: Vec<Derivation> = self
            .base
            .homology(n)
            .iter()
            .map(|c| self.delta(&c.representative).expect("separable with cycle input").image)
            .collect();
        self.fiber.rank_modulo_boundaries(n - 1, &images)
    }

    /// Rank bookkeeping of the long exact sequence at H_n(full), n ≥ 2.
    pub fn les_row(&self, n: i64) -> LesRow {
        LesRow {
            degree: n,
            full: self.full.homology_dim(n),
            base: self.base.homology_dim(n),
            fiber: self.fiber.homology_dim(n),
            delta_in: self.delta_rank(n),
            delta_out: self.delta_rank(n + 1),
        }
    }
}

/// δ_f applied to a representative: the fiber cycle and whether its class vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaImage {
    pub degree: i64,
    pub image: Derivation,
    pub zero: bool,
}

/// δ_f([σ]) for a ∂_Y-cycle σ of ΛV.
pub fn connecting_delta(rm: &RelativeModel, sigma: &Derivation) -> Result<DeltaImage, FibrationError> {
    FibrationComplexes::new(rm).delta(sigma)
}

/// One row of the exactness check
/// dim H_n(full) = (dim H_n(base) − rank δ_n) + (dim H_n(fiber) − rank δ_{n+1}).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LesRow {
    pub degree: i64,
    pub full: usize,
    pub base: usize,
    pub fiber: usize,
    /// rank of δ_f: H_n(base) → H_{n−1}(fiber)
    pub delta_in: usize,
    /// rank of δ_f: H_{n+1}(base) → H_n(fiber)
    pub delta_out: usize,
}

impl LesRow {
    pub fn holds(&self) -> bool {
        self.full + self.delta_in + self.delta_out == self.base + self.fiber
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionReport {
    pub exists: bool,
    /// Degrees 2..=scanned_up_to were examined.
    pub scanned_up_to: i64,
    /// Base classes with δ_f ≠ 0, with their images.
    pub failing: Vec<(HomologyClass, Derivation)>,
    /// Degree-1 base classes, left out of the test.
    pub degree_one: Vec<HomologyClass>,
}

/// The section criterion δ_f = 0, tested on a basis of H_{≥2}(Der ΛV).
pub fn section_exists(rm: &RelativeModel) -> Result<SectionReport, FibrationError> {
    require_separable(rm)?;
    let cx = FibrationComplexes::new(rm);
    let top = rm.base().max_degree();
    let mut failing = Vec::new();
    for n in 2..=top {
        for class in cx.base.homology(n) {
            let d = cx.delta(&class.representative)?;
            if !d.zero {
                failing.push((class, d.image));
            }
        }
    }
    Ok(SectionReport {
        exists: failing.is_empty(),
        scanned_up_to: top,
        failing,
        degree_one: cx.base.homology(1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OddSphereVerdict {
    /// No differential D w involves v.
    FibreTrivial,
    /// ∂_X(v,1) ≠ 0; `class_nonzero` tells whether it survives in homology.
    NullHomotopic {
        generator: usize,
        witness: Derivation,
        class_nonzero: bool,
    },
}

/// Trichotomy over an odd sphere: either the extension is trivial, or
/// ∂_X(v,1) has a nonzero component on some fiber generator.
pub fn odd_sphere_triviality(rm: &RelativeModel) -> Result<OddSphereVerdict, FibrationError> {
    let base = rm.base();
    if base.len() != 1 || !base.generators()[0].is_odd() {
        return Err(FibrationError::BaseNotOddSphere);
    }
    require_separable(rm)?;
    let alg = rm.total().algebra();
    let v1 = Derivation::elementary(alg, 0, Monomial::one());
    let witness = der_boundary(rm.total(), &v1);
    let Some((&generator, _)) = witness.images().iter().next() else {
        return Ok(OddSphereVerdict::FibreTrivial);
    };
    let k = rm.base_len();
    let fiber = DerComplex::with_sources(rm.total(), move |g| g >= k);
    Ok(OddSphereVerdict::NullHomotopic {
        generator,
        class_nonzero: !fiber.is_boundary(&witness),
        witness,
    })
}

/// H_n(Der(ΛW, ΛV⊗ΛW)) ≅ π_{n+1}(Baut₁f)_ℚ.
pub fn rel_der_homology(rm: &RelativeModel, n: i64) -> (usize, Vec<HomologyClass>) {
    let k = rm.base_len();
    let classes = DerComplex::with_sources(rm.total(), move |g| g >= k).homology(n);
    (classes.len(), classes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiOddReport {
    pub vanishes: bool,
    pub scanned_up_to: i64,
    pub witnesses: Vec<HomologyClass>,
}

/// π_odd(Baut₁f)_ℚ = H_even(fiber part) = 0, scanned up to max |w|.
pub fn pi_odd_vanishing(rm: &RelativeModel) -> Result<PiOddReport, FibrationError> {
    require_separable(rm)?;
    let k = rm.base_len();
    let fiber = DerComplex::with_sources(rm.total(), move |g| g >= k);
    let top = fiber.top_degree();
    let witnesses: Vec<HomologyClass> = (2..=top).step_by(2).flat_map(|n| fiber.homology(n)).collect();
    Ok(PiOddReport {
        vanishes: witnesses.is_empty(),
        scanned_up_to: top,
        witnesses,
    })
}

fn fiber_top(rm: &RelativeModel) -> i64 {
    rm.fiber_generators().iter().map(|g| g.degree).max().unwrap_or(0)
}

fn check_cutoff(rm: &RelativeModel, n: i64, cutoff: i64) -> Result<(), FibrationError> {
    let needed = fiber_top(rm) - n;
    if needed > cutoff {
        return Err(FibrationError::CutoffInsufficient { needed, given: cutoff });
    }
    Ok(())
}

/// Σ_{i−j=n, i≥1} dim Der_i(ΛW) · dim H^j(ΛV).
pub fn fiber_dims_formula(rm: &RelativeModel, n: i64, cutoff: i64) -> Result<usize, FibrationError> {
    check_cutoff(rm, n, cutoff)?;
    let table = cdga_cohomology(&rm.base(), cutoff);
    Ok(formula_from_table(rm, n, &table))
}

fn formula_from_table(rm: &RelativeModel, n: i64, table: &CohomologyTable) -> usize {
    let fiber = rm.fiber_model();
    (1..=fiber_top(rm))
        .map(|i| {
            let j = i - n;
            if j < 0 {
                return 0;
            }
            DerBasis::new(&fiber, i, |_| true).len() * table.dim(j)
        })
        .sum()
}

/// The span of (w, m·h) with m a monomial of ΛW and h a chosen cocycle
/// representative of H*(ΛV), inside the fiber derivation complex.
#[derive(Debug, Clone)]
pub struct RhoImage {
    fiber: DerComplex,
    /// Index n holds coordinate vectors in the degree-n fiber basis.
    chains: Vec<Vec<Vec<Rational>>>,
}

impl RhoImage {
    pub fn new(rm: &RelativeModel, cutoff: i64) -> Result<Self, FibrationError> {
        check_cutoff(rm, 0, cutoff)?;
        let table = cdga_cohomology(&rm.base(), cutoff);
        let k = rm.base_len();
        let total = rm.total();
        let alg = total.algebra();
        let fiber = DerComplex::with_sources(total, move |g| g >= k);
        let fiber_alg = alg.clone();
        let top = fiber.top_degree();
        let mut chains: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); (top + 1).max(0) as usize];
        for w in rm.fiber_indices() {
            let dw = alg.degree_of_gen(w);
            for j in 0..=dw {
                for h in table.reps(j) {
                    for md in 0..=(dw - j) {
                        let n = dw - j - md;
                        if n > top {
                            continue;
                        }
                        for m in fiber_monomials(rm, md) {
                            let mh = fiber_alg.multiply(&AlgElement::monomial(m, Rational::from_integer(1.into())), h);
                            let d = Derivation::sending(alg, w, mh);
                            let coords = fiber
                                .basis(n)
                                .and_then(|b| b.coords(&d))
                                .expect("ρ-image lies in the fiber complex");
                            chains[n as usize].push(coords);
                        }
                    }
                }
            }
        }
        Ok(RhoImage { fiber, chains })
    }

    pub fn chain_dim(&self, n: i64) -> usize {
        self.vectors(n).map_or(0, |v| linalg::rank_of(self.len(n), v))
    }

    fn len(&self, n: i64) -> usize {
        self.fiber.basis(n).map_or(0, DerBasis::len)
    }

    fn vectors(&self, n: i64) -> Option<&Vec<Vec<Rational>>> {
        if n < 0 {
            None
        } else {
            self.chains.get(n as usize)
        }
    }

    fn boundaries(&self, n: i64) -> Vec<Vec<Rational>> {
        let Some(b) = self.fiber.slice(n).and_then(|s| s.boundary.as_ref()) else {
            return Vec::new();
        };
        self.vectors(n)
            .map(|vs| vs.iter().map(|v| b.mul_vec(v).expect("lengths agree")).collect())
            .unwrap_or_default()
    }

    /// ∂ maps the span in degree n into the span in degree n − 1.
    pub fn is_subcomplex(&self) -> bool {
        (1..self.chains.len() as i64).all(|n| {
            let empty = Vec::new();
            let below = self.vectors(n - 1).unwrap_or(&empty);
            self.boundaries(n).iter().all(|b| {
                b.iter().all(Zero::is_zero)
                    || linalg::in_span(below, b).expect("lengths agree").is_some()
            })
        })
    }

    /// Homology of the span; in degree 1 only cycles count, as in the full complex.
    pub fn homology_dim(&self, n: i64) -> usize {
        if n < 1 {
            return 0;
        }
        let rank_out = linalg::rank_of(self.len(n - 1), &self.boundaries(n));
        let rank_in = linalg::rank_of(self.len(n), &self.boundaries(n + 1));
        self.chain_dim(n) - rank_out - rank_in
    }
}

fn fiber_monomials(rm: &RelativeModel, degree: i64) -> Vec<Monomial> {
    let k = rm.base_len();
    rm.total()
        .algebra()
        .monomial_basis(degree)
        .into_iter()
        .filter(|m| m.exponents().iter().take(k).all(|&e| e == 0))
        .collect()
}
