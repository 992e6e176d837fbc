//! The derivation complex Der M = ⊕_{i>0} Der_i M of a Sullivan model.
//!
//! A derivation of shift `i` lowers degree by `i` and is determined by its
//! values on generators. The boundary is ∂σ = d∘σ − (−1)^i σ∘d and the
//! bracket is [σ,τ] = σ∘τ − (−1)^{|σ||τ|} τ∘σ. In degree 1 only ∂-cycles are
//! chains, so H₁ = ker(∂: Der₁ → Der₀) / ∂(Der₂).

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgElement, FreeAlgebra, Monomial};
use crate::linalg::{self, RatMatrix};
use crate::model::SullivanModel;
use crate::Rational;

/// A derivation of a free CDGA, stored by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    shift: i64,
    images: BTreeMap<usize, AlgElement>,
}

impl Derivation {
    pub fn zero(shift: i64) -> Self {
        Derivation {
            shift,
            images: BTreeMap::new(),
        }
    }

    /// The elementary derivation (v, m): v ↦ m, other generators ↦ 0.
    pub fn elementary(alg: &FreeAlgebra, v: usize, m: Monomial) -> Self {
        let shift = alg.degree_of_gen(v) - alg.monomial_degree(&m);
        let mut d = Derivation::zero(shift);
        d.set_image(v, AlgElement::monomial(m, Rational::one()));
        d
    }

    /// (v, f) for an arbitrary homogeneous f.
    pub fn sending(alg: &FreeAlgebra, v: usize, f: AlgElement) -> Self {
        let shift = match alg.homogeneity(&f) {
            crate::algebra::Homogeneity::Degree(d) => alg.degree_of_gen(v) - d,
            _ => alg.degree_of_gen(v),
        };
        let mut d = Derivation::zero(shift);
        d.set_image(v, f);
        d
    }

    pub fn from_images(shift: i64, images: BTreeMap<usize, AlgElement>) -> Self {
        let mut d = Derivation::zero(shift);
        for (k, v) in images {
            d.set_image(k, v);
        }
        d
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn image(&self, gen: usize) -> Option<&AlgElement> {
        self.images.get(&gen)
    }

    pub fn images(&self) -> &BTreeMap<usize, AlgElement> {
        &self.images
    }

    pub fn set_image(&mut self, gen: usize, value: AlgElement) {
        if value.is_zero() {
            self.images.remove(&gen);
        } else {
            self.images.insert(gen, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    pub fn add_scaled(&mut self, other: &Derivation, c: &Rational) {
        for (&g, img) in &other.images {
            let mut cur = self.images.remove(&g).unwrap_or_default();
            cur.add_scaled(img, c);
            self.set_image(g, cur);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Derivation {
        let mut out = Derivation::zero(self.shift);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    /// Keeps only the values on generators selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Derivation {
        Derivation {
            shift: self.shift,
            images: self
                .images
                .iter()
                .filter(|(&g, _)| keep(g))
                .map(|(&g, v)| (g, v.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, alg: &FreeAlgebra, a: &AlgElement) -> AlgElement {
        alg.leibniz_extend(|i| self.images.get(&i), self.shift, a)
    }

    /// Human-readable sum of elementary derivations, e.g. `(y,1) - 2*(x,z)`.
    pub fn display(&self, alg: &FreeAlgebra) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        let mut first = true;
        for (&g, img) in &self.images {
            for (m, c) in img.terms().rev() {
                let neg = c.is_negative();
                if first {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                first = false;
                let abs = c.abs();
                if !abs.is_one() {
                    s.push_str(&format!("{}*", abs));
                }
                s.push_str(&format!("({},{})", alg.generators()[g].name, alg.display_monomial(m)));
            }
        }
        s
    }
}

/// ∂σ = d∘σ − (−1)^i σ∘d. The result has shift i − 1; for i = 1 it is a
/// shift-0 derivation, which lies outside the positive complex.
pub fn der_boundary(m: &SullivanModel, sigma: &Derivation) -> Derivation {
    let alg = m.algebra();
    let i = sigma.shift();
    let sign = if i.rem_euclid(2) == 0 { -Rational::one() } else { Rational::one() };
    let mut out = Derivation::zero(i - 1);
    for g in 0..m.len() {
        let mut v = match sigma.image(g) {
            Some(img) => m.d(img),
            None => AlgElement::zero(),
        };
        let dg = m.diff_of(g);
        if !dg.is_zero() {
            v.add_scaled(&sigma.apply(alg, dg), &sign);
        }
        out.set_image(g, v);
    }
    out
}

/// [σ,τ] = σ∘τ − (−1)^{|σ||τ|} τ∘σ, evaluated on every generator.
pub fn der_bracket(m: &SullivanModel, sigma: &Derivation, tau: &Derivation) -> Derivation {
    let alg = m.algebra();
    let sign = if (sigma.shift() * tau.shift()).rem_euclid(2) == 0 {
        -Rational::one()
    } else {
        Rational::one()
    };
    let mut out = Derivation::zero(sigma.shift() + tau.shift());
    for g in 0..m.len() {
        let mut v = match tau.image(g) {
            Some(t) => sigma.apply(alg, t),
            None => AlgElement::zero(),
        };
        if let Some(s) = sigma.image(g) {
            v.add_scaled(&tau.apply(alg, s), &sign);
        }
        out.set_image(g, v);
    }
    out
}

/// Elementary derivations (v, m) of shift `shift` with v among the allowed
/// sources, ordered by generator then by descending monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerBasis {
    shift: i64,
    elements: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl DerBasis {
    pub fn new(m: &SullivanModel, shift: i64, source: impl Fn(usize) -> bool) -> Self {
        let alg = m.algebra();
        let mut elements = Vec::new();
        for (v, g) in alg.generators().iter().enumerate() {
            if !source(v) {
                continue;
            }
            for mono in alg.monomial_basis(g.degree - shift) {
                elements.push((v, mono));
            }
        }
        let index = elements.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        DerBasis { shift, elements, index }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(usize, Monomial)] {
        &self.elements
    }

    pub fn derivation(&self, alg: &FreeAlgebra, k: usize) -> Derivation {
        let (v, m) = &self.elements[k];
        Derivation::elementary(alg, *v, m.clone())
    }

    pub fn derivations(&self, alg: &FreeAlgebra) -> Vec<Derivation> {
        (0..self.len()).map(|k| self.derivation(alg, k)).collect()
    }

    /// Coordinates of `sigma`; `None` if it has a term outside this basis.
    pub fn coords(&self, sigma: &Derivation) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.len()];
        for (&g, img) in sigma.images() {
            for (m, c) in img.terms() {
                let k = *self.index.get(&(g, m.clone()))?;
                out[k] = c.clone();
            }
        }
        Some(out)
    }

    pub fn from_coords(&self, coords: &[Rational]) -> Derivation {
        let mut d = Derivation::zero(self.shift);
        let mut images: BTreeMap<usize, AlgElement> = BTreeMap::new();
        for ((v, m), c) in self.elements.iter().zip(coords) {
            images.entry(*v).or_default().add_term(m.clone(), c.clone());
        }
        for (g, img) in images {
            d.set_image(g, img);
        }
        d
    }

    pub fn labels(&self, alg: &FreeAlgebra) -> Vec<String> {
        self.elements
            .iter()
            .map(|(v, m)| format!("({},{})", alg.generators()[*v].name, alg.display_monomial(m)))
            .collect()
    }
}

/// The full elementary basis of Der_i, as listed in derivation tables. In
/// degree 1 this includes elements that are not ∂-cycles.
pub fn derivation_basis(m: &SullivanModel, i: i64) -> Vec<Derivation> {
    DerBasis::new(m, i, |_| true).derivations(m.algebra())
}

/// One degree of a derivation chain complex.
#[derive(Debug, Clone)]
pub struct ChainSlice {
    pub degree: i64,
    pub basis: DerBasis,
    /// Columns are ∂ of basis elements in the degree − 1 basis (absent in degree 0).
    pub boundary: Option<RatMatrix>,
}

/// A homology class: a cycle representative and its degree. Zero tests and
/// comparisons go through the owning [`DerComplex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    pub degree: i64,
    pub representative: Derivation,
}

/// The subcomplex of Der M spanned by elementary derivations whose source
/// generator satisfies a filter. With every generator allowed this is Der M;
/// with the fiber generators of a relative model it is Der(ΛW, ΛV⊗ΛW).
#[derive(Debug, Clone)]
pub struct DerComplex {
    model: SullivanModel,
    slices: Vec<ChainSlice>,
}

impl DerComplex {
    pub fn full(m: &SullivanModel) -> Self {
        Self::with_sources(m, |_| true)
    }

    pub fn with_sources(m: &SullivanModel, source: impl Fn(usize) -> bool + Copy) -> Self {
        let top = (0..m.len())
            .filter(|&v| source(v))
            .map(|v| m.generators()[v].degree)
            .max()
            .unwrap_or(0);
        let alg = m.algebra();
        let mut slices: Vec<ChainSlice> = Vec::new();
        for n in 0..=top {
            let basis = DerBasis::new(m, n, source);
            let boundary = if n == 0 {
                None
            } else {
                let prev = &slices[(n - 1) as usize].basis;
                let cols: Vec<Vec<Rational>> = (0..basis.len())
                    .map(|k| {
                        let b = der_boundary(m, &basis.derivation(alg, k));
                        prev.coords(&b)
                            .expect("the source filter is closed under the boundary")
                    })
                    .collect();
                Some(RatMatrix::from_columns(prev.len(), &cols).expect("consistent lengths"))
            };
            slices.push(ChainSlice {
                degree: n,
                basis,
                boundary,
            });
        }
        DerComplex {
            model: m.clone(),
            slices,
        }
    }

    pub fn model(&self) -> &SullivanModel {
        &self.model
    }

    /// Highest degree with a nonzero chain group.
    pub fn top_degree(&self) -> i64 {
        self.slices.len() as i64 - 1
    }

    pub fn slice(&self, n: i64) -> Option<&ChainSlice> {
        if n < 0 {
            None
        } else {
            self.slices.get(n as usize)
        }
    }

    pub fn basis(&self, n: i64) -> Option<&DerBasis> {
        self.slice(n).map(|s| &s.basis)
    }

    fn dim_chains(&self, n: i64) -> usize {
        self.basis(n).map_or(0, DerBasis::len)
    }

    /// Kernel of ∂ on the full elementary Der_n (n ≥ 1).
    pub fn cycle_basis(&self, n: i64) -> Vec<Vec<Rational>> {
        match self.slice(n).and_then(|s| s.boundary.as_ref()) {
            Some(b) => b.kernel_basis(),
            None => Vec::new(),
        }
    }

    /// ∂(Der_{n+1}) in degree-n coordinates.
    pub fn boundary_vectors(&self, n: i64) -> Vec<Vec<Rational>> {
        match self.slice(n + 1).and_then(|s| s.boundary.as_ref()) {
            Some(b) => (0..b.cols()).map(|c| b.column(c)).collect(),
            None => Vec::new(),
        }
    }

    /// Homology in degree n ≥ 1 with deterministic representatives.
    pub fn homology(&self, n: i64) -> Vec<HomologyClass> {
        if n < 1 || self.dim_chains(n) == 0 {
            return Vec::new();
        }
        let basis = self.basis(n).expect("degree in range");
        let cycles = self.cycle_basis(n);
        let bounds = self.boundary_vectors(n);
        linalg::quotient_basis(basis.len(), &bounds, &cycles)
            .into_iter()
            .map(|k| HomologyClass {
                degree: n,
                representative: basis.from_coords(&cycles[k]),
            })
            .collect()
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        if n < 1 {
            return 0;
        }
        let len = self.dim_chains(n);
        if len == 0 {
            return 0;
        }
        let rank_out = self.slice(n).and_then(|s| s.boundary.as_ref()).map_or(0, RatMatrix::rank);
        let rank_in = self.slice(n + 1).and_then(|s| s.boundary.as_ref()).map_or(0, RatMatrix::rank);
        len - rank_out - rank_in
    }

    pub fn contains(&self, sigma: &Derivation) -> bool {
        sigma.is_zero() || self.basis(sigma.shift()).and_then(|b| b.coords(sigma)).is_some()
    }

    pub fn is_cycle(&self, sigma: &Derivation) -> bool {
        der_boundary(&self.model, sigma).is_zero()
    }

    /// True when `sigma` is ∂ of a chain of this complex.
    pub fn is_boundary(&self, sigma: &Derivation) -> bool {
        self.solve_boundary(sigma).is_some()
    }

    /// Some q in this complex with ∂q = sigma.
    pub fn solve_boundary(&self, sigma: &Derivation) -> Option<Derivation> {
        let n = sigma.shift();
        if sigma.is_zero() {
            return Some(Derivation::zero(n + 1));
        }
        let target = self.basis(n)?.coords(sigma)?;
        let bounds = self.boundary_vectors(n);
        let coeffs = linalg::in_span(&bounds, &target).ok()??;
        match self.basis(n + 1) {
            Some(b) => Some(b.from_coords(&coeffs)),
            None => Some(Derivation::zero(n + 1)),
        }
    }

    /// Rank of a family of degree-n cycles modulo boundaries.
    pub fn rank_modulo_boundaries(&self, n: i64, family: &[Derivation]) -> usize {
        let Some(basis) = self.basis(n) else { return 0 };
        let bounds = self.boundary_vectors(n);
        let mut all = bounds.clone();
        for f in family {
            all.push(basis.coords(f).expect("family lies in the complex"));
        }
        linalg::rank_of(basis.len(), &all) - linalg::rank_of(basis.len(), &bounds)
    }

    pub fn same_class(&self, a: &Derivation, b: &Derivation) -> bool {
        self.is_boundary(&a.sub(b))
    }
}

/// dim H_n(Der M) together with representative classes.
pub fn der_homology(m: &SullivanModel, n: i64) -> (usize, Vec<HomologyClass>) {
    let classes = DerComplex::full(m).homology(n);
    (classes.len(), classes)
}

/// n ↦ dim π_n(Baut₁X)_ℚ = dim H_{n−1}(Der M) over an inclusive range n ≥ 2.
pub fn pi_aut_dims(m: &SullivanModel, range: std::ops::RangeInclusive<i64>) -> Vec<(i64, usize)> {
    let c = DerComplex::full(m);
    range
        .filter(|&n| n >= 2)
        .map(|n| (n, c.homology_dim(n - 1)))
        .collect()
}
