//! Sullivan models (ΛV, d) and relative models (ΛV, d) → (ΛV⊗ΛW, D).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{AlgElement, FreeAlgebra, Generator, Homogeneity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("generator {name} has degree {degree}; degrees must be at least {min}")]
    DegreeTooLow { name: String, degree: i64, min: i64 },
    #[error("expected {expected} differential images, found {found}")]
    DiffLength { expected: usize, found: usize },
    #[error("differential image of {0} mentions a generator outside the model")]
    ForeignGenerator(String),
    #[error("differential image of base generator {0} leaves the base algebra")]
    BaseImageLeavesBase(String),
}

/// A free CDGA (ΛV, d) with finitely many generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SullivanModel {
    algebra: FreeAlgebra,
    diff: Vec<AlgElement>,
}

/// Per-generator findings of [`SullivanModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub generator: String,
    pub degree_ok: bool,
    pub image_degree: Option<i64>,
    pub d_squared_zero: bool,
    pub decomposable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<GeneratorCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.degree_ok && c.d_squared_zero)
    }

    pub fn minimal(&self) -> bool {
        self.checks.iter().all(|c| c.decomposable)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.checks {
            if !c.degree_ok {
                out.push(format!(
                    "d {} has degree {}, expected {}",
                    c.generator,
                    c.image_degree.map_or("mixed".to_string(), |d| d.to_string()),
                    "|gen|+1"
                ));
            }
            if !c.d_squared_zero {
                out.push(format!("d(d {}) != 0", c.generator));
            }
        }
        out
    }
}

/// Purity and F₀ candidacy read off from the shape of the differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub pure: bool,
    pub even_generators: usize,
    pub odd_generators: usize,
    /// Pure with at least as many odd as even generators.
    pub elliptic_candidate: bool,
    /// Pure with equally many even and odd generators; confirmed only once the
    /// cohomology is shown to be finite and evenly graded.
    pub f0_candidate: bool,
}

impl SullivanModel {
    /// Structural construction: unique names, one image per generator, images
    /// inside the algebra. Degree and d² conditions are reported by
    /// [`validate`](Self::validate), not enforced here.
    pub fn new(gens: Vec<Generator>, diff: Vec<AlgElement>) -> Result<Self, ModelError> {
        Self::with_min_degree(gens, diff, 2)
    }

    fn with_min_degree(gens: Vec<Generator>, diff: Vec<AlgElement>, min: i64) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(ModelError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree < min {
                return Err(ModelError::DegreeTooLow {
                    name: g.name.clone(),
                    degree: g.degree,
                    min,
                });
            }
        }
        if diff.len() != gens.len() {
            return Err(ModelError::DiffLength {
                expected: gens.len(),
                found: diff.len(),
            });
        }
        for (g, img) in gens.iter().zip(&diff) {
            if !img.lies_below(gens.len()) {
                return Err(ModelError::ForeignGenerator(g.name.clone()));
            }
        }
        Ok(SullivanModel {
            algebra: FreeAlgebra::new(gens),
            diff,
        })
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn len(&self) -> usize {
        self.algebra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebra.is_empty()
    }

    pub fn diff_of(&self, index: usize) -> &AlgElement {
        &self.diff[index]
    }

    pub fn diff_images(&self) -> &[AlgElement] {
        &self.diff
    }

    pub fn d(&self, a: &AlgElement) -> AlgElement {
        self.algebra.leibniz_extend(|i| self.diff.get(i), -1, a)
    }

    pub fn max_degree(&self) -> i64 {
        self.generators().iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let checks = self
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let img = &self.diff[i];
                let (degree_ok, image_degree) = match self.algebra.homogeneity(img) {
                    Homogeneity::Zero => (true, None),
                    Homogeneity::Degree(d) => (d == g.degree + 1, Some(d)),
                    Homogeneity::Mixed => (false, None),
                };
                let decomposable = img.terms().all(|(m, _)| m.word_length() >= 2);
                GeneratorCheck {
                    generator: g.name.clone(),
                    degree_ok,
                    image_degree,
                    d_squared_zero: self.d(img).is_zero(),
                    decomposable,
                }
            })
            .collect();
        ValidationReport { checks }
    }

    pub fn classify(&self) -> Classification {
        let even: Vec<usize> = (0..self.len()).filter(|&i| !self.generators()[i].is_odd()).collect();
        let odd_count = self.len() - even.len();
        let even_set: BTreeSet<usize> = even.iter().copied().collect();
        let only_even = |a: &AlgElement| {
            a.terms()
                .all(|(m, _)| m.exponents().iter().enumerate().all(|(i, &e)| e == 0 || even_set.contains(&i)))
        };
        let pure = (0..self.len()).all(|i| {
            if even_set.contains(&i) {
                self.diff[i].is_zero()
            } else {
                only_even(&self.diff[i])
            }
        });
        Classification {
            pure,
            even_generators: even.len(),
            odd_generators: odd_count,
            elliptic_candidate: pure && odd_count >= even.len(),
            f0_candidate: pure && odd_count == even.len(),
        }
    }

    /// The sub-CDGA on the first `k` generators; every image must stay there.
    pub fn prefix(&self, k: usize) -> Result<SullivanModel, ModelError> {
        for i in 0..k {
            if !self.diff[i].lies_below(k) {
                return Err(ModelError::BaseImageLeavesBase(self.generators()[i].name.clone()));
            }
        }
        Ok(SullivanModel {
            algebra: self.algebra.prefix(k),
            diff: self.diff[..k].to_vec(),
        })
    }

    /// Same generators and differential in a different declaration order.
    pub fn permuted(&self, order: &[usize]) -> SullivanModel {
        let mut position = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let gens = order.iter().map(|&i| self.generators()[i].clone()).collect();
        let algebra = FreeAlgebra::new(gens);
        let diff = order
            .iter()
            .map(|&old| remap(&algebra, &self.diff[old], &position))
            .collect();
        SullivanModel { algebra, diff }
    }
}

/// Rewrites `a` under the index map `position[old] = new`.
pub(crate) fn remap(target: &FreeAlgebra, a: &AlgElement, position: &[usize]) -> AlgElement {
    let mut out = AlgElement::zero();
    for (m, c) in a.terms() {
        let mut factors = AlgElement::one();
        for (old, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let g = AlgElement::generator(position[old]);
                factors = target.multiply(&factors, &target.power(&g, e));
            }
        }
        out.add_scaled(&factors, c);
    }
    out
}

/// Outcome of the π_ℚ-separability test min|W| ≥ max|V|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separability {
    Separable,
    /// A fiber generator `w` and base generator `v` with |w| < |v|.
    NotSeparable { fiber: usize, base: usize },
}

impl Separability {
    pub fn is_separable(&self) -> bool {
        matches!(self, Separability::Separable)
    }
}

/// A relative Sullivan model (ΛV, d) → (ΛV⊗ΛW, D). The base generators are
/// the first `base_len` generators of the total model, so the base
/// differential is a view of the total one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelativeModel {
    total: SullivanModel,
    base_len: usize,
}

impl RelativeModel {
    /// `fiber_diff[k]` is D of the k-th fiber generator, written over the
    /// generators of `base` followed by `fiber`.
    pub fn new(
        base: &SullivanModel,
        fiber: Vec<Generator>,
        fiber_diff: Vec<AlgElement>,
    ) -> Result<Self, ModelError> {
        if fiber.len() != fiber_diff.len() {
            return Err(ModelError::DiffLength {
                expected: fiber.len(),
                found: fiber_diff.len(),
            });
        }
        let mut gens = base.generators().to_vec();
        gens.extend(fiber);
        let mut diff = base.diff_images().to_vec();
        diff.extend(fiber_diff);
        let total = SullivanModel::new(gens, diff)?;
        Ok(RelativeModel {
            total,
            base_len: base.len(),
        })
    }

    /// Splits an existing model after its first `base_len` generators.
    pub fn split(total: SullivanModel, base_len: usize) -> Result<Self, ModelError> {
        total.prefix(base_len)?;
        Ok(RelativeModel { total, base_len })
    }

    pub fn total(&self) -> &SullivanModel {
        &self.total
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn is_base(&self, index: usize) -> bool {
        index < self.base_len
    }

    pub fn base(&self) -> SullivanModel {
        self.total
            .prefix(self.base_len)
            .expect("base images stay in the base by construction")
    }

    pub fn fiber_indices(&self) -> std::ops::Range<usize> {
        self.base_len..self.total.len()
    }

    pub fn fiber_generators(&self) -> &[Generator] {
        &self.total.generators()[self.base_len..]
    }

    /// The fiber model (ΛW, D̄) obtained by setting every base generator to zero.
    pub fn fiber_model(&self) -> SullivanModel {
        let gens = self.fiber_generators().to_vec();
        let shift = self.base_len;
        let diff = self
            .fiber_indices()
            .map(|i| {
                let mut out = AlgElement::zero();
                for (m, c) in self.total.diff_of(i).terms() {
                    let e = m.exponents();
                    if e.iter().take(shift).all(|&x| x == 0) {
                        let rest = e.get(shift..).map_or(Vec::new(), <[u32]>::to_vec);
                        out.add_term(crate::algebra::Monomial::from_exponents(rest), c.clone());
                    }
                }
                out
            })
            .collect();
        SullivanModel::new(gens, diff).expect("fiber model is well formed")
    }

    pub fn validate(&self) -> ValidationReport {
        self.total.validate()
    }

    pub fn separability(&self) -> Separability {
        let fiber = self.fiber_generators();
        let base = &self.total.generators()[..self.base_len];
        // Empty fiber: min = ∞. Empty base: max = 0.
        let Some((wi, w)) = fiber.iter().enumerate().min_by_key(|(_, g)| g.degree) else {
            return Separability::Separable;
        };
        let max_v = base.iter().map(|g| g.degree).max().unwrap_or(0);
        if w.degree >= max_v {
            return Separability::Separable;
        }
        let vi = base
            .iter()
            .position(|g| g.degree > w.degree)
            .expect("some base generator exceeds the fiber minimum");
        Separability::NotSeparable {
            fiber: self.base_len + wi,
            base: vi,
        }
    }
}

/// Differential images keyed by generator name, for diagnostics and reports.
pub fn diff_table(m: &SullivanModel) -> BTreeMap<String, String> {
    m.generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.clone(), m.algebra().display(m.diff_of(i))))
        .collect()
}
