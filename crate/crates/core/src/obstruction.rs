//! Free DGL data for a base complex with attached cells, DGL maps into
//! derivation algebras, and the obstruction to lifting over one cell:
//! O = [τ(h_Y(u)) − h''_X(∂u)] in the homology of the fiber derivations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::Generator;
use crate::der::{der_boundary, der_bracket, DerComplex, Derivation};
use crate::fibration::{self, FibrationError};
use crate::model::{RelativeModel, SullivanModel};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("generator {0} must have degree at least 1")]
    DegreeTooLow(String),
    #[error("expected {expected} differential images, found {found}")]
    DiffLength { expected: usize, found: usize },
    #[error("expression mixes degrees")]
    Inhomogeneous,
    #[error("d {generator} has degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: i64, found: i64 },
    #[error("d(d {0}) is not zero in the free Lie algebra")]
    DSquaredNonzero(String),
    #[error("d {0} involves a cell that is not attached before it")]
    CellOrder(String),
    #[error("generator {0} has no image")]
    UnmappedGenerator(String),
    #[error("image of {generator} has degree {found}, expected {expected}")]
    ImageDegree { generator: String, expected: i64, found: i64 },
    #[error("{0} is not a cell")]
    NotACell(String),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error("projection of h_X({0}) differs from h_Y({0})")]
    CommutativityFailure(String),
    #[error("map fails the chain condition on {0}")]
    NotADglMap(String),
    #[error("obstruction element is not a cycle")]
    NotACycle,
}

/// A bracket expression over the generators of a free DGL, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LieExpr {
    Zero,
    Gen(usize),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Scale(Rational, Box<LieExpr>),
    Sum(Vec<LieExpr>),
}

impl LieExpr {
    pub fn bracket(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scale(c: Rational, e: LieExpr) -> Self {
        LieExpr::Scale(c, Box::new(e))
    }

    /// Degree, or `None` for an expression built only from zeros.
    pub fn degree(&self, degrees: &[i64]) -> Result<Option<i64>, ObstructionError> {
        Ok(match self {
            LieExpr::Zero => None,
            LieExpr::Gen(i) => Some(degrees[*i]),
            LieExpr::Bracket(a, b) => match (a.degree(degrees)?, b.degree(degrees)?) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            },
            LieExpr::Scale(_, e) => e.degree(degrees)?,
            LieExpr::Sum(es) => {
                let mut d = None;
                for e in es {
                    match (d, e.degree(degrees)?) {
                        (_, None) => {}
                        (None, x) => d = x,
                        (Some(a), Some(b)) if a != b => return Err(ObstructionError::Inhomogeneous),
                        _ => {}
                    }
                }
                d
            }
        })
    }

    pub fn generators(&self, out: &mut BTreeSet<usize>) {
        match self {
            LieExpr::Zero => {}
            LieExpr::Gen(i) => {
                out.insert(*i);
            }
            LieExpr::Bracket(a, b) => {
                a.generators(out);
                b.generators(out);
            }
            LieExpr::Scale(_, e) => e.generators(out),
            LieExpr::Sum(es) => es.iter().for_each(|e| e.generators(out)),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, LieExpr::Zero | LieExpr::Gen(_) | LieExpr::Bracket(..))
    }

    fn display_atom(&self, gens: &[Generator]) -> String {
        if self.is_atom() {
            self.display(gens)
        } else {
            format!("({})", self.display(gens))
        }
    }

    fn display_term(&self, gens: &[Generator], first: bool) -> String {
        let (neg, body) = match self {
            LieExpr::Scale(c, e) if c.is_negative() => {
                let abs = c.abs();
                let body = if abs.is_one() {
                    e.display_atom(gens)
                } else {
                    format!("{}*{}", abs, e.display_atom(gens))
                };
                (true, body)
            }
            LieExpr::Scale(c, e) => (false, format!("{}*{}", c, e.display_atom(gens))),
            other => (false, other.display_atom(gens)),
        };
        match (first, neg) {
            (true, true) => format!("-{body}"),
            (true, false) => body,
            (false, true) => format!(" - {body}"),
            (false, false) => format!(" + {body}"),
        }
    }

    /// Text form accepted back by the model parser.
    pub fn display(&self, gens: &[Generator]) -> String {
        match self {
            LieExpr::Zero => "0".to_string(),
            LieExpr::Gen(i) => gens[*i].name.clone(),
            LieExpr::Bracket(a, b) => format!("[{},{}]", a.display(gens), b.display(gens)),
            LieExpr::Scale(..) => self.display_term(gens, true),
            LieExpr::Sum(es) => es
                .iter()
                .enumerate()
                .map(|(k, e)| e.display_term(gens, k == 0))
                .collect(),
        }
    }
}

type Tensor = BTreeMap<Vec<usize>, Rational>;

fn tensor_add(acc: &mut Tensor, t: &Tensor, c: &Rational) {
    for (w, x) in t {
        let v = acc.remove(w).unwrap_or_else(Rational::zero) + x * c;
        if !v.is_zero() {
            acc.insert(w.clone(), v);
        }
    }
}

fn tensor_mul(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend(wb);
            tensor_add(&mut out, &Tensor::from([(w, Rational::one())]), &(ca * cb));
        }
    }
    out
}

fn sign(neg: bool) -> Rational {
    if neg {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Image in the tensor algebra under [a,b] ↦ ab − (−1)^{|a||b|} ba. The
/// embedding is injective, so identities can be tested there.
fn to_tensor(e: &LieExpr, degrees: &[i64]) -> Tensor {
    match e {
        LieExpr::Zero => Tensor::new(),
        LieExpr::Gen(i) => Tensor::from([(vec![*i], Rational::one())]),
        LieExpr::Bracket(a, b) => {
            let (Ok(Some(da)), Ok(Some(db))) = (a.degree(degrees), b.degree(degrees)) else {
                return Tensor::new();
            };
            let ta = to_tensor(a, degrees);
            let tb = to_tensor(b, degrees);
            let mut out = tensor_mul(&ta, &tb);
            tensor_add(&mut out, &tensor_mul(&tb, &ta), &-sign((da * db) % 2 != 0));
            out
        }
        LieExpr::Scale(c, e) => {
            let mut out = Tensor::new();
            tensor_add(&mut out, &to_tensor(e, degrees), c);
            out
        }
        LieExpr::Sum(es) => {
            let mut out = Tensor::new();
            for e in es {
                tensor_add(&mut out, &to_tensor(e, degrees), &Rational::one());
            }
            out
        }
    }
}

/// The degree −1 derivation of T(U) extending `diff`.
fn tensor_diff(t: &Tensor, diffs: &[Tensor], degrees: &[i64]) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t {
        let mut before = 0i64;
        for (k, &letter) in w.iter().enumerate() {
            let left = Tensor::from([(w[..k].to_vec(), Rational::one())]);
            let right = Tensor::from([(w[k + 1..].to_vec(), Rational::one())]);
            let term = tensor_mul(&tensor_mul(&left, &diffs[letter]), &right);
            tensor_add(&mut out, &term, &(c * sign(before % 2 != 0)));
            before += degrees[letter];
        }
    }
    out
}

/// A free DGL (𝕃U, ∂) with some generators marked as attached cells, in
/// attaching order. The remaining generators span L(B).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuillenData {
    gens: Vec<Generator>,
    diff: Vec<LieExpr>,
    cells: Vec<usize>,
}

impl QuillenData {
    pub fn new(gens: Vec<Generator>, diff: Vec<LieExpr>, cells: Vec<usize>) -> Result<Self, ObstructionError> {
        let mut seen = BTreeSet::new();
        for g in &gens {
            if !seen.insert(g.name.clone()) {
                return Err(ObstructionError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree < 1 {
                return Err(ObstructionError::DegreeTooLow(g.name.clone()));
            }
        }
        if diff.len() != gens.len() {
            return Err(ObstructionError::DiffLength {
                expected: gens.len(),
                found: diff.len(),
            });
        }
        let degrees: Vec<i64> = gens.iter().map(|g| g.degree).collect();
        for (i, e) in diff.iter().enumerate() {
            if let Some(d) = e.degree(&degrees)? {
                if d != degrees[i] - 1 {
                    return Err(ObstructionError::DegreeMismatch {
                        generator: gens[i].name.clone(),
                        expected: degrees[i] - 1,
                        found: d,
                    });
                }
            }
        }
        // Base generators may not see cells; a cell sees only the base and earlier cells.
        for i in 0..gens.len() {
            let mut used = BTreeSet::new();
            diff[i].generators(&mut used);
            let allowed = |j: usize| match cells.iter().position(|&c| c == j) {
                None => true,
                Some(pj) => cells.iter().position(|&c| c == i).is_some_and(|pi| pj < pi),
            };
            if !used.into_iter().all(allowed) {
                return Err(ObstructionError::CellOrder(gens[i].name.clone()));
            }
        }
        let tensors: Vec<Tensor> = diff.iter().map(|e| to_tensor(e, &degrees)).collect();
        for (i, t) in tensors.iter().enumerate() {
            if !tensor_diff(t, &tensors, &degrees).is_empty() {
                return Err(ObstructionError::DSquaredNonzero(gens[i].name.clone()));
            }
        }
        Ok(QuillenData { gens, diff, cells })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn diff_of(&self, i: usize) -> &LieExpr {
        &self.diff[i]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn is_cell(&self, i: usize) -> bool {
        self.cells.contains(&i)
    }

    /// Generators of L(B): everything that is not an attached cell.
    pub fn base_generators(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| !self.is_cell(i)).collect()
    }

    pub fn all_odd(&self) -> bool {
        self.gens.iter().all(Generator::is_odd)
    }
}

/// Images of generators of a free DGL in some Der M.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DglMapData {
    pub images: BTreeMap<usize, Derivation>,
}

impl DglMapData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, gen: usize, image: Derivation) -> Self {
        self.images.insert(gen, image);
        self
    }
}

/// Homomorphic evaluation: generators by their images, brackets by the
/// commutator bracket of derivations.
pub fn lie_eval(
    q: &QuillenData,
    map: &DglMapData,
    target: &SullivanModel,
    e: &LieExpr,
) -> Result<Derivation, ObstructionError> {
    let degree = e.degree(&q.degrees())?.unwrap_or(0);
    let out = eval(q, map, target, e)?;
    Ok(if out.is_zero() { Derivation::zero(degree) } else { out })
}

fn eval(q: &QuillenData, map: &DglMapData, target: &SullivanModel, e: &LieExpr) -> Result<Derivation, ObstructionError> {
    Ok(match e {
        LieExpr::Zero => Derivation::zero(0),
        LieExpr::Gen(i) => map
            .images
            .get(i)
            .cloned()
            .ok_or_else(|| ObstructionError::UnmappedGenerator(q.gens[*i].name.clone()))?,
        LieExpr::Bracket(a, b) => {
            let x = eval(q, map, target, a)?;
            let y = eval(q, map, target, b)?;
            if x.is_zero() || y.is_zero() {
                Derivation::zero(x.shift() + y.shift())
            } else {
                der_bracket(target, &x, &y)
            }
        }
        LieExpr::Scale(c, e) => eval(q, map, target, e)?.scaled(c),
        LieExpr::Sum(es) => {
            let mut acc = Derivation::zero(e.degree(&q.degrees())?.unwrap_or(0));
            for e in es {
                acc.add_scaled(&eval(q, map, target, e)?, &Rational::one());
            }
            acc
        }
    })
}

/// Result of checking ∂(h(g)) = h(∂g) on the generators of a map's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCheck {
    pub checked: Vec<usize>,
    /// (generator, ∂(h(g)), h(∂g))
    pub failures: Vec<(usize, Derivation, Derivation)>,
}

impl MapCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the chain condition on every generator that has an image. Image
/// degrees must match generator degrees.
pub fn dgl_map_check(q: &QuillenData, map: &DglMapData, target: &SullivanModel) -> Result<MapCheck, ObstructionError> {
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for (&g, img) in &map.images {
        let expected = q.gens[g].degree;
        if !img.is_zero() && img.shift() != expected {
            return Err(ObstructionError::ImageDegree {
                generator: q.gens[g].name.clone(),
                expected,
                found: img.shift(),
            });
        }
        let lhs = der_boundary(target, img);
        let rhs = lie_eval(q, map, target, &q.diff[g])?;
        if !lhs.sub(&rhs).is_zero() {
            failures.push((g, lhs, rhs));
        }
        checked.push(g);
    }
    Ok(MapCheck { checked, failures })
}

/// The obstruction element τ(h_Y(u)) − h''_X(∂u) and its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionClass {
    /// Homology degree N − 2 = |u| − 1.
    pub degree: i64,
    pub tau: Derivation,
    pub hx_part: Derivation,
    pub element: Derivation,
    pub zero: bool,
    /// Some q with ∂_X q = element when the class vanishes.
    pub primitive: Option<Derivation>,
}

/// Assembles the class from h_Y(u) and the already evaluated h_X(∂u).
pub fn obstruction_from_parts(
    rm: &RelativeModel,
    hy_u: &Derivation,
    hx_of_boundary: &Derivation,
) -> Result<ObstructionClass, ObstructionError> {
    let total = rm.total();
    let degree = hy_u.shift() - 1;
    let tau = fibration::tau(rm, hy_u);
    let hx_part = fibration::fiber_part(rm, hx_of_boundary);
    let mut element = Derivation::zero(degree);
    element.add_scaled(&tau, &Rational::one());
    element.add_scaled(&hx_part, &-Rational::one());
    if !der_boundary(total, &element).is_zero() {
        return Err(ObstructionError::NotACycle);
    }
    let k = rm.base_len();
    let fiber = DerComplex::with_sources(total, move |g| g >= k);
    let primitive = fiber.solve_boundary(&element);
    Ok(ObstructionClass {
        degree,
        tau,
        hx_part,
        zero: primitive.is_some(),
        element,
        primitive,
    })
}

/// Obstruction over one cell together with the lift built from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellObstruction {
    pub cell: usize,
    pub class: ObstructionClass,
    /// h(u) = h_Y(u) − q when the class vanishes.
    pub lift: Option<Derivation>,
    /// Result of the chain-condition check on the extended map.
    pub lift_verified: Option<bool>,
}

/// O_α(h_X, h_Y) for the given cell. `hx` must be defined on L(B) (all
/// non-cell generators and earlier cells) and `hy` on every generator.
pub fn obstruction_class(
    rm: &RelativeModel,
    q: &QuillenData,
    hx: &DglMapData,
    hy: &DglMapData,
    cell: usize,
) -> Result<CellObstruction, ObstructionError> {
    fibration::b_f_project(rm, &Derivation::zero(1))?;
    let name = |g: usize| q.gens[g].name.clone();
    let pos = q
        .cells
        .iter()
        .position(|&c| c == cell)
        .ok_or_else(|| ObstructionError::NotACell(name(cell)))?;
    let domain: Vec<usize> = q.base_generators().into_iter().chain(q.cells[..pos].iter().copied()).collect();
    let base = rm.base();
    let total = rm.total();

    let mut hx_b = DglMapData::new();
    for &g in &domain {
        let img = hx.images.get(&g).ok_or_else(|| ObstructionError::UnmappedGenerator(name(g)))?;
        let hy_img = hy.images.get(&g).ok_or_else(|| ObstructionError::UnmappedGenerator(name(g)))?;
        if !fibration::b_f_project(rm, img)?.sub(hy_img).is_zero() {
            return Err(ObstructionError::CommutativityFailure(name(g)));
        }
        hx_b.images.insert(g, img.clone());
    }
    if let Some((g, ..)) = dgl_map_check(q, &hx_b, total)?.failures.first() {
        return Err(ObstructionError::NotADglMap(name(*g)));
    }
    let mut hy_b = DglMapData::new();
    for &g in domain.iter().chain(std::iter::once(&cell)) {
        let img = hy.images.get(&g).ok_or_else(|| ObstructionError::UnmappedGenerator(name(g)))?;
        hy_b.images.insert(g, img.clone());
    }
    if let Some((g, ..)) = dgl_map_check(q, &hy_b, &base)?.failures.first() {
        return Err(ObstructionError::NotADglMap(name(*g)));
    }

    let hy_u = &hy_b.images[&cell];
    let hy_u = if hy_u.is_zero() { Derivation::zero(q.gens[cell].degree) } else { hy_u.clone() };
    let hx_du = lie_eval(q, &hx_b, total, &q.diff[cell])?;
    let class = obstruction_from_parts(rm, &hy_u, &hx_du)?;

    let (lift, lift_verified) = match &class.primitive {
        Some(p) => {
            let mut h = Derivation::zero(hy_u.shift());
            h.add_scaled(&hy_u, &Rational::one());
            h.add_scaled(p, &-Rational::one());
            let extended = DglMapData {
                images: hx_b.images.clone(),
            }
            .with(cell, h.clone());
            let chain_ok = dgl_map_check(q, &extended, total)?.passed();
            let projects = fibration::b_f_project(rm, &h)?.sub(&hy_u).is_zero();
            (Some(h), Some(chain_ok && projects))
        }
        None => (None, None),
    };
    Ok(CellObstruction {
        cell,
        class,
        lift,
        lift_verified,
    })
}

/// A lifting problem: h_X on L(B) into Der(total) and h_Y on everything into Der(base).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LiftingProblem {
    pub hx: DglMapData,
    pub hy: DglMapData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    /// All generators odd and π_odd(Baut₁f)_ℚ = 0: every obstruction lies in
    /// an even homology group that vanishes.
    pub certified: bool,
    pub cells: Vec<CellObstruction>,
    /// First cell with a nonzero obstruction, where the scan stops.
    pub blocked_at: Option<usize>,
}

impl ScanReport {
    pub fn liftable(&self) -> bool {
        self.certified || self.blocked_at.is_none()
    }
}

/// Cell-by-cell obstruction evaluation, feeding each constructed lift into
/// the next cell.
pub fn skeletal_lift_scan(rm: &RelativeModel, q: &QuillenData, problem: &LiftingProblem) -> Result<ScanReport, ObstructionError> {
    let pi_odd = fibration::pi_odd_vanishing(rm)?;
    if q.all_odd() && pi_odd.vanishes {
        return Ok(ScanReport {
            certified: true,
            cells: Vec::new(),
            blocked_at: None,
        });
    }
    let mut hx = problem.hx.clone();
    let mut cells = Vec::new();
    let mut blocked_at = None;
    for &c in q.cells() {
        let ob = obstruction_class(rm, q, &hx, &problem.hy, c)?;
        let lift = ob.lift.clone();
        cells.push(ob);
        match lift {
            Some(h) => {
                hx.images.insert(c, h);
            }
            None => {
                blocked_at = Some(c);
                break;
            }
        }
    }
    Ok(ScanReport {
        certified: false,
        cells,
        blocked_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use crate::corpus;

    fn gen(name: &str, d: i64) -> Generator {
        Generator::new(name, d)
    }

    fn elem(m: &SullivanModel, v: &str, f: &[(&str, u32)]) -> Derivation {
        let alg = m.algebra();
        let mut e = vec![0u32; alg.len()];
        for &(n, k) in f {
            e[alg.index_of(n).unwrap()] = k;
        }
        Derivation::elementary(alg, alg.index_of(v).unwrap(), Monomial::from_exponents(e))
    }

    fn cp2_quillen() -> QuillenData {
        QuillenData::new(
            vec![gen("u1", 1), gen("u2", 3)],
            vec![LieExpr::Zero, LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(0))],
            vec![1],
        )
        .unwrap()
    }

    #[test]
    fn quillen_validation() {
        cp2_quillen();
        let bad = QuillenData::new(vec![gen("a", 2), gen("b", 2)], vec![LieExpr::Zero, LieExpr::Gen(0)], vec![]);
        assert!(matches!(bad, Err(ObstructionError::DegreeMismatch { .. })));
        // d a = b, d b = c makes d² ≠ 0.
        let bad = QuillenData::new(
            vec![gen("a", 3), gen("b", 2), gen("c", 1)],
            vec![LieExpr::Gen(1), LieExpr::Gen(2), LieExpr::Zero],
            vec![],
        );
        assert!(matches!(bad, Err(ObstructionError::DSquaredNonzero(_))));
        // d c = [a,a] with d a = b: d² c = [b,a] + [a,b] = 0.
        let ok = QuillenData::new(
            vec![gen("a", 2), gen("b", 1), gen("c", 5)],
            vec![LieExpr::Gen(1), LieExpr::Zero, LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(0))],
            vec![],
        );
        assert!(ok.is_ok());
        // d c = [a,b] with d a = b: d² c = [b,b] ≠ 0 for |b| = 1 (odd generators have nonzero squares).
        let bad = QuillenData::new(
            vec![gen("a", 2), gen("b", 1), gen("c", 4)],
            vec![LieExpr::Gen(1), LieExpr::Zero, LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(1))],
            vec![],
        );
        assert!(matches!(bad, Err(ObstructionError::DSquaredNonzero(_))));
    }

    #[test]
    fn jacobi_in_tensor_algebra() {
        let degrees = [1, 2, 3];
        let (a, b, c) = (LieExpr::Gen(0), LieExpr::Gen(1), LieExpr::Gen(2));
        let br = LieExpr::bracket;
        // [a,[b,c]] = [[a,b],c] + (−1)^{|a||b|}[b,[a,c]]
        let lhs = br(a.clone(), br(b.clone(), c.clone()));
        let rhs = LieExpr::Sum(vec![
            br(br(a.clone(), b.clone()), c.clone()),
            LieExpr::scale(Rational::one(), br(b, br(a, c))),
        ]);
        assert_eq!(to_tensor(&lhs, &degrees), to_tensor(&rhs, &degrees));
    }

    #[test]
    fn lie_eval_examples() {
        let h = corpus::hopf_total();
        let q = QuillenData::new(vec![gen("a", 3), gen("b", 1)], vec![LieExpr::Zero, LieExpr::Zero], vec![]).unwrap();
        let map = DglMapData::new().with(0, elem(&h, "z", &[])).with(1, elem(&h, "x", &[("z", 1)]));
        let e = LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(1));
        assert_eq!(lie_eval(&q, &map, &h, &e).unwrap(), elem(&h, "x", &[]));
        assert_eq!(lie_eval(&q, &map, &h, &LieExpr::Gen(1)).unwrap(), elem(&h, "x", &[("z", 1)]));
        let missing = DglMapData::new().with(0, elem(&h, "z", &[]));
        assert!(matches!(lie_eval(&q, &missing, &h, &e), Err(ObstructionError::UnmappedGenerator(_))));
    }

    #[test]
    fn cp2_obstruction_nonzero() {
        let rm = corpus::cp2_relative();
        let q = cp2_quillen();
        let base = rm.base();
        let t = rm.total();
        let hx = DglMapData::new().with(0, Derivation::zero(1));
        let hy = DglMapData::new().with(0, Derivation::zero(1)).with(1, elem(&base, "v", &[]));
        assert!(dgl_map_check(&q, &hy, &base).unwrap().passed());
        let ob = obstruction_class(&rm, &q, &hx, &hy, 1).unwrap();
        assert_eq!(ob.class.element, elem(t, "w2", &[("w1", 1)]));
        assert_eq!(ob.class.degree, 2);
        assert!(!ob.class.zero);
        assert!(ob.lift.is_none());
    }

    #[test]
    fn cp2_trivial_extension_lifts() {
        let rm = corpus::cp2_trivial();
        let q = cp2_quillen();
        let base = rm.base();
        let hx = DglMapData::new().with(0, Derivation::zero(1));
        let hy = DglMapData::new().with(0, Derivation::zero(1)).with(1, elem(&base, "v", &[]));
        let ob = obstruction_class(&rm, &q, &hx, &hy, 1).unwrap();
        assert!(ob.class.zero);
        assert_eq!(ob.lift_verified, Some(true));
    }

    #[test]
    fn chain_condition_failure_is_reported() {
        let s4 = corpus::s4();
        let q = QuillenData::new(vec![gen("u", 4)], vec![LieExpr::Zero], vec![]).unwrap();
        let map = DglMapData::new().with(0, elem(&s4, "x", &[]));
        let check = dgl_map_check(&q, &map, &s4).unwrap();
        assert!(!check.passed());
        assert_eq!(check.failures[0].0, 0);
    }

    #[test]
    fn scan_examples() {
        let q = QuillenData::new(vec![gen("u", 3)], vec![LieExpr::Zero], vec![0]).unwrap();
        let b = corpus::obstructed_example();
        let base = b.base();
        let problem = LiftingProblem {
            hx: DglMapData::new(),
            hy: DglMapData::new().with(0, elem(&base, "v1", &[])),
        };
        let r = skeletal_lift_scan(&b, &q, &problem).unwrap();
        assert!(!r.certified);
        assert_eq!(r.blocked_at, Some(0));
        assert_eq!(r.cells[0].class.element, elem(b.total(), "w", &[("v2", 1)]));

        let a = corpus::liftable_example();
        let r = skeletal_lift_scan(&a, &cp2_quillen(), &LiftingProblem::default()).unwrap();
        assert!(r.certified && r.liftable());

        let point = QuillenData::new(vec![], vec![], vec![]).unwrap();
        assert!(skeletal_lift_scan(&b, &point, &LiftingProblem::default()).unwrap().liftable());
    }

    #[test]
    fn display_round_trip_shapes() {
        let gens = [gen("a", 1), gen("b", 2)];
        let e = LieExpr::Sum(vec![
            LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(1)),
            LieExpr::scale(Rational::from_integer((-3).into()), LieExpr::Gen(1)),
        ]);
        assert_eq!(e.display(&gens), "[a,b] - 3*b");
    }
}
