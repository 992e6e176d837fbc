//! Reference oracle for the test suites.
//!
//! Deliberately naive and written without reference to the main crate:
//! monomials are sorted words of generator indices, Koszul signs come from
//! bubble-sorting concatenated words, derivations are plain maps, and every
//! linear-algebra question is a dense rank computation. Inputs are raw data
//! (degrees and exponent vectors) so no types are shared with the code under
//! test.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

/// Sorted word of generator indices. Odd letters occur at most once.
type Word = Vec<usize>;
/// Polynomial: word ↦ coefficient, no zero entries.
type Poly = BTreeMap<Word, Q>;
/// Derivation: generator ↦ image.
type Der = BTreeMap<usize, Poly>;

/// An exponent-vector polynomial as handed in by a caller.
pub type RawPoly = Vec<(Vec<u32>, Q)>;
/// A map entry: generator, degree, and the derivation it goes to.
pub type RawMapEntry = (usize, i64, Vec<(usize, RawPoly)>);

fn add_into(acc: &mut Poly, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let v = acc.remove(&w).unwrap_or_else(Q::zero) + c;
    if !v.is_zero() {
        acc.insert(w, v);
    }
}

fn poly_add(acc: &mut Poly, p: &Poly, c: &Q) {
    for (w, x) in p {
        add_into(acc, w.clone(), x * c);
    }
}

/// A free CDGA given by generator degrees and differential images.
#[derive(Debug, Clone)]
pub struct DenseModel {
    deg: Vec<i64>,
    diff: Vec<Poly>,
}

/// Lie words for evaluating maps out of a free DGL.
#[derive(Debug, Clone)]
pub enum OLie {
    Gen(usize),
    Bracket(Box<OLie>, Box<OLie>),
    Scale(Q, Box<OLie>),
    Sum(Vec<OLie>),
}

impl DenseModel {
    pub fn new(degrees: Vec<i64>, diff: Vec<RawPoly>) -> Self {
        let mut m = DenseModel {
            deg: degrees,
            diff: Vec::new(),
        };
        m.diff = diff.iter().map(|p| m.lift_raw(p)).collect();
        m
    }

    fn odd(&self, g: usize) -> bool {
        self.deg[g] % 2 != 0
    }

    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&g| self.deg[g]).sum()
    }

    /// Bubble-sorts a word; `None` when an odd letter repeats.
    fn normalize(&self, mut w: Word) -> Option<(Q, Word)> {
        let mut sign = Q::one();
        let n = w.len();
        for i in 0..n {
            for j in 0..n - 1 - i {
                if w[j] > w[j + 1] {
                    if self.odd(w[j]) && self.odd(w[j + 1]) {
                        sign = -sign;
                    }
                    w.swap(j, j + 1);
                }
            }
        }
        for k in 1..n {
            if w[k] == w[k - 1] && self.odd(w[k]) {
                return None;
            }
        }
        Some((sign, w))
    }

    fn lift_raw(&self, p: &RawPoly) -> Poly {
        let mut out = Poly::new();
        for (e, c) in p {
            let mut w = Vec::new();
            for (g, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    w.push(g);
                }
            }
            if let Some((s, w)) = self.normalize(w) {
                add_into(&mut out, w, s * c);
            }
        }
        out
    }

    fn word_times(&self, a: &[usize], b: &[usize]) -> Option<(Q, Word)> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.normalize(w)
    }

    fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (a, x) in p {
            for (b, y) in q {
                if let Some((s, w)) = self.word_times(a, b) {
                    add_into(&mut out, w, s * x * y);
                }
            }
        }
        out
    }

    /// Applies the derivation of degree `shift` (lowering) given on generators.
    fn apply(&self, sigma: &Der, shift: i64, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (w, c) in p {
            let mut before = 0i64;
            for (i, &g) in w.iter().enumerate() {
                if let Some(img) = sigma.get(&g) {
                    let sign = if (shift * before).rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                    let left: Poly = [(w[..i].to_vec(), Q::one())].into();
                    let right: Poly = [(w[i + 1..].to_vec(), Q::one())].into();
                    let term = self.mul(&self.mul(&left, img), &right);
                    poly_add(&mut out, &term, &sign);
                }
                before += self.deg[g];
            }
        }
        out
    }

    fn d(&self, p: &Poly) -> Poly {
        let sigma: Der = self.diff.iter().cloned().enumerate().filter(|(_, p)| !p.is_empty()).collect();
        self.apply(&sigma, -1, p)
    }

    /// All words of a given degree.
    fn words(&self, degree: i64) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.words_rec(0, degree, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, start: usize, rem: i64, cur: &mut Word, out: &mut Vec<Word>) {
        if rem == 0 {
            out.push(cur.clone());
        }
        if rem <= 0 {
            return;
        }
        for g in start..self.deg.len() {
            if self.deg[g] > rem {
                continue;
            }
            if self.odd(g) && cur.last() == Some(&g) {
                continue;
            }
            cur.push(g);
            self.words_rec(g, rem - self.deg[g], cur, out);
            cur.pop();
        }
    }

    fn der_basis(&self, n: i64, source: &dyn Fn(usize) -> bool) -> Vec<(usize, Word)> {
        let mut out = Vec::new();
        for v in 0..self.deg.len() {
            if source(v) && self.deg[v] - n >= 0 {
                for w in self.words(self.deg[v] - n) {
                    out.push((v, w));
                }
            }
        }
        out
    }

    fn boundary(&self, sigma: &Der, n: i64) -> Der {
        let mut out = Der::new();
        for g in 0..self.deg.len() {
            let mut img = Poly::new();
            if let Some(s) = sigma.get(&g) {
                poly_add(&mut img, &self.d(s), &Q::one());
            }
            let sd = self.apply(sigma, n, &self.diff[g]);
            let c = if n % 2 == 0 { -Q::one() } else { Q::one() };
            poly_add(&mut img, &sd, &c);
            if !img.is_empty() {
                out.insert(g, img);
            }
        }
        out
    }

    fn bracket(&self, a: &Der, na: i64, b: &Der, nb: i64) -> Der {
        let mut out = Der::new();
        let sign = if (na * nb) % 2 == 0 { -Q::one() } else { Q::one() };
        for g in 0..self.deg.len() {
            let mut img = Poly::new();
            if let Some(x) = b.get(&g) {
                poly_add(&mut img, &self.apply(a, na, x), &Q::one());
            }
            if let Some(x) = a.get(&g) {
                poly_add(&mut img, &self.apply(b, nb, x), &sign);
            }
            if !img.is_empty() {
                out.insert(g, img);
            }
        }
        out
    }

    fn coords(&self, basis: &[(usize, Word)], sigma: &Der) -> Vec<Q> {
        let mut v = vec![Q::zero(); basis.len()];
        for (g, p) in sigma {
            for (w, c) in p {
                let k = basis
                    .iter()
                    .position(|(h, u)| h == g && u == w)
                    .expect("derivation lies in the chosen complex");
                v[k] = c.clone();
            }
        }
        v
    }

    fn boundary_columns(&self, n: i64, source: &dyn Fn(usize) -> bool) -> Vec<Vec<Q>> {
        let from = self.der_basis(n, source);
        let to = self.der_basis(n - 1, source);
        from.iter()
            .map(|(v, w)| {
                let sigma: Der = [(*v, [(w.clone(), Q::one())].into())].into();
                self.coords(&to, &self.boundary(&sigma, n))
            })
            .collect()
    }

    fn homology(&self, n: i64, source: &dyn Fn(usize) -> bool) -> usize {
        if n < 1 {
            return 0;
        }
        let dim = self.der_basis(n, source).len();
        let out = rank(&self.boundary_columns(n, source));
        let inc = rank(&self.boundary_columns(n + 1, source));
        dim - out - inc
    }

    /// dim H_n(Der M) for n = 0..=max (entry 0 is always 0).
    pub fn der_homology_dims(&self, max: i64) -> Vec<usize> {
        (0..=max).map(|n| self.homology(n, &|_| true)).collect()
    }

    /// dim H_n of derivations supported on generators with index ≥ base_len.
    pub fn fiber_der_homology_dims(&self, base_len: usize, max: i64) -> Vec<usize> {
        (0..=max).map(|n| self.homology(n, &|g| g >= base_len)).collect()
    }

    /// dim H^k of the CDGA for k = 0..=cutoff.
    pub fn cohomology_dims(&self, cutoff: i64) -> Vec<usize> {
        let d_rank = |k: i64| -> usize {
            if k < 0 {
                return 0;
            }
            let to = self.words(k + 1);
            let cols: Vec<Vec<Q>> = self
                .words(k)
                .into_iter()
                .map(|w| {
                    let img = self.d(&[(w, Q::one())].into());
                    to.iter().map(|u| img.get(u).cloned().unwrap_or_else(Q::zero)).collect()
                })
                .collect();
            rank(&cols)
        };
        (0..=cutoff)
            .map(|k| self.words(k).len() - d_rank(k) - d_rank(k - 1))
            .collect()
    }

    fn raw_der(&self, images: &[(usize, RawPoly)]) -> Der {
        let mut out = Der::new();
        for (g, p) in images {
            let img = self.lift_raw(p);
            if !img.is_empty() {
                let e = out.entry(*g).or_default();
                poly_add(e, &img, &Q::one());
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// Whether a degree-n derivation supported on generators ≥ base_len is a
    /// boundary in the fiber complex. Panics if it is not a cycle.
    fn fiber_class_zero(&self, base_len: usize, sigma: &Der, n: i64) -> bool {
        let source = |g: usize| g >= base_len;
        assert!(self.boundary(sigma, n).is_empty(), "not a cycle");
        if sigma.is_empty() {
            return true;
        }
        let basis = self.der_basis(n, &source);
        let target = self.coords(&basis, sigma);
        let cols = self.boundary_columns(n + 1, &source);
        let mut with = cols.clone();
        with.push(target);
        rank(&with) == rank(&cols)
    }

    /// δ-type class: the fiber part of ∂ applied to a base derivation of
    /// degree n, tested for vanishing in the fiber complex.
    pub fn connecting_class_is_zero(&self, base_len: usize, sigma: &[(usize, RawPoly)], n: i64) -> bool {
        let s = self.raw_der(sigma);
        let mut b = self.boundary(&s, n);
        b.retain(|g, _| *g >= base_len);
        self.fiber_class_zero(base_len, &b, n - 1)
    }

    /// Evaluates a Lie word under generator images of the given degrees.
    fn lie_eval(&self, e: &OLie, images: &BTreeMap<usize, (Der, i64)>) -> (Der, Option<i64>) {
        match e {
            OLie::Gen(g) => {
                let (d, n) = &images[g];
                (d.clone(), Some(*n))
            }
            OLie::Bracket(a, b) => {
                let (x, nx) = self.lie_eval(a, images);
                let (y, ny) = self.lie_eval(b, images);
                match (nx, ny) {
                    (Some(p), Some(q)) => (self.bracket(&x, p, &y, q), Some(p + q)),
                    _ => (Der::new(), None),
                }
            }
            OLie::Scale(c, a) => {
                let (x, n) = self.lie_eval(a, images);
                let mut out = Der::new();
                for (g, p) in x {
                    let mut q = Poly::new();
                    poly_add(&mut q, &p, c);
                    if !q.is_empty() {
                        out.insert(g, q);
                    }
                }
                (out, n)
            }
            OLie::Sum(es) => {
                let mut out = Der::new();
                let mut deg = None;
                for e in es {
                    let (x, n) = self.lie_eval(e, images);
                    deg = deg.or(n);
                    for (g, p) in x {
                        let acc = out.entry(g).or_default();
                        poly_add(acc, &p, &Q::one());
                    }
                }
                out.retain(|_, p| !p.is_empty());
                (out, deg)
            }
        }
    }

    /// Vanishing of the lifting obstruction
    /// [fiber(∂ h_Y(u)) − fiber(h_X(∂u))] for a cell u of degree `cell_degree`.
    /// `hx` lists the images of the generators occurring in `boundary`.
    pub fn obstruction_is_zero(
        &self,
        base_len: usize,
        cell_degree: i64,
        hy_u: &[(usize, RawPoly)],
        boundary: Option<&OLie>,
        hx: &[RawMapEntry],
    ) -> bool {
        let hy = self.raw_der(hy_u);
        let mut element = self.boundary(&hy, cell_degree);
        element.retain(|g, _| *g >= base_len);
        if let Some(e) = boundary {
            let images: BTreeMap<usize, (Der, i64)> =
                hx.iter().map(|(g, n, d)| (*g, (self.raw_der(d), *n))).collect();
            let (h, _) = self.lie_eval(e, &images);
            for (g, p) in h {
                if g >= base_len {
                    let acc = element.entry(g).or_default();
                    poly_add(acc, &p, &-Q::one());
                }
            }
            element.retain(|_, p| !p.is_empty());
        }
        self.fiber_class_zero(base_len, &element, cell_degree - 1)
    }

    /// Number of elementary derivations of degree n.
    pub fn der_basis_len(&self, n: i64) -> usize {
        self.der_basis(n, &|_| true).len()
    }

    /// Sizes of the monomial bases in degrees 0..=max.
    pub fn monomial_counts(&self, max: i64) -> Vec<usize> {
        (0..=max).map(|k| self.words(k).len()).collect()
    }

    /// Whether d² vanishes on every generator.
    pub fn d_squared_zero(&self) -> bool {
        self.diff.iter().all(|p| self.d(p).is_empty())
    }

    /// Product of two raw polynomials, returned as exponent vectors.
    pub fn multiply_raw(&self, a: &RawPoly, b: &RawPoly) -> RawPoly {
        let p = self.mul(&self.lift_raw(a), &self.lift_raw(b));
        p.into_iter()
            .map(|(w, c)| {
                let mut e = vec![0u32; self.deg.len()];
                for g in w {
                    e[g] += 1;
                }
                while e.last() == Some(&0) {
                    e.pop();
                }
                (e, c)
            })
            .collect()
    }

    pub fn word_degree_of(&self, e: &[u32]) -> i64 {
        let w: Vec<usize> = e.iter().enumerate().flat_map(|(g, &k)| std::iter::repeat_n(g, k as usize)).collect();
        self.word_degree(&w)
    }
}

/// Dense rank of a list of columns by Gaussian elimination.
pub fn rank(columns: &[Vec<Q>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<Q>> = columns.to_vec();
    let width = rows[0].len();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= y * &f;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
