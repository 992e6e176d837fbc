//! Free graded-commutative algebras ΛV over ℚ.
//!
//! A monomial is an exponent vector over the generators in declaration
//! order, with trailing zeros trimmed. Trimming means an element written over
//! the first `k` generators has the same representation in every algebra that
//! extends those generators, which is how base models sit inside relative
//! models without copying.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("image of {generator} has degree {found:?}, expected {expected}")]
    InhomogeneousImage {
        generator: String,
        expected: i64,
        found: Option<i64>,
    },
}

/// Exponent vector, trailing zeros trimmed. Odd generators carry exponent ≤ 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn generator(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest generator index that occurs, if any.
    pub fn support_end(&self) -> usize {
        self.0.len()
    }

    /// True when only generators with index `< k` occur.
    pub fn lies_below(&self, k: usize) -> bool {
        self.0.len() <= k
    }
}

/// A finite rational combination of monomials; zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl AlgElement {
    pub fn zero() -> Self {
        AlgElement::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = AlgElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn generator(index: usize) -> Self {
        Self::monomial(Monomial::generator(index), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> AlgElement {
        let mut out = AlgElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every monomial uses only the first `k` generators.
    pub fn lies_below(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.lies_below(k))
    }

    /// Keeps only monomials built from the first `k` generators.
    pub fn truncate_to(&self, k: usize) -> AlgElement {
        AlgElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.lies_below(k))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn with_filter(&self, keep: impl Fn(&Monomial) -> bool) -> AlgElement {
        AlgElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Add<&AlgElement> for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl std::ops::Sub<&AlgElement> for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl std::ops::Neg for &AlgElement {
    type Output = AlgElement;
    fn neg(self) -> AlgElement {
        self.scaled(&-Rational::one())
    }
}

/// Degree of an element: well defined, or the element mixes degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Mixed,
}

/// The free graded-commutative algebra on an ordered list of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeAlgebra {
    gens: Vec<Generator>,
}

impl FreeAlgebra {
    pub fn new(gens: Vec<Generator>) -> Self {
        FreeAlgebra { gens }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn degree_of_gen(&self, index: usize) -> i64 {
        self.gens[index].degree
    }

    /// The subalgebra on the first `k` generators.
    pub fn prefix(&self, k: usize) -> FreeAlgebra {
        FreeAlgebra::new(self.gens[..k].to_vec())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.exponents()
            .iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as i64 * g.degree)
            .sum()
    }

    pub fn homogeneity(&self, a: &AlgElement) -> Homogeneity {
        let mut deg = None;
        for (m, _) in a.terms() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return Homogeneity::Mixed,
                _ => {}
            }
        }
        deg.map_or(Homogeneity::Zero, Homogeneity::Degree)
    }

    /// All monomials of exactly `degree`, in descending lexicographic order of
    /// exponent vectors (so `x²` precedes `xy` precedes `y²`).
    pub fn monomial_basis(&self, degree: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if degree < 0 {
            return out;
        }
        let mut exps = vec![0u32; self.gens.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, idx: usize, remaining: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial::from_exponents(exps.clone()));
            return;
        }
        if idx == self.gens.len() {
            return;
        }
        let g = &self.gens[idx];
        let max_e = if g.degree <= 0 {
            0
        } else if g.is_odd() {
            (remaining >= g.degree) as i64
        } else {
            remaining / g.degree
        };
        for e in (0..=max_e).rev() {
            exps[idx] = e as u32;
            self.enumerate(idx + 1, remaining - e * g.degree, exps, out);
        }
        exps[idx] = 0;
    }

    /// Product of two monomials in canonical form: `None` if an odd generator
    /// would be squared, otherwise the Koszul sign and the product.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let n = a.support_end().max(b.support_end());
        let mut exps = vec![0u32; n];
        let mut negative = false;
        // Moving each odd factor of `b` left past the odd factors of `a` with a
        // larger index costs one sign each.
        let mut odd_in_a_after = 0u32;
        for i in (0..n).rev() {
            let ea = a.exponent(i);
            let eb = b.exponent(i);
            let odd = self.gens[i].is_odd();
            if odd {
                if ea + eb > 1 {
                    return None;
                }
                if eb == 1 && odd_in_a_after % 2 == 1 {
                    negative = !negative;
                }
                odd_in_a_after += ea;
            }
            exps[i] = ea + eb;
        }
        Some((negative, Monomial::from_exponents(exps)))
    }

    pub fn multiply(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((neg, m)) = self.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn power(&self, a: &AlgElement, e: u32) -> AlgElement {
        let mut out = AlgElement::one();
        for _ in 0..e {
            out = self.multiply(&out, a);
        }
        out
    }

    /// Evaluates on `target` the unique derivation that lowers degree by
    /// `shift` and sends generator `i` to `images(i)` (absent means zero).
    /// The sign rule is σ(xy) = σ(x)y + (−1)^{shift·|x|} x σ(y); `shift = −1`
    /// gives a differential.
    pub fn leibniz_extend<'a, F>(&self, images: F, shift: i64, target: &AlgElement) -> AlgElement
    where
        F: Fn(usize) -> Option<&'a AlgElement>,
    {
        let mut out = AlgElement::zero();
        for (m, c) in target.terms() {
            let v = self.apply_to_monomial(&images, shift, m);
            out.add_scaled(&v, c);
        }
        out
    }

    /// Like [`leibniz_extend`](Self::leibniz_extend) but first checks that
    /// every image has degree `|generator| − shift`.
    pub fn leibniz_extend_checked(
        &self,
        images: &BTreeMap<usize, AlgElement>,
        shift: i64,
        target: &AlgElement,
    ) -> Result<AlgElement, AlgebraError> {
        for (&i, img) in images {
            let expected = self.gens[i].degree - shift;
            match self.homogeneity(img) {
                Homogeneity::Zero => {}
                Homogeneity::Degree(d) if d == expected => {}
                Homogeneity::Degree(d) => {
                    return Err(AlgebraError::InhomogeneousImage {
                        generator: self.gens[i].name.clone(),
                        expected,
                        found: Some(d),
                    })
                }
                Homogeneity::Mixed => {
                    return Err(AlgebraError::InhomogeneousImage {
                        generator: self.gens[i].name.clone(),
                        expected,
                        found: None,
                    })
                }
            }
        }
        Ok(self.leibniz_extend(|i| images.get(&i), shift, target))
    }

    fn apply_to_monomial<'a, F>(&self, images: &F, shift: i64, m: &Monomial) -> AlgElement
    where
        F: Fn(usize) -> Option<&'a AlgElement>,
    {
        let mut out = AlgElement::zero();
        let mut prefix_degree = 0i64;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if let Some(img) = images(i).filter(|x| !x.is_zero()) {
                // prefix = generators before i at full exponent; rest = x_i^{e-1}·(later generators)
                let prefix = Monomial::from_exponents(m.exponents()[..i].to_vec());
                let mut rest_exps = m.exponents().to_vec();
                for r in rest_exps.iter_mut().take(i) {
                    *r = 0;
                }
                rest_exps[i] = e - 1;
                let rest = Monomial::from_exponents(rest_exps);
                let left = self.multiply(&AlgElement::monomial(prefix, Rational::one()), img);
                let term = self.multiply(&left, &AlgElement::monomial(rest, Rational::one()));
                let mut coef = Rational::from_integer(e.into());
                if (shift * prefix_degree).rem_euclid(2) == 1 {
                    coef = -coef;
                }
                out.add_scaled(&term, &coef);
            }
            prefix_degree += e as i64 * self.gens[i].degree;
        }
        out
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.gens[i].name, e)),
            }
        }
        parts.join("*")
    }

    /// Human-readable form, monomials in descending order.
    pub fn display(&self, a: &AlgElement) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.display_monomial(m);
            if abs.is_one() {
                s.push_str(&mono);
            } else if m.is_one() {
                s.push_str(&abs.to_string());
            } else {
                s.push_str(&format!("{}*{}", abs, mono));
            }
        }
        s
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}
