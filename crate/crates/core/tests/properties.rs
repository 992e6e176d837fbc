//! Randomized invariants over the corpus, all in exact arithmetic.

mod common;

use std::sync::OnceLock;

use baut_core::algebra::{AlgElement, FreeAlgebra, Generator, Monomial};
use baut_core::corpus;
use baut_core::cstar::{cstar_model, FiniteDgl};
use baut_core::der::{der_boundary, der_bracket, DerBasis, DerComplex, Derivation};
use baut_core::dsl::{self, NamedModel, Workspace};
use baut_core::fibration::FibrationComplexes;
use baut_core::linalg::RatMatrix;
use baut_core::model::{RelativeModel, SullivanModel};
use baut_core::obstruction::{lie_eval, obstruction_from_parts, DglMapData, LieExpr, QuillenData};
use baut_core::Rational;
use proptest::prelude::*;

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn models() -> &'static Vec<SullivanModel> {
    static M: OnceLock<Vec<SullivanModel>> = OnceLock::new();
    M.get_or_init(|| {
        let ws = corpus::workspace();
        let mut out: Vec<_> = ws.models.iter().map(|m| m.model.clone()).collect();
        out.extend(ws.relatives.iter().map(|r| r.model.total().clone()));
        out
    })
}

fn separable_relatives() -> Vec<RelativeModel> {
    corpus::workspace()
        .relatives
        .iter()
        .map(|r| r.model.clone())
        .filter(|rm| rm.separability().is_separable())
        .collect()
}

/// A random elementary derivation of a corpus model, chosen by indices.
fn pick(m: &SullivanModel, degree_seed: usize, index_seed: usize) -> Option<Derivation> {
    let top = m.max_degree();
    let n = 1 + (degree_seed as i64) % top;
    let basis = DerBasis::new(m, n, |_| true);
    if basis.is_empty() {
        return None;
    }
    Some(basis.derivation(m.algebra(), index_seed % basis.len()))
}

fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boundary_squares_to_zero(mi in 0usize..64, d in 0usize..64, k in 0usize..512) {
        let m = &models()[mi % models().len()];
        if let Some(sigma) = pick(m, d, k) {
            prop_assert!(der_boundary(m, &der_boundary(m, &sigma)).is_zero());
        }
    }

    #[test]
    fn boundary_is_a_derivation_of_the_bracket(
        mi in 0usize..64, d1 in 0usize..64, k1 in 0usize..512, d2 in 0usize..64, k2 in 0usize..512
    ) {
        let m = &models()[mi % models().len()];
        if let (Some(s), Some(t)) = (pick(m, d1, k1), pick(m, d2, k2)) {
            let lhs = der_boundary(m, &der_bracket(m, &s, &t));
            let mut rhs = der_bracket(m, &der_boundary(m, &s), &t);
            rhs.add_scaled(&der_bracket(m, &s, &der_boundary(m, &t)), &sign(s.shift()));
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(
        mi in 0usize..64,
        seeds in prop::array::uniform6(0usize..512),
    ) {
        let m = &models()[mi % models().len()];
        let (Some(x), Some(y), Some(z)) = (
            pick(m, seeds[0], seeds[1]),
            pick(m, seeds[2], seeds[3]),
            pick(m, seeds[4], seeds[5]),
        ) else {
            return Ok(());
        };
        let (a, b) = (x.shift(), y.shift());
        let xy = der_bracket(m, &x, &y);
        let yx = der_bracket(m, &y, &x);
        prop_assert!(xy.add(&yx.scaled(&sign(a * b))).is_zero());
        let lhs = der_bracket(m, &x, &der_bracket(m, &y, &z));
        let mut rhs = der_bracket(m, &xy, &z);
        rhs.add_scaled(&der_bracket(m, &y, &der_bracket(m, &x, &z)), &sign(a * b));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn rank_nullity_and_rref_idempotence(
        rows in 1usize..6,
        cols in 1usize..6,
        entries in prop::collection::vec(-3i64..=3, 36),
    ) {
        let data: Vec<Vec<Rational>> = (0..rows)
            .map(|r| (0..cols).map(|c| q(entries[r * 6 + c])).collect())
            .collect();
        let a = RatMatrix::from_rows(data).unwrap();
        let kernel = a.kernel_basis();
        prop_assert_eq!(a.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(|x| *x == q(0)));
        }
        let once = a.rref();
        prop_assert_eq!(once.reduced.rref().reduced, once.reduced.clone());
        prop_assert_eq!(once.rank, a.rank());
    }

    #[test]
    fn multiplication_matches_oracle(
        a in prop::collection::vec((prop::collection::vec(0u32..3, 5), -3i64..=3), 1..4),
        b in prop::collection::vec((prop::collection::vec(0u32..3, 5), -3i64..=3), 1..4),
        c in prop::collection::vec((prop::collection::vec(0u32..3, 5), -3i64..=3), 1..3),
    ) {
        let gens = vec![
            Generator::new("a", 2), Generator::new("b", 3), Generator::new("c", 3),
            Generator::new("d", 4), Generator::new("e", 5),
        ];
        let alg = FreeAlgebra::new(gens.clone());
        let build = |terms: &[(Vec<u32>, i64)]| {
            let mut out = AlgElement::zero();
            for (e, k) in terms {
                let mut f = AlgElement::constant(q(*k));
                for (g, &p) in e.iter().enumerate() {
                    f = alg.multiply(&f, &alg.power(&AlgElement::generator(g), p));
                }
                out.add_scaled(&f, &q(1));
            }
            out
        };
        let (x, y, z) = (build(&a), build(&b), build(&c));
        let oracle = baut_oracle::DenseModel::new(gens.iter().map(|g| g.degree).collect(), vec![vec![]; 5]);
        let ours: std::collections::BTreeMap<_, _> = common::raw(&alg.multiply(&x, &y)).into_iter().collect();
        let theirs: std::collections::BTreeMap<_, _> =
            oracle.multiply_raw(&common::raw(&x), &common::raw(&y)).into_iter().collect();
        prop_assert_eq!(ours, theirs);
        prop_assert_eq!(
            alg.multiply(&alg.multiply(&x, &y), &z),
            alg.multiply(&x, &alg.multiply(&y, &z))
        );
        for ((mx, _), (my, _)) in x.terms().zip(y.terms()) {
            let (p, r) = (
                AlgElement::monomial(mx.clone(), q(1)),
                AlgElement::monomial(my.clone(), q(1)),
            );
            let s = sign(alg.monomial_degree(mx) * alg.monomial_degree(my));
            prop_assert_eq!(alg.multiply(&p, &r), alg.multiply(&r, &p).scaled(&s));
        }
    }

    #[test]
    fn leibniz_rule_for_the_differential(mi in 0usize..64, d1 in 0usize..64, k1 in 0usize..512, d2 in 0usize..64, k2 in 0usize..512) {
        let m = &models()[mi % models().len()];
        let alg = m.algebra();
        let mono = |d: usize, k: usize| {
            let deg = 1 + (d as i64) % 12;
            let basis = alg.monomial_basis(deg);
            (!basis.is_empty()).then(|| (deg, AlgElement::monomial(basis[k % basis.len()].clone(), q(1))))
        };
        if let (Some((da, a)), Some((_, b))) = (mono(d1, k1), mono(d2, k2)) {
            let lhs = m.d(&alg.multiply(&a, &b));
            let mut rhs = alg.multiply(&m.d(&a), &b);
            rhs.add_scaled(&alg.multiply(&a, &m.d(&b)), &sign(da));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn homology_ignores_generator_order(mi in 0usize..64, perm in Just((0usize..8).collect::<Vec<_>>()).prop_shuffle()) {
        let m = &models()[mi % models().len()];
        let order: Vec<usize> = perm.into_iter().filter(|&i| i < m.len()).collect();
        let p = m.permuted(&order);
        let (a, b) = (DerComplex::full(m), DerComplex::full(&p));
        for n in 1..=m.max_degree() {
            prop_assert_eq!(a.homology_dim(n), b.homology_dim(n));
        }
    }

    #[test]
    fn cstar_squares_to_zero_inside_the_cutoff(mi in 0usize..64, cutoff in 3i64..10) {
        let small: Vec<&SullivanModel> = models().iter().filter(|m| m.max_degree() <= 11 && m.len() <= 4).collect();
        let m = small[mi % small.len()];
        let l = FiniteDgl::from_der(m, cutoff - 1).unwrap();
        if let Ok(c) = cstar_model(&l, cutoff) {
            for i in c.d_squared_defects() {
                prop_assert_eq!(c.model.generators()[i].degree, cutoff);
            }
        }
    }

    #[test]
    fn long_exact_sequence_bookkeeping(ri in 0usize..64, n in 2i64..24) {
        let rels = separable_relatives();
        let rm = &rels[ri % rels.len()];
        let fc = FibrationComplexes::new(rm);
        let top = rm.total().max_degree();
        let n = 2 + (n - 2) % (top - 1).max(1);
        let row = fc.les_row(n);
        prop_assert!(row.holds(), "{:?}", row);
    }

    #[test]
    fn obstruction_is_linear_in_the_base_map(c in small_rational()) {
        let rm = corpus::cp2_relative();
        let base = rm.base();
        let v = base.algebra().index_of("v").unwrap();
        let hy = Derivation::elementary(base.algebra(), v, Monomial::one());
        let zero = Derivation::zero(2);
        let one = obstruction_from_parts(&rm, &hy, &zero).unwrap();
        let scaled = obstruction_from_parts(&rm, &hy.scaled(&c), &zero).unwrap();
        prop_assert!(scaled.element.sub(&one.element.scaled(&c)).is_zero());
        prop_assert_eq!(scaled.zero, c == q(0));
    }

    #[test]
    fn lie_evaluation_is_antisymmetric(mi in 0usize..64, seeds in prop::array::uniform4(0usize..512)) {
        let m = &models()[mi % models().len()];
        let (Some(x), Some(y)) = (pick(m, seeds[0], seeds[1]), pick(m, seeds[2], seeds[3])) else {
            return Ok(());
        };
        let ql = QuillenData::new(
            vec![Generator::new("a", x.shift()), Generator::new("b", y.shift())],
            vec![LieExpr::Zero, LieExpr::Zero],
            vec![],
        ).unwrap();
        let map = DglMapData::new().with(0, x.clone()).with(1, y.clone());
        let ab = lie_eval(&ql, &map, m, &LieExpr::bracket(LieExpr::Gen(0), LieExpr::Gen(1))).unwrap();
        let ba = lie_eval(&ql, &map, m, &LieExpr::bracket(LieExpr::Gen(1), LieExpr::Gen(0))).unwrap();
        prop_assert!(ab.add(&ba.scaled(&sign(x.shift() * y.shift()))).is_zero());
    }

    #[test]
    fn separability_is_monotone_in_fiber_degrees(ri in 0usize..64, extra in 2i64..16) {
        let all: Vec<RelativeModel> = corpus::workspace().relatives.iter().map(|r| r.model.clone()).collect();
        let rm = &all[ri % all.len()];
        let base = rm.base();
        let top = base.max_degree();
        let mut fibers = rm.fiber_generators().to_vec();
        fibers.push(Generator::new("extra", extra));
        let mut diffs: Vec<AlgElement> = rm.fiber_indices().map(|i| rm.total().diff_of(i).clone()).collect();
        diffs.push(AlgElement::zero());
        let grown = RelativeModel::new(&base, fibers, diffs).unwrap();
        let expected = rm.separability().is_separable() && extra >= top;
        prop_assert_eq!(grown.separability().is_separable(), expected);
    }

    #[test]
    fn dsl_round_trip_on_random_pure_models(
        evens in prop::collection::vec(prop::sample::select(vec![2i64, 4, 6]), 1..3),
        odds in prop::collection::vec(3i64..12, 1..4),
        coefs in prop::collection::vec(-3i64..=3, 64),
    ) {
        let mut gens: Vec<Generator> = evens.iter().enumerate().map(|(i, &d)| Generator::new(format!("x{i}"), d)).collect();
        let even_alg = FreeAlgebra::new(gens.clone());
        let mut diff = vec![AlgElement::zero(); gens.len()];
        let mut k = 0;
        for (j, &o) in odds.iter().enumerate() {
            let deg = if o % 2 == 0 { o + 1 } else { o };
            gens.push(Generator::new(format!("y{j}"), deg));
            let mut img = AlgElement::zero();
            for mono in even_alg.monomial_basis(deg + 1) {
                img.add_term(mono, q(coefs[k % coefs.len()]));
                k += 1;
            }
            diff.push(img);
        }
        let model = SullivanModel::new(gens, diff).unwrap();
        let ws = Workspace { models: vec![NamedModel { name: "R".into(), model }], ..Workspace::default() };
        let text = ws.to_source();
        prop_assert_eq!(dsl::parse(&text).unwrap(), ws);
    }
}

#[test]
fn corpus_round_trips_through_text() {
    let ws = corpus::workspace();
    assert_eq!(&dsl::parse(&ws.to_source()).unwrap(), ws);
}

#[test]
fn monomial_counts_match_oracle() {
    for m in models() {
        let o = common::dense(m);
        let ours: Vec<usize> = (0..=20).map(|n| m.algebra().monomial_basis(n).len()).collect();
        assert_eq!(ours, o.monomial_counts(20));
    }
}
