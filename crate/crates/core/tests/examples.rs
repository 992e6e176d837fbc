//! Documented example values, checked through the public API.

use baut_core::cohomology::{borel_extend, cdga_cohomology, f0_certify, halperin_test, FiniteGradedRing, halperin_ring_test};
use baut_core::corpus;
use baut_core::der::{der_homology, pi_aut_dims};
use baut_core::fibration::{fiber_dims_formula, pi_odd_vanishing, rel_der_homology, RhoImage};
use baut_core::{dsl, AlgElement, Generator, Monomial, Rational, SullivanModel};

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

#[test]
fn rational_homotopy_of_baut_s4() {
    let dims = pi_aut_dims(&corpus::s4(), 2..=9);
    assert_eq!(dims.iter().filter(|(_, d)| *d > 0).collect::<Vec<_>>(), vec![&(8, 1)]);
    assert_eq!(pi_aut_dims(&corpus::s4(), 2..=2), vec![(2, 0)]);
}

#[test]
fn odd_sphere_has_one_class() {
    assert_eq!(pi_aut_dims(&corpus::s3(), 2..=6), vec![(2, 0), (3, 0), (4, 1), (5, 0), (6, 0)]);
    let (dim, classes) = der_homology(&corpus::s3(), 3);
    assert_eq!(dim, 1);
    assert_eq!(classes[0].representative.display(corpus::s3().algebra()), "(v,1)");
}

#[test]
fn counter_two_base_has_one_class() {
    let base = corpus::counter_two().base();
    let total: usize = (1..=5).map(|n| der_homology(&base, n).0).sum();
    assert_eq!(total, 1);
    let (_, classes) = der_homology(&base, 5);
    assert_eq!(classes[0].representative.display(base.algebra()), "(v3,1)");
}

#[test]
fn sphere_cohomology() {
    assert_eq!(cdga_cohomology(&corpus::s3(), 6).dims, vec![1, 0, 0, 1, 0, 0, 0]);
    assert_eq!(cdga_cohomology(&corpus::s4(), 12).dims, vec![1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn free_circle_action_on_s3() {
    let ws = corpus::workspace();
    let ext = ws.borel("BS3").unwrap();
    let (_, report) = borel_extend(ext.base(), 1, ext.total().diff_images().to_vec(), 8).unwrap();
    assert_eq!(report.table.dims, vec![1, 0, 1, 0, 0, 0, 0, 0, 0]);
    assert!(!report.growth_at_cutoff);
}

#[test]
fn product_action_grows() {
    let s3 = corpus::s3();
    let (_, report) = borel_extend(&s3, 1, vec![AlgElement::zero(), AlgElement::zero()], 9).unwrap();
    assert_eq!(report.table.dims, vec![1, 0, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert!(report.growth_at_cutoff);
}

#[test]
fn f0_and_halperin() {
    for m in [corpus::s2(), corpus::s4(), corpus::s6(), corpus::cp2()] {
        assert!(f0_certify(&m).unwrap().is_f0);
        assert!(halperin_test(&m).unwrap().holds);
    }
    let v = f0_certify(&corpus::cp2()).unwrap();
    assert_eq!(v.formal_dimension, 4);
    // ℚ[x,y]/(x², xy, y²) with |x| = 2, |y| = 4 carries θ(y) = x.
    let ring = FiniteGradedRing::new(
        vec![Generator::new("x", 2), Generator::new("y", 4)],
        vec![
            AlgElement::monomial(Monomial::from_exponents(vec![2]), q(1)),
            AlgElement::monomial(Monomial::from_exponents(vec![1, 1]), q(1)),
            AlgElement::monomial(Monomial::from_exponents(vec![0, 2]), q(1)),
        ],
    )
    .unwrap();
    let verdict = halperin_ring_test(&ring);
    assert!(!verdict.holds);
    assert_eq!(verdict.witness.unwrap().k, 2);
}

#[test]
fn pi_odd_examples() {
    let first = pi_odd_vanishing(&corpus::liftable_example()).unwrap();
    assert!(first.vanishes);
    let second = pi_odd_vanishing(&corpus::obstructed_example()).unwrap();
    assert!(!second.vanishes);
    assert_eq!(second.witnesses.len(), 2);
    let rm = corpus::obstructed_example();
    let (dim, classes) = rel_der_homology(&rm, 2);
    assert_eq!(dim, 2);
    let mut shown: Vec<String> = classes.iter().map(|c| c.representative.display(rm.total().algebra())).collect();
    shown.sort();
    assert_eq!(shown, vec!["(w,v1)", "(w,v2)"]);
}

#[test]
fn fiber_formula_on_counter_one() {
    let rm = corpus::counter_one();
    let rho = RhoImage::new(&rm, 12).unwrap();
    assert!(rho.is_subcomplex());
    let formula: Vec<usize> = (1..=10).map(|n| fiber_dims_formula(&rm, n, 12).unwrap()).collect();
    assert_eq!(formula, vec![0, 2, 0, 1, 1, 0, 1, 0, 0, 0]);
    for n in 1..=10 {
        assert_eq!(formula[(n - 1) as usize], rho.chain_dim(n));
        assert_eq!(rho.homology_dim(n), rel_der_homology(&rm, n).0, "degree {n}");
    }
}

#[test]
fn dsl_examples() {
    let ws = dsl::parse("model S4 { gen x:4; gen y:7; d y = x^2; }").unwrap();
    let m: &SullivanModel = ws.model("S4").unwrap();
    assert!(m.validate().passed());
    let ws = dsl::parse("model S3 { gen v1:3; } relative f : S3 -> total { fiber w1:5; fiber w2:7; D w2 = v1*w1; }").unwrap();
    assert_eq!(ws.relative("f").unwrap(), &corpus::counter_one());
    let e = dsl::parse("model S4 { gen x:4; gen y:7; d y = x; }").unwrap_err();
    assert!(e.message.contains("image degree 4, expected 8"));
}
