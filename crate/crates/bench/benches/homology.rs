use std::hint::black_box;

use baut_core::cohomology::cdga_cohomology;
use baut_core::corpus;
use baut_core::der::DerComplex;
use baut_core::fibration::{pi_odd_vanishing, FibrationComplexes};
use baut_core::obstruction::skeletal_lift_scan;
use criterion::{criterion_group, criterion_main, Criterion};

fn derivation_complexes(c: &mut Criterion) {
    let su6 = corpus::su6_relative();
    c.bench_function("der_complex_su6_total", |b| {
        b.iter(|| {
            let cx = DerComplex::full(black_box(su6.total()));
            (1..=cx.top_degree()).map(|n| cx.homology_dim(n)).sum::<usize>()
        })
    });
    c.bench_function("fibration_complexes_su6", |b| {
        b.iter(|| {
            let fc = FibrationComplexes::new(black_box(&su6));
            (2..=su6.total().max_degree()).map(|n| fc.les_row(n).full).sum::<usize>()
        })
    });
}

fn cohomology(c: &mut Criterion) {
    let cp2 = corpus::cp2();
    c.bench_function("cdga_cohomology_cp2_24", |b| b.iter(|| cdga_cohomology(black_box(&cp2), 24)));
    let hopf = corpus::hopf_total();
    c.bench_function("cdga_cohomology_hopf_16", |b| b.iter(|| cdga_cohomology(black_box(&hopf), 16)));
}

fn obstructions(c: &mut Criterion) {
    let ws = corpus::workspace();
    let p = corpus::problem("CP2");
    let rm = ws.relative(&p.relative).unwrap();
    let q = ws.quillen(&p.quillen).unwrap();
    c.bench_function("obstruction_scan_cp2", |b| b.iter(|| skeletal_lift_scan(rm, q, black_box(&p.problem))));
    let ex = corpus::obstructed_example();
    c.bench_function("pi_odd_example2", |b| b.iter(|| pi_odd_vanishing(black_box(&ex))));
}

criterion_group!(benches, derivation_complexes, cohomology, obstructions);
criterion_main!(benches);
