use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quantinv_core::exactnum::{IntPolynomial, Interval, Rational};
use quantinv_core::invertibility::{analyze, counterexample_expansive, epsilon_bounds, invariant_orbit_search, AnalyzeOptions};
use quantinv_core::mahler::mahler_measure;
use quantinv_core::oracle::{bruteforce_indistinguishable, check_minor_gcd, kronecker_density_probe, psi_matrix, BruteforceOptions};
use quantinv_core::sysmodel::{Coefficient, NormalizedSystem, QuantizedSystem};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn mahler(c: &mut Criterion) {
    let mut group = c.benchmark_group("mahler_measure");
    let tol = r("1/1000000000");
    for (name, coeffs) in [
        ("golden", vec![-1, -1, 1]),
        ("cyclotomic12", vec![1, 0, -1, 0, 1]),
        ("deg8", vec![3, -7, 2, 9, -4, 1, 6, -2, 5]),
    ] {
        let p = IntPolynomial::from_i64s(&coeffs);
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| mahler_measure(black_box(p), &tol).unwrap())
        });
    }
    group.finish();
}

fn epsilon(c: &mut Criterion) {
    let phi: Coefficient = quantinv_core::exactnum::make_algebraic(
        &IntPolynomial::from_i64s(&[-1, -1, 1]),
        &Interval::closed(r("1"), r("2")).unwrap(),
    )
    .unwrap()
    .into();
    let rational: Coefficient = r("10/9").into();
    c.bench_function("epsilon_bounds/rational", |b| b.iter(|| epsilon_bounds(black_box(&rational)).unwrap()));
    c.bench_function("epsilon_bounds/golden", |b| b.iter(|| epsilon_bounds(black_box(&phi)).unwrap()));
}

fn orbit(c: &mut Criterion) {
    let a: Coefficient = r("10/9").into();
    let vs = vec![r("-1/2"), r("0"), r("1/2")];
    let target = Interval::open(r("-9/10"), r("9/10")).unwrap();
    c.bench_function("orbit_search/10_9", |b| {
        b.iter(|| invariant_orbit_search(black_box(&a), &vs, &target, 8, 64).unwrap())
    });
}

fn counterexample(c: &mut Criterion) {
    let a: Coefficient = r("3").into();
    let inputs = vec![r("0"), r("1")];
    let mut group = c.benchmark_group("counterexample");
    for length in [20usize, 80] {
        group.bench_with_input(BenchmarkId::from_parameter(length), &length, |b, &n| {
            b.iter(|| counterexample_expansive(black_box(&a), &inputs, n).unwrap())
        });
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let sys = NormalizedSystem::new(r("3").into(), vec![r("0"), r("1")]).unwrap();
    let uldi = NormalizedSystem::new(r("3/2").into(), vec![r("0"), r("3")]).unwrap();
    let opts = BruteforceOptions::default();
    c.bench_function("bruteforce/witness_depth6", |b| {
        b.iter(|| bruteforce_indistinguishable(black_box(&sys), 6, &opts).unwrap())
    });
    c.bench_function("bruteforce/exhaust_depth6", |b| {
        b.iter(|| bruteforce_indistinguishable(black_box(&uldi), 6, &opts).unwrap())
    });
}

fn lattice(c: &mut Criterion) {
    let m = psi_matrix(&IntPolynomial::from_i64s(&[3, -1, 4, 1, -5]), 6).unwrap();
    c.bench_function("minor_gcd/k4_j6", |b| b.iter(|| check_minor_gcd(black_box(&m))));
    let a: Coefficient = r("3/2").into();
    c.bench_function("kronecker_probe/j4_grid1e4", |b| {
        b.iter(|| kronecker_density_probe(black_box(&a), 4, &[0.1, 0.7, 0.3, 0.9], 10_000).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let systems = [
        ("uldi", QuantizedSystem::unit(r("3/2").into(), vec![r("0"), r("3")]).unwrap()),
        ("orbit", QuantizedSystem::unit(r("10/9").into(), vec![r("0"), r("1/2")]).unwrap()),
        ("counterexample", QuantizedSystem::unit(r("3").into(), vec![r("0"), r("1")]).unwrap()),
    ];
    let mut group = c.benchmark_group("analyze");
    for (name, sys) in &systems {
        group.bench_with_input(BenchmarkId::from_parameter(name), sys, |b, s| {
            b.iter(|| analyze(black_box(s), &AnalyzeOptions::default()))
        });
    }
    group.finish();
}

criterion_group!(benches, mahler, epsilon, orbit, counterexample, bruteforce, lattice, pipeline);
criterion_main!(benches);
