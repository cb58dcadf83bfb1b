use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use icc_core::cnf::{planted_random_3sat, CnfFormula};
use icc_core::gap::{build_expander, gap_reduce, soundness_audit};
use icc_core::generator::{random_coloring, random_hdx_instance};
use icc_core::reduction::{encode_coloring, reduce};
use icc_core::solver::{solve_backtracking, solve_via_dpll, Budget};

fn unsat8() -> CnfFormula {
    let patterns: Vec<[i64; 3]> =
        (0..8).map(|m| [1, 2, 3].map(|v: i64| if m >> (v - 1) & 1 == 1 { -v } else { v })).collect();
    CnfFormula::from_triples(3, &patterns).unwrap()
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for n in [40, 80, 160] {
        let (inst, _) = random_hdx_instance(n, n, 3, 12, n as u64).unwrap();
        group.bench_with_input(BenchmarkId::new("backtrack_hdx", n), &inst, |b, inst| {
            b.iter(|| solve_backtracking(black_box(inst), Budget::unlimited()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dpll_hdx", n), &inst, |b, inst| {
            b.iter(|| solve_via_dpll(black_box(inst), Budget::unlimited()).unwrap())
        });
    }
    let (inst, _) = reduce(&unsat8()).unwrap();
    group.sample_size(10);
    group.bench_function("backtrack_unsat8", |b| b.iter(|| solve_backtracking(black_box(&inst), Budget::unlimited())));
    group.bench_function("dpll_unsat8", |b| b.iter(|| solve_via_dpll(black_box(&inst), Budget::unlimited())));
    group.finish();
}

fn reductions(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for q in [10, 40, 160] {
        let (f, _) = planted_random_3sat(q / 2, q, q as u64).unwrap();
        group.bench_with_input(BenchmarkId::new("plain", q), &f, |b, f| b.iter(|| reduce(black_box(f)).unwrap()));
        group.bench_with_input(BenchmarkId::new("gap", q), &f, |b, f| {
            b.iter(|| gap_reduce(black_box(f), 4, 1.0, 1).unwrap())
        });
    }
    group.finish();
}

fn expanders(c: &mut Criterion) {
    let mut group = c.benchmark_group("expander");
    for (n, target) in [(12, 1.0), (16, 1.0), (64, 0.25)] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_expander(black_box(n), 4, target, 3, 200).unwrap())
        });
    }
    group.finish();
}

fn audits(c: &mut Criterion) {
    let (f, planted) = planted_random_3sat(8, 20, 5).unwrap();
    let (inst, map, params) = gap_reduce(&f, 4, 1.0, 5).unwrap();
    let witness = encode_coloring(&map, &planted).unwrap();
    let noise = random_coloring(inst.n(), 5);
    c.bench_function("audit/witness", |b| b.iter(|| soundness_audit(&map, &inst, black_box(&witness), &params)));
    c.bench_function("audit/random", |b| b.iter(|| soundness_audit(&map, &inst, black_box(&noise), &params)));
}

criterion_group!(benches, solvers, reductions, expanders, audits);
criterion_main!(benches);
