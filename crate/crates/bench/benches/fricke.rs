use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rug::Float;

use fricke_core::search::{find_nontorsion_locus, find_torsion_locus};
use fricke_core::words::{build_u_n, build_w_n, parse_word};
use fricke_core::{evaluate_word, in_normal_closure, is_torsion_type, normal_form, solve_z, trace_polynomial};
use fricke_core::{Axis, ConeAngle, Grid};

const P: u32 = 256;

fn trace_polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_polynomial");
    for n in [2i64, 8, 32] {
        let u = build_u_n(n).unwrap();
        g.bench_with_input(BenchmarkId::new("u_N", n), &u, |b, u| b.iter(|| trace_polynomial(black_box(u))));
        let w = build_w_n(n).unwrap();
        g.bench_with_input(BenchmarkId::new("w_N", n), &w, |b, w| b.iter(|| trace_polynomial(black_box(w))));
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let angle = ConeAngle::from_f64(1.0, P).unwrap();
    let pt = solve_z(&angle, &Float::with_val(P, 3.0), &Float::with_val(P, 3.5)).unwrap().remove(0);
    let rep = normal_form(&pt);
    let mut g = c.benchmark_group("evaluate_word");
    for n in [8i64, 64] {
        let u = build_u_n(n).unwrap();
        g.bench_with_input(BenchmarkId::new("u_N", n), &u, |b, u| b.iter(|| evaluate_word(&rep, black_box(u))));
    }
    g.finish();
}

fn newman(c: &mut Criterion) {
    let mut g = c.benchmark_group("newman");
    let member = parse_word("XYXYxyxyyxyxYXYX").unwrap();
    let r = parse_word("XY").unwrap();
    g.bench_function("member u_1 in <<(XY)^2>>", |b| b.iter(|| in_normal_closure(black_box(&member), &r, 2)));
    for n in [2i64, 5] {
        let u = build_u_n(n).unwrap();
        g.bench_with_input(BenchmarkId::new("is_torsion_type u_N", n), &u, |b, u| b.iter(|| is_torsion_type(u)));
    }
    g.finish();
}

fn loci(c: &mut Criterion) {
    let angle = ConeAngle::from_f64(1.0, P).unwrap();
    let mut g = c.benchmark_group("locus");
    g.sample_size(10);
    let grid = Grid::new(2.30, 2.40, 0.01).unwrap();
    g.bench_function("non-torsion u_19 on z", |b| b.iter(|| find_nontorsion_locus(&angle, &[19], Axis::Z, &grid)));
    let grid = Grid::new(3.00, 3.10, 0.01).unwrap();
    g.bench_function("torsion 1/3 w_6 on x", |b| b.iter(|| find_torsion_locus(&angle, &[6], 1, 3, Axis::X, &grid)));
    g.finish();
}

criterion_group!(benches, trace_polynomials, evaluation, newman, loci);
criterion_main!(benches);
