//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL`
//! line with the measured quantity before asserting.

use std::time::Instant;

use fricke_cli::appendix::{verify_appendix, APPENDIX_TOL};
use fricke_core::geometry::{fricke_to_triangle, triangle_to_fricke};
use fricke_core::search::{curve_point, find_nontorsion_locus, find_torsion_locus, torsion_apex_trace, Branch};
use fricke_core::words::{
    build_u_n, build_w_n, is_palindromic, parse_word, primitive_root, project_to_f2, u_n_coxeter_parts, GeneratorPair,
};
use fricke_core::{
    case_audit, classify, coxeter_extension, evaluate_cox_word, evaluate_word, in_normal_closure, is_torsion_type,
    kappa, normal_form, short_relation_scan, solve_z, trace_polynomial, Axis, ConeAngle, CoxWord, FWord, FrickePoint,
    Grid, IsometryClass, Letter, Mat2, TriangleShape,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 256;

fn pow10(e: i32) -> Float {
    Float::with_val(P, 10).pow(e)
}

fn diff(a: &Float, b: &Float) -> Float {
    Float::with_val(P, a - b).abs()
}

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n:>2}: {}  {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn random_word(rng: &mut impl Rng, min_len: usize, max_len: usize) -> FWord {
    let n = rng.gen_range(min_len..=max_len);
    FWord::from_letters((0..n).map(|_| Letter::ALL[rng.gen_range(0..4)]))
}

fn random_point(rng: &mut impl Rng) -> FrickePoint {
    loop {
        let angle = ConeAngle::from_f64(rng.gen_range(0.1..6.2), P).unwrap();
        let x = Float::with_val(P, rng.gen_range(2.01..9.0));
        let y = Float::with_val(P, rng.gen_range(2.01..9.0));
        let mut pts = solve_z(&angle, &x, &y).unwrap();
        if !pts.is_empty() {
            let i = rng.gen_range(0..pts.len());
            return pts.swap_remove(i);
        }
    }
}

/// Smallest free coordinate on `{pinned = s}`: `(s² − 4)(t² − 4) = 4(2 − c)`.
fn footprint_start(angle: &ConeAngle, s: &Float) -> Float {
    let s2 = Float::with_val(P, s * s) - 4u32;
    let rhs = Float::with_val(P, 2u32 - angle.c()) * 4u32;
    (rhs / s2 + 4u32).sqrt()
}

fn theta_one() -> ConeAngle {
    ConeAngle::from_f64(1.0, P).unwrap()
}

mod oracle {
    //! Exact-double SL(2) matrices multiplied at 256 bits.
    use super::*;

    pub type M = [Float; 4];

    fn mul(a: &M, b: &M) -> M {
        [
            Float::with_val(P, &a[0] * &b[0]) + &a[1] * &b[2],
            Float::with_val(P, &a[0] * &b[1]) + &a[1] * &b[3],
            Float::with_val(P, &a[2] * &b[0]) + &a[3] * &b[2],
            Float::with_val(P, &a[2] * &b[1]) + &a[3] * &b[3],
        ]
    }

    fn tr(a: &M) -> Float {
        Float::with_val(P, &a[0] + &a[3])
    }

    fn dyadic(rng: &mut impl Rng) -> f64 {
        f64::from(rng.gen_range(-3 * (1 << 20)..=3 * (1 << 20))) / f64::from(1 << 20)
    }

    pub fn random_sl2(rng: &mut impl Rng) -> M {
        loop {
            let a = [0.25, 0.5, 1.0, 2.0][rng.gen_range(0..4)] * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let (b, c) = (dyadic(rng), dyadic(rng));
            let d = (1.0 + b * c) / a;
            if d.abs() <= 3.0 {
                return [a, b, c, d].map(|v| Float::with_val(P, v));
            }
        }
    }

    pub fn word_trace(w: &FWord, u: &M, v: &M) -> f64 {
        let inv = |a: &M| [a[3].clone(), -a[1].clone(), -a[2].clone(), a[0].clone()];
        let (ui, vi) = (inv(u), inv(v));
        let mut acc: M = [1, 0, 0, 1].map(|v| Float::with_val(P, v));
        for l in w.letters() {
            let m = match l {
                Letter::X => u,
                Letter::XInv => &ui,
                Letter::Y => v,
                Letter::YInv => &vi,
            };
            acc = mul(&acc, m);
        }
        tr(&acc).to_f64()
    }

    pub fn poly_trace(w: &FWord, u: &M, v: &M) -> f64 {
        let r = |t: Float| Float::with_val(P, t.to_f64());
        let (x, y, z) = (r(tr(u)), r(tr(v)), r(tr(&mul(u, v))));
        trace_polynomial(w).eval(&x, &y, &z, P).to_f64()
    }
}

#[test]
fn criterion_01_trace_identity_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let w = random_word(&mut rng, 0, 12);
        let (u, v) = (oracle::random_sl2(&mut rng), oracle::random_sl2(&mut rng));
        worst = worst.max((oracle::poly_trace(&w, &u, &v) - oracle::word_trace(&w, &u, &v)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    report(1, worst < 1e-9 && secs < 60.0, format!("10^4 trials, worst error {worst:.2e}, {secs:.1} s"));
}

#[test]
fn criterion_02_kappa_identity() {
    let g = trace_polynomial(&parse_word("[X,Y]").unwrap());
    let expected = "x^2 + y^2 + z^2 - x*y*z - 2".parse().unwrap();
    let ok = g == expected && g == kappa() && g.num_terms() == 5;
    report(2, ok, format!("g_[X,Y] = {g}"));
}

#[test]
fn criterion_03_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let comm = parse_word("[X,Y]").unwrap();
    let mut worst = Float::new(P);
    for _ in 0..100 {
        let pt = random_point(&mut rng);
        let rep = normal_form(&pt);
        let errs = [
            diff(&rep.mat_x.trace(), pt.x()),
            diff(&rep.mat_y.trace(), pt.y()),
            diff(&rep.mat_x.mul(&rep.mat_y).trace(), pt.z()),
            diff(&evaluate_word(&rep, &comm).trace(), pt.angle().c()),
        ];
        for e in errs {
            worst.max_mut(&e);
        }
    }
    // heuristic stand-in for faithfulness
    let mut relations = 0;
    for _ in 0..3 {
        let rep = normal_form(&random_point(&mut rng));
        relations += short_relation_scan(&rep, 8, 1e-20).unwrap().len();
    }
    let ok = worst < pow10(-20) && relations == 0;
    report(3, ok, format!("100 points, worst error {worst:.3e}; short relations up to length 8: {relations}"));
}

#[test]
fn criterion_04_coxeter_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cox = |rep: &fricke_core::Representation, s: &str| evaluate_cox_word(rep, &CoxWord::parse(s).unwrap()).unwrap();
    let tol = pow10(-10);
    let mut ok = true;
    let mut worst_angle = Float::new(P);
    for _ in 0..100 {
        let pt = random_point(&mut rng);
        let rep = coxeter_extension(&normal_form(&pt)).unwrap();
        let minus_one = Mat2::identity(P).neg();
        for r in ["P", "Q", "R"] {
            let m = cox(&rep, r);
            ok &= m.mul(&m).distance_pm(&minus_one) < tol;
        }
        ok &= cox(&rep, "QR").distance_pm(&rep.mat_x) < tol;
        ok &= cox(&rep, "RP").distance_pm(&rep.mat_y) < tol;
        ok &= cox(&rep, "PQ").distance_pm(&rep.mat_z()) < tol;
        match classify(&cox(&rep, "QPRQPR"), 1e-30).unwrap() {
            IsometryClass::Elliptic { angle } => worst_angle.max_mut(&diff(&angle, pt.angle().theta())),
            _ => ok = false,
        }
    }
    ok &= worst_angle < tol;
    report(4, ok, format!("100 points, worst |angle((QPR)^2) - θ| = {worst_angle:.3e}"));
}

#[test]
fn criterion_05_u_n_identity() {
    let mut failures = Vec::new();
    for n in 1..=5u32 {
        let (g, r) = u_n_coxeter_parts(n);
        let projected = project_to_f2(&g.mul(&r).mul(&g.inverse()).mul(&r)).unwrap();
        let literal = parse_word(&format!("XY[X,Y]^{n} x y^2 x [y,x]^{n} YX")).unwrap();
        let palindromic = is_palindromic(&projected).is_some_and(|w| w.pair == GeneratorPair::XY);
        let primitive = primitive_root(&projected).unwrap().1 == 1;
        if projected != literal || !palindromic || !primitive || projected != build_u_n(n.into()).unwrap() {
            failures.push(n);
        }
    }
    report(5, failures.is_empty(), format!("N = 1..5, failures at {failures:?}"));
}

#[test]
fn criterion_06_newman_suite() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for n in 1..=5 {
        let out = is_torsion_type(&build_u_n(n).unwrap()).unwrap();
        let full_certificates = out.refutations.iter().all(|(_, c)| c.replay().is_ok() && !c.dead_states.is_empty());
        if out.decision || !full_certificates {
            ok = false;
            let w = out.witness.as_ref().map(|w| format!("({})^{}", w.root, w.exponent)).unwrap_or_default();
            lines.push(format!("u_{n} is of torsion type, witness {w}"));
        }
    }
    for n in [2, 3] {
        let audit = case_audit(n).unwrap();
        if !(audit.passed() && audit.families.len() == 22 && audit.duplicate_pairs.len() == 3) {
            ok = false;
            lines.push(format!("case audit N = {n} failed"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut members = 0;
    while members < 1000 {
        let r = random_word(&mut rng, 1, 4);
        if !r.is_cyclically_reduced() || r.is_empty() || primitive_root(&r).unwrap().1 != 1 {
            continue;
        }
        let m = rng.gen_range(2..=3);
        let mut u = FWord::identity();
        for _ in 0..rng.gen_range(1..=4) {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let g = random_word(&mut rng, 0, 3);
            u = u.mul(&r.pow(sign * i64::from(m)).conjugate_by(&g));
        }
        if u.is_empty() {
            continue;
        }
        if !in_normal_closure(&u, &r, m).unwrap().decision {
            ok = false;
            lines.push(format!("{u} not recognized in <<({r})^{m}>>"));
        }
        members += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    lines.push(format!("{secs:.1} s"));
    report(6, ok, lines.join("; "));
}

#[test]
fn criterion_07_phi_round_trip() {
    let mut worst = Float::new(P);
    for sum in [0.3, 1.2, 2.9] {
        for i in 1..=10 {
            for j in 1..=10 {
                let a = f64::from(i) / 11.0;
                let b = f64::from(j) / 11.0 * (1.0 - a);
                let s = Float::with_val(P, sum);
                let ta = Float::with_val(P, &s * a);
                let tb = Float::with_val(P, &s * b);
                let tc = Float::with_val(P, &s - &ta) - &tb;
                let shape = TriangleShape::new(ta, tb, tc).unwrap();
                let back = fricke_to_triangle(&triangle_to_fricke(&shape).unwrap()).unwrap();
                for (u, v) in shape.angles().into_iter().zip(back.angles()) {
                    worst.max_mut(&diff(u, v));
                }
            }
        }
    }
    let mut sym = Float::new(P);
    for x in [2.05, 2.2, 2.5, 2.9] {
        let xf = Float::with_val(P, x);
        let c = Float::with_val(P, &xf * &xf) * Float::with_val(P, 3 - &xf) - 2u32;
        let angle = ConeAngle::from_commutator_trace(&c).unwrap();
        let pt = FrickePoint::new(xf.clone(), xf.clone(), xf.clone(), angle.clone(), 1e-60).unwrap();
        let shape = fricke_to_triangle(&pt).unwrap();
        let expected = (Float::with_val(P, &xf - 1u32) / 2u32).acos();
        for t in shape.angles() {
            sym.max_mut(&diff(t, &expected));
        }
        sym.max_mut(&diff(&shape.angle_sum(), &Float::with_val(P, angle.theta() / 2u32)));
    }
    let ok = worst < pow10(-18) && sym < pow10(-15);
    report(7, ok, format!("grid worst {worst:.3e}, symmetric closed form worst {sym:.3e}"));
}

#[test]
fn criterion_08_nontorsion_locus() {
    let start = Instant::now();
    let angle = theta_one();
    let grid = Grid::parse("2.05:12:0.01").unwrap();
    let ns: Vec<u32> = (1..=64).collect();
    let found = find_nontorsion_locus(&angle, &ns, Axis::Z, &grid).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let tol = pow10(-25);
    let good: Vec<_> = found
        .iter()
        .filter(|r| r.certified && r.residuals.len() == 5 && r.residuals.iter().all(|e| *e < tol))
        .collect();
    let probe = good.first().map(|r| {
        let s = Float::with_val(P, &r.s + 1e-3);
        let t = Float::with_val(P, footprint_start(&angle, &s) + 0.3);
        let pt = curve_point(&angle, Axis::Z, &s, &t, Branch::Larger).unwrap();
        classify(&evaluate_word(&normal_form(&pt), &r.word), 1e-25).unwrap()
    });
    let hyperbolic = matches!(probe, Some(IsometryClass::Hyperbolic { .. }));
    let loci: Vec<String> = good.iter().map(|r| format!("N={} z={}", r.n, r.s.to_string_radix(10, Some(12)))).collect();
    let ok = !good.is_empty() && hyperbolic && secs < 900.0;
    report(
        8,
        ok,
        format!(
            "{} certified [{}], off-curve probe hyperbolic: {hyperbolic}, {secs:.1} s",
            good.len(),
            loci.join(", ")
        ),
    );
}

#[test]
fn criterion_09_torsion_locus() {
    let angle = theta_one();
    let q = 3;
    let grid = Grid::parse("2.05:12:0.01").unwrap();
    let ns: Vec<u32> = (1..=12).collect();
    let found = find_torsion_locus(&angle, &ns, 1, q, Axis::X, &grid).unwrap();
    let mut best = None;
    for r in found.iter().filter(|r| r.certified) {
        let mut power_err = Float::new(P);
        let mut apex_err = Float::new(P);
        for pt in &r.samples {
            let m = evaluate_word(&normal_form(pt), &r.word);
            let mut mq = Mat2::identity(P);
            for _ in 0..q {
                mq = mq.mul(&m);
            }
            power_err.max_mut(&mq.distance_pm(&Mat2::identity(P)));
            let apex = torsion_apex_trace(&angle, r.n, &r.s).unwrap();
            apex_err.max_mut(&diff(&m.trace().abs(), &apex));
        }
        if power_err < pow10(-20) && apex_err < pow10(-15) {
            best = Some((r.n, r.s.to_string_radix(10, Some(12)), power_err, apex_err));
            break;
        }
    }
    let detail = match &best {
        Some((n, s, p, a)) => format!("q = {q}: N = {n}, x = {s}, |w^q ∓ I| = {p:.3e}, apex error {a:.3e}"),
        None => format!("q = {q}: no certified locus for N ≤ 12 ({} candidates)", found.len()),
    };
    report(9, best.is_some(), detail);
}

#[test]
fn criterion_10_curve_constancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = Float::new(P);
    for _ in 0..10 {
        let angle = ConeAngle::from_f64(rng.gen_range(0.3..6.0), P).unwrap();
        let s = Float::with_val(P, rng.gen_range(2.1..6.0));
        let n = rng.gen_range(1..=4);
        let g = trace_polynomial(&build_w_n(n).unwrap());
        let t0 = footprint_start(&angle, &s);
        let values: Vec<Float> = (0..5)
            .map(|j| {
                let t = Float::with_val(P, &t0 + (0.1 + 0.7 * f64::from(j)));
                let pt = curve_point(&angle, Axis::X, &s, &t, Branch::Larger).unwrap();
                let [x, y, z] = pt.coords();
                g.eval(x, y, z, P)
            })
            .collect();
        for v in &values[1..] {
            worst.max_mut(&diff(v, &values[0]));
        }
    }
    report(10, worst < pow10(-15), format!("10 curves x 5 points, worst spread {worst:.3e}"));
}

#[test]
fn criterion_11_appendix_table() {
    let r = verify_appendix(P, APPENDIX_TOL);
    let errors: Vec<String> =
        r.rows.iter().filter_map(|row| row.max_error.map(|e| format!("{} {e:.1e}", row.name))).collect();
    let in_range = r.rows.iter().all(|row| row.commutator_in_range);
    report(11, r.passed, format!("worst cell errors [{}], all tr[a,b] in (-2,2): {in_range}", errors.join(", ")));
}
