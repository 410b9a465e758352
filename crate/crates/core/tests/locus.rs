use fricke_core::search::{
    certify_locus, curve_point, find_nontorsion_locus, find_torsion_locus, torsion_apex_trace, Branch,
};
use fricke_core::words::{build_u_n, build_w_n, shift_generators};
use fricke_core::{
    classify, evaluate_word, is_torsion_type, normal_form, trace_polynomial, Axis, ConeAngle, Grid, IsometryClass,
    LocusResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 256;

fn pow10(e: i32) -> Float {
    Float::with_val(P, 10).pow(e)
}

fn theta_one() -> ConeAngle {
    ConeAngle::from_f64(1.0, P).unwrap()
}

/// Non-torsion locus of `u_19` near `z ≈ 2.3418` for `θ = 1`.
fn u19_locus(bisection_tol: f64) -> LocusResult {
    let mut grid = Grid::new(2.30, 2.40, 0.01).unwrap();
    grid.bisection_tol = bisection_tol;
    let found = find_nontorsion_locus(&theta_one(), &[19], Axis::Z, &grid).unwrap();
    assert_eq!(found.len(), 1, "{found:?}");
    found.into_iter().next().unwrap()
}

/// Smallest free coordinate on `{pinned = s}`: `(s² − 4)(t² − 4) = 4(2 − c)`.
fn footprint_start(angle: &ConeAngle, s: &Float) -> Float {
    let s2 = Float::with_val(P, s * s) - 4u32;
    let rhs = Float::with_val(P, 2u32 - angle.c()) * 4u32;
    (rhs / s2 + 4u32).sqrt()
}

#[test]
fn nontorsion_locus_is_certified() {
    let r = u19_locus(1e-30);
    assert!(r.certified);
    assert_eq!(r.word, build_u_n(19).unwrap());
    assert_eq!(r.residuals.len(), 5);
    for res in &r.residuals {
        assert!(*res < pow10(-25), "residual {res}");
    }
    for pt in &r.samples {
        assert_eq!(pt.z(), &r.s);
        let c = classify(&evaluate_word(&normal_form(pt), &r.word), 1e-25).unwrap();
        assert_eq!(c, IsometryClass::Identity);
    }
    assert!(Float::with_val(P, &r.s - 2.34177).abs() < 1e-5);
}

#[test]
fn nontorsion_word_off_the_locus_is_hyperbolic() {
    let r = u19_locus(1e-30);
    let angle = theta_one();
    for ds in [-0.01, 1e-3, 0.05] {
        let s = Float::with_val(P, &r.s + ds);
        let t = Float::with_val(P, footprint_start(&angle, &s) + 0.3);
        let pt = curve_point(&angle, Axis::Z, &s, &t, Branch::Larger).unwrap();
        let c = classify(&evaluate_word(&normal_form(&pt), &r.word), 1e-25).unwrap();
        assert!(matches!(c, IsometryClass::Hyperbolic { .. }), "ds = {ds}: {c}");
    }
}

#[test]
fn perturbed_locus_fails_certification() {
    let mut r = u19_locus(1e-30);
    r.s += 1e-3;
    let again = certify_locus(&r, 5, 1e-25).unwrap();
    assert!(!again.certified);
}

#[test]
fn finer_bisection_keeps_the_locus() {
    let coarse = u19_locus(1e-30);
    let fine = u19_locus(5e-31);
    assert!(fine.certified);
    assert_eq!(coarse.n, fine.n);
    assert!(Float::with_val(P, &coarse.s - &fine.s).abs() < 1e-29);
}

#[test]
fn certified_kernel_word_is_not_torsion_type() {
    let r = u19_locus(1e-30);
    assert!(!is_torsion_type(&r.word).unwrap().decision);
}

#[test]
fn torsion_locus_for_order_three() {
    let angle = theta_one();
    let grid = Grid::new(3.00, 3.10, 0.01).unwrap();
    let found = find_torsion_locus(&angle, &[6], 1, 3, Axis::X, &grid).unwrap();
    assert_eq!(found.len(), 1);
    let r = &found[0];
    assert!(r.certified);
    assert_eq!(r.word, build_w_n(6).unwrap());
    assert!(r.max_residual().unwrap() < pow10(-20));
    let target = Float::with_val(P, fricke_core::real::two_pi(P) / 3u32);
    for pt in &r.samples {
        assert_eq!(pt.x(), &r.s);
        let m = evaluate_word(&normal_form(pt), &r.word);
        match classify(&m, 1e-20).unwrap() {
            IsometryClass::Elliptic { angle } => assert!(Float::with_val(P, angle - &target).abs() < 1e-20),
            other => panic!("{other}"),
        }
        let apex = torsion_apex_trace(&angle, r.n, &r.s).unwrap();
        assert!(Float::with_val(P, m.trace().abs() - apex).abs() < 1e-15);
    }
}

#[test]
fn torsion_locus_on_other_axes_uses_shifted_words() {
    let angle = theta_one();
    let grid = Grid::new(3.00, 3.10, 0.01).unwrap();
    let on_x = &find_torsion_locus(&angle, &[6], 1, 3, Axis::X, &grid).unwrap()[0];
    let on_y = &find_torsion_locus(&angle, &[6], 1, 3, Axis::Y, &grid).unwrap()[0];
    assert!(on_y.certified);
    assert_eq!(on_y.s, on_x.s);
    assert_eq!(on_y.word, shift_generators(&on_x.word));
    for pt in &on_y.samples {
        assert_eq!(pt.y(), &on_y.s);
    }
}

#[test]
fn torsion_word_trace_is_constant_along_x_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let angle = ConeAngle::from_f64(rng.gen_range(0.3..6.0), P).unwrap();
        let s = Float::with_val(P, rng.gen_range(2.1..6.0));
        let n = rng.gen_range(1..=3);
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
            assert!(Float::with_val(P, v - &values[0]).abs() < 1e-15, "N = {n}: {v} vs {}", values[0]);
        }
    }
}
