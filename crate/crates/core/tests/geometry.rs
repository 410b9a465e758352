use fricke_core::geometry::{
    axes_interleave, axis_endpoints, distance_to_geodesic, fixed_point, fricke_to_triangle, side_lengths_from_angles,
    triangle_to_fricke,
};
use fricke_core::search::{curve_point, side_length_from_trace, Branch};
use fricke_core::words::vertex_rotation;
use fricke_core::{
    coxeter_extension, evaluate_cox_word, normal_form, solve_z, Axis, ConeAngle, FrickePoint, TriangleShape,
};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;

const P: u32 = 256;

fn pow10(e: i32) -> Float {
    Float::with_val(P, 10).pow(e)
}

/// The larger-`z` point over `(x, y)`, if `(x² − 4)(y² − 4) ≥ 4(2 − c)` admits one.
fn point(theta: f64, x: f64, y: f64) -> Option<FrickePoint> {
    let angle = ConeAngle::from_f64(theta, P).unwrap();
    solve_z(&angle, &Float::with_val(P, x), &Float::with_val(P, y)).unwrap().into_iter().next()
}

#[test]
fn shape_round_trip_on_grid() {
    let tol = pow10(-18);
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
                    let err = Float::with_val(P, u - v).abs();
                    assert!(err < tol, "sum {sum}, ({i},{j}): {err}");
                }
            }
        }
    }
}

#[test]
fn symmetric_closed_form() {
    for x in [2.05, 2.2, 2.5, 2.9] {
        let xf = Float::with_val(P, x);
        let c = Float::with_val(P, &xf * &xf) * Float::with_val(P, 3 - &xf) - 2u32;
        let angle = ConeAngle::from_commutator_trace(&c).unwrap();
        let pt = FrickePoint::new(xf.clone(), xf.clone(), xf.clone(), angle.clone(), 1e-60).unwrap();
        let shape = fricke_to_triangle(&pt).unwrap();
        let expected = (Float::with_val(P, &xf - 1u32) / 2u32).acos();
        for t in shape.angles() {
            assert!(Float::with_val(P, t - &expected).abs() < 1e-15);
        }
        let half = Float::with_val(P, angle.theta() / 2u32);
        assert!(Float::with_val(P, shape.angle_sum() - half).abs() < 1e-15);
    }
}

#[test]
fn side_length_is_constant_along_coordinate_curves() {
    let angle = ConeAngle::from_f64(1.0, P).unwrap();
    let s = Float::with_val(P, 3.5);
    let expected = side_length_from_trace(&angle, &s).unwrap();
    for t in [2.5, 3.0, 4.0, 6.5, 9.0] {
        let pt = curve_point(&angle, Axis::X, &s, &Float::with_val(P, t), Branch::Larger).unwrap();
        let d = side_lengths_from_angles(&fricke_to_triangle(&pt).unwrap()).d_a;
        assert!(Float::with_val(P, &d - &expected).abs() < pow10(-30), "free = {t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fricke_round_trip(theta in 0.2f64..6.0, x in 2.01f64..8.0, y in 2.01f64..8.0) {
        let pt = point(theta, x, y);
        prop_assume!(pt.is_some());
        let pt = pt.unwrap();
        let back = triangle_to_fricke(&fricke_to_triangle(&pt).unwrap()).unwrap();
        for (u, v) in pt.coords().into_iter().zip(back.coords()) {
            prop_assert!(Float::with_val(P, u - v).abs() < pow10(-18));
        }
    }

    #[test]
    fn angle_sum_is_half_the_cone_angle(theta in 0.2f64..6.0, x in 2.01f64..8.0, y in 2.01f64..8.0) {
        let pt = point(theta, x, y);
        prop_assume!(pt.is_some());
        let pt = pt.unwrap();
        let shape = fricke_to_triangle(&pt).unwrap();
        let half = Float::with_val(P, pt.angle().theta() / 2u32);
        prop_assert!(Float::with_val(P, shape.angle_sum() - half).abs() < pow10(-40));
    }

    #[test]
    fn vertex_centers_are_equidistant_from_x_axis(theta in 0.2f64..6.0, x in 2.05f64..6.0, y in 2.05f64..6.0) {
        let pt = point(theta, x, y);
        prop_assume!(pt.is_some());
        let rep = coxeter_extension(&normal_form(&pt.unwrap())).unwrap();
        let axis = axis_endpoints(&rep.mat_x).unwrap();
        let dists: Vec<Float> = ['A', 'B', 'C']
            .into_iter()
            .map(|v| {
                let m = evaluate_cox_word(&rep, &vertex_rotation(v)).unwrap();
                distance_to_geodesic(&fixed_point(&m).unwrap(), &axis).unwrap()
            })
            .collect();
        for d in &dists[1..] {
            prop_assert!(Float::with_val(P, d - &dists[0]).abs() < pow10(-40), "{} vs {}", d, dists[0]);
        }
    }

    #[test]
    fn generator_axes_cross(theta in 0.2f64..6.0, x in 2.01f64..8.0, y in 2.01f64..8.0) {
        let pt = point(theta, x, y);
        prop_assume!(pt.is_some());
        let rep = normal_form(&pt.unwrap());
        let ax = axis_endpoints(&rep.mat_x).unwrap();
        let ay = axis_endpoints(&rep.mat_y).unwrap();
        prop_assert!(axes_interleave(&ax, &ay));
    }
}
