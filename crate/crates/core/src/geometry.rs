//! Triangle shapes and their correspondence with `𝔠_θ`, plus a few upper
//! half-plane helpers (distances, fixed points, axes) used for diagnostics.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fricke::{classify, ConeAngle, FrickePoint, IsometryClass, Mat2};
use crate::real::{self, pi, to_decimal, Tolerances};

/// Interior angles of a hyperbolic triangle with vertices `O_A, O_B, O_C`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleShape {
    pub theta_a: Float,
    pub theta_b: Float,
    pub theta_c: Float,
}

impl TriangleShape {
    pub fn new(theta_a: Float, theta_b: Float, theta_c: Float) -> Result<Self> {
        let prec = theta_a.prec();
        let pi = pi(prec);
        for v in [&theta_a, &theta_b, &theta_c] {
            if !(*v > 0 && *v < pi) {
                return Err(Error::OutOfRange(format!("triangle angle {} is not in (0, π)", to_decimal(v))));
            }
        }
        let t = Self { theta_a, theta_b, theta_c };
        if t.angle_sum() >= pi {
            return Err(Error::OutOfRange("triangle angle sum must be below π".into()));
        }
        Ok(t)
    }

    pub fn from_f64(prec: u32, angles: [f64; 3]) -> Result<Self> {
        Self::new(real::real(prec, angles[0]), real::real(prec, angles[1]), real::real(prec, angles[2]))
    }

    pub fn prec(&self) -> u32 {
        self.theta_a.prec()
    }

    pub fn angles(&self) -> [&Float; 3] {
        [&self.theta_a, &self.theta_b, &self.theta_c]
    }

    pub fn angle_sum(&self) -> Float {
        Float::with_val(self.prec(), &self.theta_a + &self.theta_b) + &self.theta_c
    }

    /// Area `π − (θ_A + θ_B + θ_C)`.
    pub fn area(&self) -> Float {
        pi(self.prec()) - self.angle_sum()
    }

    /// The paired cone angle `θ = 2(θ_A + θ_B + θ_C)`.
    pub fn cone_angle(&self) -> Result<ConeAngle> {
        ConeAngle::new(self.angle_sum() * 2u32)
    }

    pub fn to_record(&self) -> TriangleRecord {
        TriangleRecord {
            schema: 1,
            theta_a: to_decimal(&self.theta_a),
            theta_b: to_decimal(&self.theta_b),
            theta_c: to_decimal(&self.theta_c),
        }
    }
}

/// JSON form of a [`TriangleShape`], angles in radians.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub schema: u32,
    #[serde(rename = "thetaA")]
    pub theta_a: String,
    #[serde(rename = "thetaB")]
    pub theta_b: String,
    #[serde(rename = "thetaC")]
    pub theta_c: String,
}

/// Side lengths; `d_A` is opposite `O_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SideLengths {
    pub d_a: Float,
    pub d_b: Float,
    pub d_c: Float,
}

/// Dual law of cosines: `cosh d_A = (cos θ_B cos θ_C + cos θ_A)/(sin θ_B sin θ_C)`.
pub fn side_lengths_from_angles(t: &TriangleShape) -> SideLengths {
    let p = t.prec();
    let side = |a: &Float, b: &Float, c: &Float| {
        let (sb, cb) = b.clone().sin_cos(Float::new(p));
        let (sc, cc) = c.clone().sin_cos(Float::new(p));
        let num = Float::with_val(p, &cb * &cc) + Float::with_val(p, a.cos_ref());
        let ch = num / (sb * sc);
        ch.acosh()
    };
    SideLengths {
        d_a: side(&t.theta_a, &t.theta_b, &t.theta_c),
        d_b: side(&t.theta_b, &t.theta_c, &t.theta_a),
        d_c: side(&t.theta_c, &t.theta_a, &t.theta_b),
    }
}

/// Law of cosines: `cos θ_A = (cosh d_B cosh d_C − cosh d_A)/(sinh d_B sinh d_C)`.
pub fn angles_from_side_lengths(s: &SideLengths) -> Result<TriangleShape> {
    let p = s.d_a.prec();
    let angle = |a: &Float, b: &Float, c: &Float| {
        let (sb, cb) = b.clone().sinh_cosh(Float::new(p));
        let (sc, cc) = c.clone().sinh_cosh(Float::new(p));
        let num = Float::with_val(p, &cb * &cc) - Float::with_val(p, a.cosh_ref());
        (num / (sb * sc)).acos()
    };
    TriangleShape::new(angle(&s.d_a, &s.d_b, &s.d_c), angle(&s.d_b, &s.d_c, &s.d_a), angle(&s.d_c, &s.d_a, &s.d_b))
}

/// `Φ`: `x = 2cosh(d_A/2)·sin(θ/4)` and cyclically, with `θ = 2·(angle sum)`.
pub fn triangle_to_fricke(t: &TriangleShape) -> Result<FrickePoint> {
    let p = t.prec();
    let angle = t.cone_angle()?;
    let sides = side_lengths_from_angles(t);
    let s4 = Float::with_val(p, angle.theta() / 4u32).sin();
    let coord = |d: &Float| Float::with_val(p, d / 2u32).cosh() * &s4 * 2u32;
    let tol = Tolerances::for_precision(p).validity;
    FrickePoint::new(coord(&sides.d_a), coord(&sides.d_b), coord(&sides.d_c), angle, tol)
}

fn cos_angle(x: &Float, y: &Float, z: &Float) -> Result<Float> {
    let p = x.prec();
    let xx = Float::with_val(p, x * x);
    let yy = Float::with_val(p, y * y);
    let zz = Float::with_val(p, z * z);
    let xyz = Float::with_val(p, x * y) * z;
    let r1 = Float::with_val(p, &xyz - &xx) - &yy;
    let r2 = Float::with_val(p, &xyz - &xx) - &zz;
    if r1 <= 0 || r2 <= 0 {
        return Err(Error::OutsideLocus(format!(
            "radicands {} and {}",
            real::to_decimal_digits(&r1, 8),
            real::to_decimal_digits(&r2, 8)
        )));
    }
    let yz = Float::with_val(p, y * z);
    let num = yz * Float::with_val(p, &xx + 2u32) - (yy + zz) * x - Float::with_val(p, &xx * x);
    Ok(num / ((r1 * r2).sqrt() * 2u32))
}

/// `Φ⁻¹` via the closed form for `cos θ_A` and its cyclic permutations.
pub fn fricke_to_triangle(pt: &FrickePoint) -> Result<TriangleShape> {
    let [x, y, z] = pt.coords();
    let ca = cos_angle(x, y, z)?;
    let cb = cos_angle(y, z, x)?;
    let cc = cos_angle(z, x, y)?;
    for c in [&ca, &cb, &cc] {
        if !(*c > -1 && *c < 1) {
            return Err(Error::OutsideLocus(format!("cos θ = {}", real::to_decimal_digits(c, 8))));
        }
    }
    TriangleShape::new(ca.acos(), cb.acos(), cc.acos())
}

/// `h = arccosh(x/2)`, the half translation length of an element of trace `x`.
pub fn half_translation_length(x: &Float) -> Result<Float> {
    if *x < 2 {
        return Err(Error::OutOfRange(format!("trace {} is below 2", to_decimal(x))));
    }
    Ok(Float::with_val(x.prec(), x / 2u32).acosh())
}

/// Angle of parallelism: `sin α = 1/cosh h`.
pub fn parallel_angle(h: &Float) -> Result<Float> {
    if *h <= 0 {
        return Err(Error::OutOfRange("parallel angle needs h > 0".into()));
    }
    Ok(Float::with_val(h.prec(), h.cosh_ref()).recip().asin())
}

/// A point of the upper half-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct UhpPoint {
    pub re: Float,
    pub im: Float,
}

impl UhpPoint {
    pub fn new(re: Float, im: Float) -> Result<Self> {
        if im <= 0 {
            return Err(Error::OutOfRange("upper half-plane point needs Im > 0".into()));
        }
        Ok(Self { re, im })
    }

    pub fn i(prec: u32) -> Self {
        Self { re: real::real(prec, 0.0), im: real::real(prec, 1.0) }
    }

    pub fn to_complex(&self) -> rug::Complex {
        rug::Complex::with_val(self.re.prec(), (&self.re, &self.im))
    }

    /// Image under the Möbius action of `m`.
    pub fn apply(&self, m: &Mat2) -> UhpPoint {
        let w = m.apply(&self.to_complex());
        let (re, im) = w.into_real_imag();
        UhpPoint { re, im }
    }
}

/// A point of `ℝ ∪ {∞}`.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Finite(Float),
    Infinity,
}

/// Hyperbolic distance: `cosh d = 1 + |p − q|²/(2 Im p Im q)`.
pub fn distance(p: &UhpPoint, q: &UhpPoint) -> Float {
    let prec = p.re.prec();
    let dr = Float::with_val(prec, &p.re - &q.re);
    let di = Float::with_val(prec, &p.im - &q.im);
    let sq = Float::with_val(prec, &dr * &dr) + Float::with_val(prec, &di * &di);
    let den = Float::with_val(prec, &p.im * &q.im) * 2u32;
    (sq / den + 1u32).acosh()
}

/// Distance from `p` to the geodesic with the given endpoints.
pub fn distance_to_geodesic(p: &UhpPoint, ends: &(BoundaryPoint, BoundaryPoint)) -> Result<Float> {
    let prec = p.re.prec();
    // Send the geodesic to the imaginary axis; then sinh d = |Re w| / |Im w|.
    let w = match ends {
        (BoundaryPoint::Finite(e1), BoundaryPoint::Finite(e2)) => {
            if e1 == e2 {
                return Err(Error::OutOfRange("geodesic endpoints coincide".into()));
            }
            let m = Mat2::new(real::real(prec, 1.0), -e1.clone(), real::real(prec, 1.0), -e2.clone());
            m.apply(&p.to_complex())
        }
        (BoundaryPoint::Finite(e), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(e)) => {
            rug::Complex::with_val(prec, (Float::with_val(prec, &p.re - e), &p.im))
        }
        _ => return Err(Error::OutOfRange("geodesic endpoints coincide".into())),
    };
    let (re, im) = w.into_real_imag();
    Ok((re.abs() / im.abs()).asinh())
}

/// The fixed point in the upper half-plane of an elliptic element.
pub fn fixed_point(m: &Mat2) -> Result<UhpPoint> {
    let tol = Tolerances::for_precision(m.prec()).identity;
    let class = classify(m, tol)?;
    if !matches!(class, IsometryClass::Elliptic { .. }) {
        return Err(Error::WrongIsometryType { expected: "elliptic", found: class.kind().to_string() });
    }
    let p = m.prec();
    let tr = m.trace();
    let disc = (4u32 - Float::with_val(p, &tr * &tr)).sqrt();
    // Elliptic with det 1 forces bc < 0, so c ≠ 0.
    let two_c = Float::with_val(p, &m.c * 2u32);
    let re = Float::with_val(p, &m.a - &m.d) / &two_c;
    let im = disc / two_c.abs();
    UhpPoint::new(re, im)
}

/// The two boundary fixed points of a hyperbolic element, repelling first.
pub fn axis_endpoints(m: &Mat2) -> Result<(BoundaryPoint, BoundaryPoint)> {
    let tol = Tolerances::for_precision(m.prec()).identity;
    let class = classify(m, tol)?;
    if !matches!(class, IsometryClass::Hyperbolic { .. }) {
        return Err(Error::WrongIsometryType { expected: "hyperbolic", found: class.kind().to_string() });
    }
    let p = m.prec();
    let tr = m.trace();
    let sq = (Float::with_val(p, &tr * &tr) - 4u32).sqrt();
    let amd = Float::with_val(p, &m.a - &m.d);
    if m.c.is_zero() {
        let finite = BoundaryPoint::Finite(Float::with_val(p, &m.b / (-amd.clone())));
        // z ↦ (a z + b)/d attracts to ∞ when |a| > |d|.
        return Ok(if Float::with_val(p, m.a.abs_ref()) > Float::with_val(p, m.d.abs_ref()) {
            (finite, BoundaryPoint::Infinity)
        } else {
            (BoundaryPoint::Infinity, finite)
        });
    }
    let two_c = Float::with_val(p, &m.c * 2u32);
    let plus = Float::with_val(p, &amd + &sq) / &two_c;
    let minus = Float::with_val(p, &amd - &sq) / &two_c;
    // A fixed point e is attracting when |c e + d| > 1.
    let deriv = |e: &Float| Float::with_val(p, &m.c * e) + &m.d;
    if Float::with_val(p, deriv(&plus).abs()) > 1u32 {
        Ok((BoundaryPoint::Finite(minus), BoundaryPoint::Finite(plus)))
    } else {
        Ok((BoundaryPoint::Finite(plus), BoundaryPoint::Finite(minus)))
    }
}

/// Whether two geodesics cross, i.e. their endpoint pairs interleave on `ℝ ∪ {∞}`.
pub fn axes_interleave(a: &(BoundaryPoint, BoundaryPoint), b: &(BoundaryPoint, BoundaryPoint)) -> bool {
    // Is p strictly inside the finite interval spanned by g? ∞ never is.
    let inside = |p: &BoundaryPoint, g: &(BoundaryPoint, BoundaryPoint)| match (p, &g.0, &g.1) {
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(l), BoundaryPoint::Finite(h)) => {
            (x > l && x < h) || (x > h && x < l)
        }
        _ => false,
    };
    let has_inf = |g: &(BoundaryPoint, BoundaryPoint)| {
        matches!(g.0, BoundaryPoint::Infinity) || matches!(g.1, BoundaryPoint::Infinity)
    };
    if !has_inf(a) {
        return inside(&b.0, a) != inside(&b.1, a);
    }
    if !has_inf(b) {
        return axes_interleave(b, a);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn f(v: f64) -> Float {
        Float::with_val(P, v)
    }

    #[test]
    fn equilateral_side_lengths() {
        let q = pi(P) / 4u32;
        let t = TriangleShape::new(q.clone(), q.clone(), q).unwrap();
        let s = side_lengths_from_angles(&t);
        let expected = Float::with_val(P, 2).sqrt() + 1u32;
        assert!((s.d_a.clone().cosh() - &expected).abs() < 1e-60);
        assert_eq!(s.d_a, s.d_b);
        let back = angles_from_side_lengths(&s).unwrap();
        assert!((back.theta_a - &t.theta_a).abs() < 1e-20);
    }

    #[test]
    fn lengths_shrink_toward_euclidean_limit() {
        let mut last = f(f64::INFINITY);
        for eps in [0.1, 0.01, 0.001, 0.0001] {
            let a = (pi(P) - f(eps)) / 3u32;
            let t = TriangleShape::new(a.clone(), a.clone(), a).unwrap();
            let d = side_lengths_from_angles(&t).d_a;
            assert!(d < last);
            last = d;
        }
        assert!(last < 0.05);
    }

    #[test]
    fn symmetric_point_round_trip() {
        let a = f(0.6).acos();
        let t = TriangleShape::new(a.clone(), a.clone(), a).unwrap();
        let pt = triangle_to_fricke(&t).unwrap();
        for c in pt.coords() {
            assert!(Float::with_val(P, c - 2.2).abs() < 1e-15);
        }
        let k = pt.kappa();
        assert!((k - pt.angle().c()).abs() < 1e-20);
    }

    #[test]
    fn inverse_symmetric_closed_form() {
        let x = Float::with_val(P, 22) / 10u32;
        let c = cos_angle(&x, &x, &x).unwrap();
        assert!((c - Float::with_val(P, 3) / 5u32).abs() < 1e-60);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TriangleShape::from_f64(P, [1.0, 1.0, 1.2]).is_err());
        assert!(TriangleShape::from_f64(P, [0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn translation_and_parallel_angle() {
        assert!(half_translation_length(&f(2.0)).unwrap().is_zero());
        let two_cosh1 = f(1.0).cosh() * 2u32;
        assert!((half_translation_length(&two_cosh1).unwrap() - 1u32).abs() < 1e-60);
        let h3 = half_translation_length(&f(3.0)).unwrap();
        assert!((h3.to_f64() - 0.962424).abs() < 1e-6);
        assert!(half_translation_length(&f(1.9)).is_err());

        let alpha = parallel_angle(&f(2.0).acosh()).unwrap();
        assert!((alpha - pi(P) / 6u32).abs() < 1e-60);
        assert!(parallel_angle(&f(0.0)).is_err());
        let near = parallel_angle(&f(1e-12)).unwrap();
        assert!((near - pi(P) / 2u32).abs() < 1e-10);
        let mut prev = pi(P);
        for k in 1..20 {
            let a = parallel_angle(&f(0.25 * f64::from(k))).unwrap();
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn fixed_point_of_rotation() {
        let rot = Mat2::rotation(&f(1.0));
        let fp = fixed_point(&rot).unwrap();
        assert!(fp.re.clone().abs() < 1e-60);
        assert!((fp.im.clone() - 1u32).abs() < 1e-60);
        let g = Mat2::from_f64(P, [2.0, 1.0, 3.0, 2.0]);
        let conj = g.mul(&rot).mul(&g.inverse());
        let fp2 = fixed_point(&conj).unwrap();
        let expected = UhpPoint::i(P).apply(&g);
        assert!(distance(&fp2, &expected) < 1e-30);
        assert!(fixed_point(&Mat2::from_f64(P, [2.0, 0.0, 0.0, 0.5])).is_err());
    }

    #[test]
    fn axis_of_diagonal() {
        let e = f(1.0).exp();
        let m = Mat2::new(e.clone(), f(0.0), f(0.0), e.recip());
        let (rep, att) = axis_endpoints(&m).unwrap();
        assert_eq!(rep, BoundaryPoint::Finite(f(0.0)));
        assert_eq!(att, BoundaryPoint::Infinity);
        assert!(axis_endpoints(&Mat2::rotation(&f(1.0))).is_err());
        let far = UhpPoint::new(f(1.0), f(1.0)).unwrap();
        let d = distance_to_geodesic(&far, &(rep, att)).unwrap();
        // sinh d = 1
        assert!((d - f(1.0).asinh()).abs() < 1e-60);
    }

    #[test]
    fn distances() {
        let a = UhpPoint::i(P);
        let b = UhpPoint::new(f(0.0), f(2.0)).unwrap();
        assert!((distance(&a, &b) - f(2.0).ln()).abs() < 1e-60);
    }

    #[test]
    fn interleaving() {
        let fin = |a: f64, b: f64| (BoundaryPoint::Finite(f(a)), BoundaryPoint::Finite(f(b)));
        assert!(axes_interleave(&fin(0.0, 2.0), &fin(1.0, 3.0)));
        assert!(!axes_interleave(&fin(0.0, 1.0), &fin(2.0, 3.0)));
        assert!(axes_interleave(&fin(0.0, 2.0), &(BoundaryPoint::Finite(f(1.0)), BoundaryPoint::Infinity)));
        assert!(!axes_interleave(&fin(0.0, 2.0), &(BoundaryPoint::Finite(f(3.0)), BoundaryPoint::Infinity)));
    }
}
