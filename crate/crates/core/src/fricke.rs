//! The Fricke–Klein space `𝔠_θ`: cone angles, points, holonomy matrices in
//! normal form, Coxeter extensions, word evaluation and isometry classification.

use std::fmt;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{self, pi, to_decimal, two_pi, wrap_two_pi, Tolerances};
use crate::tracepoly::kappa;
use crate::words::{cyclic_reduce, CoxWord, FWord, Letter, Reflection};

/// A cone angle `θ ∈ (0, 2π)` together with `c = −2cos(θ/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeAngle {
    theta: Float,
    c: Float,
}

impl ConeAngle {
    pub fn new(theta: Float) -> Result<Self> {
        let prec = theta.prec();
        if !(theta > 0 && theta < two_pi(prec)) {
            return Err(Error::ConeAngle(to_decimal(&theta)));
        }
        let c = Float::with_val(prec, &theta / 2u32).cos() * -2i32;
        Ok(Self { theta, c })
    }

    pub fn from_f64(theta: f64, prec: u32) -> Result<Self> {
        Self::new(Float::with_val(prec, theta))
    }

    /// The angle whose commutator trace is `c`, i.e. `θ = 2·arccos(−c/2)`.
    pub fn from_commutator_trace(c: &Float) -> Result<Self> {
        let prec = c.prec();
        if !(*c > -2 && *c < 2) {
            return Err(Error::InvalidPoint(format!("κ = {} is outside (−2, 2)", to_decimal(c))));
        }
        let theta = (Float::with_val(prec, c / 2u32) * -1i32).acos() * 2u32;
        Self::new(theta)
    }

    pub fn theta(&self) -> &Float {
        &self.theta
    }

    /// `−2cos(θ/2)`, the value of `κ` on `𝔠_θ`.
    pub fn c(&self) -> &Float {
        &self.c
    }

    pub fn prec(&self) -> u32 {
        self.theta.prec()
    }
}

/// A point `(x, y, z)` of `𝔠_θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrickePoint {
    x: Float,
    y: Float,
    z: Float,
    angle: ConeAngle,
}

impl FrickePoint {
    /// Validates `x, y, z > 2` and `|κ(x,y,z) − c| < tol`.
    pub fn new(x: Float, y: Float, z: Float, angle: ConeAngle, tol: f64) -> Result<Self> {
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            if *v <= 2 {
                return Err(Error::InvalidPoint(format!("{name} = {} is not above 2", to_decimal(v))));
            }
        }
        let prec = angle.prec();
        let k = kappa().eval(&x, &y, &z, prec);
        let dev = Float::with_val(prec, &k - angle.c()).abs();
        if dev >= tol {
            return Err(Error::InvalidPoint(format!(
                "κ − c = {} exceeds tolerance {tol:e}",
                real::to_decimal_digits(&dev, 6)
            )));
        }
        Ok(Self { x, y, z, angle })
    }

    /// Builds a point from its coordinates alone; the cone angle is read off `κ`.
    pub fn from_coords(x: Float, y: Float, z: Float) -> Result<Self> {
        let prec = x.prec().max(y.prec()).max(z.prec());
        let k = kappa().eval(&x, &y, &z, prec);
        let angle = ConeAngle::from_commutator_trace(&k)?;
        let tol = Tolerances::for_precision(prec).validity;
        Self::new(x, y, z, angle, tol)
    }

    pub fn x(&self) -> &Float {
        &self.x
    }

    pub fn y(&self) -> &Float {
        &self.y
    }

    pub fn z(&self) -> &Float {
        &self.z
    }

    pub fn coords(&self) -> [&Float; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn angle(&self) -> &ConeAngle {
        &self.angle
    }

    pub fn prec(&self) -> u32 {
        self.angle.prec()
    }

    pub fn kappa(&self) -> Float {
        kappa().eval(&self.x, &self.y, &self.z, self.prec())
    }

    /// The point `(y, z, x)`: the traces of the representation precomposed with
    /// the automorphism `X → Y → Z → X`.
    pub fn shifted(&self) -> FrickePoint {
        FrickePoint { x: self.y.clone(), y: self.z.clone(), z: self.x.clone(), angle: self.angle.clone() }
    }

    pub fn to_record(&self) -> FrickePointRecord {
        FrickePointRecord {
            schema: 1,
            theta: to_decimal(self.angle.theta()),
            x: to_decimal(&self.x),
            y: to_decimal(&self.y),
            z: to_decimal(&self.z),
            precision_bits: self.prec(),
        }
    }

    pub fn from_record(r: &FrickePointRecord) -> Result<Self> {
        let p = r.precision_bits;
        let angle = ConeAngle::new(real::parse_real(&r.theta, p)?)?;
        let (x, y, z) = (real::parse_real(&r.x, p)?, real::parse_real(&r.y, p)?, real::parse_real(&r.z, p)?);
        Self::new(x, y, z, angle, Tolerances::for_precision(p).validity)
    }
}

/// JSON form of a [`FrickePoint`]; reals are decimal strings at full precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrickePointRecord {
    pub schema: u32,
    pub theta: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub precision_bits: u32,
}

/// Real roots `t > 2` of `t² − ab·t + (a² + b² − 2 − c) = 0`, larger root first.
pub(crate) fn solve_quadratic_coordinate(c: &Float, a: &Float, b: &Float) -> Vec<Float> {
    let prec = c.prec();
    let ab = Float::with_val(prec, a * b);
    let konst = Float::with_val(prec, a * a) + Float::with_val(prec, b * b) - 2u32 - c;
    let disc = Float::with_val(prec, &ab * &ab) - konst * 4u32;
    if disc < 0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let mut roots = vec![Float::with_val(prec, &ab + &sq) / 2u32];
    if sq > 0 {
        roots.push(Float::with_val(prec, &ab - &sq) / 2u32);
    }
    roots.retain(|t| *t > 2);
    roots
}

/// Points of `𝔠_θ` above `(x, y)`: zero, one or two, larger `z` first.
pub fn solve_z(angle: &ConeAngle, x: &Float, y: &Float) -> Result<Vec<FrickePoint>> {
    if *x <= 2 || *y <= 2 {
        return Err(Error::InvalidPoint("solve_z needs x, y > 2".into()));
    }
    let tol = Tolerances::for_precision(angle.prec()).validity;
    solve_quadratic_coordinate(angle.c(), x, y)
        .into_iter()
        .map(|z| FrickePoint::new(x.clone(), y.clone(), z, angle.clone(), tol))
        .collect()
}

/// A real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub d: Float,
}

impl Mat2 {
    pub fn new(a: Float, b: Float, c: Float, d: Float) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_f64(prec: u32, e: [f64; 4]) -> Self {
        Self::new(real::real(prec, e[0]), real::real(prec, e[1]), real::real(prec, e[2]), real::real(prec, e[3]))
    }

    pub fn identity(prec: u32) -> Self {
        Self::from_f64(prec, [1.0, 0.0, 0.0, 1.0])
    }

    /// Counterclockwise rotation by `psi` about `i` in the upper half-plane.
    pub fn rotation(psi: &Float) -> Self {
        let prec = psi.prec();
        let half = Float::with_val(prec, psi / 2u32);
        let (s, c) = half.sin_cos(Float::new(prec));
        Self::new(c.clone(), s.clone(), -s, c)
    }

    pub fn prec(&self) -> u32 {
        self.a.prec()
    }

    pub fn entries(&self) -> [&Float; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.prec().max(o.prec());
        let dot =
            |x1: &Float, y1: &Float, x2: &Float, y2: &Float| Float::with_val(p, x1 * y1) + Float::with_val(p, x2 * y2);
        Mat2 {
            a: dot(&self.a, &o.a, &self.b, &o.c),
            b: dot(&self.a, &o.b, &self.b, &o.d),
            c: dot(&self.c, &o.a, &self.d, &o.c),
            d: dot(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let p = self.prec();
        Mat2 {
            a: Float::with_val(p, &self.a - &o.a),
            b: Float::with_val(p, &self.b - &o.b),
            c: Float::with_val(p, &self.c - &o.c),
            d: Float::with_val(p, &self.d - &o.d),
        }
    }

    pub fn scale(&self, s: &Float) -> Mat2 {
        let p = self.prec();
        Mat2 {
            a: Float::with_val(p, &self.a * s),
            b: Float::with_val(p, &self.b * s),
            c: Float::with_val(p, &self.c * s),
            d: Float::with_val(p, &self.d * s),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone(), d: -self.d.clone() }
    }

    pub fn det(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.a * &self.d) - Float::with_val(p, &self.b * &self.c)
    }

    pub fn trace(&self) -> Float {
        Float::with_val(self.prec(), &self.a + &self.d)
    }

    /// Inverse via the adjugate divided by the determinant.
    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2 {
            a: Float::with_val(self.prec(), &self.d / &det),
            b: -Float::with_val(self.prec(), &self.b / &det),
            c: -Float::with_val(self.prec(), &self.c / &det),
            d: Float::with_val(self.prec(), &self.a / &det),
        }
    }

    pub fn pow(&self, k: u32) -> Mat2 {
        let mut acc = Mat2::identity(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn max_abs_entry(&self) -> Float {
        real::max_abs(self.entries()).expect("four entries")
    }

    /// `‖self − other‖∞` (max entry distance).
    pub fn distance(&self, other: &Mat2) -> Float {
        self.sub(other).max_abs_entry()
    }

    /// `min(‖self − I‖∞, ‖self + I‖∞)`: the distance to the identity of PSL(2,ℝ).
    pub fn distance_to_identity(&self) -> Float {
        let id = Mat2::identity(self.prec());
        let plus = self.distance(&id);
        let minus = self.distance(&id.neg());
        if plus <= minus {
            plus
        } else {
            minus
        }
    }

    /// `min(‖self − o‖∞, ‖self + o‖∞)`.
    pub fn distance_pm(&self, o: &Mat2) -> Float {
        let plus = self.distance(o);
        let minus = self.distance(&o.neg());
        if plus <= minus {
            plus
        } else {
            minus
        }
    }

    /// Möbius action `z ↦ (az + b)/(cz + d)` on a finite complex point.
    pub fn apply(&self, z: &Complex) -> Complex {
        let p = self.prec();
        let num = Complex::with_val(p, z * &self.a) + &self.b;
        let den = Complex::with_val(p, z * &self.c) + &self.d;
        Complex::with_val(p, num / den)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: &Float| real::to_decimal_digits(x, 12);
        write!(f, "[[{}, {}], [{}, {}]]", s(&self.a), s(&self.b), s(&self.c), s(&self.d))
    }
}

/// Images of the three side involutions under the Coxeter extension.
#[derive(Clone, Debug, PartialEq)]
pub struct CoxeterImages {
    pub p: Mat2,
    pub q: Mat2,
    pub r: Mat2,
}

impl CoxeterImages {
    pub fn get(&self, l: Reflection) -> &Mat2 {
        match l {
            Reflection::P => &self.p,
            Reflection::Q => &self.q,
            Reflection::R => &self.r,
        }
    }
}

/// A holonomy representation in normal form, optionally with its Coxeter extension.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub mat_x: Mat2,
    pub mat_y: Mat2,
    mat_x_inv: Mat2,
    mat_y_inv: Mat2,
    pub coxeter: Option<CoxeterImages>,
    pub point: FrickePoint,
}

impl Representation {
    pub fn prec(&self) -> u32 {
        self.point.prec()
    }

    pub fn letter(&self, l: Letter) -> &Mat2 {
        match l {
            Letter::X => &self.mat_x,
            Letter::XInv => &self.mat_x_inv,
            Letter::Y => &self.mat_y,
            Letter::YInv => &self.mat_y_inv,
        }
    }

    /// `Z = (XY)⁻¹`.
    pub fn mat_z(&self) -> Mat2 {
        self.mat_y_inv.mul(&self.mat_x_inv)
    }
}

/// `X = [[x, −1], [1, 0]]`, `Y = [[0, ζ⁻¹], [−ζ, y]]` with `ζ + ζ⁻¹ = z`, `ζ ≥ 1`.
pub fn normal_form(point: &FrickePoint) -> Representation {
    let p = point.prec();
    let z = point.z();
    let zeta = (Float::with_val(p, z * z) - 4u32).sqrt() + z;
    let zeta = zeta / 2u32;
    let zeta_inv = Float::with_val(p, zeta.recip_ref());
    let mat_x = Mat2::new(point.x().clone(), real::real(p, -1.0), real::real(p, 1.0), real::real(p, 0.0));
    let mat_y = Mat2::new(real::real(p, 0.0), zeta_inv, -zeta, point.y().clone());
    let mat_x_inv = mat_x.inverse();
    let mat_y_inv = mat_y.inverse();
    Representation { mat_x, mat_y, mat_x_inv, mat_y_inv, coxeter: None, point: point.clone() }
}

fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    let scale = {
        let m = b.max_abs_entry();
        if m < 1 {
            Float::with_val(m.prec(), 1)
        } else {
            m
        }
    };
    a.distance(b) < scale * tol
}

fn close_pm(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    close(a, b, tol) || close(a, &b.neg(), tol)
}

/// Fills in `P, Q, R` with `R = (XY − YX)/√(2 − κ)`, `Q = X·R⁻¹`, `P = R⁻¹·Y`,
/// then checks every relation of the extension.
pub fn coxeter_extension(rep: &Representation) -> Result<Representation> {
    let p = rep.prec();
    let k = rep.point.kappa();
    if k >= 2 {
        return Err(Error::ReducibleLocus(to_decimal(&k)));
    }
    let xy = rep.mat_x.mul(&rep.mat_y);
    let yx = rep.mat_y.mul(&rep.mat_x);
    let denom = Float::with_val(p, 2 - &k).sqrt();
    let r = xy.sub(&yx).scale(&denom.recip());
    let r_inv = r.neg();
    let q = rep.mat_x.mul(&r_inv);
    let pm = r_inv.mul(&rep.mat_y);

    let tol = Tolerances::for_precision(p).identity;
    let minus_id = Mat2::identity(p).neg();
    let mat_z = rep.mat_z();
    for (name, m) in [("P", &pm), ("Q", &q), ("R", &r)] {
        if !close(&m.mul(m), &minus_id, tol) {
            return Err(Error::CoxeterSigns(format!("{name}² is not −I")));
        }
    }
    if !close_pm(&q.mul(&r), &rep.mat_x, tol) {
        return Err(Error::CoxeterSigns("QR ≠ ±X".into()));
    }
    if !close_pm(&r.mul(&pm), &rep.mat_y, tol) {
        return Err(Error::CoxeterSigns("RP ≠ ±Y".into()));
    }
    if !close_pm(&pm.mul(&q), &mat_z, tol) {
        return Err(Error::CoxeterSigns("PQ ≠ ±Z".into()));
    }
    let mut out = rep.clone();
    out.coxeter = Some(CoxeterImages { p: pm, q, r });
    Ok(out)
}

/// Product of the generator images along `w`.
pub fn evaluate_word(rep: &Representation, w: &FWord) -> Mat2 {
    w.letters().iter().fold(Mat2::identity(rep.prec()), |acc, &l| acc.mul(rep.letter(l)))
}

/// Product along a Coxeter word; needs [`coxeter_extension`] first.
pub fn evaluate_cox_word(rep: &Representation, w: &CoxWord) -> Result<Mat2> {
    let cox = rep
        .coxeter
        .as_ref()
        .ok_or_else(|| Error::Internal("Coxeter word evaluated before coxeter_extension".into()))?;
    Ok(w.letters().iter().fold(Mat2::identity(rep.prec()), |acc, &l| acc.mul(cox.get(l))))
}

/// Classification of an element of PSL(2,ℝ).
#[derive(Clone, Debug, PartialEq)]
pub enum IsometryClass {
    Identity,
    /// Counterclockwise rotation by `angle ∈ (0, 2π)`.
    Elliptic {
        angle: Float,
    },
    Parabolic,
    /// Translation along the axis by `length > 0`.
    Hyperbolic {
        length: Float,
    },
}

impl IsometryClass {
    pub fn kind(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic { .. } => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
        }
    }

    pub fn to_record(&self) -> IsometryRecord {
        let (angle, length) = match self {
            IsometryClass::Elliptic { angle } => (Some(to_decimal(angle)), None),
            IsometryClass::Hyperbolic { length } => (None, Some(to_decimal(length))),
            _ => (None, None),
        };
        IsometryRecord { schema: 1, kind: self.kind().to_string(), angle, length }
    }
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsometryClass::Elliptic { angle } => write!(f, "elliptic (angle {})", real::to_decimal_digits(angle, 15)),
            IsometryClass::Hyperbolic { length } => {
                write!(f, "hyperbolic (length {})", real::to_decimal_digits(length, 15))
            }
            other => f.write_str(other.kind()),
        }
    }
}

/// JSON form of an [`IsometryClass`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryRecord {
    pub schema: u32,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub angle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub length: Option<String>,
}

const DET_FAR: f64 = 1e-8;

/// Classifies `m` as an isometry of the upper half-plane.
///
/// `tol` governs both the identity test and the parabolic band `||tr| − 2| < tol`.
pub fn classify(m: &Mat2, tol: f64) -> Result<IsometryClass> {
    let p = m.prec();
    let det = m.det();
    if Float::with_val(p, &det - 1u32).abs() > DET_FAR {
        return Err(Error::Determinant(real::to_decimal_digits(&det, 12)));
    }
    if m.distance_to_identity() < tol {
        return Ok(IsometryClass::Identity);
    }
    let tr = m.trace();
    let abs_tr = Float::with_val(p, tr.abs_ref());
    let gap = Float::with_val(p, &abs_tr - 2u32);
    if Float::with_val(p, gap.abs_ref()) < tol {
        return Ok(IsometryClass::Parabolic);
    }
    if gap > 0 {
        let length = Float::with_val(p, &abs_tr / 2u32).acosh() * 2u32;
        return Ok(IsometryClass::Hyperbolic { length });
    }
    // cos t = tr/2, sin t has the sign of −c (equivalently of b).
    let half = Float::with_val(p, &tr / 2u32);
    let sin_abs = (1u32 - Float::with_val(p, &half * &half)).sqrt();
    let direction_positive =
        if Float::with_val(p, m.c.abs_ref()) >= Float::with_val(p, m.b.abs_ref()) { m.c < 0 } else { m.b > 0 };
    let sin_t = if direction_positive { sin_abs } else { -sin_abs };
    let t = sin_t.atan2(&half);
    let angle = wrap_two_pi(&(t * 2u32));
    Ok(IsometryClass::Elliptic { angle })
}

/// Reduced words `1 ≤ |w| ≤ max_len` (one per conjugacy/inversion class) whose
/// image is within `tol` of `±I`, each with its residual.
pub fn short_relation_scan(rep: &Representation, max_len: usize, tol: f64) -> Result<Vec<(FWord, Float)>> {
    if max_len == 0 {
        return Err(Error::OutOfRange("short_relation_scan needs max_len ≥ 1".into()));
    }
    let mut found = Vec::new();
    let mut prefix: Vec<Letter> = Vec::with_capacity(max_len);
    let mut mats: Vec<Mat2> = vec![Mat2::identity(rep.prec())];
    scan_rec(rep, max_len, tol, &mut prefix, &mut mats, &mut found);
    Ok(found)
}

fn scan_rec(
    rep: &Representation,
    max_len: usize,
    tol: f64,
    prefix: &mut Vec<Letter>,
    mats: &mut Vec<Mat2>,
    found: &mut Vec<(FWord, Float)>,
) {
    if !prefix.is_empty() {
        let w = FWord::from_letters(prefix.iter().copied());
        if w.is_cyclically_reduced() && w.conjugacy_key() == w {
            let residual = mats.last().expect("nonempty stack").distance_to_identity();
            if residual < tol {
                found.push((w, residual));
            }
        }
    }
    if prefix.len() == max_len {
        return;
    }
    for l in Letter::ALL {
        if prefix.last() == Some(&l.inverse()) {
            continue;
        }
        let next = mats.last().expect("nonempty stack").mul(rep.letter(l));
        prefix.push(l);
        mats.push(next);
        scan_rec(rep, max_len, tol, prefix, mats, found);
        prefix.pop();
        mats.pop();
    }
}

/// `g_w(x, y, z)` and `tr ρ(w)` agree up to sign; returns `||tr ρ(w)| − |g_w||`.
pub fn trace_discrepancy(rep: &Representation, w: &FWord) -> Float {
    let p = rep.prec();
    let (core, _) = cyclic_reduce(w);
    let m = evaluate_word(rep, &core);
    let g = crate::tracepoly::trace_polynomial(&core);
    let [x, y, z] = rep.point.coords();
    let poly = g.eval(x, y, z, p);
    Float::with_val(p, m.trace().abs() - poly.abs()).abs()
}

/// `π` at the representation's precision; convenience for callers comparing angles.
pub fn rep_pi(rep: &Representation) -> Float {
    pi(rep.prec())
}
