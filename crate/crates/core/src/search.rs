//! Locating and certifying relation loci on coordinate curves of `𝔠_θ`.
//!
//! A non-torsion locus is a pinned value `s` of one coordinate for which
//! `u_N` lies in the kernel at every point of the curve; a torsion locus is
//! one where `w_N = [Z,X]^N[Y,Z]^N` has finite order `q`.
//!
//! All root finding happens in a fixed frame (`z` pinned for `u_N`, `x` pinned
//! for `w_N`). Other axes are reached through the automorphism
//! `σ: X → Y → Z → X`: the representation at `(x, y, z)` composed with `σ`
//! has traces `(y, z, x)`, so pinning another axis only permutes coordinates
//! and replaces the word by its image under a power of `σ`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fricke::{
    classify, coxeter_extension, evaluate_cox_word, evaluate_word, normal_form, solve_quadratic_coordinate, ConeAngle,
    FrickePoint, IsometryClass, Mat2, Representation,
};
use crate::geometry::{fixed_point, parallel_angle, UhpPoint};
use crate::real::{self, pi, to_decimal, two_pi, wrap_pi, wrap_two_pi, Tolerances};
use crate::words::{build_u_n, build_w_n, shift_generators, CoxWord, FWord};

/// A trace coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The unpinned coordinate that [`curve_point`] takes as input (next in cyclic order).
    pub fn free(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::Z,
            Axis::Z => Axis::X,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::OutOfRange(format!("unknown coordinate {other:?}"))),
        }
    }
}

/// Which root of the quadratic constraint [`curve_point`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Larger,
    Smaller,
}

/// The point of `{axis = s} ∩ 𝔠_θ` whose next coordinate (see [`Axis::free`])
/// equals `free`, the last coordinate being a root `> 2` of the constraint.
pub fn curve_point(angle: &ConeAngle, axis: Axis, s: &Float, free: &Float, branch: Branch) -> Result<FrickePoint> {
    if *s <= 2 || *free <= 2 {
        return Err(Error::OutOfRange("pinned and free coordinates must exceed 2".into()));
    }
    let roots = solve_quadratic_coordinate(angle.c(), s, free);
    let pick = match (branch, roots.len()) {
        (_, 0) => None,
        (Branch::Smaller, 2) => Some(roots[1].clone()),
        _ => Some(roots[0].clone()),
    };
    let last =
        pick.ok_or_else(|| Error::OffCurve(format!("off the curve's footprint at free = {}", to_decimal(free))))?;
    let mut c: [Option<Float>; 3] = [None, None, None];
    c[axis.index()] = Some(s.clone());
    c[axis.free().index()] = Some(free.clone());
    c[axis.free().free().index()] = Some(last);
    let [x, y, z] = c.map(|v| v.expect("all three coordinates set"));
    FrickePoint::new(x, y, z, angle.clone(), Tolerances::for_precision(angle.prec()).validity)
}

/// The point of `{axis = s} ∩ 𝔠_θ` whose two free coordinates are equal.
///
/// Exists for every `s > 2`: the shared value is `√((s² − 2 − c)/(s − 2))`.
pub fn symmetric_point(angle: &ConeAngle, axis: Axis, s: &Float) -> Result<FrickePoint> {
    let t = symmetric_free_value(angle, s)?;
    curve_point_exact(angle, axis, s, &t, &t)
}

fn symmetric_free_value(angle: &ConeAngle, s: &Float) -> Result<Float> {
    if *s <= 2 {
        return Err(Error::OutOfRange("pinned coordinate must exceed 2".into()));
    }
    let p = angle.prec();
    let num = Float::with_val(p, s * s) - 2u32 - angle.c();
    Ok((num / Float::with_val(p, s - 2u32)).sqrt())
}

fn curve_point_exact(angle: &ConeAngle, axis: Axis, s: &Float, a: &Float, b: &Float) -> Result<FrickePoint> {
    let mut c: [Option<Float>; 3] = [None, None, None];
    c[axis.index()] = Some(s.clone());
    c[axis.free().index()] = Some(a.clone());
    c[axis.free().free().index()] = Some(b.clone());
    let [x, y, z] = c.map(|v| v.expect("all three coordinates set"));
    FrickePoint::new(x, y, z, angle.clone(), Tolerances::for_precision(angle.prec()).validity)
}

/// A sampling grid `start, start + step, …, ≤ end` for the pinned coordinate,
/// plus the root-finding and certification settings.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub bisection_tol: f64,
    pub samples: usize,
    pub cert_tol: f64,
}

impl Grid {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        let valid = step > 0.0 && end >= start && start > 2.0 && start.is_finite() && end.is_finite();
        if !valid {
            return Err(Error::OutOfRange(format!("empty grid {start}..{end} step {step}")));
        }
        Ok(Self { start, end, step, bisection_tol: 1e-30, samples: 5, cert_tol: 1e-25 })
    }

    pub fn points(&self, prec: u32) -> Vec<Float> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        let start = Float::with_val(prec, self.start);
        let step = Float::with_val(prec, self.step);
        (0..count).map(|i| Float::with_val(prec, &step * i as u32) + &start).collect()
    }

    /// Parses `start:end:step`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::OutOfRange(format!("grid must look like start:end:step, got {spec:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> =
            parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        Self::new(v[0], v[1], v[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusKind {
    NonTorsion,
    /// `w_N` is a rotation by `2πp/q`.
    Torsion {
        p: u32,
        q: u32,
    },
}

/// A pinned value `s` together with its certification evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct LocusResult {
    pub angle: ConeAngle,
    pub axis: Axis,
    pub s: Float,
    pub n: u32,
    pub word: FWord,
    pub kind: LocusKind,
    /// `‖ρ(word) ∓ I‖∞` (or `‖ρ(word)^q ∓ I‖∞` for torsion) at each sample.
    pub residuals: Vec<Float>,
    pub samples: Vec<FrickePoint>,
    pub certified: bool,
    /// Torsion only: whether `0 < Nθ/2 mod 2π < α(d_A/2)` at `s`.
    pub parallel_angle_ok: Option<bool>,
}

impl LocusResult {
    pub fn max_residual(&self) -> Option<Float> {
        real::max_abs(self.residuals.iter())
    }

    /// Number of applications of `σ` that carry the root-finding frame to this axis.
    fn shifts(&self) -> usize {
        frame_shifts(self.kind, self.axis)
    }

    pub fn to_record(&self) -> LocusRecord {
        LocusRecord {
            schema: 1,
            theta: to_decimal(self.angle.theta()),
            coordinate: self.axis,
            s: to_decimal(&self.s),
            n: self.n,
            word: self.word.to_string(),
            kind: self.kind,
            residuals: self.residuals.iter().map(|r| real::to_decimal_digits(r, 6)).collect(),
            samples: self.samples.iter().map(FrickePoint::to_record).collect(),
            certified: self.certified,
            parallel_angle_ok: self.parallel_angle_ok,
        }
    }
}

/// JSON form of a [`LocusResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusRecord {
    pub schema: u32,
    pub theta: String,
    pub coordinate: Axis,
    pub s: String,
    pub n: u32,
    pub word: String,
    #[serde(flatten)]
    pub kind: LocusKind,
    pub residuals: Vec<String>,
    pub samples: Vec<crate::fricke::FrickePointRecord>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parallel_angle_ok: Option<bool>,
}

fn frame_shifts(kind: LocusKind, axis: Axis) -> usize {
    match (kind, axis) {
        (LocusKind::NonTorsion, Axis::Z) | (LocusKind::Torsion { .. }, Axis::X) => 0,
        (LocusKind::NonTorsion, Axis::X) | (LocusKind::Torsion { .. }, Axis::Y) => 1,
        (LocusKind::NonTorsion, Axis::Y) | (LocusKind::Torsion { .. }, Axis::Z) => 2,
    }
}

fn frame_axis(kind: LocusKind) -> Axis {
    match kind {
        LocusKind::NonTorsion => Axis::Z,
        LocusKind::Torsion { .. } => Axis::X,
    }
}

fn shifted_word(w: &FWord, k: usize) -> FWord {
    (0..k).fold(w.clone(), |acc, _| shift_generators(&acc))
}

/// Frame point `(n₁, n₂, n₃)` with `ρ∘σᵏ` at the frame ↔ `ρ` at the returned point.
fn frame_to_axis(p: &FrickePoint, k: usize) -> FrickePoint {
    (0..(3 - k) % 3).fold(p.clone(), |acc, _| acc.shifted())
}

fn base_word(kind: LocusKind, n: u32) -> Result<FWord> {
    match kind {
        LocusKind::NonTorsion => build_u_n(i64::from(n)),
        LocusKind::Torsion { .. } => build_w_n(i64::from(n)),
    }
}

/// Geometric data at a frame point used by the non-torsion root finder.
struct VertexFrame {
    /// Sends `O_A` to `i`.
    to_disk: Mat2,
    b_or: UhpPoint,
    z_or: UhpPoint,
    a: Mat2,
}

fn vertex_frame(rep: &Representation) -> Result<VertexFrame> {
    let cox = rep.coxeter.as_ref().ok_or_else(|| Error::Internal("missing Coxeter extension".into()))?;
    let word = |s: &str| evaluate_cox_word(rep, &CoxWord::parse(s).expect("static word"));
    let a = word("QPR")?;
    let b = word("RQP")?;
    let z = word("PQ")?;
    let o_a = fixed_point(&a)?;
    let o_r = fixed_point(&cox.r)?;
    let p = rep.prec();
    // T(z) = (z − Re O_A)/Im O_A sends O_A to i; then (w − i)/(w + i) sends i to 0.
    let sq = Float::with_val(p, o_a.im.sqrt_ref());
    let t = Mat2::new(sq.clone().recip(), -Float::with_val(p, &o_a.re / &sq), real::real(p, 0.0), sq);
    Ok(VertexFrame { to_disk: t, b_or: o_r.apply(&b), z_or: o_r.apply(&z), a })
}

fn disk_arg(frame: &VertexFrame, q: &UhpPoint) -> Float {
    let w = q.apply(&frame.to_disk).to_complex();
    let p = frame.a.prec();
    let i = Complex::with_val(p, (0, 1));
    let d = Complex::with_val(p, &w - &i) / Complex::with_val(p, &w + &i);
    let (re, im) = d.into_real_imag();
    im.atan2(&re)
}

/// Signed mismatch `∠(A^{2N}B(O_R), O_A, Z(O_R))` in `(−π, π]`; it vanishes
/// exactly where `ρ(u_N) = 1`.
fn nontorsion_mismatch(frame: &VertexFrame, n: u32) -> Result<Float> {
    let a2n = frame.a.pow(2 * n);
    let moved = frame.b_or.apply(&a2n);
    let diff = disk_arg(frame, &frame.z_or) - disk_arg(frame, &moved);
    Ok(wrap_pi(&diff))
}

fn frame_rep(angle: &ConeAngle, kind: LocusKind, s: &Float) -> Result<Representation> {
    let pt = symmetric_point(angle, frame_axis(kind), s)?;
    coxeter_extension(&normal_form(&pt))
}

/// One entry per `N`: the signed angular mismatch (non-torsion) or `|tr| − 2|cos(πp/q)|`
/// (torsion) at the symmetric transversal point of `{pinned = s}`; loci are its sign changes.
pub fn locus_profile(angle: &ConeAngle, kind: LocusKind, ns: &[u32], s: &Float) -> Result<Vec<Float>> {
    let rep = frame_rep(angle, kind, s)?;
    match kind {
        LocusKind::NonTorsion => {
            let frame = vertex_frame(&rep)?;
            ns.iter().map(|&n| nontorsion_mismatch(&frame, n)).collect()
        }
        LocusKind::Torsion { p, q } => {
            let target = torsion_target(angle.prec(), p, q);
            ns.iter()
                .map(|&n| {
                    let w = build_w_n(i64::from(n))?;
                    let tr = evaluate_word(&rep, &w).trace();
                    // |tr| − 2|cos(πp/q)| changes sign at both trace branches ±2cos(πp/q).
                    Ok(tr.abs() - &target)
                })
                .collect()
        }
    }
}

fn torsion_target(prec: u32, p: u32, q: u32) -> Float {
    let a = Float::with_val(prec, pi(prec) * p) / q;
    a.cos().abs() * 2u32
}

fn value_at(angle: &ConeAngle, kind: LocusKind, n: u32, s: &Float) -> Result<Float> {
    Ok(locus_profile(angle, kind, &[n], s)?.remove(0))
}

fn bisect(angle: &ConeAngle, kind: LocusKind, n: u32, lo: Float, hi: Float, f_lo: Float, tol: f64) -> Result<Float> {
    let (mut lo, mut hi, mut f_lo) = (lo, hi, f_lo);
    let p = angle.prec();
    let mut guard = 0;
    while Float::with_val(p, &hi - &lo) > tol && guard < 4 * p {
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        let f_mid = value_at(angle, kind, n, &mid)?;
        if f_mid.is_zero() {
            return Ok(mid);
        }
        if (f_mid < 0) == (f_lo < 0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        guard += 1;
    }
    Ok(Float::with_val(p, &lo + &hi) / 2u32)
}

/// Brackets and bisects sign changes of the per-`N` profile over the grid.
fn find_roots(angle: &ConeAngle, kind: LocusKind, ns: &[u32], grid: &Grid) -> Result<Vec<(u32, Float)>> {
    let prec = angle.prec();
    let pts = grid.points(prec);
    if pts.len() < 2 {
        return Err(Error::OutOfRange("grid needs at least two points".into()));
    }
    let values: Vec<Vec<Float>> = pts.par_iter().map(|s| locus_profile(angle, kind, ns, s)).collect::<Result<_>>()?;
    let half_pi = pi(prec) / 2u32;
    let brackets: Vec<(usize, usize)> = (0..ns.len())
        .flat_map(|j| (0..pts.len() - 1).map(move |i| (j, i)))
        .filter(|&(j, i)| {
            let (a, b) = (&values[i][j], &values[i + 1][j]);
            let opposite = (*a < 0) != (*b < 0);
            // the non-torsion mismatch wraps at ±π; those jumps are not roots
            let continuous = !matches!(kind, LocusKind::NonTorsion)
                || (Float::with_val(prec, a.abs_ref()) < half_pi && Float::with_val(prec, b.abs_ref()) < half_pi);
            opposite && continuous
        })
        .collect();
    let mut roots: Vec<(u32, Float)> = brackets
        .par_iter()
        .map(|&(j, i)| {
            let s = bisect(
                angle,
                kind,
                ns[j],
                pts[i].clone(),
                pts[i + 1].clone(),
                values[i][j].clone(),
                grid.bisection_tol,
            )?;
            Ok((ns[j], s))
        })
        .collect::<Result<_>>()?;
    roots.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).expect("finite")));
    Ok(roots)
}

fn new_result(angle: &ConeAngle, axis: Axis, kind: LocusKind, n: u32, s: Float) -> Result<LocusResult> {
    let word = shifted_word(&base_word(kind, n)?, frame_shifts(kind, axis));
    Ok(LocusResult {
        angle: angle.clone(),
        axis,
        s,
        n,
        word,
        kind,
        residuals: Vec::new(),
        samples: Vec::new(),
        certified: false,
        parallel_angle_ok: None,
    })
}

/// Non-torsion loci of `u_N` for `N ∈ ns` along `{axis = s}`; only certified results are returned.
///
/// The caller is responsible for `θ ∉ ℚπ`; the search itself does not need it.
pub fn find_nontorsion_locus(angle: &ConeAngle, ns: &[u32], axis: Axis, grid: &Grid) -> Result<Vec<LocusResult>> {
    let kind = LocusKind::NonTorsion;
    let roots = find_roots(angle, kind, ns, grid)?;
    let mut out = Vec::new();
    for (n, s) in roots {
        let r = certify_locus(&new_result(angle, axis, kind, n, s)?, grid.samples, grid.cert_tol)?;
        if r.certified {
            out.push(r);
        }
    }
    Ok(out)
}

/// Torsion loci where `w_N` becomes a rotation by `2πp/q`; only certified results are returned.
pub fn find_torsion_locus(
    angle: &ConeAngle,
    ns: &[u32],
    p: u32,
    q: u32,
    axis: Axis,
    grid: &Grid,
) -> Result<Vec<LocusResult>> {
    if q < 2 || p == 0 || p >= q || gcd(p, q) != 1 {
        return Err(Error::OutOfRange(format!("torsion order {p}/{q} must be in lowest terms with 0 < p < q")));
    }
    let kind = LocusKind::Torsion { p, q };
    let roots = find_roots(angle, kind, ns, grid)?;
    let mut out = Vec::new();
    for (n, s) in roots {
        let mut r = certify_locus(&new_result(angle, axis, kind, n, s)?, grid.samples, grid.cert_tol)?;
        if r.certified {
            r.parallel_angle_ok = Some(parallel_angle_condition(angle, n, &r.s)?);
            out.push(r);
        }
    }
    Ok(out)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `cosh(d_A/2) = s/(2 sin(θ/4))` for the pinned trace `s` of `X`.
pub fn side_length_from_trace(angle: &ConeAngle, s: &Float) -> Result<Float> {
    let p = angle.prec();
    let s4 = Float::with_val(p, angle.theta() / 4u32).sin();
    let ch = Float::with_val(p, s / (s4 * 2u32));
    if ch < 1 {
        return Err(Error::OutOfRange("trace too small for a triangle side".into()));
    }
    Ok(ch.acosh() * 2u32)
}

/// `0 < Nθ/2 mod 2π < α(d_A/2)`.
pub fn parallel_angle_condition(angle: &ConeAngle, n: u32, s: &Float) -> Result<bool> {
    let p = angle.prec();
    let a = wrap_two_pi(&(Float::with_val(p, angle.theta() * n) / 2u32));
    let d_a = side_length_from_trace(angle, s)?;
    let alpha = parallel_angle(&(d_a / 2u32))?;
    Ok(a > 0 && a < alpha)
}

/// `2|cos(apex)|` with `cos(apex) = −cos²a + sin²a·cosh d_A`, `a = Nθ/2 mod 2π`:
/// the geometric prediction for `|tr ρ(w_N)|` on `{x = s}`.
pub fn torsion_apex_trace(angle: &ConeAngle, n: u32, s: &Float) -> Result<Float> {
    let p = angle.prec();
    let a = wrap_two_pi(&(Float::with_val(p, angle.theta() * n) / 2u32));
    let (sa, ca) = a.sin_cos(Float::new(p));
    let d_a = side_length_from_trace(angle, s)?;
    let cos_apex = Float::with_val(p, &sa * &sa) * d_a.cosh() - Float::with_val(p, &ca * &ca);
    Ok(cos_apex.abs() * 2u32)
}

/// Samples `k` points along the curve and records the word's residual at each.
///
/// Sample `j` is taken in the root-finding frame at free coordinate
/// `t_sym + j/2`, where `t_sym` is the symmetric transversal value, with the
/// remaining coordinate on the larger branch; it is then carried to the
/// result's axis. Non-torsion residuals are `‖ρ(u) ∓ I‖∞`; torsion residuals
/// are `‖ρ(w)^q ∓ I‖∞`, and each sample must also classify as a rotation by
/// `2πp/q` to within `tol`.
pub fn certify_locus(result: &LocusResult, k: usize, tol: f64) -> Result<LocusResult> {
    if k < 3 {
        return Err(Error::OutOfRange(format!("certification needs at least 3 samples, got {k}")));
    }
    let angle = &result.angle;
    let prec = angle.prec();
    let frame_axis = frame_axis(result.kind);
    let t_sym = symmetric_free_value(angle, &result.s)?;
    let shifts = result.shifts();
    let mut samples = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut ok = true;
    for j in 0..k {
        let free = Float::with_val(prec, &t_sym + Float::with_val(prec, j as f64 / 2.0));
        let frame_pt = if j == 0 {
            symmetric_point(angle, frame_axis, &result.s)?
        } else {
            curve_point(angle, frame_axis, &result.s, &free, Branch::Larger)?
        };
        let pt = frame_to_axis(&frame_pt, shifts);
        let rep = normal_form(&pt);
        let m = evaluate_word(&rep, &result.word);
        let residual = match result.kind {
            LocusKind::NonTorsion => m.distance_to_identity(),
            LocusKind::Torsion { p, q } => {
                let target = Float::with_val(prec, two_pi(prec) * p) / q;
                match classify(&m, tol)? {
                    IsometryClass::Elliptic { angle: psi } => {
                        let err = wrap_pi(&(psi - &target)).abs();
                        if err >= tol {
                            ok = false;
                        }
                    }
                    _ => ok = false,
                }
                m.pow(q).distance_to_identity()
            }
        };
        if residual >= tol {
            ok = false;
        }
        residuals.push(residual);
        samples.push(pt);
    }
    let mut out = result.clone();
    out.samples = samples;
    out.residuals = residuals;
    out.certified = ok;
    Ok(out)
}

/// A point on two loci pinned on different axes, with both words certified there.
#[derive(Clone, Debug, PartialEq)]
pub struct DoublePoint {
    pub point: FrickePoint,
    pub residuals: [Float; 2],
    pub certified: bool,
}

/// Intersects two certified loci pinned on different coordinates.
pub fn double_point(angle: &ConeAngle, locus1: &LocusResult, locus2: &LocusResult, tol: f64) -> Result<DoublePoint> {
    if locus1.axis == locus2.axis {
        return Err(Error::NoIntersection("both loci pin the same coordinate".into()));
    }
    let roots = solve_quadratic_coordinate(angle.c(), &locus1.s, &locus2.s);
    let third = roots.into_iter().next().ok_or_else(|| Error::NoIntersection("loci do not intersect in 𝔠_θ".into()))?;
    let mut c: [Option<Float>; 3] = [None, None, None];
    c[locus1.axis.index()] = Some(locus1.s.clone());
    c[locus2.axis.index()] = Some(locus2.s.clone());
    let missing = Axis::ALL.iter().find(|a| **a != locus1.axis && **a != locus2.axis).expect("three axes");
    c[missing.index()] = Some(third);
    let [x, y, z] = c.map(|v| v.expect("all three coordinates set"));
    let point = FrickePoint::new(x, y, z, angle.clone(), Tolerances::for_precision(angle.prec()).validity)?;
    let rep = normal_form(&point);
    let residual = |l: &LocusResult| {
        let m = evaluate_word(&rep, &l.word);
        match l.kind {
            LocusKind::NonTorsion => m.distance_to_identity(),
            LocusKind::Torsion { q, .. } => m.pow(q).distance_to_identity(),
        }
    };
    let residuals = [residual(locus1), residual(locus2)];
    let certified = residuals.iter().all(|r| *r < tol);
    Ok(DoublePoint { point, residuals, certified })
}
