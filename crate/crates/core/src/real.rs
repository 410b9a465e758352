//! Multiprecision real helpers shared by the numeric modules.

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Default working precision (mantissa bits).
pub const DEFAULT_PRECISION: u32 = 256;

/// Numeric tolerances used across the crate.
///
/// The defaults are calibrated for 256-bit working precision; [`Tolerances::for_precision`]
/// scales them for other precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Distance to `±I` below which a matrix counts as the identity in PSL(2,ℝ).
    pub identity: f64,
    /// Allowed `|κ(x,y,z) − c|` for a point to lie on the level set of its cone angle.
    pub validity: f64,
    /// Allowed `|det − 1|` for a matrix to count as unimodular.
    pub determinant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::for_precision(DEFAULT_PRECISION)
    }
}

impl Tolerances {
    pub fn for_precision(bits: u32) -> Self {
        if bits >= DEFAULT_PRECISION {
            Self { identity: 1e-30, validity: 1e-25, determinant: 1e-25 }
        } else {
            // Keep roughly the same headroom below the unit roundoff.
            let digits = f64::from(bits) * std::f64::consts::LOG10_2;
            let scale = |margin: f64| 10f64.powf(-(digits - margin).max(2.0));
            Self { identity: scale(digits * 0.6), validity: scale(digits * 0.67), determinant: scale(digits * 0.67) }
        }
    }
}

pub fn real(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

/// Parses a decimal (or integer) literal at the given precision.
pub fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|_| Error::RealSyntax(s.to_string()))?;
    Ok(Float::with_val(prec, parsed))
}

/// Decimal rendering with every significant digit the precision supports.
pub fn to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = (f64::from(x.prec()) * std::f64::consts::LOG10_2).floor() as usize;
    let s = x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
    tidy_exponent(&s)
}

/// Decimal rendering rounded to `digits` significant digits.
pub fn to_decimal_digits(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
    tidy_exponent(&s)
}

// MPFR writes `1.5e0`; turn small exponents into plain positional notation.
fn tidy_exponent(s: &str) -> String {
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    if !(-6..=30).contains(&exp) {
        return s.to_string();
    }
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all: String = int_part.chars().chain(frac_part.chars()).collect();
    let point = int_part.len() as i64 + exp;
    let mut out = String::from(sign);
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&all);
    } else if point as usize >= all.len() {
        out.push_str(&all);
        out.extend(std::iter::repeat_n('0', point as usize - all.len()));
    } else {
        out.push_str(&all[..point as usize]);
        out.push('.');
        out.push_str(&all[point as usize..]);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// `10^exp` at the given precision.
pub fn pow10(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, 10).pow(exp)
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_two_pi(angle: &Float) -> Float {
    let prec = angle.prec();
    let tp = two_pi(prec);
    let mut r = Float::with_val(prec, angle % &tp);
    if r < 0 {
        r += &tp;
    }
    if r >= tp {
        r -= &tp;
    }
    r
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_pi(angle: &Float) -> Float {
    let prec = angle.prec();
    let mut r = wrap_two_pi(angle);
    if r > pi(prec) {
        r -= two_pi(prec);
    }
    r
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Float>) -> Option<Float> {
    values.into_iter().map(|v| Float::with_val(v.prec(), v.abs_ref())).reduce(|a, b| if a >= b { a } else { b })
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering_is_positional_for_moderate_values() {
        assert_eq!(to_decimal_digits(&real(64, 1.5), 5), "1.5");
        assert_eq!(to_decimal_digits(&real(64, -0.001), 3), "-0.001");
        assert_eq!(to_decimal_digits(&real(64, 12345.0), 12), "12345");
        assert_eq!(to_decimal_digits(&real(64, 0.0), 12), "0");
    }

    #[test]
    fn full_precision_round_trip() {
        let x = Float::with_val(256, 2).sqrt();
        let back = parse_real(&to_decimal(&x), 256).unwrap();
        let diff = Float::with_val(256, &x - &back).abs();
        assert!(diff < 1e-75);
    }

    #[test]
    fn wrapping() {
        let p = 128;
        let a = wrap_two_pi(&real(p, -1.0));
        assert!((a.to_f64() - (std::f64::consts::TAU - 1.0)).abs() < 1e-15);
        let b = wrap_pi(&real(p, 4.0));
        assert!((b.to_f64() - (4.0 - std::f64::consts::TAU)).abs() < 1e-15);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_real("1.2.3", 64).is_err());
    }
}
