//! Integer trace polynomials `g_w ∈ ℤ[x, y, z]`.
//!
//! For every pair `U, V ∈ SL(2)` and every word `w`,
//! `tr w(U, V) = g_w(tr U, tr V, tr UV)`.
//!
//! The polynomial is computed in the Cayley–Hamilton algebra spanned by
//! `1, X, Y, XY` over `ℤ[x, y, z]`: a prefix of the word is carried as
//! `a + bX + cY + dXY` and each further letter is multiplied on using
//!
//! ```text
//! X² = xX − 1          Y² = yY − 1
//! YX = −XY + yX + xY + (z − xy)
//! X⁻¹ = x − X          Y⁻¹ = y − Y
//! ```
//!
//! and finally `tr(a + bX + cY + dXY) = 2a + bx + cy + dz`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::words::{cyclic_reduce, FWord, Letter};

/// Exponents `(i, j, k)` of `x^i y^j z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, z: 0 };

    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Monomial { x, y, z }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y + self.z
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    // Print order: higher total degree first, then x-heavier first.
    fn print_key(&self) -> (std::cmp::Reverse<u32>, std::cmp::Reverse<u32>, std::cmp::Reverse<u32>) {
        use std::cmp::Reverse;
        (Reverse(self.degree()), Reverse(self.x), Reverse(self.y))
    }
}

/// A polynomial in `ℤ[x, y, z]` with arbitrary-precision coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TracePolynomial {
    terms: BTreeMap<Monomial, Integer>,
}

impl TracePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(Integer::from(c), Monomial::ONE)
    }

    pub fn monomial(c: Integer, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Integer::from(1), Monomial::new(1, 0, 0))
    }

    pub fn y() -> Self {
        Self::monomial(Integer::from(1), Monomial::new(0, 1, 0))
    }

    pub fn z() -> Self {
        Self::monomial(Integer::from(1), Monomial::new(0, 0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: Monomial) -> Integer {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Integer> {
        match self.terms.len() {
            0 => Some(Integer::new()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Integer) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, Integer::from(-c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (*m, Integer::from(-c))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.times(*mb), Integer::from(ca * cb));
            }
        }
        out
    }

    /// Horner evaluation at precision `prec` (nested in `z`, then `y`, then `x`).
    pub fn eval(&self, x: &Float, y: &Float, z: &Float, prec: u32) -> Float {
        // z-power → y-power → x-power → coefficient
        let mut nested: BTreeMap<u32, BTreeMap<u32, BTreeMap<u32, &Integer>>> = BTreeMap::new();
        for (m, c) in &self.terms {
            nested.entry(m.z).or_default().entry(m.y).or_default().insert(m.x, c);
        }
        let horner = |coeffs: Vec<(u32, Float)>, t: &Float| -> Float {
            // coeffs sorted by descending power
            let mut acc = Float::with_val(prec, 0);
            let mut cur = coeffs.first().map_or(0, |(p, _)| *p);
            for (p, c) in coeffs {
                while cur > p {
                    acc *= t;
                    cur -= 1;
                }
                acc += c;
            }
            while cur > 0 {
                acc *= t;
                cur -= 1;
            }
            acc
        };
        let x = Float::with_val(prec, x);
        let y = Float::with_val(prec, y);
        let z = Float::with_val(prec, z);
        let zc: Vec<(u32, Float)> = nested
            .iter()
            .rev()
            .map(|(&kz, ys)| {
                let yc: Vec<(u32, Float)> = ys
                    .iter()
                    .rev()
                    .map(|(&ky, xs)| {
                        let xc = xs.iter().rev().map(|(&kx, c)| (kx, Float::with_val(prec, *c))).collect();
                        (ky, horner(xc, &x))
                    })
                    .collect();
                (kz, horner(yc, &y))
            })
            .collect();
        horner(zc, &z)
    }
}

/// The commutator trace `κ = x² + y² + z² − xyz − 2`.
pub fn kappa() -> TracePolynomial {
    let mut p = TracePolynomial::zero();
    p.add_term(Monomial::new(2, 0, 0), Integer::from(1));
    p.add_term(Monomial::new(0, 2, 0), Integer::from(1));
    p.add_term(Monomial::new(0, 0, 2), Integer::from(1));
    p.add_term(Monomial::new(1, 1, 1), Integer::from(-1));
    p.add_term(Monomial::ONE, Integer::from(-2));
    p
}

/// `p(x, y, z)` at precision `prec`.
pub fn eval_poly(p: &TracePolynomial, x: &Float, y: &Float, z: &Float, prec: u32) -> Float {
    p.eval(x, y, z, prec)
}

/// `a + bX + cY + dXY` in the Cayley–Hamilton algebra.
#[derive(Clone, Debug)]
struct AlgebraElement {
    one: TracePolynomial,
    x: TracePolynomial,
    y: TracePolynomial,
    xy: TracePolynomial,
}

impl AlgebraElement {
    fn identity() -> Self {
        Self {
            one: TracePolynomial::constant(1),
            x: TracePolynomial::zero(),
            y: TracePolynomial::zero(),
            xy: TracePolynomial::zero(),
        }
    }

    fn scale_add(&self, s: &TracePolynomial, o: &Self) -> Self {
        Self {
            one: s.mul(&self.one).sub(&o.one),
            x: s.mul(&self.x).sub(&o.x),
            y: s.mul(&self.y).sub(&o.y),
            xy: s.mul(&self.xy).sub(&o.xy),
        }
    }

    fn times_x(&self) -> Self {
        let (px, py, pz) = (TracePolynomial::x(), TracePolynomial::y(), TracePolynomial::z());
        let z_minus_xy = pz.sub(&px.mul(&py));
        Self {
            // −b + c(z − xy) − dy
            one: self.x.neg().add(&self.y.mul(&z_minus_xy)).sub(&self.xy.mul(&py)),
            // a + bx + cy + dz
            x: self.one.add(&self.x.mul(&px)).add(&self.y.mul(&py)).add(&self.xy.mul(&pz)),
            // cx + d
            y: self.y.mul(&px).add(&self.xy),
            // −c
            xy: self.y.neg(),
        }
    }

    fn times_y(&self) -> Self {
        let py = TracePolynomial::y();
        Self {
            one: self.y.neg(),
            x: self.xy.neg(),
            y: self.one.add(&self.y.mul(&py)),
            xy: self.x.add(&self.xy.mul(&py)),
        }
    }

    fn times(&self, l: Letter) -> Self {
        match l {
            Letter::X => self.times_x(),
            Letter::Y => self.times_y(),
            // M·X⁻¹ = x·M − M·X
            Letter::XInv => self.scale_add(&TracePolynomial::x(), &self.times_x()),
            Letter::YInv => self.scale_add(&TracePolynomial::y(), &self.times_y()),
        }
    }

    fn trace(&self) -> TracePolynomial {
        self.one
            .mul(&TracePolynomial::constant(2))
            .add(&self.x.mul(&TracePolynomial::x()))
            .add(&self.y.mul(&TracePolynomial::y()))
            .add(&self.xy.mul(&TracePolynomial::z()))
    }
}

/// Memo table keyed by the conjugacy key of the word (trace is a class function
/// and is invariant under inversion).
#[derive(Default)]
pub struct TraceCache {
    table: RwLock<HashMap<FWord, TracePolynomial>>,
}

impl TraceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, w: &FWord) -> TracePolynomial {
        let key = w.conjugacy_key();
        if let Some(p) = self.table.read().expect("trace cache poisoned").get(&key) {
            return p.clone();
        }
        let p = compute_trace_polynomial(&key);
        self.table.write().expect("trace cache poisoned").insert(key, p.clone());
        p
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("trace cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn global_cache() -> &'static TraceCache {
    static CACHE: OnceLock<TraceCache> = OnceLock::new();
    CACHE.get_or_init(TraceCache::new)
}

/// Uncached computation by letter peeling in the Cayley–Hamilton algebra.
pub fn compute_trace_polynomial(w: &FWord) -> TracePolynomial {
    let (core, _) = cyclic_reduce(w);
    core.letters().iter().fold(AlgebraElement::identity(), |acc, &l| acc.times(l)).trace()
}

/// `g_w`, memoized process-wide.
pub fn trace_polynomial(w: &FWord) -> TracePolynomial {
    global_cache().get_or_compute(w)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, e) in [('x', m.x), ('y', m.y), ('z', m.z)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for TracePolynomial {
    /// Sorted monomials, e.g. `-x*y*z + x^2 + y^2 + z^2 - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(m, _)| m.print_key());
        for (i, (m, c)) in sorted.into_iter().enumerate() {
            let negative = *c < 0;
            let abs = Integer::from(c.abs_ref());
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else {
                if abs != 1 {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl FromStr for TracePolynomial {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) format: `±c*x^i*y^j*z^k` terms.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PolySyntax("empty input".into()));
        }
        let mut out = TracePolynomial::zero();
        let mut term_start = 0;
        let bytes = compact.as_bytes();
        let mut bounds = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                bounds.push((term_start, i));
                term_start = i;
            }
        }
        bounds.push((term_start, bytes.len()));
        for (a, b) in bounds {
            let term = &compact[a..b];
            let (sign, body) = match term.as_bytes()[0] {
                b'-' => (-1, &term[1..]),
                b'+' => (1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(Error::PolySyntax(format!("dangling sign in {s:?}")));
            }
            let mut coeff = Integer::from(sign);
            let mut mono = Monomial::ONE;
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::PolySyntax(format!("bad exponent in {factor:?}")))?;
                        (b, e)
                    }
                    None => (factor, 1),
                };
                match base {
                    "x" => mono.x += exp,
                    "y" => mono.y += exp,
                    "z" => mono.z += exp,
                    digits if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) => {
                        let v = Integer::from_str(digits).map_err(|_| Error::PolySyntax(digits.to_string()))?;
                        coeff *= Integer::from(rug::ops::Pow::pow(&v, exp));
                    }
                    other => return Err(Error::PolySyntax(format!("unexpected factor {other:?}"))),
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}
