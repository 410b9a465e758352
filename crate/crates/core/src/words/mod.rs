//! Word algebra in `F₂ = ⟨X, Y, Z | XYZ = 1⟩` and `W = ⟨P, Q, R | P² = Q² = R² = 1⟩`.
//!
//! `Z` is never stored: it is expanded to `Y⁻¹X⁻¹` on input, so every
//! [`FWord`] is a freely reduced word over `X^{±1}, Y^{±1}`. The free group
//! sits inside `W` with index two via `X ↦ QR`, `Y ↦ RP`, `Z ↦ PQ`.

mod literal;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use literal::parse_word;

/// A signed generator of `F₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    XInv,
    Y,
    YInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::XInv, Letter::Y, Letter::YInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::Y => Letter::YInv,
            Letter::YInv => Letter::Y,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::XInv | Letter::YInv)
    }

    /// `true` for `X^{±1}`.
    pub fn is_x(self) -> bool {
        matches!(self, Letter::X | Letter::XInv)
    }

    /// Exponent-sum contribution `(a, b)` to the abelianization `ℤ²`.
    pub fn abelian(self) -> (i64, i64) {
        match self {
            Letter::X => (1, 0),
            Letter::XInv => (-1, 0),
            Letter::Y => (0, 1),
            Letter::YInv => (0, -1),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::XInv => 'x',
            Letter::Y => 'Y',
            Letter::YInv => 'y',
        }
    }
}

/// A freely reduced word of `F₂` over `X^{±1}, Y^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FWord(Vec<Letter>);

/// A raw input symbol: either a stored letter or `Z^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawLetter {
    Stored(Letter),
    Z,
    ZInv,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl FWord {
    pub fn identity() -> Self {
        FWord(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        FWord(out)
    }

    pub fn letter(l: Letter) -> Self {
        FWord(vec![l])
    }

    pub fn x() -> Self {
        Self::letter(Letter::X)
    }

    pub fn y() -> Self {
        Self::letter(Letter::Y)
    }

    /// `Z = Y⁻¹X⁻¹`.
    pub fn z() -> Self {
        FWord(vec![Letter::YInv, Letter::XInv])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FWord) -> FWord {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        FWord(out)
    }

    pub fn inverse(&self) -> FWord {
        FWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> FWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &FWord, b: &FWord) -> FWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn conjugate_by(&self, g: &FWord) -> FWord {
        g.mul(self).mul(&g.inverse())
    }

    /// The letters read backwards (not inverted). Reduced words stay reduced.
    pub fn reversed(&self) -> FWord {
        FWord(self.0.iter().rev().copied().collect())
    }

    /// Cyclic rotation starting at `start`; only meaningful for cyclically reduced words.
    pub fn rotated(&self, start: usize) -> FWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = start % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        FWord(v)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => self.0.len() == 1 || a != b.inverse(),
            _ => true,
        }
    }

    pub fn abelianization(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(a, b), l| {
            let (da, db) = l.abelian();
            (a + da, b + db)
        })
    }

    /// Subword `[start, start+len)`, wrapping around when `start + len > |w|`.
    pub fn cyclic_subword(&self, start: usize, len: usize) -> Vec<Letter> {
        let n = self.0.len();
        (0..len).map(|j| self.0[(start + j) % n]).collect()
    }

    /// Lexicographically least rotation of a cyclically reduced word.
    pub fn min_rotation(&self) -> FWord {
        (0..self.0.len().max(1)).map(|i| self.rotated(i)).min().unwrap_or_default()
    }

    /// Canonical representative of the conjugacy class of `w^{±1}`:
    /// least rotation of the cyclic core of `w` or its inverse.
    pub fn conjugacy_key(&self) -> FWord {
        let (core, _) = cyclic_reduce(self);
        let a = core.min_rotation();
        let b = core.inverse().min_rotation();
        a.min(b)
    }

    /// Compact display with `^k` exponents on runs (`x y^-2 x`).
    pub fn to_compact_string(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = j - i;
            let base = if l.is_x() { 'X' } else { 'Y' };
            let sign = if l.is_inverse() { -1i64 } else { 1 };
            if run == 1 {
                parts.push(l.to_char().to_string());
            } else {
                parts.push(format!("{}^{}", base, sign * run as i64));
            }
            i = j;
        }
        parts.join(" ")
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl From<FWord> for String {
    fn from(w: FWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for FWord {
    type Error = Error;
    fn try_from(s: String) -> Result<FWord> {
        parse_word(&s)
    }
}

impl std::str::FromStr for FWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<FWord> {
        parse_word(s)
    }
}

/// Expands `Z^{±1}` and freely reduces.
pub fn normalize(raw: &[RawLetter]) -> FWord {
    let mut out = Vec::new();
    for r in raw {
        match *r {
            RawLetter::Stored(l) => push_reduced(&mut out, l),
            RawLetter::Z => {
                push_reduced(&mut out, Letter::YInv);
                push_reduced(&mut out, Letter::XInv);
            }
            RawLetter::ZInv => {
                push_reduced(&mut out, Letter::X);
                push_reduced(&mut out, Letter::Y);
            }
        }
    }
    FWord(out)
}

/// Splits `w = c · core · c⁻¹` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &FWord) -> (FWord, FWord) {
    let l = &w.0;
    let mut i = 0;
    let mut j = l.len();
    while j >= i + 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (FWord(l[i..j].to_vec()), FWord(l[..i].to_vec()))
}

/// Which two of `X, Y, Z` a palindrome is spelled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorPair {
    XY,
    YZ,
    ZX,
}

impl GeneratorPair {
    pub const ALL: [GeneratorPair; 3] = [GeneratorPair::XY, GeneratorPair::YZ, GeneratorPair::ZX];

    pub fn names(self) -> (char, char) {
        match self {
            GeneratorPair::XY => ('X', 'Y'),
            GeneratorPair::YZ => ('Y', 'Z'),
            GeneratorPair::ZX => ('Z', 'X'),
        }
    }

    /// The involution `I ∈ {R, P, Q}` with `(I·u)² = 1` exactly for palindromes in this pair.
    pub fn involution(self) -> Reflection {
        match self {
            GeneratorPair::XY => Reflection::R,
            GeneratorPair::YZ => Reflection::P,
            GeneratorPair::ZX => Reflection::Q,
        }
    }

    /// Rewrites `w` in this pair. The result is a word over two abstract
    /// symbols stored in the `X`/`Y` slots: the first and second name of the pair.
    pub fn rewrite(self, w: &FWord) -> FWord {
        use Letter::*;
        // Images of X and Y in terms of (first, second) slots.
        let (img_x, img_y): (Vec<Letter>, Vec<Letter>) = match self {
            GeneratorPair::XY => (vec![X], vec![Y]),
            // first = Y, second = Z: X = Z⁻¹Y⁻¹
            GeneratorPair::YZ => (vec![YInv, XInv], vec![X]),
            // first = Z, second = X: Y = X⁻¹Z⁻¹
            GeneratorPair::ZX => (vec![Y], vec![YInv, XInv]),
        };
        let inv = |v: &Vec<Letter>| v.iter().rev().map(|l| l.inverse()).collect::<Vec<_>>();
        let (img_xi, img_yi) = (inv(&img_x), inv(&img_y));
        FWord::from_letters(w.0.iter().flat_map(|l| match l {
            X => img_x.clone(),
            XInv => img_xi.clone(),
            Y => img_y.clone(),
            YInv => img_yi.clone(),
        }))
    }
}

/// Evidence that a word is palindromic in one of the three generator pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalindromeWitness {
    pub pair: GeneratorPair,
    /// The word in the pair's two symbols (first symbol in the `X` slot).
    pub rewritten: FWord,
}

impl PalindromeWitness {
    /// The rewritten word spelled with the pair's own letter names.
    pub fn spelled(&self) -> String {
        let (a, b) = self.pair.names();
        if self.rewritten.is_empty() {
            return "1".into();
        }
        self.rewritten
            .letters()
            .iter()
            .map(|l| {
                let c = if l.is_x() { a } else { b };
                if l.is_inverse() {
                    c.to_ascii_lowercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

/// Tries the pairs `{X,Y}`, `{Y,Z}`, `{Z,X}` in that order on the word as given.
pub fn is_palindromic(w: &FWord) -> Option<PalindromeWitness> {
    GeneratorPair::ALL.into_iter().find_map(|pair| {
        let rewritten = pair.rewrite(w);
        (rewritten.reversed() == rewritten).then_some(PalindromeWitness { pair, rewritten })
    })
}

/// All pairs in which `w` is palindromic.
pub fn palindromic_pairs(w: &FWord) -> Vec<GeneratorPair> {
    GeneratorPair::ALL
        .into_iter()
        .filter(|&pair| {
            let r = pair.rewrite(w);
            r.reversed() == r
        })
        .collect()
}

/// Generators of `W = ℤ₂ * ℤ₂ * ℤ₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reflection {
    P,
    Q,
    R,
}

impl Reflection {
    pub fn to_char(self) -> char {
        match self {
            Reflection::P => 'P',
            Reflection::Q => 'Q',
            Reflection::R => 'R',
        }
    }

    /// The cyclic relabelling `P → Q → R → P` induced by `X → Y → Z → X`.
    pub fn shifted(self) -> Reflection {
        match self {
            Reflection::P => Reflection::Q,
            Reflection::Q => Reflection::R,
            Reflection::R => Reflection::P,
        }
    }
}

/// A reduced word of `W`: no two adjacent letters coincide.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxWord(Vec<Reflection>);

impl CoxWord {
    pub fn identity() -> Self {
        CoxWord(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Reflection>) -> Self {
        let mut out: Vec<Reflection> = Vec::new();
        for l in letters {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        CoxWord(out)
    }

    /// Parses a string over `P, Q, R` (whitespace ignored).
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                'P' | 'p' => v.push(Reflection::P),
                'Q' | 'q' => v.push(Reflection::Q),
                'R' | 'r' => v.push(Reflection::R),
                c if c.is_whitespace() => {}
                '1' => {}
                other => {
                    return Err(Error::WordSyntax { offset: i, msg: format!("unexpected {other:?} in Coxeter word") })
                }
            }
        }
        Ok(Self::from_letters(v))
    }

    pub fn letters(&self) -> &[Reflection] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &CoxWord) -> CoxWord {
        CoxWord::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Inverse is the reversal since every generator is an involution.
    pub fn inverse(&self) -> CoxWord {
        CoxWord(self.0.iter().rev().copied().collect())
    }

    pub fn pow(&self, k: i64) -> CoxWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(CoxWord::identity(), |acc, _| acc.mul(&base))
    }

    pub fn shifted(&self) -> CoxWord {
        CoxWord(self.0.iter().map(|r| r.shifted()).collect())
    }
}

impl fmt::Display for CoxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for r in &self.0 {
            write!(f, "{}", r.to_char())?;
        }
        Ok(())
    }
}

fn letter_image(l: Letter) -> [Reflection; 2] {
    use Reflection::*;
    match l {
        Letter::X => [Q, R],
        Letter::XInv => [R, Q],
        Letter::Y => [R, P],
        Letter::YInv => [P, R],
    }
}

/// Image under the index-two embedding `X ↦ QR, Y ↦ RP`.
pub fn embed_in_coxeter(w: &FWord) -> CoxWord {
    CoxWord::from_letters(w.letters().iter().flat_map(|&l| letter_image(l)))
}

/// Inverse of [`embed_in_coxeter`] on even-length words.
pub fn project_to_f2(w: &CoxWord) -> Result<FWord> {
    use Reflection::*;
    if w.len() % 2 == 1 {
        return Err(Error::OddCoxeterWord(w.len()));
    }
    let mut raw = Vec::with_capacity(w.len() / 2);
    for pair in w.letters().chunks(2) {
        let r = match (pair[0], pair[1]) {
            (Q, R) => RawLetter::Stored(Letter::X),
            (R, Q) => RawLetter::Stored(Letter::XInv),
            (R, P) => RawLetter::Stored(Letter::Y),
            (P, R) => RawLetter::Stored(Letter::YInv),
            (P, Q) => RawLetter::Z,
            (Q, P) => RawLetter::ZInv,
            _ => return Err(Error::Internal(format!("unreduced Coxeter word {w}"))),
        };
        raw.push(r);
    }
    Ok(normalize(&raw))
}

/// The cyclic automorphism `X → Y → Z → X` of `F₂`.
///
/// A representation at `(x, y, z)` composed with it has traces `(y, z, x)`.
pub fn shift_generators(w: &FWord) -> FWord {
    FWord::from_letters(w.letters().iter().flat_map(|l| match l {
        Letter::X => vec![Letter::Y],
        Letter::XInv => vec![Letter::YInv],
        // Z = Y⁻¹X⁻¹
        Letter::Y => vec![Letter::YInv, Letter::XInv],
        Letter::YInv => vec![Letter::X, Letter::Y],
    }))
}

/// `A = QPR`, `B = RQP`, `C = PRQ`: rotations by `θ/2` about the triangle's vertices.
pub fn vertex_rotation(which: char) -> CoxWord {
    let s = match which {
        'A' => "QPR",
        'B' => "RQP",
        'C' => "PRQ",
        other => panic!("no vertex rotation named {other}"),
    };
    CoxWord::parse(s).expect("static word")
}

/// The Coxeter-side pieces `(g, I)` with `u_N = [g, I] = g I g⁻¹ I`,
/// `g = Z⁻¹A^{2N}B` and `I = R`.
pub fn u_n_coxeter_parts(n: u32) -> (CoxWord, CoxWord) {
    let z_inv = CoxWord::parse("QP").expect("static word");
    let g = z_inv.mul(&vertex_rotation('A').pow(2 * i64::from(n))).mul(&vertex_rotation('B'));
    (g, CoxWord::parse("R").expect("static word"))
}

/// `u_N = XY[X,Y]^N X⁻¹Y⁻²X⁻¹[Y⁻¹,X⁻¹]^N YX`, cross-checked against the
/// reduction of `[Z⁻¹A^{2N}B, R]` in `W`.
pub fn build_u_n(n: i64) -> Result<FWord> {
    if n < 1 {
        return Err(Error::OutOfRange(format!("u_N needs N ≥ 1, got {n}")));
    }
    let (x, y) = (FWord::x(), FWord::y());
    let explicit = x
        .mul(&y)
        .mul(&FWord::commutator(&x, &y).pow(n))
        .mul(&x.inverse())
        .mul(&y.pow(-2))
        .mul(&x.inverse())
        .mul(&FWord::commutator(&y.inverse(), &x.inverse()).pow(n))
        .mul(&y)
        .mul(&x);
    let (g, r) = u_n_coxeter_parts(n as u32);
    let cox = g.mul(&r).mul(&g.inverse()).mul(&r);
    let projected = project_to_f2(&cox)?;
    if projected != explicit {
        return Err(Error::Internal(format!(
            "u_{n}: Coxeter reduction gives {projected}, explicit form gives {explicit}"
        )));
    }
    Ok(explicit)
}

/// `w_N = [Z,X]^N [Y,Z]^N` with `Z` expanded.
pub fn build_w_n(n: i64) -> Result<FWord> {
    if n < 1 {
        return Err(Error::OutOfRange(format!("w_N needs N ≥ 1, got {n}")));
    }
    let (x, y, z) = (FWord::x(), FWord::y(), FWord::z());
    Ok(FWord::commutator(&z, &x).pow(n).mul(&FWord::commutator(&y, &z).pow(n)))
}

/// `w = root^exponent` with maximal exponent. For a non-cyclically-reduced
/// `w = c·core·c⁻¹` the root is `c·r·c⁻¹` where `r` is the root of the core.
pub fn primitive_root(w: &FWord) -> Result<(FWord, u32)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (core, conj) = cyclic_reduce(w);
    let n = core.len();
    for p in (1..=n).filter(|p| n % p == 0) {
        let l = core.letters();
        if (p..n).all(|i| l[i] == l[i - p]) {
            let root = FWord(l[..p].to_vec());
            return Ok((root.conjugate_by(&conj), (n / p) as u32));
        }
    }
    unreachable!("period n always divides n")
}

/// Start positions of `pattern` in `text`; cyclic mode allows wraparound
/// (and requires `|pattern| ≤ |text|`).
pub fn occurrences(pattern: &FWord, text: &FWord, cyclic: bool) -> Vec<usize> {
    occurrences_in(pattern.letters(), text.letters(), cyclic)
}

pub(crate) fn occurrences_in(pattern: &[Letter], text: &[Letter], cyclic: bool) -> Vec<usize> {
    let (m, n) = (pattern.len(), text.len());
    if m == 0 || m > n {
        return Vec::new();
    }
    let starts = if cyclic { n } else { n - m + 1 };
    (0..starts).filter(|&i| (0..m).all(|j| text[(i + j) % n] == pattern[j])).collect()
}
