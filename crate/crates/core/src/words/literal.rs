//! Parser for word literals such as `XY[X,Y]^2 x y^2 x [y,x]^2 YX`.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! word  := term*
//! term  := atom ('^' int)?
//! atom  := 'X' | 'x' | 'Y' | 'y' | 'Z' | 'z' | '1'
//!        | '[' word ',' word ']'      commutator a b a⁻¹ b⁻¹
//!        | '(' word ')'
//!        | 'u' digits | 'w' digits    the distinguished words u_N, w_N
//! ```

use super::{build_u_n, build_w_n, normalize, FWord, Letter, RawLetter};
use crate::error::{Error, Result};

pub fn parse_word(input: &str) -> Result<FWord> {
    let chars: Vec<(usize, char)> = input.char_indices().filter(|(_, c)| !c.is_whitespace() && *c != '_').collect();
    let mut p = Parser { chars, pos: 0, len: input.len() };
    let w = p.word()?;
    if let Some(&(off, c)) = p.chars.get(p.pos) {
        return Err(Error::WordSyntax { offset: off, msg: format!("unexpected {c:?}") });
    }
    Ok(w)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::WordSyntax { offset: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn word(&mut self) -> Result<FWord> {
        let mut acc = FWord::identity();
        while let Some(c) = self.peek() {
            if matches!(c, ',' | ']' | ')') {
                break;
            }
            let t = self.term()?;
            acc = acc.mul(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FWord> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.digits();
        if digits.is_empty() {
            return self.err("expected an integer exponent");
        }
        let v: i64 =
            digits.parse().map_err(|_| Error::WordSyntax { offset: self.offset(), msg: "exponent overflow".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<FWord> {
        let Some(c) = self.peek() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        let raw = |r: RawLetter| Ok(normalize(&[r]));
        match c {
            'X' => raw(RawLetter::Stored(Letter::X)),
            'x' => raw(RawLetter::Stored(Letter::XInv)),
            'Y' => raw(RawLetter::Stored(Letter::Y)),
            'y' => raw(RawLetter::Stored(Letter::YInv)),
            'Z' => raw(RawLetter::Z),
            'z' => raw(RawLetter::ZInv),
            '1' => Ok(FWord::identity()),
            '(' => {
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            '[' => {
                let a = self.word()?;
                self.expect(',')?;
                let b = self.word()?;
                self.expect(']')?;
                Ok(FWord::commutator(&a, &b))
            }
            'u' | 'w' => {
                let d = self.digits();
                if d.is_empty() {
                    self.pos -= 1;
                    return self.err(format!("{c:?} must be followed by an index"));
                }
                let n: i64 =
                    d.parse().map_err(|_| Error::WordSyntax { offset: self.offset(), msg: "index overflow".into() })?;
                if c == 'u' {
                    build_u_n(n)
                } else {
                    build_w_n(n)
                }
            }
            other => {
                self.pos -= 1;
                self.err(format!("unexpected {other:?}"))
            }
        }
    }
}
