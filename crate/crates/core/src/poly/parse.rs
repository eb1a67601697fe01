//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' int)?
//! base   := int | var | '(' expr ')'
//! int    := '-'? [0-9]+
//! ```
//! A leading sign on a term is also accepted, so `-x + y` parses.

use crate::error::{Error, Result};
use crate::field::Scalar;

use super::polynomial::{invert_unit, Polynomial};
use super::ring::Ring;

pub fn parse_poly(text: &str, ring: &Ring) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a comma-separated list of expressions. Commas inside parentheses
/// are not separators.
pub fn parse_poly_list(text: &str, ring: &Ring) -> Result<Vec<Polynomial>> {
    split_top_level(text, ',')
        .into_iter()
        .map(|s| parse_poly(s, ring))
        .collect()
}

pub fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.term()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()
            }
            _ => self.term(),
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.checked_mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let k = self.exponent()?;
        if k >= 0 {
            return base.pow(k as u64);
        }
        if !self.ring.is_laurent() {
            return Err(Error::NegativeExponent);
        }
        let inv = invert_unit(&base).map_err(|_| Error::Syntax {
            pos: at,
            msg: "negative power of a non-monomial".into(),
        })?;
        inv.pow(k.unsigned_abs())
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let digits = self.digits()?;
        let v: i64 = digits.parse().map_err(|_| Error::ExponentOverflow)?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn base(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                let neg = c == b'-';
                if neg {
                    self.pos += 1;
                }
                let digits = self.digits()?;
                let m = self.ring.modulus();
                let p = m.p() as u64;
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                let s = Scalar(v as u32);
                let s = if neg { m.neg(s) } else { s };
                Ok(Polynomial::constant(self.ring, s.value() as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Polynomial::var_named(self.ring, name)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
