//! Prime fields 𝔽_p with p < 2^31.

use std::fmt;

use crate::error::{Error, Result};

/// An element of 𝔽_p, always stored as the canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(pub u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The characteristic. Primality is checked once, at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    pub fn p(self) -> u32 {
        self.0
    }

    pub fn require_odd(self) -> Result<Self> {
        if self.0 == 2 {
            Err(Error::EvenPrime)
        } else {
            Ok(self)
        }
    }

    /// `p^e` as an i64, or an overflow error.
    pub fn power(self, e: u32) -> Result<i64> {
        (self.0 as i64)
            .checked_pow(e)
            .ok_or(Error::ExponentOverflow)
    }

    pub fn reduce(self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.0 as i64) as u32)
    }

    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a.0 as u64 + b.0 as u64;
        Scalar((s % self.0 as u64) as u32)
    }

    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a.0 as u64 + self.0 as u64 - b.0 as u64;
        Scalar((s % self.0 as u64) as u32)
    }

    pub fn neg(self, a: Scalar) -> Scalar {
        if a.0 == 0 {
            a
        } else {
            Scalar(self.0 - a.0)
        }
    }

    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(((a.0 as u64 * b.0 as u64) % self.0 as u64) as u32)
    }

    pub fn pow(self, a: Scalar, mut k: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    pub fn div(self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `k!` reduced mod p.
    pub fn factorial(self, k: u64) -> Scalar {
        (1..=k).fold(Scalar::ONE, |acc, i| self.mul(acc, self.reduce(i as i64)))
    }

    /// Iterates every element of the field in increasing order.
    pub fn elements(self) -> impl Iterator<Item = Scalar> {
        (0..self.0).map(Scalar)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
