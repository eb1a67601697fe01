use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector, one signed entry per ring variable.
///
/// `Ord` is graded reverse lexicographic: total degree first, ties broken by
/// the last variable, where the smaller exponent wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[i64; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[i64]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn exps_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = self.clone();
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a = a.checked_add(*b).ok_or(Error::ExponentOverflow)?;
        }
        Ok(out)
    }

    /// Exponent-wise difference, without a divisibility check.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Monomial> {
        let mut out = self.clone();
        for a in out.0.iter_mut() {
            *a = a.checked_mul(k).ok_or(Error::ExponentOverflow)?;
        }
        Ok(out)
    }
}

#[allow(dead_code)]
pub(crate) fn grevlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex(&self.0, &other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
