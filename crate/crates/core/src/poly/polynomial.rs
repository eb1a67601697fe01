use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Scalar;

use super::monomial::Monomial;
use super::ring::Ring;

/// Sparse polynomial over `𝔽_p`. Terms are kept sorted in decreasing
/// grevlex order with no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Polynomial {
        let c = ring.modulus().reduce(c);
        Polynomial::term(ring, Monomial::one(ring.arity()), c)
    }

    pub fn var(ring: &Ring, i: usize) -> Polynomial {
        Polynomial::term(ring, Monomial::var(ring.arity(), i), Scalar::ONE)
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Polynomial> {
        Ok(Polynomial::var(ring, ring.var_index(name)?))
    }

    /// A single term. Panics if the monomial has the wrong arity or a
    /// negative exponent in a non-Laurent ring.
    pub fn term(ring: &Ring, m: Monomial, c: Scalar) -> Polynomial {
        assert_eq!(m.arity(), ring.arity(), "monomial arity");
        assert!(ring.is_laurent() || m.is_nonnegative(), "negative exponent");
        if c.is_zero() {
            return Polynomial::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(m, c)],
        }
    }

    pub fn monomial(ring: &Ring, exps: &[i64]) -> Polynomial {
        Polynomial::term(ring, Monomial::from_exps(exps), Scalar::ONE)
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let m = ring.modulus();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (mono, c) in terms {
            if mono.arity() != ring.arity() {
                return Err(Error::RingMismatch);
            }
            if !ring.is_laurent() && !mono.is_nonnegative() {
                return Err(Error::NegativeExponent);
            }
            let e = acc.entry(mono).or_insert(Scalar::ZERO);
            *e = m.add(*e, c);
        }
        Ok(Polynomial::from_map(ring, acc))
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, Scalar>) -> Polynomial {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusted constructor for already sorted, nonzero terms.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, Scalar)>) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == Scalar::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Nonzero scalar times a monomial; in a Laurent ring these are the units.
    pub fn as_term(&self) -> Option<(&Monomial, Scalar)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, *c)),
            _ => None,
        }
    }

    /// True iff the polynomial is invertible in its ring.
    pub fn is_unit(&self) -> bool {
        match self.as_term() {
            Some((m, _)) => self.ring.is_laurent() || m.is_one(),
            None => false,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.first().map_or(Scalar::ZERO, |t| t.1)
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map_or(Scalar::ZERO, |i| self.terms[i].1)
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(self.ring == other.ring, "operands live in different rings");
    }

    pub fn scale(&self, c: Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let m = self.ring.modulus();
        let terms = self
            .terms
            .iter()
            .map(|(mo, a)| (mo.clone(), m.mul(*a, c)))
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .ring
            .modulus()
            .inv(self.leading_coeff())
            .expect("nonzero");
        self.scale(inv)
    }

    pub fn mul_term(&self, mono: &Monomial, c: Scalar) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let m = self.ring.modulus();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (a, b) in &self.terms {
            let prod = a.checked_mul(mono)?;
            if !self.ring.is_laurent() && !prod.is_nonnegative() {
                return Err(Error::NegativeExponent);
            }
            terms.push((prod, m.mul(*b, c)));
        }
        // multiplying by a monomial preserves the order
        Ok(Polynomial::from_sorted(&self.ring, terms))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, self.terms[0].1);
        }
        let m = self.ring.modulus();
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = acc.entry(a.checked_mul(b)?).or_insert(Scalar::ZERO);
                *e = m.add(*e, m.mul(*ca, *cb));
            }
        }
        Ok(Polynomial::from_map(&self.ring, acc))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        self.check_ring(other);
        let m = self.ring.modulus();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: Scalar| if negate { m.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ca) = &self.terms[i];
            let (b, cb) = &other.terms[j];
            match a.cmp(b) {
                std::cmp::Ordering::Greater => {
                    out.push((a.clone(), *ca));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b.clone(), sign(*cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = m.add(*ca, sign(*cb));
                    if !c.is_zero() {
                        out.push((a.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(b, cb)| (b.clone(), sign(*cb))),
        );
        Polynomial::from_sorted(&self.ring, out)
    }

    /// `f^m` via base-p splitting `f^m = f^(m mod p) · frob(f^(m div p))`.
    pub fn pow(&self, m: u64) -> Result<Polynomial> {
        if m == 0 {
            return Ok(Polynomial::one(&self.ring));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some((mono, c)) = self.as_term() {
            let k = i64::try_from(m).map_err(|_| Error::ExponentOverflow)?;
            let c = self.ring.modulus().pow(c, m);
            return Ok(Polynomial::term(&self.ring, mono.checked_scale(k)?, c));
        }
        // reject before expanding: intermediate powers can be enormous
        let widest = self
            .terms
            .iter()
            .flat_map(|t| t.0.exps())
            .map(|e| e.unsigned_abs())
            .max();
        if widest
            .unwrap_or(0)
            .checked_mul(m)
            .is_none_or(|d| d > i64::MAX as u64)
        {
            return Err(Error::ExponentOverflow);
        }
        let p = self.ring.p() as u64;
        let high = m / p;
        let low = m % p;
        let mut acc = if high > 0 {
            self.pow(high)?.frob(1)?
        } else {
            Polynomial::one(&self.ring)
        };
        for _ in 0..low {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Plain square-and-multiply, kept as an independent route for tests.
    pub fn pow_naive(&self, m: u64) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..m {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// `f^(p^e)`: every exponent vector is scaled by `p^e`.
    pub fn frob(&self, e: u32) -> Result<Polynomial> {
        let q = self.ring.modulus().power(e)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mono, c) in &self.terms {
            terms.push((mono.checked_scale(q)?, *c));
        }
        // scaling by a positive factor preserves grevlex
        Ok(Polynomial::from_sorted(&self.ring, terms))
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        let m = self.ring.modulus();
        let mut out = Vec::with_capacity(self.terms.len());
        for (mono, c) in &self.terms {
            let k = mono.exps()[var];
            let c = m.mul(*c, m.reduce(k));
            if c.is_zero() {
                continue;
            }
            let mut d = mono.clone();
            d.exps_mut()[var] -= 1;
            out.push((d, c));
        }
        Polynomial::from_terms(&self.ring, out).expect("derivative stays in the ring")
    }

    /// Moves the polynomial into another ring with the same variables.
    pub fn with_ring(&self, ring: &Ring) -> Result<Polynomial> {
        if ring.arity() != self.ring.arity() || ring.p() != self.ring.p() {
            return Err(Error::RingMismatch);
        }
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }

    /// Evaluates a substitution `x_i ↦ images[i]` (images in `target`).
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.arity() {
            return Err(Error::RingMismatch);
        }
        let mut acc = Polynomial::zero(target);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.value() as i64);
            for (i, &k) in mono.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    images[i].clone()
                } else {
                    invert_unit(&images[i])?
                };
                t = t.checked_mul(&base.pow(k.unsigned_abs())?)?;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Multiplies by the least monomial making every exponent nonnegative,
    /// returning the result and that monomial.
    pub fn clear_denominators(&self) -> (Polynomial, Monomial) {
        let n = self.ring.arity();
        let mut shift = vec![0i64; n];
        for (mono, _) in &self.terms {
            for (s, &e) in shift.iter_mut().zip(mono.exps()) {
                *s = (*s).max(-e);
            }
        }
        let shift = Monomial::from_exps(&shift);
        let out = self
            .mul_term(&shift, Scalar::ONE)
            .expect("clearing denominators");
        (out, shift)
    }

    /// Divides out the gcd monomial of all terms (meaningful in Laurent
    /// rings, or to strip monomial content).
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |g, (m, _)| g.gcd(m)))
    }
}

/// Inverse of `c·x^a`, valid only in Laurent rings (or for constants).
pub fn invert_unit(u: &Polynomial) -> Result<Polynomial> {
    let ring = u.ring();
    match u.as_term() {
        Some((m, c)) if ring.is_laurent() || m.is_one() => {
            let inv = ring.modulus().inv(c)?;
            Ok(Polynomial::term(ring, m.checked_scale(-1)?, inv))
        }
        Some(_) => Err(Error::NegativeExponent),
        None => Err(Error::Precondition(format!("{u} is not a unit"))),
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let m = self.ring.modulus();
        let terms = self
            .terms
            .iter()
            .map(|(mo, c)| (mo.clone(), m.neg(*c)))
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on exponent overflow; use `checked_mul` to recover.
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs)
            .expect("exponent overflow in multiplication")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.var_names();
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if c.value() != 1 || mono.is_one() {
                factors.push(c.to_string());
            }
            for (name, &e) in names.iter().zip(mono.exps()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn ring(p: u64) -> Ring {
        Ring::new(p, &["x", "y"]).unwrap()
    }

    #[test]
    fn printing() {
        let r = ring(3);
        let f = parse_poly("(x+y)^2", &r).unwrap();
        assert_eq!(f.to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
        assert_eq!(Polynomial::constant(&r, -1).to_string(), "2");
    }

    #[test]
    fn freshman_dream() {
        let r = ring(3);
        let f = parse_poly("x+y", &r).unwrap();
        assert_eq!(f.pow(3).unwrap().to_string(), "x^3 + y^3");
        assert_eq!(f.pow(9).unwrap().to_string(), "x^9 + y^9");
        let f4 = f.pow(4).unwrap();
        assert_eq!(f4.to_string(), "x^4 + x^3*y + x*y^3 + y^4");
        assert_eq!(f4, f.pow_naive(4).unwrap());
    }

    #[test]
    fn huge_exponent_stays_sparse() {
        let r = ring(3);
        let f = parse_poly("x+y", &r).unwrap();
        let g = f.pow(3u64.pow(30)).unwrap();
        assert_eq!(g.len(), 2);
        assert!(f.pow(u64::MAX).is_err());
    }

    #[test]
    fn frob_examples() {
        let r = ring(3);
        let f = parse_poly("2*x", &r).unwrap();
        assert_eq!(f.frob(2).unwrap().to_string(), "2*x^9");
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let g = parse_poly("x^-1", &l).unwrap();
        assert_eq!(g.frob(1).unwrap().to_string(), "x^-3");
    }

    #[test]
    fn derivatives() {
        let r = ring(3);
        let d = parse_poly("x^2*y", &r).unwrap().partial_derivative(0);
        assert_eq!(d.to_string(), "2*x*y");
        assert!(parse_poly("x^3", &r)
            .unwrap()
            .partial_derivative(0)
            .is_zero());
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let d = parse_poly("x^-1", &l).unwrap().partial_derivative(0);
        assert_eq!(d.to_string(), "2*x^-2");
    }

    #[test]
    fn substitution_and_units() {
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let f = parse_poly("x^2 + x^-1", &l).unwrap();
        let img = parse_poly("2*x^-1", &l).unwrap();
        let g = f.substitute(&l, &[img]).unwrap();
        assert_eq!(g, parse_poly("x^-2 + 2*x", &l).unwrap());
        let (c, m) = f.clear_denominators();
        assert_eq!(c.to_string(), "x^3 + 1");
        assert_eq!(m.exps(), &[1]);
    }
}
