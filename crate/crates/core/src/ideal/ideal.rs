use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::{Monomial, Polynomial, Ring};

use super::groebner::{self, TermOrder, Terms, DEFAULT_SPAIR_BUDGET};

/// An ideal given by generators, with a lazily computed reduced Gröbner
/// basis (grevlex).
///
/// In a Laurent ring the basis describes the contraction to the polynomial
/// ring: generators are cleared of denominators and saturated by the product
/// of all variables, so the basis is again canonical.
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    budget: usize,
    gb: OnceLock<Result<Vec<Polynomial>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(v) = self.gb.get() {
            let _ = gb.set(v.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            budget: self.budget,
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.gens)
    }
}

fn to_terms(f: &Polynomial) -> Terms {
    f.terms().to_vec()
}

fn lift(f: &Terms, shift: usize) -> Terms {
    f.iter()
        .map(|(m, c)| {
            let mut e = vec![0i64; shift];
            e.extend_from_slice(m.exps());
            (Monomial::from_exps(&e), *c)
        })
        .collect()
}

fn drop_front(f: &Terms, shift: usize) -> Terms {
    f.iter()
        .map(|(m, c)| (Monomial::from_exps(&m.exps()[shift..]), *c))
        .collect()
}

/// Display order for bases: by degree, then by decreasing grevlex.
fn display_cmp(a: &Polynomial, b: &Polynomial) -> Ordering {
    let la = a.leading_monomial().expect("nonzero");
    let lb = b.leading_monomial().expect("nonzero");
    la.degree().cmp(&lb.degree()).then_with(|| lb.cmp(la))
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        if gens.iter().any(|g| g.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            budget: DEFAULT_SPAIR_BUDGET,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::new(ring, Vec::new()).expect("same ring")
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![Polynomial::one(ring)]).expect("same ring")
    }

    pub fn principal(f: &Polynomial) -> Ideal {
        Ideal::new(f.ring(), vec![f.clone()]).expect("same ring")
    }

    pub fn from_strs(ring: &Ring, gens: &[&str]) -> Result<Ideal> {
        let polys = gens
            .iter()
            .map(|s| crate::poly::parse_poly(s, ring))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    /// Sets the S-pair budget used by this ideal's basis computation.
    pub fn with_budget(mut self, budget: usize) -> Ideal {
        self.budget = budget;
        self.gb = OnceLock::new();
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// The single nonzero generator, if the ideal was given as principal.
    pub fn principal_generator(&self) -> Option<&Polynomial> {
        match self.gens.as_slice() {
            [g] => Some(g),
            _ => None,
        }
    }

    /// True if the ideal was given by a single nonzero generator or is zero.
    pub fn is_principal_given(&self) -> bool {
        self.gens.len() <= 1
    }

    fn check(&self, other: &Ideal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn gb_terms(&self, gens: Vec<Terms>) -> Result<Vec<Terms>> {
        groebner::groebner_basis(gens, self.ring.modulus(), TermOrder::Grevlex, self.budget)
    }

    fn compute_gb(&self) -> Result<Vec<Polynomial>> {
        let gens: Vec<Terms> = if self.ring.is_laurent() {
            self.gens
                .iter()
                .map(|g| to_terms(&g.clear_denominators().0))
                .collect()
        } else {
            self.gens.iter().map(to_terms).collect()
        };
        let mut basis = self.gb_terms(gens)?;
        if self.ring.is_laurent() && !basis.is_empty() {
            let n = self.ring.arity();
            let all_vars = vec![(Monomial::from_exps(&vec![1; n]), Scalar::ONE)];
            basis = self.saturate_terms(basis, &all_vars)?;
        }
        let mut out: Vec<Polynomial> = basis
            .into_iter()
            .map(|t| Polynomial::from_terms(&self.ring, t).expect("basis stays in ring"))
            .collect();
        out.sort_by(display_cmp);
        Ok(out)
    }

    /// Reduced Gröbner basis (monic, canonical).
    pub fn groebner(&self) -> Result<&[Polynomial]> {
        match self.gb.get_or_init(|| self.compute_gb()) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    fn basis_terms(&self) -> Result<Vec<Terms>> {
        Ok(self.groebner()?.iter().map(to_terms).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.first().is_some_and(|g| g.is_constant()))
    }

    /// Normal form of `f` modulo the ideal (after clearing denominators in a
    /// Laurent ring).
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let f = if self.ring.is_laurent() {
            f.clear_denominators().0
        } else {
            f.clone()
        };
        let basis = self.basis_terms()?;
        let r = groebner::normal_form(
            to_terms(&f),
            &basis,
            self.ring.modulus(),
            TermOrder::Grevlex,
        );
        Polynomial::from_terms(&self.ring, r)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn ideal_eq(&self, other: &Ideal) -> Result<bool> {
        self.check(other)?;
        Ok(self.groebner()? == other.groebner()?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    /// Sum of several ideals in the same ring.
    pub fn sum_all<'a, I: IntoIterator<Item = &'a Ideal>>(ring: &Ring, ideals: I) -> Result<Ideal> {
        let mut gens = Vec::new();
        for i in ideals {
            if i.ring() != ring {
                return Err(Error::RingMismatch);
            }
            gens.extend(i.gens.iter().cloned());
        }
        Ideal::new(ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.checked_mul(b)?);
            }
        }
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    /// Multiplies every generator by `f`.
    pub fn scale(&self, f: &Polynomial) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.checked_mul(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    /// Ideal generated by reduced basis elements, which drops redundant
    /// generators. Useful before repeated products.
    pub fn minimized(&self) -> Result<Ideal> {
        let gens = self.groebner()?.to_vec();
        let out = Ideal::new(&self.ring, gens.clone())?.with_budget(self.budget);
        let _ = out.gb.set(Ok(gens));
        Ok(out)
    }

    /// `I^m`. Principal ideals use Frobenius-aware powering of the
    /// generator; others square and multiply, minimizing in between.
    pub fn power(&self, m: u64) -> Result<Ideal> {
        if m == 0 {
            return Ok(Ideal::unit(&self.ring).with_budget(self.budget));
        }
        if self.gens.is_empty() {
            return Ok(self.clone());
        }
        if let Some(g) = self.principal_generator() {
            return Ok(Ideal::principal(&g.pow(m)?).with_budget(self.budget));
        }
        let mut result: Option<Ideal> = None;
        let mut base = self.minimized()?;
        let mut k = m;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.product(&base)?.minimized()?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.product(&base)?.minimized()?;
        }
        Ok(result.expect("m > 0"))
    }

    /// `I^[p^e]`: generated by the `p^e`-th powers of the generators.
    pub fn frob_power(&self, e: u32) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.frob(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    fn eliminate_first(&self, gens: Vec<Terms>) -> Result<Vec<Terms>> {
        let gb = groebner::groebner_basis(
            gens,
            self.ring.modulus(),
            TermOrder::Eliminate(1),
            self.budget,
        )?;
        Ok(gb
            .iter()
            .filter(|g| g.iter().all(|(m, _)| m.exps()[0] == 0))
            .map(|g| {
                let mut t = drop_front(g, 1);
                TermOrder::Grevlex.sort(&mut t);
                t
            })
            .collect())
    }

    /// `(basis : f^∞)` computed as `(basis, 1 - t·f) ∩ k[x]`.
    fn saturate_terms(&self, basis: Vec<Terms>, f: &Terms) -> Result<Vec<Terms>> {
        let m = self.ring.modulus();
        let mut gens: Vec<Terms> = basis.iter().map(|g| lift(g, 1)).collect();
        let mut tf: Terms = lift(f, 1)
            .into_iter()
            .map(|(mut mo, c)| {
                mo.exps_mut()[0] = 1;
                (mo, m.neg(c))
            })
            .collect();
        tf.push((Monomial::one(self.ring.arity() + 1), Scalar::ONE));
        gens.push(tf);
        let elim = self.eliminate_first(gens)?;
        self.gb_terms(elim)
    }

    /// Saturation `(I : f^∞)`.
    pub fn saturation(&self, f: &Polynomial) -> Result<Ideal> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let basis = self.basis_terms()?;
        let f = if self.ring.is_laurent() {
            f.clear_denominators().0
        } else {
            f.clone()
        };
        let sat = self.saturate_terms(basis, &to_terms(&f))?;
        self.from_basis_terms(sat)
    }

    fn from_basis_terms(&self, basis: Vec<Terms>) -> Result<Ideal> {
        let gens = basis
            .into_iter()
            .map(|t| Polynomial::from_terms(&self.ring, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    /// `I ∩ J` via `t·I + (1-t)·J` and elimination of `t`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring).with_budget(self.budget));
        }
        let m = self.ring.modulus();
        let n1 = self.ring.arity() + 1;
        let t = Monomial::var(n1, 0);
        let mut gens = Vec::new();
        for g in self.basis_terms()? {
            gens.push(
                lift(&g, 1)
                    .into_iter()
                    .map(|(mo, c)| (mo.checked_mul(&t).expect("small"), c))
                    .collect(),
            );
        }
        for g in other.basis_terms()? {
            let lifted = lift(&g, 1);
            let mut h: Terms = lifted.clone();
            for (mo, c) in lifted {
                h.push((mo.checked_mul(&t).expect("small"), m.neg(c)));
            }
            gens.push(h);
        }
        let elim = self.eliminate_first(gens)?;
        self.from_basis_terms(elim)
    }

    /// `(I : f) = {g : gf ∈ I}`.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<Ideal> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::ZeroColon);
        }
        let f = if self.ring.is_laurent() {
            f.clear_denominators().0
        } else {
            f.clone()
        };
        let inter = self.intersect(&Ideal::principal(&f))?;
        let gens = inter
            .gens
            .iter()
            .map(|g| div_exact(g, &f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, gens)?.with_budget(self.budget))
    }

    /// `(I : J) = ∩ (I : g)` over the generators of `J`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::ZeroColon);
        }
        let mut acc: Option<Ideal> = None;
        for g in other.groebner()? {
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.expect("nonzero ideal has a generator"))
    }

    /// Canonical text of the reduced basis, e.g. `(x, y^2)`.
    pub fn basis_string(&self) -> Result<String> {
        let gb = self.groebner()?;
        if gb.is_empty() {
            return Ok("(0)".to_string());
        }
        let parts: Vec<String> = gb.iter().map(|g| g.to_string()).collect();
        Ok(format!("({})", parts.join(", ")))
    }

    /// Stable 64-bit content hash of the printed reduced basis.
    pub fn content_hash(&self) -> Result<u64> {
        Ok(hash_text(&self.basis_string()?))
    }
}

/// First eight bytes of SHA-256, big-endian.
pub fn hash_text(s: &str) -> u64 {
    let digest = Sha256::digest(s.as_bytes());
    let mut b = [0u8; 8];
    b.copy_from_slice(&digest[..8]);
    u64::from_be_bytes(b)
}

/// Exact division `h / g`; fails if `g` does not divide `h`.
pub fn div_exact(h: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ring = h.ring();
    let m = ring.modulus();
    let (lg, cg) = g.leading().expect("nonzero").clone();
    let inv = m.inv(cg)?;
    let mut rem = h.clone();
    let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
    while let Some((lr, cr)) = rem.leading().cloned() {
        if !ring.is_laurent() && !lg.divides(&lr) {
            return Err(Error::InexactDivision);
        }
        let qm = lr.quotient(&lg);
        let qc = m.mul(cr, inv);
        rem = &rem - &g.mul_term(&qm, qc)?;
        quot.push((qm, qc));
        if quot.len() > h.len() * g.len() + h.len() + 16 && ring.is_laurent() {
            return Err(Error::InexactDivision);
        }
    }
    Polynomial::from_terms(ring, quot)
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.basis_string() {
            Ok(s) => write!(f, "{s}"),
            Err(_) => {
                let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn r3() -> Ring {
        Ring::new(3, &["x", "y"]).unwrap()
    }

    fn id(r: &Ring, g: &[&str]) -> Ideal {
        Ideal::from_strs(r, g).unwrap()
    }

    #[test]
    fn basis_examples() {
        let r = r3();
        assert_eq!(id(&r, &["x+y", "y"]).basis_string().unwrap(), "(x, y)");
        assert_eq!(
            id(&r, &["x^2", "x*y", "y^2", "x"]).basis_string().unwrap(),
            "(x, y^2)"
        );
        assert_eq!(id(&r, &["0"]).basis_string().unwrap(), "(0)");
        assert_eq!(id(&r, &["x+1", "x"]).basis_string().unwrap(), "(1)");
    }

    #[test]
    fn membership() {
        let r = r3();
        let i = id(&r, &["x", "y"]);
        assert!(i.contains(&parse_poly("x+2*y", &r).unwrap()).unwrap());
        let j = id(&r, &["x^2", "y^2"]);
        assert!(!j.contains(&parse_poly("x*y", &r).unwrap()).unwrap());
        assert!(id(&r, &["x+y", "y"]).ideal_eq(&i).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = r3();
        let i = id(&r, &["x^2", "y^2"]);
        let c = i.colon(&id(&r, &["(x+y)^2"])).unwrap();
        assert_eq!(c.basis_string().unwrap(), "(x, y)");
        let c = id(&r, &["x^3", "y^3"])
            .colon(&id(&r, &["x^2*y^2"]))
            .unwrap();
        assert_eq!(c.basis_string().unwrap(), "(x, y)");
        assert!(i.colon(&Ideal::unit(&r)).unwrap().ideal_eq(&i).unwrap());
        assert_eq!(i.colon(&Ideal::zero(&r)).unwrap_err(), Error::ZeroColon);
    }

    #[test]
    fn powers_and_frobenius() {
        let r = r3();
        assert_eq!(
            id(&r, &["x", "y"])
                .frob_power(1)
                .unwrap()
                .basis_string()
                .unwrap(),
            "(x^3, y^3)"
        );
        assert_eq!(
            id(&r, &["x", "y"])
                .power(2)
                .unwrap()
                .basis_string()
                .unwrap(),
            "(x^2, x*y, y^2)"
        );
        assert_eq!(
            id(&r, &["x+y"]).power(9).unwrap().basis_string().unwrap(),
            "(x^9 + y^9)"
        );
        assert_eq!(
            id(&r, &["x"])
                .product(&id(&r, &["y"]))
                .unwrap()
                .basis_string()
                .unwrap(),
            "(x*y)"
        );
        assert_eq!(
            id(&r, &["x", "y"])
                .power(0)
                .unwrap()
                .basis_string()
                .unwrap(),
            "(1)"
        );
    }

    #[test]
    fn intersection_and_saturation() {
        let r = r3();
        let i = id(&r, &["x"]).intersect(&id(&r, &["y"])).unwrap();
        assert_eq!(i.basis_string().unwrap(), "(x*y)");
        let s = id(&r, &["x^2*y", "x^3"])
            .saturation(&parse_poly("x", &r).unwrap())
            .unwrap();
        assert_eq!(s.basis_string().unwrap(), "(1)");
    }

    #[test]
    fn laurent_ideals_forget_monomials() {
        let l = Ring::new(3, &["x", "y"]).unwrap().with_laurent(true);
        assert!(id(&l, &["x^-1*y^2"]).is_unit().unwrap());
        let i = id(&l, &["x^2*y + x^3", "x*y^2"]);
        assert_eq!(i.basis_string().unwrap(), "(1)");
        let j = id(&l, &["x*(x+y)"]);
        assert_eq!(j.basis_string().unwrap(), "(x + y)");
        assert!(j.contains(&parse_poly("x^-5*(x+y)", &l).unwrap()).unwrap());
    }

    #[test]
    fn exact_division() {
        let r = r3();
        let h = parse_poly("(x+y)^2*(x*y+1)", &r).unwrap();
        let g = parse_poly("x*y+1", &r).unwrap();
        assert_eq!(
            div_exact(&h, &g).unwrap(),
            parse_poly("(x+y)^2", &r).unwrap()
        );
        assert_eq!(
            div_exact(&g, &parse_poly("x", &r).unwrap()),
            Err(Error::InexactDivision)
        );
    }
}
