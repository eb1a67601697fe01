//! Frobenius decompositions along the monomial p-basis, the trace map and
//! bracket roots of ideals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ideal::Ideal;
use crate::poly::{Monomial, Polynomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every variable is a fiber variable; components are rooted polynomials.
    Absolute,
    /// Only the fiber suffix is decomposed; base variables stay unrooted.
    Relative,
}

/// One summand of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Absolute(Polynomial),
    /// Pairs `(s, r)` standing for `s ⊗ F_* r`; `s` is a fiber monomial in
    /// the full ring, `r` lives in the base ring and carries the scalar.
    Relative(Vec<(Polynomial, Polynomial)>),
}

/// `g = Σ_i g_i^q x^i` (absolute) or `g = Σ_i Σ_j s_j^q r_j x^i` (relative).
#[derive(Clone, Debug)]
pub struct FrobDecomposition {
    pub ring: Ring,
    pub e: u32,
    pub q: i64,
    pub mode: Mode,
    /// Positions of the decomposed variables inside the ring.
    pub fiber: Vec<usize>,
    pub components: BTreeMap<Vec<i64>, Component>,
}

fn floor_split(k: i64, q: i64) -> (i64, i64) {
    (k.div_euclid(q), k.rem_euclid(q))
}

/// Embeds a base-ring polynomial into a relative chart.
pub fn embed_base(r: &Polynomial, chart: &Ring) -> Result<Polynomial> {
    let nb = chart.n_base();
    if r.ring().arity() != nb {
        return Err(Error::ChartMismatch(format!(
            "base polynomial has {} variables, chart has {nb}",
            r.ring().arity()
        )));
    }
    let n = chart.arity();
    let terms = r.terms().iter().map(|(m, c)| {
        let mut e = m.exps().to_vec();
        e.resize(n, 0);
        (Monomial::from_exps(&e), *c)
    });
    Polynomial::from_terms(chart, terms)
}

/// Restricts a chart polynomial free of fiber variables to the base ring.
pub fn restrict_base(s: &Polynomial, base: &Ring) -> Result<Polynomial> {
    let nb = base.arity();
    let mut terms = Vec::with_capacity(s.len());
    for (m, c) in s.terms() {
        if m.exps()[nb..].iter().any(|&e| e != 0) {
            return Err(Error::ChartMismatch(format!(
                "{s} involves fiber variables"
            )));
        }
        terms.push((Monomial::from_exps(&m.exps()[..nb]), *c));
    }
    Polynomial::from_terms(base, terms)
}

pub fn decompose(g: &Polynomial, e: u32, mode: Mode) -> Result<FrobDecomposition> {
    if e == 0 {
        return Err(Error::Precondition(
            "decomposition level must be positive".into(),
        ));
    }
    let ring = g.ring().clone();
    let q = ring.modulus().power(e)?;
    let n = ring.arity();
    let fiber: Vec<usize> = match mode {
        Mode::Absolute => (0..n).collect(),
        Mode::Relative => ring.fiber_range().collect(),
    };
    let mut components = BTreeMap::new();
    match mode {
        Mode::Absolute => {
            let mut groups: HashMap<Vec<i64>, Vec<(Monomial, Scalar)>> = HashMap::new();
            for (m, c) in g.terms() {
                let mut idx = Vec::with_capacity(n);
                let mut root = Vec::with_capacity(n);
                for &k in m.exps() {
                    let (a, i) = floor_split(k, q);
                    root.push(a);
                    idx.push(i);
                }
                groups
                    .entry(idx)
                    .or_default()
                    .push((Monomial::from_exps(&root), *c));
            }
            for (idx, terms) in groups {
                components.insert(
                    idx,
                    Component::Absolute(Polynomial::from_terms(&ring, terms)?),
                );
            }
        }
        Mode::Relative => {
            if ring.n_base() == 0 {
                return Err(Error::ChartMismatch(
                    "relative mode needs base variables".into(),
                ));
            }
            let base = ring.base_ring()?;
            let nb = ring.n_base();
            let mut groups: HashMap<Vec<i64>, HashMap<Monomial, Vec<(Monomial, Scalar)>>> =
                HashMap::new();
            for (m, c) in g.terms() {
                let mut idx = Vec::with_capacity(fiber.len());
                let mut s = vec![0i64; n];
                for &v in &fiber {
                    let (a, i) = floor_split(m.exps()[v], q);
                    s[v] = a;
                    idx.push(i);
                }
                let r = Monomial::from_exps(&m.exps()[..nb]);
                groups
                    .entry(idx)
                    .or_default()
                    .entry(Monomial::from_exps(&s))
                    .or_default()
                    .push((r, *c));
            }
            for (idx, by_s) in groups {
                let mut pairs = Vec::new();
                for (s, rs) in by_s {
                    let r = Polynomial::from_terms(&base, rs)?;
                    if !r.is_zero() {
                        pairs.push((Polynomial::term(&ring, s, Scalar::ONE), r));
                    }
                }
                pairs.sort_by(|a, b| b.0.leading_monomial().cmp(&a.0.leading_monomial()));
                if !pairs.is_empty() {
                    components.insert(idx, Component::Relative(pairs));
                }
            }
        }
    }
    components.retain(|_, c| match c {
        Component::Absolute(p) => !p.is_zero(),
        Component::Relative(v) => !v.is_empty(),
    });
    Ok(FrobDecomposition {
        ring,
        e,
        q,
        mode,
        fiber,
        components,
    })
}

impl FrobDecomposition {
    /// Reassembles the decomposed polynomial.
    pub fn recompose(&self) -> Result<Polynomial> {
        let n = self.ring.arity();
        let mut acc = Polynomial::zero(&self.ring);
        for (idx, comp) in &self.components {
            let mut shift = vec![0i64; n];
            for (&v, &i) in self.fiber.iter().zip(idx) {
                shift[v] = i;
            }
            let shift = Monomial::from_exps(&shift);
            let part = match comp {
                Component::Absolute(g) => g.frob(self.e)?,
                Component::Relative(pairs) => {
                    let mut s = Polynomial::zero(&self.ring);
                    for (sj, rj) in pairs {
                        let t = sj.frob(self.e)?.checked_mul(&embed_base(rj, &self.ring)?)?;
                        s = &s + &t;
                    }
                    s
                }
            };
            acc = &acc + &part.mul_term(&shift, Scalar::ONE)?;
        }
        Ok(acc)
    }

    pub fn top_index(&self) -> Vec<i64> {
        vec![self.q - 1; self.fiber.len()]
    }

    pub fn component(&self, idx: &[i64]) -> Option<&Component> {
        self.components.get(idx)
    }
}

impl fmt::Display for FrobDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, comp) in &self.components {
            let key: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            write!(f, "({}): ", key.join(","))?;
            match comp {
                Component::Absolute(g) => writeln!(f, "{g}")?,
                Component::Relative(pairs) => {
                    let parts: Vec<String> = pairs
                        .iter()
                        .map(|(s, r)| format!("[{s} (x) {r}]"))
                        .collect();
                    writeln!(f, "{}", parts.join(" + "))?
                }
            }
        }
        Ok(())
    }
}

/// The trace `Φ^e`: the component at the top index `(q-1, …, q-1)`.
pub fn trace(g: &Polynomial, e: u32) -> Result<Polynomial> {
    let d = decompose(g, e, Mode::Absolute)?;
    Ok(match d.component(&d.top_index()) {
        Some(Component::Absolute(p)) => p.clone(),
        _ => Polynomial::zero(g.ring()),
    })
}

/// Relative trace: the top fiber component as `(s, r)` pairs.
pub fn relative_trace(s: &Polynomial, e: u32) -> Result<Vec<(Polynomial, Polynomial)>> {
    let d = decompose(s, e, Mode::Relative)?;
    Ok(match d.component(&d.top_index()) {
        Some(Component::Relative(v)) => v.clone(),
        _ => Vec::new(),
    })
}

/// All absolute components of `g`.
pub fn components(g: &Polynomial, e: u32) -> Result<Vec<Polynomial>> {
    let d = decompose(g, e, Mode::Absolute)?;
    Ok(d.components
        .into_values()
        .map(|c| match c {
            Component::Absolute(p) => p,
            Component::Relative(_) => unreachable!("absolute decomposition"),
        })
        .collect())
}

/// `I^[1/p^e]`: generated by every component of every generator.
pub fn bracket_root(i: &Ideal, e: u32) -> Result<Ideal> {
    let mut gens = Vec::new();
    for g in i.generators() {
        gens.extend(components(g, e)?);
    }
    Ok(Ideal::new(i.ring(), gens)?.with_budget(i.budget()))
}

/// Inverse of `frob`: requires every exponent divisible by `p^e`.
pub fn root_exact(f: &Polynomial, e: u32) -> Result<Polynomial> {
    let q = f.ring().modulus().power(e)?;
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        if m.exps().iter().any(|k| k.rem_euclid(q) != 0) {
            return Err(Error::NotAPower(f.to_string()));
        }
        let r: Vec<i64> = m.exps().iter().map(|k| k / q).collect();
        terms.push((Monomial::from_exps(&r), *c));
    }
    Polynomial::from_terms(f.ring(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn r3() -> Ring {
        Ring::new(3, &["x", "y"]).unwrap()
    }

    #[test]
    fn absolute_examples() {
        let r = r3();
        let d = decompose(&parse_poly("x^5*y^2", &r).unwrap(), 1, Mode::Absolute).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(
            d.component(&[2, 2]),
            Some(&Component::Absolute(parse_poly("x", &r).unwrap()))
        );
        let d = decompose(&parse_poly("(x+y)^3", &r).unwrap(), 1, Mode::Absolute).unwrap();
        assert_eq!(d.to_string(), "(0,0): x + y\n");
    }

    #[test]
    fn relative_example() {
        let r = Ring::relative(3, &["t"], &["x"]).unwrap();
        let g = parse_poly("t*x^5", &r).unwrap();
        let d = decompose(&g, 1, Mode::Relative).unwrap();
        let base = r.base_ring().unwrap();
        let want = vec![(
            parse_poly("x", &r).unwrap(),
            parse_poly("t", &base).unwrap(),
        )];
        assert_eq!(d.component(&[2]), Some(&Component::Relative(want.clone())));
        assert_eq!(d.recompose().unwrap(), g);
        assert_eq!(relative_trace(&g, 1).unwrap(), want);
        let one = parse_poly("x^2", &r).unwrap();
        assert_eq!(
            relative_trace(&one, 1).unwrap(),
            vec![(Polynomial::one(&r), Polynomial::one(&base))]
        );
    }

    #[test]
    fn trace_normalization() {
        let r = r3();
        assert!(trace(&parse_poly("x^2*y^2", &r).unwrap(), 1)
            .unwrap()
            .is_one());
        assert!(trace(&parse_poly("x", &r).unwrap(), 1).unwrap().is_zero());
        assert!(trace(&parse_poly("x^8*y^8", &r).unwrap(), 2)
            .unwrap()
            .is_one());
    }

    #[test]
    fn laurent_floor_division() {
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let d = decompose(&parse_poly("x^-1", &l).unwrap(), 1, Mode::Absolute).unwrap();
        assert_eq!(
            d.component(&[2]),
            Some(&Component::Absolute(parse_poly("x^-1", &l).unwrap()))
        );
    }

    #[test]
    fn bracket_roots() {
        let r = r3();
        let i = Ideal::from_strs(&r, &["x^5*y^2"]).unwrap();
        assert_eq!(bracket_root(&i, 1).unwrap().basis_string().unwrap(), "(x)");
        let i = Ideal::from_strs(&r, &["(x+y)^3"]).unwrap();
        assert_eq!(
            bracket_root(&i, 1).unwrap().basis_string().unwrap(),
            "(x + y)"
        );
        let i = Ideal::from_strs(&r, &["(x*y)^8"]).unwrap();
        assert_eq!(bracket_root(&i, 2).unwrap().basis_string().unwrap(), "(1)");
    }

    #[test]
    fn exact_roots() {
        let r = r3();
        assert_eq!(
            root_exact(&parse_poly("x^3+y^3", &r).unwrap(), 1)
                .unwrap()
                .to_string(),
            "x + y"
        );
        assert_eq!(
            root_exact(&parse_poly("2*x^9", &r).unwrap(), 2)
                .unwrap()
                .to_string(),
            "2*x"
        );
        assert!(matches!(
            root_exact(&parse_poly("x^2", &r).unwrap(), 1),
            Err(Error::NotAPower(_))
        ));
    }
}
