//! Cartier algebras on polynomial charts, stable images and mixed test
//! ideals of the rank-one free module.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frobenius::{bracket_root, embed_base, relative_trace, trace};
use crate::ideal::Ideal;
use crate::poly::{Monomial, Polynomial, Ring};

/// A relative chart `𝔽_p[base] → 𝔽_p[base, fiber]`.
///
/// The relative canonical module is trivialized by `dx_1 ∧ ⋯ ∧ dx_n` over
/// the fiber coordinates; `omega` is that formal generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeChart {
    ring: Ring,
    omega: String,
}

impl RelativeChart {
    pub fn new(p: u64, base: &[&str], fiber: &[&str]) -> Result<RelativeChart> {
        if base.is_empty() || fiber.is_empty() {
            return Err(Error::ChartMismatch(
                "a chart needs base and fiber variables".into(),
            ));
        }
        let ring = Ring::relative(p, base, fiber)?;
        RelativeChart::from_ring(ring)
    }

    /// Wraps a relative ring, checking that its fiber coordinates form a
    /// differential basis and a p-basis.
    pub fn from_ring(ring: Ring) -> Result<RelativeChart> {
        if ring.n_base() == 0 || ring.n_fiber() == 0 {
            return Err(Error::ChartMismatch(
                "a chart needs base and fiber variables".into(),
            ));
        }
        let coords: Vec<Polynomial> = ring
            .fiber_range()
            .map(|i| Polynomial::var(&ring, i))
            .collect();
        let ok = match crate::basis_change::validate_basis(&ring, &coords) {
            Ok(v) => v.is_d_basis && v.is_p_basis,
            // too large for the Frobenius jacobian; the differential test decides
            Err(Error::Budget(_)) => crate::basis_change::jacobian(&ring, &coords)?
                .det()?
                .is_unit(),
            Err(e) => return Err(e),
        };
        if !ok {
            return Err(Error::ChartMismatch(
                "fiber coordinates are not a p-basis".into(),
            ));
        }
        let names: Vec<String> = ring
            .fiber_range()
            .map(|i| format!("d{}", ring.var_names()[i]))
            .collect();
        Ok(RelativeChart {
            omega: names.join("^"),
            ring,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn base_ring(&self) -> Ring {
        self.ring.base_ring().expect("chart has base variables")
    }

    /// The formal generator of the relative canonical module.
    pub fn omega(&self) -> &str {
        &self.omega
    }

    /// Extends an ideal of the base ring to the chart.
    pub fn extend(&self, i: &Ideal) -> Result<Ideal> {
        self.check_base(i.ring())?;
        let gens = i
            .generators()
            .iter()
            .map(|g| embed_base(g, &self.ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.ring, gens)?.with_budget(i.budget()))
    }

    fn check_base(&self, r: &Ring) -> Result<()> {
        let base = self.base_ring();
        if r.var_names() != base.var_names()
            || r.p() != base.p()
            || r.is_laurent() != base.is_laurent()
        {
            return Err(Error::ChartMismatch(format!(
                "{r} is not the base of {}",
                self.ring
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Full,
    Generated(Vec<(u32, Polynomial)>),
    /// Generators `(e, g)` of an algebra on the base ring, acting on the
    /// chart through the relative trace.
    Pullback {
        gens: Vec<(u32, Polynomial)>,
        chart: RelativeChart,
    },
}

/// A Cartier algebra on a polynomial chart, given by generators
/// `κ^{e_i} ∘ g_i`, or the full algebra generated by `κ^1`.
#[derive(Clone, Debug)]
pub struct CartierAlgebraSpec {
    ring: Ring,
    kind: Kind,
}

impl fmt::Display for CartierAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |gens: &[(u32, Polynomial)]| {
            gens.iter()
                .map(|(e, g)| format!("{e}:{g}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.kind {
            Kind::Full => write!(f, "full"),
            Kind::Generated(g) => write!(f, "{}", list(g)),
            Kind::Pullback { gens, chart } => {
                write!(f, "pullback[{}] along {}", list(gens), chart.ring)
            }
        }
    }
}

impl CartierAlgebraSpec {
    pub fn full(ring: &Ring) -> CartierAlgebraSpec {
        CartierAlgebraSpec {
            ring: ring.clone(),
            kind: Kind::Full,
        }
    }

    pub fn generated(ring: &Ring, gens: Vec<(u32, Polynomial)>) -> Result<CartierAlgebraSpec> {
        if gens.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (e, g) in &gens {
            if *e == 0 {
                return Err(Error::Precondition(
                    "generator levels must be at least 1".into(),
                ));
            }
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(CartierAlgebraSpec {
            ring: ring.clone(),
            kind: Kind::Generated(gens),
        })
    }

    /// Parses `full` or a list like `1:x^3,1:y`.
    pub fn parse(text: &str, ring: &Ring) -> Result<CartierAlgebraSpec> {
        let text = text.trim();
        if text == "full" {
            return Ok(CartierAlgebraSpec::full(ring));
        }
        let mut gens = Vec::new();
        for part in crate::poly::split_top_level(text, ',') {
            let (e, g) = part.split_once(':').ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: format!("expected LEVEL:EXPR, got `{part}`"),
            })?;
            let e: u32 = e.trim().parse().map_err(|_| Error::Syntax {
                pos: 0,
                msg: format!("bad level `{e}`"),
            })?;
            gens.push((e, crate::poly::parse_poly(g, ring)?));
        }
        CartierAlgebraSpec::generated(ring, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, Kind::Full)
    }

    fn levels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = match &self.kind {
            Kind::Full => vec![1],
            Kind::Generated(g) | Kind::Pullback { gens: g, .. } => g.iter().map(|x| x.0).collect(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The common degree `e₀` of all generators.
    pub fn degree(&self) -> Result<u32> {
        match self.levels().as_slice() {
            [e] => Ok(*e),
            many => Err(Error::MixedDegrees(many.to_vec())),
        }
    }

    /// One application of the generators: `Σ_i κ^{e_i}(g_i · I)`.
    pub fn cplus(&self, i: &Ideal) -> Result<Ideal> {
        if i.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        match &self.kind {
            Kind::Full => bracket_root(i, 1),
            Kind::Generated(gens) => {
                let mut parts = Vec::with_capacity(gens.len());
                for (e, g) in gens {
                    parts.push(bracket_root(&i.scale(g)?, *e)?);
                }
                Ok(Ideal::sum_all(&self.ring, &parts)?.with_budget(i.budget()))
            }
            Kind::Pullback { gens, chart } => {
                let mut parts = Vec::with_capacity(gens.len());
                for (e, g) in gens {
                    parts.push(pullback_image(i, *e, g, chart)?);
                }
                Ok(Ideal::sum_all(&self.ring, &parts)?.with_budget(i.budget()))
            }
        }
    }
}

/// The pulled-back operator on a single element:
/// `s ↦ Σ_j s_j · κ_R^e(g · r_j)` where `Σ_j (s_j, r_j)` is the relative trace.
pub fn pullback_apply(
    s: &Polynomial,
    e: u32,
    g: &Polynomial,
    chart: &RelativeChart,
) -> Result<Polynomial> {
    let ring = chart.ring();
    let mut acc = Polynomial::zero(ring);
    for (sj, rj) in relative_trace(s, e)? {
        let phi = trace(&g.checked_mul(&rj)?, e)?;
        acc = &acc + &sj.checked_mul(&embed_base(&phi, ring)?)?;
    }
    Ok(acc)
}

/// Image of an ideal under the pulled-back operator. The operator is
/// linear over `p^e`-th powers, so monomial multiples with exponents below
/// `p^e` suffice.
fn pullback_image(i: &Ideal, e: u32, g: &Polynomial, chart: &RelativeChart) -> Result<Ideal> {
    let ring = chart.ring();
    let q = ring.modulus().power(e)?;
    let n = ring.arity();
    let mut gens = Vec::new();
    let mut exps = vec![0i64; n];
    for h in i.generators() {
        loop {
            let shifted = h.mul_term(&Monomial::from_exps(&exps), crate::field::Scalar::ONE)?;
            let v = pullback_apply(&shifted, e, g, chart)?;
            if !v.is_zero() {
                gens.push(v);
            }
            // odometer over [0, q)^n
            let mut k = 0;
            while k < n {
                exps[k] += 1;
                if exps[k] < q {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(Ideal::new(ring, gens)?.with_budget(i.budget()))
}

/// The pulled-back algebra on the chart.
pub fn pullback_cartier(
    c: &CartierAlgebraSpec,
    chart: &RelativeChart,
) -> Result<CartierAlgebraSpec> {
    chart.check_base(c.ring())?;
    let base = c.ring();
    let gens = match &c.kind {
        Kind::Full => vec![(1, Polynomial::one(base))],
        Kind::Generated(g) => g.clone(),
        Kind::Pullback { .. } => {
            return Err(Error::ChartMismatch(
                "iterated pullbacks are not supported".into(),
            ))
        }
    };
    Ok(CartierAlgebraSpec {
        ring: chart.ring().clone(),
        kind: Kind::Pullback {
            gens,
            chart: chart.clone(),
        },
    })
}

/// Iterates `I ← C₊ I` until two consecutive members agree.
pub fn sigma(c: &CartierAlgebraSpec, start: &Ideal, budget: usize) -> Result<Ideal> {
    let mut cur = start.minimized()?;
    for _ in 0..budget {
        let next = c.cplus(&cur)?.minimized()?;
        if next.ideal_eq(&cur)? {
            return Ok(next);
        }
        cur = next;
    }
    Err(Error::IterationBudget(budget))
}

/// Ideals `𝔞_i` with exponents `t_i ≥ 0`.
#[derive(Clone, Debug)]
pub struct MixedPair {
    pub ideals: Vec<Ideal>,
    pub exponents: Vec<Rational64>,
}

impl MixedPair {
    pub fn new(ideals: Vec<Ideal>, exponents: Vec<Rational64>) -> Result<MixedPair> {
        if ideals.len() != exponents.len() {
            return Err(Error::Precondition("one exponent per ideal".into()));
        }
        if exponents.iter().any(|t| *t < Rational64::zero()) {
            return Err(Error::Precondition("exponents must be nonnegative".into()));
        }
        if let Some(first) = ideals.first() {
            if ideals.iter().any(|i| i.ring() != first.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(MixedPair { ideals, exponents })
    }

    /// Principal pair from polynomials.
    pub fn principal(polys: &[Polynomial], exponents: &[Rational64]) -> Result<MixedPair> {
        MixedPair::new(
            polys.iter().map(Ideal::principal).collect(),
            exponents.to_vec(),
        )
    }

    pub fn with_exponents(&self, exponents: Vec<Rational64>) -> Result<MixedPair> {
        MixedPair::new(self.ideals.clone(), exponents)
    }

    pub fn ring(&self) -> Option<&Ring> {
        self.ideals.first().map(|i| i.ring())
    }
}

/// `⌈t·q⌉` for `t ≥ 0`, exactly.
pub fn ceil_times(t: Rational64, q: i64) -> Result<u64> {
    let num = *t.numer() as i128 * q as i128;
    let den = *t.denom() as i128;
    let v = Integer::div_ceil(&num, &den);
    u64::try_from(v).map_err(|_| Error::ExponentOverflow)
}

/// Writes `t = u / (p^k · w)` with `p ∤ w` and returns `(k, ord_w(p))`,
/// the length of the pre-period and the period of the base-p digits.
pub fn digit_periods(t: Rational64, p: u32) -> (u32, u32) {
    let mut w = *t.denom();
    let p = p as i64;
    let mut k = 0;
    while w % p == 0 {
        w /= p;
        k += 1;
    }
    if w == 1 {
        return (k, 0);
    }
    let mut r = p % w;
    let mut period = 1;
    while r != 1 {
        r = (r * p) % w;
        period += 1;
    }
    (k, period)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauConfig {
    /// Number of consecutive unchanged steps that declare stability.
    pub conf: u32,
    /// First level of the accumulated sum.
    pub start: u32,
    /// Last level tried before reporting a budget error.
    pub max_level: u32,
}

impl Default for TauConfig {
    fn default() -> Self {
        TauConfig {
            conf: 2,
            start: 1,
            max_level: 36,
        }
    }
}

/// `C_{e·e₀}(Π 𝔞_i^{⌈t_i p^{e e₀}⌉})`, the `e`-th member of the chain.
///
/// Principal ideals are handled digit by digit, which never forms the
/// large power: `C₊(u^{q₀} J) = u · C₊(J)`.
pub fn tau_level(pair: &MixedPair, c: &CartierAlgebraSpec, e: u32) -> Result<Ideal> {
    let ring = c.ring();
    let e0 = c.degree()?;
    let q0 = ring.modulus().power(e0)?;
    let qe = ring
        .modulus()
        .power(e0.checked_mul(e).ok_or(Error::ExponentOverflow)?)?;
    let mut polys = Vec::new();
    let mut counts = Vec::new();
    let mut principal = true;
    for (a, t) in pair.ideals.iter().zip(&pair.exponents) {
        if t.is_zero() {
            continue;
        }
        if a.is_zero() {
            return Ok(Ideal::zero(ring));
        }
        match a.principal_generator() {
            Some(f) => polys.push(f.clone()),
            None => principal = false,
        }
        counts.push(ceil_times(*t, qe)?);
    }
    if !principal {
        return tau_level_direct(pair, c, e);
    }
    let mut j = Ideal::unit(ring);
    let q0u = q0 as u64;
    let mut rest = counts.clone();
    for _ in 0..e {
        let mut m = Polynomial::one(ring);
        for (f, n) in polys.iter().zip(rest.iter_mut()) {
            let d = *n % q0u;
            *n /= q0u;
            if d > 0 {
                m = m.checked_mul(&f.pow(d)?)?;
            }
        }
        j = c.cplus(&j.scale(&m)?)?.minimized()?;
        if j.is_zero() {
            return Ok(j);
        }
    }
    let mut top = Polynomial::one(ring);
    for (f, n) in polys.iter().zip(&rest) {
        if *n > 0 {
            top = top.checked_mul(&f.pow(*n)?)?;
        }
    }
    j.scale(&top)?.minimized()
}

/// Same chain member, computed by forming the product of powers and
/// applying `C₊` `e` times.
pub fn tau_level_direct(pair: &MixedPair, c: &CartierAlgebraSpec, e: u32) -> Result<Ideal> {
    let ring = c.ring();
    let e0 = c.degree()?;
    let qe = ring
        .modulus()
        .power(e0.checked_mul(e).ok_or(Error::ExponentOverflow)?)?;
    let mut prod = Ideal::unit(ring);
    for (a, t) in pair.ideals.iter().zip(&pair.exponents) {
        if t.is_zero() {
            continue;
        }
        prod = prod.product(&a.power(ceil_times(*t, qe)?)?)?;
    }
    let mut j = prod;
    for _ in 0..e {
        j = c.cplus(&j)?.minimized()?;
    }
    Ok(j)
}

/// Level from which repeated values of the accumulated ideal count as
/// confirmations: one full digit period past the p-power part of every
/// exponent.
fn confirmation_start(pair: &MixedPair, p: u32, e0: u32, start: u32) -> u32 {
    let need = pair
        .exponents
        .iter()
        .map(|t| {
            let (k, per) = digit_periods(*t, p);
            k + per
        })
        .max()
        .unwrap_or(0);
    need.div_ceil(e0).max(start)
}

/// Mixed test ideal `τ(𝔞₁^{t₁} ⋯ 𝔞ₙ^{tₙ})` of the chart, as the stable value
/// of the accumulated chain `Σ_{e' ≤ e} C_{e'e₀}(𝔞^{⌈t p^{e'e₀}⌉})`.
pub fn tau_mixed(pair: &MixedPair, c: &CartierAlgebraSpec, cfg: TauConfig) -> Result<Ideal> {
    if cfg.conf == 0 || cfg.start == 0 {
        return Err(Error::Precondition(
            "conf and start must be at least 1".into(),
        ));
    }
    if let Some(r) = pair.ring() {
        if r != c.ring() {
            return Err(Error::RingMismatch);
        }
    }
    let ring = c.ring();
    let e0 = c.degree()?;
    let confirm_from = confirmation_start(pair, ring.p(), e0, cfg.start);
    let mut acc = Ideal::zero(ring);
    let mut unchanged = 0;
    for e in cfg.start..=cfg.max_level {
        let level = tau_level(pair, c, e)?;
        let next = acc.sum(&level)?.minimized()?;
        if next.is_unit()? {
            return Ok(next);
        }
        if e > cfg.start && next.ideal_eq(&acc)? {
            if e >= confirm_from {
                unchanged += 1;
            }
        } else {
            unchanged = 0;
        }
        acc = next;
        if unchanged >= cfg.conf {
            return Ok(acc);
        }
    }
    Err(Error::IterationBudget(cfg.max_level as usize))
}

/// Skoda: `τ(𝔞^t) = 𝔞 · τ(𝔞^{t-1})` once `t_i` reaches the number of
/// generators of `𝔞_i`. Returns the reduced pair and the multiplier.
pub fn skoda_reduce(pair: &MixedPair, i: usize) -> Result<(MixedPair, Ideal)> {
    let a = pair
        .ideals
        .get(i)
        .ok_or_else(|| Error::Precondition(format!("no ideal {i}")))?;
    let ngens = a.generators().len() as i64;
    let t = pair.exponents[i];
    if ngens == 0 || t < Rational64::from_integer(ngens) {
        return Err(Error::Precondition(format!(
            "exponent {t} is below the generator count {ngens}"
        )));
    }
    let mut exps = pair.exponents.clone();
    exps[i] = t - Rational64::one();
    Ok((pair.with_exponents(exps)?, a.clone()))
}

/// Applies the degree-`e₀` part of the algebra: `τ(𝔞^{t/p^{e₀}}) = C_{e₀} τ(𝔞^t)`.
pub fn scale_test_ideal(tau: &Ideal, c: &CartierAlgebraSpec) -> Result<Ideal> {
    c.degree()?;
    c.cplus(tau)?.minimized()
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub base_tau: Ideal,
    pub extended: Ideal,
    pub chart_tau: Ideal,
    pub holds: bool,
}

/// Computes `τ` on the base and extends it, computes `τ` of the pulled-back
/// data on the chart, and compares the two.
pub fn pullback_check(
    c: &CartierAlgebraSpec,
    pair: &MixedPair,
    chart: &RelativeChart,
    cfg: TauConfig,
) -> Result<PullbackReport> {
    let base_tau = tau_mixed(pair, c, cfg)?;
    let extended = chart.extend(&base_tau)?;
    let ideals = pair
        .ideals
        .iter()
        .map(|a| chart.extend(a))
        .collect::<Result<Vec<_>>>()?;
    let lifted = MixedPair::new(ideals, pair.exponents.clone())?;
    let pulled = pullback_cartier(c, chart)?;
    let chart_tau = tau_mixed(&lifted, &pulled, cfg)?;
    let holds = extended.ideal_eq(&chart_tau)?;
    Ok(PullbackReport {
        base_tau,
        extended,
        chart_tau,
        holds,
    })
}

/// Stable images on both sides of a chart: `(extension of σ_R, σ_S of the
/// pulled-back algebra)`.
pub fn sigma_pullback_pair(
    c: &CartierAlgebraSpec,
    chart: &RelativeChart,
    budget: usize,
) -> Result<(Ideal, Ideal)> {
    let base = sigma(c, &Ideal::unit(c.ring()), budget)?;
    let pulled = pullback_cartier(c, chart)?;
    let up = sigma(&pulled, &Ideal::unit(chart.ring()), budget)?;
    Ok((chart.extend(&base)?, up))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn r3() -> Ring {
        Ring::new(3, &["x", "y"]).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn cplus_examples() {
        let r = r3();
        let c = CartierAlgebraSpec::parse("1:x^3", &r).unwrap();
        assert_eq!(
            c.cplus(&Ideal::unit(&r)).unwrap().basis_string().unwrap(),
            "(x)"
        );
        let full = CartierAlgebraSpec::full(&r);
        assert!(full.cplus(&Ideal::unit(&r)).unwrap().is_unit().unwrap());
        assert!(c.cplus(&Ideal::zero(&r)).unwrap().is_zero());
    }

    #[test]
    fn sigma_examples() {
        let r = r3();
        let c = CartierAlgebraSpec::parse("1:x^3", &r).unwrap();
        assert_eq!(
            sigma(&c, &Ideal::unit(&r), 10)
                .unwrap()
                .basis_string()
                .unwrap(),
            "(x)"
        );
        let c = CartierAlgebraSpec::parse("1:x^2", &r).unwrap();
        assert!(sigma(&c, &Ideal::unit(&r), 10).unwrap().is_unit().unwrap());
        let full = CartierAlgebraSpec::full(&r);
        assert!(sigma(&full, &Ideal::unit(&r), 10)
            .unwrap()
            .is_unit()
            .unwrap());
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let r = r3();
        let c = CartierAlgebraSpec::parse("1:x,2:y", &r).unwrap();
        assert_eq!(c.degree(), Err(Error::MixedDegrees(vec![1, 2])));
        let pair = MixedPair::principal(&[parse_poly("x", &r).unwrap()], &[q(1, 2)]).unwrap();
        assert!(matches!(
            tau_mixed(&pair, &c, TauConfig::default()),
            Err(Error::MixedDegrees(_))
        ));
    }

    #[test]
    fn digit_trick_matches_direct_route() {
        let r = r3();
        let f = parse_poly("x+y", &r).unwrap();
        let g = parse_poly("x*y", &r).unwrap();
        let full = CartierAlgebraSpec::full(&r);
        let twisted = CartierAlgebraSpec::parse("1:x^2*y+y^4", &r).unwrap();
        for (a, b) in [(q(1, 3), q(2, 3)), (q(1, 2), q(5, 9)), (q(4, 3), q(1, 1))] {
            let pair = MixedPair::principal(&[f.clone(), g.clone()], &[a, b]).unwrap();
            for c in [&full, &twisted] {
                for e in 1..=3 {
                    let fast = tau_level(&pair, c, e).unwrap();
                    let slow = tau_level_direct(&pair, c, e).unwrap();
                    assert!(fast.ideal_eq(&slow).unwrap(), "t=({a},{b}) e={e} alg={c}");
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let r = r3();
        let f = parse_poly("x+y", &r).unwrap();
        let g = parse_poly("x*y", &r).unwrap();
        let full = CartierAlgebraSpec::full(&r);
        let cfg = TauConfig::default();
        let pair = MixedPair::principal(&[f.clone(), g.clone()], &[q(1, 3), q(2, 3)]).unwrap();
        let t = tau_mixed(&pair, &full, cfg).unwrap();
        assert!(!t.is_unit().unwrap());
        assert!(Ideal::from_strs(&r, &["x", "y"])
            .unwrap()
            .contains_ideal(&t)
            .unwrap());
        let zero = MixedPair::principal(&[f, g.clone()], &[q(0, 1), q(0, 1)]).unwrap();
        assert!(tau_mixed(&zero, &full, cfg).unwrap().is_unit().unwrap());
        let mono = MixedPair::principal(&[g], &[q(5, 9)]).unwrap();
        assert!(tau_mixed(&mono, &full, cfg).unwrap().is_unit().unwrap());
    }

    #[test]
    fn skoda_precondition() {
        let r = r3();
        let f = parse_poly("x+y", &r).unwrap();
        let pair = MixedPair::principal(&[f], &[q(1, 2)]).unwrap();
        assert!(matches!(
            skoda_reduce(&pair, 0),
            Err(Error::Precondition(_))
        ));
        let pair = pair.with_exponents(vec![q(3, 2)]).unwrap();
        let (red, mult) = skoda_reduce(&pair, 0).unwrap();
        assert_eq!(red.exponents[0], q(1, 2));
        assert_eq!(mult.basis_string().unwrap(), "(x + y)");
    }

    #[test]
    fn digit_periods_and_ceilings() {
        assert_eq!(digit_periods(q(2, 3), 3), (1, 0));
        assert_eq!(digit_periods(q(1, 2), 3), (0, 1));
        assert_eq!(digit_periods(q(1, 8), 3), (0, 2));
        assert_eq!(digit_periods(q(5, 36), 3), (2, 2));
        assert_eq!(ceil_times(q(2, 3), 9).unwrap(), 6);
        assert_eq!(ceil_times(q(1, 2), 9).unwrap(), 5);
    }

    #[test]
    fn pulled_back_action() {
        let chart = RelativeChart::new(3, &["t"], &["x"]).unwrap();
        let s = chart.ring().clone();
        let one = Polynomial::one(&chart.base_ring());
        let v = pullback_apply(&parse_poly("x^2*t^2", &s).unwrap(), 1, &one, &chart).unwrap();
        assert!(v.is_one());
        let v = pullback_apply(&parse_poly("x^2", &s).unwrap(), 1, &one, &chart).unwrap();
        assert!(v.is_zero());
    }
}
