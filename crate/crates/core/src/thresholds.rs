//! F-pure thresholds and F-jumping numbers by exact p-adic bisection.

use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cartier::{scale_test_ideal, tau_mixed, CartierAlgebraSpec, MixedPair, TauConfig};
use crate::error::{Error, Result};
use crate::ideal::Ideal;

/// Largest integer tried as an upper bracket.
pub const MAX_INTEGER_BRACKET: i64 = 16;

/// One τ evaluation made during a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub t: Rational64,
    pub unit: bool,
    pub hash: u64,
}

#[derive(Clone, Debug)]
pub struct ThresholdResult {
    /// τ = (1) here.
    pub lo: Rational64,
    /// τ ≠ (1) here.
    pub hi: Rational64,
    /// `hi` in lowest terms when it has a p-power denominator and passed
    /// the confirmation probe.
    pub candidate: Option<Rational64>,
    pub transcript: Vec<Evaluation>,
}

impl ThresholdResult {
    pub fn width(&self) -> Rational64 {
        self.hi - self.lo
    }
}

fn pow_rat(p: i64, k: u32) -> Result<Rational64> {
    let d = p.checked_pow(k).ok_or(Error::ExponentOverflow)?;
    Ok(Rational64::new(1, d))
}

fn evaluate(
    pair: &MixedPair,
    free: usize,
    t: Rational64,
    c: &CartierAlgebraSpec,
    cfg: TauConfig,
) -> Result<(Ideal, Evaluation)> {
    let mut exps = pair.exponents.clone();
    exps[free] = t;
    let tau = tau_mixed(&pair.with_exponents(exps)?, c, cfg)?;
    let ev = Evaluation {
        t,
        unit: tau.is_unit()?,
        hash: tau.content_hash()?,
    };
    Ok((tau, ev))
}

/// The p-power exponent of the denominator of `t`, if it is a power of `p`.
pub fn p_adic_order(t: Rational64, p: i64) -> Option<u32> {
    let mut d = *t.denom();
    let mut k = 0;
    while d % p == 0 {
        d /= p;
        k += 1;
    }
    (d == 1).then_some(k)
}

/// Threshold in the exponent slot `free` of `pair`; the other exponents
/// stay fixed. Each bisection step splits the bracket into `p` equal parts.
/// A candidate `m/p^k` is reported only when τ just below it, at
/// `m/p^k − p^{−k−confirm}`, is still the unit ideal.
pub fn fpt_search(
    pair: &MixedPair,
    free: usize,
    c: &CartierAlgebraSpec,
    depth: u32,
    confirm: u32,
    cfg: TauConfig,
) -> Result<ThresholdResult> {
    if free >= pair.ideals.len() {
        return Err(Error::Precondition(format!("no exponent slot {free}")));
    }
    let p = c.ring().p() as i64;
    let mut transcript = Vec::new();
    let (_, at0) = evaluate(pair, free, Rational64::zero(), c, cfg)?;
    let unit0 = at0.unit;
    transcript.push(at0);
    if !unit0 {
        return Err(Error::Precondition(
            "test ideal is not (1) at free exponent 0".into(),
        ));
    }
    let mut lo = Rational64::zero();
    let mut hi = None;
    for n in 1..=MAX_INTEGER_BRACKET {
        let (_, ev) = evaluate(pair, free, Rational64::from_integer(n), c, cfg)?;
        let unit = ev.unit;
        transcript.push(ev);
        if unit {
            lo = Rational64::from_integer(n);
        } else {
            hi = Some(Rational64::from_integer(n));
            break;
        }
    }
    let Some(mut hi) = hi else {
        return Err(Error::Budget(format!(
            "no bracket below {MAX_INTEGER_BRACKET}"
        )));
    };
    for level in 1..=depth {
        let step = pow_rat(p, level)?;
        let points: Vec<Rational64> = (1..p).map(|i| lo + step * i).collect();
        let evs: Vec<Evaluation> = points
            .par_iter()
            .map(|&t| evaluate(pair, free, t, c, cfg).map(|(_, ev)| ev))
            .collect::<Result<_>>()?;
        let first_drop = evs.iter().position(|ev| !ev.unit);
        if let Some(i) = first_drop {
            hi = points[i];
            if i > 0 {
                lo = points[i - 1];
            }
        } else {
            lo = *points.last().unwrap_or(&lo);
        }
        transcript.extend(evs);
    }
    let candidate = match p_adic_order(hi, p) {
        Some(k) if k < depth => {
            let probe = hi - pow_rat(p, k + confirm)?;
            let (_, ev) = evaluate(pair, free, probe, c, cfg)?;
            let ok = ev.unit;
            transcript.push(ev);
            ok.then_some(hi)
        }
        _ => None,
    };
    Ok(ThresholdResult {
        lo,
        hi,
        candidate,
        transcript,
    })
}

/// The windows `(a/q, a/(q−1))`, `q = p^e ≤ p^{max_e}`, that contain `t`.
/// Recorded for inspection only.
pub fn avoidance_windows(t: Rational64, p: i64, max_e: u32) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut q = 1i64;
    for _ in 0..max_e {
        q *= p;
        for a in 1..q {
            let lo = Rational64::new(a, q);
            let hi = Rational64::new(a, q - 1);
            if lo < t && t < hi {
                out.push((a, q));
            }
        }
    }
    out
}

/// A maximal run of grid points sharing one test ideal.
#[derive(Clone, Debug)]
pub struct ConstancyRun {
    pub first: Rational64,
    pub last: Rational64,
    pub hash: u64,
    pub basis: String,
}

/// Exponent vector `t · direction`.
fn along(direction: &[Rational64], t: Rational64) -> Vec<Rational64> {
    direction.iter().map(|d| *d * t).collect()
}

fn tau_along(
    ideals: &[Ideal],
    direction: &[Rational64],
    t: Rational64,
    c: &CartierAlgebraSpec,
    cfg: TauConfig,
) -> Result<Ideal> {
    tau_mixed(
        &MixedPair::new(ideals.to_vec(), along(direction, t))?,
        c,
        cfg,
    )
}

/// Partition of the grid `{m/p^depth} ∩ [0, T]` along `t · direction` into
/// maximal runs of equal τ.
pub fn jumping_numbers(
    ideals: &[Ideal],
    direction: &[Rational64],
    bound: Rational64,
    depth: u32,
    c: &CartierAlgebraSpec,
    cfg: TauConfig,
) -> Result<Vec<ConstancyRun>> {
    if ideals.len() != direction.len() || ideals.is_empty() {
        return Err(Error::Precondition("one direction entry per ideal".into()));
    }
    if bound < Rational64::zero() || direction.iter().any(|d| *d < Rational64::zero()) {
        return Err(Error::Precondition(
            "range and direction must be nonnegative".into(),
        ));
    }
    let p = c.ring().p() as i64;
    let step = pow_rat(p, depth)?;
    let count = (bound / step).floor().to_integer();
    if count > 1_000_000 {
        return Err(Error::Budget(format!("{count} grid points")));
    }
    let points: Vec<Rational64> = (0..=count).map(|m| step * m).collect();
    let taus: Vec<(u64, String)> = points
        .par_iter()
        .map(|&t| {
            let tau = tau_along(ideals, direction, t, c, cfg)?;
            Ok((tau.content_hash()?, tau.basis_string()?))
        })
        .collect::<Result<_>>()?;
    let mut runs: Vec<ConstancyRun> = Vec::new();
    for (t, (hash, basis)) in points.into_iter().zip(taus) {
        match runs.last_mut() {
            Some(run) if run.hash == hash => run.last = t,
            _ => runs.push(ConstancyRun {
                first: t,
                last: t,
                hash,
                basis,
            }),
        }
    }
    Ok(runs)
}

/// Jump points of a partition: the first grid point of every run after the
/// first.
pub fn breakpoints(runs: &[ConstancyRun]) -> Vec<Rational64> {
    runs.iter().skip(1).map(|r| r.first).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Confirmed,
    /// `q·t` lies outside the range.
    Vacuous,
    Refuted,
}

/// If τ jumps at `t` at resolution `eps`, checks that it also jumps at
/// `q·t` (`q = p^{e₀}`) at resolution `q·eps`. The scaling law
/// `τ(𝔞^{s/q}) = C(τ(𝔞^s))` is cross-checked on both sides.
pub fn jump_scaling_probe(
    ideals: &[Ideal],
    direction: &[Rational64],
    t: Rational64,
    eps: Rational64,
    bound: Rational64,
    c: &CartierAlgebraSpec,
    cfg: TauConfig,
) -> Result<ProbeOutcome> {
    if t.is_zero() {
        return Ok(ProbeOutcome::Confirmed);
    }
    if eps <= Rational64::zero() || eps > t {
        return Err(Error::Precondition("resolution must lie in (0, t]".into()));
    }
    let q = Rational64::from_integer(c.ring().modulus().power(c.degree()?)?);
    if q * t > bound {
        return Ok(ProbeOutcome::Vacuous);
    }
    let at = |s: Rational64| tau_along(ideals, direction, s, c, cfg);
    let (below, here) = (at(t - eps)?, at(t)?);
    if below.ideal_eq(&here)? {
        return Err(Error::Precondition(format!(
            "{t} is not a jump at resolution {eps}"
        )));
    }
    let (big_below, big_here) = (at(q * (t - eps))?, at(q * t)?);
    for (small, big) in [(&below, &big_below), (&here, &big_here)] {
        if !scale_test_ideal(big, c)?.ideal_eq(small)? {
            return Err(Error::Verification(
                "scaling law failed during jump probe".into(),
            ));
        }
    }
    Ok(if big_below.ideal_eq(&big_here)? {
        ProbeOutcome::Refuted
    } else {
        ProbeOutcome::Confirmed
    })
}

/// `1 − t/2`, the log-canonical line of the cusp example.
pub fn lct_line(t1: Rational64) -> Rational64 {
    Rational64::one() - t1 / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn perez(t1: Rational64) -> (MixedPair, CartierAlgebraSpec) {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let f1 = parse_poly("x+y", &r).unwrap();
        let f2 = parse_poly("x*y", &r).unwrap();
        (
            MixedPair::principal(&[f1, f2], &[t1, q(0, 1)]).unwrap(),
            CartierAlgebraSpec::full(&r),
        )
    }

    #[test]
    fn perez_threshold_at_one_third() {
        let (pair, c) = perez(q(1, 3));
        let res = fpt_search(&pair, 1, &c, 4, 3, TauConfig::default()).unwrap();
        assert_eq!(res.candidate, Some(q(2, 3)));
        assert!(res.lo < res.hi && res.width() <= q(1, 81));
    }

    #[test]
    fn transcript_is_monotone() {
        let (pair, c) = perez(q(1, 9));
        let res = fpt_search(&pair, 1, &c, 3, 2, TauConfig::default()).unwrap();
        for ev in &res.transcript {
            if ev.t <= res.lo {
                assert!(ev.unit, "{ev:?}");
            }
            if ev.t >= res.hi {
                assert!(!ev.unit, "{ev:?}");
            }
        }
    }

    #[test]
    fn not_regular_at_zero() {
        let (pair, c) = perez(q(1, 1));
        assert!(matches!(
            fpt_search(&pair, 1, &c, 2, 2, TauConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn jumps_of_monomial_and_line() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let c = CartierAlgebraSpec::full(&r);
        for f in ["x*y", "x+y"] {
            let i = Ideal::from_strs(&r, &[f]).unwrap();
            let runs =
                jumping_numbers(&[i], &[q(1, 1)], q(1, 1), 3, &c, TauConfig::default()).unwrap();
            assert_eq!(runs.len(), 2, "{f}");
            assert_eq!(runs[0].basis, "(1)");
            assert_eq!(runs[0].last, q(26, 27));
            assert_eq!(breakpoints(&runs), vec![q(1, 1)]);
        }
        let i = Ideal::from_strs(&r, &["x*y"]).unwrap();
        let runs = jumping_numbers(&[i], &[q(1, 1)], q(0, 1), 3, &c, TauConfig::default()).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].basis, "(1)");
    }

    #[test]
    fn scaling_probe_outcomes() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let c = CartierAlgebraSpec::full(&r);
        let i = [Ideal::from_strs(&r, &["x*y"]).unwrap()];
        let d = [q(1, 1)];
        let cfg = TauConfig::default();
        assert_eq!(
            jump_scaling_probe(&i, &d, q(0, 1), q(1, 9), q(3, 1), &c, cfg).unwrap(),
            ProbeOutcome::Confirmed
        );
        assert_eq!(
            jump_scaling_probe(&i, &d, q(1, 1), q(1, 9), q(3, 1), &c, cfg).unwrap(),
            ProbeOutcome::Confirmed
        );
        assert_eq!(
            jump_scaling_probe(&i, &d, q(1, 1), q(1, 9), q(2, 1), &c, cfg).unwrap(),
            ProbeOutcome::Vacuous
        );
    }

    #[test]
    fn avoidance_is_recorded_only() {
        assert!(avoidance_windows(q(2, 3), 3, 2).is_empty());
        assert!(avoidance_windows(q(5, 8), 3, 1).is_empty());
        assert_eq!(avoidance_windows(q(7, 10), 3, 1), vec![(2, 3)]);
    }
}
