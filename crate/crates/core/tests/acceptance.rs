//! Acceptance criteria 1 to 12. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use cartier_core::basis_change::{
    admissible_matrices, binomial_claim_holds, combinatorial_identity_check, dual_generator_ratio,
    jacobian, verify_det_identity, SweepMode,
};
use cartier_core::cartier::{
    pullback_check, scale_test_ideal, sigma_pullback_pair, tau_mixed, CartierAlgebraSpec,
    MixedPair, RelativeChart, TauConfig,
};
use cartier_core::fractal::{
    apply_t, big_to_f64, constancy_raster, hausdorff_distance, perez_staircase,
    staircase_partial_sum, transform_chi_symbolic, GridSpec, RegionFunction, TOperator,
};
use cartier_core::frobenius::{bracket_root, decompose, Mode};
use cartier_core::thresholds::fpt_search;
use cartier_core::{parse_poly, Ideal, Monomial, Polynomial, PrimeModulus, Ring, Scalar};
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn q(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn report(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = f();
    let took = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {took:.2?}, limit {limit:?}")),
        Err(d) => (false, d),
    };
    let line = format!(
        "{} criterion {n:>2} {name}: {detail} [{took:.2?}]\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    ok
}

fn m(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

fn perez(p: u64) -> (Ring, Vec<Ideal>, CartierAlgebraSpec) {
    let r = Ring::new(p, &["x", "y"]).unwrap();
    let ideals = vec![
        Ideal::from_strs(&r, &["x+y"]).unwrap(),
        Ideal::from_strs(&r, &["x*y"]).unwrap(),
    ];
    let c = CartierAlgebraSpec::full(&r);
    (r, ideals, c)
}

fn c1() -> Outcome {
    let rep = verify_det_identity(m(3), 2, SweepMode::Exhaustive).map_err(|e| e.to_string())?;
    let d = format!(
        "{}/{} pass, {}/{} pairs",
        rep.passed, rep.checked, rep.pairs_passed, rep.pairs_checked
    );
    if rep.checked == 48 && rep.pairs_checked == 48 * 48 && rep.all_pass() {
        Ok(d)
    } else {
        Err(d)
    }
}

fn c2() -> Outcome {
    let a = verify_det_identity(
        m(5),
        2,
        SweepMode::Random {
            count: 10_000,
            seed: 0,
        },
    )
    .map_err(|e| e.to_string())?;
    let b = verify_det_identity(
        m(3),
        3,
        SweepMode::Random {
            count: 1_000,
            seed: 0,
        },
    )
    .map_err(|e| e.to_string())?;
    let d = format!(
        "GL2(F5) {}/{}, GL3(F3) {}/{}",
        a.passed, a.checked, b.passed, b.checked
    );
    if a.checked == 10_000 && b.checked == 1_000 && a.all_pass() && b.all_pass() {
        Ok(d)
    } else {
        Err(d)
    }
}

fn c3() -> Outcome {
    let mut total = 0;
    for (n, p) in [(2usize, 3u64), (2, 5), (3, 3)] {
        for a in admissible_matrices(p as u32, n) {
            let c = combinatorial_identity_check(m(p), n, &a).map_err(|e| e.to_string())?;
            if !c.equal {
                return Err(format!("n={n} p={p} a={a:?}: {:?} vs {:?}", c.lhs, c.rhs));
            }
            total += 1;
        }
    }
    Ok(format!("{total} admissible matrices"))
}

fn c4() -> Outcome {
    let run = || -> cartier_core::Result<(String, String, bool)> {
        let l = Ring::new(3, &["x"])?.with_laurent(true);
        let new = vec![parse_poly("x^-1", &l)?];
        let xi = dual_generator_ratio(&l, &new, 1)?;
        let det = jacobian(&l, &new)?.det()?;
        let r = Ring::new(3, &["x", "y"])?;
        let new2 = vec![parse_poly("x+y^2", &r)?, parse_poly("y", &r)?];
        let xi2 = dual_generator_ratio(&r, &new2, 1)?;
        let ok = xi == parse_poly("x^-4", &l)? && xi == det.pow(2)? && xi2.is_one();
        Ok((xi.to_string(), xi2.to_string(), ok))
    };
    let (a, b, ok) = run().map_err(|e| e.to_string())?;
    let d = format!("xi(x^-1) = {a}, xi(x+y^2, y) = {b}");
    if ok {
        Ok(d)
    } else {
        Err(d)
    }
}

fn c5() -> Outcome {
    let (r, ideals, c) = perez(3);
    let _ = r;
    let mut parts = Vec::new();
    for (t1, want) in [
        (q(1, 3), q(2, 3)),
        (q(2, 3), q(2, 3)),
        (q(1, 9), q(8, 9)),
        (q(7, 9), q(5, 9)),
    ] {
        let pair = MixedPair::new(ideals.clone(), vec![t1, q(0, 1)]).map_err(|e| e.to_string())?;
        let res =
            fpt_search(&pair, 1, &c, 6, 6, TauConfig::default()).map_err(|e| e.to_string())?;
        parts.push(format!(
            "t1={t1}: {:?}",
            res.candidate.map(|x| x.to_string())
        ));
        if res.candidate != Some(want) {
            return Err(format!(
                "t1={t1}: expected {want}, got {:?} in [{}, {}]",
                res.candidate, res.lo, res.hi
            ));
        }
    }
    Ok(parts.join(", "))
}

fn c6() -> Outcome {
    let (_, ideals, c) = perez(3);
    let cfg = TauConfig::default();
    let g4 = GridSpec::new(3, 2, q(1, 1), 4).map_err(|e| e.to_string())?;
    let g3 = GridSpec::new(3, 2, q(1, 1), 3).map_err(|e| e.to_string())?;
    let r4 = constancy_raster(&ideals, &c, g4, cfg).map_err(|e| e.to_string())?;
    let r3 = constancy_raster(&ideals, &c, g3, cfg).map_err(|e| e.to_string())?;
    let stairs = perez_staircase(3, 3).map_err(|e| e.to_string())?;
    let bad: Vec<_> = stairs
        .iter()
        .filter(|(a, b)| !r4.separates(&[*a, *b]))
        .collect();
    let shared = r4.restrict(3).map_err(|e| e.to_string())?;
    let d = format!(
        "{} vertices, {} not separating; classes k=4: {}, k=3: {}, k=4 on k=3 points: {}",
        stairs.len(),
        bad.len(),
        r4.class_count(),
        r3.class_count(),
        shared.class_count()
    );
    if bad.is_empty() && shared.class_count() == r3.class_count() && shared.classes == r3.classes {
        Ok(d)
    } else {
        Err(format!("{d}; first bad {:?}", bad.first()))
    }
}

fn c7() -> Outcome {
    let mut checked = 0;
    for p in [3u64, 5, 7] {
        let (r, ideals, _) = perez(p);
        let mm = Ideal::from_strs(&r, &["x", "y"]).unwrap();
        for l in 0..=(p - 1) / 2 {
            let b = [2 * l, p - l - 1];
            let n2 = transform_chi_symbolic(&mm, &b, &ideals).map_err(|e| e.to_string())?;
            if !n2.ideal_eq(&mm).map_err(|e| e.to_string())? {
                return Err(format!("p={p} l={l}: got {n2}"));
            }
            checked += 1;
        }
    }
    let (r, ideals, c) = perez(3);
    let mm = Ideal::from_strs(&r, &["x", "y"]).unwrap();
    let g = GridSpec::new(3, 2, q(1, 1), 3).map_err(|e| e.to_string())?;
    let raster =
        constancy_raster(&ideals, &c, g, TauConfig::default()).map_err(|e| e.to_string())?;
    let chi = raster.chi(&mm).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for l in 0..=1u64 {
        let b = [2 * l, 3 - l - 1];
        let op = TOperator::new(3, 1, b.iter().map(|&x| x as i64).collect())
            .map_err(|e| e.to_string())?;
        let moved = apply_t(&chi, &op).map_err(|e| e.to_string())?;
        let n2 = transform_chi_symbolic(&mm, &b, &ideals).map_err(|e| e.to_string())?;
        let direct = raster
            .chi(&n2)
            .and_then(|f| f.restrict(2))
            .map_err(|e| e.to_string())?;
        if moved.values != direct.values {
            return Err(format!("raster mismatch for l={l}"));
        }
        cells += moved.values.len();
    }
    Ok(format!(
        "{checked} symbolic cases, {cells} raster cells agree"
    ))
}

fn c8() -> Outcome {
    let r = Ring::new(3, &["x", "y"]).unwrap();
    let f = parse_poly("x^2+y^3", &r).unwrap();
    let c = CartierAlgebraSpec::full(&r);
    let cfg = TauConfig::default();
    let grid = [
        q(1, 2),
        q(2, 3),
        q(5, 6),
        q(1, 1),
        q(7, 6),
        q(4, 3),
        q(3, 2),
        q(5, 3),
        q(2, 1),
        q(5, 2),
    ];
    let tau = |t: Rational64| tau_mixed(&MixedPair::principal(std::slice::from_ref(&f), &[t])?, &c, cfg);
    let run = || -> cartier_core::Result<(usize, usize)> {
        let mut scaled = 0;
        let mut skoda = 0;
        for &t in &grid {
            let lhs = tau(t / 3)?;
            let rhs = scale_test_ideal(&tau(t)?, &c)?;
            if !lhs.ideal_eq(&rhs)? {
                return Err(cartier_core::Error::Verification(format!(
                    "scaling fails at t = {t}"
                )));
            }
            scaled += 1;
            if t >= q(1, 1) {
                let lhs = tau(t)?;
                let rhs = tau(t - 1)?.scale(&f)?;
                if !lhs.ideal_eq(&rhs)? {
                    return Err(cartier_core::Error::Verification(format!(
                        "Skoda fails at t = {t}"
                    )));
                }
                skoda += 1;
            }
        }
        Ok((scaled, skoda))
    };
    let (a, b) = run().map_err(|e| e.to_string())?;
    Ok(format!("scaling {a}/10, Skoda {b}/{b} for f = x^2+y^3"))
}

fn c9() -> Outcome {
    let run = || -> cartier_core::Result<String> {
        let base = Ring::new(3, &["t"])?;
        let c = CartierAlgebraSpec::full(&base);
        let t = parse_poly("t", &base)?;
        let tt = parse_poly("t*(t+1)", &base)?;
        let pairs = [
            MixedPair::principal(std::slice::from_ref(&t), &[q(1, 2)])?,
            MixedPair::principal(std::slice::from_ref(&tt), &[q(2, 3)])?,
            MixedPair::principal(&[t, tt], &[q(1, 2), q(2, 3)])?,
        ];
        let mut n = 0;
        for fiber in [&["x"][..], &["x", "y"][..]] {
            let chart = RelativeChart::new(3, &["t"], fiber)?;
            for pair in &pairs {
                let rep = pullback_check(&c, pair, &chart, TauConfig::default())?;
                if !rep.holds {
                    return Err(cartier_core::Error::Verification(format!(
                        "fiber {fiber:?}: {} vs {}",
                        rep.extended, rep.chart_tau
                    )));
                }
                n += 1;
            }
            let alg = CartierAlgebraSpec::parse("1:t^4", &base)?;
            let (down, up) = sigma_pullback_pair(&alg, &chart, 64)?;
            if !down.ideal_eq(&up)? {
                return Err(cartier_core::Error::Verification(format!(
                    "sigma: {down} vs {up}"
                )));
            }
            n += 1;
        }
        Ok(format!("{n} checks hold"))
    };
    run().map_err(|e| e.to_string())
}

fn c10() -> Outcome {
    let (_, ideals, c) = perez(3);
    let g = GridSpec::new(3, 2, q(1, 1), 5).map_err(|e| e.to_string())?;
    let raster = constancy_raster(&ideals, &c, g.clone(), TauConfig::default())
        .map_err(|e| e.to_string())?;
    let ap = raster.unit_region();
    let lct = RegionFunction::from_predicate(g, |t| t[0] + t[1] * 2 < q(2, 1)).support();
    let d = hausdorff_distance(&ap, &lct).map_err(|e| e.to_string())?;
    let tol = q(2, 243);
    let detail = format!(
        "d_H = {d} (~{:.5}), target 1/3 +- 2/243",
        *d.numer() as f64 / *d.denom() as f64
    );
    if d >= q(1, 3) - tol && d <= q(1, 3) + tol {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c11() -> Outcome {
    let s = staircase_partial_sum(3, 12).map_err(|e| e.to_string())?;
    let v = big_to_f64(&s);
    let detail = format!(
        "partial sum = {v:.6}, |diff| = {:.6}, tolerance 1e-3",
        (v - 1.5).abs()
    );
    if (v - 1.5).abs() <= 1e-3 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_poly(r: &Ring, rng: &mut ChaCha8Rng, terms: usize, deg: i64) -> Polynomial {
    let p = r.p();
    let mut acc = Polynomial::zero(r);
    for _ in 0..terms {
        let exps: Vec<i64> = (0..r.arity()).map(|_| rng.gen_range(0..=deg)).collect();
        let t = Polynomial::term(r, Monomial::from_exps(&exps), Scalar(rng.gen_range(1..p)));
        acc = &acc + &t;
    }
    acc
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let run = |rng: &mut ChaCha8Rng| -> cartier_core::Result<String> {
        let mut counts = [0usize; 5];
        for p in [2u64, 3, 5] {
            let r = Ring::new(p, &["x", "y"])?;
            for _ in 0..40 {
                let g = random_poly(&r, rng, 5, 12);
                for e in 1..=2 {
                    if decompose(&g, e, Mode::Absolute)?.recompose()? != g {
                        return Err(cartier_core::Error::Verification(format!("round trip {g}")));
                    }
                }
                counts[0] += 1;
            }
            for _ in 0..15 {
                let i = Ideal::new(
                    &r,
                    vec![random_poly(&r, rng, 3, 6), random_poly(&r, rng, 3, 6)],
                )?;
                let j = Ideal::new(&r, vec![random_poly(&r, rng, 2, 3)])?;
                let root = bracket_root(&i, 1)?;
                if !root.frob_power(1)?.contains_ideal(&i)? {
                    return Err(cartier_core::Error::Verification(
                        "I not in root^[p]".into(),
                    ));
                }
                let lhs = j.contains_ideal(&root)?;
                let rhs = j.frob_power(1)?.contains_ideal(&i)?;
                if lhs != rhs {
                    return Err(cartier_core::Error::Verification(
                        "Galois connection".into(),
                    ));
                }
                counts[1] += 1;
                let gens = i.generators().to_vec();
                let mixed: Vec<Polynomial> =
                    vec![&gens[0] + &gens[1], gens[1].clone(), &gens[0] * &gens[1]];
                let i2 = Ideal::new(&r, mixed)?;
                if i.basis_string()? != i2.basis_string()? {
                    return Err(cartier_core::Error::Verification(
                        "Groebner canonicality".into(),
                    ));
                }
                counts[2] += 1;
            }
        }
        let r = Ring::new(3, &["x", "y"])?;
        let c = CartierAlgebraSpec::full(&r);
        for f in ["x^2+y^3", "x*y*(x+y)", "x^3+y^4+x*y"] {
            let f = parse_poly(f, &r)?;
            let mut prev: Option<Ideal> = None;
            for k in 0..=12 {
                let tau = tau_mixed(
                    &MixedPair::principal(std::slice::from_ref(&f), &[q(k, 6)])?,
                    &c,
                    TauConfig::default(),
                )?;
                if let Some(pv) = &prev {
                    if !pv.contains_ideal(&tau)? {
                        return Err(cartier_core::Error::Verification(format!(
                            "tau not monotone for {f}"
                        )));
                    }
                }
                prev = Some(tau);
                counts[3] += 1;
            }
        }
        for p in (3..=101u64).filter(|&n| (2..n).all(|d| n % d != 0)) {
            if !binomial_claim_holds(m(p)) {
                return Err(cartier_core::Error::Verification(format!(
                    "binomial claim at p = {p}"
                )));
            }
            counts[4] += 1;
        }
        Ok(format!(
            "round trips {}, Galois {}, Groebner {}, monotone steps {}, primes {}",
            counts[0], counts[1], counts[2], counts[3], counts[4]
        ))
    };
    run(&mut rng).map_err(|e| e.to_string())
}

#[test]
fn acceptance() {
    let s = Duration::from_secs(1);
    let results = [
        report(1, "xi identity, exhaustive GL2(F3)", s, c1),
        report(2, "xi identity, sampled", s * 10, c2),
        report(3, "combinatorial identity", s * 30, c3),
        report(4, "dual-generator ratio", s, c4),
        report(5, "cusp thresholds", s * 120, c5),
        report(6, "staircase consistency", s * 1800, c6),
        report(7, "T-operator invariance", s * 60, c7),
        report(8, "scaling and Skoda", s * 120, c8),
        report(9, "pullback of test ideals", s * 60, c9),
        report(10, "Hausdorff distance", s * 600, c10),
        report(11, "series check", s, c11),
        report(12, "property suites", s * 120, c12),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
