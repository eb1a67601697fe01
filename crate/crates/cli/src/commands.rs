use std::fmt::Write as _;
use std::path::PathBuf;

use cartier_core::basis_change::{
    admissible_matrices, combinatorial_identity_check, dual_generator_ratio, frobenius_jacobian,
    jacobian, validate_basis, verify_det_identity, SweepMode,
};
use cartier_core::cartier::{pullback_check, sigma};
use cartier_core::fractal::{
    big_to_f64, boundary_length, constancy_raster, perez_staircase, perimeter, staircase_flats,
    staircase_partial_sum, GridSpec,
};
use cartier_core::frobenius::{bracket_root, decompose, Mode};
use cartier_core::ideal::DEFAULT_SPAIR_BUDGET;
use cartier_core::thresholds::{avoidance_windows, fpt_search, jumping_numbers};
use cartier_core::{
    parse_poly, parse_poly_list, CartierAlgebraSpec, Ideal, MixedPair, PrimeModulus, RelativeChart,
    Ring, TauConfig,
};
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::args::{expr_of_pair, fmt_rat, ideal, infer_vars, pair, rational, var_list};
use crate::{CliError, Command};

/// A file written by a command.
pub struct Artifact {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

pub struct Outcome {
    pub p: u64,
    pub vars: Vec<String>,
    pub ring: String,
    pub text: String,
    pub result: Value,
    pub artifacts: Vec<Artifact>,
    pub budgets: Value,
    /// False when a verification step failed; maps to exit code 2.
    pub verified: bool,
}

impl Outcome {
    fn new(ring: &Ring, text: String, result: Value) -> Outcome {
        Outcome {
            p: ring.p() as u64,
            vars: ring.var_names().to_vec(),
            ring: ring.to_string(),
            text,
            result,
            artifacts: Vec::new(),
            budgets: json!({ "spair_budget": DEFAULT_SPAIR_BUDGET }),
            verified: true,
        }
    }
}

fn ring_of(p: u64, vars: &[String]) -> Result<Ring, CliError> {
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(Ring::new(p, &names)?)
}

fn tau_cfg(conf: u32, start: u32, max_level: u32) -> TauConfig {
    TauConfig {
        conf,
        start,
        max_level,
    }
}

fn hex(h: u64) -> String {
    format!("{h:016x}")
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Tau {
            p,
            vars,
            pairs,
            alg,
            conf,
            start,
            max_level,
        } => {
            let ring = ring_of(*p, &var_list(vars))?;
            let (ideals, exps): (Vec<Ideal>, Vec<Rational64>) = pairs
                .iter()
                .map(|s| pair(s, &ring))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .unzip();
            let c = CartierAlgebraSpec::parse(alg, &ring)?;
            let tau = cartier_core::cartier::tau_mixed(
                &MixedPair::new(ideals, exps)?,
                &c,
                tau_cfg(*conf, *start, *max_level),
            )?;
            let basis = tau.basis_string()?;
            let hash = hex(tau.content_hash()?);
            let text = format!("tau = {basis}\nhash = {hash}\n");
            Ok(Outcome::new(
                &ring,
                text,
                json!({ "basis": basis, "class_hash": hash, "algebra": alg }),
            ))
        }
        Command::Fpt {
            p,
            vars,
            fixed,
            free,
            depth,
            confirm,
            conf,
        } => {
            let ring = ring_of(*p, &var_list(vars))?;
            let mut ideals = Vec::new();
            let mut exps = Vec::new();
            for s in fixed {
                let (i, t) = pair(s, &ring)?;
                ideals.push(i);
                exps.push(t);
            }
            ideals.push(ideal(free, &ring)?);
            exps.push(Rational64::from_integer(0));
            let c = CartierAlgebraSpec::full(&ring);
            let res = fpt_search(
                &MixedPair::new(ideals, exps)?,
                fixed.len(),
                &c,
                *depth,
                *confirm,
                tau_cfg(*conf, 1, 36),
            )?;
            let cand = res.candidate.map(fmt_rat);
            let windows = avoidance_windows(res.hi, *p as i64, 3);
            let mut text = format!(
                "interval = [{}, {}]\ncandidate = {}\ntranscript = {} evaluations\n",
                fmt_rat(res.lo),
                fmt_rat(res.hi),
                cand.clone().unwrap_or_else(|| "none".into()),
                res.transcript.len()
            );
            let w: Vec<String> = windows
                .iter()
                .map(|(a, q)| format!("({a}/{q}, {a}/{})", q - 1))
                .collect();
            let _ = writeln!(
                text,
                "avoidance windows containing hi: {}",
                if w.is_empty() {
                    "none".into()
                } else {
                    w.join(" ")
                }
            );
            let transcript: Vec<Value> = res
                .transcript
                .iter()
                .map(|e| json!({ "t": fmt_rat(e.t), "unit": e.unit, "class_hash": hex(e.hash) }))
                .collect();
            Ok(Outcome::new(
                &ring,
                text,
                json!({
                    "lo": fmt_rat(res.lo), "hi": fmt_rat(res.hi), "candidate": cand,
                    "transcript": transcript, "avoidance_windows": w,
                }),
            ))
        }
        Command::Jumps {
            p,
            vars,
            free,
            bound,
            depth,
        } => {
            let names = match vars {
                Some(v) => var_list(v),
                None => infer_vars(&[free]),
            };
            let ring = ring_of(*p, &names)?;
            let c = CartierAlgebraSpec::full(&ring);
            let runs = jumping_numbers(
                &[ideal(free, &ring)?],
                &[Rational64::from_integer(1)],
                rational(bound)?,
                *depth,
                &c,
                TauConfig::default(),
            )?;
            let mut text = String::from("first,last,class_hash\n");
            let mut rows = Vec::new();
            for r in &runs {
                let _ = writeln!(
                    text,
                    "{},{},{}",
                    fmt_rat(r.first),
                    fmt_rat(r.last),
                    hex(r.hash)
                );
                rows.push(json!({ "first": fmt_rat(r.first), "last": fmt_rat(r.last), "class_hash": hex(r.hash), "basis": r.basis }));
            }
            Ok(Outcome::new(&ring, text, Value::Array(rows)))
        }
        Command::Raster {
            p,
            vars,
            pairs,
            bound,
            depth,
            out,
            svg,
            staircase,
        } => {
            let exprs: Vec<&str> = pairs.iter().map(|s| expr_of_pair(s)).collect();
            let names = match vars {
                Some(v) => var_list(v),
                None => infer_vars(&exprs),
            };
            let ring = ring_of(*p, &names)?;
            let ideals = exprs
                .iter()
                .map(|e| ideal(e, &ring))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = GridSpec::new(*p as u32, ideals.len(), rational(bound)?, *depth)?;
            let c = CartierAlgebraSpec::full(&ring);
            let raster = constancy_raster(&ideals, &c, spec, TauConfig::default())?;
            let csv = raster.to_csv();
            let mut outcome_artifacts = vec![Artifact {
                path: out.clone(),
                bytes: csv.into_bytes(),
            }];
            if let Some(path) = svg {
                let stairs = if *staircase {
                    Some(perez_staircase(*p as u32, *depth)?)
                } else {
                    None
                };
                let doc = raster.to_svg(stairs.as_deref())?;
                outcome_artifacts.push(Artifact {
                    path: path.clone(),
                    bytes: doc.into_bytes(),
                });
            }
            let classes: Vec<Value> = raster
                .representatives
                .iter()
                .map(|(h, i)| Ok(json!({ "class_hash": hex(*h), "basis": i.basis_string()? })))
                .collect::<Result<_, CliError>>()?;
            let text = format!(
                "cells = {}\nclasses = {}\n",
                raster.classes.len(),
                raster.class_count()
            );
            let mut o = Outcome::new(
                &ring,
                text,
                json!({ "cells": raster.classes.len(), "classes": classes }),
            );
            o.artifacts = outcome_artifacts;
            Ok(o)
        }
        Command::Decompose {
            p,
            e,
            poly,
            base,
            vars,
        } => {
            let base_vars = base.as_deref().map(var_list).unwrap_or_default();
            let all = match vars {
                Some(v) => var_list(v),
                None => infer_vars(&[poly]),
            };
            let fiber: Vec<String> = all.into_iter().filter(|v| !base_vars.contains(v)).collect();
            let (ring, mode) = if base_vars.is_empty() {
                (ring_of(*p, &fiber)?, Mode::Absolute)
            } else {
                let b: Vec<&str> = base_vars.iter().map(String::as_str).collect();
                let f: Vec<&str> = fiber.iter().map(String::as_str).collect();
                (Ring::relative(*p, &b, &f)?, Mode::Relative)
            };
            let g = parse_poly(poly, &ring)?;
            let d = decompose(&g, *e, mode)?;
            let text = d.to_string();
            let comps: Vec<Value> = text.lines().map(|l| Value::String(l.to_string())).collect();
            Ok(Outcome::new(&ring, text, json!({ "components": comps })))
        }
        Command::BracketRoot {
            p,
            e,
            ideal: gens,
            vars,
        } => {
            let names = match vars {
                Some(v) => var_list(v),
                None => infer_vars(&[gens]),
            };
            let ring = ring_of(*p, &names)?;
            let i = Ideal::new(&ring, parse_poly_list(gens, &ring)?)?;
            let root = bracket_root(&i, *e)?;
            let basis = root.basis_string()?;
            let hash = hex(root.content_hash()?);
            Ok(Outcome::new(
                &ring,
                format!("root = {basis}\nhash = {hash}\n"),
                json!({ "basis": basis, "class_hash": hash }),
            ))
        }
        Command::Sigma {
            p,
            vars,
            alg,
            start,
            budget,
        } => {
            let ring = ring_of(*p, &var_list(vars))?;
            let c = CartierAlgebraSpec::parse(alg, &ring)?;
            let start = match start {
                Some(s) => ideal(s, &ring)?,
                None => Ideal::unit(&ring),
            };
            let s = sigma(&c, &start, *budget)?;
            let basis = s.basis_string()?;
            let hash = hex(s.content_hash()?);
            Ok(Outcome::new(
                &ring,
                format!("sigma = {basis}\nhash = {hash}\n"),
                json!({ "basis": basis, "class_hash": hash }),
            ))
        }
        Command::PullbackCheck {
            p,
            base,
            fiber,
            pairs,
            alg,
        } => {
            let b = var_list(base);
            let f = var_list(fiber);
            let br = ring_of(*p, &b)?;
            let bs: Vec<&str> = b.iter().map(String::as_str).collect();
            let fs: Vec<&str> = f.iter().map(String::as_str).collect();
            let chart = RelativeChart::new(*p, &bs, &fs)?;
            let (ideals, exps): (Vec<Ideal>, Vec<Rational64>) = pairs
                .iter()
                .map(|s| pair(s, &br))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .unzip();
            let c = CartierAlgebraSpec::parse(alg, &br)?;
            let rep = pullback_check(
                &c,
                &MixedPair::new(ideals, exps)?,
                &chart,
                TauConfig::default(),
            )?;
            let (base_tau, chart_tau) =
                (rep.extended.basis_string()?, rep.chart_tau.basis_string()?);
            let verdict = if rep.holds { "holds" } else { "fails" };
            let text = format!(
                "base tau = {}\nextended = {base_tau}\nchart tau = {chart_tau}\nverdict = {verdict}\n",
                rep.base_tau.basis_string()?
            );
            let mut o = Outcome::new(
                chart.ring(),
                text,
                json!({ "base_tau": rep.base_tau.basis_string()?, "extended": base_tau, "chart_tau": chart_tau, "holds": rep.holds }),
            );
            o.verified = rep.holds;
            Ok(o)
        }
        Command::Xi {
            p,
            n,
            exhaustive,
            random,
        } => {
            let m = PrimeModulus::new(*p)?;
            let mode = match (exhaustive, random) {
                (true, None) => SweepMode::Exhaustive,
                (false, Some(count)) => SweepMode::Random {
                    count: *count,
                    seed,
                },
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --exhaustive and --random COUNT".into(),
                    ))
                }
            };
            let rep = verify_det_identity(m, *n, mode)?;
            let mut text = format!(
                "{}/{} pass\n{}/{} pairs pass\n",
                rep.passed, rep.checked, rep.pairs_passed, rep.pairs_checked
            );
            if let Some(c) = &rep.counterexample {
                let _ = writeln!(
                    text,
                    "counterexample = {:?}",
                    c.entries.iter().map(|s| s.0).collect::<Vec<_>>()
                );
            }
            let ring = Ring::new(*p, &["mu"])?;
            let mut o = Outcome::new(
                &ring,
                text,
                json!({ "n": n, "checked": rep.checked, "passed": rep.passed, "pairs_checked": rep.pairs_checked, "pairs_passed": rep.pairs_passed }),
            );
            o.vars = Vec::new();
            o.ring = format!("GL_{n}(F_{p})");
            o.verified = rep.all_pass();
            Ok(o)
        }
        Command::XiComb { p, n, matrix } => {
            let m = PrimeModulus::new(*p)?;
            let mats: Vec<Vec<u32>> = match matrix {
                Some(text) => vec![text
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u32>()
                            .map_err(|_| CliError::Usage(format!("bad entry `{s}`")))
                    })
                    .collect::<Result<_, _>>()?],
                None => admissible_matrices(*p as u32, *n),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut all = true;
            for a in &mats {
                let c = combinatorial_identity_check(m, *n, a)?;
                all &= c.equal;
                let _ = writeln!(
                    text,
                    "{:?}: lhs = {}, rhs = {}, equal = {}",
                    a, c.lhs.0, c.rhs.0, c.equal
                );
                rows.push(json!({ "a": a, "lhs": c.lhs.0, "rhs": c.rhs.0, "equal": c.equal }));
            }
            let _ = writeln!(
                text,
                "{}/{} equal",
                rows.iter().filter(|r| r["equal"] == true).count(),
                rows.len()
            );
            let ring = Ring::new(*p, &["a"])?;
            let mut o = Outcome::new(&ring, text, Value::Array(rows));
            o.vars = Vec::new();
            o.ring = format!("F_{p}");
            o.verified = all;
            Ok(o)
        }
        Command::BasisChange {
            p,
            laurent,
            old,
            new,
        } => {
            let ring = ring_of(*p, &var_list(old))?.with_laurent(*laurent);
            let ys = parse_poly_list(new, &ring)?;
            let j = jacobian(&ring, &ys)?;
            let det = j.det()?;
            let v = validate_basis(&ring, &ys)?;
            let xi_matrix = frobenius_jacobian(&ring, &ys, 1)?;
            let dim = xi_matrix.indices.len();
            let mut text = format!("J = {j}\ndet J = {det}\nXi = {dim}x{dim}\n");
            let mut result = json!({
                "jacobian": j.to_string(), "det": det.to_string(), "xi_dim": dim,
                "is_d_basis": v.is_d_basis, "is_p_basis": v.is_p_basis,
            });
            let mut verified = true;
            if v.is_p_basis {
                match dual_generator_ratio(&ring, &ys, 1) {
                    Ok(xi) => {
                        let _ = writeln!(text, "xi = {xi}\nverdict = xi = det(J)^(p-1)");
                        result["xi"] = Value::String(xi.to_string());
                    }
                    Err(cartier_core::Error::Verification(msg)) => {
                        let _ = writeln!(text, "verdict = mismatch: {msg}");
                        verified = false;
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                let _ = writeln!(text, "verdict = not a p-basis");
            }
            let mut o = Outcome::new(&ring, text, result);
            o.verified = verified;
            Ok(o)
        }
        Command::Staircase { p, depth, terms } => {
            let stairs = perez_staircase(*p as u32, *depth)?;
            let flats = staircase_flats(*p as u32, *depth)?;
            let len = boundary_length(&stairs);
            let per = perimeter(*p as u32, *depth)?;
            let sum = staircase_partial_sum(*p as u32, terms.unwrap_or(*depth))?;
            let mut text = String::from("vertices:\n");
            for (a, b) in &stairs {
                let _ = writeln!(text, "  ({}, {})", fmt_rat(*a), fmt_rat(*b));
            }
            let _ = writeln!(text, "flats = {}", flats.len());
            let _ = writeln!(
                text,
                "staircase length = {} + {:.9} (axis-parallel + diagonal)",
                fmt_rat(len.axis_parallel),
                len.other
            );
            let _ = writeln!(
                text,
                "perimeter = {} + {:.9}",
                fmt_rat(per.axis_parallel),
                per.other
            );
            let _ = writeln!(text, "partial sum = {sum} ~ {:.9}", big_to_f64(&sum));
            let ring = Ring::new(*p, &["t1", "t2"])?;
            let verts: Vec<Value> = stairs
                .iter()
                .map(|(a, b)| json!([fmt_rat(*a), fmt_rat(*b)]))
                .collect();
            Ok(Outcome::new(
                &ring,
                text,
                json!({
                    "vertices": verts, "flats": flats.len(),
                    "axis_parallel_length": fmt_rat(len.axis_parallel), "diagonal_length": len.other,
                    "perimeter_axis_parallel": fmt_rat(per.axis_parallel), "perimeter_diagonal": per.other,
                    "partial_sum": sum.to_string(),
                }),
            ))
        }
    }
}
