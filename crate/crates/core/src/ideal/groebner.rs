//! Buchberger's algorithm over raw term vectors.
//!
//! Polynomials here are plain `Vec<(Monomial, Scalar)>` sorted in decreasing
//! order for the chosen [`TermOrder`], which lets the elimination routines
//! reuse the engine with a block order.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, Scalar};
use crate::poly::Monomial;

pub(crate) type Terms = Vec<(Monomial, Scalar)>;

/// Default cap on the number of S-pairs reduced per basis computation.
pub const DEFAULT_SPAIR_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    Grevlex,
    /// Block order: the first `k` variables (compared by grevlex) dominate,
    /// ties are broken by grevlex on the remaining ones.
    Eliminate(usize),
}

fn grevlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl TermOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Grevlex => grevlex(a.exps(), b.exps()),
            TermOrder::Eliminate(k) => grevlex(&a.exps()[..k], &b.exps()[..k])
                .then_with(|| grevlex(&a.exps()[k..], &b.exps()[k..])),
        }
    }

    pub(crate) fn sort(self, t: &mut Terms) {
        t.sort_unstable_by(|a, b| self.cmp(&b.0, &a.0));
    }
}

struct Engine {
    m: PrimeModulus,
    order: TermOrder,
}

impl Engine {
    fn monic(&self, mut f: Terms) -> Terms {
        if let Some(&(_, c)) = f.first() {
            if c != Scalar::ONE {
                let inv = self.m.inv(c).expect("nonzero leading coefficient");
                for t in f.iter_mut() {
                    t.1 = self.m.mul(t.1, inv);
                }
            }
        }
        f
    }

    /// `f - c·mono·g`, where `f` is given as the slice still to be processed.
    fn sub_mul(
        &self,
        f: &[(Monomial, Scalar)],
        c: Scalar,
        mono: &Monomial,
        g: &[(Monomial, Scalar)],
    ) -> Terms {
        let m = self.m;
        let negc = m.neg(c);
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut gi = g.iter().map(|(gm, gc)| {
            (
                gm.checked_mul(mono)
                    .expect("exponent overflow in reduction"),
                m.mul(*gc, negc),
            )
        });
        let mut cur = gi.next();
        while let Some((gm, gc)) = cur.take() {
            while i < f.len() && self.order.cmp(&f[i].0, &gm) == Ordering::Greater {
                out.push(f[i].clone());
                i += 1;
            }
            if i < f.len() && f[i].0 == gm {
                let s = m.add(f[i].1, gc);
                if !s.is_zero() {
                    out.push((gm, s));
                }
                i += 1;
            } else {
                out.push((gm, gc));
            }
            cur = gi.next();
        }
        out.extend_from_slice(&f[i..]);
        out
    }

    /// Full reduction of `f` by the monic polynomials `basis`.
    fn normal_form(&self, f: Terms, basis: &[&Terms]) -> Terms {
        let mut rem: Terms = Vec::new();
        let mut p = f;
        let mut start = 0;
        while start < p.len() {
            let (lm, lc) = p[start].clone();
            let divisor = basis.iter().find(|g| g[0].0.divides(&lm));
            match divisor {
                Some(g) => {
                    let q = lm.quotient(&g[0].0);
                    p = self.sub_mul(&p[start..], lc, &q, g);
                    start = 0;
                }
                None => {
                    rem.push((lm, lc));
                    start += 1;
                }
            }
        }
        rem
    }

    fn spoly(&self, f: &Terms, g: &Terms) -> Terms {
        let l = f[0].0.lcm(&g[0].0);
        let mf = l.quotient(&f[0].0);
        let mg = l.quotient(&g[0].0);
        let fm: Terms = f
            .iter()
            .map(|(a, c)| (a.checked_mul(&mf).expect("exponent overflow"), *c))
            .collect();
        self.sub_mul(&fm, Scalar::ONE, &mg, g)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced, monic Gröbner basis of the ideal generated by `gens`.
/// The output is sorted by increasing leading monomial.
pub(crate) fn groebner_basis(
    gens: Vec<Terms>,
    m: PrimeModulus,
    order: TermOrder,
    budget: usize,
) -> Result<Vec<Terms>> {
    let eng = Engine { m, order };
    let mut polys: Vec<Terms> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Terms> = gens
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|mut g| {
            order.sort(&mut g);
            eng.monic(g)
        })
        .collect();
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));

    let basis_refs = |polys: &[Terms], active: &[bool]| -> Vec<usize> {
        (0..polys.len()).filter(|&k| active[k]).collect()
    };

    for g in inputs {
        let idx = basis_refs(&polys, &active);
        let refs: Vec<&Terms> = idx.iter().map(|&k| &polys[k]).collect();
        let r = eng.normal_form(g, &refs);
        if r.is_empty() {
            continue;
        }
        let r = eng.monic(r);
        if r[0].0.is_one() {
            return Ok(vec![r]);
        }
        update(&mut polys, &mut active, &mut pairs, r);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > budget {
            return Err(Error::GroebnerBudget(budget));
        }
        let best = (0..pairs.len())
            .min_by(|&a, &b| order.cmp(&pairs[a].lcm, &pairs[b].lcm))
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let s = eng.spoly(&polys[pair.i], &polys[pair.j]);
        if s.is_empty() {
            continue;
        }
        let idx = basis_refs(&polys, &active);
        let refs: Vec<&Terms> = idx.iter().map(|&k| &polys[k]).collect();
        let r = eng.normal_form(s, &refs);
        if r.is_empty() {
            continue;
        }
        let r = eng.monic(r);
        if r[0].0.is_one() {
            return Ok(vec![r]);
        }
        update(&mut polys, &mut active, &mut pairs, r);
    }

    // minimal basis, then interreduce
    let mut basis: Vec<Terms> = Vec::new();
    for (k, p) in polys.into_iter().enumerate() {
        if active[k] {
            basis.push(p);
        }
    }
    let mut keep = vec![true; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            if a != b && keep[b] && basis[b][0].0.divides(&basis[a][0].0)
                && (basis[a][0].0 != basis[b][0].0 || b < a) {
                    keep[a] = false;
                    break;
                }
        }
    }
    let minimal: Vec<Terms> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(b, _)| b)
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let head = minimal[k][0].clone();
        let others: Vec<&Terms> = (0..minimal.len())
            .filter(|&j| j != k)
            .map(|j| &minimal[j])
            .collect();
        let tail = eng.normal_form(minimal[k][1..].to_vec(), &others);
        let mut out = vec![head];
        out.extend(tail);
        reduced.push(out);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    Ok(reduced)
}

/// Gebauer–Möller installation of a new basis element.
fn update(polys: &mut Vec<Terms>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Terms) {
    let hn = polys.len();
    let lh = h[0].0.clone();

    let cands: Vec<(usize, Monomial)> = (0..polys.len())
        .filter(|&k| active[k])
        .map(|k| (k, polys[k][0].0.lcm(&lh)))
        .collect();

    // chain criterion among the new pairs
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    for (idx, (g1, l1)) in cands.iter().enumerate() {
        let coprime = polys[*g1][0].0.is_coprime(&lh);
        let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l1))
            || kept.iter().any(|(_, l2)| l2.divides(l1));
        if coprime || !dominated {
            kept.push((*g1, l1.clone()));
        }
    }
    // product criterion
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|(g, _)| !polys[*g][0].0.is_coprime(&lh))
        .map(|(g, lcm)| Pair { i: g, j: hn, lcm })
        .collect();

    pairs.retain(|pr| {
        let li = &polys[pr.i][0].0;
        let lj = &polys[pr.j][0].0;
        !(lh.divides(&pr.lcm) && li.lcm(&lh) != pr.lcm && lh.lcm(lj) != pr.lcm)
    });
    pairs.extend(new_pairs);

    for k in 0..polys.len() {
        if active[k] && lh.divides(&polys[k][0].0) {
            active[k] = false;
        }
    }
    polys.push(h);
    active.push(true);
}

/// Normal form of `f` with respect to a Gröbner basis in the given order.
pub(crate) fn normal_form(f: Terms, basis: &[Terms], m: PrimeModulus, order: TermOrder) -> Terms {
    let eng = Engine { m, order };
    let mut f = f;
    order.sort(&mut f);
    let refs: Vec<&Terms> = basis.iter().collect();
    eng.normal_form(f, &refs)
}
