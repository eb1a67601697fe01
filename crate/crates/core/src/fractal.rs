//! Constancy regions on exact p-adic rasters: χ functions, the operators
//! `T_{q|b}`, the staircase of the cusp example, Hausdorff distance and
//! p-fractal span ranks.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cartier::{tau_mixed, CartierAlgebraSpec, MixedPair, TauConfig};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::ideal::{hash_text, Ideal};
use crate::poly::Polynomial;

/// Points `m / p^k` of the box `[0, T]^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub p: u32,
    pub n: usize,
    pub bound: Rational64,
    pub k: u32,
    side: usize,
}

impl GridSpec {
    pub fn new(p: u32, n: usize, bound: Rational64, k: u32) -> Result<GridSpec> {
        if n == 0 {
            return Err(Error::Mesh("dimension must be positive".into()));
        }
        if bound < Rational64::zero() {
            return Err(Error::Mesh("negative box bound".into()));
        }
        let q = (p as i64).checked_pow(k).ok_or(Error::ExponentOverflow)?;
        let scaled = bound * q;
        if !scaled.is_integer() {
            return Err(Error::Mesh(format!(
                "bound {bound} is not on the mesh 1/{q}"
            )));
        }
        let side = scaled.to_integer() as usize + 1;
        if side.checked_pow(n as u32).is_none_or(|c| c > 10_000_000) {
            return Err(Error::Budget(format!("{side}^{n} cells")));
        }
        Ok(GridSpec {
            p,
            n,
            bound,
            k,
            side,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn denom(&self) -> i64 {
        (self.p as i64).pow(self.k)
    }

    pub fn step(&self) -> Rational64 {
        Rational64::new(1, self.denom())
    }

    /// Numerators of the point with this index, first coordinate slowest.
    pub fn numerators(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.side) as i64;
            idx /= self.side;
        }
        out
    }

    pub fn index(&self, nums: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for &m in nums {
            if m < 0 || m as usize >= self.side {
                return None;
            }
            idx = idx * self.side + m as usize;
        }
        Some(idx)
    }

    pub fn point(&self, idx: usize) -> Vec<Rational64> {
        let d = self.denom();
        self.numerators(idx)
            .into_iter()
            .map(|m| Rational64::new(m, d))
            .collect()
    }

    /// Index of an exact point, if it lies on the grid.
    pub fn index_of_point(&self, t: &[Rational64]) -> Option<usize> {
        let d = self.denom();
        let nums: Option<Vec<i64>> = t
            .iter()
            .map(|x| (*x * d).is_integer().then(|| (*x * d).to_integer()))
            .collect();
        self.index(&nums?)
    }

    fn coarser(&self, k: u32) -> Result<GridSpec> {
        if k > self.k {
            return Err(Error::Mesh(format!("cannot refine mesh {} to {k}", self.k)));
        }
        GridSpec::new(self.p, self.n, self.bound, k)
    }
}

/// Per-point test-ideal classes, keyed by content hash.
#[derive(Clone, Debug)]
pub struct RasterGrid {
    pub spec: GridSpec,
    pub classes: Vec<u64>,
    pub representatives: BTreeMap<u64, Ideal>,
}

pub fn unit_class() -> u64 {
    hash_text("(1)")
}

/// Evaluates τ at every grid point.
pub fn constancy_raster(
    ideals: &[Ideal],
    c: &CartierAlgebraSpec,
    spec: GridSpec,
    cfg: TauConfig,
) -> Result<RasterGrid> {
    if ideals.len() != spec.n {
        return Err(Error::Mesh(format!(
            "{} ideals for a {}-dimensional grid",
            ideals.len(),
            spec.n
        )));
    }
    if spec.p != c.ring().p() {
        return Err(Error::Mesh("grid prime differs from ring prime".into()));
    }
    let cells: Vec<(u64, Ideal)> = (0..spec.len())
        .into_par_iter()
        .map(|idx| {
            let pair = MixedPair::new(ideals.to_vec(), spec.point(idx))?;
            let tau = tau_mixed(&pair, c, cfg)?;
            Ok((tau.content_hash()?, tau))
        })
        .collect::<Result<_>>()?;
    let mut representatives = BTreeMap::new();
    let mut classes = Vec::with_capacity(cells.len());
    for (h, tau) in cells {
        representatives.entry(h).or_insert(tau);
        classes.push(h);
    }
    Ok(RasterGrid {
        spec,
        classes,
        representatives,
    })
}

impl RasterGrid {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_at(&self, t: &[Rational64]) -> Option<u64> {
        self.spec.index_of_point(t).map(|i| self.classes[i])
    }

    /// The same raster read on a coarser mesh.
    pub fn restrict(&self, k: u32) -> Result<RasterGrid> {
        let spec = self.spec.coarser(k)?;
        let scale = (self.spec.p as i64).pow(self.spec.k - k);
        let classes: Vec<u64> = (0..spec.len())
            .map(|idx| {
                let nums: Vec<i64> = spec
                    .numerators(idx)
                    .into_iter()
                    .map(|m| m * scale)
                    .collect();
                self.classes[self.spec.index(&nums).expect("coarse point on fine grid")]
            })
            .collect();
        let used: BTreeSet<u64> = classes.iter().copied().collect();
        let representatives = self
            .representatives
            .iter()
            .filter(|(h, _)| used.contains(h))
            .map(|(h, i)| (*h, i.clone()))
            .collect();
        Ok(RasterGrid {
            spec,
            classes,
            representatives,
        })
    }

    /// True iff the grid points within max-norm distance of one step of `t`
    /// include both the unit class and some other class.
    pub fn separates(&self, t: &[Rational64]) -> bool {
        let d = self.spec.denom();
        let unit = unit_class();
        let lo: Vec<i64> = t.iter().map(|x| (*x * d - 1).ceil().to_integer()).collect();
        let hi: Vec<i64> = t
            .iter()
            .map(|x| (*x * d + 1).floor().to_integer())
            .collect();
        let mut seen_unit = false;
        let mut seen_other = false;
        let mut cur = lo.clone();
        loop {
            if let Some(idx) = self.spec.index(&cur) {
                if self.classes[idx] == unit {
                    seen_unit = true;
                } else {
                    seen_other = true;
                }
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return seen_unit && seen_other;
                }
                cur[i] += 1;
                if cur[i] <= hi[i] {
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    /// `χ^N`: 1 where τ ⊄ N.
    pub fn chi(&self, n: &Ideal) -> Result<RegionFunction> {
        let mut by_class = BTreeMap::new();
        for (h, tau) in &self.representatives {
            by_class.insert(*h, !n.contains_ideal(tau)?);
        }
        let values = self
            .classes
            .iter()
            .map(|h| Rational64::from_integer(by_class[h] as i64))
            .collect();
        Ok(RegionFunction {
            spec: self.spec.clone(),
            values,
            label: Some(n.clone()),
        })
    }

    /// Indicator of one class.
    pub fn rho(&self, class: u64) -> RegionFunction {
        let values = self
            .classes
            .iter()
            .map(|h| Rational64::from_integer((*h == class) as i64))
            .collect();
        RegionFunction {
            spec: self.spec.clone(),
            values,
            label: None,
        }
    }

    /// Points of the unit class.
    pub fn unit_region(&self) -> Vec<Vec<Rational64>> {
        let unit = unit_class();
        (0..self.spec.len())
            .filter(|&i| self.classes[i] == unit)
            .map(|i| self.spec.point(i))
            .collect()
    }

    /// Rows `t1_num,t1_den,…,class_hash`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let head: Vec<String> = (1..=self.spec.n)
            .map(|i| format!("t{i}_num,t{i}_den"))
            .collect();
        let _ = writeln!(out, "{},class_hash", head.join(","));
        for (idx, h) in self.classes.iter().enumerate() {
            let pt: Vec<String> = self
                .spec
                .point(idx)
                .iter()
                .map(|x| format!("{},{}", x.numer(), x.denom()))
                .collect();
            let _ = writeln!(out, "{},{h:016x}", pt.join(","));
        }
        out
    }

    /// Cells as rectangles on a 600×600 viewport, optionally overlaid with a
    /// polyline. Only for two-dimensional grids.
    pub fn to_svg(&self, overlay: Option<&[(Rational64, Rational64)]>) -> Result<String> {
        if self.spec.n != 2 {
            return Err(Error::Mesh(
                "svg output needs a two-dimensional grid".into(),
            ));
        }
        let size = 600.0;
        let side = self.spec.side as f64;
        let w = size / side;
        let bound = to_f64(self.spec.bound).max(f64::MIN_POSITIVE);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">"
        );
        for (idx, h) in self.classes.iter().enumerate() {
            let m = self.spec.numerators(idx);
            let x = m[0] as f64 * w;
            let y = size - (m[1] as f64 + 1.0) * w;
            let fill = if *h == unit_class() {
                "#f4f4f4".to_string()
            } else {
                format!("hsl({},60%,55%)", h % 360)
            };
            let _ = writeln!(
                out,
                "<rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{w:.3}\" height=\"{w:.3}\" fill=\"{fill}\"/>"
            );
        }
        if let Some(line) = overlay {
            let pts: Vec<String> = line
                .iter()
                .map(|(a, b)| {
                    format!(
                        "{:.3},{:.3}",
                        to_f64(*a) / bound * size,
                        size - to_f64(*b) / bound * size
                    )
                })
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#c00\" stroke-width=\"2\"/>",
                pts.join(" ")
            );
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

fn to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A rational function on a grid, optionally marked as `χ^N`.
#[derive(Clone, Debug)]
pub struct RegionFunction {
    pub spec: GridSpec,
    pub values: Vec<Rational64>,
    pub label: Option<Ideal>,
}

impl RegionFunction {
    pub fn from_predicate<F>(spec: GridSpec, pred: F) -> RegionFunction
    where
        F: Fn(&[Rational64]) -> bool,
    {
        let values = (0..spec.len())
            .map(|i| Rational64::from_integer(pred(&spec.point(i)) as i64))
            .collect();
        RegionFunction {
            spec,
            values,
            label: None,
        }
    }

    pub fn constant(spec: GridSpec, v: Rational64) -> RegionFunction {
        let values = vec![v; spec.len()];
        RegionFunction {
            spec,
            values,
            label: None,
        }
    }

    pub fn support(&self) -> Vec<Vec<Rational64>> {
        (0..self.spec.len())
            .filter(|&i| !self.values[i].is_zero())
            .map(|i| self.spec.point(i))
            .collect()
    }

    pub fn restrict(&self, k: u32) -> Result<RegionFunction> {
        let spec = self.spec.coarser(k)?;
        let scale = (self.spec.p as i64).pow(self.spec.k - k);
        let values = (0..spec.len())
            .map(|idx| {
                let nums: Vec<i64> = spec
                    .numerators(idx)
                    .into_iter()
                    .map(|m| m * scale)
                    .collect();
                self.values[self.spec.index(&nums).expect("coarse point on fine grid")]
            })
            .collect();
        Ok(RegionFunction {
            spec,
            values,
            label: self.label.clone(),
        })
    }

    /// Pointwise `Σ` or `Π` style combinations on identical grids.
    pub fn zip_with<F: Fn(Rational64, Rational64) -> Rational64>(
        &self,
        other: &RegionFunction,
        f: F,
    ) -> Result<RegionFunction> {
        if self.spec != other.spec {
            return Err(Error::Mesh("functions live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(RegionFunction {
            spec: self.spec.clone(),
            values,
            label: None,
        })
    }
}

/// `T_{q|b}: Φ(t) ↦ Φ((t + b)/q)` with `q = p^c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TOperator {
    pub c: u32,
    pub q: i64,
    pub b: Vec<i64>,
}

impl TOperator {
    pub fn new(p: u32, c: u32, b: Vec<i64>) -> Result<TOperator> {
        let q = (p as i64).checked_pow(c).ok_or(Error::ExponentOverflow)?;
        if b.iter().any(|&x| x < 0 || x > q) {
            return Err(Error::Precondition(format!("offsets must lie in [0, {q}]")));
        }
        Ok(TOperator { c, q, b })
    }

    /// `T_{q'|b'} ∘ T_{q|b} = T_{qq'|b' + q'b}`.
    pub fn then(&self, next: &TOperator) -> TOperator {
        let b = self
            .b
            .iter()
            .zip(&next.b)
            .map(|(b, b2)| b2 + next.q * b)
            .collect();
        TOperator {
            c: self.c + next.c,
            q: self.q * next.q,
            b,
        }
    }
}

/// Result lives on the mesh `k − c`; points whose preimage leaves the box
/// get the value 0.
pub fn apply_t(phi: &RegionFunction, op: &TOperator) -> Result<RegionFunction> {
    if op.b.len() != phi.spec.n {
        return Err(Error::Mesh(
            "offset dimension differs from grid dimension".into(),
        ));
    }
    if op.c > phi.spec.k {
        return Err(Error::Mesh(format!(
            "mesh {} cannot support q = {}",
            phi.spec.k, op.q
        )));
    }
    let spec = phi.spec.coarser(phi.spec.k - op.c)?;
    let shift = (phi.spec.p as i64).pow(spec.k);
    let values = (0..spec.len())
        .map(|idx| {
            let src: Vec<i64> = spec
                .numerators(idx)
                .iter()
                .zip(&op.b)
                .map(|(m, b)| m + b * shift)
                .collect();
            phi.spec
                .index(&src)
                .map(|i| phi.values[i])
                .unwrap_or_else(Rational64::zero)
        })
        .collect();
    Ok(RegionFunction {
        spec,
        values,
        label: None,
    })
}

/// `N' = (N^{[p]} : Π f_i^{b_i})`, so that `T_{p|b} χ^N = χ^{N'}` for the
/// principal ideals `(f_i)`.
pub fn transform_chi_symbolic(n: &Ideal, b: &[u64], ideals: &[Ideal]) -> Result<Ideal> {
    if b.len() != ideals.len() {
        return Err(Error::Precondition("one offset per ideal".into()));
    }
    let ring = n.ring();
    let p = ring.p() as u64;
    let mut prod = Polynomial::one(ring);
    for (a, &bi) in ideals.iter().zip(b) {
        if bi > p {
            return Err(Error::Precondition(format!("offset {bi} exceeds p")));
        }
        let f = a.principal_generator().ok_or_else(|| {
            Error::Precondition("symbolic transform needs principal ideals".into())
        })?;
        prod = prod.checked_mul(&f.pow(bi)?)?;
    }
    n.frob_power(1)?.colon_poly(&prod)?.minimized()
}

/// Indices `b` with base-p digits `b₁ … b_{j-1}` even and `b_j` odd.
fn flat_numerators(p: i64, j: u32) -> Vec<i64> {
    let mut out = Vec::new();
    let mut stack = vec![(0i64, 1u32)];
    while let Some((prefix, len)) = stack.pop() {
        if len == j {
            for d in (1..p).step_by(2) {
                out.push(prefix * p + d);
            }
        } else {
            for d in (0..p).step_by(2) {
                stack.push((prefix * p + d, len + 1));
            }
        }
    }
    out.sort();
    out
}

/// A horizontal piece of the staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flat {
    pub level: u32,
    pub start: Rational64,
    pub end: Rational64,
    pub height: Rational64,
}

pub fn staircase_flats(p: u32, k: u32) -> Result<Vec<Flat>> {
    PrimeModulus::new(p as u64)?.require_odd()?;
    let p = p as i64;
    let mut flats = Vec::new();
    for j in 1..=k {
        let d = p.checked_pow(j).ok_or(Error::ExponentOverflow)?;
        for b in flat_numerators(p, j) {
            flats.push(Flat {
                level: j,
                start: Rational64::new(b, d),
                end: Rational64::new(b + 1, d),
                height: Rational64::one() - Rational64::new(b + 1, 2 * d),
            });
        }
    }
    flats.sort_by_key(|f| f.start);
    Ok(flats)
}

/// Boundary of the first constancy region of `τ((x+y)^{t₁}(xy)^{t₂})` down to
/// resolution `p^{-k}`, from `(0, 1)` to `(1, 1/2)`.
pub fn perez_staircase(p: u32, k: u32) -> Result<Vec<(Rational64, Rational64)>> {
    let diag = |t: Rational64| Rational64::one() - t / 2;
    let mut pts = vec![(Rational64::zero(), Rational64::one())];
    for f in staircase_flats(p, k)? {
        pts.push((f.start, diag(f.start)));
        pts.push((f.start, f.height));
        pts.push((f.end, f.height));
    }
    pts.push((Rational64::one(), Rational64::new(1, 2)));
    pts.dedup();
    Ok(pts)
}

/// Arc length split into its exact axis-parallel part and the floating
/// point length of the remaining segments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcLength {
    pub axis_parallel: Rational64,
    pub other: f64,
}

impl ArcLength {
    pub fn total(&self) -> f64 {
        to_f64(self.axis_parallel) + self.other
    }
}

pub fn boundary_length(polyline: &[(Rational64, Rational64)]) -> ArcLength {
    let mut axis = Rational64::zero();
    let mut other = 0.0;
    for w in polyline.windows(2) {
        let dx = (w[1].0 - w[0].0).abs();
        let dy = (w[1].1 - w[0].1).abs();
        if dx.is_zero() || dy.is_zero() {
            axis += dx + dy;
        } else {
            other += to_f64(dx).hypot(to_f64(dy));
        }
    }
    ArcLength {
        axis_parallel: axis,
        other,
    }
}

/// Closed boundary of the first region: staircase, then down to `(1, 0)`,
/// along both axes, and back to `(0, 1)`.
pub fn perimeter(p: u32, k: u32) -> Result<ArcLength> {
    let mut poly = perez_staircase(p, k)?;
    poly.push((Rational64::one(), Rational64::zero()));
    poly.push((Rational64::zero(), Rational64::zero()));
    poly.push((Rational64::zero(), Rational64::one()));
    Ok(boundary_length(&poly))
}

/// `Σ_{k=1}^{K} (3/2)·p^{-k}·((p+1)/2)^{k-1}·(p-1)/2`.
pub fn staircase_partial_sum(p: u32, terms: u32) -> Result<BigRational> {
    PrimeModulus::new(p as u64)?.require_odd()?;
    let p = BigInt::from(p);
    let two = BigInt::from(2);
    let mut sum = BigRational::zero();
    let mut weight = BigRational::new(BigInt::from(3), two.clone());
    let ratio = BigRational::new(&p + 1, &two * &p);
    let last = BigRational::new(&p - 1, two.clone());
    weight /= BigRational::from_integer(p.clone());
    for _ in 0..terms {
        sum += &weight * &last;
        weight *= &ratio;
    }
    Ok(sum)
}

pub fn big_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Max-norm Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vec<Rational64>], b: &[Vec<Rational64>]) -> Result<Rational64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let l = a
        .iter()
        .chain(b)
        .flatten()
        .fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let scale = |s: &[Vec<Rational64>]| -> Vec<Vec<i64>> {
        s.iter()
            .map(|v| v.iter().map(|x| (*x * l).to_integer()).collect())
            .collect()
    };
    let (ia, ib) = (scale(a), scale(b));
    let directed = |from: &[Vec<i64>], to: &[Vec<i64>]| -> i64 {
        let set: HashSet<&Vec<i64>> = to.iter().collect();
        from.par_iter()
            .filter(|v| !set.contains(v))
            .map(|v| {
                to.iter()
                    .map(|w| {
                        v.iter()
                            .zip(w)
                            .map(|(x, y)| (x - y).abs())
                            .max()
                            .unwrap_or(0)
                    })
                    .min()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    };
    let d = directed(&ia, &ib).max(directed(&ib, &ia));
    Ok(Rational64::new(d, l))
}

fn rank_over_q(rows: Vec<Vec<Rational64>>) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        let pivot_row: Vec<BigRational> = m[rank].iter().map(|x| x * &inv).collect();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * y;
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Rank over ℚ of all `T_{p^c|b}Φ`, `c ≤ c_max`, `b ∈ [0, p^c]^n`, read on
/// the common mesh `read` (at most `k − c_max`), so that ranks for
/// different `c_max` are comparable.
pub fn pfractal_span_rank(phi: &RegionFunction, c_max: u32, read: u32) -> Result<usize> {
    if c_max > phi.spec.k || read > phi.spec.k - c_max {
        return Err(Error::Mesh(format!(
            "mesh {} cannot support c_max = {c_max} read at {read}",
            phi.spec.k
        )));
    }
    let target = read;
    let mut rows: BTreeSet<Vec<Rational64>> = BTreeSet::new();
    for c in 0..=c_max {
        let q = (phi.spec.p as i64).pow(c);
        let count = ((q + 1) as usize).pow(phi.spec.n as u32);
        for code in 0..count {
            let mut rest = code;
            let mut b = vec![0i64; phi.spec.n];
            for slot in b.iter_mut().rev() {
                *slot = (rest % (q as usize + 1)) as i64;
                rest /= q as usize + 1;
            }
            let op = TOperator::new(phi.spec.p, c, b)?;
            let row = apply_t(phi, &op)?.restrict(target)?.values;
            if row.iter().any(|x| !x.is_zero()) {
                rows.insert(row);
            }
        }
    }
    Ok(rank_over_q(rows.into_iter().collect()))
}

/// Checks `ρ_c = Π_{d ⊊ c} χ^{τ_d} − χ^{τ_c}` cellwise for every class.
pub fn rho_decomposition_holds(raster: &RasterGrid) -> Result<bool> {
    for (h, tau) in &raster.representatives {
        let mut prod = RegionFunction::constant(raster.spec.clone(), Rational64::one());
        for (h2, other) in &raster.representatives {
            if h2 != h && tau.contains_ideal(other)? {
                prod = prod.zip_with(&raster.chi(other)?, |a, b| a * b)?;
            }
        }
        let lhs = prod.zip_with(&raster.chi(tau)?, |a, b| a - b)?;
        if lhs.values != raster.rho(*h).values {
            return Ok(false);
        }
    }
    Ok(true)
}
