//! Changes of p-basis: jacobians, Frobenius jacobians, the dual-generator
//! ratio `ξ`, and the scalar operator `ξ_{p-1}` with its determinant
//! identity.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, Scalar};
use crate::frobenius::{decompose, embed_base, Component, Mode};
use crate::ideal::div_exact;
use crate::poly::{Monomial, Polynomial, Ring};

/// Largest fiber dimension and `q` for the Frobenius jacobian solve.
pub const MAX_XI_VARS: usize = 2;
pub const MAX_XI_Q: i64 = 9;

/// Square matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixOverRing {
    ring: Ring,
    n: usize,
    entries: Vec<Polynomial>,
}

impl MatrixOverRing {
    pub fn new(ring: &Ring, n: usize, entries: Vec<Polynomial>) -> Result<MatrixOverRing> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Precondition(
                "matrix must be square and nonempty".into(),
            ));
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(MatrixOverRing {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    /// Fraction-free (Bareiss) determinant; every division is exact.
    pub fn det(&self) -> Result<Polynomial> {
        let n = self.n;
        let mut a: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = Polynomial::one(&self.ring);
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(Polynomial::zero(&self.ring));
                };
                a.swap(k, r);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j].checked_mul(&a[k][k])? - &a[i][k].checked_mul(&a[k][j])?;
                    a[i][j] = div_exact(&num, &prev)?;
                }
                a[i][k] = Polynomial::zero(&self.ring);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }
}

impl fmt::Display for MatrixOverRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for MatrixOverRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn check_candidate(ring: &Ring, new: &[Polynomial]) -> Result<()> {
    if new.len() != ring.n_fiber() {
        return Err(Error::Precondition(format!(
            "{} candidates for {} fiber variables",
            new.len(),
            ring.n_fiber()
        )));
    }
    if new.iter().any(|y| y.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// `J_{ij} = ∂y_i/∂x_j`, with `x` the fiber coordinates of the ring.
pub fn jacobian(ring: &Ring, new: &[Polynomial]) -> Result<MatrixOverRing> {
    check_candidate(ring, new)?;
    let mut entries = Vec::new();
    for y in new {
        for v in ring.fiber_range() {
            entries.push(y.partial_derivative(v));
        }
    }
    MatrixOverRing::new(ring, new.len(), entries)
}

/// Change-of-basis matrix between the monomial Frobenius bases:
/// `y^j = Σ_i Ξ_{ij} x^i`, entries in the subring generated by the base and
/// `q`-th powers.
#[derive(Clone, Debug)]
pub struct FrobJacobian {
    pub q: i64,
    pub e: u32,
    /// Multi-indices in `[0, q)^n`, lexicographic.
    pub indices: Vec<Vec<i64>>,
    pub matrix: MatrixOverRing,
}

fn multi_indices(n: usize, q: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

fn power_product(ring: &Ring, ys: &[Polynomial], j: &[i64]) -> Result<Polynomial> {
    let mut acc = Polynomial::one(ring);
    for (y, &k) in ys.iter().zip(j) {
        acc = acc.checked_mul(&y.pow(k as u64)?)?;
    }
    Ok(acc)
}

fn check_budget(ring: &Ring, e: u32) -> Result<i64> {
    let q = ring.modulus().power(e)?;
    if ring.n_fiber() > MAX_XI_VARS || q > MAX_XI_Q {
        return Err(Error::Budget(format!(
            "Frobenius jacobian limited to {MAX_XI_VARS} fiber variables and q <= {MAX_XI_Q}, got {} and q = {q}",
            ring.n_fiber()
        )));
    }
    Ok(q)
}

/// Decomposes every `y^j` along the coordinate p-basis.
pub fn frobenius_jacobian(ring: &Ring, new: &[Polynomial], e: u32) -> Result<FrobJacobian> {
    check_candidate(ring, new)?;
    let q = check_budget(ring, e)?;
    let n = ring.n_fiber();
    let indices = multi_indices(n, q);
    let size = indices.len();
    let mode = if ring.n_base() > 0 {
        Mode::Relative
    } else {
        Mode::Absolute
    };
    let mut cols: Vec<Vec<Polynomial>> = Vec::with_capacity(size);
    for j in &indices {
        let yj = power_product(ring, new, j)?;
        let d = decompose(&yj, e, mode)?;
        let mut col = Vec::with_capacity(size);
        for i in &indices {
            let entry = match d.component(i) {
                None => Polynomial::zero(ring),
                Some(Component::Absolute(g)) => g.frob(e)?,
                Some(Component::Relative(pairs)) => {
                    let mut s = Polynomial::zero(ring);
                    for (sj, rj) in pairs {
                        s = &s + &sj.frob(e)?.checked_mul(&embed_base(rj, ring)?)?;
                    }
                    s
                }
            };
            col.push(entry);
        }
        // recomposition: Σ_i Ξ_{ij} x^i = y^j
        let mut back = Polynomial::zero(ring);
        for (i, entry) in indices.iter().zip(&col) {
            let mut shift = vec![0i64; ring.arity()];
            for (v, &k) in ring.fiber_range().zip(i) {
                shift[v] = k;
            }
            back = &back + &entry.mul_term(&Monomial::from_exps(&shift), Scalar::ONE)?;
        }
        if back != yj {
            return Err(Error::Internal(format!(
                "Frobenius jacobian column {j:?} does not recompose"
            )));
        }
        cols.push(col);
    }
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for col in &cols {
            entries.push(col[i].clone());
        }
    }
    Ok(FrobJacobian {
        q,
        e,
        indices,
        matrix: MatrixOverRing::new(ring, size, entries)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisValidation {
    pub is_d_basis: bool,
    pub is_p_basis: bool,
}

/// Checks both basis notions. They must agree; a disagreement is reported
/// as an internal error.
pub fn validate_basis(ring: &Ring, new: &[Polynomial]) -> Result<BasisValidation> {
    let det = jacobian(ring, new)?.det()?;
    let is_d_basis = det.is_unit();
    let xi = frobenius_jacobian(ring, new, 1)?;
    let is_p_basis = xi.matrix.det()?.is_unit();
    if is_d_basis != is_p_basis {
        return Err(Error::Internal(format!(
            "d-basis test says {is_d_basis} but p-basis test says {is_p_basis}"
        )));
    }
    Ok(BasisValidation {
        is_d_basis,
        is_p_basis,
    })
}

/// `ξ` read off the top row of `Ξ`: `ξ = Σ_j Ξ_{top,j} · y^{q-1-j}`.
pub fn ratio_from_jacobian(
    ring: &Ring,
    new: &[Polynomial],
    xi: &FrobJacobian,
) -> Result<Polynomial> {
    let top = xi.indices.len() - 1;
    let mut acc = Polynomial::zero(ring);
    for (col, j) in xi.indices.iter().enumerate() {
        let entry = xi.matrix.get(top, col);
        if entry.is_zero() {
            continue;
        }
        let comp: Vec<i64> = j.iter().map(|&k| xi.q - 1 - k).collect();
        acc = &acc + &entry.checked_mul(&power_product(ring, new, &comp)?)?;
    }
    Ok(acc)
}

/// `ξ_e` with `Φ^e_x = Φ^e_y ∘ ξ_e`. Level 1 comes from `Ξ`; higher levels
/// compose `ξ_{e+1} = ξ_1 · frob(ξ_e, 1)`. The result is checked against
/// `det(J)^{p^e - 1}`.
pub fn dual_generator_ratio(ring: &Ring, new: &[Polynomial], e: u32) -> Result<Polynomial> {
    if e == 0 {
        return Err(Error::Precondition("level must be positive".into()));
    }
    let v = validate_basis(ring, new)?;
    if !v.is_p_basis {
        return Err(Error::Precondition("candidate is not a p-basis".into()));
    }
    let xi1 = ratio_from_jacobian(ring, new, &frobenius_jacobian(ring, new, 1)?)?;
    let mut xi = xi1.clone();
    for _ in 1..e {
        xi = xi1.checked_mul(&xi.frob(1)?)?;
    }
    let det = jacobian(ring, new)?.det()?;
    let q = ring.modulus().power(e)?;
    let expected = det.pow((q - 1) as u64)?;
    if xi != expected {
        return Err(Error::Verification(format!(
            "xi = {xi} but det(J)^(q-1) = {expected}"
        )));
    }
    Ok(xi)
}

/// Top row of `Ξ` by differentiation: `(-1)^n ∂_{x_1}^{p-1}⋯∂_{x_n}^{p-1} y^j`.
pub fn top_row_by_derivatives(ring: &Ring, new: &[Polynomial]) -> Result<Vec<Polynomial>> {
    check_candidate(ring, new)?;
    let p = ring.p() as i64;
    let n = ring.n_fiber();
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    multi_indices(n, p)
        .iter()
        .map(|j| {
            let mut f = power_product(ring, new, j)?;
            for v in ring.fiber_range() {
                for _ in 0..p - 1 {
                    f = f.partial_derivative(v);
                }
            }
            Ok(f.scale(ring.modulus().reduce(sign)))
        })
        .collect()
}

/// Square matrix over `𝔽_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarMatrix {
    pub n: usize,
    pub entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn from_values(m: PrimeModulus, n: usize, vals: &[i64]) -> Result<ScalarMatrix> {
        if vals.len() != n * n || n == 0 {
            return Err(Error::Precondition(format!("expected {} entries", n * n)));
        }
        Ok(ScalarMatrix {
            n,
            entries: vals.iter().map(|&v| m.reduce(v)).collect(),
        })
    }

    pub fn identity(n: usize) -> ScalarMatrix {
        let mut entries = vec![Scalar::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Scalar::ONE;
        }
        ScalarMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n)).collect();
        ScalarMatrix { n, entries }
    }

    pub fn mul(&self, other: &ScalarMatrix, m: PrimeModulus) -> ScalarMatrix {
        let n = self.n;
        let mut entries = vec![Scalar::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Scalar::ZERO;
                for k in 0..n {
                    s = m.add(s, m.mul(self.get(i, k), other.get(k, j)));
                }
                entries[i * n + j] = s;
            }
        }
        ScalarMatrix { n, entries }
    }

    /// Determinant by Gaussian elimination over `𝔽_p`.
    pub fn det(&self, m: PrimeModulus) -> Scalar {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Scalar::ONE;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a[r * n + k].is_zero()) else {
                return Scalar::ZERO;
            };
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = m.neg(det);
            }
            let pk = a[k * n + k];
            det = m.mul(det, pk);
            let inv = m.inv(pk).expect("nonzero pivot");
            for r in k + 1..n {
                let f = m.mul(a[r * n + k], inv);
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] = m.sub(a[r * n + c], m.mul(f, a[k * n + c]));
                }
            }
        }
        det
    }
}

/// Matrices with entries in `[0, p-1]` whose rows and columns all sum to
/// `p - 1`.
pub fn admissible_matrices(p: u32, n: usize) -> Vec<Vec<u32>> {
    let target = p - 1;
    let mut out = Vec::new();
    let mut cur = vec![0u32; n * n];
    let mut colsum = vec![0u32; n];
    fill(n, target, 0, 0, 0, &mut cur, &mut colsum, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    n: usize,
    target: u32,
    row: usize,
    col: usize,
    rowsum: u32,
    cur: &mut [u32],
    colsum: &mut [u32],
    out: &mut Vec<Vec<u32>>,
) {
    if row == n {
        if colsum.iter().all(|&c| c == target) {
            out.push(cur.to_vec());
        }
        return;
    }
    if col == n - 1 {
        let v = target - rowsum;
        if colsum[col] + v > target {
            return;
        }
        cur[row * n + col] = v;
        colsum[col] += v;
        fill(n, target, row + 1, 0, 0, cur, colsum, out);
        colsum[col] -= v;
        return;
    }
    let max = (target - rowsum).min(target - colsum[col]);
    for v in 0..=max {
        cur[row * n + col] = v;
        colsum[col] += v;
        fill(n, target, row, col + 1, rowsum + v, cur, colsum, out);
        colsum[col] -= v;
    }
}

/// `(p-1)!^n / Π a_{lk}!` mod p.
pub fn multinomial_weight(m: PrimeModulus, a: &[u32]) -> Scalar {
    let n = (a.len() as f64).sqrt() as usize;
    let top = m.pow(m.factorial(m.p() as u64 - 1), n as u64);
    let denom = a
        .iter()
        .fold(Scalar::ONE, |acc, &x| m.mul(acc, m.factorial(x as u64)));
    m.div(top, denom)
        .expect("factorials below p are invertible")
}

/// Precomputed terms of the `ξ_{p-1}` sum for one `(p, n)`.
pub struct XiOperator {
    m: PrimeModulus,
    n: usize,
    terms: Vec<(Vec<u32>, Scalar)>,
}

impl XiOperator {
    pub fn new(m: PrimeModulus, n: usize) -> XiOperator {
        let terms = admissible_matrices(m.p(), n)
            .into_iter()
            .map(|a| {
                let w = multinomial_weight(m, &a);
                (a, w)
            })
            .filter(|(_, w)| !w.is_zero())
            .collect();
        XiOperator { m, n, terms }
    }

    /// `Σ_a (p-1)!^n/Π a! · Π μ_{lk}^{a_{lk}}` mod p.
    pub fn eval(&self, mu: &ScalarMatrix) -> Scalar {
        assert_eq!(mu.n, self.n);
        let m = self.m;
        let mut acc = Scalar::ZERO;
        for (a, w) in &self.terms {
            let mut t = *w;
            for (k, &x) in a.iter().enumerate() {
                if x > 0 {
                    t = m.mul(t, m.pow(mu.entries[k], x as u64));
                }
            }
            acc = m.add(acc, t);
        }
        acc
    }
}

pub fn xi_operator(mu: &ScalarMatrix, m: PrimeModulus) -> Scalar {
    XiOperator::new(m, mu.n).eval(mu)
}

#[derive(Clone, Copy, Debug)]
pub enum SweepMode {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetIdentityReport {
    pub p: u32,
    pub n: usize,
    pub checked: usize,
    pub passed: usize,
    pub pairs_checked: usize,
    pub pairs_passed: usize,
    pub counterexample: Option<ScalarMatrix>,
}

impl DetIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.checked && self.pairs_passed == self.pairs_checked
    }
}

/// Every invertible `n×n` matrix over `𝔽_p`, in lexicographic order.
pub fn general_linear_group(m: PrimeModulus, n: usize) -> Result<Vec<ScalarMatrix>> {
    let cells = n * n;
    let total = (m.p() as u64)
        .checked_pow(cells as u32)
        .filter(|&t| t <= 50_000_000);
    let Some(total) = total else {
        return Err(Error::Budget(format!(
            "p^(n^2) too large for p = {}, n = {n}",
            m.p()
        )));
    };
    let p = m.p() as u64;
    Ok((0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut entries = vec![Scalar::ZERO; cells];
            for k in (0..cells).rev() {
                entries[k] = Scalar((code % p) as u32);
                code /= p;
            }
            let mu = ScalarMatrix { n, entries };
            (!mu.det(m).is_zero()).then_some(mu)
        })
        .collect())
}

fn random_invertible(m: PrimeModulus, n: usize, rng: &mut ChaCha8Rng) -> ScalarMatrix {
    loop {
        let entries = (0..n * n)
            .map(|_| Scalar(rng.gen_range(0..m.p())))
            .collect();
        let mu = ScalarMatrix { n, entries };
        if !mu.det(m).is_zero() {
            return mu;
        }
    }
}

/// Checks `ξ(μ) = det(μ)^{p-1}` and `ξ(μν) = ξ(μ)ξ(ν)`.
pub fn verify_det_identity(
    m: PrimeModulus,
    n: usize,
    mode: SweepMode,
) -> Result<DetIdentityReport> {
    let op = XiOperator::new(m, n);
    let p1 = m.p() as u64 - 1;
    let ident = |mu: &ScalarMatrix| op.eval(mu) == m.pow(mu.det(m), p1);
    let (mats, pairs): (Vec<ScalarMatrix>, Vec<(ScalarMatrix, ScalarMatrix)>) = match mode {
        SweepMode::Exhaustive => {
            let g = general_linear_group(m, n)?;
            if g.len().checked_mul(g.len()).is_none_or(|s| s > 20_000_000) {
                return Err(Error::Budget("group too large for exhaustive pairs".into()));
            }
            let pairs = g
                .iter()
                .flat_map(|a| g.iter().map(move |b| (a.clone(), b.clone())))
                .collect();
            (g, pairs)
        }
        SweepMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mats: Vec<_> = (0..count)
                .map(|_| random_invertible(m, n, &mut rng))
                .collect();
            let pairs = (0..count)
                .map(|_| {
                    (
                        random_invertible(m, n, &mut rng),
                        random_invertible(m, n, &mut rng),
                    )
                })
                .collect();
            (mats, pairs)
        }
    };
    let failures: Vec<&ScalarMatrix> = mats.par_iter().filter(|mu| !ident(mu)).collect();
    let xi_of: Vec<Scalar> = mats.par_iter().map(|mu| op.eval(mu)).collect();
    let pair_fail: Vec<ScalarMatrix> = pairs
        .par_iter()
        .filter_map(|(a, b)| {
            let ab = a.mul(b, m);
            (op.eval(&ab) != m.mul(op.eval(a), op.eval(b))).then_some(ab)
        })
        .collect();
    let _ = xi_of;
    Ok(DetIdentityReport {
        p: m.p(),
        n,
        checked: mats.len(),
        passed: mats.len() - failures.len(),
        pairs_checked: pairs.len(),
        pairs_passed: pairs.len() - pair_fail.len(),
        counterexample: failures
            .first()
            .map(|mu| (*mu).clone())
            .or_else(|| pair_fail.first().cloned()),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn sign(perm: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombinatorialCheck {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub equal: bool,
}

/// Compares the multinomial side with the signed sum over
/// `b: S_n → [0, p-1]` with `Σ b_σ = p-1` and `Σ b_σ P_σ = a`, where
/// `(P_σ)_{kl} = δ_{l, σ(k)}`.
pub fn combinatorial_identity_check(
    m: PrimeModulus,
    n: usize,
    a: &[u32],
) -> Result<CombinatorialCheck> {
    let target = m.p() - 1;
    if a.len() != n * n || n == 0 {
        return Err(Error::Precondition(format!("expected {} entries", n * n)));
    }
    for i in 0..n {
        let row: u32 = (0..n).map(|j| a[i * n + j]).sum();
        let col: u32 = (0..n).map(|j| a[j * n + i]).sum();
        if row != target || col != target || a.iter().any(|&x| x > target) {
            return Err(Error::Precondition(
                "rows and columns must sum to p - 1".into(),
            ));
        }
    }
    let lhs = multinomial_weight(m, a);
    let perms = permutations(n);
    let top = m.factorial(target as u64);
    let mut rhs = Scalar::ZERO;
    for b in compositions(target, perms.len()) {
        let mut sum = vec![0u32; n * n];
        for (perm, &bs) in perms.iter().zip(&b) {
            for (k, &l) in perm.iter().enumerate() {
                sum[k * n + l] += bs;
            }
        }
        if sum != a {
            continue;
        }
        let denom = b
            .iter()
            .fold(Scalar::ONE, |acc, &x| m.mul(acc, m.factorial(x as u64)));
        let mut t = m.div(top, denom)?;
        for (perm, &bs) in perms.iter().zip(&b) {
            if sign(perm) < 0 && bs % 2 == 1 {
                t = m.neg(t);
            }
        }
        rhs = m.add(rhs, t);
    }
    Ok(CombinatorialCheck {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// `Σ_{j=i}^{p-1} Π_{k=0}^{i-1} (j - k)` mod p for `i = 1, …, p-1`.
pub fn binomial_claim_values(m: PrimeModulus) -> Vec<(u32, Scalar)> {
    let p = m.p();
    (1..p)
        .map(|i| {
            let mut s = Scalar::ZERO;
            for j in i..p {
                let mut prod = Scalar::ONE;
                for k in 0..i {
                    prod = m.mul(prod, m.reduce(j as i64 - k as i64));
                }
                s = m.add(s, prod);
            }
            (i, s)
        })
        .collect()
}

/// True iff the sums vanish for `i ≤ p-2` and equal `-1` for `i = p-1`.
pub fn binomial_claim_holds(m: PrimeModulus) -> bool {
    let p = m.p();
    binomial_claim_values(m).into_iter().all(|(i, v)| {
        if i == p - 1 {
            v == m.reduce(-1)
        } else {
            v.is_zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly_list;

    fn mm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let j = jacobian(&r, &parse_poly_list("x+y, y", &r).unwrap()).unwrap();
        assert_eq!(j.to_string(), "[[1, 1], [0, 1]]");
        let j = jacobian(&r, &parse_poly_list("x+y^2, y", &r).unwrap()).unwrap();
        assert_eq!(j.to_string(), "[[1, 2*y], [0, 1]]");
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let j = jacobian(&l, &parse_poly_list("x^-1", &l).unwrap()).unwrap();
        assert_eq!(j.to_string(), "[[2*x^-2]]");
    }

    #[test]
    fn validation_examples() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let ok = BasisValidation {
            is_d_basis: true,
            is_p_basis: true,
        };
        let bad = BasisValidation {
            is_d_basis: false,
            is_p_basis: false,
        };
        assert_eq!(
            validate_basis(&r, &parse_poly_list("x, y", &r).unwrap()).unwrap(),
            ok
        );
        assert_eq!(
            validate_basis(&r, &parse_poly_list("x^3, y", &r).unwrap()).unwrap(),
            bad
        );
        assert_eq!(
            validate_basis(&r, &parse_poly_list("x+y^2, y", &r).unwrap()).unwrap(),
            ok
        );
        let big = Ring::new(5, &["x", "y", "z"]).unwrap();
        let ys = parse_poly_list("x, y, z", &big).unwrap();
        assert!(matches!(validate_basis(&big, &ys), Err(Error::Budget(_))));
    }

    #[test]
    fn frobenius_jacobian_of_shift() {
        let r = Ring::new(3, &["x"]).unwrap();
        let xi = frobenius_jacobian(&r, &parse_poly_list("x+1", &r).unwrap(), 1).unwrap();
        assert_eq!(xi.matrix.to_string(), "[[1, 1, 1], [0, 1, 2], [0, 0, 1]]");
        let id = frobenius_jacobian(&r, &parse_poly_list("x", &r).unwrap(), 1).unwrap();
        assert_eq!(id.matrix.to_string(), "[[1, 0, 0], [0, 1, 0], [0, 0, 1]]");
    }

    #[test]
    fn frobenius_jacobian_of_inverse() {
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let xi = frobenius_jacobian(&l, &parse_poly_list("x^-1", &l).unwrap(), 1).unwrap();
        assert_eq!(
            xi.matrix.to_string(),
            "[[1, 0, 0], [0, 0, x^-3], [0, x^-3, 0]]"
        );
    }

    #[test]
    fn ratio_examples() {
        let l = Ring::new(3, &["x"]).unwrap().with_laurent(true);
        let xi = dual_generator_ratio(&l, &parse_poly_list("x^-1", &l).unwrap(), 1).unwrap();
        assert_eq!(xi.to_string(), "x^-4");
        let r = Ring::new(3, &["x", "y"]).unwrap();
        assert!(
            dual_generator_ratio(&r, &parse_poly_list("x+y, y", &r).unwrap(), 1)
                .unwrap()
                .is_one()
        );
        assert!(
            dual_generator_ratio(&r, &parse_poly_list("x, y", &r).unwrap(), 1)
                .unwrap()
                .is_one()
        );
    }

    #[test]
    fn xi_operator_examples() {
        let m = mm(3);
        assert_eq!(xi_operator(&ScalarMatrix::identity(2), m), Scalar::ONE);
        for c in 1..5 {
            let m5 = mm(5);
            let d = ScalarMatrix::from_values(m5, 3, &[c, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
            assert_eq!(xi_operator(&d, m5), m5.pow(m5.reduce(c), 4));
        }
        let mu = ScalarMatrix::from_values(m, 2, &[1, 1, 1, 2]).unwrap();
        assert_eq!(xi_operator(&mu, m), Scalar::ONE);
    }

    #[test]
    fn identity_holds_on_singular_matrices_too() {
        let m = mm(3);
        let op = XiOperator::new(m, 2);
        for code in 0..81u32 {
            let v: Vec<i64> = (0..4).map(|k| ((code / 3u32.pow(k)) % 3) as i64).collect();
            let mu = ScalarMatrix::from_values(m, 2, &v).unwrap();
            assert_eq!(op.eval(&mu), m.pow(mu.det(m), 2));
            assert_eq!(op.eval(&mu), op.eval(&mu.transpose()));
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(general_linear_group(mm(3), 2).unwrap().len(), 48);
        assert_eq!(general_linear_group(mm(2), 3).unwrap().len(), 168);
    }

    #[test]
    fn combinatorial_examples() {
        let m = mm(3);
        for a in [[2, 0, 0, 2], [1, 1, 1, 1], [0, 2, 2, 0]] {
            let c = combinatorial_identity_check(m, 2, &a).unwrap();
            assert_eq!(c.lhs, Scalar::ONE);
            assert!(c.equal);
        }
        assert!(combinatorial_identity_check(m, 2, &[2, 1, 0, 1]).is_err());
    }

    #[test]
    fn binomial_claim_small() {
        for p in [3u64, 5, 7, 11] {
            assert!(binomial_claim_holds(mm(p)));
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let r = Ring::new(5, &["x", "y"]).unwrap();
        let e = parse_poly_list("x+1, y, 2, x*y, y^2+x, 3, 1, x, y+4", &r).unwrap();
        let m = MatrixOverRing::new(&r, 3, e.clone()).unwrap();
        let g = |i: usize| &e[i];
        let cof = &(&(g(0) * &(&(g(4) * g(8)) - &(g(5) * g(7))))
            - &(g(1) * &(&(g(3) * g(8)) - &(g(5) * g(6)))))
            + &(g(2) * &(&(g(3) * g(7)) - &(g(4) * g(6))));
        assert_eq!(m.det().unwrap(), cof);
    }
}
