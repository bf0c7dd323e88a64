//! Exact linear algebra over the integers and GF(p): modular rank, Smith
//! normal form, fraction-free and modular determinants, and the randomized
//! determinant-gcd full-rank certificate with small-prime exclusion.

use crate::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// A sparse integer matrix: dimensions plus nonzero entries in row-major
/// order. Entries are arbitrary-precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: u32,
    cols: u32,
    entries: Vec<(u32, u32, BigInt)>,
}

impl IntMatrix {
    pub fn new(rows: u32, cols: u32, mut entries: Vec<(u32, u32, BigInt)>) -> Result<Self> {
        entries.retain(|(_, _, v)| !v.is_zero());
        for &(r, c, _) in &entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "entry ({},{}) outside {}x{}",
                    r, c, rows, cols
                )));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: u32, cols: u32) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len() as u32;
        let c = rows.first().map_or(0, |x| x.len()) as u32;
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(move |(j, &v)| (i as u32, j as u32, BigInt::from(v)))
            })
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let n = values.len() as u32;
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, &v)| (i as u32, i as u32, BigInt::from(v)))
            .collect();
        IntMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn identity(n: u32) -> Self {
        IntMatrix::diagonal(&vec![1; n as usize])
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn entries(&self) -> &[(u32, u32, BigInt)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols as usize]; self.rows as usize];
        for (r, c, v) in &self.entries {
            m[*r as usize][*c as usize] = v.clone();
        }
        m
    }

    /// Row-submatrix given by 0-based row indices, in the given order.
    pub fn select_rows(&self, rows: &[u32]) -> IntMatrix {
        let map: std::collections::HashMap<u32, u32> = rows
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let entries = self
            .entries
            .iter()
            .filter_map(|(r, c, v)| map.get(r).map(|&nr| (nr, *c, v.clone())))
            .collect();
        let mut m = IntMatrix {
            rows: rows.len() as u32,
            cols: self.cols,
            entries,
        };
        m.entries.sort_by_key(|&(r, c, _)| (r, c));
        m
    }

    /// Writes the text format: `rows cols M`, one `r c v` line per nonzero
    /// entry (1-based), terminated by `0 0 0`.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} M", self.rows, self.cols)?;
        for (r, c, v) in &self.entries {
            writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
        }
        writeln!(w, "0 0 0")
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<IntMatrix> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty matrix file".into()))?
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut it = header.split_whitespace();
        let rows: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput("bad header".into()))?;
        let cols: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput("bad header".into()))?;
        if it.next() != Some("M") {
            return Err(Error::InvalidInput("bad header tag".into()));
        }
        let mut entries = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::InvalidInput(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let r: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput("bad entry line".into()))?;
            let c: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput("bad entry line".into()))?;
            let v: BigInt = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidInput("bad entry value".into()))?;
            if r == 0 && c == 0 && v.is_zero() {
                return IntMatrix::new(rows, cols, entries);
            }
            if r == 0 || c == 0 {
                return Err(Error::InvalidInput("entry indices are 1-based".into()));
            }
            entries.push((r - 1, c - 1, v));
        }
        Err(Error::InvalidInput("missing 0 0 0 terminator".into()))
    }
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    // deterministic witness set for 64-bit integers
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

fn reduce_mod(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let mut r = v % &m;
    if r.sign() == Sign::Minus {
        r += &m;
    }
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Rank of the matrix read over GF(p), by modular Gaussian elimination.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{} is not prime", p)));
    }
    let mut rows = vec![vec![0u64; m.cols as usize]; m.rows as usize];
    for (r, c, v) in m.entries() {
        rows[*r as usize][*c as usize] = reduce_mod(v, p);
    }
    Ok(rank_mod_p_rows(&mut rows, p))
}

fn rank_mod_p_rows(rows: &mut [Vec<u64>], p: u64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = crate::ring::GFp::new(p).inv(rows[rank][col]);
        for j in col..ncols {
            rows[rank][j] = mulmod(rows[rank][j], inv);
        }
        for i in 0..nrows {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in col..ncols {
                    let sub = mulmod(f, rows[rank][j]);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Smith normal form: the elementary divisors d1 | d2 | ..., padded with
/// zeros to min(rows, cols). Refuses matrices above the entry budget.
pub fn smith_normal_form(m: &IntMatrix, budget: Option<usize>) -> Result<Vec<BigInt>> {
    let budget = budget.unwrap_or(250_000);
    let size = m.rows as usize * m.cols as usize;
    if size > budget {
        return Err(Error::Budget(format!(
            "matrix has {} cells, budget is {}; use the randomized determinant-gcd certificate",
            size, budget
        )));
    }
    let mut a = m.to_dense();
    let (nr, nc) = (m.rows as usize, m.cols as usize);
    let mut divisors: Vec<BigInt> = Vec::new();
    let mut t = 0usize;
    'outer: while t < nr.min(nc) {
        // Shrink phase: move the smallest nonzero entry of the trailing
        // submatrix to (t,t) and, while some entry in its row or column is
        // not a multiple of it, replace that entry by its remainder. The
        // minimum strictly decreases, so this terminates, and reducing only
        // against the current global minimum keeps entries from blowing up.
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if !a[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'outer;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut reduced = false;
            for i in t + 1..nr {
                if !(&a[i][t] % &a[t][t]).is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..nc {
                        let sub = &q * &a[t][j];
                        a[i][j] -= sub;
                    }
                    reduced = true;
                    break;
                }
            }
            if reduced {
                continue;
            }
            for j in t + 1..nc {
                if !(&a[t][j] % &a[t][t]).is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..nr {
                        let sub = &q * &a[i][t];
                        a[i][j] -= sub;
                    }
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                break;
            }
        }
        // Elimination phase: every quotient is now exact, so one pass clears
        // column t, after which row t is cleared by exact column operations
        // (rows above t already have zeros in column t, so only row t moves).
        for i in t + 1..nr {
            if !a[i][t].is_zero() {
                let q = &a[i][t] / &a[t][t];
                for j in t..nc {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
            }
        }
        for j in t + 1..nc {
            a[t][j] = BigInt::zero();
        }
        // enforce divisibility of the remaining submatrix by the pivot
        let mut fixed = false;
        'scan: for i in t + 1..nr {
            for j in t + 1..nc {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // add row i to row t and redo this pivot
                    for j2 in t..nc {
                        let add = a[i][j2].clone();
                        a[t][j2] += add;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        divisors.push(a[t][t].abs());
        t += 1;
    }
    while divisors.len() < nr.min(nc) {
        divisors.push(BigInt::zero());
    }
    Ok(divisors)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::InvalidInput("determinant of non-square matrix".into()));
    }
    let n = m.rows as usize;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_dense();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact division
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(if sign == 1 {
        a[n - 1][n - 1].clone()
    } else {
        -a[n - 1][n - 1].clone()
    })
}

fn det_mod_p(m: &IntMatrix, p: u64) -> u64 {
    let n = m.rows as usize;
    let f = crate::ring::GFp::new(p);
    let mut rows = vec![vec![0u64; n]; n];
    for (r, c, v) in m.entries() {
        rows[*r as usize][*c as usize] = reduce_mod(v, p);
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut det = 1u64;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&i| rows[i][k] != 0) else {
            return 0;
        };
        if pivot != k {
            rows.swap(k, pivot);
            det = (p - det) % p;
        }
        det = mulmod(det, rows[k][k]);
        let inv = f.inv(rows[k][k]);
        for i in k + 1..n {
            if rows[i][k] != 0 {
                let factor = mulmod(rows[i][k], inv);
                for j in k..n {
                    let sub = mulmod(factor, rows[k][j]);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
    }
    det
}

/// Primes just below 2^62, found by downward search.
fn crt_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut cand = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(cand) {
            out.push(cand);
        }
        cand -= 2;
    }
    out
}

/// Exact determinant by Chinese remaindering against a Hadamard bound.
pub fn det_modular(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::InvalidInput("determinant of non-square matrix".into()));
    }
    let n = m.rows as usize;
    if n == 0 {
        return Ok(BigInt::one());
    }
    // Hadamard bound: product of row Euclidean norms, bounded via squares
    let mut bound_sq = BigInt::one();
    let dense = m.to_dense();
    for row in &dense {
        let norm_sq: BigInt = row.iter().map(|v| v * v).sum();
        if norm_sq.is_zero() {
            return Ok(BigInt::zero());
        }
        bound_sq *= norm_sq;
    }
    let bound = bound_sq.sqrt() + 1;
    let needed: BigInt = &bound * 2u32 + 1u32;

    let count = (needed.bits() / 61 + 2) as usize;
    let mut modulus = BigInt::one();
    let mut residue = BigInt::zero();
    let mut prime_iter = crt_primes(count).into_iter();
    while modulus <= needed {
        let p = prime_iter.next().expect("prime supply sized from bound");
        let d = det_mod_p(m, p);
        // CRT combine
        let bp = BigInt::from(p);
        let (g, inv) = {
            let e = modulus.extended_gcd(&bp);
            (e.gcd, e.x)
        };
        debug_assert!(g.is_one());
        let diff = (BigInt::from(d) - &residue) % &bp;
        let mut k = (diff * inv) % &bp;
        if k.sign() == Sign::Minus {
            k += &bp;
        }
        residue += &modulus * k;
        modulus *= &bp;
    }
    // symmetric lift
    residue %= &modulus;
    if residue.sign() == Sign::Minus {
        residue += &modulus;
    }
    if &residue * 2 > modulus {
        residue -= &modulus;
    }
    Ok(residue)
}

/// Exact determinant; Bareiss for small matrices, CRT for larger ones.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::InvalidInput("determinant of non-square matrix".into()));
    }
    if m.rows <= 40 {
        det_bareiss(m)
    } else {
        det_modular(m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DetSample {
    /// 0-based row indices selected for this sample, in selection order.
    pub selected_rows: Vec<u32>,
    /// Exact determinant, decimal.
    pub determinant: String,
    /// |determinant| with all excluded primes divided out, decimal.
    pub residue: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankClaim {
    /// Full column rank over GF(p) for every prime p outside the exclusion
    /// set and the listed exceptions.
    FullColumnRankExcluding { exceptions: Vec<u64> },
    /// Full column rank for every p coprime to the stated gcd (its
    /// factorization was not completed).
    FullColumnRankCoprimeTo { gcd: String },
    /// Could not select full-rank row samples over the probe prime.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrimeException {
    pub prime: u64,
    pub rank: usize,
}

/// Replayable evidence for a full-column-rank claim.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RankCertificate {
    pub method: String,
    pub probe_prime: u64,
    pub seed: u64,
    pub exclude: Vec<u64>,
    pub samples: Vec<DetSample>,
    pub gcd: String,
    pub claim: RankClaim,
    pub prime_exceptions: Vec<PrimeException>,
}

fn strip_primes(mut v: BigInt, primes: &[u64]) -> BigInt {
    v = v.abs();
    for &p in primes {
        let bp = BigInt::from(p);
        while !v.is_zero() && (&v % &bp).is_zero() {
            v /= &bp;
        }
    }
    v
}

/// Trial division then Pollard rho (bounded effort). Returns the prime
/// factors found and a leftover cofactor (1 when fully factored).
pub fn factor_bounded(n: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut primes = Vec::new();
    let mut rest = n.abs();
    if rest.is_one() {
        return (primes, rest);
    }
    let mut d = 2u64;
    while d < 1_000_000 && BigInt::from(d).pow(2) <= rest {
        let bd = BigInt::from(d);
        while (&rest % &bd).is_zero() {
            primes.push(bd.clone());
            rest /= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return (primes, rest);
    }
    let mut stack = vec![rest];
    let mut leftover = BigInt::one();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if miller_rabin_bigint(&m) {
            primes.push(m);
            continue;
        }
        match pollard_rho(&m, 2_000_000) {
            Some(f) => {
                let q = &m / &f;
                stack.push(f);
                stack.push(q);
            }
            None => leftover *= m,
        }
    }
    primes.sort();
    (primes, leftover)
}

fn miller_rabin_bigint(n: &BigInt) -> bool {
    use num_bigint::ToBigInt;
    if let Ok(small) = u64::try_from(n.magnitude().clone()) {
        return is_prime_u64(small);
    }
    let n = n.abs();
    let one = BigInt::one();
    let two = 2.to_bigint().unwrap();
    let nm1 = &n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let ab = BigInt::from(a);
        if ab >= n {
            continue;
        }
        let mut x = ab.modpow(&d, &n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, &n);
            if x == nm1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt, max_iters: u64) -> Option<BigInt> {
    if (n % 2u32).is_zero() {
        return Some(BigInt::from(2));
    }
    for c in 1u64..20 {
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let bc = BigInt::from(c);
        let mut iters = 0u64;
        loop {
            x = (&x * &x + &bc) % n;
            y = (&y * &y + &bc) % n;
            y = (&y * &y + &bc) % n;
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break; // cycle without factor, try next c
            }
            let g = diff.gcd(n);
            if !g.is_one() && &g != n {
                return Some(g);
            }
            iters += 1;
            if iters > max_iters {
                return None;
            }
        }
    }
    None
}

/// The randomized determinant-gcd full-rank certificate: per sample, select
/// `cols` rows independent over the probe prime (scanning rows in a seeded
/// random order), compute the exact determinant, strip the excluded primes,
/// and take the gcd of the residues across samples.
pub fn certify_full_rank_random(
    m: &IntMatrix,
    exclude: &[u64],
    samples: u32,
    seed: u64,
) -> Result<RankCertificate> {
    if !(2..=5).contains(&samples) {
        return Err(Error::InvalidInput("samples must be in 2..=5".into()));
    }
    let n = m.cols;
    if m.rows < n {
        return Err(Error::InvalidInput(
            "matrix must have at least as many rows as columns".into(),
        ));
    }
    let probe_prime = if exclude.contains(&11) {
        let mut p = 2u64;
        while exclude.contains(&p) || !is_prime_u64(p) {
            p += 1;
        }
        p
    } else {
        11
    };

    if n == 0 {
        // empty component: trivially full rank
        return Ok(RankCertificate {
            method: "random-det-gcd".into(),
            probe_prime,
            seed,
            exclude: exclude.to_vec(),
            samples: Vec::new(),
            gcd: "1".into(),
            claim: RankClaim::FullColumnRankExcluding {
                exceptions: Vec::new(),
            },
            prime_exceptions: Vec::new(),
        })
    }

    let mut sample_records = Vec::new();
    let mut residues: Vec<BigInt> = Vec::new();
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
        let mut order: Vec<u32> = (0..m.rows).collect();
        order.shuffle(&mut rng);
        // greedy incremental echelon over GF(probe): reduce each incoming
        // row against the accepted pivots; accept when a new pivot survives
        let p = probe_prime;
        let field = crate::ring::GFp::new(p);
        let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot col, normalized row)
        let mut selected: Vec<u32> = Vec::new();
        let dense_rows = {
            let mut rows = vec![vec![0u64; m.cols as usize]; m.rows as usize];
            for (r, c, v) in m.entries() {
                rows[*r as usize][*c as usize] = reduce_mod(v, p);
            }
            rows
        };
        for &r in &order {
            if selected.len() as u32 == n {
                break;
            }
            let mut row = dense_rows[r as usize].clone();
            for (col, pivot_row) in &pivots {
                if row[*col] != 0 {
                    let f = row[*col];
                    for j in *col..row.len() {
                        let sub = mulmod(f, pivot_row[j]);
                        row[j] = (row[j] + p - sub) % p;
                    }
                }
            }
            if let Some(col) = row.iter().position(|&x| x != 0) {
                let inv = field.inv(row[col]);
                for x in row.iter_mut() {
                    *x = mulmod(*x, inv);
                }
                pivots.push((col, row));
                selected.push(r);
            }
        }
        if selected.len() as u32 != n {
            return Ok(RankCertificate {
                method: "random-det-gcd".into(),
                probe_prime,
                seed,
                exclude: exclude.to_vec(),
                samples: sample_records,
                gcd: "0".into(),
                claim: RankClaim::Inconclusive,
                prime_exceptions: Vec::new(),
            });
        }
        let sub = m.select_rows(&selected);
        let det = det_exact(&sub)?;
        let residue = strip_primes(det.clone(), exclude);
        sample_records.push(DetSample {
            selected_rows: selected,
            determinant: det.to_string(),
            residue: residue.to_string(),
        });
        residues.push(residue);
    }
    let gcd = residues
        .iter()
        .fold(BigInt::zero(), |acc, r| acc.gcd(r));
    let (claim, prime_exceptions) = if gcd.is_one() {
        (
            RankClaim::FullColumnRankExcluding {
                exceptions: Vec::new(),
            },
            Vec::new(),
        )
    } else {
        let (factors, leftover) = factor_bounded(&gcd);
        if !leftover.is_one() {
            (
                RankClaim::FullColumnRankCoprimeTo {
                    gcd: gcd.to_string(),
                },
                Vec::new(),
            )
        } else {
            let mut exceptions = Vec::new();
            let mut uniq = factors.clone();
            uniq.dedup();
            let mut ok = true;
            for f in &uniq {
                match u64::try_from(f.magnitude().clone()) {
                    Ok(p) => {
                        let rank = rank_mod_p(m, p)?;
                        exceptions.push(PrimeException { prime: p, rank });
                    }
                    Err(_) => {
                        ok = false;
                    }
                }
            }
            if ok {
                (
                    RankClaim::FullColumnRankExcluding {
                        exceptions: exceptions.iter().map(|e| e.prime).collect(),
                    },
                    exceptions,
                )
            } else {
                (
                    RankClaim::FullColumnRankCoprimeTo {
                        gcd: gcd.to_string(),
                    },
                    exceptions,
                )
            }
        }
    };
    Ok(RankCertificate {
        method: "random-det-gcd".into(),
        probe_prime,
        seed,
        exclude: exclude.to_vec(),
        samples: sample_records,
        gcd: gcd.to_string(),
        claim,
        prime_exceptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_mod_p_basics() {
        let id = IntMatrix::identity(4);
        assert_eq!(rank_mod_p(&id, 5).unwrap(), 4);
        let d = IntMatrix::diagonal(&[2, 3, 5, 7]);
        assert_eq!(rank_mod_p(&d, 7).unwrap(), 3);
        assert_eq!(rank_mod_p(&d, 11).unwrap(), 4);
        assert!(rank_mod_p(&d, 6).is_err());
    }

    #[test]
    fn snf_textbook_cases() {
        let d = smith_normal_form(&IntMatrix::diagonal(&[2, 4]), None).unwrap();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
        let d = smith_normal_form(&IntMatrix::diagonal(&[2, 3]), None).unwrap();
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
        let d = smith_normal_form(&IntMatrix::zero(3, 2), None).unwrap();
        assert_eq!(d, vec![BigInt::zero(), BigInt::zero()]);
    }

    /// Textbook 2x2 oracle: d1 = gcd of entries, d1*d2 = |det|.
    #[test]
    fn snf_2x2_oracle() {
        let cases = [[[2i64, 1], [1, 1]], [[4, 6], [2, 8]], [[0, 5], [5, 0]]];
        for c in cases {
            let m = IntMatrix::from_dense(&[c[0].to_vec(), c[1].to_vec()]);
            let divs = smith_normal_form(&m, None).unwrap();
            let entries: Vec<BigInt> = c.iter().flatten().map(|&v| BigInt::from(v)).collect();
            let g = entries.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
            let det = (BigInt::from(c[0][0]) * c[1][1] - BigInt::from(c[0][1]) * c[1][0]).abs();
            assert_eq!(divs[0], g);
            assert_eq!(&divs[0] * &divs[1], det);
        }
    }

    #[test]
    fn det_small() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::from(1));
        let m = IntMatrix::from_dense(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(1));
    }

    #[test]
    fn det_bareiss_matches_modular_on_random_50x50() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<Vec<i64>> = (0..50)
            .map(|_| (0..50).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let m = IntMatrix::from_dense(&rows);
        let modular = det_modular(&m).unwrap();
        let bareiss = det_bareiss(&m).unwrap();
        assert_eq!(modular, bareiss);
        // CRT consistency at 5 independent primes
        for p in [1000003u64, 1000033, 1000037, 1000039, 1000081] {
            let r = det_mod_p(&m, p);
            assert_eq!(reduce_mod(&modular, p), r);
        }
    }

    #[test]
    fn det_row_permutation_sign() {
        let m = IntMatrix::from_dense(&[vec![1, 2, 0], vec![0, 1, 3], vec![2, 0, 1]]);
        let swapped = m.select_rows(&[1, 0, 2]);
        assert_eq!(
            det_exact(&m).unwrap(),
            -det_exact(&swapped).unwrap()
        );
    }

    #[test]
    fn certify_identity() {
        let m = IntMatrix::identity(5);
        let cert = certify_full_rank_random(&m, &[2, 3], 2, 42).unwrap();
        assert_eq!(cert.gcd, "1");
        assert!(matches!(
            cert.claim,
            RankClaim::FullColumnRankExcluding { ref exceptions } if exceptions.is_empty()
        ));
    }

    #[test]
    fn certify_strips_excluded_primes() {
        let m = IntMatrix::diagonal(&[2, 3, 5, 7]);
        let cert = certify_full_rank_random(&m, &[2, 3, 5, 7], 2, 1).unwrap();
        assert_eq!(cert.gcd, "1");
        for s in &cert.samples {
            assert_eq!(s.residue, "1");
            let d: BigInt = s.determinant.parse().unwrap();
            assert_eq!(d.abs(), BigInt::from(210));
        }
    }

    #[test]
    fn certify_reports_prime_exceptions() {
        // a matrix singular exactly at 13: diag(1,1,13) padded with an extra
        // dependent row so rows > cols
        let mut rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 13], vec![0, 0, 13]];
        rows[3] = vec![0, 0, 26];
        let m = IntMatrix::from_dense(&rows);
        let cert = certify_full_rank_random(&m, &[2, 3, 5, 7], 3, 9).unwrap();
        match &cert.claim {
            RankClaim::FullColumnRankExcluding { exceptions } => {
                assert_eq!(exceptions, &vec![13]);
            }
            other => panic!("unexpected claim {:?}", other),
        }
        assert_eq!(cert.prime_exceptions, vec![PrimeException { prime: 13, rank: 2 }]);
    }

    #[test]
    fn certificates_replay_bit_exactly() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<i64>> = (0..12)
            .map(|_| (0..8).map(|_| rng.gen_range(-50..=50)).collect())
            .collect();
        let m = IntMatrix::from_dense(&rows);
        let a = certify_full_rank_random(&m, &[2, 3, 5, 7], 3, 2024).unwrap();
        let b = certify_full_rank_random(&m, &[2, 3, 5, 7], 3, 2024).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = IntMatrix::from_dense(&[vec![0, -3], vec![120, 0], vec![0, 0]]);
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("3 2 M\n"));
        assert!(text.ends_with("0 0 0\n"));
        let back = IntMatrix::read_text(&buf[..]).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn factor_bounded_handles_large_prime_products() {
        // three large primes
        let n: BigInt = BigInt::from(529908013u64)
            * BigInt::from(1765553401u64)
            * BigInt::from(11899028767u64);
        let (factors, leftover) = factor_bounded(&n);
        assert!(leftover.is_one());
        let fs: Vec<u64> = factors
            .iter()
            .map(|f| u64::try_from(f.magnitude().clone()).unwrap())
            .collect();
        assert_eq!(fs, vec![529908013, 1765553401, 11899028767]);
    }

    #[test]
    fn prime_testing() {
        assert!(is_prime_u64(11));
        assert!(is_prime_u64(529908013));
        assert!(is_prime_u64(1765553401));
        assert!(is_prime_u64(11899028767));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
    }
}
