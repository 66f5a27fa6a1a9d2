//! Exact point counts of `C_r(N_n)` over small prime fields `F_q`.
//!
//! Two independent counters: full enumeration of every `r`-tuple of
//! matrices, and a pruned count that enumerates nilpotent matrices once and
//! walks joint centralizers with bitsets. Both enforce a hard work budget.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::field::{is_prime_u64, Field, PrimeField};
use crate::mat::Mat;

/// Default cap on enumerated matrices: admits `n <= 3` for `q <= 3` and
/// `n = 4` for `q = 2`.
pub const DEFAULT_BUDGET: u128 = 1 << 16;

/// Largest matrix size the packed representation holds.
pub const MAX_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountMethod {
    FullEnumeration,
    CentralizerPruned,
}

impl CountMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CountMethod::FullEnumeration => "full-enumeration",
            CountMethod::CentralizerPruned => "centralizer-pruned",
        }
    }
}

/// A small matrix over `F_q`, row-major, `n <= 4`, `q < 256`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqMat {
    n: u8,
    e: [u8; 16],
}

impl FqMat {
    fn zero(n: usize) -> Self {
        Self { n: n as u8, e: [0; 16] }
    }

    /// The matrix whose entries are the base-`q` digits of `index`
    /// (entry 0 least significant).
    fn from_index(n: usize, q: u64, mut index: u64) -> Self {
        let mut m = Self::zero(n);
        for k in 0..n * n {
            m.e[k] = (index % q) as u8;
            index /= q;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n() + j]
    }

    pub fn entries(&self) -> &[u8] {
        &self.e[..self.n() * self.n()]
    }

    fn mul(&self, o: &Self, q: u32) -> Self {
        let n = self.n();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    acc += self.e[i * n + k] as u32 * o.e[k * n + j] as u32;
                }
                out.e[i * n + j] = (acc % q) as u8;
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    fn is_nilpotent(&self, q: u32) -> bool {
        let mut p = *self;
        for _ in 1..self.n() {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self, q);
        }
        p.is_zero()
    }

    fn commutes(&self, o: &Self, q: u32) -> bool {
        self.mul(o, q) == o.mul(self, q)
    }

    /// The same matrix over `F_q` as a [`Mat`]; needs `q > 2`.
    pub fn to_mat(&self, q: u64) -> Result<Mat<PrimeField>> {
        let f = PrimeField::new(q)?;
        let n = self.n();
        Mat::from_vec(&f, n, n, self.entries().iter().map(|&v| f.from_i64(v as i64)).collect())
    }
}

fn check_params(n: usize, q: u64) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidArgument(format!("census supports 1 <= n <= {MAX_N}, got {n}")));
    }
    if q >= 256 || !is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("census needs a prime q < 256, got {q}")));
    }
    Ok(())
}

/// `q^e`, saturating at `u128::MAX`.
fn power(q: u64, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

fn guard(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Every nilpotent `n x n` matrix over `F_q`, in index order. Costs
/// `q^(n^2)` work units.
pub fn enumerate_nilpotent(n: usize, q: u64, budget: u128) -> Result<Vec<FqMat>> {
    check_params(n, q)?;
    let total = power(q, n * n);
    guard(total, budget)?;
    Ok((0..total as u64)
        .map(|i| FqMat::from_index(n, q, i))
        .filter(|m| m.is_nilpotent(q as u32))
        .collect())
}

/// Nilpotent matrices over `F_q` with their commuting relation as bitsets.
#[derive(Clone, Debug)]
pub struct NilpotentCensus {
    n: usize,
    q: u64,
    mats: Vec<FqMat>,
    adj: Vec<Vec<u64>>,
}

impl NilpotentCensus {
    pub fn build(n: usize, q: u64, budget: u128) -> Result<Self> {
        let mats = enumerate_nilpotent(n, q, budget)?;
        let len = mats.len();
        let words = len.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; len];
        for i in 0..len {
            for j in i..len {
                if mats[i].commutes(&mats[j], q as u32) {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Self { n, q, mats, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn len(&self) -> usize {
        self.mats.len()
    }
    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }
    pub fn mats(&self) -> &[FqMat] {
        &self.mats
    }

    /// `|z(x) ∩ N_n(F_q)|` for the `i`-th nilpotent matrix.
    pub fn centralizer_size(&self, i: usize) -> usize {
        self.adj[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Commuting nilpotent `r`-tuples whose first entry has index in `first`.
    pub fn count_with_first(&self, r: usize, first: Range<usize>) -> u128 {
        if r == 0 {
            return 1;
        }
        first
            .map(|i| if r == 1 { 1 } else { self.count_within(r - 1, &self.adj[i]) })
            .sum()
    }

    /// Commuting nilpotent `r`-tuples.
    pub fn count(&self, r: usize) -> u128 {
        self.count_with_first(r, 0..self.len())
    }

    /// Pairwise-commuting `k`-tuples drawn from the set `allowed`.
    fn count_within(&self, k: usize, allowed: &[u64]) -> u128 {
        if k == 1 {
            return allowed.iter().map(|w| w.count_ones() as u128).sum();
        }
        let mut total = 0;
        let mut next = vec![0u64; allowed.len()];
        for (wi, &word) in allowed.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let x = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                for (dst, (a, b)) in next.iter_mut().zip(allowed.iter().zip(&self.adj[x])) {
                    *dst = a & b;
                }
                total += self.count_within(k - 1, &next);
            }
        }
        total
    }
}

/// Work units of a full enumeration: `q^(r n^2)`.
pub fn full_enumeration_cost(n: usize, r: usize, q: u64) -> u128 {
    power(q, r * n * n)
}

/// Full enumeration over every tuple of matrices whose first entry has
/// matrix index in `first`, checking nilpotency and commutation directly.
pub fn count_full_with_first(n: usize, r: usize, q: u64, first: Range<u64>, budget: u128) -> Result<u128> {
    check_params(n, q)?;
    guard(full_enumeration_cost(n, r, q), budget)?;
    if r == 0 {
        return Ok(1);
    }
    let qq = q as u32;
    let per = power(q, n * n) as u64;
    let mut count = 0u128;
    let mut tuple: Vec<FqMat> = vec![FqMat::zero(n); r];
    for a in first {
        tuple[0] = FqMat::from_index(n, q, a);
        if !tuple[0].is_nilpotent(qq) {
            continue;
        }
        count += full_rest(&mut tuple, 1, n, q, per);
    }
    Ok(count)
}

fn full_rest(tuple: &mut [FqMat], depth: usize, n: usize, q: u64, per: u64) -> u128 {
    if depth == tuple.len() {
        return 1;
    }
    let qq = q as u32;
    let mut count = 0;
    for idx in 0..per {
        let m = FqMat::from_index(n, q, idx);
        if !m.is_nilpotent(qq) || !tuple[..depth].iter().all(|x| x.commutes(&m, qq)) {
            continue;
        }
        tuple[depth] = m;
        count += full_rest(tuple, depth + 1, n, q, per);
    }
    count
}

/// Exact `|C_r(N_n)(F_q)|`.
pub fn count_commuting_nilpotent(n: usize, r: usize, q: u64, method: CountMethod, budget: u128) -> Result<u128> {
    match method {
        CountMethod::FullEnumeration => {
            check_params(n, q)?;
            count_full_with_first(n, r, q, 0..power(q, n * n) as u64, budget)
        }
        CountMethod::CentralizerPruned => Ok(NilpotentCensus::build(n, q, budget)?.count(r)),
    }
}
