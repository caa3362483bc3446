//! The binomial-gcd sequence `b_{n,k} = gcd(C(n,1), ..., C(n,k))`, the
//! covering multipliers `a_{n,k} = b_{n,k-1} / b_{n,k}`, and the prime-power
//! partition `{2..n} = Q_0(n) ⊔ Q_{p_1}(n) ⊔ ... ⊔ Q_{p_t}(n)`.
//!
//! Every table has a brute-force constructor (straight from the gcd
//! definition) and a closed-form constructor (from the factorization of
//! `n` alone). The two are kept independent so they can check each other.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::{
    factorize, legendre_factorial_order, mod_small, require_at_least, require_prime, Factorization,
    Natural,
};

/// `b_{n,k}` for `k = 1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BnkTable {
    n: u64,
    b: Vec<u64>,
}

impl BnkTable {
    /// Checks `b_{n,1} = n`, `b_{n,n} = 1` and `b_{n,k} | b_{n,k-1}`.
    pub fn new(n: u64, b: Vec<u64>) -> Result<Self> {
        require_at_least("n", n, 2)?;
        if b.len() as u64 != n {
            return Err(Error::Inconsistent(format!(
                "b-table for n = {n} has {} entries",
                b.len()
            )));
        }
        if b[0] != n || b[b.len() - 1] != 1 {
            return Err(Error::Inconsistent(format!(
                "b-table for n = {n} must start at n and end at 1"
            )));
        }
        if let Some(k) = (1..b.len()).find(|&i| b[i] == 0 || b[i - 1] % b[i] != 0) {
            return Err(Error::Inconsistent(format!(
                "b_{{{n},{}}} = {} does not divide b_{{{n},{}}} = {}",
                k + 1,
                b[k],
                k,
                b[k - 1]
            )));
        }
        Ok(Self { n, b })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `b_{n,k}` for `1 <= k <= n`.
    pub fn get(&self, k: u64) -> Option<u64> {
        (1..=self.n).contains(&k).then(|| self.b[(k - 1) as usize])
    }

    /// Entries in order `k = 1..=n`.
    pub fn values(&self) -> &[u64] {
        &self.b
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (1..).zip(self.b.iter().copied())
    }
}

/// `a_{n,k}` for `k = 2..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnkTable {
    n: u64,
    a: Vec<u64>,
}

impl AnkTable {
    /// Checks positivity, `prod a_{n,k} = n` and that each entry is 1 or a
    /// prime divisor of `n`.
    pub fn new(n: u64, a: Vec<u64>) -> Result<Self> {
        require_at_least("n", n, 2)?;
        if a.len() as u64 != n - 1 {
            return Err(Error::Inconsistent(format!(
                "a-table for n = {n} has {} entries",
                a.len()
            )));
        }
        let factors = factorize(n)?;
        for (k, &v) in (2..).zip(&a) {
            if v != 1 && factors.exponent_of(v) == 0 {
                return Err(Error::Inconsistent(format!(
                    "a_{{{n},{k}}} = {v} is neither 1 nor a prime factor of {n}"
                )));
            }
        }
        let product = a.iter().try_fold(1u64, |acc, &v| acc.checked_mul(v));
        if product != Some(n) {
            return Err(Error::Inconsistent(format!(
                "product of a-table for n = {n} is not n"
            )));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `a_{n,k}` for `2 <= k <= n`.
    pub fn get(&self, k: u64) -> Option<u64> {
        (2..=self.n).contains(&k).then(|| self.a[(k - 2) as usize])
    }

    /// Entries in order `k = 2..=n`.
    pub fn values(&self) -> &[u64] {
        &self.a
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (2..).zip(self.a.iter().copied())
    }

    pub fn product(&self) -> u64 {
        self.a.iter().product()
    }
}

/// Which block of the partition of `{2..n}` an index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    Q0,
    Prime(u64),
}

impl std::fmt::Display for Block {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Block::Q0 => f.write_str("Q0"),
            Block::Prime(p) => write!(f, "Q{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerBlock {
    pub prime: u64,
    pub members: BTreeSet<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerPartition {
    pub n: u64,
    pub q0: BTreeSet<u64>,
    pub blocks: Vec<PrimePowerBlock>,
}

impl PrimePowerPartition {
    /// `None` outside `2..=n`.
    pub fn block_of(&self, k: u64) -> Option<Block> {
        if !(2..=self.n).contains(&k) {
            return None;
        }
        Some(
            self.blocks
                .iter()
                .find(|b| b.members.contains(&k))
                .map_or(Block::Q0, |b| Block::Prime(b.prime)),
        )
    }
}

/// Running gcd of `C(n,1), ..., C(n,k)` computed on the full Pascal row.
pub fn bnk_bruteforce(n: u64) -> Result<BnkTable> {
    require_at_least("n", n, 2)?;
    let mut b = Vec::with_capacity(n as usize);
    let mut g = n;
    let mut c = Natural::from(n);
    b.push(g);
    for k in 2..=n {
        if g > 1 {
            c *= n - k + 1;
            c /= k;
            g = g.gcd(&mod_small(&c, g));
        }
        b.push(g);
    }
    BnkTable::new(n, b)
}

/// Largest `l` with `p^l <= k`, capped at `cap`.
pub(crate) fn capped_log(p: u64, k: u64, cap: u32) -> u32 {
    let mut l = 0;
    let mut pl = p;
    while l < cap && pl <= k {
        l += 1;
        pl = pl.saturating_mul(p);
    }
    l
}

/// `b_{n,k} = prod_i p_i^{r_i - l(i,k)}` where `l(i,k) = r_i` once
/// `k >= p_i^{r_i}` and otherwise `p_i^{l} <= k < p_i^{l+1}`.
pub fn bnk_closed_form(n: u64) -> Result<BnkTable> {
    let f = factorize(n)?;
    BnkTable::new(n, bnk_values_from_factorization(&f, n))
}

pub(crate) fn bnk_values_from_factorization(f: &Factorization, n: u64) -> Vec<u64> {
    (1..=n)
        .map(|k| {
            f.entries()
                .iter()
                .map(|pp| pp.prime.pow(pp.exponent - capped_log(pp.prime, k, pp.exponent)))
                .product()
        })
        .collect()
}

/// `a_{n,k} = b_{n,k-1} / b_{n,k}`.
pub fn ank_from_bnk(t: &BnkTable) -> Result<AnkTable> {
    let a = t
        .values()
        .windows(2)
        .zip(2u64..)
        .map(|(w, k)| {
            if w[0] % w[1] != 0 {
                Err(Error::Inconsistent(format!(
                    "b_{{{},{}}} does not divide b_{{{},{}}}",
                    t.n,
                    k,
                    t.n,
                    k - 1
                )))
            } else {
                Ok(w[0] / w[1])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AnkTable::new(t.n, a)
}

/// `a_{n,k} = p` for `k ∈ Q_p(n)` and `1` for `k ∈ Q_0(n)`.
pub fn ank_closed_form(n: u64) -> Result<AnkTable> {
    let part = partition(n)?;
    let a = (2..=n)
        .map(|k| match part.block_of(k) {
            Some(Block::Prime(p)) => p,
            _ => 1,
        })
        .collect();
    AnkTable::new(n, a)
}

pub fn partition(n: u64) -> Result<PrimePowerPartition> {
    let f = factorize(n)?;
    let blocks: Vec<PrimePowerBlock> = f
        .entries()
        .iter()
        .map(|pp| PrimePowerBlock {
            prime: pp.prime,
            members: (1..=pp.exponent).map(|r| pp.prime.pow(r)).collect(),
        })
        .collect();
    let q0 = (2..=n)
        .filter(|k| !blocks.iter().any(|b| b.members.contains(k)))
        .collect();
    Ok(PrimePowerPartition { n, q0, blocks })
}

fn require_prime_power_index(n: u64, p: u64, s: u32) -> Result<u64> {
    require_at_least("n", n, 2)?;
    require_prime(p)?;
    let r = crate::valuation::ord_u64(n, p)?;
    if r == 0 {
        return Err(Error::Domain(format!("{p} does not divide {n}")));
    }
    if s == 0 || u64::from(s) > r {
        return Err(Error::Domain(format!(
            "s = {s} must satisfy 1 <= s <= {r} = ord_{p}({n})"
        )));
    }
    Ok(p.pow(s))
}

/// Evaluates `ord_p(p^s! (n - p^s)!) > ord_p(k! (n - k)!)` via Legendre sums,
/// for `p^r ∥ n`, `1 <= s <= r` and `1 <= k < p^s`.
pub fn strict_inequality_check(n: u64, p: u64, s: u32, k: u64) -> Result<bool> {
    let ps = require_prime_power_index(n, p, s)?;
    if k == 0 || k >= ps {
        return Err(Error::Domain(format!("k = {k} must satisfy 1 <= k < {ps}")));
    }
    let lhs = legendre_factorial_order(ps, p)? + legendre_factorial_order(n - ps, p)?;
    let rhs = legendre_factorial_order(k, p)? + legendre_factorial_order(n - k, p)?;
    Ok(lhs > rhs)
}

/// True when the open interval `((n - p^s)/p^j, n/p^j)` contains no integer.
/// Requires `p^s | n` and `j > s`.
pub fn no_integer_in_interval_check(n: u64, p: u64, s: u32, j: u32) -> Result<bool> {
    let ps = require_prime_power_index(n, p, s)?;
    if j <= s {
        return Err(Error::Domain(format!("j = {j} must exceed s = {s}")));
    }
    let Some(pj) = p.checked_pow(j) else {
        // p^j > n: the interval sits inside (0, 1)
        return Ok(true);
    };
    // an integer m lies strictly inside iff floor((n-1)/p^j) > floor((n-p^s)/p^j)
    Ok((n - 1) / pj == (n - ps) / pj)
}

/// `floor((n - p^s)/p^j) = floor((n - k)/p^j)` for `j > s`, `1 <= k < p^s`.
pub fn floor_shift_check(n: u64, p: u64, s: u32, j: u32, k: u64) -> Result<bool> {
    let ps = require_prime_power_index(n, p, s)?;
    if j <= s {
        return Err(Error::Domain(format!("j = {j} must exceed s = {s}")));
    }
    if k == 0 || k >= ps {
        return Err(Error::Domain(format!("k = {k} must satisfy 1 <= k < {ps}")));
    }
    let Some(pj) = p.checked_pow(j) else {
        return Ok(true);
    };
    Ok((n - ps) / pj == (n - k) / pj)
}
