//! The truncated torsion ring `J_n(ω) = Z[ω] / ⟨b_{n,k} ω^k, 1 <= k <= n⟩`,
//! its primary decomposition into `p`-power pieces, and two further
//! routes to the degreewise orders `b_{n,k}`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcd_spectrum::{bnk_closed_form, capped_log, BnkTable};
use crate::valuation::{
    binomial, binomial_row, factorize, mod_small, ord_binomial, require_at_least,
};

/// Orders of `ω^k` for `k = 1..n-1`; `ω^n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JRingPresentation {
    n: u64,
    orders: Vec<u64>,
}

impl JRingPresentation {
    pub fn from_table(t: &BnkTable) -> Self {
        let mut orders = t.values().to_vec();
        orders.pop();
        Self { n: t.n(), orders }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Order of `ω^k`; 1 for `k >= n`.
    pub fn order_of_omega_power(&self, k: u64) -> u64 {
        match k {
            0 => 0,
            k if k < self.n => self.orders[(k - 1) as usize],
            _ => 1,
        }
    }

    /// Orders for `k = 1..n-1`.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }
}

pub fn presentation(n: u64) -> Result<JRingPresentation> {
    Ok(JRingPresentation::from_table(&bnk_closed_form(n)?))
}

/// Additive order of a ring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

/// `c0 + c_1 ω + ... + c_{n-1} ω^{n-1}` with `0 <= c_k < b_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JRingElement {
    ring: Arc<JRingPresentation>,
    c0: BigInt,
    coeffs: Vec<u64>,
}

fn residue(c: &BigInt, modulus: u64) -> u64 {
    c.mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue below a u64 modulus")
}

impl JRingElement {
    pub fn zero(ring: &Arc<JRingPresentation>) -> Self {
        Self {
            ring: Arc::clone(ring),
            c0: BigInt::zero(),
            coeffs: vec![0; ring.orders.len()],
        }
    }

    pub fn one(ring: &Arc<JRingPresentation>) -> Self {
        Self::from_coefficients(ring, BigInt::from(1), &[])
    }

    /// `c · ω^k`, reduced. `k >= n` gives zero.
    pub fn monomial(ring: &Arc<JRingPresentation>, k: u64, c: &BigInt) -> Self {
        let mut e = Self::zero(ring);
        if k == 0 {
            e.c0 = c.clone();
        } else if k < ring.n {
            e.coeffs[(k - 1) as usize] = residue(c, ring.order_of_omega_power(k));
        }
        e
    }

    /// Builds `c0 + Σ coeffs[i] ω^{i+1}`, reducing each coefficient and
    /// discarding degrees `>= n`.
    pub fn from_coefficients(ring: &Arc<JRingPresentation>, c0: BigInt, coeffs: &[BigInt]) -> Self {
        let mut e = Self::zero(ring);
        e.c0 = c0;
        for (slot, (c, &order)) in e.coeffs.iter_mut().zip(coeffs.iter().zip(&ring.orders)) {
            *slot = residue(c, order);
        }
        e
    }

    pub fn ring(&self) -> &Arc<JRingPresentation> {
        &self.ring
    }

    pub fn n(&self) -> u64 {
        self.ring.n
    }

    pub fn constant(&self) -> &BigInt {
        &self.c0
    }

    /// Reduced coefficients of `ω^1, ..., ω^{n-1}`.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: u64) -> u64 {
        match k {
            k if k >= 1 && k < self.ring.n => self.coeffs[(k - 1) as usize],
            _ => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring.n != other.ring.n || self.ring.orders != other.ring.orders {
            return Err(Error::RingMismatch { left: self.ring.n, right: other.ring.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(&self.ring.orders)
            .map(|((&a, &b), &m)| ((u128::from(a) + u128::from(b)) % u128::from(m)) as u64)
            .collect();
        Ok(Self { ring: Arc::clone(&self.ring), c0: &self.c0 + &other.c0, coeffs })
    }

    pub fn negate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&self.ring.orders)
            .map(|(&a, &m)| if a == 0 { 0 } else { m - a })
            .collect();
        Self { ring: Arc::clone(&self.ring), c0: -&self.c0, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    /// Integer multiple `m · self`.
    pub fn scale(&self, m: &BigInt) -> Self {
        let coeffs: Vec<BigInt> = self.coeffs.iter().map(|&c| m * BigInt::from(c)).collect();
        Self::from_coefficients(&self.ring, m * &self.c0, &coeffs)
    }

    /// Product with `ω^i ω^j = ω^{i+j}`, truncated at `ω^n = 0`. Each
    /// partial product `c_i d_j` is reduced mod `b_{n,i+j}`, which divides
    /// both `b_{n,i}` and `b_{n,j}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let top = self.coeffs.len();
        let mut out = vec![0u64; top];
        for k in 1..=top {
            let m = u128::from(self.ring.orders[k - 1]);
            let mut acc = u128::from(residue(&self.c0, m as u64)) * u128::from(other.coeffs[k - 1])
                + u128::from(residue(&other.c0, m as u64)) * u128::from(self.coeffs[k - 1]);
            acc %= m;
            for i in 1..k {
                let prod = u128::from(self.coeffs[i - 1]) * u128::from(other.coeffs[k - i - 1]);
                acc = (acc + prod % m) % m;
            }
            out[k - 1] = acc as u64;
        }
        Ok(Self { ring: Arc::clone(&self.ring), c0: &self.c0 * &other.c0, coeffs: out })
    }

    /// Least `m >= 1` with `m · self = 0`: the lcm of the degreewise
    /// orders `b_{n,k} / gcd(c_k, b_{n,k})`, or infinite when `c0 != 0`.
    pub fn element_order(&self) -> ElementOrder {
        if !self.c0.is_zero() {
            return ElementOrder::Infinite;
        }
        let order = self
            .coeffs
            .iter()
            .zip(&self.ring.orders)
            .fold(1u64, |acc, (&c, &m)| acc.lcm(&cyclic_order(c, m)));
        ElementOrder::Finite(order)
    }
}

impl std::fmt::Display for JRingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        if !self.c0.is_zero() {
            terms.push(self.c0.to_string());
        }
        for (k, &c) in (1..).zip(&self.coeffs) {
            match (c, k) {
                (0, _) => {}
                (1, 1) => terms.push("ω".to_string()),
                (1, k) => terms.push(format!("ω^{k}")),
                (c, 1) => terms.push(format!("{c}ω")),
                (c, k) => terms.push(format!("{c}ω^{k}")),
            }
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

fn theta_element(ring: &Arc<JRingPresentation>, k: u64, c: &BigUint) -> JRingElement {
    JRingElement::monomial(ring, k - 1, &BigInt::from(c.clone()))
}

/// `C(n, k) ω^{k-1}` for `2 <= k <= n`.
pub fn theta_image(n: u64, k: u64) -> Result<JRingElement> {
    require_at_least("n", n, 2)?;
    if !(2..=n).contains(&k) {
        return Err(Error::IndexOutOfRange { n, k });
    }
    let ring = Arc::new(presentation(n)?);
    Ok(theta_element(&ring, k, &binomial(n, k)?))
}

/// [`theta_image`] for every `k = 2..=n`, in order, sharing one ring.
pub fn theta_images(ring: &Arc<JRingPresentation>) -> Vec<JRingElement> {
    binomial_row(ring.n)
        .zip(0u64..)
        .skip(2)
        .map(|(c, k)| theta_element(ring, k, &c))
        .collect()
}

/// Additive orders of `C(n, k) ω^{k-1}` for `k = 2..=n`, without
/// materialising the elements.
pub fn theta_orders(ring: &JRingPresentation) -> Vec<u64> {
    let n = ring.n;
    let mut c = BigUint::from(n);
    let mut out = Vec::with_capacity(n.saturating_sub(1) as usize);
    for k in 2..=n {
        c *= n - k + 1;
        c /= k;
        let m = ring.order_of_omega_power(k - 1);
        out.push(cyclic_order(mod_small(&c, m), m));
    }
    out
}

fn cyclic_order(c: u64, m: u64) -> u64 {
    m / c.gcd(&m)
}

/// One relation `coefficient · ω^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub coefficient: u64,
    pub power: u64,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coefficient != 1 {
            write!(f, "{}", self.coefficient)?;
        }
        if self.power == 1 {
            f.write_str("ω")
        } else {
            write!(f, "ω^{}", self.power)
        }
    }
}

/// `Z[ω]^+ / ⟨p^r ω, p^{r-1} ω^p, ..., ω^{p^r}⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimarySummand {
    pub prime: u64,
    pub exponent: u32,
    pub relations: Vec<Relation>,
}

impl PrimarySummand {
    /// Order of `ω^k` in this summand: every relation of power `<= k`
    /// multiplies up into degree `k`, so the order is the gcd of their
    /// coefficients.
    pub fn order_in_degree(&self, k: u64) -> u64 {
        self.relations
            .iter()
            .filter(|r| r.power <= k)
            .fold(0u64, |g, r| g.gcd(&r.coefficient))
    }
}

impl std::fmt::Display for PrimarySummand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(ToString::to_string).collect();
        write!(f, "⟨{}⟩", rels.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryDecomposition {
    pub n: u64,
    pub summands: Vec<PrimarySummand>,
    /// Set for `n = 2`, which the decomposition covers by extension.
    pub extended: bool,
}

impl PrimaryDecomposition {
    /// Product over summands of the order of `ω^k`.
    pub fn order_in_degree(&self, k: u64) -> u64 {
        self.summands.iter().map(|s| s.order_in_degree(k)).product()
    }

    /// Compares the reassembled degreewise orders with `t` for
    /// `k = 1..n-1`, returning the first mismatching `k`.
    pub fn crt_mismatch(&self, t: &BnkTable) -> Option<u64> {
        (1..self.n).find(|&k| Some(self.order_in_degree(k)) != t.get(k))
    }
}

pub fn chow_primary_decomposition(n: u64) -> Result<PrimaryDecomposition> {
    let f = factorize(n)?;
    let summands = f
        .entries()
        .iter()
        .map(|pp| PrimarySummand {
            prime: pp.prime,
            exponent: pp.exponent,
            relations: (0..=pp.exponent)
                .map(|j| Relation {
                    coefficient: pp.prime.pow(pp.exponent - j),
                    power: pp.prime.pow(j),
                })
                .collect(),
        })
        .collect();
    Ok(PrimaryDecomposition { n, summands, extended: n == 2 })
}

/// `p_i^{r_i - l(i,k)}` per prime, for `k = 1..n-1`.
pub fn primary_degree_orders(n: u64) -> Result<Vec<Vec<u64>>> {
    let f = factorize(n)?;
    Ok((1..n)
        .map(|k| {
            f.entries()
                .iter()
                .map(|pp| pp.prime.pow(pp.exponent - capped_log(pp.prime, k, pp.exponent)))
                .collect()
        })
        .collect())
}

/// `E_r = C(n-1, r) - (n-1) C(n-1, r-1)`: the image of the `r`-th
/// elementary symmetric polynomial once `n - 1` variables map to `ω` and
/// one maps to `-(n-1)ω`. Returned for `r = 1..=n`.
pub fn schubert_coefficients(n: u64) -> Result<Vec<BigInt>> {
    require_at_least("n", n, 2)?;
    let row: Vec<BigInt> = binomial_row(n - 1).map(BigInt::from).collect();
    let m = BigInt::from(n - 1);
    Ok((1..=n as usize)
        .map(|r| {
            let upper = row.get(r).cloned().unwrap_or_default();
            upper - &m * &row[r - 1]
        })
        .collect())
}

/// Degreewise orders of `Z[ω]/⟨n ω, E_r ω^r⟩`: order in degree `k` is
/// `gcd(n, |E_1|, ..., |E_k|)`, skipping zero coefficients.
///
/// Streams the row of `C(n-1, r)` and only keeps `E_r` modulo the running
/// gcd; [`schubert_coefficients`] gives the exact values.
pub fn schubert_quotient_oracle(n: u64) -> Result<BnkTable> {
    require_at_least("n", n, 2)?;
    let mut g = n;
    let mut b = Vec::with_capacity(n as usize);
    let mut prev = BigUint::from(1u32);
    for r in 1..=n {
        if g > 1 {
            // C(n-1, r) = C(n-1, r-1) (n-r) / r, and C(n-1, n) = 0
            let mut cur = &prev * (n - r);
            cur /= r;
            // E_r = 0 exactly when C(n-1, r) = (n-1) C(n-1, r-1), i.e. n - r = r (n - 1)
            let is_zero = n - r == r * (n - 1);
            if !is_zero {
                let upper = mod_small(&cur, g);
                let lower = mod_small(&prev, g) * ((n - 1) % g) % g;
                g = g.gcd(&((upper + g - lower) % g));
            }
            prev = cur;
        }
        b.push(g);
    }
    BnkTable::new(n, b)
}

/// Orders surviving in the base column when `C(n, i) α^i` is killed for
/// every `i <= k`: `gcd{C(n, i) : i <= k}`. The gcd divides `C(n, 1) = n`,
/// so it is assembled prime by prime from the minimum Legendre valuation
/// of `C(n, i)` over each prime of `n`.
pub fn baum_browder_orders(n: u64) -> Result<BnkTable> {
    let f = factorize(n)?;
    let mut min_ord: Vec<u64> = f.entries().iter().map(|pp| u64::from(pp.exponent)).collect();
    let mut b = Vec::with_capacity(n as usize);
    for i in 1..=n {
        for (slot, pp) in min_ord.iter_mut().zip(f.entries()) {
            if *slot > 0 {
                *slot = (*slot).min(ord_binomial(n, i, pp.prime)?);
            }
        }
        b.push(
            f.entries()
                .iter()
                .zip(&min_ord)
                .map(|(pp, &e)| pp.prime.pow(e as u32))
                .product(),
        );
    }
    BnkTable::new(n, b)
}
