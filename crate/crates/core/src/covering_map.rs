//! Free exterior part of the cohomology of `SU(n)` and `PSU(n)`, and the
//! map induced by the covering on square-free monomials:
//! `c*(ζ_{2r-1}) = a_{n,r} ξ_{2r-1}`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcd_spectrum::{ank_closed_form, AnkTable};
use crate::valuation::require_at_least;

/// Square-free monomial indexed by `I ⊆ {2..n}`. The same index set names
/// `ζ_I` on `PSU(n)` and `ξ_I` on `SU(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExteriorMonomial {
    n: u64,
    indices: Vec<u64>,
}

impl ExteriorMonomial {
    /// Sorts `indices`; rejects repeats and anything outside `[2, n]`.
    pub fn new(n: u64, mut indices: Vec<u64>) -> Result<Self> {
        require_at_least("n", n, 2)?;
        indices.sort_unstable();
        if let Some(&k) = indices.iter().find(|&&k| !(2..=n).contains(&k)) {
            return Err(Error::IndexOutOfRange { n, k });
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("index {} repeated in a square-free monomial", w[0])));
        }
        Ok(Self { n, indices })
    }

    pub fn unit(n: u64) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// `{2, ..., n}`, the top class.
    pub fn full(n: u64) -> Result<Self> {
        Self::new(n, (2..=n).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// `Σ_{r ∈ I} (2r - 1)`.
    pub fn degree(&self) -> u64 {
        self.indices.iter().map(|r| 2 * r - 1).sum()
    }

    /// Union of disjoint index sets; `None` when they overlap (the product
    /// vanishes in the exterior ring).
    pub fn disjoint_union(&self, other: &Self) -> Option<Self> {
        if self.n != other.n || self.indices.iter().any(|i| other.indices.contains(i)) {
            return None;
        }
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        indices.sort_unstable();
        Some(Self { n: self.n, indices })
    }
}

impl std::fmt::Display for ExteriorMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", idx.join(", "))
    }
}

/// Integer combination of square-free monomials; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeClass {
    n: u64,
    terms: BTreeMap<ExteriorMonomial, BigInt>,
}

impl FreeClass {
    pub fn zero(n: u64) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(n: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExteriorMonomial, BigInt)>,
    {
        let mut class = Self::zero(n);
        for (m, c) in terms {
            class.add_term(m, c)?;
        }
        Ok(class)
    }

    pub fn add_term(&mut self, monomial: ExteriorMonomial, coefficient: BigInt) -> Result<()> {
        if monomial.n != self.n {
            return Err(Error::RingMismatch { left: self.n, right: monomial.n });
        }
        let slot = self.terms.entry(monomial).or_insert_with(BigInt::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ExteriorMonomial, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, m: &ExteriorMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The induced map on free parts, determined by its multipliers `a_{n,r}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CstarMap {
    multipliers: AnkTable,
}

impl CstarMap {
    pub fn new(multipliers: AnkTable) -> Self {
        Self { multipliers }
    }

    /// Multipliers from the closed form for `a_{n,k}`.
    pub fn for_n(n: u64) -> Result<Self> {
        Ok(Self::new(ank_closed_form(n)?))
    }

    pub fn n(&self) -> u64 {
        self.multipliers.n()
    }

    pub fn multipliers(&self) -> &AnkTable {
        &self.multipliers
    }

    /// `c*(ζ_I) = (Π_{r ∈ I} a_{n,r}) ξ_I`.
    pub fn cstar_monomial(&self, m: &ExteriorMonomial) -> Result<(u64, ExteriorMonomial)> {
        if m.n != self.n() {
            return Err(Error::RingMismatch { left: self.n(), right: m.n });
        }
        let coefficient = m
            .indices
            .iter()
            .map(|&r| self.multipliers.get(r).ok_or(Error::IndexOutOfRange { n: m.n, k: r }))
            .product::<Result<u64>>()?;
        Ok((coefficient, m.clone()))
    }

    pub fn cstar_class(&self, x: &FreeClass) -> Result<FreeClass> {
        if x.n != self.n() {
            return Err(Error::RingMismatch { left: self.n(), right: x.n });
        }
        let mut image = FreeClass::zero(x.n);
        for (m, c) in &x.terms {
            let (mult, target) = self.cstar_monomial(m)?;
            image.add_term(target, c * BigInt::from(mult))?;
        }
        Ok(image)
    }
}

/// Multiplier of the top class `ζ_2 ⋯ ζ_n`; equals the mapping degree `n`.
pub fn top_degree_multiplier(n: u64) -> Result<u64> {
    let map = CstarMap::for_n(n)?;
    Ok(map.cstar_monomial(&ExteriorMonomial::full(n)?)?.0)
}

/// Number of square-free monomials over `{2..n}`: each index doubles the
/// count of subsets.
pub fn free_rank(n: u64) -> Result<BigUint> {
    require_at_least("n", n, 2)?;
    Ok((2..=n).fold(BigUint::one(), |count, _| &count + &count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupVariant {
    SU,
    U,
}

fn multiply_by_binomial(poly: &mut Vec<BigUint>, shift: usize) {
    poly.resize(poly.len() + shift, BigUint::zero());
    for d in (shift..poly.len()).rev() {
        let lower = poly[d - shift].clone();
        poly[d] += lower;
    }
}

/// Coefficients by degree of `Π_{r=2..n} (1 + t^{2r-1})`, times `(1 + t)`
/// for `U(n)`.
pub fn poincare_polynomial(n: u64, variant: GroupVariant) -> Result<Vec<BigUint>> {
    require_at_least("n", n, 2)?;
    let mut poly = vec![BigUint::one()];
    for r in 2..=n {
        multiply_by_binomial(&mut poly, (2 * r - 1) as usize);
    }
    if variant == GroupVariant::U {
        multiply_by_binomial(&mut poly, 1);
    }
    Ok(poly)
}
