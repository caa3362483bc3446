//! Exact integer arithmetic: primality, factorization, p-adic orders,
//! binomial coefficients and Legendre's formula for `ord_p(n!)`.
//!
//! Indices (`n`, `k`, primes) are machine integers; anything that can grow
//! past 64 bits (binomial coefficients, generic arguments of `ord`) is a
//! [`Natural`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

/// Largest input accepted by [`factorize`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn require_at_least(what: &'static str, value: u64, min: u64) -> Result<()> {
    if value < min {
        Err(Error::TooSmall { what, value, min })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// `n = p_1^{r_1} ... p_t^{r_t}` with `p_1 < ... < p_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    entries: Vec<PrimePower>,
}

impl Factorization {
    /// Validates that primes are strictly increasing, each is prime and
    /// each exponent is positive.
    pub fn new(entries: Vec<PrimePower>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyList);
        }
        for pp in &entries {
            require_prime(pp.prime)?;
            if pp.exponent == 0 {
                return Err(Error::Domain(format!("zero exponent on prime {}", pp.prime)));
            }
        }
        if entries.windows(2).any(|w| w[0].prime >= w[1].prime) {
            return Err(Error::Domain("primes must be strictly increasing".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[PrimePower] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|pp| pp.prime)
    }

    /// Exponent of `p` in the factored integer (0 if `p` does not divide it).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.entries
            .iter()
            .find(|pp| pp.prime == p)
            .map_or(0, |pp| pp.exponent)
    }

    pub fn reconstruct(&self) -> Natural {
        self.entries
            .iter()
            .map(|pp| Natural::from(pp.prime).pow(pp.exponent))
            .product()
    }

    pub fn is_prime_power(&self) -> bool {
        self.entries.len() == 1
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, pp) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if pp.exponent == 1 {
                write!(f, "{}", pp.prime)?;
            } else {
                write!(f, "{}^{}", pp.prime, pp.exponent)?;
            }
        }
        Ok(())
    }
}

/// Trial division, with the input capped at [`DEFAULT_FACTOR_BOUND`].
pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_bounded(n, DEFAULT_FACTOR_BOUND)
}

pub fn factorize_bounded(n: u64, bound: u64) -> Result<Factorization> {
    require_at_least("n", n, 2)?;
    if n > bound {
        return Err(Error::BoundExceeded { value: n, bound });
    }
    let mut rest = n;
    let mut entries = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut exponent = 0;
            while rest % d == 0 {
                rest /= d;
                exponent += 1;
            }
            entries.push(PrimePower { prime: d, exponent });
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        entries.push(PrimePower { prime: rest, exponent: 1 });
    }
    Ok(Factorization { entries })
}

/// Largest `a` with `p^a | m`.
pub fn ord(m: &Natural, p: u64) -> Result<u64> {
    require_prime(p)?;
    if m.is_zero() {
        return Err(Error::ZeroOrder);
    }
    let mut m = m.clone();
    let mut a = 0;
    loop {
        let (q, r) = m.div_rem(&Natural::from(p));
        if !r.is_zero() {
            return Ok(a);
        }
        m = q;
        a += 1;
    }
}

/// [`ord`] for machine-sized arguments.
pub fn ord_u64(mut m: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut a = 0;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    Ok(a)
}

/// `ord_p(gcd(ms))`, evaluated both as the order of the gcd and as the
/// minimum of the individual orders. Disagreement is reported as
/// [`Error::Inconsistent`].
pub fn ord_gcd(ms: &[Natural], p: u64) -> Result<u64> {
    require_prime(p)?;
    let (first, rest) = ms.split_first().ok_or(Error::EmptyList)?;
    let g = rest.iter().fold(first.clone(), |g, m| g.gcd(m));
    let via_gcd = ord(&g, p)?;
    let via_min = ms
        .iter()
        .map(|m| ord(m, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("nonempty");
    if via_gcd != via_min {
        return Err(Error::Inconsistent(format!(
            "ord_{p}(gcd) = {via_gcd} but min of orders = {via_min}"
        )));
    }
    Ok(via_gcd)
}

/// `ord_p(n!) = sum_{k >= 1} floor(n / p^k)`, summed while `p^k <= n`.
pub fn legendre_factorial_order(n: u64, p: u64) -> Result<u64> {
    require_prime(p)?;
    let mut total = 0;
    let mut pk = p;
    while pk <= n {
        total += n / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    Ok(total)
}

/// Exact `C(n, k)` by the multiplicative recurrence
/// `C(n, j) = C(n, j - 1) * (n - j + 1) / j`.
pub fn binomial(n: u64, k: u64) -> Result<Natural> {
    if k > n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    let k = k.min(n - k);
    let mut c = Natural::one();
    for j in 1..=k {
        c *= n - j + 1;
        c /= j;
    }
    Ok(c)
}

/// Iterator over `C(n, 0), C(n, 1), ..., C(n, n)` sharing one running value.
pub fn binomial_row(n: u64) -> impl Iterator<Item = Natural> {
    let mut c = Natural::one();
    (0..=n).map(move |j| {
        if j > 0 {
            c *= n - j + 1;
            c /= j;
        }
        c.clone()
    })
}

/// `ord_p(C(n, k)) = ord_p(n!) - ord_p(k!) - ord_p((n - k)!)`.
pub fn ord_binomial(n: u64, k: u64, p: u64) -> Result<u64> {
    if k > n {
        return Err(Error::IndexOutOfRange { n, k });
    }
    Ok(legendre_factorial_order(n, p)?
        - legendre_factorial_order(k, p)?
        - legendre_factorial_order(n - k, p)?)
}

/// [`ord_binomial`] cross-checked against the direct valuation of `C(n, k)`.
pub fn ord_binomial_checked(n: u64, k: u64, p: u64) -> Result<u64> {
    let via_legendre = ord_binomial(n, k, p)?;
    let direct = ord(&binomial(n, k)?, p)?;
    if via_legendre != direct {
        return Err(Error::Inconsistent(format!(
            "ord_{p}(C({n},{k})): Legendre gives {via_legendre}, direct gives {direct}"
        )));
    }
    Ok(direct)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorInequality {
    pub holds: bool,
    pub strict: bool,
}

/// Compares `floor(x) + floor(y)` against `m + n` for positive rationals
/// with `x + y = m + n`. The inequality must be strict whenever `x` or `y`
/// is not an integer.
pub fn floor_inequality_holds(
    x: &BigRational,
    y: &BigRational,
    m: u64,
    n: u64,
) -> Result<FloorInequality> {
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::Domain("x and y must be positive".into()));
    }
    let target = BigInt::from(m) + BigInt::from(n);
    if x + y != BigRational::from_integer(target.clone()) {
        return Err(Error::Domain(format!("x + y = {} but m + n = {target}", x + y)));
    }
    let lhs = x.floor().to_integer() + y.floor().to_integer();
    Ok(FloorInequality { holds: lhs <= target, strict: lhs < target })
}

/// `m mod d` without allocating.
pub fn mod_small(m: &Natural, d: u64) -> u64 {
    let d = u128::from(d);
    m.iter_u64_digits()
        .rev()
        .fold(0u128, |r, digit| ((r << 64) | u128::from(digit)) % d) as u64
}

#[cfg(test)]
pub(crate) fn to_u64(n: &Natural) -> u64 {
    num_traits::ToPrimitive::to_u64(n).expect("value fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn pascal_row(n: usize) -> Vec<Natural> {
        let mut row = vec![nat(1)];
        for _ in 0..n {
            let mut next = vec![nat(1); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    fn naive_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut d = 2;
        while n > 1 {
            while n % d == 0 {
                match out.last_mut() {
                    Some((p, e)) if *p == d => *e += 1,
                    _ => out.push((d, 1)),
                }
                n /= d;
            }
            d += 1;
        }
        out
    }

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.entries().iter().map(|pp| (pp.prime, pp.exponent)).collect()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(pairs(&factorize(12).unwrap()), vec![(2, 2), (3, 1)]);
        assert_eq!(pairs(&factorize(7).unwrap()), vec![(7, 1)]);
        assert_eq!(pairs(&factorize(360).unwrap()), naive_factor(360));
        assert_eq!(pairs(&factorize(360).unwrap()), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(12).unwrap().to_string(), "2^2 · 3");
    }

    #[test]
    fn factorize_rejects_small_and_oversized() {
        assert!(matches!(factorize(1), Err(Error::TooSmall { .. })));
        assert!(matches!(factorize(0), Err(Error::TooSmall { .. })));
        assert!(matches!(
            factorize(DEFAULT_FACTOR_BOUND + 1),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(factorize_bounded(DEFAULT_FACTOR_BOUND + 7, u64::MAX).is_ok());
    }

    #[test]
    fn factorization_constructor_checks_invariants() {
        let pp = |prime, exponent| PrimePower { prime, exponent };
        assert!(Factorization::new(vec![pp(2, 1), pp(3, 2)]).is_ok());
        assert!(Factorization::new(vec![pp(3, 1), pp(2, 1)]).is_err());
        assert!(Factorization::new(vec![pp(4, 1)]).is_err());
        assert!(Factorization::new(vec![pp(2, 0)]).is_err());
        assert!(Factorization::new(vec![]).is_err());
    }

    #[test]
    fn ord_examples() {
        assert_eq!(ord(&nat(12), 2).unwrap(), 2);
        assert_eq!(ord(&nat(7), 2).unwrap(), 0);
        assert_eq!(ord(&nat(1 << 30), 2).unwrap(), 30);
        assert_eq!(ord(&nat(0), 2), Err(Error::ZeroOrder));
        assert_eq!(ord(&nat(12), 4), Err(Error::NotPrime(4)));
        assert_eq!(ord_u64(0, 3), Err(Error::ZeroOrder));
    }

    #[test]
    fn ord_gcd_examples() {
        assert_eq!(ord_gcd(&[nat(12), nat(66)], 2).unwrap(), 1);
        assert_eq!(ord_gcd(&[nat(8)], 2).unwrap(), 3);
        assert_eq!(ord_gcd(&[nat(3), nat(5)], 2).unwrap(), 0);
        assert_eq!(ord_gcd(&[], 2), Err(Error::EmptyList));
        assert_eq!(ord_gcd(&[nat(3), nat(0)], 2), Err(Error::ZeroOrder));
    }

    #[test]
    fn legendre_examples() {
        let oracle = |n: u64, p| (1..=n).map(|i| ord_u64(i, p).unwrap()).sum::<u64>();
        assert_eq!(oracle(10, 2), 8);
        assert_eq!(oracle(9, 3), 4);
        assert_eq!(legendre_factorial_order(10, 2).unwrap(), 8);
        assert_eq!(legendre_factorial_order(9, 3).unwrap(), 4);
        assert_eq!(legendre_factorial_order(0, 5).unwrap(), 0);
        assert_eq!(legendre_factorial_order(10, 6), Err(Error::NotPrime(6)));
        assert_eq!(legendre_factorial_order(u64::MAX, 2).unwrap(), u64::MAX - 64);
    }

    #[test]
    fn binomial_examples() {
        let row = pascal_row(12);
        assert_eq!(row[4], nat(495));
        assert_eq!(binomial(12, 4).unwrap(), row[4]);
        assert_eq!(binomial(40, 0).unwrap(), nat(1));
        assert_eq!(binomial(40, 1).unwrap(), nat(40));
        assert_eq!(binomial(3, 4), Err(Error::IndexOutOfRange { n: 3, k: 4 }));
        assert_eq!(mod_small(&binomial(200, 100).unwrap(), 997), to_u64(&(binomial(200, 100).unwrap() % 997u64)));
        assert_eq!(mod_small(&nat(0), 7), 0);
        let row60 = pascal_row(60);
        assert_eq!(binomial_row(60).collect::<Vec<_>>(), row60);
    }

    #[test]
    fn binomial_handles_large_arguments() {
        let c = binomial(5000, 2500).unwrap();
        // C(2m, m) lies between 4^m / (2m + 1) and 4^m.
        assert!(c.bits() > 5000 - 13 && c.bits() <= 5000);
        assert_eq!(ord(&c, 2).unwrap(), ord_binomial(5000, 2500, 2).unwrap());
    }

    #[test]
    fn ord_binomial_examples() {
        assert_eq!(ord_binomial(12, 2, 2).unwrap(), 1);
        assert_eq!(ord_binomial(8, 4, 2).unwrap(), 1);
        assert_eq!(ord_binomial(9, 0, 3).unwrap(), 0);
        assert_eq!(ord_binomial_checked(12, 2, 2).unwrap(), 1);
        assert!(ord_binomial(3, 5, 2).is_err());
    }

    #[test]
    fn floor_inequality_examples() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let v = floor_inequality_holds(&r(3, 2), &r(5, 2), 1, 3).unwrap();
        assert_eq!(v, FloorInequality { holds: true, strict: true });
        let v = floor_inequality_holds(&r(2, 1), &r(2, 1), 1, 3).unwrap();
        assert_eq!(v, FloorInequality { holds: true, strict: false });
        let v = floor_inequality_holds(&r(7, 3), &r(5, 3), 2, 2).unwrap();
        assert_eq!(v, FloorInequality { holds: true, strict: true });
        assert!(floor_inequality_holds(&r(1, 2), &r(1, 2), 1, 1).is_err());
        assert!(floor_inequality_holds(&r(0, 1), &r(2, 1), 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn ord_shifts_by_one_under_multiplication(m in 1u64..1_000_000, pi in 0usize..6, qi in 0usize..6) {
            let primes = [2u64, 3, 5, 7, 11, 13];
            let (p, q) = (primes[pi], primes[qi]);
            let base = ord_u64(m, p).unwrap();
            prop_assert_eq!(ord_u64(m * p, p).unwrap(), base + 1);
            if p != q {
                prop_assert_eq!(ord_u64(m * q, p).unwrap(), base);
            }
        }

        #[test]
        fn factorize_reconstructs(n in 2u64..5_000_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.reconstruct(), nat(n));
            let again = Factorization::new(f.entries().to_vec()).unwrap();
            prop_assert_eq!(factorize(to_u64(&again.reconstruct())).unwrap(), again);
        }

        #[test]
        fn floor_inequality_random(m in 0u64..1000, n in 0u64..1000, num in 1u64..1_000_000, den in 1u64..1000) {
            let total = m + n;
            prop_assume!(total > 0);
            // x = total * num / (den * 1_000_000 + 1) stays inside (0, total)
            let x = BigRational::new(
                BigInt::from(total) * BigInt::from(num),
                BigInt::from(den) * BigInt::from(1_000_000u64) + 1,
            );
            let y = BigRational::from_integer(BigInt::from(total)) - &x;
            let v = floor_inequality_holds(&x, &y, m, n).unwrap();
            prop_assert!(v.holds);
            if !x.is_integer() {
                prop_assert!(v.strict);
            }
        }
    }
}
