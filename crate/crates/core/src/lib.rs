//! Arithmetic invariants of the covering `SU(n) -> PSU(n)`.
//!
//! * [`valuation`]: factorization, p-adic orders, binomials, Legendre sums.
//! * [`gcd_spectrum`]: `b_{n,k}`, `a_{n,k}` and the prime-power partition.
//! * [`torsion_ring`]: arithmetic in `J_n(ω)` and its primary decomposition.
//! * [`covering_map`]: the induced map on square-free monomials.
//! * [`verify`]: the cross-oracle range driver behind `psu-torsion verify`.

pub mod cli;
pub mod covering_map;
pub mod error;
pub mod gcd_spectrum;
pub mod report;
pub mod torsion_ring;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
