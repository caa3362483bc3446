//! Range verification driver: every `n` is checked independently against
//! all cross-oracle invariants, then results are merged in `n` order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::covering_map::top_degree_multiplier;
use crate::error::{Error, Result};
use crate::gcd_spectrum::{
    ank_closed_form, ank_from_bnk, bnk_bruteforce, bnk_closed_form, no_integer_in_interval_check,
    strict_inequality_check, BnkTable,
};
use crate::report::{witness, Check, CheckTally, VerifyPayload, Witness};
use crate::torsion_ring::{
    baum_browder_orders, chow_primary_decomposition, schubert_quotient_oracle, theta_orders,
    JRingPresentation,
};
use crate::valuation::factorize;

pub const DEFAULT_INEQ_BOUND: u64 = 500;

/// Check names, in reporting order.
pub const CHECK_NAMES: [&str; 10] = [
    "closed_form_matches_bruteforce",
    "schubert_matches_bruteforce",
    "spectral_matches_bruteforce",
    "multipliers_integral",
    "multiplier_product",
    "multipliers_closed_form",
    "strict_valuation_inequality",
    "primary_decomposition_crt",
    "top_degree_multiplier",
    "theta_order",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub from: u64,
    pub to: u64,
    pub workers: usize,
    /// The strict-inequality sweep only runs for `n <= ineq_bound`.
    pub ineq_bound: u64,
    /// Corrupts the closed-form table at this `n`. Test hook for exercising
    /// the failure path.
    pub fault: Option<u64>,
}

impl VerifyConfig {
    pub fn new(from: u64, to: u64) -> Self {
        Self { from, to, workers: 1, ineq_bound: DEFAULT_INEQ_BOUND, fault: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRecord {
    pub n: u64,
    pub checks: Vec<Check>,
}

impl NRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub records: Vec<NRecord>,
}

impl VerifySummary {
    pub fn verified(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn failures(&self) -> u64 {
        self.records.iter().filter(|r| !r.passed()).count() as u64
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.records.iter().flat_map(|r| &r.checks).find(|c| !c.pass)
    }

    pub fn tallies(&self) -> Vec<CheckTally> {
        let mut counts: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
        for c in self.records.iter().flat_map(|r| &r.checks) {
            let slot = counts.entry(c.name.as_str()).or_default();
            if c.pass {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        CHECK_NAMES
            .iter()
            .filter_map(|&name| {
                counts.get(name).map(|&(passed, failed)| CheckTally {
                    name: name.to_string(),
                    passed,
                    failed,
                })
            })
            .collect()
    }

    /// One aggregated check per name, carrying the first failing witness.
    pub fn aggregated_checks(&self) -> Vec<Check> {
        self.tallies()
            .into_iter()
            .map(|t| {
                let first = self
                    .records
                    .iter()
                    .flat_map(|r| &r.checks)
                    .find(|c| c.name == t.name && !c.pass);
                match first {
                    None => Check::pass(&t.name),
                    Some(c) => c.clone(),
                }
            })
            .collect()
    }

    pub fn payload(&self) -> VerifyPayload {
        VerifyPayload {
            verified: self.verified(),
            failures: self.failures(),
            ineq_bound: self.config.ineq_bound,
            tallies: self.tallies(),
        }
    }
}

fn table_mismatch(n: u64, expected: &[u64], found: &[u64]) -> Option<Witness> {
    if expected.len() != found.len() {
        return Some(witness([("n", n), ("len", found.len() as u64)]));
    }
    (1u64..)
        .zip(expected.iter().zip(found))
        .find(|(_, (e, f))| e != f)
        .map(|(k, (&e, &f))| witness([("n", n), ("k", k), ("expected", e), ("found", f)]))
}

fn route_check(name: &str, n: u64, brute: &BnkTable, other: Result<Vec<u64>>) -> Check {
    let failure = match other {
        Ok(values) => table_mismatch(n, brute.values(), &values),
        Err(_) => Some(witness([("n", n)])),
    };
    Check::from_witness(name, failure)
}

fn strict_inequality_failure(n: u64) -> Result<Option<Witness>> {
    let f = factorize(n)?;
    for pp in f.entries() {
        let p = pp.prime;
        for s in 1..=pp.exponent {
            let ps = p.pow(s);
            for k in 1..ps {
                if !strict_inequality_check(n, p, s, k)? {
                    return Ok(Some(witness([("n", n), ("p", p), ("s", s.into()), ("k", k)])));
                }
            }
            let mut j = s + 1;
            while p.checked_pow(j - 1).is_some_and(|v| v <= n) {
                if !no_integer_in_interval_check(n, p, s, j)? {
                    return Ok(Some(witness([("n", n), ("p", p), ("s", s.into()), ("j", j.into())])));
                }
                j += 1;
            }
        }
    }
    Ok(None)
}

/// Runs every check for a single `n`.
pub fn verify_n(n: u64, cfg: &VerifyConfig) -> NRecord {
    let mut checks = Vec::new();
    let brute = match bnk_bruteforce(n) {
        Ok(t) => t,
        Err(_) => {
            checks.push(Check::fail("closed_form_matches_bruteforce", witness([("n", n)])));
            return NRecord { n, checks };
        }
    };

    let closed = bnk_closed_form(n).map(|t| {
        let mut v = t.values().to_vec();
        if cfg.fault == Some(n) {
            *v.last_mut().expect("n >= 2") += 1;
        }
        v
    });
    checks.push(route_check("closed_form_matches_bruteforce", n, &brute, closed));
    checks.push(route_check(
        "schubert_matches_bruteforce",
        n,
        &brute,
        schubert_quotient_oracle(n).map(|t| t.values().to_vec()),
    ));
    checks.push(route_check(
        "spectral_matches_bruteforce",
        n,
        &brute,
        baum_browder_orders(n).map(|t| t.values().to_vec()),
    ));

    let a = ank_from_bnk(&brute);
    let raw_ratios: Vec<(u64, u64, u64)> = brute
        .values()
        .windows(2)
        .zip(2u64..)
        .map(|(w, k)| (k, w[0], w[1]))
        .collect();
    let non_integral = raw_ratios.iter().find(|(_, prev, cur)| *cur == 0 || prev % cur != 0);
    checks.push(Check::from_witness(
        "multipliers_integral",
        non_integral.map(|&(k, _, _)| witness([("n", n), ("k", k)])),
    ));
    let product: Option<u64> = raw_ratios
        .iter()
        .try_fold(1u64, |acc, &(_, prev, cur)| (cur != 0).then(|| acc.saturating_mul(prev / cur)));
    checks.push(Check::from_witness(
        "multiplier_product",
        (product != Some(n)).then(|| witness([("n", n), ("product", product.unwrap_or(0))])),
    ));
    let closed_a = ank_closed_form(n);
    let form_failure = match (&a, &closed_a) {
        (Ok(a), Ok(c)) => table_mismatch(n, c.values(), a.values()).map(|mut w| {
            // table_mismatch counts from 1; a-tables start at k = 2
            if let Some(k) = w.get_mut("k") {
                *k += 1;
            }
            w
        }),
        _ => Some(witness([("n", n)])),
    };
    checks.push(Check::from_witness("multipliers_closed_form", form_failure));

    if n <= cfg.ineq_bound {
        let failure = strict_inequality_failure(n).unwrap_or_else(|_| Some(witness([("n", n)])));
        checks.push(Check::from_witness("strict_valuation_inequality", failure));
    }

    let crt = chow_primary_decomposition(n).map(|d| {
        d.crt_mismatch(&brute).map(|k| {
            witness([
                ("n", n),
                ("k", k),
                ("expected", brute.get(k).unwrap_or(0)),
                ("found", d.order_in_degree(k)),
            ])
        })
    });
    checks.push(Check::from_witness(
        "primary_decomposition_crt",
        crt.unwrap_or_else(|_| Some(witness([("n", n)]))),
    ));

    let top = top_degree_multiplier(n);
    checks.push(Check::from_witness(
        "top_degree_multiplier",
        match top {
            Ok(m) if m == n => None,
            Ok(m) => Some(witness([("n", n), ("found", m)])),
            Err(_) => Some(witness([("n", n)])),
        },
    ));

    let theta_failure = match &a {
        Ok(a) => {
            let ring = JRingPresentation::from_table(&brute);
            (2u64..).zip(theta_orders(&ring)).find_map(|(k, o)| {
                let expected = a.get(k).unwrap_or(0);
                (o != expected)
                    .then(|| witness([("n", n), ("k", k), ("expected", expected), ("found", o)]))
            })
        }
        Err(_) => Some(witness([("n", n)])),
    };
    checks.push(Check::from_witness("theta_order", theta_failure));

    NRecord { n, checks }
}

/// Verifies every `n` in `from..=to` on `workers` threads. Records come
/// back in `n` order regardless of scheduling.
pub fn verify_range(cfg: &VerifyConfig) -> Result<VerifySummary> {
    if cfg.from < 2 || cfg.from > cfg.to {
        return Err(Error::Domain(format!(
            "invalid range {}..={}: need 2 <= from <= to",
            cfg.from, cfg.to
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::Domain(e.to_string()))?;
    let records = pool.install(|| {
        (cfg.from..=cfg.to)
            .into_par_iter()
            .map(|n| verify_n(n, cfg))
            .collect::<Vec<_>>()
    });
    Ok(VerifySummary { config: cfg.clone(), records })
}
