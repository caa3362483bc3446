//! `psu-torsion` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or domain errors.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::covering_map::{CstarMap, ExteriorMonomial};
use crate::error::{Error, Result};
use crate::gcd_spectrum::{
    ank_closed_form, ank_from_bnk, bnk_bruteforce, bnk_closed_form, partition, BnkTable,
};
use crate::report::{
    witness, Check, CstarPayload, Envelope, FactorPayload, Meta, Range, ReportRecord, Target,
};
use crate::torsion_ring::{baum_browder_orders, chow_primary_decomposition, schubert_quotient_oracle};
use crate::valuation::factorize;
use crate::verify::{verify_range, VerifyConfig, DEFAULT_INEQ_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "psu-torsion", version, about = "Binomial-gcd tables and torsion invariants of SU(n) -> PSU(n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Route used to compute the b-table for `tables`.
    #[arg(long, global = true, value_enum, default_value_t = Oracle::Brute)]
    pub oracle: Oracle,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit the b/a table as CSV (`tables` only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads for `verify`.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Largest n for which `verify` runs the strict-inequality sweep.
    #[arg(long = "ineq-bound", global = true, default_value_t = DEFAULT_INEQ_BOUND)]
    pub ineq_bound: u64,
    /// Append run metadata (version, timing).
    #[arg(long, global = true)]
    pub meta: bool,
    /// Corrupt the closed-form table at this n (exercises the failure path).
    #[arg(long = "inject-fault", global = true, hide = true)]
    pub inject_fault: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prime factorization of n.
    Factor { n: u64 },
    /// b_{n,k}, a_{n,k} and the prime-power block of each k.
    Tables { n: u64 },
    /// Primary decomposition of the torsion ring.
    Chow { n: u64 },
    /// Multiplier of the induced map on a square-free monomial.
    Cstar {
        n: u64,
        /// Index set, e.g. `2,3`, `2..12` or `""` for the unit.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Cross-check every oracle for all n in from..=to.
    Verify { from: u64, to: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Brute,
    Closed,
    Schubert,
    Spectral,
}

impl Oracle {
    pub fn name(self) -> &'static str {
        match self {
            Oracle::Brute => "brute",
            Oracle::Closed => "closed",
            Oracle::Schubert => "schubert",
            Oracle::Spectral => "spectral",
        }
    }

    pub fn table(self, n: u64) -> Result<BnkTable> {
        match self {
            Oracle::Brute => bnk_bruteforce(n),
            Oracle::Closed => bnk_closed_form(n),
            Oracle::Schubert => schubert_quotient_oracle(n),
            Oracle::Spectral => baum_browder_orders(n),
        }
    }
}

/// Rendered output plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Parses `1,3..5,8` style index lists. Empty input is the empty set.
pub fn parse_index_set(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Domain(format!("bad index {s:?}")))
        };
        match part.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    return Err(Error::Domain(format!("empty range {part:?}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse(part)?),
        }
    }
    Ok(out)
}

fn render_set<'a>(items: impl IntoIterator<Item = &'a u64>) -> String {
    let items: Vec<String> = items.into_iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn emit_json(env: &Envelope) -> String {
    let mut s = serde_json::to_string(env).expect("envelope serializes");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payload serializes")
}

fn code_for(checks: &[Check]) -> i32 {
    if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    match dispatch(cli, started) {
        Ok(outcome) => outcome,
        Err(e) => Outcome { stdout: String::new(), code: EXIT_USAGE }.with_error(&e),
    }
}

impl Outcome {
    fn with_error(self, e: &Error) -> Self {
        eprintln!("error: {e}");
        self
    }
}

fn meta(cli: &Cli, started: Instant, workers: Option<usize>) -> Option<Meta> {
    cli.opts.meta.then(|| Meta {
        version: env!("CARGO_PKG_VERSION").to_string(),
        elapsed_ms: started.elapsed().as_millis() as u64,
        workers,
    })
}

fn render_meta(out: &mut String, m: &Option<Meta>) {
    if let Some(m) = m {
        let _ = write!(out, "# psu-torsion {} elapsed {} ms", m.version, m.elapsed_ms);
        if let Some(w) = m.workers {
            let _ = write!(out, " workers {w}");
        }
        out.push('\n');
    }
}

fn dispatch(cli: &Cli, started: Instant) -> Result<Outcome> {
    let opts = &cli.opts;
    if opts.csv && !matches!(cli.command, Command::Tables { .. }) {
        return Err(Error::Domain("--csv is only supported by `tables`".into()));
    }
    match &cli.command {
        Command::Factor { n } => cmd_factor(cli, *n, started),
        Command::Tables { n } => cmd_tables(cli, *n, started),
        Command::Chow { n } => cmd_chow(cli, *n, started),
        Command::Cstar { n, set } => cmd_cstar(cli, *n, set, started),
        Command::Verify { from, to } => cmd_verify(cli, *from, *to, started),
    }
}

fn cmd_factor(cli: &Cli, n: u64, started: Instant) -> Result<Outcome> {
    let f = factorize(n)?;
    let rendered = format!("{n} = {f}");
    let meta = meta(cli, started, None);
    let stdout = if cli.opts.json {
        emit_json(&Envelope {
            command: "factor".into(),
            target: Target::N(n),
            payload: to_value(&FactorPayload { n, factors: f.entries().to_vec(), rendered }),
            checks: Vec::new(),
            meta,
        })
    } else {
        let mut s = format!("{rendered}\n");
        render_meta(&mut s, &meta);
        s
    };
    Ok(Outcome { stdout, code: EXIT_OK })
}

/// Tables and decomposition for `n`, with the b-table taken from `oracle`.
pub fn build_record(n: u64, oracle: Oracle) -> Result<(ReportRecord, Vec<Check>)> {
    let b = oracle.table(n)?;
    let a = ank_from_bnk(&b)?;
    let closed = ank_closed_form(n)?;
    let part = partition(n)?;
    let chow = chow_primary_decomposition(n)?;
    let checks = vec![
        Check::from_witness(
            "multipliers_closed_form",
            a.iter()
                .zip(closed.values())
                .find(|((_, x), y)| x != *y)
                .map(|((k, x), &y)| witness([("n", n), ("k", k), ("expected", y), ("found", x)])),
        ),
        Check::from_witness(
            "primary_decomposition_crt",
            chow.crt_mismatch(&b).map(|k| witness([("n", n), ("k", k)])),
        ),
    ];
    let record = ReportRecord {
        n,
        oracle: oracle.name().to_string(),
        b_table: b.values().to_vec(),
        a_table: a.values().to_vec(),
        partition: part,
        chow_extended: chow.extended,
        chow: chow.summands,
    };
    Ok((record, checks))
}

fn cmd_tables(cli: &Cli, n: u64, started: Instant) -> Result<Outcome> {
    let (record, checks) = build_record(n, cli.opts.oracle)?;
    let code = code_for(&checks);
    let meta = meta(cli, started, None);
    let block_of = |k: u64| record.partition.block_of(k);
    let stdout = if cli.opts.json {
        emit_json(&Envelope {
            command: "tables".into(),
            target: Target::N(n),
            payload: to_value(&record),
            checks,
            meta,
        })
    } else if cli.opts.csv {
        let mut s = String::from("k,b,a,block\n");
        for (k, &b) in (1u64..).zip(&record.b_table) {
            let a = if k >= 2 { record.a_table[(k - 2) as usize].to_string() } else { String::new() };
            let block = block_of(k).map(|b| b.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{k},{b},{a},{block}");
        }
        s
    } else {
        let f = factorize(n)?;
        let mut s = format!("n = {n} = {f}  (oracle: {})\n", record.oracle);
        let width = n.to_string().len().max(3);
        let _ = writeln!(s, "{:>w$}  {:>w$}  {:>w$}  block", "k", "b", "a", w = width);
        for (k, &b) in (1u64..).zip(&record.b_table) {
            let a = if k >= 2 { record.a_table[(k - 2) as usize].to_string() } else { "-".into() };
            let block = block_of(k).map(|b| b.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "{k:>w$}  {b:>w$}  {a:>w$}  {block}", w = width);
        }
        for block in &record.partition.blocks {
            let _ = writeln!(s, "Q_{} = {}", block.prime, render_set(&block.members));
        }
        let _ = writeln!(s, "Q_0 = {}", render_set(&record.partition.q0));
        for c in checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(s, "FAIL {} {:?}", c.name, c.witness.clone().unwrap_or_default());
        }
        render_meta(&mut s, &meta);
        s
    };
    Ok(Outcome { stdout, code })
}

fn cmd_chow(cli: &Cli, n: u64, started: Instant) -> Result<Outcome> {
    let (record, checks) = build_record(n, Oracle::Brute)?;
    let checks: Vec<Check> =
        checks.into_iter().filter(|c| c.name == "primary_decomposition_crt").collect();
    let code = code_for(&checks);
    let meta = meta(cli, started, None);
    let stdout = if cli.opts.json {
        emit_json(&Envelope {
            command: "chow".into(),
            target: Target::N(n),
            payload: to_value(&record),
            checks,
            meta,
        })
    } else {
        let d = chow_primary_decomposition(n)?;
        let mut s = format!("n = {n} = {}\n", factorize(n)?);
        for summand in &d.summands {
            let _ = writeln!(s, "p = {}: {summand}", summand.prime);
        }
        if d.extended {
            s.push_str("(n = 2 is covered by extension)\n");
        }
        let orders: Vec<String> = (1..n)
            .map(|k| {
                let parts: Vec<String> =
                    d.summands.iter().map(|x| x.order_in_degree(k).to_string()).collect();
                format!("{k}: {} = {}", record.b_table[(k - 1) as usize], parts.join("·"))
            })
            .collect();
        let _ = writeln!(s, "order of ω^k: {}", orders.join(", "));
        let verdict = if code == EXIT_OK { "pass" } else { "FAIL" };
        let _ = writeln!(s, "degreewise check: {verdict}");
        render_meta(&mut s, &meta);
        s
    };
    Ok(Outcome { stdout, code })
}

fn cmd_cstar(cli: &Cli, n: u64, set: &str, started: Instant) -> Result<Outcome> {
    let monomial = ExteriorMonomial::new(n, parse_index_set(set)?)?;
    let map = CstarMap::for_n(n)?;
    let (multiplier, image) = map.cstar_monomial(&monomial)?;
    let meta = meta(cli, started, None);
    let stdout = if cli.opts.json {
        emit_json(&Envelope {
            command: "cstar".into(),
            target: Target::N(n),
            payload: to_value(&CstarPayload {
                n,
                indices: image.indices().to_vec(),
                degree: image.degree(),
                multiplier,
            }),
            checks: Vec::new(),
            meta,
        })
    } else {
        let mut s = format!("I = {image}\nc*(ζ_I) = {multiplier} · ξ_I\nmultiplier: {multiplier}\n");
        render_meta(&mut s, &meta);
        s
    };
    Ok(Outcome { stdout, code: EXIT_OK })
}

fn cmd_verify(cli: &Cli, from: u64, to: u64, started: Instant) -> Result<Outcome> {
    let cfg = VerifyConfig {
        from,
        to,
        workers: cli.opts.workers,
        ineq_bound: cli.opts.ineq_bound,
        fault: cli.opts.inject_fault,
    };
    let summary = verify_range(&cfg)?;
    let checks = summary.aggregated_checks();
    let code = code_for(&checks);
    let meta = meta(cli, started, Some(cfg.workers));
    let stdout = if cli.opts.json {
        emit_json(&Envelope {
            command: "verify".into(),
            target: Target::Range(Range { from, to }),
            payload: to_value(&summary.payload()),
            checks,
            meta,
        })
    } else {
        let mut s = String::new();
        for t in summary.tallies() {
            let _ = writeln!(s, "{}: {} passed, {} failed", t.name, t.passed, t.failed);
        }
        if let Some(c) = summary.first_failure() {
            let w: Vec<String> = c
                .witness
                .iter()
                .flatten()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(s, "first failure: {} ({})", c.name, w.join(", "));
        }
        let _ = writeln!(
            s,
            "{} values verified, {} failures",
            summary.verified(),
            summary.failures()
        );
        render_meta(&mut s, &meta);
        s
    };
    Ok(Outcome { stdout, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("psu-torsion").chain(args.iter().copied()))
            .expect("arguments parse");
        run(&cli)
    }

    #[test]
    fn index_sets() {
        assert_eq!(parse_index_set("").unwrap(), Vec::<u64>::new());
        assert_eq!(parse_index_set("2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_index_set("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_index_set("2, 4..=6").unwrap(), vec![2, 4, 5, 6]);
        assert!(parse_index_set("a").is_err());
        assert!(parse_index_set("5..2").is_err());
    }

    #[test]
    fn factor_text() {
        assert_eq!(run_args(&["factor", "12"]).stdout, "12 = 2^2 · 3\n");
        assert_eq!(run_args(&["factor", "7"]).stdout, "7 = 7\n");
        assert_eq!(run_args(&["factor", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn tables_csv() {
        let out = run_args(&["tables", "4", "--csv"]);
        assert_eq!(out.stdout, "k,b,a,block\n1,4,,\n2,2,2,Q2\n3,2,1,Q0\n4,1,2,Q2\n");
        for oracle in ["brute", "closed", "schubert", "spectral"] {
            assert_eq!(run_args(&["tables", "4", "--csv", "--oracle", oracle]), out);
        }
    }

    #[test]
    fn csv_rejected_elsewhere() {
        assert_eq!(run_args(&["chow", "4", "--csv"]).code, EXIT_USAGE);
    }

    #[test]
    fn cstar_text() {
        let out = run_args(&["cstar", "12", "--set", "2,3"]);
        assert!(out.stdout.contains("multiplier: 6"));
        assert_eq!(run_args(&["cstar", "12", "--set", "2,13"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["cstar", "12", "--set", "2,2"]).code, EXIT_USAGE);
    }

    #[test]
    fn chow_text() {
        let out = run_args(&["chow", "3"]);
        assert!(out.stdout.contains("p = 3: ⟨3ω, ω^3⟩"));
        assert!(out.stdout.contains("degreewise check: pass"));
    }
}
