//! Command-line interface: argument grammar, output rendering, cache
//! plumbing, and exit-code policy.
//!
//! Exit codes: 0 = success (and, for sweeps, all cases passed); 1 = a sweep
//! ran to completion but found mismatches or factorization failures; 2 =
//! usage or input error; 3 = a requested rank exceeds a capacity ceiling.
//! Ceilings exist to keep casual invocations off the exponential cliff and
//! are lifted by `--force`, which warns on standard error instead.
//!
//! All structured output is versioned: JSON objects carry a `format` field
//! and the CSV table starts with a version comment. JSON keys are emitted
//! in sorted order, so re-rendering parsed output reproduces it byte for
//! byte, and every sweep merges worker results deterministically, so the
//! report bytes do not depend on `--workers`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bruhat::{interval_below, interval_below_unbounded};
use crate::closed_forms::{verify_theorem, verify_theorem_unbounded, Claim, VerificationReport};
use crate::error::{Error, Result};
use crate::fib_factorizer::{verify_conjecture, verify_conjecture_unbounded, ConjectureReport};
use crate::omega::{all_reduced_subwords, d_stat, g_stat, h_stat, reduced_subwords_for, vn_perm};
use crate::perm::Permutation;
use crate::poly::IntPoly;
use crate::rpoly::RPolyEngine;

/// Single computations (one polynomial, one subword listing) refuse ranks
/// beyond this without `--force`. Sweeps use the stricter interval ceiling.
pub const MAX_SINGLE_RANK: usize = 9;

const FORMAT_TAG: &str = "klrpoly.v1";
const CACHE_ENV: &str = "KLRPOLY_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "klrpoly",
    version,
    about = "Exact R- and R~-polynomials on symmetric groups, with q-Fibonacci closed forms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Polynomial cache file: loaded at startup if present, rewritten
    /// atomically on exit. Falls back to the KLRPOLY_CACHE environment
    /// variable.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Worker threads for sweeps (default: one per core). Reports are
    /// byte-identical for any worker count.
    #[arg(long, global = true, value_name = "COUNT")]
    workers: Option<usize>,

    /// Lift the default rank ceilings. Expect exponential running time.
    #[arg(long, global = true)]
    force: bool,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one polynomial for a pair of permutations.
    ///
    /// Permutations are written in one-line notation, either compact
    /// ("3412") or comma-separated ("3,4,1,2"); "e" denotes the identity
    /// at the rank of the other endpoint.
    Compute {
        /// Compute the R~-polynomial (the default).
        #[arg(long, conflicts_with = "rpoly")]
        rtilde: bool,
        /// Compute the R-polynomial instead.
        #[arg(long)]
        rpoly: bool,
        u: String,
        v: String,
    },
    /// List the lower Bruhat interval below a permutation, sorted.
    Interval { top: String },
    /// List the reduced subwords of Omega_n expressing sigma, with the
    /// statistics d, h, g.
    Subwords {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
    },
    /// Sweep one identity over its whole input range at rank n.
    ///
    /// Claims: main, corollary, vni, ll, trec, relation, lemmas.
    /// Exits 0 only if every case matched.
    Verify {
        claim: String,
        #[arg(long)]
        n: usize,
    },
    /// Export the subword statistics table (sigma, length, d, h, g,
    /// rtilde) for the interval below v_n as CSV.
    Table {
        #[arg(long)]
        n: usize,
        /// Destination file; omit to stream to standard out.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Factor R~ of every comparable pair below v_n into q-Fibonacci
    /// pieces. Exits 0 only if every pair factors.
    Conjecture {
        #[arg(long)]
        n: usize,
        /// Write one "<sigma1> <sigma2> g=<g> h=[...]" line per pair.
        #[arg(long, value_name = "PATH")]
        certs: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Parses the process arguments, runs the command, and returns the exit
/// code. Diagnostics go to standard error.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub(crate) fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => 3,
        _ => 2,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(Error::Parse("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    }
    if cli.force {
        eprintln!("warning: --force lifts the rank ceilings; running time grows exponentially");
    }
    let cache_path = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let engine = RPolyEngine::new();
    if let Some(path) = cache_path.as_deref() {
        if path.exists() {
            let loaded = engine.load_cache(path)?;
            eprintln!("loaded {loaded} cached polynomials from {}", path.display());
        }
    }
    let code = dispatch(&cli, &engine)?;
    if let Some(path) = cache_path.as_deref() {
        engine.save_cache(path)?;
    }
    Ok(code)
}

fn dispatch(cli: &Cli, engine: &RPolyEngine) -> Result<i32> {
    match &cli.command {
        Command::Compute {
            rtilde: _,
            rpoly,
            u,
            v,
        } => cmd_compute(engine, *rpoly, u, v, cli.format, cli.force),
        Command::Interval { top } => cmd_interval(top, cli.format, cli.force),
        Command::Subwords { n, sigma } => cmd_subwords(*n, sigma, cli.format, cli.force),
        Command::Verify { claim, n } => cmd_verify(engine, claim, *n, cli.format, cli.force),
        Command::Table { n, out } => cmd_table(engine, *n, out.as_deref(), cli.format, cli.force),
        Command::Conjecture { n, certs } => {
            cmd_conjecture(engine, *n, certs.as_deref(), cli.format, cli.force)
        }
    }
}

fn reject_csv(format: Format) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::Parse(
            "--format csv is only supported by the table command".into(),
        ));
    }
    Ok(())
}

/// Resolves a pair of endpoint arguments, letting "e" borrow the rank of
/// the other side.
fn parse_endpoints(u: &str, v: &str) -> Result<(Permutation, Permutation)> {
    match (u, v) {
        ("e", "e") => Err(Error::Parse(
            "cannot infer the rank when both endpoints are 'e'".into(),
        )),
        ("e", _) => {
            let pv: Permutation = v.parse()?;
            Ok((Permutation::identity(pv.rank())?, pv))
        }
        (_, "e") => {
            let pu: Permutation = u.parse()?;
            let id = Permutation::identity(pu.rank())?;
            Ok((pu, id))
        }
        _ => Ok((u.parse()?, v.parse()?)),
    }
}

fn coefficient_strings(p: &IntPoly) -> Vec<Value> {
    p.coeffs().iter().map(|c| json!(c.to_string())).collect()
}

fn cmd_compute(
    engine: &RPolyEngine,
    rpoly: bool,
    u: &str,
    v: &str,
    format: Format,
    force: bool,
) -> Result<i32> {
    reject_csv(format)?;
    let kind = if rpoly { "rpoly" } else { "rtilde" };
    let (u, v) = parse_endpoints(u, v)?;
    if u.rank().max(v.rank()) > MAX_SINGLE_RANK && !force {
        return Err(Error::Capacity {
            what: "single computations without --force",
            max: MAX_SINGLE_RANK,
            got: u.rank().max(v.rank()),
        });
    }
    let poly = match kind {
        "rpoly" => engine.rpoly(&u, &v)?,
        _ => engine.rtilde(&u, &v)?,
    };
    match format {
        Format::Text => println!("{poly}"),
        Format::Json => println!(
            "{}",
            json!({
                "format": FORMAT_TAG,
                "kind": kind,
                "u": u.to_string(),
                "v": v.to_string(),
                "polynomial": poly.to_string(),
                "coefficients": coefficient_strings(&poly),
            })
        ),
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn cmd_interval(top: &str, format: Format, force: bool) -> Result<i32> {
    reject_csv(format)?;
    if top == "e" {
        return Err(Error::Parse(
            "interval takes an explicit permutation, not 'e'".into(),
        ));
    }
    let top: Permutation = top.parse()?;
    let interval = if force {
        interval_below_unbounded(&top)?
    } else {
        interval_below(&top)?
    };
    match format {
        Format::Text => {
            for sigma in interval.elements() {
                println!("{sigma}");
            }
        }
        Format::Json => {
            let elements: Vec<Value> = interval
                .elements()
                .iter()
                .map(|p| json!(p.to_string()))
                .collect();
            println!(
                "{}",
                json!({
                    "format": FORMAT_TAG,
                    "top": top.to_string(),
                    "size": interval.elements().len(),
                    "elements": elements,
                })
            );
        }
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn cmd_subwords(n: usize, sigma: &str, format: Format, force: bool) -> Result<i32> {
    reject_csv(format)?;
    if n > MAX_SINGLE_RANK && !force {
        return Err(Error::Capacity {
            what: "subword enumeration without --force",
            max: MAX_SINGLE_RANK,
            got: n,
        });
    }
    let sigma: Permutation = if sigma == "e" {
        Permutation::identity(n)?
    } else {
        sigma.parse()?
    };
    let subwords = reduced_subwords_for(n, &sigma)?;
    match format {
        Format::Text => {
            for w in &subwords {
                let positions: Vec<String> =
                    w.positions().iter().map(|p| (p + 1).to_string()).collect();
                println!(
                    "positions=[{}] word=[{}] d={} h={} g={}",
                    positions.join(","),
                    w.word(),
                    d_stat(w.word()),
                    h_stat(n, w.word()),
                    g_stat(w.word()),
                );
            }
        }
        Format::Json => {
            let records: Vec<Value> = subwords
                .iter()
                .map(|w| {
                    let positions: Vec<Value> =
                        w.positions().iter().map(|p| json!(p + 1)).collect();
                    let letters: Vec<Value> =
                        w.word().letters().iter().map(|&l| json!(l)).collect();
                    json!({
                        "positions": positions,
                        "word": letters,
                        "d": d_stat(w.word()),
                        "h": h_stat(n, w.word()),
                        "g": g_stat(w.word()),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "format": FORMAT_TAG,
                    "n": n,
                    "sigma": sigma.to_string(),
                    "subwords": records,
                })
            );
        }
        Format::Csv => unreachable!("rejected above"),
    }
    Ok(0)
}

fn subject_label(claim: Claim) -> &'static str {
    match claim {
        Claim::Main | Claim::Corollary | Claim::Lemmas => "sigma swept",
        Claim::Vni => "i swept",
        Claim::IncreasingSeq => "sequences swept",
        Claim::TRecurrence => "indices swept",
        Claim::Bridge => "u swept",
    }
}

fn render_verification(report: &VerificationReport, format: Format) {
    match format {
        Format::Text => {
            println!("claim: {}", report.claim);
            println!("n: {}", report.n);
            println!("{}: {}", subject_label(report.claim), report.subjects);
            println!("cases: {}", report.cases);
            println!("mismatches: {}", report.mismatches.len());
            for m in &report.mismatches {
                println!(
                    "MISMATCH inputs=({}) expected={} actual={}",
                    m.inputs, m.expected, m.actual
                );
            }
            println!("{}", if report.passing() { "PASS" } else { "FAIL" });
        }
        _ => {
            let mismatches: Vec<Value> = report
                .mismatches
                .iter()
                .map(|m| {
                    json!({
                        "inputs": m.inputs,
                        "expected": m.expected,
                        "actual": m.actual,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "format": FORMAT_TAG,
                    "claim": report.claim.to_string(),
                    "n": report.n,
                    "subjects": report.subjects,
                    "cases": report.cases,
                    "mismatches": mismatches,
                    "passing": report.passing(),
                })
            );
        }
    }
}

fn cmd_verify(
    engine: &RPolyEngine,
    claim: &str,
    n: usize,
    format: Format,
    force: bool,
) -> Result<i32> {
    reject_csv(format)?;
    let claim: Claim = claim.parse()?;
    let report = if force {
        verify_theorem_unbounded(engine, claim, n)?
    } else {
        verify_theorem(engine, claim, n)?
    };
    render_verification(&report, format);
    Ok(if report.passing() { 0 } else { 1 })
}

/// Quotes a CSV field only when it needs it.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn cmd_table(
    engine: &RPolyEngine,
    n: usize,
    out: Option<&Path>,
    format: Format,
    force: bool,
) -> Result<i32> {
    if format == Format::Json {
        return Err(Error::Parse(
            "the table command emits CSV; use --format text or csv".into(),
        ));
    }
    if n > crate::closed_forms::MAX_SWEEP_RANK && !force {
        return Err(Error::Capacity {
            what: "table sweeps without --force",
            max: crate::closed_forms::MAX_SWEEP_RANK,
            got: n,
        });
    }
    let grouped = all_reduced_subwords(n)?;
    let top = vn_perm(n)?;
    let mut lines = vec![
        "# klrpoly table v1".to_string(),
        "sigma,length,d,h,g,rtilde".to_string(),
    ];
    for (sigma, subwords) in &grouped {
        let poly = engine.rtilde(sigma, &top)?;
        for w in subwords {
            lines.push(
                [
                    csv_field(&sigma.to_string()),
                    sigma.length().to_string(),
                    d_stat(w.word()).to_string(),
                    h_stat(n, w.word()).to_string(),
                    g_stat(w.word()).to_string(),
                    csv_field(&poly.to_string()),
                ]
                .join(","),
            );
        }
    }
    let rows = lines.len() - 2;
    let body = lines.join("\n") + "\n";
    match out {
        Some(path) => {
            fs::write(path, body)?;
            println!("wrote {rows} rows to {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(0)
}

fn render_conjecture(report: &ConjectureReport, format: Format) {
    match format {
        Format::Text => {
            println!("n: {}", report.n);
            println!("pairs: {}", report.pairs);
            println!("verified: {}", report.verified());
            println!("failures: {}", report.failures.len());
            for f in &report.failures {
                println!(
                    "FAILURE sigma1={} sigma2={} polynomial={} note={}",
                    f.sigma1, f.sigma2, f.polynomial, f.note
                );
            }
            println!("{}", if report.passing() { "PASS" } else { "FAIL" });
        }
        _ => {
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|f| {
                    json!({
                        "sigma1": f.sigma1.to_string(),
                        "sigma2": f.sigma2.to_string(),
                        "polynomial": f.polynomial,
                        "note": f.note,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "format": FORMAT_TAG,
                    "n": report.n,
                    "pairs": report.pairs,
                    "verified": report.verified(),
                    "failures": failures,
                    "passing": report.passing(),
                })
            );
        }
    }
}

fn cmd_conjecture(
    engine: &RPolyEngine,
    n: usize,
    certs: Option<&Path>,
    format: Format,
    force: bool,
) -> Result<i32> {
    reject_csv(format)?;
    let store = certs.is_some();
    let report = if force {
        verify_conjecture_unbounded(engine, n, store)?
    } else {
        verify_conjecture(engine, n, store)?
    };
    if let Some(path) = certs {
        let mut body = String::new();
        for cert in &report.certificates {
            let hs: Vec<String> = cert
                .factorization
                .hs()
                .iter()
                .map(|h| h.to_string())
                .collect();
            body.push_str(&format!(
                "{} {} g={} h=[{}]\n",
                cert.sigma1,
                cert.sigma2,
                cert.factorization.g(),
                hs.join(",")
            ));
        }
        fs::write(path, body)?;
        eprintln!(
            "wrote {} certificates to {}",
            report.certificates.len(),
            path.display()
        );
    }
    render_conjecture(&report, format);
    Ok(if report.passing() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_inference() {
        let (u, v) = parse_endpoints("e", "3412").unwrap();
        assert_eq!(u, Permutation::identity(4).unwrap());
        assert_eq!(v.to_string(), "3412");

        let (u, v) = parse_endpoints("312", "e").unwrap();
        assert_eq!(u.to_string(), "312");
        assert_eq!(v, Permutation::identity(3).unwrap());

        assert!(matches!(parse_endpoints("e", "e"), Err(Error::Parse(_))));
    }

    #[test]
    fn exit_codes_by_error_class() {
        let capacity = Error::Capacity {
            what: "x",
            max: 8,
            got: 9,
        };
        assert_eq!(exit_code_for(&capacity), 3);
        assert_eq!(exit_code_for(&Error::Parse("bad".into())), 2);
        assert_eq!(exit_code_for(&Error::NotReduced), 2);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("q^4 + q^2"), "q^4 + q^2");
        assert_eq!(csv_field("10,3,4,…"), "\"10,3,4,…\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn cli_grammar_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["klrpoly", "compute", "--rtilde", "e", "3412"]).unwrap();
        assert!(matches!(cli.command, Command::Compute { .. }));
        // --rtilde and --rpoly are mutually exclusive.
        assert!(
            Cli::try_parse_from(["klrpoly", "compute", "--rtilde", "--rpoly", "e", "21"]).is_err()
        );
        let cli =
            Cli::try_parse_from(["klrpoly", "verify", "main", "--n", "5", "--format", "json"])
                .unwrap();
        assert!(matches!(cli.format, Format::Json));
    }
}
