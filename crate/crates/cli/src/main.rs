use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hc_core::builder::{build, Certificate};
use hc_core::chart::render;
use hc_core::domains::{classify, Tag};
use hc_core::numerics::{a_start, alpha, boundary, min_band_p, pi_p};
use hc_core::oracle::{brute_spectrum, identity_audit, OracleCriterion, DEFAULT_CAP};
use hc_core::picard::SurfaceSpec;
use hc_core::smoothness::verify;
use hc_core::sweep::{scan, summarize, write_csv, Modes};
use hc_core::{Error, Exec};

const OUT_OF_RANGE: u8 = 2;
const DELEGATED: u8 = 3;
const FAILED: u8 = 4;

const SCAN_HELP: &str = "\
CSV columns, one row per (d,g) with 0 <= g <= castelnuovo(d,n):
  d, g        the grid point
  tag         domain label (OutOfRange, AboveCastelnuovo, A0, APrime, Band,
              TildeAk, D2, NonLacunary, Uncovered)
  p           band index for Band rows, empty otherwise
  gap         n = 3 only: gap, gap_free or non_lacunary
  route       construction route of the certificate (build mode)
  surface_p   p of the surface the certificate lives on
  holds       1/0 verdict (verify mode), empty when not verified
  annotated   1 when the verdict carries an annotation
  error       build error for band points that could not be built

Exit status is 4 when any band point fails to build or verify.";

#[derive(Parser)]
#[command(
    name = "hcgap",
    version,
    about = "Classify, construct and verify (d,g) pairs of curves in P^n"
)]
struct Cli {
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the domain label of (n,d,g) and its JSON form.
    Classify { n: i64, d: i64, g: i64 },
    /// Build and verify a certificate for a band point and write it as JSON.
    Certify {
        n: i64,
        d: i64,
        g: i64,
        /// Output file; stdout when omitted.
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file from scratch.
    Verify {
        path: PathBuf,
        /// Write the re-verified certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a degree range and emit CSV and SVG.
    #[command(after_help = SCAN_HELP)]
    Scan(ScanArgs),
    /// Dump the bound functions as CSV over a degree range.
    #[command(after_help = "Columns: d, pi_0..pi_{n-2}, alpha_p for each band p, A, B.\n\
                             Cells are empty where a function is undefined.")]
    Table {
        #[arg(long)]
        n: i64,
        /// Degree range `lo..hi`, inclusive.
        #[arg(long, value_parser = parse_range)]
        d: (i64, i64),
    },
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: i64,
    /// Degree range `lo..hi`, inclusive; an empty range gives header-only output.
    #[arg(long, value_parser = parse_range)]
    d: (i64, i64),
    #[arg(long, value_enum, value_delimiter = ',', default_value = "classify")]
    modes: Vec<ScanMode>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Coefficient bound for the oracle mode.
    #[arg(long, default_value_t = 12)]
    a_max: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanMode {
    Classify,
    Build,
    Verify,
    /// Compare built pairs against an exhaustive search on each surface used.
    Oracle,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exhaustive (d,g) spectrum of classes on X^n_p with coefficients up to a-max.
    #[command(after_help = "CSV columns: d, g (one row per realised pair).")]
    Spectrum {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 12)]
        a_max: i64,
        #[arg(long, value_enum, default_value = "gp")]
        criterion: CriterionArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the bound-function identities over a grid.
    #[command(after_help = "CSV columns: identity, n, p, d, r (one row per violation).")]
    Audit {
        /// Range of n, `lo..hi` inclusive.
        #[arg(long, value_parser = parse_range)]
        n: (i64, i64),
        #[arg(long, default_value_t = 300)]
        d_span: i64,
        #[arg(long, default_value_t = 40)]
        r_max: i64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Gp,
    Cubic,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing stdout"),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Exit status for a verified certificate.
fn verdict_code(cert: &Certificate) -> u8 {
    match &cert.verdict {
        Some(v) if v.holds => 0,
        _ => FAILED,
    }
}

fn cmd_classify(n: i64, d: i64, g: i64) -> Result<u8> {
    let label = classify(n, d, g)?;
    println!("{}", label.tag);
    print_json(&label)?;
    Ok(if label.tag == Tag::OutOfRange { OUT_OF_RANGE } else { 0 })
}

fn cmd_certify(n: i64, d: i64, g: i64, out: Option<&Path>) -> Result<u8> {
    let cert = match build(n, d, g) {
        Ok(c) => c,
        Err(Error::Delegated { label, .. }) => {
            eprintln!("({n},{d},{g}) is {label}; no certificate is built for it");
            return Ok(if label == Tag::OutOfRange.to_string() {
                OUT_OF_RANGE
            } else {
                DELEGATED
            });
        }
        Err(e @ (Error::Unreachable { .. } | Error::Verification(_))) => {
            eprintln!("{e}");
            return Ok(FAILED);
        }
        Err(e) => return Err(e.into()),
    };
    let cert = verify(&cert)?;
    write_out(out, format!("{}\n", cert.to_json()).as_bytes())?;
    report_verdict(&cert);
    Ok(verdict_code(&cert))
}

fn report_verdict(cert: &Certificate) {
    let Some(v) = &cert.verdict else { return };
    let status = if v.holds { "holds" } else { "fails" };
    eprintln!(
        "({},{},{}) on X^{}_{}: {status}",
        cert.n, cert.d, cert.g, cert.n, cert.p
    );
    if let Some(a) = &v.annotation {
        eprintln!("annotation: {a}");
    }
    if let Some(c) = v.first_failure() {
        eprintln!("first failing check: {c}");
    }
}

fn cmd_verify(path: &Path, out: Option<&Path>) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: not a certificate: {e}", path.display());
            return Ok(FAILED);
        }
    };
    let checked = match verify(&cert) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return Ok(FAILED);
        }
    };
    report_verdict(&checked);
    let mut code = verdict_code(&checked);
    if cert.verdict.is_some() && cert.verdict != checked.verdict {
        eprintln!("stored verdict differs from the recomputed one");
        code = FAILED;
    }
    if let Some(o) = out {
        write_out(Some(o), format!("{}\n", checked.to_json()).as_bytes())?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct OracleRow {
    p: i64,
    targets: usize,
    misses: Vec<(i64, i64)>,
    skipped: Option<String>,
}

fn cmd_scan(args: &ScanArgs, exec: Exec) -> Result<u8> {
    let (lo, hi) = args.d;
    if lo < args.n {
        bail!("d range must start at d >= n = {}", args.n);
    }
    let has = |m| args.modes.contains(&m);
    let modes = Modes {
        build: has(ScanMode::Build) || has(ScanMode::Oracle),
        verify: has(ScanMode::Verify),
    };
    let rows = scan(args.n, lo, hi, modes, exec)?;

    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    if let Some(p) = &args.csv {
        write_out(Some(p), &csv)?;
    }
    if let Some(p) = &args.svg {
        write_out(Some(p), render(args.n, lo, hi, &rows).as_bytes())?;
    }
    if args.csv.is_none() && args.svg.is_none() {
        write_out(None, &csv)?;
    }

    let summary = summarize(&rows);
    let mut oracle = Vec::new();
    if has(ScanMode::Oracle) {
        let mut by_p = std::collections::BTreeMap::<i64, std::collections::BTreeSet<(i64, i64)>>::new();
        for c in rows.iter().filter_map(|r| r.cert.as_ref()) {
            let fits = c.class.a <= args.a_max && c.class.b.iter().all(|&b| 0 <= b && b <= c.class.a);
            let entry = by_p.entry(c.p).or_default();
            if fits {
                entry.insert((c.d, c.g));
            }
        }
        for (p, targets) in by_p {
            let surf = SurfaceSpec::new(args.n, p)?;
            let row = match brute_spectrum(&surf, args.a_max, OracleCriterion::GpInequalities, DEFAULT_CAP, exec) {
                Ok(rep) => OracleRow {
                    p,
                    targets: targets.len(),
                    misses: rep.misses(&targets),
                    skipped: None,
                },
                Err(e @ Error::ResourceCap { .. }) => OracleRow {
                    p,
                    targets: targets.len(),
                    misses: Vec::new(),
                    skipped: Some(e.to_string()),
                },
                Err(e) => return Err(e.into()),
            };
            oracle.push(row);
        }
    }
    eprintln!("{}", serde_json::to_string(&summary)?);
    for o in &oracle {
        eprintln!("{}", serde_json::to_string(o)?);
    }
    let missed = oracle.iter().any(|o| !o.misses.is_empty());
    Ok(if summary.failures > 0 || missed { FAILED } else { 0 })
}

fn cell(v: hc_core::Result<i64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cmd_table(n: i64, (lo, hi): (i64, i64)) -> Result<u8> {
    let bands: Vec<i64> = (min_band_p(n)..=n - 4).collect();
    let bp = boundary(n).ok();
    let mut header = vec!["d".to_string()];
    header.extend((0..=n - 2).map(|p| format!("pi_{p}")));
    header.extend(bands.iter().map(|p| format!("alpha_{p}")));
    header.extend(["A".to_string(), "B".to_string()]);
    let mut out = header.join(",") + "\n";
    for d in lo.max(n)..=hi {
        let mut row = vec![d.to_string()];
        row.extend((0..=n - 2).map(|p| cell(pi_p(p, d, n).map(|x| x.value))));
        row.extend(bands.iter().map(|&p| {
            if d >= a_start(p, n) {
                cell(alpha(p, d, n))
            } else {
                String::new()
            }
        }));
        match &bp {
            Some(b) if d > 2 * n => row.extend([cell(b.big_a(d)), cell(b.big_b(d))]),
            _ => row.extend([String::new(), String::new()]),
        }
        out += &(row.join(",") + "\n");
    }
    write_out(None, out.as_bytes())?;
    Ok(0)
}

fn cmd_oracle(cmd: &OracleCmd, exec: Exec) -> Result<u8> {
    match cmd {
        OracleCmd::Spectrum {
            n,
            p,
            a_max,
            criterion,
            cap,
            csv,
        } => {
            let surf = SurfaceSpec::new(*n, *p)?;
            let crit = match criterion {
                CriterionArg::Gp => OracleCriterion::GpInequalities,
                CriterionArg::Cubic => OracleCriterion::CubicSpecialization,
            };
            let rep = brute_spectrum(&surf, *a_max, crit, *cap, exec)?;
            if let Some(path) = csv {
                let mut buf = Vec::new();
                rep.write_csv(&mut buf)?;
                write_out(Some(path), &buf)?;
            }
            print_json(&serde_json::json!({
                "n": rep.n,
                "p": rep.p,
                "a_max": rep.a_max,
                "criterion": rep.criterion,
                "visited": rep.visited,
                "represented": rep.represented.to_string(),
                "pairs": rep.pairs.len(),
                "above_castelnuovo": rep.above_castelnuovo,
            }))?;
            Ok(0)
        }
        OracleCmd::Audit { n, d_span, r_max, csv } => {
            let rep = identity_audit(n.0..=n.1, *d_span, *r_max, exec)?;
            if let Some(path) = csv {
                let mut buf = Vec::new();
                rep.write_csv(&mut buf)?;
                write_out(Some(path), &buf)?;
            }
            print_json(&serde_json::json!({
                "evaluated": rep.evaluated,
                "violations": rep.violations.len(),
            }))?;
            Ok(if rep.violations.is_empty() { 0 } else { FAILED })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.cmd {
        Cmd::Classify { n, d, g } => cmd_classify(*n, *d, *g),
        Cmd::Certify { n, d, g, out } => cmd_certify(*n, *d, *g, out.as_deref()),
        Cmd::Verify { path, out } => cmd_verify(path, out.as_deref()),
        Cmd::Scan(args) => cmd_scan(args, exec),
        Cmd::Table { n, d } => cmd_table(*n, *d),
        Cmd::Oracle(o) => cmd_oracle(o, exec),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
