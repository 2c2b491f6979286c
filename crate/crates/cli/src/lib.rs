//! Command-line driver: argument parsing, the four commands, and file output.
//!
//! Every command writes one file per `M` (or one file per run for `sweep` and
//! the elementary sum checks) into the `--out` directory. Files are written to a
//! temporary sibling and renamed into place. Progress goes to stderr.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde_json::{json, Value};

use wellcond::condition::{
    certify_bound, mu_max_coefficient_route, mu_max_spherical_route, ConditionReport, QuadratureConfig,
    SphericalOptions,
};
use wellcond::energy::log_energy;
use wellcond::export;
use wellcond::points::build_point_set;
use wellcond::polynomial::{canonical_polynomial, expand};
use wellcond::precision::{float_string, Precision, DEFAULT_PRECISION_BITS};
use wellcond::sums::{self, EXACT_MAX_M};
use wellcond::verification::{verify_all, EvaluationGrid, VerificationReport};

/// Exit status when a gated check fails.
pub const EXIT_GATED_FAILURE: u8 = 1;
/// Exit status for invalid input or I/O failure.
pub const EXIT_ERROR: u8 = 2;
/// Exit status when gated suites were refused because `M` is below their
/// hypothesis and `--informational` was not given.
pub const EXIT_REFUSED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "wellcond", version, about = "Well-conditioned polynomials of degree 4M^2 from a spherical point set")]
pub struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, env = "WELLCOND_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the point set, the factored polynomial and its dense expansion.
    Generate(Common),
    /// Compute the maximal condition number by one or both routes.
    Cond(CondArgs),
    /// Run the inequality suites and the elementary sum checks.
    Verify(VerifyArgs),
    /// One CSV row per M: condition number, normalized value, energy residual.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// A single M or an inclusive range `a..b`.
    #[arg(long = "M", value_name = "int|a..b")]
    pub m: MRange,

    /// Working precision in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision: u32,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    /// Seed for the random heights of the verification grid.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Extra quadrature nodes beyond the exactness requirement.
    #[arg(long, default_value_t = 16)]
    pub quadrature_margin: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CondArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long, value_enum, default_value_t = RouteArg::Coeff)]
    pub route: RouteArg,

    /// Decide the bounds with outward rounding (coefficient route).
    #[arg(long)]
    pub certify: bool,

    /// Per-parallel azimuth offsets (JSON array or whitespace/comma separated),
    /// spherical route only.
    #[arg(long)]
    pub phases: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,

    /// Run hypothesis-gated suites below their hypothesis, without gating.
    #[arg(long)]
    pub informational: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,

    /// Add wall-clock columns (makes the output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Coeff,
    Sphere,
    Both,
}

/// Inclusive range of `M`; `b < a` gives an empty range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MRange {
    pub lo: u32,
    pub hi: u32,
}

impl MRange {
    pub fn iter(&self) -> RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| -> Result<u32, String> {
            let v: u32 = t.trim().parse().map_err(|_| format!("invalid M `{t}`"))?;
            if v == 0 {
                return Err("M must be at least 1".into());
            }
            Ok(v)
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(MRange { lo: parse(a)?, hi: parse(b)? }),
            None => {
                let v = parse(s)?;
                Ok(MRange { lo: v, hi: v })
            }
        }
    }
}

/// What a command found, mapped to the process exit status.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub gated_failure: bool,
    pub refused: bool,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        if self.gated_failure {
            EXIT_GATED_FAILURE
        } else if self.refused {
            EXIT_REFUSED
        } else {
            0
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::Generate(c) => cmd_generate(&c),
        Command::Cond(c) => cmd_cond(&c),
        Command::Verify(c) => cmd_verify(&c),
        Command::Sweep(c) => cmd_sweep(&c),
    }
}

fn precision(c: &Common) -> anyhow::Result<Precision> {
    Ok(Precision::new(c.precision)?)
}

fn provenance(command: &str, c: &Common, m: Option<u32>, extra: Value) -> Value {
    let mut v = json!({
        "tool": "wellcond",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "M": m.map_or_else(|| json!(format!("{}..{}", c.m.lo, c.m.hi)), |m| json!(m)),
        "precision_bits": c.precision,
        "quadrature_margin": c.quadrature_margin,
        "seed": c.seed,
        "format": c.format.ext(),
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("writing {}", path.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(&path).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn json_doc(doc: Value, prov: &Value) -> String {
    export::to_json(&export::with_provenance(doc, prov))
}

fn progress(command: &str, m: u32, started: Instant) {
    eprintln!("[{command}] M={m} done in {:.2?}", started.elapsed());
}

pub fn cmd_generate(c: &Common) -> anyhow::Result<Outcome> {
    let prec = precision(c)?;
    for m in c.m.iter() {
        let t = Instant::now();
        let set = build_point_set(m, None, prec)?;
        let f = canonical_polynomial(m)?;
        let dense = expand(&f);
        let prov = provenance("generate", c, Some(m), json!({}));
        match c.format {
            Format::Json => {
                write_atomic(&c.out, &format!("points_M{m}.json"), &json_doc(export::point_set_json(&set), &prov))?;
                write_atomic(&c.out, &format!("factors_M{m}.json"), &json_doc(export::factors_json(&f), &prov))?;
                write_atomic(&c.out, &format!("coeffs_M{m}.json"), &json_doc(export::dense_json(&dense), &prov))?;
            }
            Format::Csv => {
                write_atomic(&c.out, &format!("points_M{m}.csv"), &export::points_csv(&set))?;
                write_atomic(&c.out, &format!("factors_M{m}.csv"), &export::factors_csv(&f))?;
                write_atomic(&c.out, &format!("coeffs_M{m}.csv"), &export::coeffs_csv(&dense))?;
            }
        }
        progress("generate", m, t);
    }
    Ok(Outcome::default())
}

/// Reads per-parallel phases from a JSON array or a list of numbers
/// separated by whitespace or commas.
pub fn read_phases(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    text.split(|ch: char| ch.is_whitespace() || ch == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| anyhow!("{}: invalid phase `{t}`", path.display())))
        .collect()
}

/// `|a - b| / a` of the two routes' maxima.
fn route_difference(a: &ConditionReport, b: &ConditionReport) -> Float {
    let p = a.mu_max.prec();
    Float::with_val(p, &a.mu_max - &b.mu_max).abs() / &a.mu_max
}

pub fn cmd_cond(args: &CondArgs) -> anyhow::Result<Outcome> {
    let c = &args.common;
    let prec = precision(c)?;
    let phases = match &args.phases {
        Some(_) if args.route != RouteArg::Sphere => {
            bail!("--phases changes the point set and applies to --route sphere only")
        }
        Some(p) => Some(read_phases(p)?),
        None => None,
    };
    if args.certify && args.route == RouteArg::Sphere {
        bail!("--certify decides the bounds on the coefficient route; use --route coeff or both");
    }
    let opts = SphericalOptions {
        quadrature: QuadratureConfig {
            margin: c.quadrature_margin,
            ..QuadratureConfig::default()
        },
        ..SphericalOptions::default()
    };
    let route_name = match args.route {
        RouteArg::Coeff => "coefficient",
        RouteArg::Sphere => "spherical",
        RouteArg::Both => "both",
    };
    for m in c.m.iter() {
        let t = Instant::now();
        let mut reports = Vec::new();
        if args.route != RouteArg::Sphere {
            reports.push(if args.certify {
                certify_bound(m, prec)?
            } else {
                mu_max_coefficient_route(m, prec)?
            });
        }
        if args.route != RouteArg::Coeff {
            reports.push(mu_max_spherical_route(m, phases.as_deref(), &opts, prec)?);
        }
        let diff = (reports.len() == 2).then(|| route_difference(&reports[0], &reports[1]));
        let prov = provenance(
            "cond",
            c,
            Some(m),
            json!({"route": route_name, "certify": args.certify, "phases": phases}),
        );
        let name = format!("cond_M{m}.{}", c.format.ext());
        let body = match c.format {
            Format::Json => {
                let mut doc = json!({
                    "reports": reports.iter().map(export::condition_json).collect::<Vec<_>>(),
                });
                if let Some(d) = &diff {
                    doc["route_rel_diff"] = json!(float_string(d));
                }
                json_doc(doc, &prov)
            }
            Format::Csv => condition_csv_with_diff(&reports, diff.as_ref()),
        };
        write_atomic(&c.out, &name, &body)?;
        progress("cond", m, t);
    }
    Ok(Outcome::default())
}

fn condition_csv_with_diff(reports: &[ConditionReport], diff: Option<&Float>) -> String {
    let mut header: Vec<&str> = export::CONDITION_CSV_HEADER.to_vec();
    header.push("route_rel_diff");
    let rows = reports.iter().map(|r| {
        let mut row = export::condition_csv_row(r);
        row.push(diff.map(float_string).unwrap_or_default());
        row
    });
    csv_string(&header, rows)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(vec![]);
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let c = &args.common;
    let prec = precision(c)?;
    let grid = EvaluationGrid::with_seed(c.seed);
    let mut outcome = Outcome::default();
    for m in c.m.iter() {
        let t = Instant::now();
        let run = verify_all(m, &grid, prec, args.informational)?;
        let gated_fail = run.reports.iter().any(|r| r.gating() && !r.pass);
        outcome.gated_failure |= gated_fail;
        if let Some(e) = &run.refused {
            outcome.refused = true;
            eprintln!("[verify] M={m}: gated suites refused ({e}); rerun with --informational to evaluate them");
        }
        for r in run.reports.iter().filter(|r| !r.pass) {
            eprintln!(
                "[verify] M={m}: {} FAILED{}",
                r.lemma,
                if r.gating() { "" } else { " (informational)" }
            );
        }
        let prov = provenance(
            "verify",
            c,
            Some(m),
            json!({"informational": args.informational, "grid": grid.describe()}),
        );
        write_verify(c, m, &run.reports, run.refused.as_ref().map(|e| e.to_string()), &prov)?;
        progress("verify", m, t);
    }
    if !c.m.iter().is_empty() {
        let t = Instant::now();
        let checks = sums::check_all(EXACT_MAX_M, prec)?;
        if let Some(bad) = checks.iter().find(|s| !s.pass) {
            eprintln!("[verify] sum check {} FAILED", bad.id);
            outcome.gated_failure = true;
        }
        let prov = provenance("verify", c, None, json!({"max_M": EXACT_MAX_M}));
        let body = match c.format {
            Format::Json => json_doc(
                json!({"pass": checks.iter().all(|s| s.pass), "checks": checks}),
                &prov,
            ),
            Format::Csv => export::sums_csv(&checks),
        };
        write_atomic(&c.out, &format!("sums.{}", c.format.ext()), &body)?;
        eprintln!("[verify] sum checks done in {:.2?}", t.elapsed());
    }
    Ok(outcome)
}

fn write_verify(
    c: &Common,
    m: u32,
    reports: &[VerificationReport],
    refused: Option<String>,
    prov: &Value,
) -> anyhow::Result<()> {
    match c.format {
        Format::Json => {
            let doc = json!({
                "M": m,
                "pass": reports.iter().filter(|r| r.gating()).all(|r| r.pass),
                "refused": refused,
                "reports": reports.iter().map(export::verification_json).collect::<Vec<_>>(),
            });
            write_atomic(&c.out, &format!("verify_M{m}.json"), &json_doc(doc, prov))?;
        }
        Format::Csv => {
            write_atomic(&c.out, &format!("verify_M{m}.csv"), &export::verification_csv(reports))?;
            write_atomic(
                &c.out,
                &format!("verify_summary_M{m}.csv"),
                &export::verification_summary_csv(reports),
            )?;
        }
    }
    Ok(())
}

/// Column names of the sweep table; the two timing columns only with `--timings`.
pub const SWEEP_HEADER: [&str; 6] = ["M", "N", "precision_bits", "mu_max", "mu_over_sqrt_np1", "log_energy_residual"];
pub const SWEEP_TIMING_HEADER: [&str; 2] = ["cond_seconds", "energy_seconds"];

pub fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let c = &args.common;
    let prec = precision(c)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for m in c.m.iter() {
        let t = Instant::now();
        let cond = mu_max_coefficient_route(m, prec)?;
        let cond_secs = t.elapsed().as_secs_f64();
        let t_energy = Instant::now();
        let energy = log_energy(&build_point_set(m, None, prec)?)?;
        let energy_secs = t_energy.elapsed().as_secs_f64();
        let mut row = vec![
            m.to_string(),
            cond.n.to_string(),
            prec.bits().to_string(),
            float_string(&cond.mu_max),
            float_string(&cond.mu_over_sqrt_np1()),
            float_string(&energy.residual),
        ];
        if args.timings {
            row.push(format!("{cond_secs:.6}"));
            row.push(format!("{energy_secs:.6}"));
        }
        rows.push(row);
        progress("sweep", m, t);
    }
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if args.timings {
        header.extend(SWEEP_TIMING_HEADER);
    }
    let body = match c.format {
        Format::Csv => csv_string(&header, rows),
        Format::Json => {
            let table: Vec<Value> = rows
                .into_iter()
                .map(|row| Value::Object(header.iter().map(|h| h.to_string()).zip(row.into_iter().map(Value::String)).collect()))
                .collect();
            json_doc(json!({"rows": table}), &provenance("sweep", c, None, json!({"timings": args.timings})))
        }
    };
    write_atomic(&c.out, &format!("sweep.{}", c.format.ext()), &body)?;
    Ok(Outcome::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_range_parsing() {
        assert_eq!("5".parse::<MRange>().unwrap(), MRange { lo: 5, hi: 5 });
        assert_eq!("1..8".parse::<MRange>().unwrap(), MRange { lo: 1, hi: 8 });
        assert_eq!("3..2".parse::<MRange>().unwrap().iter().count(), 0);
        assert!("0".parse::<MRange>().is_err());
        assert!("a..3".parse::<MRange>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::default().exit_code(), 0);
        assert_eq!(Outcome { gated_failure: true, refused: true }.exit_code(), EXIT_GATED_FAILURE);
        assert_eq!(Outcome { gated_failure: false, refused: true }.exit_code(), EXIT_REFUSED);
    }

    #[test]
    fn phases_from_text_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        std::fs::write(&a, "0.1, 0.2\n0").unwrap();
        assert_eq!(read_phases(&a).unwrap(), vec![0.1, 0.2, 0.0]);
        let b = dir.path().join("b.json");
        std::fs::write(&b, "[0.5, 0]").unwrap();
        assert_eq!(read_phases(&b).unwrap(), vec![0.5, 0.0]);
        std::fs::write(&b, "x").unwrap();
        assert!(read_phases(&b).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "f.txt", "one").unwrap();
        let p = write_atomic(dir.path(), "f.txt", "two").unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
