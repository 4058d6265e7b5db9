//! Batch driver: reads a verification spec, runs the requested checks and writes one report per job.
pub mod checks;
pub mod spec;

pub use checks::{resolve_params, run_job, JobReport, Status, DEFAULT_BUDGET_TERMS};
pub use spec::{parse_spec, Budget, Check, Job, ParseError, VerificationSpec, CHECKS};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;
use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const BUDGET_ENV: &str = "ETNCKIT_BUDGET_TERMS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "etnckit", version, about = "Run exact and numeric verification checks from a spec file")]
pub struct Args {
    /// Spec file (JSON; a .toml extension selects the TOML front end)
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Directory for per-job reports
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Treat budget skips as failures
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print the implemented check names and exit
    #[arg(long)]
    pub list_checks: bool,
    /// Replace the seed of every job
    #[arg(long)]
    pub seed_override: Option<u64>,
}

/// Term budget from the environment, or the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET_TERMS)
}

/// Report file stem: <check>-<seed>, with a numeric suffix when a pair repeats.
pub fn report_stems(reports: &[JobReport]) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    reports
        .iter()
        .map(|r| {
            let stem = format!("{}-{}", r.check, r.seed);
            let k = seen.entry(stem.clone()).or_insert(0);
            *k += 1;
            if *k == 1 {
                stem
            } else {
                format!("{stem}-{k}")
            }
        })
        .collect()
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The flat table variant of a report: one `key,value` row per leaf.
pub fn report_csv(report: &JobReport) -> String {
    let mut rows = Vec::new();
    flatten("", &serde_json::to_value(report).expect("reports serialize"), &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
    }
    out
}

pub fn report_json(report: &JobReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes every report into `dir`; file contents depend only on the reports.
pub fn emit_reports(dir: &Path, reports: &[JobReport], format: Format) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (r, stem) in reports.iter().zip(report_stems(reports)) {
        let (ext, body) = match format {
            Format::Json => ("json", report_json(r)),
            Format::Csv => ("csv", report_csv(r)),
        };
        let path = dir.join(format!("{stem}.{ext}"));
        std::fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

pub fn summary_table(reports: &[JobReport]) -> String {
    let mut out = format!("{:<18} {:>20} {:<16} {:>8} {:>8}\n", "check", "seed", "status", "cases", "failures");
    for r in reports {
        out.push_str(&format!("{:<18} {:>20} {:<16} {:>8} {:>8}\n", r.check.name(), r.seed, r.status.label(), r.cases, r.failures));
    }
    out
}

/// Exit status for a finished run: 0 when everything passed (budget skips allowed unless strict).
pub fn exit_code(reports: &[JobReport], strict: bool) -> i32 {
    let bad = reports.iter().any(|r| match r.status {
        Status::Pass => false,
        Status::SkippedBudget => strict,
        Status::Fail | Status::Error => true,
    });
    bad as i32
}

/// Runs a parsed spec on the current thread pool.
pub fn run_spec(spec: &VerificationSpec, seed_override: Option<u64>, default_terms: u64) -> Vec<JobReport> {
    spec.jobs
        .par_iter()
        .map(|job| {
            let mut job = job.clone();
            if let Some(s) = seed_override {
                job.seed = s;
            }
            run_job(&job, default_terms)
        })
        .collect()
}

/// Full command-line behaviour; returns the process exit code.
pub fn run(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if args.list_checks {
        for c in CHECKS {
            let _ = writeln!(stdout, "{c}");
        }
        return 0;
    }
    let Some(path) = &args.spec else {
        let _ = writeln!(stderr, "error: --spec is required");
        return 2;
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return 2;
        }
    };
    let toml_front_end = path.extension().is_some_and(|e| e == "toml");
    let spec = match parse_spec(&text, toml_front_end) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return 2;
        }
    };
    for (i, job) in spec.jobs.iter().enumerate() {
        if let Err(e) = resolve_params(job.check, &job.params) {
            let _ = writeln!(stderr, "error: job {i} ({}): invalid params: {e}", job.check);
            return 2;
        }
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let default_terms = budget_from_env();
    let reports = pool.install(|| run_spec(&spec, args.seed_override, default_terms));
    if let Err(e) = emit_reports(&args.out, &reports, args.format) {
        let _ = writeln!(stderr, "error: writing reports: {e}");
        return 1;
    }
    let _ = write!(stdout, "{}", summary_table(&reports));
    exit_code(&reports, args.strict)
}
