//! The `waki` command line: `build`, `verify`, `export` and `selftest`.
//!
//! Exit codes: 0 success, 1 failed check, 2 configuration error,
//! 3 incompatible automorphism and grading.

mod config;
pub mod goldens;
mod pipeline;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{parse_split, AlgebraConfig, AutomorphismConfig, ElemSpec, GradingConfig, Number, RunConfig, VerificationConfig, ALL_CHECKS};
pub use pipeline::{
    basis_label, build_json, build_latex, elem_text, lemma_check, path_check, run_verify, LevelReport, Pipeline,
    StaticCheck, VerifyOutput, VerifyPlan,
};

use crate::currents::Mutation;
use crate::error::{Result, WakiError};
use crate::exactnum::{parse_q, CycNum};
use crate::fockcheck::VerifyOptions;

#[derive(Parser, Debug)]
#[command(name = "waki", version, about = "Twisted Wakimoto realizations with exact verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the level, e.g. `5/7`.
    #[arg(long)]
    pub level: Option<String>,
    /// Split convention of twisted normal products: standard | shifted.
    #[arg(long)]
    pub split: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct the currents and print them.
    Build {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the checks and print a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cutoff: Option<i64>,
        /// Mode window `A..B`.
        #[arg(long, allow_hyphen_values = true)]
        modes: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
        /// Add the lowest monomial of matching twist class to the correction term
        /// of the given current (1-based joint index).
        #[arg(long)]
        mutate_theta: Option<usize>,
        /// Add 1 to `Lambda_{alpha,b}`, given as `alpha,b` (1-based).
        #[arg(long)]
        mutate_lambda: Option<String>,
        /// Stop at the first failing check.
        #[arg(long)]
        fail_fast: bool,
    },
    /// Write the build output to a file.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output directory; prints to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quick built-in consistency run.
    Selftest {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut out = std::io::stdout().lock();
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &WakiError) -> i32 {
    match e {
        WakiError::Incompatible(_) => 3,
        _ => 2,
    }
}

fn load(common: &Common) -> Result<Pipeline> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(l) = &common.level {
        parse_q(l).map_err(|e| WakiError::config("--level", e.to_string()))?;
        cfg.level = Number::Text(l.clone());
        cfg.verification.levels = None;
    }
    if let Some(s) = &common.split {
        parse_split(s).map_err(|m| WakiError::config("--split", m))?;
        cfg.verification.split = s.clone();
    }
    Pipeline::new(cfg)
}

fn parse_modes(s: &str) -> Result<(i64, i64)> {
    let bad = || WakiError::config("--modes", format!("expected A..B, got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Seed for sample states, from `WAKI_SEED`.
pub fn seed_from_env() -> Result<u64> {
    match std::env::var("WAKI_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| WakiError::config("WAKI_SEED", format!("not an integer: '{s}'"))),
        Err(_) => Ok(0),
    }
}

fn json_text(v: &impl serde::Serialize) -> Result<String> {
    let value = serde_json::to_value(v).map_err(|e| WakiError::Other(e.to_string()))?;
    serde_json::to_string_pretty(&value).map_err(|e| WakiError::Other(e.to_string()))
}

fn build_text(p: &Pipeline, format: Format) -> Result<String> {
    let cfg = &p.config;
    let r = p.realization(&cfg.level.to_q("level")?)?;
    let split = cfg.split()?;
    match format {
        Format::Json => json_text(&build_json(&cfg.display_name(), &r, split)?),
        Format::Latex => build_latex(&r, split),
    }
}

fn io_err(e: std::io::Error) -> WakiError {
    WakiError::Other(e.to_string())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Build { common, format } => {
            let p = load(&common)?;
            writeln!(out, "{}", build_text(&p, format)?).map_err(io_err)?;
            Ok(0)
        }
        Command::Export { common, format, out: dir } => {
            let p = load(&common)?;
            let text = build_text(&p, format)?;
            match dir {
                None => writeln!(out, "{text}").map_err(io_err)?,
                Some(d) => {
                    std::fs::create_dir_all(&d).map_err(io_err)?;
                    let ext = if format == Format::Json { "json" } else { "tex" };
                    let path = d.join(format!("{}.{ext}", p.config.display_name()));
                    std::fs::write(&path, text + "\n").map_err(io_err)?;
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(0)
        }
        Command::Verify { common, cutoff, modes, samples, jobs, timings, mutate_theta, mutate_lambda, fail_fast } => {
            let p = load(&common)?;
            let v = &p.config.verification;
            let dim = p.graded.dim();
            let mutation = match (mutate_theta, mutate_lambda) {
                (Some(a), _) if a == 0 || a > dim => {
                    return Err(WakiError::config("--mutate-theta", "index out of range"));
                }
                (Some(a), _) => {
                    let r = p.realization(&p.config.level.to_q("level")?)?;
                    let mono = r.class_monomial(a - 1);
                    if mono.is_none() {
                        return Err(WakiError::config("--mutate-theta", "no monomial of matching class"));
                    }
                    Some(Mutation::Theta { a: a - 1, mono, delta: CycNum::from_int(1) })
                }
                (None, Some(s)) => {
                    let bad = || WakiError::config("--mutate-lambda", "expected alpha,b");
                    let (x, y) = s.split_once(',').ok_or_else(bad)?;
                    let alpha: usize = x.trim().parse().map_err(|_| bad())?;
                    let b: usize = y.trim().parse().map_err(|_| bad())?;
                    if alpha == 0 || alpha > p.graded.n_minus || b == 0 || b > dim {
                        return Err(bad());
                    }
                    Some(Mutation::Lambda { alpha: alpha - 1, b: b - 1, mono: None, delta: CycNum::from_int(1) })
                }
                (None, None) => None,
            };
            let options = VerifyOptions {
                modes: match modes {
                    Some(m) => parse_modes(&m)?,
                    None => v.modes,
                },
                cutoff: cutoff.unwrap_or(v.cutoff),
                samples: samples.unwrap_or(v.samples),
                seed: seed_from_env()?,
                jobs,
                max_failures: v.max_failures,
                fail_fast,
            };
            let plan = VerifyPlan {
                levels: p.config.check_levels()?,
                split: p.config.split()?,
                checks: v.checks.clone(),
                options,
                mutation,
                timings,
            };
            let report = run_verify(&p, &plan)?;
            writeln!(out, "{}", json_text(&report)?).map_err(io_err)?;
            if !report.passed {
                eprintln!("verification failed");
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Selftest { jobs } => selftest(jobs, out),
    }
}

const SELFTEST_CONFIGS: [(&str, &str); 2] = [
    (
        "sl2_untwisted",
        r#"
name = "sl2_untwisted"
level = "5/7"
algebra = { preset = "sl", n = 2 }
grading = { h = "principal" }
"#,
    ),
    (
        "sl2_twisted_n2",
        r#"
name = "sl2_twisted_n2"
level = 1
algebra = { preset = "sl", n = 2 }
automorphism = { kind = "inner", theta = "principal", order = 2 }
grading = { h = "principal" }
"#,
    ),
];

fn selftest(jobs: usize, out: &mut dyn Write) -> Result<i32> {
    let mut all = true;
    for (name, text) in SELFTEST_CONFIGS {
        let p = Pipeline::new(RunConfig::from_toml(text, name)?)?;
        let r = p.realization(&p.config.level.to_q("level")?)?;
        let goldens = goldens::sl2_goldens(&r)?;
        let ok = goldens.iter().all(|g| g.matches());
        writeln!(out, "{name} currents: {}", if ok { "ok" } else { "FAILED" }).map_err(io_err)?;
        all &= ok;
        let plan = VerifyPlan {
            levels: vec![p.config.level.to_q("level")?],
            split: p.config.split()?,
            checks: ALL_CHECKS.iter().map(|s| s.to_string()).collect(),
            options: VerifyOptions { modes: (-1, 1), cutoff: 2, samples: 2, seed: 0, jobs, max_failures: 3, fail_fast: false },
            mutation: None,
            timings: false,
        };
        let rep = run_verify(&p, &plan)?;
        writeln!(out, "{name} checks: {}", if rep.passed { "ok" } else { "FAILED" }).map_err(io_err)?;
        all &= rep.passed;
    }
    Ok(if all { 0 } else { 1 })
}
