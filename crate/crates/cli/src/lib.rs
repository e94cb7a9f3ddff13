//! The `wilker` command line: argument parsing, configuration layering and
//! report emission. Exit codes: 0 proved/holds, 1 falsified, 2
//! inconclusive, 3 usage or domain error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wilker_core::certify::statement::verify_statement_window;
use wilker_core::means::{bound_check, BoundForm, Side};
use wilker_core::report::{load_config, scan, Format, ReportBody, RunReport, Verdict};
use wilker_core::sharpness::{closed_thresholds, crossing_point, falsify, threshold_estimate};
use wilker_core::{verify_statement, CertifyConfig, Error, Params, Result, StatementId, Status, VerifyMode};

/// Environment variable naming a `key = value` configuration file.
pub const CONFIG_ENV: &str = "WILKER_CONFIG";

pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wilker", version, about = "Certify Wilker-type inequalities and recover their sharp exponents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `scan` defaults to csv, everything else to text.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
}

/// Overrides of the certification settings; these win over the file named
/// by `WILKER_CONFIG`.
#[derive(Args, Debug, Default)]
struct Tuning {
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    #[arg(long, global = true)]
    max_evaluations: Option<usize>,
    #[arg(long, global = true)]
    delta0: Option<f64>,
    /// Points used by sampled mode.
    #[arg(long = "sample-points", global = true)]
    sample_points: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a statement at (k, p).
    Verify {
        #[arg(long)]
        stmt: StatementId,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value = "certified")]
        mode: VerifyMode,
        /// Bisect only on `lo,hi` (no endpoint guards).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Recover the sharp exponent of a statement at k.
    Sharpness {
        #[arg(long)]
        stmt: StatementId,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Search for a point where a statement fails.
    Falsify {
        #[arg(long)]
        stmt: StatementId,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
    },
    /// Check a power-mean or H_r bound on a sample grid.
    Means {
        #[arg(long)]
        check: BoundForm,
        #[arg(long, allow_hyphen_values = true)]
        exponent: f64,
        #[arg(long)]
        side: Side,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Verdicts on an evenly spaced p grid.
    Scan {
        #[arg(long)]
        stmt: StatementId,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long = "p-from", allow_hyphen_values = true)]
        p_from: f64,
        #[arg(long = "p-to", allow_hyphen_values = true)]
        p_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "certified")]
        mode: VerifyMode,
    },
    /// The sign change of u for -12/(5(k+2)) < p < 0.
    Crossing {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn config(tuning: &Tuning) -> Result<CertifyConfig> {
    let mut cfg = match std::env::var_os(CONFIG_ENV) {
        Some(path) if !path.is_empty() => load_config(path.as_ref())?,
        _ => CertifyConfig::default(),
    };
    if let Some(v) = tuning.max_depth {
        cfg.max_depth = v;
    }
    if let Some(v) = tuning.max_evaluations {
        cfg.max_evaluations = v;
    }
    if let Some(v) = tuning.delta0 {
        cfg.delta0 = v;
    }
    if let Some(v) = tuning.sample_points {
        cfg.samples = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("window '{s}' must look like lo,hi"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn mode_name(mode: VerifyMode) -> &'static str {
    match mode {
        VerifyMode::Certified => "certified",
        VerifyMode::Sampled => "sampled",
    }
}

fn execute(cli: &Cli) -> Result<(RunReport, Format)> {
    let cfg = config(&cli.tuning)?;
    let text = cli.format.unwrap_or(Format::Text);
    let report = match &cli.command {
        Command::Verify { stmt, k, p, mode, window } => {
            let params = Params::new(*k, *p)?;
            let cert = match window {
                Some(w) => verify_statement_window(*stmt, params, parse_window(w)?, &cfg)?,
                None => verify_statement(*stmt, params, *mode, &cfg)?,
            };
            let mode = if window.is_some() { "certified-window" } else { mode_name(*mode) };
            let thresholds = closed_thresholds(params.k).ok();
            let verdict = Verdict::from_status(cert.status);
            RunReport::new("verify", stmt.as_str(), Some(params), mode, verdict, ReportBody::Certificate(cert), thresholds)?
        }
        Command::Sharpness { stmt, k, tol } => {
            let est = threshold_estimate(*stmt, *k, *tol, &cfg)?;
            let k = stmt.fixed_k().unwrap_or(*k);
            let verdict = if est.inside == Status::Proved && est.outside == Status::Falsified {
                Verdict::Holds
            } else {
                Verdict::Inconclusive
            };
            let thresholds = Some(closed_thresholds(k)?);
            RunReport::new("sharpness", stmt.as_str(), None, "sampled+certified", verdict, ReportBody::Threshold(est), thresholds)?
        }
        Command::Falsify { stmt, k, p } => {
            let params = Params::new(*k, *p)?;
            let witness = falsify(*stmt, params)?;
            let verdict = if witness.is_some() { Verdict::Falsified } else { Verdict::Inconclusive };
            RunReport::new("falsify", stmt.as_str(), Some(params), "search", verdict, ReportBody::Witness { witness }, None)?
        }
        Command::Means { check, exponent, side, samples } => {
            let v = bound_check(*check, *exponent, *side, *samples)?;
            let verdict = if v.holds { Verdict::Holds } else { Verdict::Fails };
            RunReport::new("means", check.as_str(), None, "sampled", verdict, ReportBody::Bound(v), None)?
        }
        Command::Scan { stmt, k, p_from, p_to, steps, mode } => {
            let rows = scan(*stmt, *k, *p_from, *p_to, *steps, *mode, &cfg)?;
            let thresholds = closed_thresholds(stmt.fixed_k().unwrap_or(*k)).ok();
            let body = ReportBody::Scan { rows };
            let r = RunReport::new("scan", stmt.as_str(), None, mode_name(*mode), Verdict::Completed, body, thresholds)?;
            return Ok((r, cli.format.unwrap_or(Format::Csv)));
        }
        Command::Crossing { k, p, tol } => {
            let c = crossing_point(*k, *p, *tol)?;
            let verdict =
                if c.sign_changes == 1 && c.residual.abs() <= 1e-10 { Verdict::Holds } else { Verdict::Inconclusive };
            let params = Params::new(*k, *p)?;
            RunReport::new("crossing", "crossing", Some(params), "bisection", verdict, ReportBody::Crossing(c), None)?
        }
    };
    Ok((report, text))
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli).and_then(|(report, format)| {
        report.emit(format, cli.out.as_deref())?;
        Ok(report.exit_code())
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wilker: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("0.1, 1.2").unwrap(), (0.1, 1.2));
        assert!(parse_window("0.1").is_err());
        assert!(parse_window("a,b").is_err());
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(["wilker", "verify", "--stmt", "Main4", "--k", "-3", "--p", "-1"]).unwrap();
        match cli.command {
            Command::Verify { k, p, .. } => assert_eq!((k, p), (-3.0, -1.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tuning_flags_override() {
        let t = Tuning { max_depth: Some(3), delta0: Some(1e-2), ..Tuning::default() };
        let cfg = config(&t).unwrap();
        assert_eq!((cfg.max_depth, cfg.delta0), (3, 1e-2));
        assert!(config(&Tuning { delta0: Some(-1.0), ..Tuning::default() }).is_err());
    }

    #[test]
    fn usage_errors() {
        let e = Cli::try_parse_from(["wilker", "verify", "--stmt", "Main1"]).unwrap_err();
        assert!(e.use_stderr());
        let args = ["wilker", "scan", "--stmt", "Main1", "--k", "1", "--p-from", "0", "--p-to", "1", "--steps", "1"];
        let cli = Cli::try_parse_from(args).unwrap();
        assert!(matches!(execute(&cli), Err(Error::Config(_))));
    }
}
