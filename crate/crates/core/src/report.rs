//! Machine-readable run reports (JSON, CSV, text), the `p`-scan grid and the
//! `key = value` configuration file.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{verify_statement, Certificate, CertifyConfig, Status, StatementId, VerifyMode};
use crate::error::{Error, Result};
use crate::interval::Precision;
use crate::kernels::Params;
use crate::means::BoundVerdict;
use crate::sharpness::{Crossing, SharpConstants, ThresholdEstimate};

/// Significant digits of every number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Serde helper writing non-finite floats as the strings `"inf"`, `"-inf"`
/// and `"nan"` (JSON has no such numbers).
pub mod nonfinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; idempotent.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Formats a number at [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 || (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Overall outcome of a run; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proved,
    Falsified,
    Inconclusive,
    Holds,
    Fails,
    /// A computation with no truth value (a scan) that finished.
    Completed,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Proved | Verdict::Holds | Verdict::Completed => 0,
            Verdict::Falsified | Verdict::Fails => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn from_status(s: Status) -> Self {
        match s {
            Status::Proved => Verdict::Proved,
            Status::Falsified => Verdict::Falsified,
            Status::Inconclusive => Verdict::Inconclusive,
        }
    }
}

/// One row of a `p` scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: f64,
    pub p: f64,
    pub verdict: Status,
    pub witness: Option<f64>,
    #[serde(with = "nonfinite")]
    pub min_margin: f64,
}

/// Payload of a report, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Certificate(Certificate),
    Threshold(ThresholdEstimate),
    Witness { witness: Option<f64> },
    Bound(BoundVerdict),
    Scan { rows: Vec<ScanRow> },
    Crossing(Crossing),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Statement id, or the bound id for `means`.
    pub statement: String,
    pub params: Option<Params>,
    pub mode: String,
    pub verdict: Verdict,
    pub certificate: ReportBody,
    pub thresholds: Option<SharpConstants>,
    pub timestamp: String,
    pub tool_version: String,
    pub precision_used: String,
}

impl RunReport {
    /// A report stamped with the current time, with every number already
    /// rounded to [`SIGNIFICANT_DIGITS`] so that emitting and parsing it back
    /// gives an equal value.
    pub fn new(
        command: impl Into<String>,
        statement: impl Into<String>,
        params: Option<Params>,
        mode: impl Into<String>,
        verdict: Verdict,
        certificate: ReportBody,
        thresholds: Option<SharpConstants>,
    ) -> Result<Self> {
        let report = Self {
            command: command.into(),
            statement: statement.into(),
            params,
            mode: mode.into(),
            verdict,
            certificate,
            thresholds,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            precision_used: Precision::Binary64.description().to_string(),
        };
        report.rounded()
    }

    fn rounded(&self) -> Result<Self> {
        let mut v = serde_json::to_value(self).map_err(ser)?;
        round_value(&mut v);
        serde_json::from_value(v).map_err(ser)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(ser)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(ser)
    }

    /// CSV with header `k,p,verdict,witness,min_margin`: the scan rows, or a
    /// single row for reports carrying one certificate.
    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<ScanRow> = match &self.certificate {
            ReportBody::Scan { rows } => rows.clone(),
            ReportBody::Certificate(c) => {
                let p = self.params.ok_or_else(|| Error::Config("csv output needs parameters".into()))?;
                vec![ScanRow { k: p.k, p: p.p, verdict: c.status, witness: c.witness, min_margin: c.min_margin }]
            }
            _ => return Err(Error::Config(format!("csv output is not available for '{}'", self.command))),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "p", "verdict", "witness", "min_margin"]).map_err(ser)?;
        for r in rows {
            let status = serde_json::to_value(r.verdict).map_err(ser)?;
            w.write_record([
                fmt_num(r.k),
                fmt_num(r.p),
                status.as_str().unwrap_or_default().to_string(),
                r.witness.map(fmt_num).unwrap_or_default(),
                fmt_num(r.min_margin),
            ])
            .map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(ser)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command:   {}", self.command);
        let _ = writeln!(s, "statement: {}", self.statement);
        if let Some(p) = self.params {
            let _ = writeln!(s, "params:    k = {}, p = {}", fmt_num(p.k), fmt_num(p.p));
        }
        let _ = writeln!(s, "mode:      {} ({})", self.mode, self.precision_used);
        let _ = writeln!(s, "verdict:   {}", verdict_name(self.verdict));
        match &self.certificate {
            ReportBody::Certificate(c) => text_certificate(&mut s, c),
            ReportBody::Threshold(t) => {
                let _ = writeln!(s, "threshold: {} +- {}", fmt_num(t.threshold), fmt_num(t.tol));
                let _ = writeln!(s, "inside:    p = {} -> {:?}", fmt_num(t.inside_p), t.inside);
                let _ = writeln!(s, "outside:   p = {} -> {:?}", fmt_num(t.outside_p), t.outside);
            }
            ReportBody::Witness { witness } => {
                let w = witness.map_or_else(|| "none found".to_string(), fmt_num);
                let _ = writeln!(s, "witness:   {w}");
            }
            ReportBody::Bound(b) => {
                let _ = writeln!(s, "samples:   {} ({} violations)", b.samples, b.violations);
                let _ = writeln!(s, "worst:     {} at {:?}", fmt_num(b.worst_margin), b.worst_at);
            }
            ReportBody::Scan { rows } => {
                let _ = writeln!(s, "rows:      {}", rows.len());
            }
            ReportBody::Crossing(c) => {
                let _ = writeln!(s, "x0:        {}", fmt_num(c.x0));
                let _ = writeln!(s, "u(x0):     {}", fmt_num(c.residual));
                let _ = writeln!(s, "sign changes on (0, {}]: {}", fmt_num(c.cutoff), c.sign_changes);
            }
        }
        if let Some(t) = self.thresholds {
            let _ = writeln!(
                s,
                "closed form: trig {}, series {}",
                fmt_num(t.trig_threshold),
                fmt_num(t.series_threshold)
            );
        }
        s
    }

    /// Writes the report in `format` to `path`, or to stdout when `path` is
    /// `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let text = match format {
            Format::Json => self.to_json()? + "\n",
            Format::Csv => self.to_csv()?,
            Format::Text => self.to_text(),
        };
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Proved => "proved",
        Verdict::Falsified => "falsified",
        Verdict::Inconclusive => "inconclusive",
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Completed => "completed",
    }
}

fn text_certificate(s: &mut String, c: &Certificate) {
    let _ = writeln!(s, "window:    ({}, {})", fmt_num(c.window.0), fmt_num(c.window.1));
    let _ = writeln!(s, "origin:    {:?} {}", c.guards.origin.status, c.guards.origin.justification);
    let _ = writeln!(s, "far end:   {:?} {}", c.guards.far_end.status, c.guards.far_end.justification);
    if let Some(w) = c.witness {
        let _ = writeln!(s, "witness:   {}", fmt_num(w));
    }
    let _ = writeln!(s, "subintervals: {}, evaluations: {}", c.subintervals, c.evaluations);
    let _ = writeln!(s, "min margin: {}", fmt_num(c.min_margin));
    for l in &c.links {
        let _ = writeln!(
            s,
            "  link {}{}: {:?}",
            l.name,
            if l.strict { "" } else { " (non-strict)" },
            l.certificate.status
        );
    }
}

fn ser(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

fn round_value(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                if let Some(r) = serde_json::Number::from_f64(round_sig(f)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Config(format!("unknown format '{s}' (expected json, csv or text)"))),
        }
    }
}

/// Verifies `stmt` at `steps` evenly spaced `p` in `[p_from, p_to]`. Rows
/// come back in grid order.
pub fn scan(
    stmt: StatementId,
    k: f64,
    p_from: f64,
    p_to: f64,
    steps: usize,
    mode: VerifyMode,
    cfg: &CertifyConfig,
) -> Result<Vec<ScanRow>> {
    if steps < 2 {
        return Err(Error::Config("a scan needs at least 2 steps".into()));
    }
    if !(p_from.is_finite() && p_to.is_finite()) {
        return Err(Error::Domain("scan bounds must be finite".into()));
    }
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let p = round_sig(p_from + (p_to - p_from) * i as f64 / (steps - 1) as f64);
            let params = Params::new(k, p)?;
            let c = verify_statement(stmt, params, mode, cfg)?;
            Ok(ScanRow { k, p, verdict: c.status, witness: c.witness, min_margin: c.min_margin })
        })
        .collect()
}

/// Applies one `key = value` setting to a configuration.
pub fn apply_setting(cfg: &mut CertifyConfig, key: &str, value: &str) -> Result<()> {
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
        v.parse().map_err(|_| Error::Config(format!("bad value '{v}' for {key}")))
    }
    match key {
        "max_depth" => cfg.max_depth = num(key, value)?,
        "delta0" => cfg.delta0 = num(key, value)?,
        "trig_end_offset" => cfg.trig_end_offset = num(key, value)?,
        "hyp_fallback_hi" => cfg.hyp_fallback_hi = num(key, value)?,
        "min_width" => cfg.min_width = num(key, value)?,
        "max_evaluations" => cfg.max_evaluations = num(key, value)?,
        "samples" => cfg.samples = num(key, value)?,
        "chunks" => cfg.chunks = num(key, value)?,
        "precision" if value.eq_ignore_ascii_case("binary64") => cfg.precision = Precision::Binary64,
        _ => return Err(Error::Config(format!("unknown setting '{key}' = '{value}'"))),
    }
    Ok(())
}

/// Parses a `key = value` configuration; blank lines and `#` comments are
/// skipped.
pub fn parse_config(text: &str, mut cfg: CertifyConfig) -> Result<CertifyConfig> {
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        apply_setting(&mut cfg, k.trim(), v.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<CertifyConfig> {
    parse_config(&std::fs::read_to_string(path)?, CertifyConfig::default())
}
