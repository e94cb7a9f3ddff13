//! Sign certification of `f` and `u` (and of any [`ExpLogForm`]) on open or
//! unbounded domains: adaptive interval bisection on a compact window plus
//! analytic guards for the two excluded ends.

pub mod guards;
pub mod statement;

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use guards::{far_end_guard_form, guard_far_end, guard_origin, origin_guard_form};
pub use statement::{verify_statement, verify_statement_window, StatementId};

use crate::error::{Error, Result};
use crate::interval::{Interval, Precision};
use crate::kernels::{wilker_form, ExpLogForm, Family, KernelId, Params, DEFAULT_TERMS};

/// The sign a statement asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Positive,
    Negative,
}

impl Claim {
    pub fn sign(self) -> f64 {
        match self {
            Claim::Positive => 1.0,
            Claim::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Claim {
        match self {
            Claim::Positive => Claim::Negative,
            Claim::Negative => Claim::Positive,
        }
    }

    /// Claim of the same sign as `s`.
    pub fn of_sign(s: f64) -> Claim {
        if s < 0.0 {
            Claim::Negative
        } else {
            Claim::Positive
        }
    }

    /// Every value in `v` strictly satisfies the claim.
    pub fn holds(self, v: Interval) -> bool {
        match self {
            Claim::Positive => v.lo() > 0.0,
            Claim::Negative => v.hi() < 0.0,
        }
    }

    /// Every value in `v` violates the (strict) claim.
    pub fn violated(self, v: Interval) -> bool {
        match self {
            Claim::Positive => v.hi() <= 0.0,
            Claim::Negative => v.lo() >= 0.0,
        }
    }

    /// Signed distance of `v` from zero in the claimed direction.
    pub fn margin(self, v: Interval) -> f64 {
        match self {
            Claim::Positive => v.lo(),
            Claim::Negative => -v.hi(),
        }
    }

    pub fn value_holds(self, v: f64) -> bool {
        v * self.sign() > 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Falsified,
    Inconclusive,
}

/// Outcome of an endpoint guard. `PassBoundary` means the guard holds with
/// the limiting value (or a leading coefficient) enclosing zero: the claim is
/// established for parameters exactly on a sharp threshold, non-strictly at
/// the endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuardStatus {
    Pass,
    PassBoundary,
    Fail,
    Unused,
}

impl GuardStatus {
    pub fn is_pass(self) -> bool {
        matches!(self, GuardStatus::Pass | GuardStatus::PassBoundary)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuardReport {
    pub status: GuardStatus,
    pub justification: String,
    /// Window end the guard hands over to (`delta` at the origin, the
    /// dominance cutoff at infinity).
    pub cutoff: Option<f64>,
}

impl GuardReport {
    pub fn unused() -> Self {
        Self { status: GuardStatus::Unused, justification: String::new(), cutoff: None }
    }

    pub(crate) fn pass(justification: impl Into<String>, cutoff: Option<f64>) -> Self {
        Self { status: GuardStatus::Pass, justification: justification.into(), cutoff }
    }

    pub(crate) fn boundary(justification: impl Into<String>, cutoff: Option<f64>) -> Self {
        Self { status: GuardStatus::PassBoundary, justification: justification.into(), cutoff }
    }

    pub(crate) fn fail(justification: impl Into<String>) -> Self {
        Self { status: GuardStatus::Fail, justification: justification.into(), cutoff: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guards {
    pub origin: GuardReport,
    pub far_end: GuardReport,
}

impl Guards {
    pub fn unused() -> Self {
        Self { origin: GuardReport::unused(), far_end: GuardReport::unused() }
    }

    fn allow_proved(&self) -> bool {
        let ok = |g: &GuardReport| g.status.is_pass() || g.status == GuardStatus::Unused;
        ok(&self.origin) && ok(&self.far_end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Certified,
    Sampled,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "certified" => Ok(VerifyMode::Certified),
            "sampled" => Ok(VerifyMode::Sampled),
            _ => Err(Error::Config(format!("unknown mode '{s}' (expected certified or sampled)"))),
        }
    }
}

/// Verdict for one link of a chain of inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkVerdict {
    pub name: String,
    /// False for links written with `>=`.
    pub strict: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: Status,
    pub mode: VerifyMode,
    pub claim: Claim,
    pub window: (f64, f64),
    pub guards: Guards,
    pub witness: Option<f64>,
    pub subintervals: usize,
    pub evaluations: usize,
    /// Smallest certified distance from zero over accepted subintervals
    /// (sampled mode: over sample values).
    #[serde(with = "crate::report::nonfinite")]
    pub min_margin: f64,
    pub precision_used: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<LinkVerdict>,
}

impl Certificate {
    fn new(claim: Claim, mode: VerifyMode, window: (f64, f64), precision: Precision) -> Self {
        Self {
            status: Status::Inconclusive,
            mode,
            claim,
            window,
            guards: Guards::unused(),
            witness: None,
            subintervals: 0,
            evaluations: 0,
            min_margin: f64::INFINITY,
            precision_used: precision.description().to_string(),
            links: Vec::new(),
        }
    }

    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }
}

/// Tuning of the certification loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub max_depth: u32,
    /// Lower window end; the origin guard covers `(0, delta0]`.
    pub delta0: f64,
    /// Trig windows end at `pi/2 - trig_end_offset`.
    pub trig_end_offset: f64,
    /// Upper hyperbolic window end when no dominance cutoff is found.
    pub hyp_fallback_hi: f64,
    pub min_width: f64,
    pub precision: Precision,
    /// Total interval evaluations before giving up.
    pub max_evaluations: usize,
    /// Points used by sampled mode.
    pub samples: usize,
    /// Independent chunks the window is split into.
    pub chunks: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            max_depth: 40,
            delta0: 1e-3,
            trig_end_offset: 1e-3,
            hyp_fallback_hi: 50.0,
            min_width: 1e-12,
            precision: Precision::Binary64,
            max_evaluations: 1_000_000,
            samples: 10_000,
            chunks: 32,
        }
    }
}

impl CertifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if !(self.delta0 > 0.0 && self.delta0 <= crate::kernels::SWITCH_RADIUS) {
            return Err(Error::Config(format!("delta0 = {} must lie in (0, 1/4]", self.delta0)));
        }
        if !(self.trig_end_offset > 0.0 && self.trig_end_offset < FRAC_PI_2 - self.delta0) {
            return Err(Error::Config("trig_end_offset leaves an empty window".into()));
        }
        if !(self.hyp_fallback_hi > self.delta0) || !self.hyp_fallback_hi.is_finite() {
            return Err(Error::Config("hyp_fallback_hi must exceed delta0".into()));
        }
        if !(self.min_width > 0.0) {
            return Err(Error::Config("min_width must be positive".into()));
        }
        if self.samples < 2 || self.chunks < 1 || self.max_evaluations < self.chunks {
            return Err(Error::Config("samples, chunks and max_evaluations are too small".into()));
        }
        Ok(())
    }

    pub(crate) fn trig_hi(&self) -> f64 {
        FRAC_PI_2 - self.trig_end_offset
    }
}

fn check_window(family: Family, window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    let top = match family {
        Family::Trig => FRAC_PI_2,
        Family::Hyp => f64::INFINITY,
    };
    if !(lo > 0.0 && lo < hi && hi < top && hi.is_finite()) {
        return Err(Error::Config(format!("window ({lo}, {hi}) is empty or leaves the domain")));
    }
    Ok(())
}

fn form_of(kernel: KernelId, params: Params) -> Result<ExpLogForm> {
    match kernel {
        KernelId::WilkerF => Ok(wilker_form(Family::Trig, params)),
        KernelId::WilkerU => Ok(wilker_form(Family::Hyp, params)),
        other => Err(Error::Config(format!("sign certification supports f and u, not {other:?}"))),
    }
}

/// Adaptive bisection of `f` or `u` on `window` alone; guards are not run
/// and are reported as unused.
pub fn prove_sign(
    kernel: KernelId,
    params: Params,
    claim: Claim,
    window: (f64, f64),
    config: &CertifyConfig,
) -> Result<Certificate> {
    let form = form_of(kernel, params)?;
    prove_form_sign(&form, claim, window, config)
}

/// [`prove_sign`] for an arbitrary form.
pub fn prove_form_sign(
    form: &ExpLogForm,
    claim: Claim,
    window: (f64, f64),
    config: &CertifyConfig,
) -> Result<Certificate> {
    config.validate()?;
    check_window(form.family(), window)?;
    Ok(bisect(form, claim, window, config))
}

struct ChunkOutcome {
    witness: Option<f64>,
    inconclusive: bool,
    subintervals: usize,
    evaluations: usize,
    min_margin: f64,
}

fn split_point(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 4.0 * a {
        (a * b).sqrt()
    } else {
        a + 0.5 * (b - a)
    }
}

fn bisect_chunk(form: &ExpLogForm, claim: Claim, lo: f64, hi: f64, cfg: &CertifyConfig, budget: usize) -> ChunkOutcome {
    let mut out =
        ChunkOutcome { witness: None, inconclusive: false, subintervals: 0, evaluations: 0, min_margin: f64::INFINITY };
    let mut stack = vec![(lo, hi, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        if out.evaluations >= budget {
            out.inconclusive = true;
            break;
        }
        out.evaluations += 1;
        let enc = form.enclose(Interval::raw(a, b), DEFAULT_TERMS).ok();
        if let Some(e) = enc {
            if claim.holds(e) {
                out.subintervals += 1;
                out.min_margin = out.min_margin.min(claim.margin(e));
                continue;
            }
            if claim.violated(e) {
                out.witness = Some(split_point(a, b));
                break;
            }
        }
        let m = split_point(a, b);
        out.evaluations += 1;
        if let Ok(pe) = form.enclose(Interval::point(m), DEFAULT_TERMS) {
            if claim.violated(pe) {
                out.witness = Some(m);
                break;
            }
        }
        if depth >= cfg.max_depth || b - a < cfg.min_width || m <= a || m >= b {
            out.inconclusive = true;
            continue;
        }
        stack.push((m, b, depth + 1));
        stack.push((a, m, depth + 1));
    }
    out
}

/// Log-spaced chunk boundaries of `[lo, hi]`.
fn chunk_edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    let mut edges: Vec<f64> = (0..=n).map(|i| (l + (h - l) * i as f64 / n as f64).exp()).collect();
    edges[0] = lo;
    edges[n] = hi;
    edges.dedup();
    edges
}

pub(crate) fn bisect(form: &ExpLogForm, claim: Claim, window: (f64, f64), cfg: &CertifyConfig) -> Certificate {
    let mut cert = Certificate::new(claim, VerifyMode::Certified, window, cfg.precision);
    if form.is_identically_zero() {
        cert.status = Status::Falsified;
        cert.witness = Some(window.0);
        cert.evaluations = 1;
        cert.min_margin = 0.0;
        return cert;
    }
    let edges = chunk_edges(window.0, window.1, cfg.chunks);
    let budget = cfg.max_evaluations / (edges.len() - 1).max(1);
    let outcomes: Vec<ChunkOutcome> = edges
        .par_windows(2)
        .map(|w| bisect_chunk(form, claim, w[0], w[1], cfg, budget))
        .collect();
    let mut inconclusive = false;
    for o in &outcomes {
        cert.subintervals += o.subintervals;
        cert.evaluations += o.evaluations;
        cert.min_margin = cert.min_margin.min(o.min_margin);
        inconclusive |= o.inconclusive;
        if cert.witness.is_none() {
            cert.witness = o.witness;
        }
    }
    cert.status = if cert.witness.is_some() {
        Status::Falsified
    } else if inconclusive {
        Status::Inconclusive
    } else {
        Status::Proved
    };
    cert
}

/// Window upper end for a form, given the far-end guard outcome.
fn window_hi(form: &ExpLogForm, far: &GuardReport, cfg: &CertifyConfig) -> f64 {
    match form.family() {
        Family::Trig => cfg.trig_hi(),
        Family::Hyp => far.cutoff.filter(|_| far.status.is_pass()).unwrap_or(cfg.hyp_fallback_hi),
    }
}

/// Full certified run on the whole open domain: origin guard, window
/// bisection and far-end guard. A failing guard downgrades Proved to
/// Inconclusive unless a witness is found in the guarded region.
pub fn certify_form(form: &ExpLogForm, claim: Claim, cfg: &CertifyConfig) -> Result<Certificate> {
    cfg.validate()?;
    let origin = origin_guard_form(form, claim, cfg.delta0);
    let far = far_end_guard_form(form, claim, cfg);
    let hi = window_hi(form, &far, cfg).max(cfg.delta0 * 2.0);
    let mut cert = bisect(form, claim, (cfg.delta0, hi), cfg);
    cert.guards = Guards { origin, far_end: far };
    if cert.status == Status::Proved && !cert.guards.allow_proved() {
        cert.status = Status::Inconclusive;
    }
    if cert.status == Status::Inconclusive {
        if let Some(w) = crate::sharpness::falsify_form(form, claim) {
            cert.status = Status::Falsified;
            cert.witness = Some(w);
        }
    }
    Ok(cert)
}

/// Sign of the leading nonvanishing Taylor coefficient of a form, skipping
/// coefficients whose enclosure contains zero.
pub(crate) fn origin_sign(form: &ExpLogForm) -> Option<f64> {
    (form.known_zeros()..=crate::kernels::series::MAX_TERMS)
        .map(|j| form.coeff(j))
        .find(|c| !c.contains_zero())
        .map(|c| c.mid().signum())
}

/// Sign of the form at the far end of its domain: `Some(0.0)` when the limit
/// encloses zero.
pub(crate) fn far_end_sign(form: &ExpLogForm) -> Option<f64> {
    use crate::kernels::EndpointLimit;
    match form.family() {
        Family::Trig => match form.trig_endpoint_limit() {
            EndpointLimit::PlusInfinity => Some(1.0),
            EndpointLimit::MinusInfinity => Some(-1.0),
            EndpointLimit::Finite(v) if v.contains_zero() => Some(0.0),
            EndpointLimit::Finite(v) => Some(v.mid().signum()),
            EndpointLimit::Unknown => None,
        },
        Family::Hyp => guards::hyp_asymptotic_sign(form),
    }
}

/// Sample points covering the domain, denser near both ends.
pub(crate) fn sample_points(family: Family, n: usize) -> Vec<f64> {
    let quarter = (n / 4).max(1);
    let mut xs = Vec::with_capacity(n);
    let logspace = |lo: f64, hi: f64, m: usize| -> Vec<f64> {
        (0..m).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (m - 1).max(1) as f64).exp()).collect()
    };
    match family {
        Family::Trig => {
            xs.extend(logspace(1e-4, 1.0, quarter));
            xs.extend((1..=n - 3 * quarter).map(|i| FRAC_PI_2 * i as f64 / (n - 3 * quarter + 1) as f64));
            xs.extend(logspace(1e-8, 1.0, quarter).into_iter().map(|d| FRAC_PI_2 - d));
            xs.extend(logspace(1e-3, 1.5, quarter));
        }
        Family::Hyp => {
            xs.extend(logspace(1e-4, 1.0, quarter));
            xs.extend((1..=n - 3 * quarter).map(|i| 20.0 * i as f64 / (n - 3 * quarter) as f64));
            xs.extend(logspace(1.0, 1e3, 2 * quarter));
        }
    }
    xs.retain(|&x| x > 0.0 && (family == Family::Hyp || x < FRAC_PI_2));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Cheap sampled decision used inside threshold bisection: every sample has
/// the claimed sign, and so do the leading origin coefficient and the far-end
/// behaviour (a far-end limit of exactly zero is accepted).
pub fn sampled_holds(form: &ExpLogForm, claim: Claim, samples: usize) -> bool {
    if form.is_identically_zero() {
        return false;
    }
    if origin_sign(form).is_some_and(|s| s != claim.sign()) {
        return false;
    }
    if far_end_sign(form).is_some_and(|s| s != 0.0 && s != claim.sign()) {
        return false;
    }
    sample_points(form.family(), samples)
        .into_iter()
        .all(|x| form.eval(x).map_or(true, |v| v.is_nan() || claim.value_holds(v)))
}

/// Sampled-mode verification: dense point sampling plus the origin and far-end
/// sign checks. Reports Proved when everything agrees (the certificate's mode
/// records that this is sampling evidence), Falsified with a confirmed
/// witness, or Inconclusive.
pub fn sample_form(form: &ExpLogForm, claim: Claim, cfg: &CertifyConfig) -> Result<Certificate> {
    cfg.validate()?;
    let xs = sample_points(form.family(), cfg.samples);
    let window = (xs[0], *xs.last().expect("nonempty"));
    let mut cert = Certificate::new(claim, VerifyMode::Sampled, window, cfg.precision);
    if form.is_identically_zero() {
        cert.status = Status::Falsified;
        cert.witness = Some(window.0);
        cert.min_margin = 0.0;
        cert.evaluations = 1;
        return Ok(cert);
    }
    let origin = match origin_sign(form) {
        Some(s) if s == claim.sign() => GuardReport::pass("leading Taylor coefficient has the claimed sign", None),
        Some(_) => GuardReport::fail("leading Taylor coefficient has the opposite sign"),
        None => GuardReport::fail("no decisive Taylor coefficient"),
    };
    let far = match far_end_sign(form) {
        Some(s) if s == claim.sign() => GuardReport::pass("far-end behaviour has the claimed sign", None),
        Some(0.0) => GuardReport::boundary("far-end limit encloses zero", None),
        Some(_) => GuardReport::fail("far-end behaviour has the opposite sign"),
        None => GuardReport::fail("far-end behaviour undetermined"),
    };
    let mut bad = Vec::new();
    for &x in &xs {
        let Ok(v) = form.eval(x) else { continue };
        cert.evaluations += 1;
        if v.is_nan() {
            continue;
        }
        cert.min_margin = cert.min_margin.min(v * claim.sign());
        if !claim.value_holds(v) {
            bad.push(x);
        }
    }
    cert.subintervals = xs.len();
    cert.guards = Guards { origin, far_end: far };
    let witness = bad
        .iter()
        .copied()
        .find(|&x| form.enclose(Interval::point(x), DEFAULT_TERMS).is_ok_and(|e| claim.violated(e)))
        .or_else(|| {
            if bad.is_empty() && cert.guards.allow_proved() {
                None
            } else {
                crate::sharpness::falsify_form(form, claim)
            }
        });
    cert.status = match witness {
        Some(w) => {
            cert.witness = Some(w);
            Status::Falsified
        }
        None if bad.is_empty() && cert.guards.allow_proved() => Status::Proved,
        None => Status::Inconclusive,
    };
    Ok(cert)
}
