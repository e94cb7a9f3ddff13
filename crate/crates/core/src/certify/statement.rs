//! Every statement the tool can verify, reduced to sign claims about
//! exp-log forms (one per link of a chain).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    certify_form, prove_form_sign, sample_form, Certificate, CertifyConfig, Claim, GuardReport, GuardStatus, Guards, LinkVerdict,
    Status, VerifyMode,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::kernels::{wilker_form, ExpLogForm, ExpTerm, Family, Params};
use crate::means::{sharp_exponents, BoundForm};
use crate::sharpness::series_threshold;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatementId {
    Main1,
    Main2,
    Main3,
    Main4,
    PtK1,
    PtK2,
    PtK3,
    PtK4,
    PhK1,
    PhK2,
    PhKm3,
    PhKm4,
    ChainYang3t,
    ChainYang4t,
    ChainYang3h,
    CorYang1t,
    CorYang2t,
    CorYang1h,
    CorYang2h,
    CorZhwt,
    CorZhwh,
    SanityW,
    SanityWu1,
    SanityH,
    SanityNueman,
}

impl StatementId {
    pub const ALL: [StatementId; 25] = [
        StatementId::Main1,
        StatementId::Main2,
        StatementId::Main3,
        StatementId::Main4,
        StatementId::PtK1,
        StatementId::PtK2,
        StatementId::PtK3,
        StatementId::PtK4,
        StatementId::PhK1,
        StatementId::PhK2,
        StatementId::PhKm3,
        StatementId::PhKm4,
        StatementId::ChainYang3t,
        StatementId::ChainYang4t,
        StatementId::ChainYang3h,
        StatementId::CorYang1t,
        StatementId::CorYang2t,
        StatementId::CorYang1h,
        StatementId::CorYang2h,
        StatementId::CorZhwt,
        StatementId::CorZhwh,
        StatementId::SanityW,
        StatementId::SanityWu1,
        StatementId::SanityH,
        StatementId::SanityNueman,
    ];

    pub fn as_str(self) -> &'static str {
        use StatementId::*;
        match self {
            Main1 => "Main1",
            Main2 => "Main2",
            Main3 => "Main3",
            Main4 => "Main4",
            PtK1 => "Pt_k1",
            PtK2 => "Pt_k2",
            PtK3 => "Pt_k3",
            PtK4 => "Pt_k4",
            PhK1 => "Ph_k1",
            PhK2 => "Ph_k2",
            PhKm3 => "Ph_km3",
            PhKm4 => "Ph_km4",
            ChainYang3t => "Chain_Yang3t",
            ChainYang4t => "Chain_Yang4t",
            ChainYang3h => "Chain_Yang3h",
            CorYang1t => "Cor_Yang1t",
            CorYang2t => "Cor_Yang2t",
            CorYang1h => "Cor_Yang1h",
            CorYang2h => "Cor_Yang2h",
            CorZhwt => "Cor_Zhwt",
            CorZhwh => "Cor_Zhwh",
            SanityW => "Sanity_W",
            SanityWu1 => "Sanity_Wu1",
            SanityH => "Sanity_H",
            SanityNueman => "Sanity_Nueman",
        }
    }

    pub fn family(self) -> Family {
        use StatementId::*;
        match self {
            Main3 | Main4 | PhK1 | PhK2 | PhKm3 | PhKm4 | ChainYang3h | CorYang1h | CorYang2h | CorZhwh => {
                Family::Hyp
            }
            _ => Family::Trig,
        }
    }

    /// The `k` a statement fixes, if any.
    pub fn fixed_k(self) -> Option<f64> {
        use StatementId::*;
        match self {
            PtK1 | PhK1 | CorYang1t | CorYang1h | SanityH | SanityNueman => Some(1.0),
            PtK2 | PhK2 | CorYang2t | CorYang2h | CorZhwt | CorZhwh | SanityW | SanityWu1 => Some(2.0),
            PtK3 => Some(3.0),
            PtK4 => Some(4.0),
            PhKm3 => Some(-3.0),
            PhKm4 => Some(-4.0),
            _ => None,
        }
    }

    /// True for the corollaries whose `p` is the mean exponent.
    pub fn is_mean_corollary(self) -> bool {
        use StatementId::*;
        matches!(self, CorYang1t | CorYang2t | CorYang1h | CorYang2h)
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatementId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        StatementId::ALL
            .into_iter()
            .find(|id| id.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown statement '{s}'")))
    }
}

/// One sign claim making up (part of) a statement.
#[derive(Clone, Debug)]
pub struct StatementLink {
    pub name: String,
    pub form: ExpLogForm,
    pub claim: Claim,
    pub strict: bool,
}

impl StatementLink {
    fn strict(name: impl Into<String>, form: ExpLogForm, claim: Claim) -> Self {
        Self { name: name.into(), form, claim, strict: true }
    }
}

fn out_of_range(stmt: StatementId, what: &str) -> Error {
    Error::ParamsOutOfStatementRange(format!("{stmt} requires {what}"))
}

/// Parameters actually used by a statement: fixed-`k` statements override
/// `params.k`, the others have their `k` range validated.
pub fn effective_params(stmt: StatementId, params: Params) -> Result<Params> {
    use StatementId::*;
    if let Some(k) = stmt.fixed_k() {
        let p = match stmt {
            SanityW | SanityH => 1.0,
            SanityWu1 | SanityNueman => -1.0,
            _ => params.p,
        };
        return Params::new(k, p);
    }
    match stmt {
        Main4 if params.k >= -2.0 => Err(out_of_range(stmt, "k < -2")),
        Main4 => Ok(params),
        _ if params.k < 1.0 => Err(out_of_range(stmt, "k >= 1")),
        _ => Ok(params),
    }
}

fn term(w: Interval, a: f64, b: f64) -> ExpTerm {
    ExpTerm::new(w, a, b)
}

/// Links of (Yang3t), (Yang4t) and (Yang3h) with `X = S^{kp}`, `Y = T^p`,
/// `a = 2/(k+2)`, `b = k/(k+2)`.
fn chain_links(stmt: StatementId, family: Family, params: Params) -> Vec<StatementLink> {
    let Params { k, p } = params;
    let a = params.weight_sin();
    let b = params.weight_tan();
    let kp = k * p;
    // Every link vanishes at the origin. The two cross links have x^2
    // coefficient p(2 - k)/6, so at k = 2 they start at x^4.
    let zeros = |vanishing_x2: bool| if vanishing_x2 { 2 } else { 1 };
    let reversed = wilker_form(family, Params { k, p: -p });
    match stmt {
        StatementId::ChainYang3t | StatementId::CorZhwt => vec![
            StatementLink {
                name: "(b - a)(Y - X) >= 0".into(),
                form: ExpLogForm::new(family, Interval::ZERO, vec![term(a - b, kp, 0.0), term(b - a, 0.0, p)])
                    .with_known_zeros(1),
                claim: Claim::Positive,
                strict: false,
            },
            StatementLink::strict(
                "b X + a Y > a/X + b/Y",
                ExpLogForm::new(
                    family,
                    Interval::ZERO,
                    vec![term(b, kp, 0.0), term(a, 0.0, p), term(-a, -kp, 0.0), term(-b, 0.0, -p)],
                )
                .with_known_zeros(zeros(k == 2.0)),
                Claim::Positive,
            ),
            StatementLink::strict("a/X + b/Y > 1", reversed, Claim::Positive),
        ],
        StatementId::ChainYang4t => vec![
            StatementLink::strict(
                "a X + b Y > a/Y + b/X",
                ExpLogForm::new(
                    family,
                    Interval::ZERO,
                    vec![term(a, kp, 0.0), term(b, 0.0, p), term(-a, 0.0, -p), term(-b, -kp, 0.0)],
                )
                .with_known_zeros(zeros(k == 2.0)),
                Claim::Positive,
            ),
            StatementLink {
                name: "(a - b)(1/Y - 1/X) >= 0".into(),
                form: ExpLogForm::new(family, Interval::ZERO, vec![term(a - b, 0.0, -p), term(b - a, -kp, 0.0)])
                    .with_known_zeros(1),
                claim: Claim::Positive,
                strict: false,
            },
            StatementLink::strict("a/X + b/Y > 1", reversed, Claim::Positive),
        ],
        StatementId::ChainYang3h | StatementId::CorZhwh => vec![
            StatementLink::strict(
                "b X + a Y > a/X + b/Y",
                ExpLogForm::new(
                    family,
                    Interval::ZERO,
                    vec![term(b, kp, 0.0), term(a, 0.0, p), term(-a, -kp, 0.0), term(-b, 0.0, -p)],
                )
                .with_known_zeros(zeros(k == 2.0)),
                Claim::Positive,
            ),
            StatementLink::strict("a/X + b/Y > 1", reversed, Claim::Positive),
        ],
        _ => unreachable!("not a chain statement"),
    }
}

/// Side of a mean corollary checked for exponent `r`: the lower bound below
/// the midpoint of the two sharp exponents, the upper bound above it.
pub fn corollary_side_is_lower(stmt: StatementId, r: f64) -> bool {
    let (lo, hi) = corollary_constants(stmt);
    r < 0.5 * (lo + hi)
}

/// `(alpha*, beta*)` of a mean corollary.
pub fn corollary_constants(stmt: StatementId) -> (f64, f64) {
    let form = match stmt {
        StatementId::CorYang1t => BoundForm::Yang1t,
        StatementId::CorYang2t => BoundForm::Yang2t,
        StatementId::CorYang1h => BoundForm::Yang1h,
        StatementId::CorYang2h => BoundForm::Yang2h,
        _ => return (f64::NAN, f64::NAN),
    };
    sharp_exponents(form)
}

/// With `p = -r`, the lower bound `mean_r < S` is equivalent to
/// `p * phi(k, p) > 0` and the upper bound to `p * phi(k, p) < 0`; at `r = 0`
/// both reduce to the sign of `S^2 T - 1` (`S^3` against `cos` or `cosh`).
fn corollary_link(stmt: StatementId, family: Family, k: f64, r: f64) -> Result<StatementLink> {
    let lower = corollary_side_is_lower(stmt, r);
    let side = if lower { "lower" } else { "upper" };
    if r == 0.0 {
        // S^2 T = S^3 / C has no x^2 term.
        let form = ExpLogForm::new(family, Interval::point(-1.0), vec![term(Interval::ONE, 2.0, 1.0)])
            .with_known_zeros(2);
        let claim = if lower { Claim::Positive } else { Claim::Negative };
        return Ok(StatementLink::strict(format!("{side} bound, exponent 0: S^2 T vs 1"), form, claim));
    }
    let p = -r;
    let form = wilker_form(family, Params::new(k, p)?);
    let claim = if lower { Claim::of_sign(p) } else { Claim::of_sign(-p) };
    Ok(StatementLink::strict(format!("{side} bound, exponent {r}: k = {k}, p = {p}"), form, claim))
}

/// Reduces a statement to its links.
pub fn statement_links(stmt: StatementId, params: Params) -> Result<Vec<StatementLink>> {
    use StatementId::*;
    let eff = effective_params(stmt, params)?;
    let fam = stmt.family();
    let single = |claim: Claim| -> Vec<StatementLink> {
        vec![StatementLink::strict(format!("{stmt}"), wilker_form(fam, eff), claim)]
    };
    Ok(match stmt {
        Main1 | PtK1 | PtK2 | PtK3 | PtK4 | Main3 | PhK1 | PhK2 | SanityW | SanityWu1 | SanityH => {
            single(Claim::Positive)
        }
        Main2 | Main4 | PhKm3 | PhKm4 => single(Claim::Negative),
        ChainYang3t | ChainYang4t | ChainYang3h | CorZhwt | CorZhwh => chain_links(stmt, fam, eff),
        CorYang1t | CorYang2t | CorYang1h | CorYang2h => vec![corollary_link(stmt, fam, eff.k, params.p)?],
        SanityNueman => {
            let third = Interval::ratio(1.0, 3.0)?;
            let two_thirds = Interval::ratio(2.0, 3.0)?;
            vec![
                StatementLink::strict(
                    "2 S + T > 2/S + 1/T",
                    ExpLogForm::new(
                        fam,
                        Interval::ZERO,
                        vec![
                            term(two_thirds, 1.0, 0.0),
                            term(third, 0.0, 1.0),
                            term(-two_thirds, -1.0, 0.0),
                            term(-third, 0.0, -1.0),
                        ],
                    )
                    .with_known_zeros(2),
                    Claim::Positive,
                ),
                StatementLink::strict("2/S + 1/T > 3", wilker_form(fam, eff), Claim::Positive),
            ]
        }
    })
}

fn equality_certificate(claim: Claim, mode: VerifyMode, family: Family, cfg: &CertifyConfig) -> Certificate {
    let hi = match family {
        Family::Trig => cfg.trig_hi(),
        Family::Hyp => cfg.hyp_fallback_hi,
    };
    let mut c = Certificate::new(claim, mode, (0.0, hi), cfg.precision);
    let g = GuardReport::pass("both sides coincide identically; holds with equality", None);
    c.guards = Guards { origin: g.clone(), far_end: g };
    c.status = Status::Proved;
    c.min_margin = 0.0;
    c
}

fn worst_guard(reports: &[&GuardReport]) -> GuardReport {
    let rank = |s: GuardStatus| match s {
        GuardStatus::Fail => 3,
        GuardStatus::PassBoundary => 2,
        GuardStatus::Pass => 1,
        GuardStatus::Unused => 0,
    };
    let status = reports.iter().map(|r| r.status).max_by_key(|&s| rank(s)).unwrap_or(GuardStatus::Unused);
    GuardReport { status, justification: "per link".into(), cutoff: None }
}

fn aggregate(links: Vec<LinkVerdict>, mode: VerifyMode, cfg: &CertifyConfig) -> Certificate {
    let first = &links[0].certificate;
    let mut c = Certificate::new(first.claim, mode, first.window, cfg.precision);
    for l in &links {
        let lc = &l.certificate;
        c.window = (c.window.0.min(lc.window.0), c.window.1.max(lc.window.1));
        c.subintervals += lc.subintervals;
        c.evaluations += lc.evaluations;
        c.min_margin = c.min_margin.min(lc.min_margin);
        if c.witness.is_none() && lc.status == Status::Falsified {
            c.witness = lc.witness;
        }
    }
    c.guards = Guards {
        origin: worst_guard(&links.iter().map(|l| &l.certificate.guards.origin).collect::<Vec<_>>()),
        far_end: worst_guard(&links.iter().map(|l| &l.certificate.guards.far_end).collect::<Vec<_>>()),
    };
    let any = |s: Status| links.iter().any(|l| l.certificate.status == s);
    c.status = if any(Status::Falsified) {
        Status::Falsified
    } else if any(Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Proved
    };
    c.links = links;
    c
}

/// Verifies a statement in certified or sampled mode. Chains report one
/// verdict per link; the statement is Proved only when every link is.
pub fn verify_statement(
    stmt: StatementId,
    params: Params,
    mode: VerifyMode,
    config: &CertifyConfig,
) -> Result<Certificate> {
    config.validate()?;
    let links = statement_links(stmt, params)?;
    let mut verdicts = Vec::with_capacity(links.len());
    for l in links {
        let cert = if !l.strict && l.form.is_identically_zero() {
            equality_certificate(l.claim, mode, l.form.family(), config)
        } else {
            match mode {
                VerifyMode::Certified => certify_form(&l.form, l.claim, config)?,
                VerifyMode::Sampled => sample_form(&l.form, l.claim, config)?,
            }
        };
        verdicts.push(LinkVerdict { name: l.name, strict: l.strict, certificate: cert });
    }
    if verdicts.len() == 1 {
        return Ok(verdicts.pop().expect("one link").certificate);
    }
    Ok(aggregate(verdicts, mode, config))
}

/// Bisection of every link on a user window only; guards are not run, so a
/// Proved verdict covers the window alone.
pub fn verify_statement_window(
    stmt: StatementId,
    params: Params,
    window: (f64, f64),
    config: &CertifyConfig,
) -> Result<Certificate> {
    let mut verdicts = Vec::new();
    for l in statement_links(stmt, params)? {
        let cert = if !l.strict && l.form.is_identically_zero() {
            let mut c = equality_certificate(l.claim, VerifyMode::Certified, l.form.family(), config);
            c.window = window;
            c
        } else {
            prove_form_sign(&l.form, l.claim, window, config)?
        };
        verdicts.push(LinkVerdict { name: l.name, strict: l.strict, certificate: cert });
    }
    if verdicts.len() == 1 {
        return Ok(verdicts.pop().expect("one link").certificate);
    }
    Ok(aggregate(verdicts, VerifyMode::Certified, config))
}

/// Claimed sign of the statement's first link; used by threshold searches.
pub fn primary_claim(stmt: StatementId, params: Params) -> Result<Claim> {
    Ok(statement_links(stmt, params)?[0].claim)
}

/// The series threshold `-12/(5(k+2))` relevant to hyperbolic statements.
pub fn statement_series_threshold(stmt: StatementId, params: Params) -> Result<f64> {
    Ok(series_threshold(effective_params(stmt, params)?.k))
}
