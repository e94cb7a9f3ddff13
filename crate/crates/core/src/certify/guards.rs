//! Endpoint guards: the Taylor expansion at the origin, and at the far end
//! either the limit at pi/2 (with a monotonicity argument when the limit
//! is approached from the right side) or explicit dominance at infinity.

use super::{CertifyConfig, Claim, GuardReport};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::kernels::ratios::{log_ratio_enc, Ratio};
use crate::kernels::series::MAX_TERMS;
use crate::kernels::{wilker_form, EndpointLimit, ExpLogForm, Family, KernelId, Params, DEFAULT_TERMS, SWITCH_RADIUS};

/// Largest dominance cutoff tried at infinity.
pub const MAX_HYP_CUTOFF: f64 = 1e4;

fn kernel_form(kernel: KernelId, params: Params) -> Result<ExpLogForm> {
    match kernel {
        KernelId::WilkerF => Ok(wilker_form(Family::Trig, params)),
        KernelId::WilkerU => Ok(wilker_form(Family::Hyp, params)),
        other => Err(Error::Config(format!("guards apply to f and u, not {other:?}"))),
    }
}

/// Origin guard for `f` or `u` on `(0, delta]`.
pub fn guard_origin(kernel: KernelId, params: Params, claim: Claim, delta: f64) -> Result<GuardReport> {
    if !(delta > 0.0 && delta <= SWITCH_RADIUS) {
        return Err(Error::Config(format!("origin guard needs 0 < delta <= 1/4, got {delta}")));
    }
    Ok(origin_guard_form(&kernel_form(kernel, params)?, claim, delta))
}

/// Establishes the claimed sign on `(0, delta]` from the Taylor coefficients
/// in `y = x^2`: the first coefficient with a definite sign must carry the
/// claimed sign and dominate the rest, including the rigorous tail, on the
/// whole range. Coefficients whose enclosure contains zero are skipped, in
/// which case the pass only holds if they vanish exactly (`PassBoundary`).
pub fn origin_guard_form(form: &ExpLogForm, claim: Claim, delta: f64) -> GuardReport {
    if form.is_identically_zero() {
        return GuardReport::fail("function vanishes identically");
    }
    let mut skipped: Option<usize> = None;
    for j in form.known_zeros()..MAX_TERMS {
        let c = form.coeff(j);
        if c == Interval::ZERO {
            continue;
        }
        if c.contains_zero() {
            skipped.get_or_insert(j);
            continue;
        }
        if !claim.holds(c) {
            return GuardReport::fail(format!(
                "x^{} coefficient {c} has the opposite sign",
                2 * j
            ));
        }
        let r = form.reduced_enclosure(j, delta, MAX_TERMS);
        if !claim.holds(r) {
            return GuardReport::fail(format!(
                "x^{} term does not dominate the remainder on (0, {delta}]: quotient {r}",
                2 * j
            ));
        }
        return match skipped {
            None => GuardReport::pass(
                format!("x^{} coefficient {c} dominates on (0, {delta}]; quotient {r}", 2 * j),
                Some(delta),
            ),
            Some(s) => GuardReport::boundary(
                format!(
                    "x^{} coefficient encloses zero; resolved by the x^{} coefficient {c} on (0, {delta}]",
                    2 * s,
                    2 * j
                ),
                Some(delta),
            ),
        };
    }
    GuardReport::fail("no Taylor coefficient with a definite sign")
}

/// Far-end guard for `f` (`delta_or_cutoff` = distance from pi/2) or `u`
/// (`delta_or_cutoff` = largest admissible dominance cutoff).
pub fn guard_far_end(kernel: KernelId, params: Params, claim: Claim, delta_or_cutoff: f64) -> Result<GuardReport> {
    if !(delta_or_cutoff > 0.0) {
        return Err(Error::Config("far-end guard needs a positive delta or cutoff".into()));
    }
    let form = kernel_form(kernel, params)?;
    let report = match form.family() {
        Family::Trig => {
            if delta_or_cutoff >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Config("delta must be below pi/2".into()));
            }
            trig_far_end(&form, claim, std::f64::consts::FRAC_PI_2 - delta_or_cutoff)
        }
        Family::Hyp => hyp_far_end(&form, claim, delta_or_cutoff),
    };
    Ok(report)
}

/// Far-end guard with the limits taken from `cfg`.
pub fn far_end_guard_form(form: &ExpLogForm, claim: Claim, cfg: &CertifyConfig) -> GuardReport {
    match form.family() {
        Family::Trig => trig_far_end(form, claim, cfg.trig_hi()),
        Family::Hyp => hyp_far_end(form, claim, MAX_HYP_CUTOFF),
    }
}

fn trig_far_end(form: &ExpLogForm, claim: Claim, xd: f64) -> GuardReport {
    if form.is_identically_zero() {
        return GuardReport::fail("function vanishes identically");
    }
    let tail = form.trig_tail_enclosure(xd);
    if claim.holds(tail) {
        return GuardReport::pass(format!("enclosure {tail} on [{xd}, pi/2)"), Some(xd));
    }
    if let Some(params) = form.wilker_params() {
        if let Some(r) = wilker_monotone_tail(form, params, claim, xd) {
            return r;
        }
    }
    let why = if claim.violated(tail) { "has the wrong sign" } else { "does not settle the sign" };
    GuardReport::fail(format!("tail enclosure {tail} on [{xd}, pi/2) {why}"))
}

/// On `[xd, pi/2)` the sign of `f'` is `sgn(k/(k+2)) sgn(p) sgn(g)` with
/// `g = 1 - 2 (P1/P2) (sin x/x)^{(k-1)p} cos^{p+1} x`. When `g > 0` there, `f`
/// is monotone and its sign follows from `f(xd)` or the limit at pi/2.
fn wilker_monotone_tail(form: &ExpLogForm, params: Params, claim: Claim, xd: f64) -> Option<GuardReport> {
    let Params { k, p } = params;
    if p == 0.0 || p + 1.0 <= 0.0 {
        return None;
    }
    let xs = Interval::raw(xd, Interval::half_pi().hi());
    let cos_xd = Interval::point(xd).cos();
    let c = Interval::raw(0.0, cos_xd.hi().max(0.0));
    let s = xs.sin();
    let ratio = (s - xs * c).div(xs - s * c).ok()?;
    let ls = Interval::raw(Interval::two_over_pi().ln().ok()?.lo(), log_ratio_enc(Ratio::Sinc, xd).hi());
    let sinc_pow = (ls * ((k - 1.0) * p)).exp();
    let cos_pow_hi = (cos_xd.ln().ok()? * (p + 1.0)).exp().hi();
    let g = Interval::ONE - ratio * sinc_pow * Interval::raw(0.0, cos_pow_hi) * 2.0;
    if !(g.lo() > 0.0) {
        return None;
    }
    let decreasing = (k / (k + 2.0)).signum() * p.signum() < 0.0;
    let dir = if decreasing { "decreasing" } else { "increasing" };
    let needs_limit = matches!((decreasing, claim), (true, Claim::Positive) | (false, Claim::Negative));
    if needs_limit {
        match form.trig_endpoint_limit() {
            EndpointLimit::Finite(v) if claim.holds(v) => {
                Some(GuardReport::pass(format!("f {dir} on [{xd}, pi/2) (g >= {}), limit {v}", g.lo()), Some(xd)))
            }
            EndpointLimit::Finite(v) if v.contains_zero() => Some(GuardReport::boundary(
                format!("f {dir} on [{xd}, pi/2) (g >= {}), limit {v} encloses zero", g.lo()),
                Some(xd),
            )),
            EndpointLimit::PlusInfinity if claim == Claim::Positive => {
                Some(GuardReport::pass(format!("f {dir} to +inf on [{xd}, pi/2)"), Some(xd)))
            }
            EndpointLimit::MinusInfinity if claim == Claim::Negative => {
                Some(GuardReport::pass(format!("f {dir} to -inf on [{xd}, pi/2)"), Some(xd)))
            }
            _ => None,
        }
    } else {
        let at = form.enclose(Interval::point(xd), DEFAULT_TERMS).ok()?;
        claim
            .holds(at)
            .then(|| GuardReport::pass(format!("f {dir} on [{xd}, pi/2) from f(xd) in {at}"), Some(xd)))
    }
}

/// One term `factor * exp(alpha x + gamma ln x)` of the large-x expansion.
struct AsymTerm {
    alpha: f64,
    gamma: f64,
    factor: Interval,
}

/// For `x >= cut >= 1`:
/// `ln S = x - ln 2 - ln x + eS`, `eS in [ln(1 - e^{-2 cut}), 0]`, and
/// `ln T = -ln x + eT`, `eT in [ln tanh(cut), 0]`.
fn asymptotic_terms(form: &ExpLogForm, cut: f64) -> Option<Vec<AsymTerm>> {
    let xc = Interval::point(cut);
    let es_lo = (Interval::ONE - (xc * -2.0).exp()).ln().ok()?.lo();
    let et_lo = xc.tanh().ln().ok()?.lo();
    let es = Interval::raw(es_lo.min(0.0), 0.0);
    let et = Interval::raw(et_lo.min(0.0), 0.0);
    let mut out = Vec::new();
    if form.constant() != Interval::ZERO {
        out.push(AsymTerm { alpha: 0.0, gamma: 0.0, factor: form.constant() });
    }
    for t in form.terms() {
        let (a, b) = (t.sinc_exp, t.tanc_exp);
        let two_pow = Interval::point(2.0).pow_real(-a).ok()?;
        let factor = t.weight * two_pow * (es * a + et * b).exp();
        out.push(AsymTerm { alpha: a, gamma: -(a + b), factor });
    }
    Some(out)
}

fn dominant(terms: &[AsymTerm]) -> Option<usize> {
    (0..terms.len()).max_by(|&i, &j| {
        (terms[i].alpha, terms[i].gamma)
            .partial_cmp(&(terms[j].alpha, terms[j].gamma))
            .expect("finite exponents")
    })
}

/// Sign of a hyperbolic form as `x -> infinity` (0 for the zero function).
pub(crate) fn hyp_asymptotic_sign(form: &ExpLogForm) -> Option<f64> {
    if form.is_identically_zero() {
        return Some(0.0);
    }
    let terms = asymptotic_terms(form, 1.0)?;
    let d = dominant(&terms)?;
    let f = terms[d].factor;
    (!f.contains_zero()).then(|| f.mid().signum())
}

/// Checks that the dominant term outweighs all others on `[cut, inf)`.
fn dominates(form: &ExpLogForm, claim: Claim, cut: f64) -> Option<String> {
    let terms = asymptotic_terms(form, cut)?;
    let d = dominant(&terms)?;
    let lead = &terms[d];
    if !claim.holds(lead.factor) {
        return None;
    }
    let ln_cut = Interval::point(cut).ln().ok()?;
    let mut rest = Interval::ZERO;
    for (i, t) in terms.iter().enumerate() {
        if i == d {
            continue;
        }
        let da = t.alpha - lead.alpha;
        let dg = t.gamma - lead.gamma;
        // exp(da x + dg ln x) must be nonincreasing on [cut, inf).
        if da < 0.0 && dg > 0.0 && cut * -da < dg {
            return None;
        }
        let r = (Interval::point(cut) * da + ln_cut * dg).exp();
        rest = rest + Interval::point(t.factor.mag()) * r;
    }
    (rest.hi() < lead.factor.mig()).then(|| {
        format!(
            "term exp({} x {:+} ln x) dominates on [{cut}, inf): lead {} > rest {}",
            lead.alpha,
            lead.gamma,
            lead.factor.mig(),
            rest.hi()
        )
    })
}

fn hyp_far_end(form: &ExpLogForm, claim: Claim, max_cut: f64) -> GuardReport {
    if form.is_identically_zero() {
        return GuardReport::fail("function vanishes identically");
    }
    let mut cut = 1.0;
    while cut <= max_cut {
        if let Some(j) = dominates(form, claim, cut) {
            return GuardReport::pass(j, Some(cut));
        }
        cut *= 1.25;
    }
    GuardReport::fail(format!("no dominance cutoff up to {max_cut}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::GuardStatus;

    fn params(k: f64, p: f64) -> Params {
        Params::new(k, p).unwrap()
    }

    #[test]
    fn origin_positive_leading_term() {
        let g = guard_origin(KernelId::WilkerF, params(2.0, 1.0), Claim::Positive, 0.01).unwrap();
        assert_eq!(g.status, GuardStatus::Pass);
        let g = guard_origin(KernelId::WilkerF, params(1.0, -0.9), Claim::Positive, 0.01).unwrap();
        assert_eq!(g.status, GuardStatus::Pass);
    }

    #[test]
    fn origin_boundary_escalates() {
        let g = guard_origin(KernelId::WilkerF, params(1.0, -0.8), Claim::Negative, 0.01).unwrap();
        assert_eq!(g.status, GuardStatus::PassBoundary, "{}", g.justification);
        assert!(g.justification.contains("x^6"));
    }

    #[test]
    fn origin_wrong_sign_fails() {
        let g = guard_origin(KernelId::WilkerF, params(1.0, -0.5), Claim::Positive, 0.01).unwrap();
        assert_eq!(g.status, GuardStatus::Fail);
        assert!(guard_origin(KernelId::WilkerF, params(1.0, 1.0), Claim::Positive, 0.5).is_err());
    }

    #[test]
    fn trig_far_end_divergence_and_threshold() {
        let g = guard_far_end(KernelId::WilkerF, params(2.0, 1.0), Claim::Positive, 1e-3).unwrap();
        assert_eq!(g.status, GuardStatus::Pass);
        let theta1 = -(1.5f64.ln()) / (std::f64::consts::PI.ln() - 2f64.ln());
        let g = guard_far_end(KernelId::WilkerF, params(1.0, theta1), Claim::Positive, 1e-3).unwrap();
        assert!(g.status.is_pass(), "{}", g.justification);
    }

    #[test]
    fn hyp_far_end_cutoffs() {
        let g = guard_far_end(KernelId::WilkerU, params(2.0, -0.6), Claim::Positive, 1e4).unwrap();
        assert_eq!(g.status, GuardStatus::Pass, "{}", g.justification);
        assert!(g.cutoff.unwrap() < 100.0);
        for p in [-1.0, 3.0] {
            let g = guard_far_end(KernelId::WilkerU, params(-3.0, p), Claim::Negative, 1e4).unwrap();
            assert_eq!(g.status, GuardStatus::Pass, "{p}: {}", g.justification);
        }
        let g = guard_far_end(KernelId::WilkerU, params(-3.0, 1.0), Claim::Negative, 1e4).unwrap();
        assert_eq!(g.status, GuardStatus::Pass);
        let g = guard_far_end(KernelId::WilkerU, params(1.0, -0.4), Claim::Negative, 1e4).unwrap();
        assert_eq!(g.status, GuardStatus::Fail);
    }
}
