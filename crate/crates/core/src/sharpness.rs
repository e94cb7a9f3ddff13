//! Sharp constants in closed form, their empirical recovery by bisection on
//! `p`, falsification witnesses and the sign-change point of `u` for
//! `-12/(5(k+2)) < p < 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::certify::statement::{statement_links, StatementId};
use crate::certify::{sampled_holds, verify_statement, Claim, CertifyConfig, Status, VerifyMode};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::kernels::{wilker_form, ExpLogForm, Family, Params, DEFAULT_TERMS};

/// `-(ln(k+2) - ln 2) / (k (ln pi - ln 2))`: the exponent at which `f`
/// vanishes at `pi/2`.
pub fn trig_threshold(k: f64) -> f64 {
    -((k + 2.0).ln() - 2f64.ln()) / (k * (PI.ln() - 2f64.ln()))
}

/// `-12/(5(k+2))`: the exponent at which the `x^4` coefficient vanishes.
pub fn series_threshold(k: f64) -> f64 {
    -12.0 / (5.0 * (k + 2.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpConstants {
    pub k: f64,
    /// NaN for `k < -2`, where `ln(k+2)` is undefined.
    #[serde(with = "crate::report::nonfinite")]
    pub trig_threshold: f64,
    pub series_threshold: f64,
    /// `1 > -trig_threshold > -series_threshold`, checked for `k >= 1`.
    pub threshold_ordering: Option<bool>,
}

pub fn closed_thresholds(k: f64) -> Result<SharpConstants> {
    if !k.is_finite() {
        return Err(Error::Domain(format!("k = {k} is not finite")));
    }
    if k == 0.0 || k == -2.0 {
        return Err(Error::DegenerateParams { k });
    }
    let trig = trig_threshold(k);
    let series = series_threshold(k);
    // The trig constant involves ln(k+2), undefined for k < -2.
    let trig = if k > -2.0 { trig } else { f64::NAN };
    let threshold_ordering = (k >= 1.0).then(|| 1.0 > -trig && -trig > -series);
    Ok(SharpConstants { k, trig_threshold: trig, series_threshold: series, threshold_ordering })
}

/// Sampled points used by threshold bisection.
pub const BISECTION_SAMPLES: usize = 10_000;

/// Bracket on `p` for the statement's one-sided boundary.
fn bracket(stmt: StatementId, k: f64) -> Result<(f64, f64)> {
    use StatementId::*;
    match stmt {
        Main1 | Main2 | PtK1 | PtK2 | PtK3 | PtK4 => Ok((-1.5, -1e-6)),
        Main3 | Main4 | PhK1 | PhK2 | PhKm3 | PhKm4 => {
            let s = series_threshold(k);
            let (lo, hi) = (s - 1.0, s + 1.0);
            Ok(if s < 0.0 { (lo, hi.min(-1e-6)) } else { (lo.max(1e-6), hi) })
        }
        _ => Err(Error::Config(format!("{stmt} has no one-sided boundary in p"))),
    }
}

fn holds_sampled(stmt: StatementId, k: f64, p: f64) -> Result<bool> {
    let links = statement_links(stmt, Params::new(k, p)?)?;
    Ok(links.iter().all(|l| sampled_holds(&l.form, l.claim, BISECTION_SAMPLES)))
}

/// Boundary in `p` between holding and failing, found by bisection with
/// sampled verification as the oracle. The bracket must straddle the
/// boundary.
pub fn empirical_threshold(stmt: StatementId, k: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tol = {tol} must be positive")));
    }
    let k = stmt.fixed_k().unwrap_or(k);
    // Validates the k range (and rejects degenerate k).
    crate::certify::statement::effective_params(stmt, Params::new(k, -0.5)?)?;
    let (mut lo, mut hi) = bracket(stmt, k)?;
    let h_lo = holds_sampled(stmt, k, lo)?;
    let h_hi = holds_sampled(stmt, k, hi)?;
    if h_lo == h_hi {
        return Err(Error::Bracket(format!(
            "{stmt} at k = {k}: p = {lo} and p = {hi} both {}",
            if h_lo { "hold" } else { "fail" }
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds_sampled(stmt, k, mid)? == h_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A recovered threshold with certified spot checks on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub threshold: f64,
    pub tol: f64,
    /// `p` on the holding side and its certified status.
    pub inside_p: f64,
    pub inside: Status,
    /// `p` on the failing side and its certified status.
    pub outside_p: f64,
    pub outside: Status,
}

/// [`empirical_threshold`] followed by certified runs at `threshold +- 10 tol`.
pub fn threshold_estimate(stmt: StatementId, k: f64, tol: f64, cfg: &CertifyConfig) -> Result<ThresholdEstimate> {
    let threshold = empirical_threshold(stmt, k, tol)?;
    let k = stmt.fixed_k().unwrap_or(k);
    let (lo, _) = bracket(stmt, k)?;
    let lo_holds = holds_sampled(stmt, k, lo)?;
    let step = 10.0 * tol;
    let (inside_p, outside_p) =
        if lo_holds { (threshold - step, threshold + step) } else { (threshold + step, threshold - step) };
    let run = |p: f64| -> Result<Status> {
        Ok(verify_statement(stmt, Params::new(k, p)?, VerifyMode::Certified, cfg)?.status)
    };
    Ok(ThresholdEstimate { threshold, tol, inside_p, inside: run(inside_p)?, outside_p, outside: run(outside_p)? })
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (l + (h - l) * i as f64 / (n - 1) as f64).exp())
}

fn search_grid(family: Family) -> Vec<f64> {
    let mut xs: Vec<f64> = match family {
        Family::Trig => logspace(1e-13, 1.0, 400)
            .chain(logspace(1e-13, 1.0, 400).map(|d| FRAC_PI_2 - d))
            .chain((1..1000).map(|i| FRAC_PI_2 * i as f64 / 1000.0))
            .collect(),
        Family::Hyp => logspace(1e-6, 1e6, 1200).chain((1..1000).map(|i| 0.05 * i as f64)).collect(),
    };
    xs.retain(|&x| x > 0.0 && (family == Family::Hyp || x < FRAC_PI_2));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn confirmed(form: &ExpLogForm, claim: Claim, x: f64) -> bool {
    form.enclose(Interval::point(x), DEFAULT_TERMS).is_ok_and(|e| claim.violated(e))
}

/// Searches for a point where the form provably violates the claim: a fixed
/// grid dense at both ends, then repeated local refinement around the point
/// of smallest margin. Returns the smallest confirmed witness.
pub fn falsify_form(form: &ExpLogForm, claim: Claim) -> Option<f64> {
    let family = form.family();
    if form.is_identically_zero() {
        // Every point violates a strict claim; 1 lies in both domains.
        return Some(1.0);
    }
    let xs = search_grid(family);
    let margins: Vec<(f64, f64)> = xs
        .iter()
        .filter_map(|&x| form.eval(x).ok().filter(|v| !v.is_nan()).map(|v| (x, v * claim.sign())))
        .collect();
    if let Some(&(x, _)) = margins.iter().find(|&&(x, m)| m <= 0.0 && confirmed(form, claim, x)) {
        return Some(x);
    }
    // Refine around the worst few grid points.
    let mut order: Vec<usize> = (0..margins.len()).collect();
    order.sort_by(|&i, &j| margins[i].1.total_cmp(&margins[j].1));
    let mut found: Option<f64> = None;
    for &i in order.iter().take(8) {
        let left = if i > 0 { margins[i - 1].0 } else { margins[i].0 * 0.5 };
        let right = margins.get(i + 1).map_or(margins[i].0 * 2.0, |m| m.0);
        if let Some(w) = refine(form, claim, left, right) {
            found = Some(found.map_or(w, |f| f.min(w)));
        }
    }
    found
}

fn refine(form: &ExpLogForm, claim: Claim, mut a: f64, mut b: f64) -> Option<f64> {
    for _ in 0..12 {
        let n = 64;
        let mut best = (f64::INFINITY, 0.5 * (a + b));
        for i in 0..=n {
            let x = a + (b - a) * i as f64 / n as f64;
            let Ok(v) = form.eval(x) else { continue };
            if v.is_nan() {
                continue;
            }
            let m = v * claim.sign();
            if m <= 0.0 && confirmed(form, claim, x) {
                return Some(x);
            }
            if m < best.0 {
                best = (m, x);
            }
        }
        let h = (b - a) / n as f64;
        if !(h > 0.0) {
            break;
        }
        a = (best.1 - 2.0 * h).max(a);
        b = (best.1 + 2.0 * h).min(b);
    }
    None
}

/// Witness search for a statement: the smallest witness over its links.
pub fn falsify(stmt: StatementId, params: Params) -> Result<Option<f64>> {
    let links = statement_links(stmt, params)?;
    Ok(links
        .iter()
        .filter(|l| l.strict || !l.form.is_identically_zero())
        .filter_map(|l| falsify_form(&l.form, l.claim))
        .reduce(f64::min))
}

/// The unique zero of `u` on `(0, inf)` for `k >= 1`, `-12/(5(k+2)) < p < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub x0: f64,
    /// `u(x0)` in floating point.
    pub residual: f64,
    /// Right end of the uniform grid used for the sign audit.
    pub cutoff: f64,
    /// Sign changes of `u` seen on that grid; 1 when the crossing is unique.
    pub sign_changes: usize,
}

/// Points on the uniform grid of the sign audit.
pub const CROSSING_GRID: usize = 10_000;

/// Finds `x0` by bracketing with certified signs and bisecting to `tol`
/// (and until `|u(x0)| <= 1e-10`), then audits the sign pattern on a
/// uniform grid over `(0, 10 x0]`.
pub fn crossing_point(k: f64, p: f64, tol: f64) -> Result<Crossing> {
    if !(k >= 1.0 && series_threshold(k) < p && p < 0.0) {
        return Err(Error::ParamsOutOfStatementRange(format!(
            "crossing point needs k >= 1 and -12/(5(k+2)) < p < 0, got k = {k}, p = {p}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tol = {tol} must be positive")));
    }
    let form = wilker_form(Family::Hyp, Params::new(k, p)?);
    let sign_of = |x: f64| -> Option<f64> {
        let e = form.enclose(Interval::point(x), DEFAULT_TERMS).ok()?;
        if e.lo() > 0.0 {
            Some(1.0)
        } else if e.hi() < 0.0 {
            Some(-1.0)
        } else {
            None
        }
    };
    // For small |p| the root sits near 3^{1/|p|}-like magnitudes, far beyond
    // any fixed range; the hyperbolic forms are evaluated in log space.
    let grid: Vec<f64> = logspace(1e-3, 1e300, 12_000).collect();
    let (mut a, mut b) = grid
        .windows(2)
        .find(|w| sign_of(w[0]) == Some(-1.0) && sign_of(w[1]) == Some(1.0))
        .map(|w| (w[0], w[1]))
        .ok_or_else(|| Error::Bracket(format!("no sign change of u found for k = {k}, p = {p}")))?;
    let value = |x: f64| form.eval(x).unwrap_or(f64::NAN);
    loop {
        let m = 0.5 * (a + b);
        let v = value(m);
        if (b - a <= tol && v.abs() <= 1e-10) || m <= a || m >= b {
            break;
        }
        if v < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let x0 = 0.5 * (a + b);
    let cutoff = 10.0 * x0;
    let mut sign_changes = 0;
    let mut prev: Option<f64> = None;
    for i in 1..=CROSSING_GRID {
        let v = value(cutoff * i as f64 / CROSSING_GRID as f64);
        if v == 0.0 || v.is_nan() {
            continue;
        }
        let s = v.signum();
        if prev.is_some_and(|q| q != s) {
            sign_changes += 1;
        }
        prev = Some(s);
    }
    Ok(Crossing { x0, residual: value(x0), cutoff, sign_changes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let c = closed_thresholds(1.0).unwrap();
        assert!((c.trig_threshold + 0.898).abs() < 5e-4);
        assert_eq!(c.series_threshold, -0.8);
        assert_eq!(c.threshold_ordering, Some(true));
        assert_eq!(closed_thresholds(-3.0).unwrap().series_threshold, 2.4);
        assert!(closed_thresholds(-3.0).unwrap().threshold_ordering.is_none());
        assert!(matches!(closed_thresholds(-2.0), Err(Error::DegenerateParams { .. })));
    }

    #[test]
    fn threshold_ordering_over_integers() {
        for k in 1..=100 {
            assert_eq!(closed_thresholds(k as f64).unwrap().threshold_ordering, Some(true), "k = {k}");
        }
    }

    #[test]
    fn threshold_main4() {
        let t = empirical_threshold(StatementId::Main4, -4.0, 1e-4).unwrap();
        assert!((t - 1.2).abs() < 1e-3, "{t}");
    }

    #[test]
    fn no_boundary_for_chains() {
        assert!(matches!(empirical_threshold(StatementId::ChainYang3t, 2.0, 1e-4), Err(Error::Config(_))));
    }

    #[test]
    fn falsify_examples() {
        assert!(falsify(StatementId::Main1, Params::new(1.0, -0.85).unwrap()).unwrap().is_some());
        assert!(falsify(StatementId::Main3, Params::new(1.0, 1.0).unwrap()).unwrap().is_none());
        assert!(falsify(StatementId::Main2, Params::new(2.0, -0.7).unwrap()).unwrap().is_some());
    }

    #[test]
    fn crossing_rejects_outside_range() {
        assert!(matches!(crossing_point(1.0, -0.9, 1e-12), Err(Error::ParamsOutOfStatementRange(_))));
        assert!(matches!(crossing_point(0.5, -0.1, 1e-12), Err(Error::ParamsOutOfStatementRange(_))));
    }

    #[test]
    fn crossing_is_unique() {
        let c = crossing_point(1.0, -0.4, 1e-12).unwrap();
        assert!(c.residual.abs() <= 1e-10);
        assert_eq!(c.sign_changes, 1);
    }
}
