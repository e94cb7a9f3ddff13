//! Bivariate means, the substitutions tying them to `sin x / x` and
//! `sinh x / x`, and sampled checks of the power-mean and `H_r` bounds.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sharpness::trig_threshold;

/// Weight of the power means in the corollaries.
pub const COROLLARY_WEIGHT: f64 = 2.0 / 3.0;

/// Below this `|a - b|/(a + b)` the means switch to their series in `z`.
pub const SERIES_SWITCH: f64 = 1e-8;

/// Log-space margins above `-NOISE_BAND` count as holding: they are rounding
/// noise around a bound that is tight at an end of the domain.
pub const NOISE_BAND: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Quadratic,
    Logarithmic,
    SeiffertP,
    SeiffertT,
    NeumanSandor,
    /// `(w a^r + (1-w) b^r)^{1/r}`, `a^w b^{1-w}` at `r = 0`.
    PowerMean { r: f64, w: f64 },
    /// `H_r(t)` with `t` passed as `a`; `b` is ignored.
    Hfun { r: f64 },
}

fn check_positive(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("means need finite a, b > 0, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// `ln M_r(e^la, e^lb; w)`, stable for every `r` including `r -> 0`.
pub fn ln_power_mean(la: f64, lb: f64, r: f64, w: f64) -> f64 {
    if r == 0.0 {
        return w * la + (1.0 - w) * lb;
    }
    let (ua, ub) = (r * la, r * lb);
    if ua.abs() < 0.5 && ub.abs() < 0.5 {
        return (w * ua.exp_m1() + (1.0 - w) * ub.exp_m1()).ln_1p() / r;
    }
    let (xa, xb) = (w.ln() + ua, (1.0 - w).ln() + ub);
    let m = xa.max(xb);
    (m + ((xa - m).exp() + (xb - m).exp()).ln()) / r
}

/// `ln H_r(e^l)`.
pub fn ln_hfun(l: f64, r: f64) -> f64 {
    if r == 0.0 {
        return l / 3.0;
    }
    ln_hfun_shifted(l, 0.0, r)
}

/// `ln H_r(e^{ls + shift}) - shift`, keeping precision when `shift` is huge.
fn ln_hfun_shifted(ls: f64, shift: f64, r: f64) -> f64 {
    if r == 0.0 {
        return ls / 3.0 - 2.0 * shift / 3.0;
    }
    let u = r * (ls + shift);
    if u > 20.0 {
        return ls + ((1.0 + (1.0 + 8.0 * (-2.0 * u).exp()).sqrt()) / 4.0).ln() / r;
    }
    let s = (8.0 + (2.0 * u).exp()).sqrt();
    let g = (((2.0 * u).exp_m1() / (s + 3.0) + u.exp_m1()) / 4.0).ln_1p();
    g / r - shift
}

/// `z / asin z`, `z / atan z`, `z / asinh z`, `z / atanh z` with series for
/// tiny `z`.
fn ratio_over(z: f64, f: fn(f64) -> f64, c2: f64) -> f64 {
    if z.abs() < SERIES_SWITCH {
        1.0 + c2 * z * z
    } else {
        z / f(z)
    }
}

pub fn mean_eval(kind: MeanKind, a: f64, b: f64) -> Result<f64> {
    if let MeanKind::Hfun { r } = kind {
        check_positive(a, 1.0)?;
        return Ok(ln_hfun(a.ln(), r).exp());
    }
    check_positive(a, b)?;
    if let MeanKind::PowerMean { w, .. } = kind {
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::Domain(format!("power mean weight w = {w} must lie in (0, 1)")));
        }
    }
    // Every mean of (a, a) is a, exactly.
    if a == b {
        return Ok(a);
    }
    let am = 0.5 * a + 0.5 * b;
    let z = (a - b) / (a + b);
    Ok(match kind {
        MeanKind::Arithmetic => am,
        MeanKind::Geometric => {
            let p = a * b;
            if p.is_normal() {
                p.sqrt()
            } else {
                a.sqrt() * b.sqrt()
            }
        }
        MeanKind::Quadratic => a.hypot(b) / std::f64::consts::SQRT_2,
        MeanKind::Logarithmic => {
            if z.abs() > 0.5 {
                (a - b) / (a.ln() - b.ln())
            } else {
                am * ratio_over(z, f64::atanh, -1.0 / 3.0)
            }
        }
        MeanKind::SeiffertP => am * ratio_over(z, f64::asin, -1.0 / 6.0),
        MeanKind::SeiffertT => am * ratio_over(z, f64::atan, 1.0 / 3.0),
        MeanKind::NeumanSandor => am * ratio_over(z, f64::asinh, 1.0 / 6.0),
        MeanKind::PowerMean { r, w } => ln_power_mean(a.ln(), b.ln(), r, w).exp(),
        MeanKind::Hfun { .. } => unreachable!("handled above"),
    })
}

/// The substitutions turning the trig/hyp bounds into mean inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Substitution {
    /// `x = asin z`: `sin x / x = P/A`, `cos x = G/A`.
    Arcsin,
    /// `x = atan z`: `sin x / x = T/Q`, `cos x = A/Q`.
    Arctan,
    /// `x = ln sqrt(a/b)`: `sinh x / x = L/G`, `cosh x = A/G`.
    LnSqrt,
    /// `x = asinh z`: `sinh x / x = NS/A`, `cosh x = Q/A`.
    Arcsinh,
}

impl Substitution {
    /// The `x` for `a > b > 0`, `z = (a - b)/(a + b)`.
    pub fn x(self, a: f64, b: f64) -> f64 {
        let z = (a - b) / (a + b);
        match self {
            Substitution::Arcsin => z.asin(),
            Substitution::Arctan => z.atan(),
            Substitution::LnSqrt => 0.5 * (a.ln() - b.ln()),
            Substitution::Arcsinh => z.asinh(),
        }
    }

    /// `(numerator, denominator)` means for the sinc-type ratio and for the
    /// cosine-type ratio.
    fn means(self) -> ((MeanKind, MeanKind), (MeanKind, MeanKind)) {
        use MeanKind::*;
        match self {
            Substitution::Arcsin => ((SeiffertP, Arithmetic), (Geometric, Arithmetic)),
            Substitution::Arctan => ((SeiffertT, Quadratic), (Arithmetic, Quadratic)),
            Substitution::LnSqrt => ((Logarithmic, Geometric), (Arithmetic, Geometric)),
            Substitution::Arcsinh => ((NeumanSandor, Arithmetic), (Quadratic, Arithmetic)),
        }
    }

    fn hyperbolic(self) -> bool {
        matches!(self, Substitution::LnSqrt | Substitution::Arcsinh)
    }
}

impl FromStr for Substitution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "arcsin" => Ok(Substitution::Arcsin),
            "arctan" => Ok(Substitution::Arctan),
            "ln" | "ln_sqrt" | "lnsqrt" => Ok(Substitution::LnSqrt),
            "arcsinh" => Ok(Substitution::Arcsinh),
            _ => Err(Error::Config(format!("unknown substitution '{s}'"))),
        }
    }
}

/// Largest absolute residual of the two identities behind a substitution.
pub fn substitution_check(identity: Substitution, a: f64, b: f64) -> Result<f64> {
    check_positive(a, b)?;
    if a <= b {
        return Err(Error::Domain(format!("substitution needs a > b, got a = {a}, b = {b}")));
    }
    let x = identity.x(a, b);
    let ((sn, sd), (cn, cd)) = identity.means();
    let sinc_means = mean_eval(sn, a, b)? / mean_eval(sd, a, b)?;
    let cos_means = mean_eval(cn, a, b)? / mean_eval(cd, a, b)?;
    let (sinc, cos) = if identity.hyperbolic() { (x.sinh() / x, x.cosh()) } else { (x.sin() / x, x.cos()) };
    Ok((sinc - sinc_means).abs().max((cos - cos_means).abs()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(Side::Lower),
            "upper" => Ok(Side::Upper),
            _ => Err(Error::Config(format!("unknown side '{s}' (expected lower or upper)"))),
        }
    }
}

/// The one-sided bounds that can be checked: four in `x` and four in `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundForm {
    #[serde(rename = "P_AG")]
    PAg,
    #[serde(rename = "T_AQ")]
    TAq,
    #[serde(rename = "L_AG")]
    LAg,
    #[serde(rename = "NS_AQ")]
    NsAq,
    Yang1t,
    Yang2t,
    Yang1h,
    Yang2h,
}

impl BoundForm {
    pub const ALL: [BoundForm; 8] = [
        BoundForm::PAg,
        BoundForm::TAq,
        BoundForm::LAg,
        BoundForm::NsAq,
        BoundForm::Yang1t,
        BoundForm::Yang2t,
        BoundForm::Yang1h,
        BoundForm::Yang2h,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundForm::PAg => "P_AG",
            BoundForm::TAq => "T_AQ",
            BoundForm::LAg => "L_AG",
            BoundForm::NsAq => "NS_AQ",
            BoundForm::Yang1t => "Yang1t",
            BoundForm::Yang2t => "Yang2t",
            BoundForm::Yang1h => "Yang1h",
            BoundForm::Yang2h => "Yang2h",
        }
    }

    /// The bound in `x` a mean form is equivalent to.
    pub fn x_form(self) -> BoundForm {
        match self {
            BoundForm::PAg | BoundForm::TAq => BoundForm::Yang1t,
            BoundForm::LAg | BoundForm::NsAq => BoundForm::Yang1h,
            other => other,
        }
    }

    pub fn substitution(self) -> Option<Substitution> {
        match self {
            BoundForm::PAg => Some(Substitution::Arcsin),
            BoundForm::TAq => Some(Substitution::Arctan),
            BoundForm::LAg => Some(Substitution::LnSqrt),
            BoundForm::NsAq => Some(Substitution::Arcsinh),
            _ => None,
        }
    }

    fn hyperbolic(self) -> bool {
        matches!(self.x_form(), BoundForm::Yang1h | BoundForm::Yang2h)
    }
}

impl fmt::Display for BoundForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        BoundForm::ALL
            .into_iter()
            .find(|b| b.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Config(format!("unknown bound '{s}'")))
    }
}

/// `(alpha*, beta*)`: the lower bound holds iff `alpha <= alpha*`, the upper
/// iff `beta >= beta*`.
pub fn sharp_exponents(which: BoundForm) -> (f64, f64) {
    match which.x_form() {
        BoundForm::Yang1t => (0.8, -trig_threshold(1.0)),
        BoundForm::Yang2t => (0.6, -trig_threshold(2.0)),
        BoundForm::Yang1h => (0.0, 0.8),
        _ => (0.0, 0.6),
    }
}

/// Where a margin was measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplePoint {
    X(f64),
    Pair { a: f64, b: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub holds: bool,
    /// Smallest `ln(rhs) - ln(lhs)` over the samples; negative means a
    /// violation.
    #[serde(with = "crate::report::nonfinite")]
    pub worst_margin: f64,
    pub worst_at: SamplePoint,
    pub samples: usize,
    /// Samples with margin below `-NOISE_BAND`.
    pub violations: usize,
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (l + (h - l) * i as f64 / (n.max(2) - 1) as f64).exp())
}

fn x_grid(hyperbolic: bool, n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = if hyperbolic {
        logspace(1e-3, 1e3, n / 2).chain(logspace(1e3, 1e300, n - n / 2)).collect()
    } else {
        logspace(1e-3, 1.0, n / 2).chain(logspace(1e-12, 0.6, n - n / 2).map(|d| FRAC_PI_2 - d)).collect()
    };
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// `(ln(s) - shift, ln(c) - shift, shift)` for `s = sinc`-type ratio and
/// `c = cos`-type value at `x`.
fn shifted_logs(hyperbolic: bool, x: f64) -> (f64, f64, f64) {
    if !hyperbolic {
        return ((x.sin() / x).ln(), x.cos().ln(), 0.0);
    }
    if x <= 1.0 {
        return ((x.sinh() / x).ln(), x.cosh().ln(), 0.0);
    }
    let e = (-2.0 * x).exp();
    ((-e).ln_1p() - LN_2 - x.ln(), e.ln_1p() - LN_2, x)
}

/// `ln(bound) - shift` for the power-mean or `H_r` bound at exponent `r`,
/// given the shifted log of the cosine-type value.
fn ln_bound(x_form: BoundForm, r: f64, lc: f64, shift: f64) -> f64 {
    match x_form {
        BoundForm::Yang1t | BoundForm::Yang1h => ln_power_mean(-shift, lc, r, COROLLARY_WEIGHT),
        _ => ln_hfun_shifted(lc, shift, r),
    }
}

fn margin(side: Side, ln_mid: f64, ln_bound: f64) -> f64 {
    match side {
        Side::Lower => ln_mid - ln_bound,
        Side::Upper => ln_bound - ln_mid,
    }
}

/// Samples the bound `M_exponent(...) < ratio` (lower) or `ratio <
/// M_exponent(...)` (upper). The Yang forms use an `x`-grid reaching deep
/// into both ends; the mean forms an `(a, b)` grid with `a/b` up to 1e12.
pub fn bound_check(which: BoundForm, exponent: f64, side: Side, samples: usize) -> Result<BoundVerdict> {
    if samples < 2 {
        return Err(Error::Config("bound_check needs at least 2 samples".into()));
    }
    if !exponent.is_finite() {
        return Err(Error::Domain(format!("exponent {exponent} is not finite")));
    }
    let mut worst = (f64::INFINITY, SamplePoint::X(f64::NAN));
    let mut violations = 0;
    let mut count = 0;
    let mut record = |m: f64, at: SamplePoint| {
        if m.is_nan() {
            return;
        }
        count += 1;
        if m < -NOISE_BAND {
            violations += 1;
        }
        if m < worst.0 {
            worst = (m, at);
        }
    };
    let x_form = which.x_form();
    match which.substitution() {
        None => {
            let hyp = which.hyperbolic();
            for x in x_grid(hyp, samples) {
                let (ls, lc, shift) = shifted_logs(hyp, x);
                record(margin(side, ls, ln_bound(x_form, exponent, lc, shift)), SamplePoint::X(x));
            }
        }
        Some(sub) => {
            let ((sn, sd), (cn, _)) = sub.means();
            let half = samples / 2;
            for (i, ratio) in logspace(1.0 + 1e-6, 1e12, samples).enumerate() {
                let b = if i < half { 1.0 } else { 7.25 };
                let a = ratio * b;
                let mid = mean_eval(sn, a, b)?;
                // M(sd, cn) = sd * M(1, cos x): P_AG is M(A, G), L_AG is M(G, A), ...
                let (outer, inner) = (mean_eval(sd, a, b)?, mean_eval(cn, a, b)?);
                let lb = ln_power_mean(outer.ln(), inner.ln(), exponent, COROLLARY_WEIGHT);
                record(margin(side, mid.ln(), lb), SamplePoint::Pair { a, b });
            }
        }
    }
    Ok(BoundVerdict { holds: violations == 0, worst_margin: worst.0, worst_at: worst.1, samples: count, violations })
}

/// Membership of `(k, p)` in the three regions whose intersection is the
/// claimed validity region of the (Yang3t)/(Yang4t) chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRegion {
    /// First link: `(k >= 2, p > 0)` or `(1 <= k <= 2, p < 0)`.
    pub omega1: bool,
    /// Second link as reduced to `(S^{k+1}/C)^p > 1`: `k >= 2, p >= 0`.
    pub omega2: bool,
    /// Third link `f(k, -p) > 0`: `-p > 0` or `-p <= trig_threshold(k)`.
    pub omega3: bool,
    pub chain_holds: bool,
}

pub fn omega_region(k: f64, p: f64) -> Result<OmegaRegion> {
    if !(k >= 1.0) {
        return Err(Error::ParamsOutOfStatementRange(format!("omega regions need k >= 1, got {k}")));
    }
    let omega1 = (k >= 2.0 && p > 0.0) || (k <= 2.0 && p < 0.0);
    let omega2 = k >= 2.0 && p >= 0.0;
    let omega3 = -p > 0.0 || -p <= trig_threshold(k);
    Ok(OmegaRegion { omega1, omega2, omega3, chain_holds: omega1 && omega2 && omega3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL_KINDS: [MeanKind; 8] = [
        MeanKind::Arithmetic,
        MeanKind::Geometric,
        MeanKind::Quadratic,
        MeanKind::Logarithmic,
        MeanKind::SeiffertP,
        MeanKind::SeiffertT,
        MeanKind::NeumanSandor,
        MeanKind::PowerMean { r: 0.8, w: 2.0 / 3.0 },
    ];

    #[test]
    fn equal_arguments() {
        for kind in ALL_KINDS {
            assert_eq!(mean_eval(kind, 3.0, 3.0).unwrap(), 3.0, "{kind:?}");
        }
        for r in [-2.0, 0.0, 0.6, 5.0] {
            assert!((mean_eval(MeanKind::Hfun { r }, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn logarithmic_example() {
        let e2 = 2f64.exp();
        let l = mean_eval(MeanKind::Logarithmic, 1.0, e2).unwrap();
        assert!((l - (e2 - 1.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn near_equal_is_smooth() {
        let a = 1.0 + 1e-12;
        for kind in [MeanKind::SeiffertP, MeanKind::SeiffertT, MeanKind::NeumanSandor, MeanKind::Logarithmic] {
            let m = mean_eval(kind, a, 1.0).unwrap();
            assert!((m - (1.0 + 0.5e-12)).abs() < 1e-15, "{kind:?}: {m}");
        }
    }

    #[test]
    fn nonpositive_is_domain_error() {
        assert!(matches!(mean_eval(MeanKind::Arithmetic, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(mean_eval(MeanKind::PowerMean { r: 1.0, w: 1.0 }, 1.0, 2.0).is_err());
    }

    #[test]
    fn hfun_limits() {
        let t: f64 = 0.3;
        let h0 = mean_eval(MeanKind::Hfun { r: 0.0 }, t, 1.0).unwrap();
        assert!((h0 - t.cbrt()).abs() < 1e-15);
        let near = mean_eval(MeanKind::Hfun { r: 1e-9 }, t, 1.0).unwrap();
        assert!((near - h0).abs() < 1e-9);
        let direct = ((8.0 + t * t).sqrt() + t) / 4.0;
        assert!((mean_eval(MeanKind::Hfun { r: 1.0 }, t, 1.0).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn substitutions_examples() {
        assert!(substitution_check(Substitution::Arcsin, 2.0, 1.0).unwrap() <= 1e-12);
        assert!(substitution_check(Substitution::LnSqrt, 4.0, 1.0).unwrap() <= 1e-12);
        assert!(substitution_check(Substitution::Arcsinh, 3.0, 2.0).unwrap() <= 1e-12);
        assert!(substitution_check(Substitution::Arctan, 5.0, 0.5).unwrap() <= 1e-12);
        assert!(substitution_check(Substitution::Arcsin, 1.0, 2.0).is_err());
    }

    #[test]
    fn yang1t_sharpness() {
        assert!(bound_check(BoundForm::Yang1t, 0.8, Side::Lower, 2000).unwrap().holds);
        let v = bound_check(BoundForm::Yang1t, 0.81, Side::Lower, 2000).unwrap();
        assert!(!v.holds && v.worst_margin < 0.0);
        let beta = -trig_threshold(2.0);
        assert!(bound_check(BoundForm::Yang2t, beta, Side::Upper, 2000).unwrap().holds);
    }

    #[test]
    fn hyperbolic_lower_fails_far_out() {
        assert!(bound_check(BoundForm::Yang1h, 0.0, Side::Lower, 2000).unwrap().holds);
        let v = bound_check(BoundForm::Yang1h, 0.01, Side::Lower, 2000).unwrap();
        assert!(!v.holds);
        match v.worst_at {
            SamplePoint::X(x) => assert!(x > 1e40, "{x}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn omega_examples() {
        assert!(omega_region(2.0, 0.8).unwrap().chain_holds);
        assert!(!omega_region(2.0, 0.7).unwrap().chain_holds);
        assert!(omega_region(3.0, 0.7).unwrap().chain_holds);
        assert!(!omega_region(3.0, 0.67).unwrap().chain_holds);
        assert!(omega_region(0.5, 1.0).is_err());
    }
}
