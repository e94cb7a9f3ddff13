//! Functions of the shape
//!
//! ```text
//! phi(x) = c0 + sum_i w_i exp(alpha_i ln S(x) + beta_i ln T(x))
//! ```
//!
//! with `S, T` either `sin x/x, tan x/x` or `sinh x/x, tanh x/x`. The Wilker
//! functionals, the chain links and the mean reductions are all of this form,
//! so one evaluator serves them all.

use std::f64::consts::FRAC_PI_2;

use super::ratios::{log_ratio_deriv_iv, log_ratio_enc, log_ratio_iv, Ratio};
use super::series::{
    combined_log_coeffs, exp_series, exp_tail_bound, horner, horner_f64, Family, MAX_TERMS,
    SWITCH_RADIUS,
};
use super::Params;
use crate::error::{domain, Result};
use crate::interval::Interval;

/// Below this the direct enclosure is too lossy to be worth intersecting with
/// the series enclosure.
const DIRECT_MIN_X: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpTerm {
    pub weight: Interval,
    pub sinc_exp: f64,
    pub tanc_exp: f64,
}

impl ExpTerm {
    pub fn new(weight: Interval, sinc_exp: f64, tanc_exp: f64) -> Self {
        Self { weight, sinc_exp, tanc_exp }
    }
}

/// Value of a trig form as `x -> pi/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndpointLimit {
    Finite(Interval),
    PlusInfinity,
    MinusInfinity,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ExpLogForm {
    family: Family,
    constant: Interval,
    terms: Vec<ExpTerm>,
    known_zero: usize,
    zero: bool,
    coeffs: Vec<Interval>,
    wilker: Option<Params>,
}

impl ExpLogForm {
    pub fn new(family: Family, constant: Interval, terms: Vec<ExpTerm>) -> Self {
        let mut c = constant;
        let mut merged: Vec<ExpTerm> = Vec::new();
        for t in terms {
            if t.sinc_exp == 0.0 && t.tanc_exp == 0.0 {
                c = c + t.weight;
                continue;
            }
            match merged
                .iter_mut()
                .find(|m| m.sinc_exp == t.sinc_exp && m.tanc_exp == t.tanc_exp)
            {
                Some(m) => m.weight = m.weight + t.weight,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.weight != Interval::ZERO);
        let zero = merged.is_empty() && c == Interval::ZERO;
        let mut form = Self {
            family,
            constant: c,
            terms: merged,
            known_zero: 0,
            zero,
            coeffs: Vec::new(),
            wilker: None,
        };
        form.coeffs = form.compute_coeffs();
        if zero {
            form.known_zero = MAX_TERMS + 1;
        }
        form
    }

    /// The identically vanishing function.
    pub fn zero(family: Family) -> Self {
        Self::new(family, Interval::ZERO, Vec::new())
    }

    /// Declares the first `m` coefficients in `y = x^2` to vanish exactly.
    pub fn with_known_zeros(mut self, m: usize) -> Self {
        let m = m.min(MAX_TERMS);
        for c in self.coeffs.iter_mut().take(m) {
            *c = Interval::ZERO;
        }
        self.known_zero = self.known_zero.max(m);
        self
    }

    /// Marks the form as the Wilker functional for `params`, which enables
    /// the monotonicity argument near pi/2.
    pub(crate) fn tagged(mut self, params: Params) -> Self {
        self.wilker = Some(params);
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn constant(&self) -> Interval {
        self.constant
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_identically_zero(&self) -> bool {
        self.zero
    }

    pub fn wilker_params(&self) -> Option<Params> {
        self.wilker
    }

    /// Number of leading `y`-coefficients known to vanish.
    pub fn known_zeros(&self) -> usize {
        self.known_zero
    }

    /// Enclosure of `[y^n] phi`, `n <= MAX_TERMS`.
    pub fn coeff(&self, n: usize) -> Interval {
        self.coeffs[n]
    }

    fn compute_coeffs(&self) -> Vec<Interval> {
        let mut out = vec![Interval::ZERO; MAX_TERMS + 1];
        out[0] = self.constant;
        for t in &self.terms {
            let lam = combined_log_coeffs(self.family, t.sinc_exp, t.tanc_exp, MAX_TERMS);
            let e = exp_series(&lam, MAX_TERMS);
            for (o, ei) in out.iter_mut().zip(e) {
                *o = *o + t.weight * ei;
            }
        }
        out
    }

    fn check_x(&self, x: f64) -> Result<()> {
        let ok = match self.family {
            Family::Trig => (0.0..FRAC_PI_2).contains(&x),
            Family::Hyp => (0.0..f64::INFINITY).contains(&x),
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("x = {x} outside the domain of the {:?} kernels", self.family)))
        }
    }

    /// Best-effort floating point value.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        if self.zero {
            return Ok(0.0);
        }
        if x <= SWITCH_RADIUS {
            let mids: Vec<f64> = self.coeffs.iter().map(|c| c.mid()).collect();
            return Ok(horner_f64(&mids, x * x));
        }
        let (ls, lt) = log_ratios_f64(self.family, x);
        let mut acc = self.constant.mid();
        for t in &self.terms {
            acc += t.weight.mid() * (t.sinc_exp * ls + t.tanc_exp * lt).exp();
        }
        Ok(acc)
    }

    /// Sound enclosure of `phi` over `x`, with `terms` series coefficients
    /// below the switch radius.
    pub fn enclose(&self, x: Interval, terms: usize) -> Result<Interval> {
        self.check_x(x.lo())?;
        self.check_x(x.hi())?;
        if self.zero {
            return Ok(Interval::ZERO);
        }
        if x.lo() < SWITCH_RADIUS && x.hi() > SWITCH_RADIUS {
            let a = self.enclose(Interval::raw(x.lo(), SWITCH_RADIUS), terms)?;
            let b = self.enclose(Interval::raw(SWITCH_RADIUS, x.hi()), terms)?;
            return Ok(a.hull(b));
        }
        if x.hi() <= SWITCH_RADIUS {
            let s = self.series_enclosure(x, terms);
            if x.lo() >= DIRECT_MIN_X {
                if let Some(d) = self.direct_enclosure(x) {
                    return Ok(s.intersect(d).unwrap_or(s));
                }
            }
            return Ok(s);
        }
        self.direct_enclosure(x)
            .ok_or_else(|| domain(format!("cannot enclose on {x}")))
    }

    /// Upper bound on the truncation error of the series with `terms`
    /// coefficients for `0 <= y <= y_hi`.
    pub fn series_tail(&self, y_hi: f64, terms: usize) -> f64 {
        let mut acc = Interval::ZERO;
        for t in &self.terms {
            let b = exp_tail_bound(t.sinc_exp, t.tanc_exp, terms, y_hi);
            acc = acc + Interval::point(t.weight.mag()) * b;
        }
        acc.hi()
    }

    /// Enclosure of `phi(x) / y^j` for `x` in `[0, x_hi]`, built from the
    /// coefficients `j..=terms` and the tail. Requires the coefficients below
    /// `j` to be treated as zero by the caller.
    pub fn reduced_enclosure(&self, j: usize, x_hi: f64, terms: usize) -> Interval {
        let terms = terms.clamp(1, MAX_TERMS);
        let y = Interval::raw(0.0, Interval::point(x_hi).sqr().hi());
        let j = j.min(terms);
        let q = horner(&self.coeffs[j..=terms], y);
        let tail = self.series_tail(y.hi(), terms);
        q + Interval::symmetric(scaled_tail(tail, y.hi(), j))
    }

    fn series_enclosure(&self, x: Interval, terms: usize) -> Interval {
        let terms = terms.clamp(1, MAX_TERMS);
        let y = Interval::raw(x.lo().max(0.0), x.hi()).sqr();
        let m = self.known_zero.min(terms);
        let q = horner(&self.coeffs[m..=terms], y);
        let tail = self.series_tail(y.hi(), terms);
        let bound = scaled_tail(tail, y.hi(), m);
        let ym = pow_iv(y, m);
        ym * (q + Interval::symmetric(bound))
    }

    fn ratios(&self) -> (Ratio, Ratio) {
        (Ratio::of(self.family, false), Ratio::of(self.family, true))
    }

    fn sum_terms(&self, ls: Interval, lt: Interval) -> Interval {
        let mut acc = self.constant;
        for t in &self.terms {
            let e = ls * t.sinc_exp + lt * t.tanc_exp;
            acc = acc + t.weight * e.exp();
        }
        acc
    }

    /// Naive enclosure intersected with the mean-value form.
    fn direct_enclosure(&self, x: Interval) -> Option<Interval> {
        if !(x.lo() > 0.0) {
            return None;
        }
        let (rs, rt) = self.ratios();
        let ls = log_ratio_iv(rs, x);
        let lt = log_ratio_iv(rt, x);
        let naive = self.sum_terms(ls, lt);
        if x.is_point() {
            return Some(naive);
        }
        let m = x.mid();
        let at_mid = self.sum_terms(log_ratio_enc(rs, m), log_ratio_enc(rt, m));
        let (Some(ds), Some(dt)) = (log_ratio_deriv_iv(rs, x), log_ratio_deriv_iv(rt, x)) else {
            return Some(naive);
        };
        let mut deriv = Interval::ZERO;
        for t in &self.terms {
            let e = (ls * t.sinc_exp + lt * t.tanc_exp).exp();
            deriv = deriv + t.weight * e * (ds * t.sinc_exp + dt * t.tanc_exp);
        }
        if !deriv.is_bounded() {
            return Some(naive);
        }
        let mvf = at_mid + deriv * (x - m);
        Some(naive.intersect(mvf).unwrap_or(naive))
    }

    /// Enclosure of a trig form on `[x_delta, pi/2)`, using
    /// `sin x/x in [2/pi, sinc(x_delta)]` and `tan x/x >= tanc(x_delta)`.
    pub fn trig_tail_enclosure(&self, x_delta: f64) -> Interval {
        debug_assert_eq!(self.family, Family::Trig);
        if self.zero {
            return Interval::ZERO;
        }
        let ls_end = Interval::two_over_pi().ln().expect("positive");
        let ls = Interval::raw(ls_end.lo(), log_ratio_enc(Ratio::Sinc, x_delta).hi());
        let lt_lo = log_ratio_enc(Ratio::Tanc, x_delta).lo();
        let mut acc = self.constant;
        for t in &self.terms {
            let a = ls * t.sinc_exp;
            let b = if t.tanc_exp > 0.0 {
                Interval::raw((Interval::point(lt_lo) * t.tanc_exp).lo(), f64::INFINITY)
            } else if t.tanc_exp < 0.0 {
                Interval::raw(f64::NEG_INFINITY, (Interval::point(lt_lo) * t.tanc_exp).hi())
            } else {
                Interval::ZERO
            };
            acc = acc + t.weight * (a + b).exp();
        }
        acc
    }

    /// Limit of a trig form as `x -> pi/2`.
    pub fn trig_endpoint_limit(&self) -> EndpointLimit {
        if self.zero {
            return EndpointLimit::Finite(Interval::ZERO);
        }
        let two_over_pi = Interval::two_over_pi();
        let max_beta = self.terms.iter().map(|t| t.tanc_exp).fold(f64::NEG_INFINITY, f64::max);
        if max_beta > 0.0 {
            let lead: Interval = self
                .terms
                .iter()
                .filter(|t| t.tanc_exp == max_beta)
                .map(|t| t.weight * two_over_pi.pow_real(t.sinc_exp).expect("positive"))
                .sum();
            return if lead.is_positive() {
                EndpointLimit::PlusInfinity
            } else if lead.is_negative() {
                EndpointLimit::MinusInfinity
            } else {
                EndpointLimit::Unknown
            };
        }
        let v = self.constant
            + self
                .terms
                .iter()
                .filter(|t| t.tanc_exp == 0.0)
                .map(|t| t.weight * two_over_pi.pow_real(t.sinc_exp).expect("positive"))
                .sum::<Interval>();
        EndpointLimit::Finite(v)
    }
}

/// `(ln S(x), ln T(x))` in floating point for `x > SWITCH_RADIUS`.
pub(crate) fn log_ratios_f64(family: Family, x: f64) -> (f64, f64) {
    match family {
        Family::Trig => ((x.sin() / x).ln(), (x.tan() / x).ln()),
        Family::Hyp => {
            let ls = if x <= 20.0 {
                (x.sinh() / x).ln()
            } else {
                x - (2.0 * x).ln() + (-(-2.0 * x).exp()).ln_1p()
            };
            let lt = x.tanh().ln() - x.ln();
            (ls, lt)
        }
    }
}

/// Upper bound on `tail / y^j`.
fn scaled_tail(tail: f64, y: f64, j: usize) -> f64 {
    if tail == 0.0 {
        return 0.0;
    }
    if j == 0 {
        return tail;
    }
    let yj = pow_iv(Interval::point(y), j).lo();
    if yj > 0.0 {
        Interval::point(tail).div(Interval::point(yj)).expect("yj > 0").hi()
    } else {
        f64::INFINITY
    }
}

/// `x^n` by repeated interval multiplication (`x >= 0`).
pub(crate) fn pow_iv(x: Interval, n: usize) -> Interval {
    (0..n).fold(Interval::ONE, |acc, _| acc * x)
}
