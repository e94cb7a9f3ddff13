//! Closed real intervals over binary64 with outward rounding.
//!
//! Basic arithmetic emulates directed rounding exactly: the rounding error of
//! each operation is recovered with an error-free transformation (TwoSum, FMA
//! residuals) and the endpoint is moved one ulp outward only when the rounded
//! result lies on the wrong side of the exact one. Elementary functions assume
//! the platform libm is accurate to within one ulp (two for the hyperbolic
//! functions) and widen their endpoint images accordingly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Working precision used for certified evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Binary64,
}

impl Precision {
    pub fn description(self) -> &'static str {
        match self {
            Precision::Binary64 => "binary64, outward-rounded interval arithmetic",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

/// Closed interval `[lo, hi]`.
///
/// Intervals built with [`Interval::new`] have finite endpoints. Infinite
/// endpoints only arise through [`Interval::unbounded`] or overflow, and mark
/// tail enclosures.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

// Below this magnitude FMA residuals may be inexact, so rounding is not
// recovered exactly and the endpoint is widened unconditionally.
const TINY: f64 = 1e-290;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

fn overflowed(r: f64, a: f64, b: f64) -> bool {
    r.is_infinite() && a.is_finite() && b.is_finite()
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if overflowed(s, a, b) {
        return if s > 0.0 { f64::MAX } else { s };
    }
    if !s.is_finite() {
        return s;
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if overflowed(s, a, b) {
        return if s < 0.0 { -f64::MAX } else { s };
    }
    if !s.is_finite() {
        return s;
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Sign of (exact product - rounded product), or `None` when it cannot be
/// recovered exactly.
fn mul_residual(a: f64, b: f64, p: f64) -> Option<f64> {
    if p.abs() < TINY {
        None
    } else {
        Some(a.mul_add(b, -p))
    }
}

pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if overflowed(p, a, b) {
        return if p > 0.0 { f64::MAX } else { p };
    }
    if !p.is_finite() {
        return p;
    }
    match mul_residual(a, b, p) {
        Some(e) if e >= 0.0 => p,
        _ => p.next_down(),
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if overflowed(p, a, b) {
        return if p < 0.0 { -f64::MAX } else { p };
    }
    if !p.is_finite() {
        return p;
    }
    match mul_residual(a, b, p) {
        Some(e) if e <= 0.0 => p,
        _ => p.next_up(),
    }
}

/// Sign of (exact quotient - rounded quotient), or `None` when unknown.
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q.abs() < TINY || a.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(r * b.signum())
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if overflowed(q, a, b) {
        return if q > 0.0 { f64::MAX } else { q };
    }
    if !q.is_finite() || b.is_infinite() {
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(s) if s >= 0.0 => q,
        _ => q.next_down(),
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if overflowed(q, a, b) {
        return if q < 0.0 { -f64::MAX } else { q };
    }
    if !q.is_finite() || b.is_infinite() {
        return q;
    }
    match div_residual_sign(a, b, q) {
        Some(s) if s <= 0.0 => q,
        _ => q.next_up(),
    }
}

fn nudge_down(v: f64, ulps: u32) -> f64 {
    if !v.is_finite() {
        return if v == f64::INFINITY { f64::MAX } else { v };
    }
    (0..ulps).fold(v, |x, _| x.next_down())
}

fn nudge_up(v: f64, ulps: u32) -> f64 {
    if !v.is_finite() {
        return if v == f64::NEG_INFINITY { -f64::MAX } else { v };
    }
    (0..ulps).fold(v, |x, _| x.next_up())
}

/// Ulps of slack granted to libm results.
const LIBM_ULPS: u32 = 2;
const LIBM_HYP_ULPS: u32 = 3;

/// Arithmetic operation selector for [`iv_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary function selector for [`iv_elem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElemFn {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
}

pub fn iv_arith(op: ArithOp, a: Interval, b: Interval) -> Result<Interval> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.div(b)?,
    })
}

pub fn iv_elem(f: ElemFn, a: Interval) -> Result<Interval> {
    match f {
        ElemFn::Sin => Ok(a.sin()),
        ElemFn::Cos => Ok(a.cos()),
        ElemFn::Tan => a.tan(),
        ElemFn::Sinh => Ok(a.sinh()),
        ElemFn::Cosh => Ok(a.cosh()),
        ElemFn::Tanh => Ok(a.tanh()),
        ElemFn::Exp => Ok(a.exp()),
        ElemFn::Log => a.ln(),
    }
}

pub fn iv_pow_real(a: Interval, p: f64) -> Result<Interval> {
    a.pow_real(p)
}

impl Interval {
    /// Finite interval `[lo, hi]`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain(format!("interval endpoints must be finite: [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(domain(format!("empty interval: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Interval that may carry infinite endpoints (tail enclosures).
    pub fn unbounded(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(domain(format!("invalid interval: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        Self { lo: x, hi: x }
    }

    /// Internal constructor; callers guarantee `lo <= hi`.
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi) && !lo.is_nan() && !hi.is_nan(), "bad interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Enclosure of pi.
    pub fn pi() -> Self {
        Self::raw(std::f64::consts::PI, std::f64::consts::PI.next_up())
    }

    /// Enclosure of pi/2.
    pub fn half_pi() -> Self {
        Self::raw(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2.next_up())
    }

    /// Enclosure of 2/pi.
    pub fn two_over_pi() -> Self {
        Self::point(2.0).div(Self::pi()).expect("pi is nonzero")
    }

    /// Enclosure of the rational `num/den`.
    pub fn ratio(num: f64, den: f64) -> Result<Self> {
        Self::point(num).div(Self::point(den))
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo.is_finite() { self.lo } else { self.hi };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn width(self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    /// Largest absolute value.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Self::raw(lo, hi))
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        let r = r.abs();
        Self::raw(-r, r)
    }

    pub fn scale(self, c: f64) -> Interval {
        self * Interval::point(c)
    }

    /// Fallible division; `Div` is not implemented because a divisor
    /// containing zero is an error, not an unbounded result.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZeroInterval { lo: rhs.lo, hi: rhs.hi });
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Self::raw(min4(cands_lo), max4(cands_hi)))
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Self::raw(mul_down(self.lo, self.lo), mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Self::raw(mul_down(self.hi, self.hi), mul_up(self.lo, self.lo))
        } else {
            let m = self.mag();
            Self::raw(0.0, mul_up(m, m))
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(domain(format!("sqrt of [{}, {}]", self.lo, self.hi)));
        }
        let down = |x: f64| {
            let s = x.sqrt();
            if s.is_infinite() || s == 0.0 || s.mul_add(-s, x) >= 0.0 {
                s
            } else {
                s.next_down()
            }
        };
        let up = |x: f64| {
            let s = x.sqrt();
            if s.is_infinite() || s.mul_add(-s, x) <= 0.0 {
                s
            } else {
                s.next_up()
            }
        };
        Ok(Self::raw(down(self.lo).max(0.0), up(self.hi)))
    }

    pub fn exp(self) -> Interval {
        Self::raw(exp_down(self.lo), exp_up(self.hi))
    }

    pub fn ln(self) -> Result<Interval> {
        if !(self.lo > 0.0) {
            return Err(domain(format!("log of [{}, {}]", self.lo, self.hi)));
        }
        Ok(Self::raw(ln_down(self.lo), ln_up(self.hi)))
    }

    pub fn sin(self) -> Interval {
        use std::f64::consts::{FRAC_PI_2, PI};
        self.periodic(|x| x.sin(), FRAC_PI_2, -FRAC_PI_2 + 2.0 * PI)
    }

    pub fn cos(self) -> Interval {
        use std::f64::consts::PI;
        self.periodic(|x| x.cos(), 0.0, PI)
    }

    /// Shared sin/cos enclosure. `max_at` and `min_at` are the phases of the
    /// maxima and minima modulo 2*pi.
    fn periodic(self, f: impl Fn(f64) -> f64, max_at: f64, min_at: f64) -> Interval {
        use std::f64::consts::TAU;
        if !self.is_bounded() || self.width() >= TAU {
            return Self::raw(-1.0, 1.0);
        }
        if self.is_point() && self.lo == 0.0 {
            let v = f(0.0);
            return Self::point(v);
        }
        let a = f(self.lo);
        let b = f(self.hi);
        let mut lo = nudge_down(a.min(b), LIBM_ULPS).max(-1.0);
        let mut hi = nudge_up(a.max(b), LIBM_ULPS).min(1.0);
        let hits = |phase: f64| {
            // Conservative: rounding in the phase computation only adds
            // spurious hits, which loosen the bound.
            let t_lo = (self.lo - phase) / TAU;
            let t_hi = (self.hi - phase) / TAU;
            let eps = 1e-9 + 1e-15 * t_lo.abs().max(t_hi.abs());
            (t_hi + eps).floor() >= (t_lo - eps).ceil()
        };
        if hits(max_at) {
            hi = 1.0;
        }
        if hits(min_at) {
            lo = -1.0;
        }
        Self::raw(lo, hi)
    }

    /// Tangent on a subinterval of (-pi/2, pi/2).
    pub fn tan(self) -> Result<Interval> {
        use std::f64::consts::FRAC_PI_2;
        // FRAC_PI_2 is below the true pi/2, so this admits only points inside
        // the open interval.
        if !(self.lo >= -FRAC_PI_2 && self.hi <= FRAC_PI_2) {
            return Err(domain(format!(
                "tan requires a subinterval of (-pi/2, pi/2), got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.is_point() && self.lo == 0.0 {
            return Ok(Self::ZERO);
        }
        Ok(Self::raw(
            nudge_down(self.lo.tan(), LIBM_ULPS),
            nudge_up(self.hi.tan(), LIBM_ULPS),
        ))
    }

    pub fn sinh(self) -> Interval {
        let f = |x: f64, up: bool| {
            if x == 0.0 || x.is_infinite() {
                return x;
            }
            let v = x.sinh();
            if up {
                nudge_up(v, LIBM_HYP_ULPS)
            } else {
                nudge_down(v, LIBM_HYP_ULPS)
            }
        };
        Self::raw(f(self.lo, false), f(self.hi, true))
    }

    pub fn cosh(self) -> Interval {
        let up = |x: f64| {
            if x == 0.0 {
                1.0
            } else {
                nudge_up(x.cosh(), LIBM_HYP_ULPS)
            }
        };
        let down = |x: f64| {
            if x == 0.0 {
                1.0
            } else {
                nudge_down(x.cosh(), LIBM_HYP_ULPS).max(1.0)
            }
        };
        if self.contains_zero() {
            Self::raw(1.0, up(self.lo).max(up(self.hi)))
        } else if self.lo > 0.0 {
            Self::raw(down(self.lo), up(self.hi))
        } else {
            Self::raw(down(self.hi), up(self.lo))
        }
    }

    pub fn tanh(self) -> Interval {
        let f = |x: f64, up: bool| {
            if x == 0.0 {
                return 0.0;
            }
            let v = x.tanh();
            if up {
                nudge_up(v, LIBM_HYP_ULPS).min(1.0)
            } else {
                nudge_down(v, LIBM_HYP_ULPS).max(-1.0)
            }
        };
        Self::raw(f(self.lo, false), f(self.hi, true))
    }

    /// `{ x^p : x in self }` for a positive base.
    pub fn pow_real(self, p: f64) -> Result<Interval> {
        if !(self.lo > 0.0) {
            return Err(domain(format!(
                "real power needs a positive base, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if p.is_nan() {
            return Err(domain("NaN exponent"));
        }
        if p == 0.0 {
            return Ok(Self::ONE);
        }
        if p == 1.0 {
            return Ok(self);
        }
        if self.lo == 1.0 && self.hi == 1.0 {
            return Ok(Self::ONE);
        }
        let (a, b) = if p > 0.0 { (self.lo, self.hi) } else { (self.hi, self.lo) };
        Ok(Self::raw(pow_down(a, p), pow_up(b, p)))
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

fn max4(v: [f64; 4]) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn exp_down(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    nudge_down(x.exp(), LIBM_ULPS).max(0.0)
}

fn exp_up(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return x.exp();
    }
    let v = x.exp();
    if v == 0.0 {
        return f64::from_bits(1);
    }
    nudge_up(v, LIBM_ULPS)
}

fn ln_down(x: f64) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::MAX;
    }
    nudge_down(x.ln(), LIBM_ULPS)
}

fn ln_up(x: f64) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return x;
    }
    nudge_up(x.ln(), LIBM_ULPS)
}

fn pow_down(x: f64, p: f64) -> f64 {
    if x.is_infinite() {
        return if p > 0.0 { f64::MAX } else { 0.0 };
    }
    nudge_down(x.powf(p), LIBM_ULPS).max(0.0)
}

fn pow_up(x: f64, p: f64) -> f64 {
    if x.is_infinite() {
        return if p > 0.0 { f64::INFINITY } else { f64::from_bits(1) };
    }
    let v = x.powf(p);
    if v == 0.0 {
        return f64::from_bits(1);
    }
    nudge_up(v, LIBM_ULPS)
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = min4([mul_down(a, c), mul_down(a, d), mul_down(b, c), mul_down(b, d)]);
        let hi = max4([mul_up(a, c), mul_up(a, d), mul_up(b, c), mul_up(b, d)]);
        Interval::raw(lo, hi)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
