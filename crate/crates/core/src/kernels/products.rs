//! The products A..G built from
//!
//! ```text
//! P1 = sin x - x cos x,   P2 = x - sin x cos x,
//! inner = -2x^2 cos x + x sin x + cos x sin^2 x
//! ```
//!
//! (and their hyperbolic counterparts), the ratios `D = C/(kA+B)`,
//! `H = G/(kE+F)` and the auxiliaries g, h, v, w.
//!
//! All three building blocks vanish to high order at 0 (`x^3`, `x^3`, `x^6`),
//! so below the switch radius they are summed from their Taylor series with an
//! explicit tail bound instead of being formed by cancellation.

use serde::{Deserialize, Serialize};

use super::ratios::{check_domain, log_ratio_iv, Ratio};
use super::series::{Family, SWITCH_RADIUS};
use super::Params;
use crate::error::{domain, Result};
use crate::interval::Interval;

/// Terms summed in the building-block series.
const BLOCK_TERMS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Product {
    A,
    B,
    C,
    E,
    F,
    G,
}

impl Product {
    pub fn family(self) -> Family {
        match self {
            Product::A | Product::B | Product::C => Family::Trig,
            Product::E | Product::F | Product::G => Family::Hyp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aux {
    G,
    H,
    V,
    W,
}

impl Aux {
    pub fn family(self) -> Family {
        match self {
            Aux::G | Aux::H => Family::Trig,
            Aux::V | Aux::W => Family::Hyp,
        }
    }
}

fn factorial_iv(n: u32) -> Interval {
    (1..=n).fold(Interval::ONE, |acc, j| acc * j as f64)
}

fn inv_factorial(n: u32) -> Interval {
    factorial_iv(n).recip().expect("n! > 0")
}

/// Coefficient of `x^{2n+1}` in P1 (trig: alternating; hyp: all negative).
fn p1_coeff(family: Family, n: usize) -> Interval {
    let mag = inv_factorial(2 * n as u32 + 1) * (2 * n) as f64;
    match family {
        Family::Trig if n % 2 == 0 => -mag,
        Family::Trig => mag,
        Family::Hyp => -mag,
    }
}

/// Coefficient of `x^{2n+1}` in P2.
fn p2_coeff(family: Family, n: usize) -> Interval {
    let mag = inv_factorial(2 * n as u32 + 1) * 4f64.powi(n as i32);
    match family {
        Family::Trig if n % 2 == 0 => -mag,
        Family::Trig => mag,
        Family::Hyp => -mag,
    }
}

/// Coefficient of `x^{2n}` in inner (trig) or its hyperbolic counterpart
/// `2x^2 cosh x - x sinh x - cosh x sinh^2 x`, which is inner(ix).
fn inner_coeff(family: Family, n: usize) -> Interval {
    let n32 = n as u32;
    let nine = Interval::point(9f64.powi(n as i32)) - 1.0;
    let c = inv_factorial(2 * n32 - 2) * -2.0
        + inv_factorial(2 * n32 - 1)
        + nine * inv_factorial(2 * n32) * 0.25;
    let c = if n % 2 == 0 { -c } else { c };
    match family {
        Family::Trig => c,
        Family::Hyp if n % 2 == 1 => -c,
        Family::Hyp => c,
    }
}

/// Sum of `coeff(n) y^n` for `n` in `from..=to` on an interval `y`.
fn poly(coeff: impl Fn(usize) -> Interval, from: usize, to: usize, y: Interval) -> Interval {
    (from..=to).rev().fold(Interval::ZERO, |acc, n| acc * y + coeff(n)) * pow(y, from)
}

fn pow(x: Interval, n: usize) -> Interval {
    (0..n).fold(Interval::ONE, |acc, _| acc * x)
}

fn tail(first: Interval, ratio: f64) -> Interval {
    debug_assert!(ratio < 1.0);
    let b = Interval::point(first.mag()).div(Interval::ONE - Interval::point(ratio)).expect("ratio < 1");
    Interval::symmetric(b.hi())
}

/// The three building blocks on `x <= SWITCH_RADIUS` via series.
fn blocks_series(family: Family, x: Interval) -> (Interval, Interval, Interval) {
    let n = BLOCK_TERMS;
    let y = x.sqr();
    let xh = Interval::point(x.hi());
    let yh = xh.sqr().hi();
    let nf = n as f64;

    let p1 = x * poly(|j| p1_coeff(family, j), 1, n, y);
    let t1 = inv_factorial(2 * n as u32 + 3) * (2.0 * nf + 2.0) * pow(xh, 2 * n + 3);
    let p1 = p1 + tail(t1, yh / (2.0 * (nf + 1.0) * (2.0 * nf + 5.0)));

    let p2 = x * poly(|j| p2_coeff(family, j), 1, n, y);
    let t2 = inv_factorial(2 * n as u32 + 3) * 4f64.powi(n as i32 + 1) * pow(xh, 2 * n + 3);
    let p2 = p2 + tail(t2, 4.0 * yh / ((2.0 * nf + 4.0) * (2.0 * nf + 5.0)));

    let inner = poly(|j| inner_coeff(family, j), 3, n, y);
    let m = n as u32 + 1;
    let a_first = (inv_factorial(2 * m - 2) * 2.0
        + inv_factorial(2 * m - 1)
        + inv_factorial(2 * m) * (9f64.powi(m as i32) * 0.25))
        * pow(xh, 2 * m as usize);
    let q = (yh / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0))).max(9.0 * yh / ((2.0 * nf + 3.0) * (2.0 * nf + 4.0)));
    let inner = inner + tail(a_first, q);
    (p1, p2, inner)
}

/// The building blocks by their defining formulas.
fn blocks_direct(family: Family, x: Interval) -> (Interval, Interval, Interval) {
    match family {
        Family::Trig => {
            let (s, c) = (x.sin(), x.cos());
            let p1 = s - x * c;
            let p2 = x - s * c;
            let inner = -(x.sqr() * c * 2.0) + x * s + c * s.sqr();
            (p1, p2, inner)
        }
        Family::Hyp => {
            let (s, c) = (x.sinh(), x.cosh());
            let p1 = s - x * c;
            let p2 = x - s * c;
            let inner = x.sqr() * c * 2.0 - x * s - c * s.sqr();
            (p1, p2, inner)
        }
    }
}

fn blocks(family: Family, x: Interval) -> (Interval, Interval, Interval) {
    if x.hi() <= SWITCH_RADIUS {
        blocks_series(family, x)
    } else {
        blocks_direct(family, x)
    }
}

/// Hyperbolic blocks divided by `cosh`, `cosh^2`, `cosh^3` respectively;
/// free of overflow for large x.
fn hyp_blocks_scaled(x: Interval) -> (Interval, Interval, Interval, Interval) {
    let t = x.tanh();
    let sech = x.cosh().recip().expect("cosh >= 1");
    let p1 = t - x;
    let p2 = x * sech.sqr() - t;
    let inner = x.sqr() * sech.sqr() * 2.0 - x * t * sech.sqr() - t.sqr();
    (p1, p2, inner, t)
}

fn check_open(family: Family, x: Interval) -> Result<()> {
    check_domain(family, x.hi())?;
    if !(x.lo() > 0.0) {
        return Err(domain(format!("{x} must lie in the open domain")));
    }
    Ok(())
}

fn split_at_radius(x: Interval, f: impl Fn(Interval) -> Result<Interval>) -> Result<Interval> {
    if x.lo() < SWITCH_RADIUS && x.hi() > SWITCH_RADIUS {
        let a = f(Interval::raw(x.lo(), SWITCH_RADIUS))?;
        let b = f(Interval::raw(SWITCH_RADIUS, x.hi()))?;
        return Ok(a.hull(b));
    }
    f(x)
}

/// Interval enclosure of one of the products A..G.
pub fn abc_efg_iv(which: Product, x: Interval) -> Result<Interval> {
    let family = which.family();
    check_open(family, x)?;
    split_at_radius(x, |x| {
        let (p1, p2, inner) = blocks(family, x);
        let (c, s) = match family {
            Family::Trig => (x.cos(), x.sin()),
            Family::Hyp => (x.cosh(), x.sinh()),
        };
        Ok(match which {
            Product::A | Product::E => c * p1.sqr() * p2,
            Product::B | Product::F => p2.sqr() * p1,
            Product::C | Product::G => x * s.sqr() * inner,
        })
    })
}

/// Point value of one of the products A..G.
pub fn abc_efg(which: Product, x: f64) -> Result<f64> {
    Ok(abc_efg_iv(which, Interval::point(x))?.mid())
}

/// `D = C/(kA+B) = x sin^2 x inner / (P1 P2 (k cos x P1 + P2))`.
pub fn ratio_d_iv(x: Interval, k: f64) -> Result<Interval> {
    check_open(Family::Trig, x)?;
    split_at_radius(x, |x| {
        let (p1, p2, inner) = blocks(Family::Trig, x);
        let num = x * x.sin().sqr() * inner;
        let den = p1 * p2 * (x.cos() * p1 * k + p2);
        num.div(den)
    })
}

pub fn ratio_d(x: f64, k: f64) -> Result<f64> {
    Ok(ratio_d_iv(Interval::point(x), k)?.mid())
}

/// `H = G/(kE+F)`; evaluated in cosh-scaled form beyond x = 1.
pub fn ratio_h_iv(x: Interval, k: f64) -> Result<Interval> {
    check_open(Family::Hyp, x)?;
    let eval = |x: Interval| -> Result<Interval> {
        if x.lo() >= 1.0 {
            let (p1, p2, inner, t) = hyp_blocks_scaled(x);
            let num = x * t.sqr() * inner;
            let den = p1 * p2 * (p1 * k + p2);
            return num.div(den);
        }
        let (p1, p2, inner) = blocks(Family::Hyp, x);
        let num = x * x.sinh().sqr() * inner;
        let den = p1 * p2 * (x.cosh() * p1 * k + p2);
        num.div(den)
    };
    if x.lo() < 1.0 && x.hi() > 1.0 {
        let a = split_at_radius(Interval::raw(x.lo(), 1.0), eval)?;
        let b = eval(Interval::raw(1.0, x.hi()))?;
        return Ok(a.hull(b));
    }
    split_at_radius(x, eval)
}

pub fn ratio_h(x: f64, k: f64) -> Result<f64> {
    Ok(ratio_h_iv(Interval::point(x), k)?.mid())
}

/// The parts of `h = kpA + pB + C` (or `w = kpE + pF + G`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HDecomposition {
    pub kp_a: f64,
    pub p_b: f64,
    pub c: f64,
    /// `(kA+B)(p + C/(kA+B))`
    pub factored: f64,
}

impl HDecomposition {
    pub fn sum(&self) -> f64 {
        self.kp_a + self.p_b + self.c
    }
}

/// Enclosure of g, h, v or w.
pub fn proof_aux_iv(which: Aux, x: Interval, params: Params) -> Result<Interval> {
    let family = which.family();
    check_open(family, x)?;
    let Params { k, p } = params;
    split_at_radius(x, |x| match which {
        Aux::G => {
            // 1 - 2 (P1/P2) (sin x/x)^{(k-1)p} (cos x)^{p+1}
            let (p1, p2, _) = blocks(Family::Trig, x);
            let ls = log_ratio_iv(Ratio::Sinc, x);
            let lc = x.cos().ln()?;
            let e = (ls * ((k - 1.0) * p) + lc * (p + 1.0)).exp();
            Ok(Interval::ONE - p1.div(p2)? * e * 2.0)
        }
        Aux::V => {
            // 1 - 2 (P1/P2) (sinh x/x)^{(k-1)p} (cosh x)^{p+1}, with P1/P2
            // rewritten through the scaled blocks for large x.
            let ls = log_ratio_iv(Ratio::Sinhc, x);
            if x.lo() >= 1.0 {
                let (p1s, p2s, _, _) = hyp_blocks_scaled(x);
                let lch = ln_cosh(x);
                let e = (ls * ((k - 1.0) * p) + lch * p).exp();
                Ok(Interval::ONE - p1s.div(p2s)? * e * 2.0)
            } else {
                let (p1, p2, _) = blocks(Family::Hyp, x);
                let lch = ln_cosh(x);
                let e = (ls * ((k - 1.0) * p) + lch * (p + 1.0)).exp();
                Ok(Interval::ONE - p1.div(p2)? * e * 2.0)
            }
        }
        Aux::H => {
            let (p1, p2, inner) = blocks(Family::Trig, x);
            let (s, c) = (x.sin(), x.cos());
            let a = c * p1.sqr() * p2;
            let b = p2.sqr() * p1;
            let cc = x * s.sqr() * inner;
            Ok(a * (k * p) + b * p + cc)
        }
        Aux::W => {
            let (p1, p2, inner) = blocks(Family::Hyp, x);
            let (s, c) = (x.sinh(), x.cosh());
            let e = c * p1.sqr() * p2;
            let f = p2.sqr() * p1;
            let g = x * s.sqr() * inner;
            Ok(e * (k * p) + f * p + g)
        }
    })
}

/// `ln cosh x`, overflow-free.
fn ln_cosh(x: Interval) -> Interval {
    if x.lo() > 20.0 {
        // x + ln((1 + e^{-2x})/2)
        let q = (x * -2.0).exp();
        x + ((Interval::ONE + q) * 0.5).ln().expect("positive")
    } else {
        x.cosh().ln().expect("cosh >= 1")
    }
}

/// Point value of g, h, v or w.
pub fn proof_aux(which: Aux, x: f64, params: Params) -> Result<f64> {
    Ok(proof_aux_iv(which, Interval::point(x), params)?.mid())
}

/// The decomposition `h = kpA + pB + C` (trig) or `w = kpE + pF + G` (hyp).
pub fn h_decomposition(family: Family, x: f64, params: Params) -> Result<HDecomposition> {
    let (a, b, c) = match family {
        Family::Trig => (Product::A, Product::B, Product::C),
        Family::Hyp => (Product::E, Product::F, Product::G),
    };
    let (va, vb, vc) = (abc_efg(a, x)?, abc_efg(b, x)?, abc_efg(c, x)?);
    let Params { k, p } = params;
    let den = k * va + vb;
    Ok(HDecomposition {
        kp_a: k * p * va,
        p_b: p * vb,
        c: vc,
        factored: den * (p + vc / den),
    })
}
