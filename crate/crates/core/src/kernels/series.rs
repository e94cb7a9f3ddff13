//! Power series in `y = x^2` for the logarithms of the normalized ratios and
//! for exponentials of their linear combinations.
//!
//! With `B_{2n}` the Bernoulli numbers,
//!
//! ```text
//! ln(sin x / x) = -sum 2^{2n-1} |B_{2n}| / (n (2n)!) y^n
//! ln(tan x / x) =  sum 2^{2n-1} (2^{2n} - 2) |B_{2n}| / (n (2n)!) y^n
//! ```
//!
//! and the hyperbolic versions flip the sign of every odd-`n` coefficient.
//! Both coefficient sequences are bounded by `zeta(2) (4/pi^2)^n / n`, which
//! gives the geometric tail majorants used below.

use crate::interval::Interval;

/// Number of `y`-coefficients tabulated (exact Bernoulli data up to `B_20`).
pub const MAX_TERMS: usize = 10;

/// Default truncation (in `y`) for certified enclosures: order 12 in `x`.
pub const DEFAULT_TERMS: usize = 6;

/// Below this radius kernels switch to series evaluation.
pub const SWITCH_RADIUS: f64 = 0.25;

// |B_{2n}| = num/den for n = 1..=10.
const BERNOULLI: [(i128, i128); MAX_TERMS] = [
    (1, 6),
    (1, 30),
    (1, 42),
    (1, 30),
    (5, 66),
    (691, 2730),
    (7, 6),
    (3617, 510),
    (43867, 798),
    (174611, 330),
];

/// Upper bound on zeta(2) = pi^2/6.
pub(crate) fn zeta2_up() -> f64 {
    (Interval::pi().sqr() * Interval::ONE.div(Interval::point(6.0)).expect("nonzero")).hi()
}

/// Upper bound on 4/pi^2.
pub(crate) fn rho_t_up() -> f64 {
    Interval::point(4.0).div(Interval::pi().sqr()).expect("nonzero").hi()
}

/// Upper bound on 1/pi^2.
pub(crate) fn rho_s_up() -> f64 {
    Interval::ONE.div(Interval::pi().sqr()).expect("nonzero").hi()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Trig,
    Hyp,
}

fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// Enclosure of an integer too large to be exact in binary64.
fn iv_int(v: i128) -> Interval {
    let f = v as f64;
    if f as i128 == v {
        Interval::point(f)
    } else {
        Interval::raw(f.next_down(), f.next_up())
    }
}

fn iv_rational(num: i128, den: i128) -> Interval {
    iv_int(num).div(iv_int(den)).expect("nonzero denominator")
}

/// `[y^n] ln(sin x / x)` (trig) or `ln(sinh x / x)` (hyp), `n = 1..=MAX_TERMS`.
pub fn log_sinc_coeff(family: Family, n: usize) -> Interval {
    assert!((1..=MAX_TERMS).contains(&n));
    let (bn, bd) = BERNOULLI[n - 1];
    let num = (1i128 << (2 * n - 1)) * bn;
    let den = n as i128 * factorial(2 * n as u32) * bd;
    let c = -iv_rational(num, den);
    match family {
        Family::Trig => c,
        Family::Hyp if n % 2 == 1 => -c,
        Family::Hyp => c,
    }
}

/// `[y^n] ln(tan x / x)` (trig) or `ln(tanh x / x)` (hyp).
pub fn log_tanc_coeff(family: Family, n: usize) -> Interval {
    assert!((1..=MAX_TERMS).contains(&n));
    let (bn, bd) = BERNOULLI[n - 1];
    let num = (1i128 << (2 * n - 1)) * ((1i128 << (2 * n)) - 2) * bn;
    let den = n as i128 * factorial(2 * n as u32) * bd;
    let c = iv_rational(num, den);
    match family {
        Family::Trig => c,
        Family::Hyp if n % 2 == 1 => -c,
        Family::Hyp => c,
    }
}

/// Coefficients `e_0..=e_n` of `exp(sum_{j>=1} lambda_j y^j)`, via
/// `e_n = (1/n) sum_{j=1}^n j lambda_j e_{n-j}`.
pub fn exp_series(lambda: &[Interval], n: usize) -> Vec<Interval> {
    let mut e = Vec::with_capacity(n + 1);
    e.push(Interval::ONE);
    for m in 1..=n {
        let mut acc = Interval::ZERO;
        for j in 1..=m.min(lambda.len()) {
            acc = acc + lambda[j - 1] * (j as f64) * e[m - j];
        }
        e.push(acc.div(Interval::point(m as f64)).expect("m > 0"));
    }
    e
}

/// `y`-coefficients `1..=n` of `alpha ln(sinc) + beta ln(tanc)`.
pub fn combined_log_coeffs(family: Family, alpha: f64, beta: f64, n: usize) -> Vec<Interval> {
    (1..=n)
        .map(|j| log_sinc_coeff(family, j) * alpha + log_tanc_coeff(family, j) * beta)
        .collect()
}

/// Bound for `sum_{n>terms} |[y^n] exp(alpha ln sinc + beta ln tanc)| y^n`,
/// valid for `0 <= y <= y_hi`. Returns `+inf` when the majorant diverges.
///
/// The coefficients of the exponent are bounded by `A rho^n / n` with
/// `A = zeta(2)(|alpha| + |beta|)` and `rho = 4/pi^2`, so those of the
/// exponential are bounded by the coefficients of `(1 - rho y)^{-A}`,
/// namely `(A)_n rho^n / n!`.
pub fn exp_tail_bound(alpha: f64, beta: f64, terms: usize, y_hi: f64) -> f64 {
    let a = Interval::point(zeta2_up()) * (alpha.abs() + beta.abs());
    let a_hi = a.hi();
    if a_hi == 0.0 {
        return 0.0;
    }
    let z = Interval::point(rho_t_up()) * y_hi;
    // (A)_{N+1} / (N+1)!
    let mut c = Interval::ONE;
    for j in 0..=terms {
        c = c * (Interval::point(a_hi) + j as f64)
            .div(Interval::point((j + 1) as f64))
            .expect("positive");
    }
    let growth = (Interval::point(a_hi) + (terms + 1) as f64)
        .div(Interval::point((terms + 2) as f64))
        .expect("positive")
        .hi()
        .max(1.0);
    let r = (z * growth).hi();
    if !(r < 1.0) {
        return f64::INFINITY;
    }
    let zp = pow_up(z.hi(), terms as i32 + 1);
    let denom = Interval::ONE - Interval::point(r);
    (c * zp).div(denom).expect("r < 1").hi()
}

/// Upward-rounded `x^n` for `x >= 0`.
pub(crate) fn pow_up(x: f64, n: i32) -> f64 {
    let mut acc = Interval::ONE;
    for _ in 0..n {
        acc = acc * Interval::point(x);
    }
    acc.hi()
}

/// Enclosure of `ln(sinc)` or `ln(tanc)` at a point `x <= SWITCH_RADIUS`
/// using `MAX_TERMS` coefficients and the tail bound
/// `zeta(2) z^{N+1} / ((N+1)(1-z))`, `z = rho x^2`.
pub fn log_ratio_series(family: Family, tanc: bool, x: f64) -> Interval {
    let y = Interval::point(x).sqr();
    let mut acc = Interval::ZERO;
    for n in (1..=MAX_TERMS).rev() {
        let c = if tanc { log_tanc_coeff(family, n) } else { log_sinc_coeff(family, n) };
        acc = acc * y + c;
    }
    acc = acc * y;
    let rho = if tanc { rho_t_up() } else { rho_s_up() };
    let z = (Interval::point(rho) * y).hi();
    debug_assert!(z < 1.0);
    let tail = (Interval::point(zeta2_up()) * pow_up(z, MAX_TERMS as i32 + 1))
        .div(Interval::point((MAX_TERMS + 1) as f64) * (Interval::ONE - Interval::point(z)))
        .expect("z < 1")
        .hi();
    acc + Interval::symmetric(tail)
}

/// Horner evaluation of `sum c_i y^i` for an interval `y >= 0`.
pub fn horner(coeffs: &[Interval], y: Interval) -> Interval {
    coeffs.iter().rev().fold(Interval::ZERO, |acc, &c| acc * y + c)
}

/// Midpoint Horner for best-effort point evaluation.
pub fn horner_f64(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}
