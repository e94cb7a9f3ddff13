//! Extended-precision oracle (MPFR via rug) shared by the integration tests.
#![allow(dead_code)]

use rug::ops::Pow;
use rug::Float;

/// Working precision in bits.
pub const PREC: u32 = 192;

pub fn mp(x: f64) -> Float {
    Float::with_val(PREC, x)
}

fn ratio(num: Float, x: &Float) -> Float {
    num / x
}

pub fn sinc(x: &Float) -> Float {
    ratio(x.clone().sin(), x)
}

pub fn tanc(x: &Float) -> Float {
    ratio(x.clone().tan(), x)
}

pub fn sinhc(x: &Float) -> Float {
    ratio(x.clone().sinh(), x)
}

pub fn tanhc(x: &Float) -> Float {
    ratio(x.clone().tanh(), x)
}

fn weights(k: f64) -> (Float, Float) {
    let kk = mp(k);
    let den = mp(k) + 2u32;
    (Float::with_val(PREC, 2u32) / &den, kk / den)
}

/// `(2/(k+2)) s^{kp} + (k/(k+2)) t^p - 1`.
fn functional(s: Float, t: Float, k: f64, p: f64) -> Float {
    let (a, b) = weights(k);
    let kp = mp(k) * mp(p);
    a * s.pow(&kp) + b * t.pow(&mp(p)) - 1u32
}

pub fn f(x: f64, k: f64, p: f64) -> Float {
    let x = mp(x);
    functional(sinc(&x), tanc(&x), k, p)
}

pub fn u(x: f64, k: f64, p: f64) -> Float {
    let x = mp(x);
    functional(sinhc(&x), tanhc(&x), k, p)
}

/// `(P1, P2, inner)` with `P1 = sin - x cos`, `P2 = x - sin cos`,
/// `inner = -2x^2 cos + x sin + cos sin^2` (hyperbolic: evaluated at `ix`).
fn blocks(x: &Float, hyp: bool) -> (Float, Float, Float, Float, Float) {
    let (s, c) = if hyp { (x.clone().sinh(), x.clone().cosh()) } else { (x.clone().sin(), x.clone().cos()) };
    let x2 = Float::with_val(PREC, x * x);
    let p1 = Float::with_val(PREC, &s - Float::with_val(PREC, x * &c));
    let p2 = Float::with_val(PREC, x - Float::with_val(PREC, &s * &c));
    let s2 = Float::with_val(PREC, &s * &s);
    let inner = if hyp {
        Float::with_val(PREC, 2u32 * Float::with_val(PREC, &x2 * &c)) - Float::with_val(PREC, x * &s)
            - Float::with_val(PREC, &c * &s2)
    } else {
        Float::with_val(PREC, -2i32 * Float::with_val(PREC, &x2 * &c))
            + Float::with_val(PREC, x * &s)
            + Float::with_val(PREC, &c * &s2)
    };
    (p1, p2, inner, s, c)
}

/// `A = cos P1^2 P2`, `B = P2^2 P1`, `C = x sin^2 inner` (and `E`, `F`, `G`).
pub fn products(x: f64, hyp: bool) -> (Float, Float, Float) {
    let x = mp(x);
    let (p1, p2, inner, s, c) = blocks(&x, hyp);
    let a = Float::with_val(PREC, &c * Float::with_val(PREC, &p1 * &p1)) * &p2;
    let b = Float::with_val(PREC, &p2 * &p2) * &p1;
    let cc = Float::with_val(PREC, &x * Float::with_val(PREC, &s * &s)) * inner;
    (a, b, cc)
}

pub fn ratio_d(x: f64, k: f64) -> Float {
    let (a, b, c) = products(x, false);
    c / (a * mp(k) + b)
}

pub fn ratio_h(x: f64, k: f64) -> Float {
    let (e, f, g) = products(x, true);
    g / (e * mp(k) + f)
}

pub fn to_f64(v: &Float) -> f64 {
    v.to_f64()
}

use wilker_core::certify::statement::statement_links;
use wilker_core::kernels::Family;
use wilker_core::{Claim, Params, StatementId};

/// `f` or `u` depending on the family.
pub fn wilker(family: Family, x: f64, k: f64, p: f64) -> Float {
    match family {
        Family::Trig => f(x, k, p),
        Family::Hyp => u(x, k, p),
    }
}

/// `n` sweep points: half log-spaced towards the ends of the domain, half
/// uniform over the bulk.
pub fn sweep_points(family: Family, n: usize) -> Vec<f64> {
    let half = n / 2;
    let log = |i: usize, lo: f64, hi: f64| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (half - 1) as f64).exp();
    let mut xs: Vec<f64> = match family {
        Family::Trig => (0..half)
            .map(|i| if i % 2 == 0 { log(i, 1e-6, 1.0) } else { std::f64::consts::FRAC_PI_2 - log(i, 1e-9, 0.5) })
            .collect(),
        Family::Hyp => (0..half).map(|i| log(i, 1e-6, 1e3)).collect(),
    };
    let hi = match family {
        Family::Trig => std::f64::consts::FRAC_PI_2,
        Family::Hyp => 50.0,
    };
    xs.extend((0..n - half).map(|i| hi * (i as f64 + 0.5) / (n - half) as f64));
    xs
}

fn claim_sign(claim: Claim) -> i32 {
    match claim {
        Claim::Positive => 1,
        Claim::Negative => -1,
    }
}

/// Sign of the oracle value relative to the claim: `Some(true)` when the
/// claim holds, `Some(false)` when violated (zero counts as a violation).
fn oracle_holds(family: Family, x: f64, params: Params, claim: Claim) -> bool {
    let v = wilker(family, x, params.k, params.p);
    v.cmp0().map(|o| o as i32 == claim_sign(claim)).unwrap_or(false)
}

/// Points of an extended-precision sweep where a single-link Wilker
/// statement fails.
pub fn sweep_counterexamples(stmt: StatementId, params: Params, n: usize) -> Vec<f64> {
    let links = statement_links(stmt, params).unwrap();
    assert_eq!(links.len(), 1, "sweep handles single-link statements");
    let link = &links[0];
    let wp = link.form.wilker_params().expect("a Wilker form");
    let family = link.form.family();
    sweep_points(family, n).into_iter().filter(|&x| !oracle_holds(family, x, wp, link.claim)).collect()
}

/// Whether the oracle confirms that the statement fails at `x`.
pub fn confirms_witness(stmt: StatementId, params: Params, x: f64) -> bool {
    let links = statement_links(stmt, params).unwrap();
    links.iter().any(|l| match l.form.wilker_params() {
        Some(wp) => !oracle_holds(l.form.family(), x, wp, l.claim),
        None => false,
    })
}
