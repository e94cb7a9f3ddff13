//! The normalized ratios sin x/x, tan x/x, sinh x/x, tanh x/x, their
//! logarithms and the derivatives of those logarithms.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::series::{log_ratio_series, Family, SWITCH_RADIUS};
use crate::error::{domain, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ratio {
    Sinc,
    Tanc,
    Sinhc,
    Tanhc,
}

impl Ratio {
    pub fn family(self) -> Family {
        match self {
            Ratio::Sinc | Ratio::Tanc => Family::Trig,
            Ratio::Sinhc | Ratio::Tanhc => Family::Hyp,
        }
    }

    fn is_tan(self) -> bool {
        matches!(self, Ratio::Tanc | Ratio::Tanhc)
    }

    pub(crate) fn of(family: Family, tan: bool) -> Ratio {
        match (family, tan) {
            (Family::Trig, false) => Ratio::Sinc,
            (Family::Trig, true) => Ratio::Tanc,
            (Family::Hyp, false) => Ratio::Sinhc,
            (Family::Hyp, true) => Ratio::Tanhc,
        }
    }

    /// True when the ratio increases with x on its domain.
    fn increasing(self) -> bool {
        matches!(self, Ratio::Tanc | Ratio::Sinhc)
    }
}

pub(crate) fn check_domain(family: Family, x: f64) -> Result<()> {
    let ok = match family {
        Family::Trig => (0.0..FRAC_PI_2).contains(&x),
        Family::Hyp => (0.0..f64::INFINITY).contains(&x),
    };
    if ok {
        Ok(())
    } else {
        let dom = match family {
            Family::Trig => "[0, pi/2)",
            Family::Hyp => "[0, inf)",
        };
        Err(domain(format!("x = {x} outside {dom}")))
    }
}

/// Point value of a ratio; 1 at the removable singularity.
pub fn ratio_func(which: Ratio, x: f64) -> Result<f64> {
    check_domain(which.family(), x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(match which {
        Ratio::Sinc => x.sin() / x,
        Ratio::Tanc => x.tan() / x,
        Ratio::Sinhc => x.sinh() / x,
        Ratio::Tanhc => x.tanh() / x,
    })
}

/// Enclosure of a ratio at a single point.
fn ratio_point_enc(which: Ratio, x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ONE;
    }
    if x <= SWITCH_RADIUS {
        return log_ratio_series(which.family(), which.is_tan(), x).exp();
    }
    let xi = Interval::point(x);
    let num = match which {
        Ratio::Sinc => xi.sin(),
        Ratio::Tanc => xi.tan().expect("domain checked"),
        Ratio::Sinhc => xi.sinh(),
        Ratio::Tanhc => xi.tanh(),
    };
    num.div(xi).expect("x > 0")
}

/// Enclosure of a ratio over an interval, using its monotonicity.
pub fn ratio_func_iv(which: Ratio, x: Interval) -> Result<Interval> {
    check_domain(which.family(), x.lo())?;
    check_domain(which.family(), x.hi())?;
    let a = ratio_point_enc(which, x.lo());
    let b = ratio_point_enc(which, x.hi());
    Ok(if which.increasing() {
        Interval::raw(a.lo(), b.hi())
    } else {
        Interval::raw(b.lo(), a.hi())
    })
}

/// Enclosure of `ln(ratio)` at a point `x > 0`.
pub(crate) fn log_ratio_enc(which: Ratio, x: f64) -> Interval {
    debug_assert!(x > 0.0);
    if x <= SWITCH_RADIUS {
        return log_ratio_series(which.family(), which.is_tan(), x);
    }
    let xi = Interval::point(x);
    match which {
        Ratio::Sinc => ratio_point_enc(which, x).ln().expect("sinc > 0 on (0, pi/2)"),
        Ratio::Tanc => ratio_point_enc(which, x).ln().expect("tanc > 0"),
        Ratio::Sinhc if x <= 700.0 => ratio_point_enc(which, x).ln().expect("sinhc > 0"),
        Ratio::Sinhc => {
            // ln(sinh x / x) = x - ln(2x) + ln(1 - e^{-2x}), last term below
            // the subnormal range here.
            let two_x = xi * 2.0;
            xi - two_x.ln().expect("x > 0") + Interval::raw(-f64::from_bits(1), 0.0)
        }
        Ratio::Tanhc if x <= 20.0 => ratio_point_enc(which, x).ln().expect("tanhc > 0"),
        Ratio::Tanhc => {
            // ln tanh x lies in [-4 e^{-2x}, 0] once e^{-2x} <= 1/2.
            let q = Interval::point(-2.0 * x).exp().hi() * 4.0;
            -xi.ln().expect("x > 0") + Interval::raw(-q.next_up(), 0.0)
        }
    }
}

/// Enclosure of `ln(ratio)` over an interval with `x.lo > 0`.
pub(crate) fn log_ratio_iv(which: Ratio, x: Interval) -> Interval {
    let a = log_ratio_enc(which, x.lo());
    if x.is_point() {
        return a;
    }
    let b = log_ratio_enc(which, x.hi());
    if which.increasing() {
        Interval::raw(a.lo(), b.hi())
    } else {
        Interval::raw(b.lo(), a.hi())
    }
}

/// Enclosure of `d/dx ln(ratio)` over an interval with `x.lo > 0`.
/// Returns `None` when the enclosure degenerates (division by an interval
/// touching zero).
pub(crate) fn log_ratio_deriv_iv(which: Ratio, x: Interval) -> Option<Interval> {
    let inv_x = x.recip().ok()?;
    let v = match which {
        // cot x - 1/x
        Ratio::Sinc => x.cos().div(x.sin()).ok()? - inv_x,
        // 1/(sin x cos x) - 1/x = 2/sin 2x - 1/x
        Ratio::Tanc => Interval::point(2.0).div((x * 2.0).sin()).ok()? - inv_x,
        // coth x - 1/x
        Ratio::Sinhc => x.tanh().recip().ok()? - inv_x,
        // 2/sinh 2x - 1/x
        Ratio::Tanhc => Interval::point(2.0).div((x * 2.0).sinh()).ok()? - inv_x,
    };
    v.is_bounded().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removable_singularity() {
        for r in [Ratio::Sinc, Ratio::Tanc, Ratio::Sinhc, Ratio::Tanhc] {
            assert_eq!(ratio_func(r, 0.0).unwrap(), 1.0);
            assert_eq!(ratio_func_iv(r, Interval::ZERO).unwrap(), Interval::ONE);
        }
    }

    #[test]
    fn tanhc_far_out() {
        let v = ratio_func(Ratio::Tanhc, 50.0).unwrap();
        assert!(v > 0.0 && v < 0.021);
        let e = ratio_func_iv(Ratio::Tanhc, Interval::point(50.0)).unwrap();
        assert!(e.lo() > 0.0 && e.hi() < 0.021);
    }

    #[test]
    fn sinc_of_one() {
        let v = ratio_func(Ratio::Sinc, 1.0).unwrap();
        assert!((v - 0.841_470_984_807_896_5).abs() < 1e-15);
        let e = ratio_func_iv(Ratio::Sinc, Interval::point(1.0)).unwrap();
        assert!(e.contains(0.841_470_984_807_896_5));
    }

    #[test]
    fn domain_errors() {
        assert!(ratio_func(Ratio::Sinc, -0.1).is_err());
        assert!(ratio_func(Ratio::Tanc, 1.6).is_err());
        assert!(ratio_func(Ratio::Sinhc, f64::NAN).is_err());
    }

    #[test]
    fn sinhc_overflow_is_unbounded_above() {
        let e = ratio_func_iv(Ratio::Sinhc, Interval::new(10.0, 900.0).unwrap()).unwrap();
        assert!(e.hi().is_infinite() && e.lo() > 1.0);
    }

    #[test]
    fn log_enclosures_agree_across_branches() {
        for &(r, x) in &[
            (Ratio::Sinhc, 700.0),
            (Ratio::Sinhc, 650.0),
            (Ratio::Tanhc, 20.0),
            (Ratio::Tanhc, 25.0),
            (Ratio::Sinc, 0.25),
            (Ratio::Tanc, 1.5),
        ] {
            let e = log_ratio_enc(r, x);
            let v = match r {
                Ratio::Sinhc if x > 700.0 => x - (2.0 * x).ln(),
                _ => ratio_func(r, x).unwrap().ln(),
            };
            assert!((e.mid() - v).abs() <= 1e-13 * v.abs().max(1.0), "{r:?} {x}");
        }
        let far = log_ratio_enc(Ratio::Sinhc, 1e6);
        assert!((far.mid() - (1e6 - (2e6f64).ln())).abs() < 1e-9);
    }

    #[test]
    fn log_derivatives_match_differences() {
        for r in [Ratio::Sinc, Ratio::Tanc, Ratio::Sinhc, Ratio::Tanhc] {
            for &x in &[0.3, 0.9, 1.4] {
                let h = 1e-6;
                let fd = ((ratio_func(r, x + h).unwrap()).ln() - (ratio_func(r, x - h).unwrap()).ln()) / (2.0 * h);
                let d = log_ratio_deriv_iv(r, Interval::new(x - h, x + h).unwrap()).unwrap();
                assert!(d.contains(fd) || (d.mid() - fd).abs() < 1e-8, "{r:?} {x}");
            }
        }
    }
}
