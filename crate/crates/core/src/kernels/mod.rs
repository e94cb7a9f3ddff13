//! Kernel functions: normalized ratios, the Wilker functionals `f` and `u`,
//! the products A..G, the ratios D and H, proof auxiliaries and series data.

pub mod form;
pub mod products;
pub mod ratios;
pub mod series;

use serde::{Deserialize, Serialize};

pub use form::{EndpointLimit, ExpLogForm, ExpTerm};
pub use products::{
    abc_efg, abc_efg_iv, h_decomposition, proof_aux, proof_aux_iv, ratio_d, ratio_d_iv, ratio_h, ratio_h_iv, Aux,
    HDecomposition, Product,
};
pub use ratios::{ratio_func, ratio_func_iv, Ratio};
pub use series::{Family, DEFAULT_TERMS, SWITCH_RADIUS};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// The pair `(k, p)` of the inequality family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub k: f64,
    pub p: f64,
}

impl Params {
    pub fn new(k: f64, p: f64) -> Result<Self> {
        if !k.is_finite() || !p.is_finite() {
            return Err(Error::Domain(format!("non-finite parameters k = {k}, p = {p}")));
        }
        if k == 0.0 || k == -2.0 {
            return Err(Error::DegenerateParams { k });
        }
        Ok(Self { k, p })
    }

    /// Weight `2/(k+2)` of the sine-type term.
    pub fn weight_sin(self) -> Interval {
        Interval::ratio(2.0, self.k + 2.0).expect("k != -2")
    }

    /// Weight `k/(k+2)` of the tangent-type term.
    pub fn weight_tan(self) -> Interval {
        Interval::ratio(self.k, self.k + 2.0).expect("k != -2")
    }

    /// `-12/(5(k+2))`: the boundary where the x^4 coefficient vanishes.
    pub fn series_threshold(self) -> f64 {
        -12.0 / (5.0 * (self.k + 2.0))
    }
}

/// Identifier of every kernel, with its domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelId {
    #[serde(rename = "sinc")]
    Sinc,
    #[serde(rename = "tanc")]
    Tanc,
    #[serde(rename = "sinhc")]
    Sinhc,
    #[serde(rename = "tanhc")]
    Tanhc,
    A,
    B,
    C,
    E,
    F,
    G,
    #[serde(rename = "D_ratio")]
    DRatio,
    #[serde(rename = "H_ratio")]
    HRatio,
    #[serde(rename = "f")]
    WilkerF,
    #[serde(rename = "g")]
    AuxG,
    #[serde(rename = "h")]
    AuxH,
    #[serde(rename = "u")]
    WilkerU,
    #[serde(rename = "v")]
    AuxV,
    #[serde(rename = "w")]
    AuxW,
}

impl KernelId {
    pub fn family(self) -> Family {
        use KernelId::*;
        match self {
            Sinc | Tanc | A | B | C | DRatio | WilkerF | AuxG | AuxH => Family::Trig,
            Sinhc | Tanhc | E | F | G | HRatio | WilkerU | AuxV | AuxW => Family::Hyp,
        }
    }

    /// Upper end of the open domain `(0, hi)`.
    pub fn domain_hi(self) -> f64 {
        match self.family() {
            Family::Trig => std::f64::consts::FRAC_PI_2,
            Family::Hyp => f64::INFINITY,
        }
    }
}

/// The functional `(2/(k+2)) S^{kp} + (k/(k+2)) T^p - 1` as an exp-log form.
pub fn wilker_form(family: Family, params: Params) -> ExpLogForm {
    if params.p == 0.0 {
        return ExpLogForm::zero(family).tagged(params);
    }
    ExpLogForm::new(
        family,
        Interval::point(-1.0),
        vec![
            ExpTerm::new(params.weight_sin(), params.k * params.p, 0.0),
            ExpTerm::new(params.weight_tan(), 0.0, params.p),
        ],
    )
    .with_known_zeros(2)
    .tagged(params)
}

fn check_open(family: Family, x: f64) -> Result<()> {
    ratios::check_domain(family, x)?;
    if x == 0.0 {
        return Err(Error::Domain("x = 0 is an open endpoint".into()));
    }
    Ok(())
}

/// `f(x) = (2/(k+2))(sin x/x)^{kp} + (k/(k+2))(tan x/x)^p - 1`.
pub fn wilker_trig_f(x: f64, params: Params) -> Result<f64> {
    check_open(Family::Trig, x)?;
    wilker_form(Family::Trig, params).eval(x)
}

pub fn wilker_trig_f_iv(x: Interval, params: Params) -> Result<Interval> {
    check_open(Family::Trig, x.lo())?;
    wilker_form(Family::Trig, params).enclose(x, DEFAULT_TERMS)
}

/// `u(x) = (2/(k+2))(sinh x/x)^{kp} + (k/(k+2))(tanh x/x)^p - 1`.
pub fn wilker_hyp_u(x: f64, params: Params) -> Result<f64> {
    check_open(Family::Hyp, x)?;
    wilker_form(Family::Hyp, params).eval(x)
}

pub fn wilker_hyp_u_iv(x: Interval, params: Params) -> Result<Interval> {
    check_open(Family::Hyp, x.lo())?;
    wilker_form(Family::Hyp, params).enclose(x, DEFAULT_TERMS)
}

/// Behaviour at the far end of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesInfo {
    /// `lim x^{-4} phi(x)` as `x -> 0`.
    pub c4: f64,
    /// Limit at pi/2 (trig) or infinity (hyp).
    pub endpoint: Endpoint,
}

/// Leading coefficient at the origin and the far-end limit of `f` or `u`.
pub fn series_info(family: Family, params: Params) -> SeriesInfo {
    let Params { k, p } = params;
    let c4 = k * p / 36.0 * (p + 12.0 / (5.0 * (k + 2.0)));
    let a = 2.0 / (k + 2.0);
    let endpoint = if p == 0.0 {
        Endpoint::Finite(0.0)
    } else {
        match family {
            Family::Trig if p > 0.0 => Endpoint::PlusInfinity,
            Family::Trig => Endpoint::Finite(a * (2.0 / std::f64::consts::PI).powf(k * p) - 1.0),
            Family::Hyp if k > 0.0 => Endpoint::PlusInfinity,
            // k < -2: the sinh term has negative weight.
            Family::Hyp if p > 0.0 => Endpoint::Finite(-1.0),
            Family::Hyp => Endpoint::MinusInfinity,
        }
    };
    SeriesInfo { c4, endpoint }
}
