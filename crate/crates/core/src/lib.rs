//! Validated numerics for parametrized Wilker-type inequalities: interval
//! kernels, sign certification on open and unbounded domains, sharp exponent
//! recovery and the related bivariate means.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod interval;
pub mod kernels;
pub mod means;
pub mod report;
pub mod sharpness;

pub use certify::{
    prove_sign, verify_statement, Certificate, CertifyConfig, Claim, GuardStatus, StatementId, Status, VerifyMode,
};
pub use error::{Error, Result};
pub use interval::{Interval, Precision};
pub use kernels::{Family, KernelId, Params};
pub use report::{Format, ReportBody, RunReport, Verdict};
