mod common;

use proptest::prelude::*;
use wilker_core::certify::statement::{statement_links, verify_statement_window};
use wilker_core::kernels::{wilker_form, Family};
use wilker_core::{
    prove_sign, verify_statement, Certificate, CertifyConfig, Claim, Error, GuardStatus, KernelId, Params, StatementId,
    Status, VerifyMode,
};

fn params(k: f64, p: f64) -> Params {
    Params::new(k, p).unwrap()
}

fn certified(stmt: StatementId, k: f64, p: f64) -> Certificate {
    verify_statement(stmt, params(k, p), VerifyMode::Certified, &CertifyConfig::default()).unwrap()
}

#[test]
fn verification_matrix() {
    use StatementId::*;
    let proved = [(Main1, 2.0, 0.5), (Main1, 2.0, 2.0), (Main1, 2.0, -0.8), (Main2, 1.0, -0.7), (Main3, 2.0, 1.0), (Main3, 2.0, -0.7), (Main4, -3.0, -1.0), (Main4, -3.0, 3.0)];
    for (stmt, k, p) in proved {
        let c = certified(stmt, k, p);
        assert_eq!(c.status, Status::Proved, "{stmt} ({k}, {p}): {c:?}");
        assert!(c.min_margin > 0.0 && c.witness.is_none());
        assert!(c.guards.origin.status.is_pass() && c.guards.far_end.status.is_pass());
    }
    for (stmt, k, p) in [(Main1, 1.0, -0.85), (Main2, 2.0, -0.7), (Main3, 1.0, -0.7)] {
        let c = certified(stmt, k, p);
        assert_eq!(c.status, Status::Falsified, "{stmt} ({k}, {p})");
        let x = c.witness.expect("falsified certificates carry a witness");
        assert!(common::confirms_witness(stmt, params(k, p), x), "{stmt} witness {x}");
    }
}

#[test]
fn sampled_mode_agrees_on_the_matrix() {
    use StatementId::*;
    let cfg = CertifyConfig::default();
    for (stmt, k, p, want) in [(Main1, 2.0, 0.5, Status::Proved), (Main3, 2.0, -0.7, Status::Proved), (Main1, 1.0, -0.85, Status::Falsified)] {
        let c = verify_statement(stmt, params(k, p), VerifyMode::Sampled, &cfg).unwrap();
        assert_eq!(c.status, want, "{stmt} ({k}, {p})");
        assert_eq!(c.mode, VerifyMode::Sampled);
    }
}

#[test]
fn classic_inequalities() {
    use StatementId::*;
    for stmt in [SanityW, SanityWu1, SanityH, SanityNueman, PtK1, PtK2, PhK1, PhK2] {
        let c = certified(stmt, 1.0, 1.0);
        assert_eq!(c.status, Status::Proved, "{stmt}: {c:?}");
    }
}

#[test]
fn threshold_statements_at_the_sharp_value() {
    // On the trig threshold the pi/2 limit vanishes (up to the rounding of
    // theta); the claim still holds on the open interval.
    let theta = -wilker_core::sharpness::trig_threshold(2.0);
    let c = certified(StatementId::Main1, 2.0, theta);
    assert_eq!(c.status, Status::Proved, "{c:?}");
    assert!(c.guards.far_end.status.is_pass());
}

#[test]
fn chain_and_corollary_links() {
    use StatementId::*;
    let c = certified(ChainYang3t, 2.0, 1.0);
    assert_eq!(c.status, Status::Proved);
    assert_eq!(c.links.len(), statement_links(ChainYang3t, params(2.0, 1.0)).unwrap().len());
    assert!(c.links.iter().all(|l| l.certificate.status == Status::Proved));
    assert_eq!(certified(CorZhwt, 2.0, 0.757).status, Status::Falsified);
    assert_eq!(certified(CorZhwt, 2.0, 0.777).status, Status::Proved);
    assert_eq!(certified(CorZhwh, 2.0, 0.59).status, Status::Falsified);
    assert_eq!(certified(CorZhwh, 2.0, 0.61).status, Status::Proved);
}

#[test]
fn domain_errors() {
    assert!(matches!(Params::new(0.0, 1.0), Err(Error::DegenerateParams { .. })));
    assert!(Params::new(-2.0, 1.0).is_err());
    let cfg = CertifyConfig::default();
    let r = verify_statement(StatementId::Main4, params(1.0, 1.0), VerifyMode::Certified, &cfg);
    assert!(matches!(r, Err(Error::ParamsOutOfStatementRange(_))), "{r:?}");
}

#[test]
fn window_certificates_skip_the_guards() {
    let cfg = CertifyConfig::default();
    let c = verify_statement_window(StatementId::Main1, params(1.0, -0.85), (0.1, 1.0), &cfg).unwrap();
    assert_eq!(c.window, (0.1, 1.0));
    assert_eq!(c.guards.origin.status, GuardStatus::Unused);
    let direct = prove_sign(KernelId::WilkerF, params(1.0, -0.85), Claim::Positive, (0.1, 1.0), &cfg).unwrap();
    assert_eq!(c.status, direct.status);
}

#[test]
fn certificates_survive_json() {
    let c = certified(StatementId::Main1, 1.0, -0.85);
    let back: Certificate = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// A Proved verdict is never contradicted by the oracle and a witness is
    /// always genuine.
    #[test]
    fn verdicts_are_sound(k in 1.0f64..6.0, p in -1.5f64..1.5) {
        let pr = params(k, p);
        let c = certified(StatementId::Main1, k, p);
        match c.status {
            Status::Proved => prop_assert!(common::sweep_counterexamples(StatementId::Main1, pr, 2000).is_empty()),
            Status::Falsified => prop_assert!(common::confirms_witness(StatementId::Main1, pr, c.witness.unwrap())),
            Status::Inconclusive => {}
        }
        let form = wilker_form(Family::Trig, pr);
        prop_assert_eq!(form.wilker_params(), Some(pr));
    }
}
