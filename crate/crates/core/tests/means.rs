mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use wilker_core::means::{bound_check, mean_eval, sharp_exponents, substitution_check, BoundForm, MeanKind, Side, Substitution};

/// Random `a > b > 0` with log ratio spread over many decades.
fn random_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let b: f64 = 10f64.powf(rng.gen_range(-3.0..3.0));
    let ratio = 1.0 + 10f64.powf(rng.gen_range(-8.0..4.0));
    (b * ratio, b)
}

#[test]
fn substitution_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let (a, b) = random_pair(&mut rng);
        for s in [Substitution::Arcsin, Substitution::Arctan, Substitution::LnSqrt, Substitution::Arcsinh] {
            let r = substitution_check(s, a, b).unwrap();
            assert!(r <= 1e-12, "{s:?} at ({a}, {b}): residual {r}");
        }
    }
}

#[test]
fn ordering_chain() {
    use MeanKind::*;
    let chain = [Geometric, Logarithmic, SeiffertP, Arithmetic, NeumanSandor, SeiffertT, Quadratic];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (a, b) = random_pair(&mut rng);
        let vals: Vec<f64> = chain.iter().map(|&m| mean_eval(m, a, b).unwrap()).collect();
        for (i, w) in vals.windows(2).enumerate() {
            // Equal up to rounding when a and b nearly coincide.
            assert!(w[0] <= w[1] * (1.0 + 4.0 * f64::EPSILON), "{:?} > {:?} at ({a}, {b})", chain[i], chain[i + 1]);
        }
    }
}

fn mp_mean(kind: MeanKind, a: f64, b: f64) -> Float {
    let (a, b) = (common::mp(a), common::mp(b));
    let d = Float::with_val(common::PREC, &a - &b);
    let s = Float::with_val(common::PREC, &a + &b);
    let z = Float::with_val(common::PREC, &d / &s);
    let two = common::mp(2.0);
    match kind {
        MeanKind::Logarithmic => d / (a.ln() - b.ln()),
        MeanKind::SeiffertP => d / (two * z.asin()),
        MeanKind::SeiffertT => d / (two * z.atan()),
        MeanKind::NeumanSandor => d / (two * z.asinh()),
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn transcendental_means_match_oracle(b in 1e-3f64..1e3, lr in -10.0f64..3.0) {
        let a = b * (1.0 + 10f64.powf(lr));
        for kind in [MeanKind::Logarithmic, MeanKind::SeiffertP, MeanKind::SeiffertT, MeanKind::NeumanSandor] {
            let got = mean_eval(kind, a, b).unwrap();
            let want = mp_mean(kind, a, b).to_f64();
            prop_assert!(((got - want) / want).abs() < 1e-14, "{kind:?} ({a}, {b}): {got} vs {want}");
        }
    }

    #[test]
    fn symmetric_and_homogeneous(a in 1e-3f64..1e3, b in 1e-3f64..1e3, t in 1e-2f64..1e2) {
        use MeanKind::*;
        for kind in [Arithmetic, Geometric, Quadratic, Logarithmic, SeiffertP, SeiffertT, NeumanSandor, PowerMean { r: 1.5, w: 0.5 }] {
            let m = mean_eval(kind, a, b).unwrap();
            prop_assert!((m - mean_eval(kind, b, a).unwrap()).abs() <= 1e-13 * m);
            prop_assert!((t * m - mean_eval(kind, t * a, t * b).unwrap()).abs() <= 1e-13 * t * m);
            prop_assert!(m >= a.min(b) * (1.0 - 1e-15) && m <= a.max(b) * (1.0 + 1e-15));
        }
    }

    #[test]
    fn power_mean_increases_with_r(a in 1e-3f64..1e3, b in 1e-3f64..1e3, w in 0.05f64..0.95, r in -4.0f64..4.0) {
        let lo = mean_eval(MeanKind::PowerMean { r, w }, a, b).unwrap();
        let hi = mean_eval(MeanKind::PowerMean { r: r + 0.25, w }, a, b).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-14));
    }
}

#[test]
fn power_mean_special_cases() {
    let (a, b) = (9.0, 4.0);
    let m = |r| mean_eval(MeanKind::PowerMean { r, w: 0.5 }, a, b).unwrap();
    assert!((m(1.0) - 6.5).abs() < 1e-14);
    assert!((m(0.0) - 6.0).abs() < 1e-14);
    assert!((m(-1.0) - 72.0 / 13.0).abs() < 1e-14);
    assert!((m(2.0) - mean_eval(MeanKind::Quadratic, a, b).unwrap()).abs() < 1e-14);
}

#[test]
fn sharp_exponents_hold_and_shifted_ones_fail() {
    for which in [BoundForm::Yang1t, BoundForm::Yang2t, BoundForm::Yang1h, BoundForm::Yang2h] {
        let (alpha, beta) = sharp_exponents(which);
        assert!(bound_check(which, alpha, Side::Lower, 10_000).unwrap().holds, "{which} lower at {alpha}");
        assert!(bound_check(which, beta, Side::Upper, 10_000).unwrap().holds, "{which} upper at {beta}");
        assert!(!bound_check(which, alpha + 0.01, Side::Lower, 10_000).unwrap().holds, "{which} lower at {alpha}+0.01");
        assert!(!bound_check(which, beta - 0.01, Side::Upper, 10_000).unwrap().holds, "{which} upper at {beta}-0.01");
    }
}

#[test]
fn mean_forms_agree_with_their_x_forms() {
    // The arcsin substitution covers all of (0, pi/2), so the mean form must
    // give the same verdicts as the x form.
    let (mean, x) = (BoundForm::PAg, BoundForm::Yang1t);
    let (alpha, beta) = sharp_exponents(x);
    for (e, side) in [(alpha, Side::Lower), (beta, Side::Upper), (alpha + 0.01, Side::Lower), (beta - 0.01, Side::Upper)] {
        let vm = bound_check(mean, e, side, 10_000).unwrap();
        let vx = bound_check(x, e, side, 10_000).unwrap();
        assert_eq!(vm.holds, vx.holds, "{mean} vs {x} at {e} {side:?}");
    }
}
