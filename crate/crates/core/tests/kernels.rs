#![allow(clippy::excessive_precision)]

mod common;

use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use wilker_core::kernels::products::{abc_efg_iv, proof_aux, ratio_d_iv, ratio_h_iv, Aux, Product};
use wilker_core::kernels::{series_info, wilker_hyp_u_iv, wilker_trig_f_iv, Family};
use wilker_core::{Interval, Params};

fn params(k: f64, p: f64) -> Params {
    Params::new(k, p).unwrap()
}

fn encloses(iv: Interval, v: &Float) -> bool {
    *v >= iv.lo() && *v <= iv.hi()
}

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trig_enclosure_contains_oracle(x in 1e-4f64..(FRAC_PI_2 - 1e-3), k in 0.25f64..8.0, p in -2.0f64..2.0) {
        let iv = wilker_trig_f_iv(Interval::point(x), params(k, p)).unwrap();
        let v = common::f(x, k, p);
        prop_assert!(encloses(iv, &v), "x={x} k={k} p={p}: {iv:?} vs {v}");
    }

    #[test]
    fn hyp_enclosure_contains_oracle(x in 1e-4f64..40.0, k in prop_oneof![0.25f64..8.0, -8.0f64..-2.1], p in -2.0f64..2.0) {
        let iv = wilker_hyp_u_iv(Interval::point(x), params(k, p)).unwrap();
        let v = common::u(x, k, p);
        prop_assert!(encloses(iv, &v), "x={x} k={k} p={p}: {iv:?} vs {v}");
    }

    #[test]
    fn products_contain_oracle(x in 1e-3f64..1.5) {
        let (a, b, c) = common::products(x, false);
        let (e, f, g) = common::products(x, true);
        let pairs = [(Product::A, a), (Product::B, b), (Product::C, c), (Product::E, e), (Product::F, f), (Product::G, g)];
        for (which, v) in pairs {
            let iv = abc_efg_iv(which, Interval::point(x)).unwrap();
            prop_assert!(encloses(iv, &v), "{which:?} at {x}: {iv:?} vs {v}");
        }
    }

    #[test]
    fn ratios_contain_oracle(x in 1e-3f64..1.5, k in 1.0f64..10.0) {
        let d = ratio_d_iv(Interval::point(x), k).unwrap();
        prop_assert!(encloses(d, &common::ratio_d(x, k)));
        let h = ratio_h_iv(Interval::point(x * 4.0), k).unwrap();
        prop_assert!(encloses(h, &common::ratio_h(x * 4.0, k)));
    }
}

#[test]
fn series_region_agrees_with_direct_evaluation() {
    // Below the switch radius the kernels use the series form.
    for &x in &[1e-4, 1e-3, 0.01, 0.1, 0.2, 0.2499] {
        for &(k, p) in &[(1.0, -0.8), (2.0, 1.0), (3.0, -0.5), (-3.0, 2.0)] {
            if k > 0.0 {
                let iv = wilker_trig_f_iv(Interval::point(x), params(k, p)).unwrap();
                assert!(encloses(iv, &common::f(x, k, p)), "f({x}; {k}, {p})");
            }
            let iv = wilker_hyp_u_iv(Interval::point(x), params(k, p)).unwrap();
            assert!(encloses(iv, &common::u(x, k, p)), "u({x}; {k}, {p})");
        }
        let d = ratio_d_iv(Interval::point(x), 2.0).unwrap();
        assert!(encloses(d, &common::ratio_d(x, 2.0)));
        let h = ratio_h_iv(Interval::point(x), -3.0).unwrap();
        assert!(encloses(h, &common::ratio_h(x, -3.0)));
    }
}

#[test]
fn frozen_oracle_values() {
    let cases: [(Interval, f64); 8] = [
        (wilker_trig_f_iv(Interval::point(1.0), params(2.0, 1.0)).unwrap(), 0.13274057146423671),
        (wilker_hyp_u_iv(Interval::point(1.0), params(2.0, 1.0)).unwrap(), 0.071346000748790309),
        (wilker_hyp_u_iv(Interval::point(2.0), params(-3.0, 1.0)).unwrap(), 0.11066886038672750),
        (abc_efg_iv(Product::C, Interval::point(0.5)).unwrap(), 0.00030257628757726608858),
        (ratio_d_iv(Interval::point(0.7), 2.0).unwrap(), 0.64882254881012954953),
        (ratio_h_iv(Interval::point(1.0), -3.0).unwrap(), -1.1423664224168446),
        (ratio_h_iv(Interval::point(2.0), -3.0).unwrap(), -0.47749260236354701),
        (ratio_h_iv(Interval::point(1e-3), 1.0).unwrap(), 0.79999993142857600),
    ];
    for (iv, want) in cases {
        assert!((iv.mid() - want).abs() <= 1e-13 * want.abs().max(1e-3), "{iv:?} vs {want}");
    }
    // f vanishes to order x^4 with a tiny coefficient at this point.
    let iv = wilker_trig_f_iv(Interval::point(0.01), params(1.0, -0.8)).unwrap();
    assert!(iv.contains(-5.0795428623147e-16) || (iv.mid() + 5.0795428623147e-16).abs() < 1e-27);
}

#[test]
fn d_ratio_bounds_and_monotonicity() {
    let xs = grid(1000, 0.0, FRAC_PI_2);
    for k in [1.0, 1.5, 2.0, 3.0, 4.0, 10.0] {
        let lower = 12.0 / (5.0 * (k + 2.0));
        let mut prev = f64::NEG_INFINITY;
        for &x in &xs {
            let d = ratio_d_iv(Interval::point(x), k).unwrap();
            assert!(d.lo() > lower - 1e-10 && d.lo() > 5.0 / (12.0 * (k + 2.0)), "D({x}, {k}) = {d:?}");
            assert!(d.hi() < 1.0 + 1e-10, "D({x}, {k}) = {d:?}");
            assert!(d.mid() >= prev - 1e-10, "D decreases at {x}, k={k}");
            prev = d.mid();
        }
    }
}

#[test]
fn h_ratio_bounds_and_monotonicity() {
    let xs = grid(1000, 0.0, 20.0);
    for k in [1.0, 2.0, 4.0, 10.0, -2.5, -3.0, -4.0, -10.0] {
        let limit = 12.0 / (5.0 * (k + 2.0));
        let mut prev = if k > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        for &x in &xs {
            let h = ratio_h_iv(Interval::point(x), k).unwrap();
            if k > 0.0 {
                assert!(h.lo() > -1e-10 && h.hi() < limit + 1e-10, "H({x}, {k}) = {h:?}");
                assert!(h.mid() <= prev + 1e-10, "H increases at {x}, k={k}");
            } else {
                assert!(h.lo() > limit - 1e-10 && h.hi() < 1e-10, "H({x}, {k}) = {h:?}");
                assert!(h.mid() >= prev - 1e-10, "H decreases at {x}, k={k}");
            }
            prev = h.mid();
        }
    }
}

#[test]
fn product_and_denominator_signs() {
    for x in grid(1000, 0.0, FRAC_PI_2) {
        let x = Interval::point(x);
        assert!(abc_efg_iv(Product::A, x).unwrap().is_positive());
        assert!(abc_efg_iv(Product::B, x).unwrap().is_positive());
    }
    for x in grid(1000, 0.0, 20.0) {
        let x = Interval::point(x);
        let e = abc_efg_iv(Product::E, x).unwrap();
        let f = abc_efg_iv(Product::F, x).unwrap();
        assert!(e.is_negative() && f.is_negative() && abc_efg_iv(Product::G, x).unwrap().is_negative());
        for k in [1.0, 2.0, 4.0, 10.0] {
            assert!((e * k + f).is_negative(), "kE+F at {x:?}, k={k}");
        }
        for k in [-2.5, -3.0, -4.0, -10.0] {
            assert!((e * k + f).is_positive(), "kE+F at {x:?}, k={k}");
        }
    }
}

/// Two Richardson steps on `phi(x)/x^4` over `x = 2^-j`.
fn richardson_c4(phi: impl Fn(f64) -> Float) -> f64 {
    let g = |j: i32| {
        let x = 2f64.powi(-j);
        (phi(x) / common::mp(x).pow(4u32)).to_f64()
    };
    let r1 = |j: i32| (4.0 * g(j + 1) - g(j)) / 3.0;
    (16.0 * r1(7) - r1(6)) / 15.0
}

#[test]
fn richardson_recovers_c4() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    while done < 12 {
        let k: f64 = if rng.gen_bool(0.75) { rng.gen_range(0.5..10.0) } else { rng.gen_range(-10.0..-2.5) };
        let p: f64 = rng.gen_range(-2.0..2.0);
        // c4 nearly vanishes close to the series threshold; relative error
        // is meaningless there.
        if p.abs() < 0.05 || (p + 12.0 / (5.0 * (k + 2.0))).abs() < 0.05 {
            continue;
        }
        let c4 = series_info(Family::Hyp, params(k, p)).c4;
        let est_u = richardson_c4(|x| common::u(x, k, p));
        assert!(((est_u - c4) / c4).abs() < 1e-6, "u: k={k} p={p}: {est_u} vs {c4}");
        if k > 0.0 {
            assert_eq!(series_info(Family::Trig, params(k, p)).c4, c4);
            let est_f = richardson_c4(|x| common::f(x, k, p));
            assert!(((est_f - c4) / c4).abs() < 1e-6, "f: k={k} p={p}: {est_f} vs {c4}");
        }
        done += 1;
    }
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Tallies `(agreeing, filtered)` points for `sgn phi' == factor * sgn rhs`.
fn sign_identity(xs: &[f64], phi: impl Fn(f64) -> f64, rhs: impl Fn(f64) -> f64, factor: f64) -> (usize, usize) {
    let (mut agree, mut counted) = (0, 0);
    for &x in xs {
        let h = 1e-5 * x.max(1e-2);
        let d = (phi(x + h) - phi(x - h)) / (2.0 * h);
        let r = rhs(x);
        if d.abs() <= 1e-8 || r.abs() <= 1e-8 {
            continue;
        }
        counted += 1;
        if sgn(d) == factor * sgn(r) {
            agree += 1;
        }
    }
    (agree, counted)
}

fn check_rate(name: &str, (agree, counted): (usize, usize)) {
    assert!(counted > 0, "{name}: nothing passed the magnitude filter");
    let rate = agree as f64 / counted as f64;
    if agree < counted {
        eprintln!("{name}: {} of {counted} points disagree (noise band)", counted - agree);
    }
    assert!(rate >= 0.999, "{name}: agreement {rate}");
}

#[test]
fn derivative_sign_identities() {
    let trig_xs = grid(1000, 0.02, FRAC_PI_2 - 0.02);
    let hyp_xs = grid(1000, 0.02, 12.0);
    for &(k, p) in &[(1.0, -0.9), (1.0, 0.5), (2.0, -0.5), (2.0, 1.0), (3.0, -1.2), (4.0, 2.0)] {
        let pr = params(k, p);
        let f = |x: f64| common::f(x, k, p).to_f64();
        let g = |x: f64| proof_aux(Aux::G, x, pr).unwrap();
        let h = |x: f64| proof_aux(Aux::H, x, pr).unwrap();
        check_rate(&format!("f' k={k} p={p}"), sign_identity(&trig_xs, f, g, sgn(p)));
        check_rate(&format!("g' k={k} p={p}"), sign_identity(&trig_xs, g, h, 1.0));
    }
    for &(k, p) in &[(1.0, -0.5), (1.0, 1.0), (2.0, 0.5), (-3.0, 1.0), (-4.0, -0.5), (-3.0, 3.0)] {
        let pr = params(k, p);
        let u = |x: f64| common::u(x, k, p).to_f64();
        let v = |x: f64| proof_aux(Aux::V, x, pr).unwrap();
        let w = |x: f64| proof_aux(Aux::W, x, pr).unwrap();
        let factor = -sgn(k / (k + 2.0)) * sgn(p);
        check_rate(&format!("u' k={k} p={p}"), sign_identity(&hyp_xs, u, v, factor));
        check_rate(&format!("v' k={k} p={p}"), sign_identity(&hyp_xs, v, w, 1.0));
    }
}
