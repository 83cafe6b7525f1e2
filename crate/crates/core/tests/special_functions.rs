mod support;

use dyson_minor::quadrature::gauss_hermite;
use dyson_minor::special_functions::*;
use dyson_minor::Error;
use proptest::prelude::*;
use std::f64::consts::PI;
use support::identities::{self, deviation};
use support::{rel_close, star_hermite_exact};

#[test]
fn recurrence_matches_rodrigues_oracle() {
    let basis = HermiteBasis::star(30);
    let mut worst = 0.0f64;
    for n in 0..=30usize {
        for num in -24..=24i64 {
            let exact = star_hermite_exact(n, num, 4);
            let got = hermite_eval(&basis, n as i64, num as f64 / 4.0).unwrap();
            if exact != 0.0 {
                worst = worst.max(((got - exact) / exact).abs());
            } else {
                assert!(got.abs() < 1e-15);
            }
        }
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

#[test]
fn rodrigues_low_degrees() {
    // H_2 = 4x² - 2, H_3 = 8x³ - 12x
    let c2 = support::rodrigues_coefficients(2);
    assert_eq!(
        c2.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        ["-2", "0", "4"]
    );
    let c3 = support::rodrigues_coefficients(3);
    assert_eq!(
        c3.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        ["0", "-12", "0", "8"]
    );
}

#[test]
fn orthonormal_under_gauss_hermite() {
    let rule = gauss_hermite(64);
    let basis = HermiteBasis::star(30);
    for n in 0..=30 {
        for m in 0..=30 {
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &wt)| {
                    wt * hermite_eval(&basis, n, x).unwrap() * hermite_eval(&basis, m, x).unwrap()
                })
                .sum();
            let expect = if n == m { 1.0 } else { 0.0 };
            assert!((s - expect).abs() <= 1e-10, "n={n} m={m}: {s}");
        }
    }
}

#[test]
fn hermite_examples() {
    let star = HermiteBasis::star(5);
    assert!((hermite_eval(&star, 0, 1.7).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
    let h2 = hermite_eval(&star, 2, 0.0).unwrap();
    assert!((h2 + 2.0 / (8.0 * PI.sqrt()).sqrt()).abs() < 1e-15);
    assert!((h2 + 0.5311260).abs() < 1e-7);
    assert_eq!(hermite_eval(&star, -3, 0.4).unwrap(), 0.0);
    let t4 = HermiteBasis::time_indexed(5, 4.0).unwrap();
    assert!(
        (hermite_eval(&t4, 1, 2.0).unwrap() - hermite_eval(&star, 1, 1.0).unwrap()).abs() < 1e-15
    );
    assert!(matches!(
        hermite_eval(&star, 6, 0.0),
        Err(Error::DegreeOverflow {
            degree: 6,
            max_degree: 5
        })
    ));
    assert!(HermiteBasis::time_indexed(3, 0.0).is_err());
}

#[test]
fn leading_coefficient_matches_rodrigues() {
    for n in 0..=12usize {
        // H_n has leading coefficient 2^n
        let expect = 2f64.powi(n as i32)
            / (2f64.powi(n as i32) * (1..=n).map(|k| k as f64).product::<f64>() * PI.sqrt()).sqrt();
        let got = HermiteBasis::star(n).leading_coefficient(n);
        assert!(rel_close(got, expect, 1e-13), "n={n}");
    }
    // time-indexed: h^{(t)}_n(x) = h*_n(x/√t) scales the coefficient by t^{-n/2}
    let b = HermiteBasis::time_indexed(4, 2.5).unwrap();
    let expect = HermiteBasis::star(4).leading_coefficient(4) * 2.5f64.powi(-2);
    assert!(rel_close(b.leading_coefficient(4), expect, 1e-13));
}

#[test]
fn heaviside_examples() {
    assert_eq!(heaviside_power(1, -0.5).unwrap(), 0.0);
    assert!((heaviside_power(3, 2.0).unwrap() - 2.0).abs() < 1e-15);
    assert!((heaviside_power(2, 3.0).unwrap() - 3.0).abs() < 1e-15);
    assert_eq!(heaviside_power(1, 0.0).unwrap(), 1.0);
    assert!(heaviside_power(0, 1.0).is_err());
}

#[test]
fn transition_examples() {
    let bm = transition_density(TransitionKind::BM, 1.0, 0.0, 0.0).unwrap();
    assert!((bm - 1.0 / PI.sqrt()).abs() < 1e-15);
    for x in [-3.0, -1.0, 0.0, 2.0, 3.0] {
        for y in [-1.5, 0.0, 0.4] {
            let ou = transition_density(TransitionKind::OU, 50.0, x, y).unwrap();
            assert!((ou - (-y * y).exp() / PI.sqrt()).abs() < 1e-12);
        }
    }
    assert!(transition_density(TransitionKind::OU, 0.0, 0.0, 0.0).is_err());
    assert!(transition_density(TransitionKind::BM, -1.0, 0.0, 0.0).is_err());
    for fam in identities::FAMILIES {
        let d = deviation(identities::time_semigroup(fam, 0.3, 0.7, 0.5, -0.4));
        assert!(d < 1e-9, "{fam:?}: {d:e}");
    }
}

#[test]
fn densities_integrate_to_one() {
    for kind in [TransitionKind::OU, TransitionKind::BM] {
        let total = dyson_minor::quadrature::integrate(
            |y| transition_density(kind, 0.4, 0.8, y).unwrap(),
            -20.0,
            20.0,
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }
}

#[test]
fn scale_factor_examples() {
    let q = scale_factor(ScaleAlgebra::Star, ScaleFactor::Q, &[0.0, 2f64.ln()]).unwrap();
    assert!((q - 0.5).abs() < 1e-15);
    let qw = scale_factor(ScaleAlgebra::Warren, ScaleFactor::Q, &[1.0, 3.0]).unwrap();
    assert!((qw - 0.5).abs() < 1e-15);
    let (l, r) = identities::q_composition(ScaleAlgebra::Warren, 1.0, 2.0, 5.0);
    assert!((l - r).abs() < 1e-15);
    assert!(scale_factor(ScaleAlgebra::Warren, ScaleFactor::Q, &[0.0, 1.0]).is_err());
    assert!(scale_factor(ScaleAlgebra::Star, ScaleFactor::R, &[1.0, 2.0]).is_err());
    assert_eq!(
        scale_factor(ScaleAlgebra::Warren, ScaleFactor::R, &[3.0]).unwrap(),
        1.0
    );
    let s = scale_factor(ScaleAlgebra::Warren, ScaleFactor::Sigma, &[2.0]).unwrap();
    assert!((s - 1.0).abs() < 1e-15);
}

fn family() -> impl Strategy<Value = ScaleAlgebra> {
    prop_oneof![Just(ScaleAlgebra::Star), Just(ScaleAlgebra::Warren)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn time_step_identity(fam in family(), n in 0i64..=6, t in 0.2f64..2.0, s in 0.1f64..1.5, y in -2.0f64..2.0) {
        let d = deviation(identities::time_step(fam, n, t, s, y));
        prop_assert!(d < 1e-8, "{d:e}");
    }

    #[test]
    fn space_step_identity(fam in family(), n in 0i64..=6, t in 0.2f64..2.0, y in -2.0f64..2.0) {
        prop_assert!(deviation(identities::space_step(fam, n, t, y)) < 1e-8);
    }

    #[test]
    fn space_step_back_identity(n in 1i64..=5, x in -2.0f64..2.0, z in -2.0f64..2.0) {
        prop_assert!(deviation(identities::space_step_back(n, x, z)) < 1e-8);
    }

    #[test]
    fn time_semigroup_identity(fam in family(), t in 0.1f64..1.5, s in 0.1f64..1.5, x in -2.0f64..2.0, z in -2.0f64..2.0) {
        prop_assert!(deviation(identities::time_semigroup(fam, t, s, x, z)) < 1e-8);
    }

    #[test]
    fn time_step_back_identity(fam in family(), n in 1i64..=4, t in 0.1f64..1.5, x in -2.0f64..2.0, z in -2.0f64..2.0) {
        prop_assert!(deviation(identities::time_step_back(fam, n, t, x, z)) < 1e-8);
    }

    #[test]
    fn orthogonality_identity(fam in family(), n in 0i64..=8, m in 0i64..=8, t in 0.2f64..2.0) {
        prop_assert!(deviation(identities::orthogonality(fam, n, m, t)) < 1e-8);
    }

    #[test]
    fn space_shift_identity(fam in family(), t in 0.1f64..2.0, x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
        prop_assert!(deviation(identities::space_shift(fam, t, x, y, z)) < 1e-12);
    }

    #[test]
    fn scale_compositions(fam in family(), t1 in 0.1f64..2.0, d1 in 0.0f64..2.0, d2 in 0.01f64..2.0) {
        prop_assert!(deviation(identities::q_composition(fam, t1, t1 + d1, t1 + d1 + d2)) < 1e-14);
        prop_assert!(deviation(identities::r_composition(fam, d1, d2)) < 1e-14);
        prop_assert!(deviation(identities::qr_composition(fam, t1, t1 + d2)) < 1e-14);
    }

    #[test]
    fn heaviside_monotone_nonnegative(n in 1i64..=6, x in -5.0f64..5.0, dx in 0.0f64..1.0) {
        let a = heaviside_power(n, x).unwrap();
        let b = heaviside_power(n, x + dx).unwrap();
        prop_assert!(a >= 0.0 && b >= a);
    }

    #[test]
    fn heaviside_derivative(n in 2i64..=6, x in prop_oneof![-4.0f64..-0.01, 0.01f64..4.0]) {
        let e = 1e-5;
        let d = (heaviside_power(n, x + e).unwrap() - heaviside_power(n, x - e).unwrap()) / (2.0 * e);
        prop_assert!((d - heaviside_power(n - 1, x).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn time_indexed_is_rescaled_star(n in 0i64..=20, x in -6.0f64..6.0, t in 0.1f64..4.0) {
        let a = hermite_eval(&HermiteBasis::time_indexed(20, t).unwrap(), n, x).unwrap();
        let b = hermite_eval(&HermiteBasis::star(20), n, x / t.sqrt()).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
    }
}
