mod support;

use dyson_minor::correlation::gauge_compare;
use dyson_minor::minor_kernels::*;
use dyson_minor::special_functions::{transition_density, ScaleAlgebra, TransitionKind};
use dyson_minor::Error;
use proptest::prelude::*;
use std::f64::consts::PI;
use support::identities::{deviation, step_expansion_check};
use support::oracles::{extended_ou, gue2_cross_level, level_density};
use support::rel_close;

fn pt(n: i64, t: f64, x: f64) -> SpaceTimePoint {
    SpaceTimePoint::new(n, t, x)
}

fn series() -> KernelEvalConfig {
    KernelEvalConfig::default()
}

fn contour() -> KernelEvalConfig {
    KernelEvalConfig::with_representation(Representation::contour())
}

fn residues() -> KernelEvalConfig {
    KernelEvalConfig::with_representation(Representation::Residues)
}

#[test]
fn spacelike_examples() {
    assert_eq!(
        spacelike_compare(&pt(3, 1.0, 0.0), &pt(3, 1.0, 5.0)),
        SpacelikeOrder::GeqOrEqual
    );
    assert_eq!(
        spacelike_compare(&pt(2, 1.0, 0.0), &pt(1, 2.0, 0.0)),
        SpacelikeOrder::Less
    );
    assert_eq!(
        spacelike_compare(&pt(1, 2.0, 0.0), &pt(2, 1.0, 0.0)),
        SpacelikeOrder::GeqOrEqual
    );
    assert_eq!(
        spacelike_compare(&pt(2, 0.5, 0.0), &pt(2, 0.6, 0.0)),
        SpacelikeOrder::Less
    );
}

#[test]
fn diagonal_examples() {
    for cfg in [series(), contour(), residues()] {
        let k = kernel_dbm(&pt(1, 0.3, 0.0), &pt(1, 0.3, 0.0), &cfg).unwrap();
        assert!((k - 1.0 / PI.sqrt()).abs() < 1e-10);
        let k = kernel_dbm(&pt(2, 1.7, 0.0), &pt(2, 1.7, 0.0), &cfg).unwrap();
        assert!((k - 1.0 / PI.sqrt()).abs() < 1e-10);
    }
    let k = kernel_warren(&pt(1, 1.0, 0.0), &pt(1, 1.0, 0.0), &series()).unwrap();
    assert!((k - 1.0 / PI.sqrt()).abs() < 1e-14);
}

#[test]
fn diagonal_is_level_density() {
    for n in 1..=4 {
        for x in [-2.1, -0.6, 0.0, 0.35, 1.4] {
            let p = pt(n as i64, 0.8, x);
            let k = kernel_dbm(&p, &p, &series()).unwrap();
            assert!((k - level_density(n, x)).abs() < 1e-9, "n={n} x={x}");
        }
    }
}

#[test]
fn series_and_contour_examples() {
    let (p, p2) = (pt(2, 0.1, 0.3), pt(1, 0.5, -0.2));
    let s = kernel_dbm(&p, &p2, &series()).unwrap();
    assert!(rel_close(kernel_dbm(&p, &p2, &contour()).unwrap(), s, 1e-8));

    let (p, p2) = (pt(2, 1.0, 0.3), pt(1, 2.0, -0.1));
    let s = kernel_warren(&p, &p2, &series()).unwrap();
    assert!(rel_close(
        kernel_warren(&p, &p2, &contour()).unwrap(),
        s,
        1e-8
    ));

    // independent high-precision evaluations of the series
    let w = kernel_warren(&pt(2, 0.1, 0.3), &pt(1, 0.5, -0.2), &series()).unwrap();
    assert!(rel_close(w, 0.1824645877476523, 1e-9), "{w}");
    let d = kernel_dbm(&pt(6, 0.1, -1.0), &pt(2, 2.0, 0.7), &series()).unwrap();
    assert!(rel_close(d, -6.677744818278294e-4, 1e-9), "{d}");
}

#[test]
fn domain_errors() {
    assert!(matches!(
        kernel_warren(&pt(1, 0.0, 0.0), &pt(1, 1.0, 0.0), &series()),
        Err(Error::Domain { .. })
    ));
    assert!(kernel_dbm(&pt(1, -0.5, 0.0), &pt(1, 1.0, 0.0), &series()).is_err());
    assert!(kernel_dbm(&pt(0, 0.5, 0.0), &pt(1, 1.0, 0.0), &series()).is_err());
    assert!(BeadParam::new(1.0).is_err());
    assert!(BeadParam::new(-1.2).is_err());
    let bad = KernelEvalConfig::with_representation(Representation::Series {
        l_max: 0,
        term_tol: 1e-12,
        fallback: false,
    });
    assert!(matches!(
        kernel_dbm(&pt(1, 0.0, 0.0), &pt(1, 0.5, 0.0), &bad),
        Err(Error::Configuration(_))
    ));
}

#[test]
fn series_without_fallback_reports_nonconvergence() {
    let cfg = KernelEvalConfig::with_representation(Representation::Series {
        l_max: 3,
        term_tol: 1e-15,
        fallback: false,
    });
    let r = kernel_dbm(&pt(2, 0.0, 0.3), &pt(1, 0.05, -0.2), &cfg);
    assert!(matches!(r, Err(Error::Convergence { .. })), "{r:?}");
}

#[test]
fn representation_grid_is_admissible() {
    let grid = representation_grid();
    assert_eq!(grid.len(), 30);
    for (p, p2) in &grid {
        for q in [p, p2] {
            assert!((1..=6).contains(&q.level));
            assert!([0.1, 0.5, 1.0, 2.0].contains(&q.time));
            assert!([-1.0, 0.0, 0.7].contains(&q.position));
        }
        if p.level > p2.level {
            assert!(p.time < p2.time);
        }
    }
    let head: Vec<_> = grid.iter().take(6).copied().collect();
    for fam in [KernelFamily::Dbm, KernelFamily::Warren] {
        for row in compare_representations(fam, &head).unwrap() {
            assert!(row.relative_difference < 1e-7, "{row:?}");
        }
    }
    let bead = KernelFamily::Bead(BeadParam::new(0.0).unwrap());
    assert!(matches!(
        compare_representations(bead, &head),
        Err(Error::Configuration(_))
    ));
}

/// Extended Hermite kernel of n stationary Dyson particles,
#[test]
fn single_level_is_extended_ou_kernel() {
    for n in 1..=4 {
        let points: Vec<_> = [(0.0, -0.8), (0.3, 0.2), (0.3, 1.1), (0.9, -0.1), (1.6, 0.5)]
            .iter()
            .map(|&(t, x)| pt(n, t, x))
            .collect();
        let report = gauge_compare(
            |a: &SpaceTimePoint, b: &SpaceTimePoint| kernel_dbm(a, b, &series()),
            |a: &SpaceTimePoint, b: &SpaceTimePoint| Ok(extended_ou(n, a, b)),
            &points,
            1e-9,
            3,
        )
        .unwrap();
        assert!(report.pass, "n={n}: {report:?}");
    }
}

#[test]
fn equal_time_cross_level_matches_gue_minors() {
    for &(x, y) in &[
        (0.5, -0.3),
        (-0.2, 0.9),
        (1.3, 0.1),
        (0.0, 0.0),
        (-1.1, -1.6),
    ] {
        for cfg in [series(), contour()] {
            let p = pt(2, 0.4, x);
            let q = pt(1, 0.4, y);
            let m = [
                kernel_dbm(&p, &p, &cfg).unwrap(),
                kernel_dbm(&p, &q, &cfg).unwrap(),
                kernel_dbm(&q, &p, &cfg).unwrap(),
                kernel_dbm(&q, &q, &cfg).unwrap(),
            ];
            let rho = m[0] * m[3] - m[1] * m[2];
            assert!(
                (rho - gue2_cross_level(x, y)).abs() < 1e-9,
                "({x},{y}): {rho} vs {}",
                gue2_cross_level(x, y)
            );
        }
    }
}

#[test]
fn equal_time_kernel_is_stationary() {
    for &(n, n2, x, x2) in &[
        (3, 1, 0.2, -0.4),
        (1, 3, 0.7, 0.0),
        (2, 2, -1.0, 0.5),
        (4, 2, 0.3, 1.2),
    ] {
        let a = kernel_dbm(&pt(n, 0.0, x), &pt(n2, 0.0, x2), &series()).unwrap();
        let b = kernel_dbm(&pt(n, 1.7, x), &pt(n2, 1.7, x2), &series()).unwrap();
        let c = kernel_dbm(&pt(n, 1.7, x), &pt(n2, 1.7, x2), &residues()).unwrap();
        assert!(
            (a - b).abs() < 1e-12 && (b - c).abs() < 1e-10,
            "{a} {b} {c}"
        );
    }
}

#[test]
fn bead_examples() {
    let a0 = BeadParam::new(0.0).unwrap();
    let k = kernel_bead(a0, &pt(0, 0.0, 0.4), &pt(0, 0.0, 0.4)).unwrap();
    assert!((k - 1.0 / PI).abs() < 1e-12);
    for s in [0.3, 1.0, PI / 2.0, 4.9] {
        let k = kernel_bead(a0, &pt(0, 0.0, s), &pt(0, 0.0, 0.0)).unwrap();
        assert!((k - s.sin() / (PI * s)).abs() < 1e-12, "s={s}");
    }
    let a = BeadParam::new(0.6).unwrap();
    let (m, p) = a.saddle_points();
    assert!((m.re - 0.6).abs() < 1e-15 && (p.im - 0.8).abs() < 1e-15 && (m.im + 0.8).abs() < 1e-15);
}

#[test]
fn adbm_examples() {
    let cfg = series();
    for t in [0.0, 0.9] {
        assert_eq!(
            kernel_adbm(&pt(1, t, 0.0), &pt(1, t, 0.0), &cfg).unwrap(),
            0.0
        );
        let k = kernel_adbm(&pt(2, t, 0.0), &pt(2, t, 0.0), &cfg).unwrap();
        assert!((k - 1.0 / PI.sqrt()).abs() < 1e-14);
        // only l = -1 survives at n = n' = 2
        for x in [-1.2, 0.4, 2.0] {
            let k = kernel_adbm(&pt(2, t, x), &pt(2, t, x), &cfg).unwrap();
            assert!((k - (-x * x).exp() / PI.sqrt()).abs() < 1e-14);
        }
    }
}

#[test]
fn phi_examples() {
    assert_eq!(
        phi_term(PhiKind::Dbm, &pt(2, 1.0, 0.3), &pt(3, 0.5, -0.1)).unwrap(),
        0.0
    );
    let v = phi_term(PhiKind::Dbm, &pt(2, 0.0, 0.0), &pt(2, 1.0, 0.0)).unwrap();
    let expect = 2f64.exp() / (PI * (1.0 - (-2f64).exp())).sqrt();
    assert!((v - expect).abs() < 1e-12);
    assert!((v - 4.48322).abs() < 1e-5);
    let bead = PhiKind::Bead(BeadParam::new(0.0).unwrap());
    let v = phi_term(bead, &pt(0, 0.0, 0.0), &pt(0, 1.0, 0.0)).unwrap();
    assert!((v - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-14);
    // one level gap, DBM: e^{n'τ} 2^{1/2} ∫ H(x − y) p*_τ(y, x') dy
    let (x, x2, tau) = (0.4, -0.3, 0.6);
    let v = phi_term(PhiKind::Dbm, &pt(3, 0.2, x), &pt(2, 0.2 + tau, x2)).unwrap();
    let integral = dyson_minor::quadrature::Adaptive {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_intervals: 4000,
    }
    .integrate(
        |y| transition_density(TransitionKind::OU, tau, y, x2).unwrap(),
        f64::NEG_INFINITY,
        x,
    )
    .unwrap()
    .value;
    let expect = (2.0 * tau).exp() * 2f64.sqrt() * integral;
    assert!((v - expect).abs() < 1e-10, "{v} vs {expect}");
}

#[test]
fn step_expansion_examples() {
    let d = deviation(step_expansion_check(
        ScaleAlgebra::Warren,
        1,
        1.0,
        2.0,
        0.5,
        -0.3,
    ));
    assert!(d < 1e-8, "{d:e}");
    let d = deviation(step_expansion_check(
        ScaleAlgebra::Warren,
        2,
        1.0,
        1.5,
        0.0,
        0.0,
    ));
    assert!(d < 1e-7, "{d:e}");
    let d = deviation(step_expansion_check(
        ScaleAlgebra::Star,
        1,
        0.0,
        0.7,
        0.4,
        -0.2,
    ));
    assert!(d < 1e-8, "{d:e}");
    assert!(step_expansion(ScaleAlgebra::Warren, 1, 0.0, 1.0, 0.0, 0.0, 50).is_err());
    assert!(step_expansion(ScaleAlgebra::Star, 0, 0.0, 1.0, 0.0, 0.0, 50).is_err());
    // close times decay like e^{-k(t−s)}, so a short truncation cannot converge
    match step_expansion(ScaleAlgebra::Star, 1, 0.5, 0.65, 0.3, -0.2, 200) {
        Err(Error::Convergence {
            tail_bound, terms, ..
        }) => {
            assert_eq!(terms, 200);
            assert!(tail_bound.is_finite() && tail_bound > 0.0);
        }
        other => panic!("{other:?}"),
    }
    let d = deviation(step_expansion_check(
        ScaleAlgebra::Star,
        1,
        0.5,
        0.65,
        0.3,
        -0.2,
    ));
    assert!(d < 1e-7, "{d:e}");
}

fn level() -> impl Strategy<Value = i64> {
    1i64..=5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn warren_is_dbm_after_change_of_variables(
        n in level(), n2 in level(), x in -1.5f64..1.5, x2 in -1.5f64..1.5,
        t in 1.0f64..3.0, gap in 0.05f64..2.0,
    ) {
        let t2 = t + gap;
        let w = kernel_warren(&pt(n, t, x * t.sqrt()), &pt(n2, t2, x2 * t2.sqrt()), &series()).unwrap();
        let d = kernel_dbm(&pt(n, 0.5 * t.ln(), x), &pt(n2, 0.5 * t2.ln(), x2), &series()).unwrap();
        prop_assert!((w - d / t.sqrt()).abs() <= 1e-9 * w.abs().max(1.0), "{w} vs {}", d / t.sqrt());
    }

    #[test]
    fn diagonal_nonnegative(n in 1i64..=8, t in 0.05f64..3.0, x in -4.0f64..4.0) {
        prop_assert!(kernel_dbm(&pt(n, t, x), &pt(n, t, x), &series()).unwrap() >= 0.0);
        prop_assert!(kernel_warren(&pt(n, t, x), &pt(n, t, x), &series()).unwrap() >= 0.0);
        prop_assert!(kernel_adbm(&pt(n, t, x), &pt(n, t, x), &series()).unwrap() >= -1e-15);
    }

    #[test]
    fn cross_products_agree_across_representations(
        n in level(), drop in 0i64..=4, x in -1.0f64..1.0, x2 in -1.0f64..1.0,
        t in 0.0f64..1.0, gap in 0.1f64..1.5,
    ) {
        // p then q along a space-like path
        let n2 = (n - drop).max(1);
        let (p, q) = (pt(n, t, x), pt(n2, t + gap, x2));
        let s = kernel_dbm(&p, &q, &series()).unwrap() * kernel_dbm(&q, &p, &series()).unwrap();
        let c = kernel_dbm(&p, &q, &contour()).unwrap() * kernel_dbm(&q, &p, &contour()).unwrap();
        prop_assert!((s - c).abs() <= 1e-7 * s.abs().max(1e-3), "{s} vs {c}");
    }

    #[test]
    fn bead_translation_invariant(
        a in -0.9f64..0.9, gap in 0i64..=2, tau in 0.0f64..1.5,
        x in -2.0f64..2.0, x2 in -2.0f64..2.0, shift in -3.0f64..3.0,
    ) {
        // level gaps need a nonzero saddle when the pair is ordered by level
        prop_assume!(gap == 0 || a.abs() > 0.05);
        let a = BeadParam::new(a).unwrap();
        let k = kernel_bead(a, &pt(gap, 0.0, x), &pt(0, tau, x2)).unwrap();
        let moved = kernel_bead(a, &pt(gap, 0.0, x + shift), &pt(0, tau, x2 + shift)).unwrap();
        prop_assert!((k - moved).abs() <= 1e-12 * k.abs().max(1.0), "{k} vs {moved}");
    }

    #[test]
    fn adbm_parity(n in 1i64..=6, t in 0.0f64..2.0, x in -2.0f64..2.0, x2 in -2.0f64..2.0) {
        let a = kernel_adbm(&pt(n, t, x), &pt(n, t, x2), &series()).unwrap();
        let b = kernel_adbm(&pt(n, t, -x), &pt(n, t, -x2), &series()).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
    }
}
