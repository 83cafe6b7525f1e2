use super::bead::BeadParam;
use super::{not_spacelike, spacelike_compare, SpaceTimePoint, SpacelikeOrder};
use crate::error::{Error, Result};
use crate::special_functions::{
    heaviside_gaussian, heaviside_power, transition_density, TransitionKind,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhiKind {
    Dbm,
    Warren,
    Bead(BeadParam),
}

/// ∫ H^d(x - y) g(y) dy where g is a Gaussian in y with the given mean and
/// standard deviation, scaled by `mass`. H^0 collapses to `density_at_x`,
/// and a vanishing time gap collapses g to a delta at `mean`.
fn heaviside_against_gaussian(
    d: i64,
    x: f64,
    mean: f64,
    sd: f64,
    mass: f64,
    density_at_x: impl Fn() -> f64,
) -> f64 {
    if d == 0 {
        return density_at_x();
    }
    if sd == 0.0 {
        return heaviside_power(d, x - mean).expect("d >= 1");
    }
    mass * heaviside_gaussian(d, x, mean, sd)
}

/// One-sided term subtracted in the contour forms; zero unless p < p'.
pub fn phi_term(kind: PhiKind, p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Result<f64> {
    if spacelike_compare(p, p2) == SpacelikeOrder::GeqOrEqual {
        return Ok(0.0);
    }
    let tau = p2.time - p.time;
    if tau < 0.0 {
        return Err(not_spacelike(p, p2));
    }
    let d = p.level - p2.level;
    let (x, x2) = (p.position, p2.position);
    match kind {
        PhiKind::Dbm => {
            // p*_τ(y, x') as a function of y is (1/q)·N(x'/q, (1-q²)/(2q²))
            let q = (-tau).exp();
            let var = -(-2.0 * tau).exp_m1() / (2.0 * q * q);
            let j = heaviside_against_gaussian(d, x, x2 / q, var.sqrt(), 1.0 / q, || {
                transition_density(TransitionKind::OU, tau, x, x2).unwrap_or(0.0)
            });
            Ok((0.5 * d as f64 * LN_2 + p2.level as f64 * tau).exp() * j)
        }
        PhiKind::Warren => {
            if !(p.time > 0.0) {
                return Err(Error::domain("t", "Warren times must be positive"));
            }
            let (t, t2) = (p.time, p2.time);
            let j = heaviside_against_gaussian(d, x, x2, (tau / 2.0).sqrt(), 1.0, || {
                transition_density(TransitionKind::BM, tau, x, x2).unwrap_or(0.0)
            });
            let log_pref = d as f64 * LN_2
                + 0.5 * ((p2.level + 1) as f64 * t2.ln() - (p.level + 1) as f64 * t.ln());
            Ok(log_pref.exp() * j)
        }
        PhiKind::Bead(a) => {
            let center = x2 + a.a() * tau;
            Ok(heaviside_against_gaussian(
                d,
                x,
                center,
                tau.sqrt(),
                1.0,
                || {
                    let dx = x - center;
                    (-dx * dx / (2.0 * tau)).exp() / (2.0 * PI * tau).sqrt()
                },
            ))
        }
    }
}
