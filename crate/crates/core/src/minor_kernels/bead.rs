use super::dbm::dbm_raw;
use super::phi::{phi_term, PhiKind};
use super::{
    check_point, not_spacelike, spacelike_compare, Representation, SpaceTimePoint, SpacelikeOrder,
};
use crate::contour_quadrature::{integrate_segment, saddle_points, ContourSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Bulk position a ∈ (-1, 1) of the bead limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeadParam {
    a: f64,
}

impl BeadParam {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > -1.0 && a < 1.0) {
            return Err(Error::domain(
                "a",
                format!("bead parameter must lie in (-1, 1), got {a}"),
            ));
        }
        Ok(BeadParam { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Saddle points u_± = a ± i√(1-a²).
    pub fn saddle_points(&self) -> (Complex64, Complex64) {
        saddle_points(self.a).expect("validated on construction")
    }
}

const SEGMENT_START_NODES: usize = 64;
const SEGMENT_MAX_NODES: usize = 8192;

/// K^Bead_a((n, x, t), (n', x', t')); levels are relative and may be negative.
pub fn kernel_bead(a: BeadParam, p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Result<f64> {
    let a = BeadParam::new(a.a)?;
    check_point(p, "p", None, false)?;
    check_point(p2, "p'", None, false)?;
    let tau = p2.time - p.time;
    let less = spacelike_compare(p, p2) == SpacelikeOrder::Less;
    if less && tau < 0.0 {
        return Err(not_spacelike(p, p2));
    }
    let power = p2.level - p.level;
    let (lo, hi) = a.saddle_points();
    if power < 0 && a.a == 0.0 {
        return Err(Error::domain(
            "a",
            "a = 0 with n > n' puts the pole at the origin on the integration segment",
        ));
    }
    let dx = p.position - p2.position;
    let av = a.a;
    let f =
        |u: Complex64| u.powi(power as i32) * (0.5 * tau * (u * u - 2.0 * av * u) + u * dx).exp();
    let mut nodes = SEGMENT_START_NODES;
    let mut prev = integrate_segment(f, &ContourSpec::segment(lo, hi, nodes))?;
    loop {
        nodes *= 2;
        let cur = integrate_segment(f, &ContourSpec::segment(lo, hi, nodes))?;
        let diff = (cur - prev).norm();
        if diff <= 1e-14 * cur.norm().max(1.0) {
            prev = cur;
            break;
        }
        if nodes >= SEGMENT_MAX_NODES {
            return Err(Error::Convergence {
                partial_sum: (cur / Complex64::new(0.0, 2.0 * PI)).re,
                tail_bound: diff,
                terms: nodes,
            });
        }
        prev = cur;
    }
    let segment = (prev / Complex64::new(0.0, 2.0 * PI)).re;
    Ok(segment - phi_term(PhiKind::Bead(a), p, p2)?)
}

/// N^{(n-n')/2} (2N)^{-1/2} e^{-(t'-t)/2} K^DBM at levels N+n, N+n', positions
/// √(2N)a + x/√(2N) and times t/(2N); tends to K^Bead_a as N → ∞.
pub fn scaled_dbm_for_bead(
    a: BeadParam,
    p: &SpaceTimePoint,
    p2: &SpaceTimePoint,
    big_n: u64,
) -> Result<f64> {
    let a = BeadParam::new(a.a)?;
    if big_n == 0 {
        return Err(Error::domain("N", "scaling parameter must be positive"));
    }
    let nf = big_n as f64;
    let (n, n2) = (big_n as i64 + p.level, big_n as i64 + p2.level);
    if n < 1 || n2 < 1 {
        return Err(Error::domain("N", "N + level must be at least 1"));
    }
    let s = (2.0 * nf).sqrt();
    let tau = p2.time - p.time;
    let k = dbm_raw(
        n,
        s * a.a + p.position / s,
        n2,
        s * a.a + p2.position / s,
        tau / (2.0 * nf),
        &Representation::Residues,
    )?;
    let log_pref = 0.5 * (p.level - p2.level) as f64 * nf.ln() - 0.5 * (2.0 * nf).ln() - 0.5 * tau;
    Ok(log_pref.exp() * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeadLimitRow {
    pub big_n: u64,
    pub scaled: f64,
    pub limit: f64,
    pub error: f64,
}

/// Scaled DBM kernel against its bead limit for each N.
pub fn bead_limit_sweep(
    a: BeadParam,
    levels: (i64, i64),
    times: (f64, f64),
    positions: (f64, f64),
    n_values: &[u64],
) -> Result<Vec<BeadLimitRow>> {
    if n_values.is_empty() {
        return Err(Error::domain("N", "at least one N is required"));
    }
    if n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("N", "N values must be strictly increasing"));
    }
    let p = SpaceTimePoint::new(levels.0, times.0, positions.0);
    let p2 = SpaceTimePoint::new(levels.1, times.1, positions.1);
    let limit = kernel_bead(a, &p, &p2)?;
    n_values
        .iter()
        .map(|&big_n| {
            let scaled = scaled_dbm_for_bead(a, &p, &p2, big_n)?;
            Ok(BeadLimitRow {
                big_n,
                scaled,
                limit,
                error: (scaled - limit).abs(),
            })
        })
        .collect()
}
