use super::phi::{phi_term, PhiKind};
use super::series::PairSeries;
use super::{
    check_level, check_point, not_spacelike, KernelEvalConfig, Representation, SpaceTimePoint,
};
use crate::contour_quadrature::{double_contour_with, DoubleContourOptions};
use crate::error::{Error, Result};
use crate::special_functions::{ln_factorial, weighted_ramp, HermiteTable, LN_PI_M14};
use std::f64::consts::LN_2;

/// Above this level the numerical contour is replaced by its residue form.
pub(crate) const CONTOUR_LEVEL_LIMIT: i64 = 40;

/// K^DBM((n, x, t), (n', x', t')).
pub fn kernel_dbm(p: &SpaceTimePoint, p2: &SpaceTimePoint, cfg: &KernelEvalConfig) -> Result<f64> {
    cfg.validate()?;
    check_level(p, "p")?;
    check_level(p2, "p'")?;
    check_point(p, "p", Some(0.0), false)?;
    check_point(p2, "p'", Some(0.0), false)?;
    let v = dbm_raw(
        p.level,
        p.position,
        p2.level,
        p2.position,
        p2.time - p.time,
        &cfg.representation,
    )?;
    Ok(cfg.gauge.apply(p, p2, v))
}

fn is_less(n: i64, n2: i64, tau: f64) -> bool {
    n > n2 || (n == n2 && tau > 0.0)
}

/// The kernel depends on the times only through τ = t' - t.
pub(crate) fn dbm_raw(
    n: i64,
    x: f64,
    n2: i64,
    x2: f64,
    tau: f64,
    rep: &Representation,
) -> Result<f64> {
    let less = is_less(n, n2, tau);
    if less && tau < 0.0 {
        return Err(not_spacelike(
            &SpaceTimePoint::new(n, 0.0, x),
            &SpaceTimePoint::new(n2, tau, x2),
        ));
    }
    let series = PairSeries {
        n,
        n2,
        a: x,
        b: x2,
        rate: tau,
        stride: 1,
    };
    match *rep {
        Representation::Series {
            l_max,
            term_tol,
            fallback,
        } => {
            if !less {
                return Ok(series.lower_sum());
            }
            if tau == 0.0 && fallback {
                return dbm_contour(n, x, n2, x2, tau, &DoubleContourOptions::default());
            }
            match series.upper_sum(l_max, term_tol) {
                Err(Error::Convergence { .. }) if fallback => {
                    dbm_contour(n, x, n2, x2, tau, &DoubleContourOptions::default())
                }
                other => other,
            }
        }
        Representation::Contour(opts) => dbm_contour(n, x, n2, x2, tau, &opts),
        Representation::Residues => dbm_residues(n, x, n2, x2, tau),
    }
}

fn dbm_phi(n: i64, x: f64, n2: i64, x2: f64, tau: f64) -> Result<f64> {
    phi_term(
        PhiKind::Dbm,
        &SpaceTimePoint::new(n, 0.0, x),
        &SpaceTimePoint::new(n2, tau, x2),
    )
}

pub(crate) fn dbm_contour(
    n: i64,
    x: f64,
    n2: i64,
    x2: f64,
    tau: f64,
    opts: &DoubleContourOptions,
) -> Result<f64> {
    if n.max(n2) > CONTOUR_LEVEL_LIMIT {
        return dbm_residues(n, x, n2, x2, tau);
    }
    let c = double_contour_with(n, n2, x, x2, (-tau).exp(), (1.0, 1.0), opts)?;
    let pref = (0.5 * (n2 - n) as f64 * LN_2).exp();
    Ok(pref * c.value.re - dbm_phi(n, x, n2, x2, tau)?)
}

/// Residues of the u-integrand at the origin, term by term. Terms whose
/// v-integral keeps a nonnegative power give Hermite products; the others
/// give the Gaussian ramp integrals G_p(x') = ∫ e^{-y²} H^p(y - x') dy.
pub(crate) fn dbm_residues(n: i64, x: f64, n2: i64, x2: f64, tau: f64) -> Result<f64> {
    let less = is_less(n, n2, tau);
    let head = PairSeries {
        n,
        n2,
        a: x,
        b: x2,
        rate: tau,
        stride: 1,
    }
    .lower_sum();
    if !less {
        return Ok(head);
    }
    if tau < 0.0 {
        return Err(not_spacelike(
            &SpaceTimePoint::new(n, 0.0, x),
            &SpaceTimePoint::new(n2, tau, x2),
        ));
    }
    let mut extra = 0.0;
    if n > n2 {
        let table = HermiteTable::new((n - n2 - 1) as usize, x);
        for m in n2..n {
            let k = n - m - 1;
            let pw = m + 1 - n2;
            let g = weighted_ramp(pw, x2, 1.0);
            if g == 0.0 {
                continue;
            }
            let (sign, lh) = table.signed_log(k);
            if sign == 0.0 {
                continue;
            }
            let log_pref = (m + 1) as f64 * tau
                + LN_2 * (0.5 * (n2 - n) as f64 + 0.5 * k as f64 + pw as f64)
                + LN_PI_M14
                - 0.5 * ln_factorial(k);
            extra += sign * g * (log_pref + lh).exp();
        }
    }
    Ok(head + extra - dbm_phi(n, x, n2, x2, tau)?)
}
