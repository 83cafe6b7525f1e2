use super::dbm::{dbm_residues, CONTOUR_LEVEL_LIMIT};
use super::phi::{phi_term, PhiKind};
use super::series::PairSeries;
use super::{
    check_level, check_point, not_spacelike, spacelike_compare, KernelEvalConfig, Representation,
};
use super::{SpaceTimePoint, SpacelikeOrder};
use crate::contour_quadrature::{double_contour_with, DoubleContourOptions};
use crate::error::{Error, Result};
use std::f64::consts::LN_2;

/// K^W((n, x, t), (n', x', t')) for Warren's process.
pub fn kernel_warren(
    p: &SpaceTimePoint,
    p2: &SpaceTimePoint,
    cfg: &KernelEvalConfig,
) -> Result<f64> {
    cfg.validate()?;
    check_level(p, "p")?;
    check_level(p2, "p'")?;
    check_point(p, "p", Some(0.0), true)?;
    check_point(p2, "p'", Some(0.0), true)?;
    let less = spacelike_compare(p, p2) == SpacelikeOrder::Less;
    if less && p2.time < p.time {
        return Err(not_spacelike(p, p2));
    }
    let (t, t2) = (p.time, p2.time);
    let v = match cfg.representation {
        Representation::Series {
            l_max,
            term_tol,
            fallback,
        } => {
            let s = PairSeries {
                n: p.level,
                n2: p2.level,
                a: p.position / t.sqrt(),
                b: p2.position / t2.sqrt(),
                rate: 0.5 * (t2 / t).ln(),
                stride: 1,
            };
            if !less {
                s.lower_sum() / t.sqrt()
            } else if t == t2 && fallback {
                warren_contour(p, p2, &DoubleContourOptions::default())?
            } else {
                match s.upper_sum(l_max, term_tol) {
                    Ok(v) => v / t.sqrt(),
                    Err(Error::Convergence { .. }) if fallback => {
                        warren_contour(p, p2, &DoubleContourOptions::default())?
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Representation::Contour(opts) => warren_contour(p, p2, &opts)?,
        Representation::Residues => warren_residues(p, p2)?,
    };
    Ok(cfg.gauge.apply(p, p2, v))
}

/// Through the change of variables t = e^{2s}, x = √t·ξ onto the DBM kernel.
fn warren_residues(p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Result<f64> {
    let (t, t2) = (p.time, p2.time);
    let v = dbm_residues(
        p.level,
        p.position / t.sqrt(),
        p2.level,
        p2.position / t2.sqrt(),
        0.5 * (t2 / t).ln(),
    )?;
    Ok(v / t.sqrt())
}

fn warren_contour(
    p: &SpaceTimePoint,
    p2: &SpaceTimePoint,
    opts: &DoubleContourOptions,
) -> Result<f64> {
    if p.level.max(p2.level) > CONTOUR_LEVEL_LIMIT {
        return warren_residues(p, p2);
    }
    let (t, t2) = (p.time, p2.time);
    let c = double_contour_with(
        p.level,
        p2.level,
        p.position,
        p2.position,
        (t / t2).sqrt(),
        (1.0 / t.sqrt(), 1.0 / t2.sqrt()),
        opts,
    )?;
    let phi = phi_term(PhiKind::Warren, p, p2)?;
    let d = (p.level - p2.level) as f64;
    Ok((-0.5 * d * LN_2).exp() * (c.value.re / t.sqrt() - phi))
}
