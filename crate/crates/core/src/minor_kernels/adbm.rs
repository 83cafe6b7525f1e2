use super::series::PairSeries;
use super::{
    check_level, check_point, not_spacelike, spacelike_compare, KernelEvalConfig, Representation,
};
use super::{SpaceTimePoint, SpacelikeOrder};
use crate::error::{Error, Result};

/// Anti-symmetric variant: the DBM series with index stride 2 and decay
/// e^{-2l(t'-t)}. Only the series form exists.
pub fn kernel_adbm(p: &SpaceTimePoint, p2: &SpaceTimePoint, cfg: &KernelEvalConfig) -> Result<f64> {
    cfg.validate()?;
    let Representation::Series {
        l_max, term_tol, ..
    } = cfg.representation
    else {
        return Err(Error::Configuration(
            "the anti-symmetric kernel has only a series representation".into(),
        ));
    };
    check_level(p, "p")?;
    check_level(p2, "p'")?;
    check_point(p, "p", Some(0.0), false)?;
    check_point(p2, "p'", Some(0.0), false)?;
    let tau = p2.time - p.time;
    let less = spacelike_compare(p, p2) == SpacelikeOrder::Less;
    if less && tau < 0.0 {
        return Err(not_spacelike(p, p2));
    }
    let s = PairSeries {
        n: p.level,
        n2: p2.level,
        a: p.position,
        b: p2.position,
        rate: 2.0 * tau,
        stride: 2,
    };
    let v = if less {
        s.upper_sum(l_max, term_tol)?
    } else {
        s.lower_sum()
    };
    Ok(cfg.gauge.apply(p, p2, v))
}
