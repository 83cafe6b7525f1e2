//! Correlation kernels of the Dyson Brownian minor process, Warren's process,
//! the bead process and the anti-symmetric variant.

mod adbm;
mod bead;
mod dbm;
mod phi;
mod series;
mod step;
mod warren;

pub use adbm::kernel_adbm;
pub use bead::{bead_limit_sweep, kernel_bead, scaled_dbm_for_bead, BeadLimitRow, BeadParam};
pub use dbm::kernel_dbm;
pub use phi::{phi_term, PhiKind};
pub use step::step_expansion;
pub use warren::kernel_warren;

use crate::contour_quadrature::DoubleContourOptions;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A (level, time, position) triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub level: i64,
    pub time: f64,
    pub position: f64,
}

impl SpaceTimePoint {
    pub fn new(level: i64, time: f64, position: f64) -> Self {
        SpaceTimePoint {
            level,
            time,
            position,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpacelikeOrder {
    Less,
    GeqOrEqual,
}

/// (n, t) < (n', t') iff n > n', or n = n' and t < t'.
pub fn spacelike_compare(p: &SpaceTimePoint, p2: &SpaceTimePoint) -> SpacelikeOrder {
    if p.level > p2.level || (p.level == p2.level && p.time < p2.time) {
        SpacelikeOrder::Less
    } else {
        SpacelikeOrder::GeqOrEqual
    }
}

/// How a kernel value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Representation {
    /// Hermite series, truncated once the tail bound drops below `term_tol`
    /// relative to the terms seen. With `fallback`, series that cannot
    /// converge within `l_max` terms are handed to the residue form.
    Series {
        l_max: usize,
        term_tol: f64,
        fallback: bool,
    },
    /// Numerical double contour integral minus the one-sided term.
    Contour(DoubleContourOptions),
    /// The double contour integral evaluated exactly by residues on the
    /// small circle, leaving finite Hermite sums and ramp integrals.
    Residues,
}

impl Representation {
    pub fn series() -> Self {
        Representation::Series {
            l_max: 500,
            term_tol: 1e-15,
            fallback: true,
        }
    }

    pub fn contour() -> Self {
        Representation::Contour(DoubleContourOptions::default())
    }
}

/// log f(n, t, x) = a·n·t + b·n + c·t + d·x for the conjugation
/// K ↦ f(p)/f(p')·K.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Conjugation {
    pub level_time: f64,
    pub level: f64,
    pub time: f64,
    pub position: f64,
}

impl Conjugation {
    pub fn log_factor(&self, p: &SpaceTimePoint) -> f64 {
        let n = p.level as f64;
        self.level_time * n * p.time
            + self.level * n
            + self.time * p.time
            + self.position * p.position
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gauge {
    Raw,
    Conjugated(Conjugation),
}

impl Gauge {
    pub(crate) fn apply(&self, p: &SpaceTimePoint, p2: &SpaceTimePoint, value: f64) -> f64 {
        match self {
            Gauge::Raw => value,
            Gauge::Conjugated(c) => value * (c.log_factor(p) - c.log_factor(p2)).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEvalConfig {
    pub representation: Representation,
    pub gauge: Gauge,
}

impl Default for KernelEvalConfig {
    fn default() -> Self {
        KernelEvalConfig {
            representation: Representation::series(),
            gauge: Gauge::Raw,
        }
    }
}

impl KernelEvalConfig {
    pub fn with_representation(representation: Representation) -> Self {
        KernelEvalConfig {
            representation,
            gauge: Gauge::Raw,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let Representation::Series {
            l_max, term_tol, ..
        } = self.representation
        {
            if l_max < 1 {
                return Err(Error::Configuration("l_max must be at least 1".into()));
            }
            if !(term_tol > 0.0) {
                return Err(Error::Configuration("term_tol must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Kernel family selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelFamily {
    Dbm,
    Warren,
    Bead(BeadParam),
    Adbm,
}

/// A kernel family together with its evaluation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub family: KernelFamily,
    pub config: KernelEvalConfig,
}

impl Kernel {
    pub fn new(family: KernelFamily, config: KernelEvalConfig) -> Self {
        Kernel { family, config }
    }

    pub fn eval(&self, p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Result<f64> {
        match self.family {
            KernelFamily::Dbm => kernel_dbm(p, p2, &self.config),
            KernelFamily::Warren => kernel_warren(p, p2, &self.config),
            KernelFamily::Bead(a) => Ok(self.config.gauge.apply(p, p2, kernel_bead(a, p, p2)?)),
            KernelFamily::Adbm => kernel_adbm(p, p2, &self.config),
        }
    }
}

pub(crate) fn check_point(
    p: &SpaceTimePoint,
    name: &str,
    min_time: Option<f64>,
    strict: bool,
) -> Result<()> {
    if !p.time.is_finite() || !p.position.is_finite() {
        return Err(Error::domain(name, "time and position must be finite"));
    }
    if let Some(m) = min_time {
        if (strict && p.time <= m) || (!strict && p.time < m) {
            let rel = if strict { ">" } else { ">=" };
            return Err(Error::domain(
                name,
                format!("time must be {rel} {m}, got {}", p.time),
            ));
        }
    }
    Ok(())
}

pub(crate) fn check_level(p: &SpaceTimePoint, name: &str) -> Result<()> {
    if p.level < 1 {
        return Err(Error::domain(
            name,
            format!("level must be at least 1, got {}", p.level),
        ));
    }
    Ok(())
}

pub(crate) fn not_spacelike(p: &SpaceTimePoint, p2: &SpaceTimePoint) -> Error {
    Error::domain(
        "points",
        format!(
            "pair ({}, {}) < ({}, {}) with decreasing time is not on a space-like path",
            p.level, p.time, p2.level, p2.time
        ),
    )
}

/// (level, time, position) pairs for cross-checking representations:
/// levels up to 6, times in {0.1, 0.5, 1, 2}, positions in {−1, 0, 0.7}.
/// Pairs with n > n' always have t < t'.
type GridPoint = (i64, f64, f64);

#[rustfmt::skip]
const REPRESENTATION_GRID: [(GridPoint, GridPoint); 30] = [
    ((1, 0.1, -1.0), (1, 0.5, 0.0)),
    ((1, 0.5, 0.0), (1, 0.1, 0.7)),
    ((1, 1.0, 0.7), (1, 1.0, -1.0)),
    ((2, 0.1, 0.0), (1, 0.5, 0.7)),
    ((2, 0.5, -1.0), (1, 2.0, 0.0)),
    ((2, 1.0, 0.7), (1, 2.0, -1.0)),
    ((1, 0.5, 0.7), (2, 0.1, -1.0)),
    ((1, 2.0, -1.0), (2, 0.5, 0.7)),
    ((1, 0.1, 0.0), (2, 1.0, 0.7)),
    ((3, 0.5, 0.0), (3, 1.0, 0.7)),
    ((3, 2.0, -1.0), (3, 0.5, 0.0)),
    ((3, 1.0, 0.7), (3, 1.0, 0.7)),
    ((4, 0.1, -1.0), (2, 0.5, 0.7)),
    ((4, 0.5, 0.0), (2, 1.0, -1.0)),
    ((4, 1.0, 0.7), (2, 2.0, 0.0)),
    ((2, 0.5, 0.7), (5, 0.1, 0.0)),
    ((2, 1.0, -1.0), (5, 2.0, 0.7)),
    ((2, 2.0, 0.0), (5, 0.5, -1.0)),
    ((6, 0.1, 0.0), (6, 0.5, -1.0)),
    ((6, 1.0, 0.7), (6, 0.1, 0.0)),
    ((6, 0.5, -1.0), (6, 0.5, 0.7)),
    ((5, 0.1, 0.7), (3, 0.5, 0.0)),
    ((5, 0.5, -1.0), (3, 2.0, 0.7)),
    ((5, 1.0, 0.0), (3, 2.0, -1.0)),
    ((3, 0.1, -1.0), (6, 0.5, 0.0)),
    ((3, 0.5, 0.0), (6, 2.0, 0.7)),
    ((3, 2.0, 0.7), (6, 1.0, -1.0)),
    ((6, 0.1, 0.7), (1, 0.5, -1.0)),
    ((6, 0.5, 0.0), (1, 1.0, 0.7)),
    ((6, 1.0, -1.0), (1, 2.0, 0.0)),
];

/// The fixed 30-pair grid used to cross-check representations.
pub fn representation_grid() -> Vec<(SpaceTimePoint, SpaceTimePoint)> {
    REPRESENTATION_GRID
        .iter()
        .map(|&((n, t, x), (n2, t2, x2))| {
            (
                SpaceTimePoint::new(n, t, x),
                SpaceTimePoint::new(n2, t2, x2),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationComparison {
    pub p: SpaceTimePoint,
    pub p2: SpaceTimePoint,
    /// Values are multiplied by 2^{(n−n')/2} for Warren's kernel.
    pub series: f64,
    pub contour: f64,
    pub relative_difference: f64,
}

/// Series against numerical contour evaluation for the DBM or Warren kernel.
pub fn compare_representations(
    family: KernelFamily,
    pairs: &[(SpaceTimePoint, SpaceTimePoint)],
) -> Result<Vec<RepresentationComparison>> {
    let scale = |p: &SpaceTimePoint, p2: &SpaceTimePoint| match family {
        KernelFamily::Warren => (0.5 * (p.level - p2.level) as f64 * std::f64::consts::LN_2).exp(),
        _ => 1.0,
    };
    match family {
        KernelFamily::Dbm | KernelFamily::Warren => {}
        _ => {
            return Err(Error::Configuration(
                "representation comparison covers the DBM and Warren kernels".into(),
            ))
        }
    }
    let series = Kernel::new(
        family,
        KernelEvalConfig::with_representation(Representation::series()),
    );
    let contour = Kernel::new(
        family,
        KernelEvalConfig::with_representation(Representation::contour()),
    );
    pairs
        .iter()
        .map(|(p, p2)| {
            let f = scale(p, p2);
            let s = f * series.eval(p, p2)?;
            let c = f * contour.eval(p, p2)?;
            let denom = s.abs().max(c.abs());
            let rel = if denom == 0.0 {
                0.0
            } else {
                (s - c).abs() / denom
            };
            Ok(RepresentationComparison {
                p: *p,
                p2: *p2,
                series: s,
                contour: c,
                relative_difference: rel,
            })
        })
        .collect()
}
