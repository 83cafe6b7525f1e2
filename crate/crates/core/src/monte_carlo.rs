//! Simulators for the Hermitian OU matrix process (with its minors) and for
//! Warren's interlaced reflected Brownian motions, plus empirical estimators
//! of correlation functions.

use crate::correlation::{correlation_density, CorrelationQuery};
use crate::error::{Error, Result};
use crate::minor_kernels::{Kernel, SpaceTimePoint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

pub const MAX_MATRIX_SIZE: usize = 64;
pub const DEFAULT_EULER_STEP: f64 = 1e-3;

/// Hermitian matrix stored as its real diagonal and the strictly upper
/// triangle, row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianState {
    diag: Vec<f64>,
    upper: Vec<Complex64>,
}

impl HermitianState {
    pub fn new(diag: Vec<f64>, upper: Vec<Complex64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::domain("N", "matrix size must be at least 1"));
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::domain(
                "upper",
                "need N(N-1)/2 strictly-upper entries",
            ));
        }
        if diag.iter().any(|v| !v.is_finite())
            || upper.iter().any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::domain("entries", "entries must be finite"));
        }
        Ok(HermitianState { diag, upper })
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    fn upper_index(&self, i: usize, j: usize) -> usize {
        let n = self.dimension();
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Complex64::new(self.diag[i], 0.0),
            std::cmp::Ordering::Less => self.upper[self.upper_index(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.upper_index(j, i)].conj(),
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// GUE matrix: diagonal N(0, ½), real and imaginary parts off the diagonal
/// N(0, ¼).
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianState> {
    if n == 0 {
        return Err(Error::domain("N", "matrix size must be at least 1"));
    }
    let diag = (0..n).map(|_| FRAC_1_SQRT_2 * normal(rng)).collect();
    let upper = (0..n * (n - 1) / 2)
        .map(|_| Complex64::new(0.5 * normal(rng), 0.5 * normal(rng)))
        .collect();
    Ok(HermitianState { diag, upper })
}

/// Exact OU transition over `dt`: each real component c goes to
/// q c + √(1 − q²) σ Z with q = e^{-dt} and σ its stationary scale.
pub fn evolve_ou<R: Rng + ?Sized>(
    state: &HermitianState,
    dt: f64,
    rng: &mut R,
) -> Result<HermitianState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain("dt", "time step must be positive and finite"));
    }
    let q = (-dt).exp();
    let s = (-(-2.0 * dt).exp_m1()).sqrt();
    let diag = state
        .diag
        .iter()
        .map(|&c| q * c + s * FRAC_1_SQRT_2 * normal(rng))
        .collect();
    let upper = state
        .upper
        .iter()
        .map(|c| {
            let re = q * c.re + s * 0.5 * normal(rng);
            let im = q * c.im + s * 0.5 * normal(rng);
            Complex64::new(re, im)
        })
        .collect();
    Ok(HermitianState { diag, upper })
}

/// Ascending eigenvalues of every top-left n×n block, n = 1..=N.
pub fn minor_eigenvalues(state: &HermitianState) -> Result<Vec<Vec<f64>>> {
    let n = state.dimension();
    if n > MAX_MATRIX_SIZE {
        return Err(Error::domain(
            "N",
            format!("matrix size is limited to {MAX_MATRIX_SIZE}"),
        ));
    }
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 1..=n {
        let vals = if k == 1 {
            vec![state.diag[0]]
        } else {
            block_eigenvalues(state, k)?
        };
        out.push(vals);
    }
    let radius = out[n - 1]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let tol = 1e-10 * radius;
    for k in 1..n {
        let (lo, hi) = (&out[k - 1], &out[k]);
        for j in 0..k {
            if hi[j] > lo[j] + tol || lo[j] > hi[j + 1] + tol {
                return Err(Error::Numerical(format!(
                    "minor eigenvalues at levels {k} and {} fail to interlace",
                    k + 1
                )));
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of the k×k block through the symmetric embedding [[A, −B], [B, A]]
/// whose spectrum is that of A + iB, each value doubled.
fn block_eigenvalues(state: &HermitianState, k: usize) -> Result<Vec<f64>> {
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let z = state.entry(i, j);
            m[(i, j)] = z.re;
            m[(i + k, j + k)] = z.re;
            m[(i, j + k)] = -z.im;
            m[(i + k, j)] = z.im;
        }
    }
    let eig = m.try_symmetric_eigen(f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numerical("symmetric eigenvalue iteration did not converge".into())
    })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Process {
    /// Stationary Hermitian OU matrix with its minors.
    Dbm,
    /// Warren's interlaced Brownian motions started from the origin.
    Warren,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Matrix size, or number of levels for Warren's process.
    pub size: usize,
    pub times: Vec<f64>,
    pub paths: usize,
    pub seed: u64,
    pub euler_step: f64,
}

impl SimConfig {
    pub fn new(size: usize, times: Vec<f64>, paths: usize, seed: u64) -> Self {
        SimConfig {
            size,
            times,
            paths,
            seed,
            euler_step: DEFAULT_EULER_STEP,
        }
    }

    pub fn validate(&self, process: Process) -> Result<()> {
        if self.size == 0 || self.size > MAX_MATRIX_SIZE {
            return Err(Error::domain(
                "size",
                format!("size must lie in 1..={MAX_MATRIX_SIZE}"),
            ));
        }
        if self.paths == 0 {
            return Err(Error::domain("paths", "need at least one path"));
        }
        if self.times.is_empty() {
            return Err(Error::domain("times", "need at least one observation time"));
        }
        if self.times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::domain(
                "times",
                "times must be finite and nonnegative",
            ));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("times", "times must be nondecreasing"));
        }
        if process == Process::Warren {
            if !(self.euler_step > 0.0) || !self.euler_step.is_finite() {
                return Err(Error::domain("euler_step", "Euler step must be positive"));
            }
            if self.times[0] <= 0.0 {
                return Err(Error::domain(
                    "times",
                    "Warren observation times must be positive",
                ));
            }
            let mut prev = 0.0;
            for &t in &self.times {
                if t > prev && t - prev < self.euler_step * (1.0 - 1e-12) {
                    return Err(Error::domain(
                        "euler_step",
                        "Euler step exceeds the spacing of observation times",
                    ));
                }
                prev = t;
            }
        }
        Ok(())
    }

    fn rng(&self, path_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(path_id);
        rng
    }
}

/// Positions at one observation time: `levels[k]` holds the k + 1 ascending
/// positions on level k + 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub levels: Vec<Vec<f64>>,
}

/// One simulated path observed at every configured time.
pub fn simulate_path(process: Process, cfg: &SimConfig, path_id: u64) -> Result<Vec<Snapshot>> {
    match process {
        Process::Dbm => simulate_dbm_path(cfg, path_id),
        Process::Warren => simulate_warren_path(cfg, path_id),
    }
}

fn simulate_dbm_path(cfg: &SimConfig, path_id: u64) -> Result<Vec<Snapshot>> {
    let mut rng = cfg.rng(path_id);
    let mut state = sample_gue(cfg.size, &mut rng)?;
    let mut now = cfg.times[0];
    let mut out = Vec::with_capacity(cfg.times.len());
    for &t in &cfg.times {
        if t > now {
            state = evolve_ou(&state, t - now, &mut rng)?;
            now = t;
        }
        out.push(Snapshot {
            time: t,
            levels: minor_eigenvalues(&state)?,
        });
    }
    Ok(out)
}

fn reflect_into(x: f64, lo: f64, hi: f64) -> f64 {
    let mut y = x;
    if y < lo {
        y = 2.0 * lo - y;
    }
    if y > hi {
        y = 2.0 * hi - y;
    }
    y.clamp(lo, hi)
}

/// Restores x^{(k)}_j ≤ x^{(k-1)}_j ≤ x^{(k)}_{j+1} level by level from the bottom.
fn restore_interlacing(levels: &mut [Vec<f64>]) {
    for k in 1..levels.len() {
        let (below, rest) = levels.split_at_mut(k);
        let lower = &below[k - 1];
        let cur = &mut rest[0];
        for j in 0..cur.len() {
            let lo = if j == 0 {
                f64::NEG_INFINITY
            } else {
                lower[j - 1]
            };
            let hi = if j == lower.len() {
                f64::INFINITY
            } else {
                lower[j]
            };
            cur[j] = reflect_into(cur[j], lo, hi);
        }
    }
}

fn simulate_warren_path(cfg: &SimConfig, path_id: u64) -> Result<Vec<Snapshot>> {
    let mut rng = cfg.rng(path_id);
    let mut levels: Vec<Vec<f64>> = (1..=cfg.size).map(|k| vec![0.0; k]).collect();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(cfg.times.len());
    for &t in &cfg.times {
        while now < t {
            let remaining = t - now;
            // avoid a sliver of a final step
            let dt = if remaining < 1.5 * cfg.euler_step {
                remaining
            } else {
                cfg.euler_step
            };
            let sd = (0.5 * dt).sqrt();
            for level in levels.iter_mut() {
                for x in level.iter_mut() {
                    *x += sd * normal(&mut rng);
                }
            }
            restore_interlacing(&mut levels);
            now = if dt == remaining { t } else { now + dt };
        }
        out.push(Snapshot {
            time: t,
            levels: levels.clone(),
        });
    }
    Ok(out)
}

/// True when every level interlaces with the one below it.
pub fn is_interlaced(levels: &[Vec<f64>]) -> bool {
    levels.windows(2).all(|w| {
        let (lo, hi) = (&w[0], &w[1]);
        (0..lo.len()).all(|j| hi[j] <= lo[j] && lo[j] <= hi[j + 1])
    })
}

/// All paths, in path order.
pub fn simulate(process: Process, cfg: &SimConfig) -> Result<Vec<Vec<Snapshot>>> {
    cfg.validate(process)?;
    (0..cfg.paths as u64)
        .into_par_iter()
        .map(|id| simulate_path(process, cfg, id))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationRow {
    pub path_id: u64,
    pub level: usize,
    pub time: f64,
    pub particle: usize,
    pub position: f64,
}

/// Flattens simulated paths into one row per particle and observation.
pub fn observation_rows(paths: &[Vec<Snapshot>]) -> Vec<ObservationRow> {
    let mut rows = Vec::new();
    for (id, path) in paths.iter().enumerate() {
        for snap in path {
            for (k, level) in snap.levels.iter().enumerate() {
                for (j, &x) in level.iter().enumerate() {
                    rows.push(ObservationRow {
                        path_id: id as u64,
                        level: k + 1,
                        time: snap.time,
                        particle: j + 1,
                        position: x,
                    });
                }
            }
        }
    }
    rows
}

/// Particle counts per bin on one (level, time) slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub paths: usize,
}

impl EmpiricalHistogram {
    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// counts / (paths · width).
    pub fn density(&self) -> Vec<f64> {
        (0..self.counts.len())
            .map(|i| self.counts[i] as f64 / (self.paths as f64 * self.width(i)))
            .collect()
    }

    /// √(density / (paths · width)).
    pub fn standard_error(&self) -> Vec<f64> {
        self.density()
            .iter()
            .enumerate()
            .map(|(i, d)| (d / (self.paths as f64 * self.width(i))).sqrt())
            .collect()
    }
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2
        || edges.iter().any(|e| !e.is_finite())
        || edges.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::domain(
            "edges",
            "need at least 2 finite, strictly increasing edges",
        ));
    }
    Ok(())
}

fn time_index(cfg: &SimConfig, t: f64) -> Result<usize> {
    cfg.times
        .iter()
        .position(|&s| s == t)
        .ok_or_else(|| Error::domain("time", format!("time {t} is not an observation time")))
}

fn bin_of(edges: &[f64], x: f64) -> Option<usize> {
    if x < edges[0] || x >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

/// Histogram of all particles on `level` at observation time `time`.
pub fn level_histogram(
    process: Process,
    cfg: &SimConfig,
    level: usize,
    time: f64,
    edges: &[f64],
) -> Result<EmpiricalHistogram> {
    cfg.validate(process)?;
    check_edges(edges)?;
    if level == 0 || level > cfg.size {
        return Err(Error::domain("level", "level must lie in 1..=size"));
    }
    let ti = time_index(cfg, time)?;
    let bins = edges.len() - 1;
    let counts = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|id| -> Result<Vec<u64>> {
            let path = simulate_path(process, cfg, id)?;
            let mut c = vec![0u64; bins];
            for &x in &path[ti].levels[level - 1] {
                if let Some(b) = bin_of(edges, x) {
                    c[b] += 1;
                }
            }
            Ok(c)
        })
        .try_reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(EmpiricalHistogram {
        edges: edges.to_vec(),
        counts,
        paths: cfg.paths,
    })
}

/// Samples of one particle's position at one observation, in path order.
pub fn particle_samples(
    process: Process,
    cfg: &SimConfig,
    level: usize,
    particle: usize,
    time: f64,
) -> Result<Vec<f64>> {
    cfg.validate(process)?;
    if level == 0 || level > cfg.size || particle == 0 || particle > level {
        return Err(Error::domain(
            "particle",
            "need 1 ≤ particle ≤ level ≤ size",
        ));
    }
    let ti = time_index(cfg, time)?;
    (0..cfg.paths as u64)
        .into_par_iter()
        .map(|id| Ok(simulate_path(process, cfg, id)?[ti].levels[level - 1][particle - 1]))
        .collect()
}

/// Fraction of paths whose snapshots all interlace.
pub fn interlacing_fraction(process: Process, cfg: &SimConfig) -> Result<f64> {
    cfg.validate(process)?;
    let good: u64 = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|id| -> Result<u64> {
            let path = simulate_path(process, cfg, id)?;
            Ok(path.iter().all(|s| is_interlaced(&s.levels)) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(good as f64 / cfg.paths as f64)
}

/// A correlation estimate with its standard error. With no hits the estimate
/// is 0 and `upper_bound` carries a one-sided 95% bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub hits: u64,
    pub paths: usize,
    pub upper_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationBins {
    pub points: Vec<SpaceTimePoint>,
    /// Bin width per point; bins are centred on the point positions.
    pub widths: Vec<f64>,
}

impl CorrelationBins {
    pub fn new(points: Vec<SpaceTimePoint>, widths: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != widths.len() {
            return Err(Error::domain(
                "widths",
                "need one bin width per query point",
            ));
        }
        if widths.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("widths", "bin widths must be positive"));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let (p, q) = (&points[i], &points[j]);
                if p.level == q.level && p.time == q.time {
                    let gap = (p.position - q.position).abs();
                    if gap < 0.5 * (widths[i] + widths[j]) {
                        return Err(Error::domain(
                            "widths",
                            "bins at one space-time location must not overlap",
                        ));
                    }
                }
            }
        }
        let nodes: Vec<(i64, f64)> = points.iter().map(|p| (p.level, p.time)).collect();
        let mut sorted = nodes.clone();
        sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        crate::correlation::validate_spacelike(&sorted)
            .map_err(|v| Error::domain("points", v.to_string()))?;
        Ok(CorrelationBins { points, widths })
    }
}

/// ρ̂_k from the per-path product of bin counts, divided by the product of widths.
pub fn empirical_correlation(
    process: Process,
    cfg: &SimConfig,
    bins: &CorrelationBins,
) -> Result<EmpiricalEstimate> {
    cfg.validate(process)?;
    let mut slots = Vec::with_capacity(bins.points.len());
    for p in &bins.points {
        if p.level < 1 || p.level as usize > cfg.size {
            return Err(Error::domain("level", "query level must lie in 1..=size"));
        }
        slots.push((p.level as usize - 1, time_index(cfg, p.time)?));
    }
    let (sum, sum_sq, hits) = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|id| -> Result<(u64, u64, u64)> {
            let path = simulate_path(process, cfg, id)?;
            let mut v: u64 = 1;
            for ((p, &(k, ti)), &w) in bins.points.iter().zip(&slots).zip(&bins.widths) {
                let lo = p.position - 0.5 * w;
                let hi = p.position + 0.5 * w;
                let c = path[ti].levels[k]
                    .iter()
                    .filter(|&&x| x >= lo && x < hi)
                    .count() as u64;
                v *= c;
            }
            Ok((v, v * v, (v > 0) as u64))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    let n = cfg.paths as f64;
    let volume: f64 = bins.widths.iter().product();
    if hits == 0 {
        return Ok(EmpiricalEstimate {
            estimate: 0.0,
            standard_error: 0.0,
            hits,
            paths: cfg.paths,
            upper_bound: Some(3.0 / (n * volume)),
        });
    }
    let mean = sum as f64 / n;
    let var = if cfg.paths > 1 {
        ((sum_sq as f64) - n * mean * mean).max(0.0) / (n - 1.0)
    } else {
        mean
    };
    Ok(EmpiricalEstimate {
        estimate: mean / volume,
        standard_error: (var / n).sqrt() / volume,
        hits,
        paths: cfg.paths,
        upper_bound: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationComparison {
    pub empirical: EmpiricalEstimate,
    pub analytic: f64,
    /// |empirical − analytic| in units of the standard error.
    pub z_score: f64,
}

/// Empirical ρ̂_k against det[K(p_i, p_j)] at the bin centres.
pub fn compare_correlation(
    process: Process,
    cfg: &SimConfig,
    bins: &CorrelationBins,
    kernel: Kernel,
) -> Result<CorrelationComparison> {
    let empirical = empirical_correlation(process, cfg, bins)?;
    let analytic = correlation_density(&CorrelationQuery::new(kernel, bins.points.clone())?)?.value;
    let err = match empirical.upper_bound {
        Some(b) => b,
        None => empirical.standard_error,
    };
    let z = if err > 0.0 {
        (empirical.estimate - analytic).abs() / err
    } else if empirical.estimate == analytic {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(CorrelationComparison {
        empirical,
        analytic,
        z_score: z,
    })
}

/// Fraction of GUE(n) draws with no eigenvalue in [lo, hi].
pub fn empirical_gap_probability(
    n: usize,
    interval: (f64, f64),
    paths: usize,
    seed: u64,
) -> Result<EmpiricalEstimate> {
    let cfg = SimConfig::new(n, vec![0.0], paths, seed);
    cfg.validate(Process::Dbm)?;
    let (lo, hi) = interval;
    if lo.is_nan() || hi.is_nan() || !(lo < hi) {
        return Err(Error::domain("interval", "need lower < upper"));
    }
    let empty: u64 = (0..paths as u64)
        .into_par_iter()
        .map(|id| -> Result<u64> {
            let mut rng = cfg.rng(id);
            let m = sample_gue(n, &mut rng)?;
            let ev = minor_eigenvalues(&m)?;
            Ok(ev[n - 1].iter().all(|&x| x < lo || x > hi) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = empty as f64 / paths as f64;
    Ok(EmpiricalEstimate {
        estimate: p,
        standard_error: (p * (1.0 - p) / paths as f64).sqrt(),
        hits: empty,
        paths,
        upper_bound: None,
    })
}

/// Δ(y)/Δ(x) · det[e^{-(x_i - y_j)²/t}] with Δ(x) = ∏_{i<j} (x_j − x_i).
pub fn nonintersecting_density(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return Err(Error::domain(
            "x",
            "x and y must be nonempty and of equal length",
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("t", "time must be positive"));
    }
    let vandermonde = |v: &[f64]| {
        let mut p = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                p *= v[j] - v[i];
            }
        }
        p
    };
    let dx = vandermonde(x);
    if dx == 0.0 {
        return Err(Error::domain("x", "coordinates of x must be distinct"));
    }
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = x[i] - y[j];
            m[i * n + j] = (-d * d / t).exp();
        }
    }
    Ok(vandermonde(y) / dx * crate::correlation::determinant(&m, n))
}

/// Kolmogorov–Smirnov statistic of `samples` against `cdf` with its
/// asymptotic p-value.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64)> {
    if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("samples", "need at least one non-NaN sample"));
    }
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let rn = n.sqrt();
    Ok((d, kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)))
}

/// P(K > λ) for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
