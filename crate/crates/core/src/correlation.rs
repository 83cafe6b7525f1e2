//! Space-like path validation, determinantal correlation functions,
//! gauge-invariant kernel comparison and gap probabilities.

use crate::error::{Error, Result};
use crate::minor_kernels::{Kernel, KernelFamily, SpaceTimePoint};
use crate::quadrature::gauss_legendre;
use crate::special_functions::HermiteTable;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    Empty,
    NonFinite,
    LevelIncreased,
    TimeDecreased,
}

/// First index at which a sequence of (level, time) pairs stops being space-like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacelikeViolation {
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for SpacelikeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Empty => "path is empty",
            ViolationKind::NonFinite => "time is not finite",
            ViolationKind::LevelIncreased => "level increased",
            ViolationKind::TimeDecreased => "time decreased",
        };
        write!(f, "{what} at index {}", self.index)
    }
}

/// Times must be nondecreasing and levels nonincreasing.
pub fn validate_spacelike(nodes: &[(i64, f64)]) -> std::result::Result<(), SpacelikeViolation> {
    if nodes.is_empty() {
        return Err(SpacelikeViolation {
            index: 0,
            kind: ViolationKind::Empty,
        });
    }
    for (i, &(_, t)) in nodes.iter().enumerate() {
        if !t.is_finite() {
            return Err(SpacelikeViolation {
                index: i,
                kind: ViolationKind::NonFinite,
            });
        }
    }
    for i in 1..nodes.len() {
        let (n0, t0) = nodes[i - 1];
        let (n1, t1) = nodes[i];
        if n1 > n0 {
            return Err(SpacelikeViolation {
                index: i,
                kind: ViolationKind::LevelIncreased,
            });
        }
        if t1 < t0 {
            return Err(SpacelikeViolation {
                index: i,
                kind: ViolationKind::TimeDecreased,
            });
        }
    }
    Ok(())
}

/// A validated space-like sequence of (level, time) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacelikePath {
    nodes: Vec<(i64, f64)>,
}

impl SpacelikePath {
    pub fn new(nodes: Vec<(i64, f64)>) -> Result<Self> {
        validate_spacelike(&nodes).map_err(|v| Error::domain("path", v.to_string()))?;
        if let Some(&(n, _)) = nodes.iter().find(|(n, _)| *n < 1) {
            return Err(Error::domain(
                "path",
                format!("levels must be positive, got {n}"),
            ));
        }
        Ok(SpacelikePath { nodes })
    }

    pub fn nodes(&self) -> &[(i64, f64)] {
        &self.nodes
    }
}

/// Points whose (level, time) pairs can be ordered into a space-like path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationQuery {
    pub kernel: Kernel,
    pub points: Vec<SpaceTimePoint>,
}

impl CorrelationQuery {
    pub fn new(kernel: Kernel, points: Vec<SpaceTimePoint>) -> Result<Self> {
        let q = CorrelationQuery { kernel, points };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.iter().any(|p| !p.position.is_finite()) {
            return Err(Error::domain("points", "positions must be finite"));
        }
        let mut proj: Vec<(i64, f64)> = self.points.iter().map(|p| (p.level, p.time)).collect();
        proj.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        validate_spacelike(&proj).map_err(|v| Error::domain("points", v.to_string()))?;
        if !matches!(self.kernel.family, KernelFamily::Bead(_)) && proj.iter().any(|(n, _)| *n < 1)
        {
            return Err(Error::domain("points", "levels must be positive"));
        }
        Ok(())
    }
}

/// Determinant by LU with partial pivoting; `m` is row-major k×k.
pub fn determinant(m: &[f64], k: usize) -> f64 {
    assert_eq!(m.len(), k * k);
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..k {
        let (piv, best) = (c..k)
            .map(|r| (r, a[r * k + c].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty range");
        if best == 0.0 {
            return 0.0;
        }
        if piv != c {
            for j in 0..k {
                a.swap(c * k + j, piv * k + j);
            }
            det = -det;
        }
        let d = a[c * k + c];
        det *= d;
        for r in c + 1..k {
            let f = a[r * k + c] / d;
            if f == 0.0 {
                continue;
            }
            for j in c + 1..k {
                a[r * k + j] = (-f).mul_add(a[c * k + j], a[r * k + j]);
            }
        }
    }
    det
}

/// A correlation value together with the raw determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub value: f64,
    pub raw: f64,
    /// A tiny negative determinant (roundoff) was reported as 0.
    pub clamped: bool,
}

pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// det[K(p_i, p_j)] over the query points.
pub fn correlation_density(q: &CorrelationQuery) -> Result<Density> {
    q.validate()?;
    let k = q.points.len();
    let mut m = vec![0.0; k * k];
    for (i, p) in q.points.iter().enumerate() {
        for (j, p2) in q.points.iter().enumerate() {
            m[i * k + j] = q.kernel.eval(p, p2)?;
        }
    }
    let raw = determinant(&m, k);
    if (-CLAMP_TOLERANCE..0.0).contains(&raw) {
        log::warn!("correlation determinant {raw:e} clamped to 0");
        return Ok(Density {
            value: 0.0,
            raw,
            clamped: true,
        });
    }
    Ok(Density {
        value: raw,
        raw,
        clamped: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub comparisons: usize,
}

/// Compares two kernels through quantities invariant under K ↦ f(p)/f(p')·K:
/// every k×k principal determinant over the points (k ≤ `max_order`) and
/// the products K(p, p')K(p', p).
pub fn gauge_compare<K1, K2>(
    k1: K1,
    k2: K2,
    points: &[SpaceTimePoint],
    tol: f64,
    max_order: usize,
) -> Result<GaugeReport>
where
    K1: Fn(&SpaceTimePoint, &SpaceTimePoint) -> Result<f64>,
    K2: Fn(&SpaceTimePoint, &SpaceTimePoint) -> Result<f64>,
{
    let n = points.len();
    let mut m1 = vec![0.0; n * n];
    let mut m2 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m1[i * n + j] = k1(&points[i], &points[j])?;
            m2[i * n + j] = k2(&points[i], &points[j])?;
        }
    }
    let mut max_dev = 0.0f64;
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let a = m1[i * n + j] * m1[j * n + i];
            let b = m2[i * n + j] * m2[j * n + i];
            max_dev = max_dev.max((a - b).abs());
            count += 1;
        }
    }
    let order = max_order.min(n);
    for size in 1..=order {
        for subset in subsets(n, size) {
            let pick = |m: &[f64]| {
                let mut s = vec![0.0; size * size];
                for (a, &i) in subset.iter().enumerate() {
                    for (b, &j) in subset.iter().enumerate() {
                        s[a * size + b] = m[i * n + j];
                    }
                }
                determinant(&s, size)
            };
            max_dev = max_dev.max((pick(&m1) - pick(&m2)).abs());
            count += 1;
        }
    }
    Ok(GaugeReport {
        pass: max_dev <= tol,
        max_deviation: max_dev,
        comparisons: count,
    })
}

/// All size-k subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Nyström nodes and weights for an interval whose ends may be infinite.
fn interval_rule(lo: f64, hi: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let r = crate::quadrature::gauss_legendre_on(nodes, lo, hi);
            (r.nodes, r.weights)
        }
        (true, false) | (false, true) => {
            let base = gauss_legendre(nodes);
            let sign = if lo.is_finite() { 1.0 } else { -1.0 };
            let end = if lo.is_finite() { lo } else { hi };
            let mut xs = Vec::with_capacity(nodes);
            let mut ws = Vec::with_capacity(nodes);
            for (&z, &w) in base.nodes.iter().zip(&base.weights) {
                let u = 0.5 * (z + 1.0);
                let s = 1.0 - u;
                xs.push(end + sign * u / s);
                ws.push(0.5 * w / (s * s));
            }
            (xs, ws)
        }
        (false, false) => {
            let base = gauss_legendre(nodes);
            let mut xs = Vec::with_capacity(nodes);
            let mut ws = Vec::with_capacity(nodes);
            for (&z, &w) in base.nodes.iter().zip(&base.weights) {
                let s = 1.0 - z * z;
                xs.push(z / s);
                ws.push(w * (1.0 + z * z) / (s * s));
            }
            (xs, ws)
        }
    }
}

/// Probability that level n at time t has no particle in the interval,
/// det(I - K̃) with K̃_ij = √w_i K(x_i, x_j) √w_j.
pub fn gap_probability(n: i64, t: f64, interval: (f64, f64), nodes: usize) -> Result<f64> {
    if nodes < 4 {
        return Err(Error::Configuration(
            "gap probability needs at least 4 nodes".into(),
        ));
    }
    if n < 1 {
        return Err(Error::domain("n", "level must be at least 1"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("t", "time must be finite and nonnegative"));
    }
    let (lo, hi) = interval;
    if lo.is_nan() || hi.is_nan() || !(lo < hi) {
        return Err(Error::domain("interval", "need lower < upper"));
    }
    let (xs, ws) = interval_rule(lo, hi, nodes);
    // fixed-slice kernel Σ_{k<n} ψ_k(x) ψ_k(y), already symmetric
    let psi: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            let t = HermiteTable::new(n as usize - 1, x);
            (0..n).map(|k| t.function(k)).collect()
        })
        .collect();
    let m = xs.len();
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let kij: f64 = psi[i].iter().zip(&psi[j]).map(|(u, v)| u * v).sum();
            let v = ws[i].sqrt() * kij * ws[j].sqrt();
            a[i * m + j] = if i == j { 1.0 - v } else { -v };
        }
    }
    Ok(determinant(&a, m))
}
