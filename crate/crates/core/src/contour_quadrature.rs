//! Quadrature on circles around the origin, vertical lines and straight
//! segments in the complex plane, and the double contour integral shared by
//! the Dyson and Warren kernels.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ContourShape {
    Circle { radius: f64 },
    VerticalLine { real_part: f64, half_height: f64 },
    Segment { start: Complex64, end: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub shape: ContourShape,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn circle(radius: f64, nodes: usize) -> Self {
        ContourSpec {
            shape: ContourShape::Circle { radius },
            nodes,
        }
    }

    pub fn vertical(real_part: f64, half_height: f64, nodes: usize) -> Self {
        ContourSpec {
            shape: ContourShape::VerticalLine {
                real_part,
                half_height,
            },
            nodes,
        }
    }

    pub fn segment(start: Complex64, end: Complex64, nodes: usize) -> Self {
        ContourSpec {
            shape: ContourShape::Segment { start, end },
            nodes,
        }
    }
}

/// Nodes and weights (dz included) of a discretized contour.
struct Discretization {
    points: Vec<Complex64>,
    weights: Vec<Complex64>,
}

fn circle_nodes(radius: f64, nodes: usize) -> Discretization {
    let h = 2.0 * PI / nodes as f64;
    let mut points = Vec::with_capacity(nodes);
    let mut weights = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let z = Complex64::from_polar(radius, h * j as f64);
        points.push(z);
        weights.push(Complex64::i() * z * h);
    }
    Discretization { points, weights }
}

/// Trapezoid on [c - iY, c + iY] with `intervals` panels (intervals + 1 points).
fn line_nodes(c: f64, half_height: f64, intervals: usize) -> Discretization {
    let h = 2.0 * half_height / intervals as f64;
    let mut points = Vec::with_capacity(intervals + 1);
    let mut weights = Vec::with_capacity(intervals + 1);
    for j in 0..=intervals {
        let y = -half_height + h * j as f64;
        let w = if j == 0 || j == intervals { 0.5 * h } else { h };
        points.push(Complex64::new(c, y));
        weights.push(Complex64::new(0.0, w));
    }
    Discretization { points, weights }
}

/// ∮ f(u) du over a positively oriented circle, trapezoid rule.
pub fn integrate_circle<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &ContourSpec,
) -> Result<Complex64> {
    let ContourShape::Circle { radius } = spec.shape else {
        return Err(Error::Configuration(
            "integrate_circle needs a circle".into(),
        ));
    };
    if spec.nodes < 8 {
        return Err(Error::Configuration(
            "circle quadrature needs at least 8 nodes".into(),
        ));
    }
    if !(radius > 0.0) {
        return Err(Error::Configuration(
            "circle radius must be positive".into(),
        ));
    }
    let d = circle_nodes(radius, spec.nodes);
    Ok(d.points
        .iter()
        .zip(&d.weights)
        .map(|(&z, &w)| f(z) * w)
        .sum())
}

/// Relative tolerance for the neglected tail of a truncated vertical line.
pub const LINE_TAIL_TOLERANCE: f64 = 1e-10;

/// ∫ f(v) dv along Re v = c from -i∞ to +i∞, truncated at |Im v| = Y.
pub fn integrate_vertical<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &ContourSpec,
) -> Result<Complex64> {
    let ContourShape::VerticalLine {
        real_part,
        half_height,
    } = spec.shape
    else {
        return Err(Error::Configuration(
            "integrate_vertical needs a vertical line".into(),
        ));
    };
    if spec.nodes < 8 {
        return Err(Error::Configuration(
            "line quadrature needs at least 8 nodes".into(),
        ));
    }
    if !(half_height > 0.0) {
        return Err(Error::Configuration("half height must be positive".into()));
    }
    let d = line_nodes(real_part, half_height, spec.nodes);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (&z, &w) in d.points.iter().zip(&d.weights) {
        let v = f(z) * w;
        mass += v.norm();
        sum += v;
    }
    // Gaussian-type tail beyond Y: ∫_Y^∞ e^{-y²} ≲ e^{-Y²}/(2Y)
    let top = f(Complex64::new(real_part, half_height)).norm();
    let bottom = f(Complex64::new(real_part, -half_height)).norm();
    let tail = (top + bottom) / (2.0 * half_height);
    let tolerance = LINE_TAIL_TOLERANCE * sum.norm().max(1e-300) + 1e-15 * mass;
    if tail > tolerance {
        return Err(Error::Truncation { tail, tolerance });
    }
    Ok(sum)
}

/// ∫ f(u) du along the straight segment, Gauss–Legendre.
pub fn integrate_segment<F: Fn(Complex64) -> Complex64>(
    f: F,
    spec: &ContourSpec,
) -> Result<Complex64> {
    let ContourShape::Segment { start, end } = spec.shape else {
        return Err(Error::Configuration(
            "integrate_segment needs a segment".into(),
        ));
    };
    if spec.nodes < 4 {
        return Err(Error::Configuration(
            "segment quadrature needs at least 4 nodes".into(),
        ));
    }
    let rule = gauss_legendre(spec.nodes);
    let mid = (start + end) * 0.5;
    let half = (end - start) * 0.5;
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| f(mid + half * s) * (half * w))
        .sum())
}

/// The pair of saddle points a ± i√(1-a²) on the unit circle.
pub fn saddle_points(a: f64) -> Result<(Complex64, Complex64)> {
    if !(a > -1.0 && a < 1.0) {
        return Err(Error::domain("a", "bead parameter must lie in (-1, 1)"));
    }
    let b = (1.0 - a * a).sqrt();
    Ok((Complex64::new(a, -b), Complex64::new(a, b)))
}

/// Overrides for the automatic contour sizing of [`double_contour`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleContourOptions {
    pub circle_radius: Option<f64>,
    pub line_abscissa: Option<f64>,
    pub circle_nodes: usize,
    pub line_nodes: usize,
    /// Relative error below which no node doubling is attempted.
    pub tolerance: f64,
}

impl Default for DoubleContourOptions {
    fn default() -> Self {
        DoubleContourOptions {
            circle_radius: None,
            line_abscissa: None,
            circle_nodes: 256,
            line_nodes: 512,
            tolerance: 1e-11,
        }
    }
}

/// Result of the double contour integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub circle: ContourSpec,
    pub line: ContourSpec,
}

const LINE_EPS: f64 = 1e-14;

/// (2/(2πi)²) ∮_γ du ∫_Γ dv v^{n'} u^{-n} e^{-u² + 2u x s₁ + v² - 2v x' s₂} / (decay·v - u)
/// with `scale_pair` = (s₁, s₂).
pub fn double_contour(
    n: i64,
    n2: i64,
    x: f64,
    x2: f64,
    decay: f64,
    scale_pair: (f64, f64),
) -> Result<ContourValue> {
    double_contour_with(
        n,
        n2,
        x,
        x2,
        decay,
        scale_pair,
        &DoubleContourOptions::default(),
    )
}

pub fn double_contour_with(
    n: i64,
    n2: i64,
    x: f64,
    x2: f64,
    decay: f64,
    scale_pair: (f64, f64),
    opts: &DoubleContourOptions,
) -> Result<ContourValue> {
    if !(decay > 0.0) || !decay.is_finite() {
        return Err(Error::Configuration(
            "decay must be positive and finite".into(),
        ));
    }
    if opts.circle_nodes < 8 || opts.line_nodes < 8 {
        return Err(Error::Configuration(
            "contours need at least 8 nodes".into(),
        ));
    }
    let a = x * scale_pair.0;
    let b = x2 * scale_pair.1;
    let c = opts
        .line_abscissa
        .unwrap_or_else(|| best_abscissa(n, n2, a, b, decay));
    let r = opts
        .circle_radius
        .unwrap_or(CIRCLE_FRACTION * c * decay.min(1.0));
    if !(c > 0.0) || !(r > 0.0) {
        return Err(Error::Configuration(
            "contour sizes must be positive".into(),
        ));
    }
    // every v on the line has |v| ≥ c, so r < decay·c keeps |u| < decay·|v|
    if r >= decay * c {
        return Err(Error::Configuration(format!(
            "contour separation violated: circle radius {r} must be below decay·abscissa {}",
            decay * c
        )));
    }
    let y = line_half_height(c, n2);

    let circle_n = opts.circle_nodes + opts.circle_nodes % 2;
    let line_n = opts.line_nodes + opts.line_nodes % 2;
    let (value, est) = tensor_sum(n, n2, a, b, decay, r, c, y, circle_n, line_n);
    let mut result = ContourValue {
        value,
        error_estimate: est,
        circle: ContourSpec::circle(r, circle_n),
        line: ContourSpec::vertical(c, y, line_n),
    };
    if est > opts.tolerance * value.norm() {
        let (v2, _) = tensor_sum(n, n2, a, b, decay, r, c, y, 2 * circle_n, 2 * line_n);
        result = ContourValue {
            value: v2,
            error_estimate: (v2 - value).norm(),
            circle: ContourSpec::circle(r, 2 * circle_n),
            line: ContourSpec::vertical(c, y, 2 * line_n),
        };
    }
    Ok(result)
}

const CIRCLE_FRACTION: f64 = 0.6;

/// Abscissa minimizing a bound on the largest integrand magnitude, which
/// sets the roundoff floor: |v^{n'} e^{v² − 2bv}| on the line peaks at
/// v = c, |u^{-n} e^{-u² + 2au}| on the circle is at most
/// r^{-n} e^{r² + 2|a|r}, and the Cauchy denominator is at least decay·c − r.
fn best_abscissa(n: i64, n2: i64, a: f64, b: f64, decay: f64) -> f64 {
    let d = decay.min(1.0);
    let cost = |c: f64| {
        let r = CIRCLE_FRACTION * c * d;
        c * c - 2.0 * b * c + n2 as f64 * c.ln() - n as f64 * r.ln() + r * r + 2.0 * a.abs() * r
            - (decay * c - r).ln()
    };
    let mut best = (f64::INFINITY, 1.0);
    let mut c = 0.5;
    while c <= 8.0 {
        let v = cost(c);
        if v < best.0 {
            best = (v, c);
        }
        c += 0.01;
    }
    best.1
}

/// Half height of the truncated line: the larger of √(c² + ln(1/ε)) + 2 and
/// the height where |v^{n'} e^{v²}| has fallen by ε relative to the real axis.
fn line_half_height(c: f64, n2: i64) -> f64 {
    let target = (1.0 / LINE_EPS).ln();
    let k = n2.max(0) as f64;
    let mut y = target.sqrt();
    while y * y - 0.5 * k * (1.0 + y * y / (c * c)).ln() < target {
        y += 0.25;
    }
    (y + 2.0).max((c * c + target).sqrt() + 2.0)
}

#[allow(clippy::too_many_arguments)]
fn tensor_sum(
    n: i64,
    n2: i64,
    a: f64,
    b: f64,
    decay: f64,
    r: f64,
    c: f64,
    y: f64,
    circle_n: usize,
    line_n: usize,
) -> (Complex64, f64) {
    let circle = circle_nodes(r, circle_n);
    let line = line_nodes(c, y, line_n);
    let two_a = Complex64::new(2.0 * a, 0.0);
    let two_b = Complex64::new(2.0 * b, 0.0);
    let gu: Vec<Complex64> = circle
        .points
        .iter()
        .zip(&circle.weights)
        .map(|(&u, &w)| (-u * u + two_a * u).exp() * u.powi(-(n as i32)) * w)
        .collect();
    let gv: Vec<Complex64> = line
        .points
        .iter()
        .zip(&line.weights)
        .map(|(&v, &w)| (v * v - two_b * v).exp() * v.powi(n2 as i32) * w)
        .collect();
    let dv: Vec<Complex64> = line.points.iter().map(|&v| v * decay).collect();

    let mut full = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (i, (&u, &g)) in circle.points.iter().zip(&gu).enumerate() {
        let mut inner = Complex64::new(0.0, 0.0);
        let mut inner_coarse = Complex64::new(0.0, 0.0);
        for (j, (&h, &qv)) in gv.iter().zip(&dv).enumerate() {
            let term = h / (qv - u);
            mass += (g * term).norm();
            inner += term;
            if j % 2 == 0 {
                // every other node with doubled weight is the coarse trapezoid
                inner_coarse += term * 2.0;
            }
        }
        full += g * inner;
        if i % 2 == 0 {
            coarse += g * 2.0 * inner_coarse;
        }
    }
    let prefactor =
        Complex64::new(2.0, 0.0) / (Complex64::new(0.0, 2.0 * PI) * Complex64::new(0.0, 2.0 * PI));
    let full = full * prefactor;
    let coarse = coarse * prefactor;
    let est = (full - coarse)
        .norm()
        .max(8.0 * f64::EPSILON * mass * prefactor.norm());
    (full, est)
}
