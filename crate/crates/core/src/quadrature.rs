//! Real-line quadrature: Gauss–Legendre and Gauss–Hermite rules, and an
//! adaptive Gauss–Kronrod integrator for finite and infinite intervals.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Nodes and weights of a fixed quadrature rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                dp = legendre_with_derivative(n, z).1;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Rule {
    let base = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Rule {
        nodes: base.nodes.iter().map(|&z| mid + half * z).collect(),
        weights: base.weights.iter().map(|&w| w * half).collect(),
    }
}

/// Gauss–Hermite rule for the weight e^{-x²}.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n >= 1);
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    let mut rule_nodes = vec![0.0; n];
    let mut rule_weights = vec![0.0; n];
    for i in 0..m {
        rule_nodes[n - 1 - i] = nodes[i];
        rule_nodes[i] = -nodes[i];
        rule_weights[n - 1 - i] = weights[i];
        rule_weights[i] = weights[i];
    }
    Rule {
        nodes: rule_nodes,
        weights: rule_weights,
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    ((kron * h), ((kron - gauss) * h).abs())
}

#[derive(PartialEq)]
struct Piece {
    err: f64,
    a: f64,
    b: f64,
    val: f64,
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Value and error estimate of an adaptive integral.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            abs_tol: 1e-11,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl Adaptive {
    /// Integrates `f` over [a, b]; either end may be infinite.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<Integral> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
            });
        }
        if a > b {
            let r = self.integrate(f, b, a)?;
            return Ok(Integral {
                value: -r.value,
                error: r.error,
            });
        }
        match (a.is_finite(), b.is_finite()) {
            (true, true) => self.finite(&mut f, a, b),
            (true, false) => {
                let mut g = |u: f64| {
                    let s = 1.0 - u;
                    if s <= 0.0 {
                        0.0
                    } else {
                        f(a + u / s) / (s * s)
                    }
                };
                self.finite(&mut g, 0.0, 1.0)
            }
            (false, true) => {
                let mut g = |u: f64| {
                    let s = 1.0 - u;
                    if s <= 0.0 {
                        0.0
                    } else {
                        f(b - u / s) / (s * s)
                    }
                };
                self.finite(&mut g, 0.0, 1.0)
            }
            (false, false) => {
                let mut g = |u: f64| {
                    let s = 1.0 - u * u;
                    if s <= 0.0 {
                        0.0
                    } else {
                        f(u / s) * (1.0 + u * u) / (s * s)
                    }
                };
                self.finite(&mut g, -1.0, 1.0)
            }
        }
    }

    /// Integrates over [a, b] split at the given interior break points (kinks).
    pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> Result<Integral> {
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
        pts.sort_by(|x, y| x.total_cmp(y));
        pts.dedup();
        let mut edges = vec![a];
        edges.extend(pts);
        edges.push(b);
        let mut total = Integral {
            value: 0.0,
            error: 0.0,
        };
        for w in edges.windows(2) {
            let r = self.integrate(&mut f, w[0], w[1])?;
            total.value += r.value;
            total.error += r.error;
        }
        Ok(total)
    }

    fn finite(&self, f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> Result<Integral> {
        let (v, e) = gk15(f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Piece {
            err: e,
            a,
            b,
            val: v,
        });
        let mut total = v;
        let mut total_err = e;
        while total_err > self.abs_tol.max(self.rel_tol * total.abs()) {
            if heap.len() >= self.max_intervals {
                return Err(Error::Convergence {
                    partial_sum: total,
                    tail_bound: total_err,
                    terms: heap.len(),
                });
            }
            let p = heap.pop().expect("heap never empty");
            let m = 0.5 * (p.a + p.b);
            if m <= p.a || m >= p.b {
                // interval cannot be split further in floating point
                heap.push(Piece { err: 0.0, ..p });
                total_err = heap.iter().map(|q| q.err).sum();
                if total_err == 0.0 {
                    break;
                }
                continue;
            }
            let (v1, e1) = gk15(f, p.a, m);
            let (v2, e2) = gk15(f, m, p.b);
            total += v1 + v2 - p.val;
            heap.push(Piece {
                err: e1,
                a: p.a,
                b: m,
                val: v1,
            });
            heap.push(Piece {
                err: e2,
                a: m,
                b: p.b,
                val: v2,
            });
            total_err = heap.iter().map(|q| q.err).sum();
        }
        let value: f64 = heap.iter().map(|q| q.val).sum();
        Ok(Integral {
            value,
            error: total_err,
        })
    }
}

/// Adaptive integral with default tolerances.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Adaptive::default().integrate(f, a, b).map(|r| r.value)
}
