//! Closed forms and brute-force enumerations used as independent references.

use dyson_minor::correlation::subsets;
use dyson_minor::quadrature::gauss_legendre_on;
use dyson_minor::special_functions::{hermite_eval, HermiteBasis};
use dyson_minor::SpaceTimePoint;
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Σ_{k<n} h*_k(x)² e^{-x²} from the explicit low-degree polynomials.
pub fn level_density(n: usize, x: f64) -> f64 {
    let physicist = [1.0, 2.0 * x, 4.0 * x * x - 2.0, 8.0 * x.powi(3) - 12.0 * x];
    let norms = [1.0, 2.0, 8.0, 48.0];
    (0..n)
        .map(|k| physicist[k] * physicist[k] / norms[k])
        .sum::<f64>()
        * (-x * x).exp()
        / PI.sqrt()
}

/// Σ_{k<n} e^{k(t−t')} h_k h_k w − 1{t<t'} p*_{t'−t}, with the transition
/// density expanded so that the t < t' branch is −Σ_{k≥n} e^{−k(t'−t)} h_k h_k w.
pub fn extended_ou(n: i64, p: &SpaceTimePoint, p2: &SpaceTimePoint) -> f64 {
    let top = n as usize + 400;
    let b = HermiteBasis::star(top);
    let w = (-p2.position * p2.position).exp();
    let gap = p.time - p2.time;
    let term = |k: i64| {
        ((k as f64) * gap).exp()
            * hermite_eval(&b, k, p.position).unwrap()
            * hermite_eval(&b, k, p2.position).unwrap()
            * w
    };
    if gap >= 0.0 {
        (0..n).map(term).sum()
    } else {
        -(n..top as i64).map(term).sum::<f64>()
    }
}

/// ρ₂((2, t, x), (1, t, y)) of GUE(2): the top-left entry is uniform between
/// the two eigenvalues, whose joint density is (x − z)² e^{−x²−z²}/π.
pub fn gue2_cross_level(x: f64, y: f64) -> f64 {
    let half_root_pi = PI.sqrt() / 2.0;
    let inner = if y > x {
        (-y * y).exp() / 2.0 - x * half_root_pi * libm::erfc(y)
    } else {
        (-y * y).exp() / 2.0 + x * half_root_pi * libm::erfc(-y)
    };
    2.0 / PI * (-x * x).exp() * inner
}

/// Distribution function of the largest GUE(2) eigenvalue.
pub fn gue2_top_cdf(s: f64) -> f64 {
    let sp = PI.sqrt();
    let g = (-s * s).exp();
    let a0 = 0.5 * sp * libm::erfc(-s);
    let a1 = -0.5 * g;
    let a2 = 0.25 * sp * libm::erfc(-s) - 0.5 * s * g;
    2.0 * (a2 * a0 - a1 * a1) / PI
}

/// Mean of `f` over [a, b] by 16-point Gauss–Legendre.
pub fn bin_average(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let r = gauss_legendre_on(16, a, b);
    r.nodes
        .iter()
        .zip(&r.weights)
        .map(|(x, w)| w * f(*x))
        .sum::<f64>()
        / (b - a)
}

pub fn principal(m: &DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]).determinant()
}

/// Pr[X ⊆ config | phantom indices all present] by summing the L-measure
/// over every configuration of the retained indices.
pub fn brute_force_projection(l: &DMatrix<f64>, retained: &[usize], x: &[usize]) -> f64 {
    let phantom: Vec<usize> = (0..l.nrows()).filter(|i| !retained.contains(i)).collect();
    let mut total = 0.0;
    let mut hit = 0.0;
    for size in 0..=retained.len() {
        for pick in subsets(retained.len(), size) {
            let mut y: Vec<usize> = pick.iter().map(|&i| retained[i]).collect();
            let contains = x.iter().all(|i| y.contains(i));
            y.extend(&phantom);
            y.sort();
            let w = principal(l, &y);
            total += w;
            if contains {
                hit += w;
            }
        }
    }
    hit / total
}
