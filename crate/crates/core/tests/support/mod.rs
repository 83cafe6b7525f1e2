#![allow(dead_code)]

pub mod identities;
pub mod oracles;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Integer coefficients of the physicists' Hermite polynomial H_n from the
/// Rodrigues form: H_n = (-1)^n e^{x²} Dⁿ e^{-x²}, with Dⁿ e^{-x²} = P_n e^{-x²}
/// and P_{n+1} = P_n' - 2x P_n.
pub fn rodrigues_coefficients(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(1)];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            if k > 0 {
                next[k - 1] += c * k;
            }
            next[k + 1] -= c * 2;
        }
        p = next;
    }
    if n % 2 == 1 {
        p.iter_mut().for_each(|c| *c = -c.clone());
    }
    p
}

/// h*_n(num/den) from the exact value of den^n H_n(num/den).
pub fn star_hermite_exact(n: usize, num: i64, den: i64) -> f64 {
    let coeffs = rodrigues_coefficients(n);
    let mut acc = BigInt::zero();
    for (k, c) in coeffs.iter().enumerate() {
        acc += c * BigInt::from(num).pow(k as u32) * BigInt::from(den).pow((n - k) as u32);
    }
    let scaled = acc.to_f64().expect("fits in f64");
    let ln_norm = 0.5 * (n as f64 * 2f64.ln() + ln_factorial(n) + 0.5 * std::f64::consts::PI.ln());
    scaled / (den as f64).powi(n as i32) * (-ln_norm).exp()
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(a.abs())
}
