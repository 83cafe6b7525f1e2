//! Left and right sides of the Hermite convolution identities for both
//! scale families, with the left sides integrated numerically.

use dyson_minor::minor_kernels::step_expansion;
use dyson_minor::quadrature::Adaptive;
use dyson_minor::special_functions::{
    heaviside_power, hermite_eval, transition_density, ScaleAlgebra,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FAMILIES: [ScaleAlgebra; 2] = [ScaleAlgebra::Star, ScaleAlgebra::Warren];

const INF: f64 = f64::INFINITY;

fn quad(f: impl FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
    let rule = Adaptive {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 8000,
    };
    rule.integrate_with_breaks(f, a, b, breaks)
        .expect("quadrature converges")
        .value
}

fn h(fam: ScaleAlgebra, n: i64, t: f64, x: f64) -> f64 {
    let b = fam.basis(n.max(0) as usize, t).unwrap();
    hermite_eval(&b, n, x).unwrap()
}

fn w(fam: ScaleAlgebra, t: f64, x: f64) -> f64 {
    fam.basis(0, t).unwrap().weight(x)
}

fn p(fam: ScaleAlgebra, t: f64, x: f64, y: f64) -> f64 {
    transition_density(fam.transition(), t, x, y).unwrap()
}

fn hv(n: i64, x: f64) -> f64 {
    heaviside_power(n, x).unwrap()
}

/// Break points spreading a Gaussian-type integrand centred at `c` with
/// scale `sd` over a few panels.
fn around(c: f64, sd: f64) -> Vec<f64> {
    (-4..=4).map(|k| c + k as f64 * 2.0 * sd).collect()
}

/// ∫ h_n^{(t)} w^{(t)}(x) p_s(x, y) dx against q^{n+δ} h_n^{(t+s)} w^{(t+s)}(y),
/// δ = 1 for the Warren family.
pub fn time_step(fam: ScaleAlgebra, n: i64, t: f64, s: f64, y: f64) -> (f64, f64) {
    let mut br = around(0.0, t.max(1.0));
    br.extend(around(y, s.sqrt()));
    let lhs = quad(
        |x| h(fam, n, t, x) * w(fam, t, x) * p(fam, s, x, y),
        -INF,
        INF,
        &br,
    );
    let q = fam.q(t, s).unwrap();
    let power = match fam {
        ScaleAlgebra::Star => n,
        ScaleAlgebra::Warren => n + 1,
    };
    let rhs = q.powi(power as i32) * h(fam, n, t + s, y) * w(fam, t + s, y);
    (lhs, rhs)
}

/// ∫ h_{n+1} w (x) H(x − y) dx against σ (n+1)^{-1/2} h_n w (y).
pub fn space_step(fam: ScaleAlgebra, n: i64, t: f64, y: f64) -> (f64, f64) {
    let br = around(0.0, t.max(1.0));
    let lhs = quad(|x| h(fam, n + 1, t, x) * w(fam, t, x), y, INF, &br);
    let rhs = fam.sigma(t).unwrap() / ((n + 1) as f64).sqrt() * h(fam, n, t, y) * w(fam, t, y);
    (lhs, rhs)
}

/// ∫ H^n(x − y) H(y − z) dy against H^{n+1}(x − z).
pub fn space_step_back(n: i64, x: f64, z: f64) -> (f64, f64) {
    let lhs = if x > z {
        quad(|y| hv(n, x - y), z, x, &[])
    } else {
        0.0
    };
    (lhs, hv(n + 1, x - z))
}

/// ∫ p_t(x, y) p_s(y, z) dy against p_{t+s}(x, z).
pub fn time_semigroup(fam: ScaleAlgebra, t: f64, s: f64, x: f64, z: f64) -> (f64, f64) {
    let mut br = around(x, t.sqrt());
    br.extend(around(z, s.sqrt()));
    let lhs = quad(|y| p(fam, t, x, y) * p(fam, s, y, z), -INF, INF, &br);
    (lhs, p(fam, t + s, x, z))
}

/// ∫ p_t(x, y) H^n(y − z) dy against r_t^n ∫ H^n(x − y) p_t(y, z) dy.
pub fn time_step_back(fam: ScaleAlgebra, n: i64, t: f64, x: f64, z: f64) -> (f64, f64) {
    let lhs = quad(
        |y| p(fam, t, x, y) * hv(n, y - z),
        z,
        INF,
        &around(x, t.sqrt()),
    );
    let right = quad(
        |y| hv(n, x - y) * p(fam, t, y, z),
        -INF,
        x,
        &around(z, t.sqrt()),
    );
    (lhs, fam.r(t).powi(n as i32) * right)
}

/// ∫ h_n h_m w against √2 σ δ_nm.
pub fn orthogonality(fam: ScaleAlgebra, n: i64, m: i64, t: f64) -> (f64, f64) {
    let lhs = quad(
        |x| h(fam, n, t, x) * h(fam, m, t, x) * w(fam, t, x),
        -INF,
        INF,
        &around(0.0, t.max(1.0)),
    );
    let rhs = if n == m {
        2f64.sqrt() * fam.sigma(t).unwrap()
    } else {
        0.0
    };
    (lhs, rhs)
}

/// p_t(x + y, z) against p_t(x, z − r_t y).
pub fn space_shift(fam: ScaleAlgebra, t: f64, x: f64, y: f64, z: f64) -> (f64, f64) {
    (p(fam, t, x + y, z), p(fam, t, x, z - fam.r(t) * y))
}

pub fn q_composition(fam: ScaleAlgebra, t1: f64, t2: f64, t3: f64) -> (f64, f64) {
    let lhs = fam.q(t1, t2 - t1).unwrap() * fam.q(t2, t3 - t2).unwrap();
    (lhs, fam.q(t1, t3 - t1).unwrap())
}

pub fn r_composition(fam: ScaleAlgebra, t: f64, s: f64) -> (f64, f64) {
    (fam.r(t) * fam.r(s), fam.r(t + s))
}

/// q^{(s)}_{t−s}/σ(s) against r_{t−s}/σ(t).
pub fn qr_composition(fam: ScaleAlgebra, s: f64, t: f64) -> (f64, f64) {
    let lhs = fam.q(s, t - s).unwrap() / fam.sigma(s).unwrap();
    (lhs, fam.r(t - s) / fam.sigma(t).unwrap())
}

/// step_expansion, truncated well past the q^k decay for t − s ≥ 0.1, against the quadrature of ∫ H^n(x − y) p_{t−s}(y, z) dy.
pub fn step_expansion_check(
    fam: ScaleAlgebra,
    n: i64,
    s: f64,
    t: f64,
    x: f64,
    z: f64,
) -> (f64, f64) {
    let series = step_expansion(fam, n, s, t, x, z, 1000).unwrap();
    let sd = (t - s).sqrt();
    let quadrature = quad(
        |y| hv(n, x - y) * p(fam, t - s, y, z),
        -INF,
        x,
        &around(z, sd),
    );
    (quadrature, series)
}

pub fn deviation((lhs, rhs): (f64, f64)) -> f64 {
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub family: ScaleAlgebra,
    pub tuples: usize,
    pub max_deviation: f64,
}

fn sweep(
    name: &'static str,
    fam: ScaleAlgebra,
    tuples: usize,
    rng: &mut ChaCha8Rng,
    mut one: impl FnMut(&mut ChaCha8Rng) -> (f64, f64),
) -> IdentityOutcome {
    let max_deviation = (0..tuples).map(|_| deviation(one(rng))).fold(0.0, f64::max);
    IdentityOutcome {
        name,
        family: fam,
        tuples,
        max_deviation,
    }
}

/// Every identity for both families at `tuples` random parameter draws.
pub fn identity_suite(seed: u64, tuples: usize) -> Vec<IdentityOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for fam in FAMILIES {
        out.push(sweep("time-step", fam, tuples, &mut rng, |r| {
            time_step(
                fam,
                r.gen_range(0..=6),
                r.gen_range(0.2..2.0),
                r.gen_range(0.1..1.5),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("space-step", fam, tuples, &mut rng, |r| {
            space_step(
                fam,
                r.gen_range(0..=6),
                r.gen_range(0.2..2.0),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("space-step-back", fam, tuples, &mut rng, |r| {
            space_step_back(
                r.gen_range(1..=5),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("time-semigroup", fam, tuples, &mut rng, |r| {
            time_semigroup(
                fam,
                r.gen_range(0.1..1.5),
                r.gen_range(0.1..1.5),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("time-step-back", fam, tuples, &mut rng, |r| {
            time_step_back(
                fam,
                r.gen_range(1..=4),
                r.gen_range(0.1..1.5),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("orthogonality", fam, tuples, &mut rng, |r| {
            orthogonality(
                fam,
                r.gen_range(0..=8),
                r.gen_range(0..=8),
                r.gen_range(0.2..2.0),
            )
        }));
        out.push(sweep("space-shift", fam, tuples, &mut rng, |r| {
            space_shift(
                fam,
                r.gen_range(0.1..2.0),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        }));
        out.push(sweep("q-composition", fam, tuples, &mut rng, |r| {
            let t1: f64 = r.gen_range(0.1..2.0);
            let t2 = t1 + r.gen_range(0.0..2.0);
            let t3 = t2 + r.gen_range(0.0..2.0);
            q_composition(fam, t1, t2, t3)
        }));
        out.push(sweep("r-composition", fam, tuples, &mut rng, |r| {
            r_composition(fam, r.gen_range(0.0..3.0), r.gen_range(0.0..3.0))
        }));
        out.push(sweep("qr-composition", fam, tuples, &mut rng, |r| {
            let s: f64 = r.gen_range(0.1..2.0);
            qr_composition(fam, s, s + r.gen_range(0.01..2.0))
        }));
    }
    out
}

/// step_expansion against quadrature for n = 1, 2, 3 in both families.
pub fn step_expansion_suite(seed: u64, tuples: usize) -> Vec<IdentityOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for fam in FAMILIES {
        for n in 1..=3 {
            let name = [
                "step-expansion n=1",
                "step-expansion n=2",
                "step-expansion n=3",
            ][n as usize - 1];
            out.push(sweep(name, fam, tuples, &mut rng, |r| {
                let s: f64 = r.gen_range(0.2..1.5);
                let t = s + r.gen_range(0.1..1.5);
                step_expansion_check(fam, n, s, t, r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5))
            }));
        }
    }
    out
}
