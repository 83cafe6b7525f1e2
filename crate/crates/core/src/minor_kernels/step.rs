use crate::error::{Error, Result};
use crate::special_functions::{
    ln_factorial, weighted_ramp, HermiteTable, ScaleAlgebra, LN_PI_M14,
};
use std::f64::consts::{LN_2, PI};

/// ∫ H^n(x - y) p_{t-s}(y, z) dy expanded in Hermite members at times s and t:
/// a finite part over degrees k < n carrying ∫ w^{(t)}(y) H^{n-k}(y - z) dy,
/// plus a series over k ≥ n truncated at `k_max` terms. Both parts carry
/// 1/σ(t); for the Warren family this is the factor q that the time step
/// of the weighted members picks up.
pub fn step_expansion(
    family: ScaleAlgebra,
    n: i64,
    s: f64,
    t: f64,
    x: f64,
    z: f64,
    k_max: usize,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("n", "order must be at least 1"));
    }
    let lower = match family {
        ScaleAlgebra::Star => s >= 0.0,
        ScaleAlgebra::Warren => s > 0.0,
    };
    if !lower || !(t > s) || !t.is_finite() {
        return Err(Error::domain(
            "t",
            "need t > s (and s > 0 for the Warren family)",
        ));
    }
    let q = family.q(s, t - s)?;
    let r = family.r(t - s);
    let sig_t = family.sigma(t)?;
    let bs = family.basis(0, s)?;
    let bt = family.basis(0, t)?;
    let xs = bs.reduced_argument(x);
    let zt = bt.reduced_argument(z);
    let weight_scale = match family {
        ScaleAlgebra::Star => 1.0,
        ScaleAlgebra::Warren => t,
    };
    let top = n as usize + k_max;
    let hx = HermiteTable::new(top, xs);
    let hz = HermiteTable::new(k_max, zt);

    let ln_q = q.ln();
    let ln_sig_t = sig_t.ln();
    let base = -(n as f64) * r.ln() - ln_sig_t - 0.5 * LN_2;

    let mut finite = 0.0;
    for k in 0..n {
        let (sign, lh) = hx.signed_log(k);
        if sign == 0.0 {
            continue;
        }
        let ramp = weighted_ramp(n - k, z, weight_scale);
        let lc = base + k as f64 * (ln_sig_t + ln_q) - 0.5 * ln_factorial(k) + LN_PI_M14;
        finite += sign * ramp * (lc + lh).exp();
    }

    // tail: |h_k(xs)| ≤ π^{-1/4} e^{xs²/2}, |h_j(zt)| w ≤ π^{-1/4} e^{-zt²/2}
    let pref = n as f64 * ln_sig_t + base;
    let envelope = 0.5 * (xs * xs - zt * zt) - 0.5 * PI.ln();
    let mut series = 0.0;
    let mut run_max = 0.0f64;
    let mut bound = f64::INFINITY;
    for j in 0..k_max as i64 {
        let k = n + j;
        let lf = 0.5 * (ln_factorial(j) - ln_factorial(k)) + k as f64 * ln_q + pref;
        let (sa, la) = hx.signed_log(k);
        let (sb, lb) = hz.signed_log(j);
        let term = sa * sb * (lf + la + lb - zt * zt).exp();
        series += term;
        run_max = run_max.max(term.abs());
        let next = 0.5 * (ln_factorial(j + 1) - ln_factorial(k + 1))
            + (k + 1) as f64 * ln_q
            + pref
            + envelope;
        bound = next.exp() / (1.0 - q);
        if bound <= 1e-16 * (finite.abs() + series.abs()).max(run_max) {
            return Ok(finite + series);
        }
    }
    Err(Error::Convergence {
        partial_sum: finite + series,
        tail_bound: bound,
        terms: k_max,
    })
}
