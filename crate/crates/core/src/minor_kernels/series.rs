use crate::error::{Error, Result};
use crate::special_functions::{ln_factorial, HermiteTable};
use std::f64::consts::PI;

/// Σ_l √((n'+sl)!/(n+sl)!) e^{-l·rate} h*_{n+sl}(a) h*_{n'+sl}(b) e^{-b²}
/// with index stride s.
pub(crate) struct PairSeries {
    pub n: i64,
    pub n2: i64,
    pub a: f64,
    pub b: f64,
    pub rate: f64,
    pub stride: i64,
}

impl PairSeries {
    fn log_weight(&self, l: i64) -> Option<(i64, i64, f64)> {
        let i = self.n + self.stride * l;
        let j = self.n2 + self.stride * l;
        if i < 0 || j < 0 {
            return None;
        }
        let w = 0.5 * (ln_factorial(j) - ln_factorial(i)) - l as f64 * self.rate - self.b * self.b;
        Some((i, j, w))
    }

    fn term(&self, ta: &HermiteTable, tb: &HermiteTable, l: i64) -> f64 {
        match self.log_weight(l) {
            None => 0.0,
            Some((i, j, w)) => {
                let (sa, la) = ta.signed_log(i);
                let (sb, lb) = tb.signed_log(j);
                if sa == 0.0 || sb == 0.0 {
                    0.0
                } else {
                    sa * sb * (la + lb + w).exp()
                }
            }
        }
    }

    /// Sum over l = -1, -2, ... while both degrees stay nonnegative.
    pub fn lower_sum(&self) -> f64 {
        let top = self.n.max(self.n2).max(0) as usize;
        let ta = HermiteTable::new(top, self.a);
        let tb = HermiteTable::new(top, self.b);
        let mut s = 0.0;
        let mut l = -1;
        while self.n + self.stride * l >= 0 && self.n2 + self.stride * l >= 0 {
            s += self.term(&ta, &tb, l);
            l -= 1;
        }
        s
    }

    /// Minus the sum over l = 0, 1, 2, ..., truncated by a rigorous geometric
    /// tail bound from |h*_k(x)| e^{-x²/2} ≤ π^{-1/4}.
    pub fn upper_sum(&self, l_max: usize, term_tol: f64) -> Result<f64> {
        let top = (self.n.max(self.n2) + self.stride * l_max as i64) as usize;
        let ta = HermiteTable::new(top, self.a);
        let tb = HermiteTable::new(top, self.b);
        let envelope = 0.5 * (self.a * self.a - self.b * self.b) - 0.5 * PI.ln();
        let geometric = if self.rate > 0.0 {
            -(-self.rate).exp_m1()
        } else {
            0.0
        };
        let mut sum = 0.0;
        let mut run_max = 0.0f64;
        let mut recent = [f64::INFINITY; 3];
        let mut bound = f64::INFINITY;
        for l in 0..l_max as i64 {
            let t = self.term(&ta, &tb, l);
            sum += t;
            run_max = run_max.max(t.abs());
            recent[(l % 3) as usize] = t.abs();
            let scale = run_max.max(sum.abs());
            bound = if geometric > 0.0 && self.n >= self.n2 {
                match self.log_weight(l + 1) {
                    Some((_, _, w)) => (w + self.b * self.b + envelope).exp() / geometric,
                    None => 0.0,
                }
            } else {
                f64::INFINITY
            };
            if scale == 0.0 && bound == 0.0 {
                return Ok(0.0);
            }
            if l >= 2 && recent.iter().all(|&r| r <= term_tol * scale) && bound <= term_tol * scale
            {
                return Ok(-sum);
            }
            if !bound.is_finite() && l >= 2 && geometric == 0.0 && self.n >= self.n2 {
                // no geometric decay to certify convergence
                return Err(Error::Convergence {
                    partial_sum: -sum,
                    tail_bound: bound,
                    terms: l as usize + 1,
                });
            }
        }
        Err(Error::Convergence {
            partial_sum: -sum,
            tail_bound: bound,
            terms: l_max,
        })
    }
}
