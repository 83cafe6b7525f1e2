//! Normalized Hermite polynomials, the iterated Heaviside functions H^n,
//! Gaussian transition densities and the scale factors q, r, σ of the
//! stationary (starred) and time-indexed families.

use crate::error::{Error, Result};
use crate::quadrature::Adaptive;
use libm::{erfc, lgamma};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// ln π^{-1/4}
pub(crate) const LN_PI_M14: f64 = -0.286_182_471_462_350_04;

/// Which normalization of the Hermite family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HermiteFamily {
    /// Orthonormal for e^{-x²}.
    Star,
    /// h^{(t)}_n(x) = h*_n(x/√t), orthogonal for e^{-x²/t}.
    TimeIndexed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteBasis {
    pub max_degree: usize,
    pub family: HermiteFamily,
}

impl HermiteBasis {
    pub fn star(max_degree: usize) -> Self {
        HermiteBasis {
            max_degree,
            family: HermiteFamily::Star,
        }
    }

    pub fn time_indexed(max_degree: usize, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain(
                "t",
                "time index of the Hermite family must be positive",
            ));
        }
        Ok(HermiteBasis {
            max_degree,
            family: HermiteFamily::TimeIndexed(t),
        })
    }

    /// Argument passed to the starred polynomials.
    pub fn reduced_argument(&self, x: f64) -> f64 {
        match self.family {
            HermiteFamily::Star => x,
            HermiteFamily::TimeIndexed(t) => x / t.sqrt(),
        }
    }

    /// σ of the family: 1/√2 or √(t/2).
    pub fn sigma(&self) -> f64 {
        match self.family {
            HermiteFamily::Star => 1.0 / SQRT_2,
            HermiteFamily::TimeIndexed(t) => (t / 2.0).sqrt(),
        }
    }

    /// Orthogonality weight w(x).
    pub fn weight(&self, x: f64) -> f64 {
        match self.family {
            HermiteFamily::Star => (-x * x).exp(),
            HermiteFamily::TimeIndexed(t) => (-x * x / t).exp(),
        }
    }

    /// Coefficient of x^n in h_n.
    pub fn leading_coefficient(&self, n: usize) -> f64 {
        let s = self.sigma();
        (-(n as f64) * s.ln() - 0.5 * (ln_factorial(n as i64) + 0.5 * PI.ln())).exp()
    }
}

/// Evaluates h_n(x) of the requested family. Negative degrees give 0.
pub fn hermite_eval(basis: &HermiteBasis, n: i64, x: f64) -> Result<f64> {
    if n > basis.max_degree as i64 {
        return Err(Error::DegreeOverflow {
            degree: n,
            max_degree: basis.max_degree,
        });
    }
    if n < 0 {
        return Ok(0.0);
    }
    let table = HermiteTable::new(n as usize, basis.reduced_argument(x));
    Ok(table.value(n))
}

/// All starred Hermite values h*_0..h*_max at one point, stored as mantissa
/// times exp(log-scale) so that large degrees and arguments cannot overflow.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    x: f64,
    mantissa: Vec<f64>,
    log_scale: Vec<f64>,
}

const RESCALE: f64 = 1e150;

impl HermiteTable {
    pub fn new(max_degree: usize, x: f64) -> Self {
        let mut mantissa = Vec::with_capacity(max_degree + 1);
        let mut log_scale = Vec::with_capacity(max_degree + 1);
        let mut scale = LN_PI_M14;
        let mut prev = 0.0;
        let mut cur = 1.0;
        mantissa.push(cur);
        log_scale.push(scale);
        for k in 0..max_degree {
            let kf = k as f64;
            let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                cur /= RESCALE;
                prev /= RESCALE;
                scale += RESCALE.ln();
            }
            mantissa.push(cur);
            log_scale.push(scale);
        }
        HermiteTable {
            x,
            mantissa,
            log_scale,
        }
    }

    pub fn argument(&self) -> f64 {
        self.x
    }

    pub fn max_degree(&self) -> usize {
        self.mantissa.len() - 1
    }

    /// h*_k(x); zero for negative k.
    pub fn value(&self, k: i64) -> f64 {
        self.scaled(k, 0.0)
    }

    /// h*_k(x)·exp(log_factor), combined before exponentiation.
    pub fn scaled(&self, k: i64, log_factor: f64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        let k = k as usize;
        let m = self.mantissa[k];
        if m == 0.0 {
            return 0.0;
        }
        m * (self.log_scale[k] + log_factor).exp()
    }

    /// Hermite function h*_k(x)e^{-x²/2}.
    pub fn function(&self, k: i64) -> f64 {
        self.scaled(k, -0.5 * self.x * self.x)
    }

    /// (sign, ln|h*_k(x)|); sign 0 for vanishing values.
    pub fn signed_log(&self, k: i64) -> (f64, f64) {
        if k < 0 {
            return (0.0, f64::NEG_INFINITY);
        }
        let m = self.mantissa[k as usize];
        if m == 0.0 {
            (0.0, f64::NEG_INFINITY)
        } else {
            (m.signum(), m.abs().ln() + self.log_scale[k as usize])
        }
    }
}

/// ln(n!) for n ≥ 0.
pub fn ln_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    if n < 2 {
        0.0
    } else if n < 30 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        lgamma(n as f64 + 1.0)
    }
}

/// H^n(x) = x^{n-1}/(n-1)! for x ≥ 0, 0 otherwise. Order 0 is the delta
/// function and is rejected.
pub fn heaviside_power(n: i64, x: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain(
            "n",
            "order 0 is the Dirac delta and has no pointwise value",
        ));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let k = n - 1;
    Ok(((k as f64) * x.ln() - ln_factorial(k)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionKind {
    /// Stationary Ornstein–Uhlenbeck density p*_t.
    OU,
    /// Brownian motion with variance t/2.
    BM,
}

/// Transition density p*_t(x, y) or p_t(x, y).
pub fn transition_density(kind: TransitionKind, t: f64, x: f64, y: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("t", "transition time must be positive"));
    }
    Ok(match kind {
        TransitionKind::OU => {
            let q = (-t).exp();
            let v = -(-2.0 * t).exp_m1();
            let d = y - q * x;
            (-d * d / v).exp() / (PI * v).sqrt()
        }
        TransitionKind::BM => {
            let d = y - x;
            (-d * d / t).exp() / (PI * t).sqrt()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScaleAlgebra {
    Star,
    Warren,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleFactor {
    Q,
    R,
    Sigma,
}

impl ScaleAlgebra {
    /// q of a step of length `step` taken from time `base`.
    pub fn q(&self, base: f64, step: f64) -> Result<f64> {
        match self {
            ScaleAlgebra::Star => Ok((-step).exp()),
            ScaleAlgebra::Warren => {
                if !(base > 0.0) {
                    return Err(Error::domain("base", "Warren q needs a positive base time"));
                }
                if !(base + step > 0.0) {
                    return Err(Error::domain("step", "base + step must be positive"));
                }
                Ok((base / (base + step)).sqrt())
            }
        }
    }

    pub fn r(&self, step: f64) -> f64 {
        match self {
            ScaleAlgebra::Star => (-step).exp(),
            ScaleAlgebra::Warren => 1.0,
        }
    }

    pub fn sigma(&self, t: f64) -> Result<f64> {
        match self {
            ScaleAlgebra::Star => Ok(1.0 / SQRT_2),
            ScaleAlgebra::Warren => {
                if !(t > 0.0) {
                    return Err(Error::domain("t", "Warren sigma needs positive time"));
                }
                Ok((t / 2.0).sqrt())
            }
        }
    }

    pub fn transition(&self) -> TransitionKind {
        match self {
            ScaleAlgebra::Star => TransitionKind::OU,
            ScaleAlgebra::Warren => TransitionKind::BM,
        }
    }

    /// Hermite basis of this family at time t.
    pub fn basis(&self, max_degree: usize, t: f64) -> Result<HermiteBasis> {
        match self {
            ScaleAlgebra::Star => Ok(HermiteBasis::star(max_degree)),
            ScaleAlgebra::Warren => HermiteBasis::time_indexed(max_degree, t),
        }
    }
}

/// Dispatches to q, r or σ. `args` is (base, step) for q, (step) for r and
/// (t) for σ.
pub fn scale_factor(alg: ScaleAlgebra, which: ScaleFactor, args: &[f64]) -> Result<f64> {
    let need = match which {
        ScaleFactor::Q => 2,
        _ => 1,
    };
    if args.len() != need {
        return Err(Error::Configuration(format!(
            "{which:?} takes {need} argument(s), got {}",
            args.len()
        )));
    }
    match which {
        ScaleFactor::Q => alg.q(args[0], args[1]),
        ScaleFactor::R => Ok(alg.r(args[0])),
        ScaleFactor::Sigma => alg.sigma(args[0]),
    }
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

/// I_k(z) = ∫_{-∞}^z (z-w)^k/k! φ(w) dw for k ≥ -1 (I_{-1} = φ, I_0 = Φ).
pub fn ramp_moment(k: i64, z: f64) -> f64 {
    assert!(k >= -1);
    if k == -1 {
        return normal_pdf(z);
    }
    if z >= 0.0 {
        let mut prev = normal_pdf(z);
        let mut cur = normal_cdf(z);
        for j in 1..=k {
            let next = (z * cur + prev) / j as f64;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    // φ(z) ∫_0^∞ w^k/k! e^{zw - w²/2} dw; the integrand is tiny past √(2k)+12.
    let lnk = ln_factorial(k);
    let upper = (2.0 * k as f64).sqrt() + 12.0;
    let peak = (((z * z + 4.0 * k as f64).sqrt() + z) / 2.0).max(0.0);
    let f = |w: f64| {
        if w <= 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        ((k as f64) * w.ln() - lnk + z * w - 0.5 * w * w).exp()
    };
    let quad = Adaptive {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_intervals: 2000,
    };
    let v = quad
        .integrate_with_breaks(f, 0.0, upper, &[peak])
        .map(|r| r.value)
        .unwrap_or_else(|e| match e {
            Error::Convergence { partial_sum, .. } => partial_sum,
            _ => f64::NAN,
        });
    normal_pdf(z) * v
}

/// ∫ H^m(x - y) N(y; mean, sd²) dy for m ≥ 1.
pub fn heaviside_gaussian(m: i64, x: f64, mean: f64, sd: f64) -> f64 {
    assert!(m >= 1);
    sd.powi((m - 1) as i32) * ramp_moment(m - 1, (x - mean) / sd)
}

/// ∫ w(y) H^m(y - z) dy with w(y) = e^{-y²/scale} (scale 1 for the starred weight).
pub fn weighted_ramp(m: i64, z: f64, scale: f64) -> f64 {
    assert!(m >= 1);
    // √(π scale) N(0, scale/2) mass above z, moments of (y - z)_+
    let sd = (scale / 2.0).sqrt();
    (PI * scale).sqrt() * sd.powi((m - 1) as i32) * ramp_moment(m - 1, -z / sd)
}
