//! Prior distribution kernels: log-density, gradients and sampling for the
//! normal, skew-normal, half-normal and uniform families.
//!
//! The skew-normal density is `2/σ · φ(z) · Φ(αz)` with `z = (x − μ)/σ`. Its
//! log-density needs `log Φ` far into the lower tail and its gradient needs the
//! inverse Mills ratio `φ(t)/Φ(t)`; both switch to the asymptotic tail series
//! once `t < -8`, where the direct quotient degenerates to `0/0`.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const TAIL_SWITCH: f64 = -8.0;

/// Log of the standard normal density.
#[inline]
pub fn ln_std_normal_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Standard normal CDF evaluated through `erfc`, accurate in both tails.
pub fn std_normal_cdf(t: f64) -> f64 {
    0.5 * erfc(-t / std::f64::consts::SQRT_2)
}

/// Sum of the asymptotic series `Σ (-1)^n (2n-1)!! / t^(2n)` for `t` deep in
/// the lower tail, so that `Φ(t) = φ(t)/(-t) · S(t)`.
fn lower_tail_series(t: f64) -> f64 {
    let inv_t2 = 1.0 / (t * t);
    let mut term: f64 = 1.0;
    let mut sum: f64 = 1.0;
    for n in 1..60 {
        let next = -term * (2 * n - 1) as f64 * inv_t2;
        if next.abs() >= term.abs() || next.abs() < 1e-18 * sum.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    sum
}

/// `log Φ(t)` without underflow for very negative `t` or cancellation for
/// large positive `t`.
pub fn ln_std_normal_cdf(t: f64) -> f64 {
    if t < TAIL_SWITCH {
        ln_std_normal_pdf(t) - (-t).ln() + lower_tail_series(t).ln()
    } else if t > 0.0 {
        (-0.5 * erfc(t / std::f64::consts::SQRT_2)).ln_1p()
    } else {
        std_normal_cdf(t).ln()
    }
}

/// Inverse Mills ratio `φ(t)/Φ(t)`.
pub fn inverse_mills(t: f64) -> f64 {
    if t < TAIL_SWITCH {
        -t / lower_tail_series(t)
    } else {
        (ln_std_normal_pdf(t) - ln_std_normal_cdf(t)).exp()
    }
}

/// A prior distribution over one real-valued parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorDist {
    Normal { mu: f64, sigma: f64 },
    SkewNormal { mu: f64, sigma: f64, alpha: f64 },
    /// Folded standard normal with the given scale, supported on `x >= 0`.
    HalfNormal { scale: f64 },
    Uniform { lower: f64, upper: f64 },
}

impl PriorDist {
    pub fn normal(mu: f64, sigma: f64) -> Self {
        PriorDist::Normal { mu, sigma }
    }

    pub fn skew_normal(mu: f64, sigma: f64, alpha: f64) -> Self {
        PriorDist::SkewNormal { mu, sigma, alpha }
    }

    pub fn half_normal(scale: f64) -> Self {
        PriorDist::HalfNormal { scale }
    }

    pub fn uniform(lower: f64, upper: f64) -> Self {
        PriorDist::Uniform { lower, upper }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PriorDist::Normal { mu, sigma } => mu.is_finite() && sigma.is_finite() && sigma > 0.0,
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                mu.is_finite() && alpha.is_finite() && sigma.is_finite() && sigma > 0.0
            }
            PriorDist::HalfNormal { scale } => scale.is_finite() && scale > 0.0,
            PriorDist::Uniform { lower, upper } => {
                lower.is_finite() && upper.is_finite() && lower < upper
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(self.to_string()))
        }
    }

    /// Closed interval of support; infinite ends where unbounded.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            PriorDist::HalfNormal { .. } => (0.0, f64::INFINITY),
            PriorDist::Uniform { lower, upper } => (lower, upper),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x >= lo && x <= hi
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match *self {
            PriorDist::Normal { mu, sigma } => ln_std_normal_pdf((x - mu) / sigma) - sigma.ln(),
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                let z = (x - mu) / sigma;
                LN_2 + ln_std_normal_pdf(z) - sigma.ln() + ln_std_normal_cdf(alpha * z)
            }
            PriorDist::HalfNormal { scale } => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    LN_2 + ln_std_normal_pdf(x / scale) - scale.ln()
                }
            }
            PriorDist::Uniform { lower, upper } => {
                if x < lower || x > upper {
                    f64::NEG_INFINITY
                } else {
                    -(upper - lower).ln()
                }
            }
        }
    }

    /// Derivative of the log-density with respect to the variate.
    pub fn grad_log_pdf(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if !(x > lo && x < hi) {
            return Err(Error::OutsideSupport(x));
        }
        Ok(self.grad_unchecked(x))
    }

    /// Log-density and its variate derivative in one pass. Outside the support
    /// the pair is `(-inf, 0)`.
    pub fn log_pdf_and_grad(&self, x: f64) -> (f64, f64) {
        if !self.in_support(x) {
            return (f64::NEG_INFINITY, 0.0);
        }
        (self.log_pdf(x), self.grad_unchecked(x))
    }

    fn grad_unchecked(&self, x: f64) -> f64 {
        match *self {
            PriorDist::Normal { mu, sigma } => -(x - mu) / (sigma * sigma),
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                let z = (x - mu) / sigma;
                (-z + alpha * inverse_mills(alpha * z)) / sigma
            }
            PriorDist::HalfNormal { scale } => -x / (scale * scale),
            PriorDist::Uniform { .. } => 0.0,
        }
    }

    /// Derivative of the log-density with respect to the scale parameter
    /// (`σ` or the half-normal scale). Uniform has no scale.
    pub fn grad_log_pdf_scale(&self, x: f64) -> Option<f64> {
        match *self {
            PriorDist::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                Some((z * z - 1.0) / sigma)
            }
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                let z = (x - mu) / sigma;
                Some((z * z - alpha * z * inverse_mills(alpha * z) - 1.0) / sigma)
            }
            PriorDist::HalfNormal { scale } => {
                let z = x / scale;
                Some((z * z - 1.0) / scale)
            }
            PriorDist::Uniform { .. } => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PriorDist::Normal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                mu + sigma * z
            }
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                // Two correlated normals: keep the second when the first is
                // non-negative, otherwise reflect it.
                let delta = alpha / (1.0 + alpha * alpha).sqrt();
                let u0: f64 = rng.sample(StandardNormal);
                let v: f64 = rng.sample(StandardNormal);
                let u1 = delta * u0 + (1.0 - delta * delta).sqrt() * v;
                let z = if u0 >= 0.0 { u1 } else { -u1 };
                mu + sigma * z
            }
            PriorDist::HalfNormal { scale } => {
                let z: f64 = rng.sample(StandardNormal);
                scale * z.abs()
            }
            PriorDist::Uniform { lower, upper } => lower + (upper - lower) * rng.random::<f64>(),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            PriorDist::Normal { mu, .. } => mu,
            PriorDist::SkewNormal { mu, sigma, alpha } => {
                let delta = alpha / (1.0 + alpha * alpha).sqrt();
                mu + sigma * delta * (2.0 / PI).sqrt()
            }
            PriorDist::HalfNormal { scale } => scale * (2.0 / PI).sqrt(),
            PriorDist::Uniform { lower, upper } => 0.5 * (lower + upper),
        }
    }

    /// The same family with its skew flipped; non-skewed kinds are unchanged.
    pub fn flipped(&self) -> Self {
        match *self {
            PriorDist::SkewNormal { mu, sigma, alpha } => PriorDist::SkewNormal {
                mu,
                sigma,
                alpha: -alpha,
            },
            other => other,
        }
    }
}

impl fmt::Display for PriorDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PriorDist::Normal { mu, sigma } => write!(f, "N({mu}, {sigma})"),
            PriorDist::SkewNormal { mu, sigma, alpha } => write!(f, "SN({mu}, {sigma}, {alpha})"),
            PriorDist::HalfNormal { scale } => write!(f, "HN({scale})"),
            PriorDist::Uniform { lower, upper } => write!(f, "U({lower}, {upper})"),
        }
    }
}
