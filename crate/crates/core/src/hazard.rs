//! Parametric lifetime models: exponential, Weibull and gamma.
//!
//! Everything downstream works with the cumulative hazard `H(t) = −ln R(t)`,
//! so each family evaluates it in the most direct form available: `rate·t`
//! for the exponential, `(t/α)^β` for the Weibull, and `−ln Q(k, λt)` for the
//! gamma. No family computes `H` as the logarithm of a subtracted CDF.

use std::fmt;

use crate::error::{GtError, Result};
use crate::special::{ln_gamma, ln_reg_inc_gamma_upper, reg_inc_gamma_lower, reg_inc_gamma_upper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Exponential,
    Weibull,
    Gamma,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Exponential => "exponential",
            Family::Weibull => "weibull",
            Family::Gamma => "gamma",
        })
    }
}

/// A lifetime distribution with validated parameters.
///
/// The gamma model is parameterized by shape `k` and rate `λ` so that its CDF
/// is `P(k, λt)`; the Weibull by scale `α` and shape `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Exponential { rate: f64 },
    Weibull { scale: f64, shape: f64 },
    Gamma { shape: f64, rate: f64 },
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(GtError::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn nonneg_time(t: f64) -> Result<f64> {
    if t >= 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(GtError::Domain(format!(
            "time must be nonnegative and finite, got {t}"
        )))
    }
}

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self::Exponential {
            rate: positive("rate", rate)?,
        })
    }

    pub fn weibull(scale: f64, shape: f64) -> Result<Self> {
        Ok(Self::Weibull {
            scale: positive("scale", scale)?,
            shape: positive("shape", shape)?,
        })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Ok(Self::Gamma {
            shape: positive("shape", shape)?,
            rate: positive("rate", rate)?,
        })
    }

    /// Builds a distribution from a family tag plus (scale, shape). The shape is
    /// ignored for the exponential, whose rate is `1/scale`.
    pub fn from_scale_shape(family: Family, scale: f64, shape: f64) -> Result<Self> {
        let scale = positive("scale", scale)?;
        match family {
            Family::Exponential => Self::exponential(1.0 / scale),
            Family::Weibull => Self::weibull(scale, shape),
            Family::Gamma => Self::gamma(shape, 1.0 / scale),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Exponential { .. } => Family::Exponential,
            Self::Weibull { .. } => Family::Weibull,
            Self::Gamma { .. } => Family::Gamma,
        }
    }

    pub fn scale(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Weibull { scale, .. } => scale,
            Self::Gamma { rate, .. } => 1.0 / rate,
        }
    }

    pub fn shape(&self) -> f64 {
        match *self {
            Self::Exponential { .. } => 1.0,
            Self::Weibull { shape, .. } | Self::Gamma { shape, .. } => shape,
        }
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        let t = nonneg_time(t)?;
        Ok(match *self {
            Self::Exponential { rate } => -(-rate * t).exp_m1(),
            Self::Weibull { scale, shape } => -(-(t / scale).powf(shape)).exp_m1(),
            Self::Gamma { shape, rate } => reg_inc_gamma_lower(shape, rate * t)?,
        })
    }

    /// Reliability `R(t)`, evaluated directly rather than as `1 − F(t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        let t = nonneg_time(t)?;
        Ok(match *self {
            Self::Exponential { rate } => (-rate * t).exp(),
            Self::Weibull { scale, shape } => (-(t / scale).powf(shape)).exp(),
            Self::Gamma { shape, rate } => reg_inc_gamma_upper(shape, rate * t)?,
        })
    }

    /// Failure rate `h(t) = f(t) / R(t)`.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let t = nonneg_time(t)?;
        if t == 0.0 {
            let k = self.shape();
            return if k < 1.0 {
                Err(GtError::Singularity { shape: k })
            } else if k > 1.0 {
                Ok(0.0)
            } else {
                Ok(1.0 / self.scale())
            };
        }
        Ok(match *self {
            Self::Exponential { rate } => rate,
            Self::Weibull { scale, shape } => shape / scale * (t / scale).powf(shape - 1.0),
            Self::Gamma { shape, rate } => {
                let x = rate * t;
                let ln_pdf = rate.ln() + (shape - 1.0) * x.ln() - x - ln_gamma(shape);
                (ln_pdf - ln_reg_inc_gamma_upper(shape, x)?).exp()
            }
        })
    }

    /// Cumulative hazard `H(t) = −ln R(t)`.
    ///
    /// Fails when `R(t)` is not representable as a positive double.
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        let t = nonneg_time(t)?;
        let h = self.cumulative_hazard_raw(t);
        if (-h).exp() == 0.0 {
            return Err(GtError::SurvivalUnderflow { t });
        }
        Ok(h)
    }

    /// `H(t)` without argument or underflow checks; `t` must be finite and ≥ 0.
    pub(crate) fn cumulative_hazard_raw(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => rate * t,
            Self::Weibull { scale, shape } => (t / scale).powf(shape),
            Self::Gamma { shape, rate } => {
                -ln_reg_inc_gamma_upper(shape, rate * t).expect("validated gamma parameters")
            }
        }
    }

    /// Rate of the exponential whose cumulative hazard matches this one at `horizon`.
    pub fn effective_failure_rate(&self, horizon: f64) -> Result<f64> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(GtError::Domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let h = self
            .cumulative_hazard(horizon)
            .map_err(|_| GtError::DegenerateHorizon { horizon })?;
        if h <= 0.0 {
            return Err(GtError::DegenerateHorizon { horizon });
        }
        Ok(h / horizon)
    }
}
