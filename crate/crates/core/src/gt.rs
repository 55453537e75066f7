//! The GT (Gini-type) aging coefficient.
//!
//! For a nondecreasing curve `V(t)` on `[0, T]` with `V(0) = 0` (a cumulative
//! hazard or a cumulative intensity) the coefficient is
//!
//! ```text
//! C(T) = 1 − 2 ∫₀ᵀ V(t) dt / (T · V(T))
//! ```
//!
//! i.e. one minus the ratio of the area under the curve to the area under the
//! chord from the origin to `(T, V(T))`. It is zero for a straight line,
//! positive for convex (aging) curves and negative for concave (rejuvenating)
//! ones.

use std::fmt;

use crate::error::{GtError, Result};
use crate::hazard::DistributionSpec;
use crate::quadrature::integrate_adaptive;

/// Default band around zero reported as [`Classification::Constant`].
pub const DEFAULT_CLASS_TOL: f64 = 0.01;
/// Default quadrature tolerance, relative to `T · H(T)`.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Aging,
    Rejuvenating,
    Constant,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Aging => "aging",
            Classification::Rejuvenating => "rejuvenating",
            Classification::Constant => "constant",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Constant iff `|c| ≤ tol`; otherwise the sign decides.
pub fn classify(c: f64, tol: f64) -> Classification {
    if c.abs() <= tol {
        Classification::Constant
    } else if c > 0.0 {
        Classification::Aging
    } else {
        Classification::Rejuvenating
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtResult {
    pub value: f64,
    pub horizon: f64,
    pub classification: Classification,
    /// Present only for Monte-Carlo estimates.
    pub std_error: Option<f64>,
}

impl GtResult {
    pub fn analytic(value: f64, horizon: f64, class_tol: f64) -> Self {
        Self {
            value,
            horizon,
            classification: classify(value, class_tol),
            std_error: None,
        }
    }

    /// Classifies against a band of two standard errors.
    pub fn monte_carlo(value: f64, horizon: f64, std_error: f64) -> Self {
        Self {
            value,
            horizon,
            classification: classify(value, 2.0 * std_error),
            std_error: Some(std_error),
        }
    }
}

/// `1 − 2·area/(T·terminal)`.
pub(crate) fn gt_ratio(area: f64, horizon: f64, terminal: f64) -> f64 {
    1.0 - 2.0 * area / (horizon * terminal)
}

/// Closed form for the Weibull cumulative hazard and the power-law NHPP:
/// `1 − 2/(β + 1)`, independent of scale and horizon.
pub fn gt_weibull_closed_form(beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(GtError::Domain(format!(
            "Weibull shape must be positive, got {beta}"
        )));
    }
    Ok(1.0 - 2.0 / (beta + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtOptions {
    /// Absolute quadrature tolerance as a fraction of `T · H(T)`.
    pub quad_tol: f64,
    pub class_tol: f64,
    /// Skip the Weibull closed form and integrate numerically.
    pub force_quadrature: bool,
}

impl Default for GtOptions {
    fn default() -> Self {
        Self {
            quad_tol: DEFAULT_QUAD_TOL,
            class_tol: DEFAULT_CLASS_TOL,
            force_quadrature: false,
        }
    }
}

/// GT coefficient of a lifetime distribution over `[0, horizon]`.
pub fn gt_nonrepairable(dist: &DistributionSpec, horizon: f64, quad_tol: f64) -> Result<GtResult> {
    gt_nonrepairable_with(
        dist,
        horizon,
        &GtOptions {
            quad_tol,
            ..GtOptions::default()
        },
    )
}

pub fn gt_nonrepairable_with(
    dist: &DistributionSpec,
    horizon: f64,
    opts: &GtOptions,
) -> Result<GtResult> {
    if !(opts.quad_tol > 0.0) {
        return Err(GtError::InvalidParameter(format!(
            "quadrature tolerance must be positive, got {}",
            opts.quad_tol
        )));
    }
    // validates the horizon and rejects F(T) ∈ {0, 1}
    let terminal = dist.effective_failure_rate(horizon)? * horizon;

    if let (DistributionSpec::Weibull { shape, .. }, false) = (dist, opts.force_quadrature) {
        return Ok(GtResult::analytic(
            gt_weibull_closed_form(*shape)?,
            horizon,
            opts.class_tol,
        ));
    }

    // t = T·u² removes the t^k endpoint singularity of H for shapes below one
    let integrand = |u: f64| 2.0 * horizon * u * dist.cumulative_hazard_raw(horizon * u * u);
    let abs_tol = opts.quad_tol * horizon * terminal;
    let area = integrate_adaptive(integrand, 0.0, 1.0, abs_tol).map_err(|e| match e {
        GtError::NonConvergence { estimate } => GtError::NonConvergence {
            estimate: gt_ratio(estimate, horizon, terminal),
        },
        other => other,
    })?;
    Ok(GtResult::analytic(
        gt_ratio(area, horizon, terminal),
        horizon,
        opts.class_tol,
    ))
}

/// A nondecreasing curve sampled on `0 = t₀ < t₁ < … < tₙ = T`, starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(GtError::InvalidParameter(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 3 {
            return Err(GtError::InvalidParameter(
                "a sampled curve needs at least 3 points".into(),
            ));
        }
        if grid[0] != 0.0 || values[0] != 0.0 {
            return Err(GtError::InvalidParameter(
                "a sampled curve must start at (0, 0)".into(),
            ));
        }
        if grid.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(GtError::InvalidParameter(
                "sampled curve contains non-finite entries".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GtError::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(GtError::InvalidParameter(
                "curve values must be nondecreasing".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on a uniform grid of `points` over `[0, horizon]`.
    pub fn from_fn(horizon: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = uniform_grid(horizon, points)?;
        let values = grid.iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("nonempty")
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("nonempty")
    }

    pub fn trapezoid_integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum()
    }

    /// Piecewise-linear interpolation, clamped to the grid's range.
    pub fn interpolate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= self.horizon() {
            return self.terminal();
        }
        let i = self.grid.partition_point(|&g| g <= t);
        let (t0, t1) = (self.grid[i - 1], self.grid[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// `points` equally spaced times from 0 to `horizon` inclusive.
pub fn uniform_grid(horizon: f64, points: usize) -> Result<Vec<f64>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(GtError::Domain(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if points < 3 {
        return Err(GtError::InvalidParameter(format!(
            "grid needs at least 3 points, got {points}"
        )));
    }
    let n = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| horizon * i as f64 / n).collect();
    grid[points - 1] = horizon;
    Ok(grid)
}

/// GT coefficient of a sampled curve, integrating it with the trapezoid rule.
pub fn gt_from_sampled_curve(curve: &SampledCurve) -> Result<GtResult> {
    let terminal = curve.terminal();
    if terminal <= 0.0 {
        return Err(GtError::DegenerateCurve);
    }
    let horizon = curve.horizon();
    let value = gt_ratio(curve.trapezoid_integral(), horizon, terminal);
    Ok(GtResult::analytic(value, horizon, DEFAULT_CLASS_TOL))
}
