//! Gini-type (GT) aging/rejuvenation coefficient.
//!
//! The coefficient compares a cumulative hazard `H(t)` (non-repairable units)
//! or a cumulative intensity `Λ(t)` (repairable systems) with the straight
//! line of a constant-rate model that agrees with it at the horizon `T`:
//!
//! ```text
//! C(T) = 1 − 2 ∫₀ᵀ V(t) dt / (T · V(T))
//! ```
//!
//! `C` lies in (−1, 1): positive for aging (IFR, deteriorating), negative for
//! rejuvenating (DFR, improving), zero for the exponential/HPP.
//!
//! - [`hazard`]: exponential, Weibull and gamma lifetime models.
//! - [`gt`]: closed forms, quadrature and sampled-curve evaluation.
//! - [`point_process`]: HPP/NHPP/RP/GRP simulation and Monte-Carlo CIFs.
//! - [`empirical`]: Nelson–Aalen and mean-cumulative-function estimates from data.

// `!(x > 0.0)` is used throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod empirical;
pub mod error;
pub mod gt;
pub mod hazard;
pub mod point_process;
pub mod quadrature;
pub mod special;

pub use empirical::{
    gt_from_step_curve, mcf, nelson_aalen, EventHistory, LifetimeRecord, LifetimeSample, StepCurve,
};
pub use error::{GtError, Result};
pub use gt::{
    classify, gt_from_sampled_curve, gt_nonrepairable, gt_nonrepairable_with,
    gt_weibull_closed_form, Classification, GtOptions, GtResult, SampledCurve,
};
pub use hazard::{DistributionSpec, Family};
pub use point_process::{
    estimate_cif, gt_repairable, power_law_cif, simulate_history, solve_renewal_equation,
    CifEstimate, PointProcessSpec, ProcessModel, VirtualAgeModel,
};
pub use quadrature::integrate_adaptive;
