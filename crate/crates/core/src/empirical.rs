//! GT coefficients from recorded failure data.
//!
//! Lifetimes (possibly right-censored) go through the Nelson–Aalen estimator
//! of the cumulative hazard; fleets of repairable systems through the mean
//! cumulative function. Both produce right-continuous step curves whose area
//! is integrated exactly.

use crate::error::{GtError, Result};
use crate::gt::{gt_ratio, GtResult, DEFAULT_CLASS_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeRecord {
    pub time: f64,
    pub censored: bool,
}

/// Failure or censoring times of non-repairable units, analysed on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeSample {
    records: Vec<LifetimeRecord>,
    horizon: f64,
}

impl LifetimeSample {
    pub fn new(records: Vec<LifetimeRecord>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(GtError::Domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if let Some(r) = records
            .iter()
            .find(|r| !(r.time > 0.0) || !r.time.is_finite())
        {
            return Err(GtError::MalformedSample(format!(
                "lifetime must be positive, got {}",
                r.time
            )));
        }
        if !records.iter().any(|r| !r.censored && r.time <= horizon) {
            return Err(GtError::MalformedSample(format!(
                "no uncensored failure at or before {horizon}"
            )));
        }
        Ok(Self { records, horizon })
    }

    /// Convenience constructor for fully observed failure times.
    pub fn uncensored(times: &[f64], horizon: f64) -> Result<Self> {
        Self::new(
            times
                .iter()
                .map(|&time| LifetimeRecord {
                    time,
                    censored: false,
                })
                .collect(),
            horizon,
        )
    }

    pub fn records(&self) -> &[LifetimeRecord] {
        &self.records
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Event times of one repairable system observed on `[0, window_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventHistory {
    system_id: String,
    event_times: Vec<f64>,
    window_end: f64,
}

impl EventHistory {
    pub fn new(
        system_id: impl Into<String>,
        event_times: Vec<f64>,
        window_end: f64,
    ) -> Result<Self> {
        let system_id = system_id.into();
        if !(window_end > 0.0) || !window_end.is_finite() {
            return Err(GtError::Domain(format!(
                "window end must be positive, got {window_end}"
            )));
        }
        if event_times.iter().any(|&t| !(t > 0.0) || t > window_end) {
            return Err(GtError::MalformedSample(format!(
                "system {system_id}: event times must lie in (0, {window_end}]"
            )));
        }
        if event_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GtError::MalformedSample(format!(
                "system {system_id}: event times must be strictly increasing"
            )));
        }
        Ok(Self {
            system_id,
            event_times,
            window_end,
        })
    }

    pub fn system_id(&self) -> &str {
        &self.system_id
    }

    pub fn event_times(&self) -> &[f64] {
        &self.event_times
    }

    pub fn window_end(&self) -> f64 {
        self.window_end
    }
}

/// Right-continuous step function, zero before the first jump and held
/// constant from the last jump to the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCurve {
    jump_times: Vec<f64>,
    values: Vec<f64>,
    horizon: f64,
}

impl StepCurve {
    pub fn new(jump_times: Vec<f64>, values: Vec<f64>, horizon: f64) -> Result<Self> {
        if jump_times.len() != values.len() {
            return Err(GtError::InvalidParameter(
                "jump times and values differ in length".into(),
            ));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(GtError::Domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if jump_times.iter().any(|&t| !(t > 0.0) || t > horizon) {
            return Err(GtError::InvalidParameter(format!(
                "jump times must lie in (0, {horizon}]"
            )));
        }
        if jump_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GtError::InvalidParameter(
                "jump times must be strictly increasing".into(),
            ));
        }
        if values.first().is_some_and(|&v| !(v >= 0.0)) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GtError::InvalidParameter(
                "step values must be nonnegative and strictly increasing".into(),
            ));
        }
        Ok(Self {
            jump_times,
            values,
            horizon,
        })
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn terminal(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Value at `t` (right-continuous).
    pub fn value_at(&self, t: f64) -> f64 {
        match self.jump_times.partition_point(|&j| j <= t) {
            0 => 0.0,
            i => self.values[i - 1],
        }
    }

    /// Exact area `Σ vᵢ·(tᵢ₊₁ − tᵢ)` with the last step running to the horizon.
    pub fn integral(&self) -> f64 {
        self.jump_times
            .iter()
            .zip(&self.values)
            .enumerate()
            .map(|(i, (&t, &v))| {
                let next = self.jump_times.get(i + 1).copied().unwrap_or(self.horizon);
                v * (next - t)
            })
            .sum()
    }
}

/// Nelson–Aalen cumulative hazard: a jump of `dᵢ/nᵢ` at each distinct failure
/// time up to the horizon. Censoring at a failure time counts as at risk.
pub fn nelson_aalen(sample: &LifetimeSample) -> Result<StepCurve> {
    let mut records = sample.records.clone();
    records.sort_by(|a, b| a.time.total_cmp(&b.time));
    let horizon = sample.horizon;

    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut cumulative = 0.0;
    let mut i = 0;
    while i < records.len() {
        let t = records[i].time;
        if t > horizon {
            break;
        }
        let mut j = i;
        let mut deaths = 0usize;
        while j < records.len() && records[j].time == t {
            deaths += usize::from(!records[j].censored);
            j += 1;
        }
        if deaths > 0 {
            let at_risk = records.len() - i;
            if at_risk == 0 {
                return Err(GtError::MalformedSample(format!(
                    "empty risk set at t = {t}"
                )));
            }
            cumulative += deaths as f64 / at_risk as f64;
            jump_times.push(t);
            values.push(cumulative);
        }
        i = j;
    }
    StepCurve::new(jump_times, values, horizon)
}

/// Mean cumulative function of a fleet observed on a common window `[0, horizon]`.
pub fn mcf(histories: &[EventHistory], horizon: f64) -> Result<StepCurve> {
    if histories.is_empty() {
        return Err(GtError::MalformedSample(
            "at least one event history is required".into(),
        ));
    }
    if let Some(h) = histories.iter().find(|h| h.window_end != horizon) {
        return Err(GtError::InvalidParameter(format!(
            "system {} observed until {}, expected common window end {horizon}",
            h.system_id, h.window_end
        )));
    }
    let mut events: Vec<f64> = histories
        .iter()
        .flat_map(|h| h.event_times.iter().copied())
        .collect();
    events.sort_by(f64::total_cmp);

    let systems = histories.len() as f64;
    let mut jump_times: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (k, &t) in events.iter().enumerate() {
        let value = (k + 1) as f64 / systems;
        if jump_times.last() == Some(&t) {
            *values.last_mut().expect("paired with jump time") = value;
        } else {
            jump_times.push(t);
            values.push(value);
        }
    }
    StepCurve::new(jump_times, values, horizon)
}

/// GT coefficient of an empirical step curve.
pub fn gt_from_step_curve(curve: &StepCurve) -> Result<GtResult> {
    let terminal = curve.terminal();
    if curve.jump_times.is_empty() || terminal <= 0.0 {
        return Err(GtError::DegenerateCurve);
    }
    let value = gt_ratio(curve.integral(), curve.horizon, terminal);
    Ok(GtResult::analytic(value, curve.horizon, DEFAULT_CLASS_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gt::{gt_from_sampled_curve, gt_nonrepairable, SampledCurve, DEFAULT_QUAD_TOL};
    use crate::hazard::DistributionSpec;
    use crate::point_process::{replication_rng, simulate_history, PointProcessSpec};
    use proptest::prelude::*;
    use rand::Rng;

    fn rec(time: f64, censored: bool) -> LifetimeRecord {
        LifetimeRecord { time, censored }
    }

    #[test]
    fn nelson_aalen_uncensored() {
        let s = LifetimeSample::uncensored(&[1.0, 2.0, 3.0], 3.0).unwrap();
        let c = nelson_aalen(&s).unwrap();
        assert_eq!(c.jump_times(), &[1.0, 2.0, 3.0]);
        let expected = [1.0 / 3.0, 1.0 / 3.0 + 0.5, 1.0 / 3.0 + 0.5 + 1.0];
        for (v, e) in c.values().iter().zip(expected) {
            assert!((v - e).abs() < 1e-15);
        }
    }

    #[test]
    fn nelson_aalen_single_failure() {
        let s = LifetimeSample::uncensored(&[1.0], 2.0).unwrap();
        let c = nelson_aalen(&s).unwrap();
        assert_eq!(c.jump_times(), &[1.0]);
        assert_eq!(c.values(), &[1.0]);
    }

    #[test]
    fn nelson_aalen_with_censoring() {
        let s = LifetimeSample::new(vec![rec(1.0, false), rec(2.0, true), rec(3.0, false)], 3.0)
            .unwrap();
        let c = nelson_aalen(&s).unwrap();
        assert_eq!(c.jump_times(), &[1.0, 3.0]);
        assert!((c.values()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.values()[1] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn nelson_aalen_ties_and_late_records() {
        // two deaths and one censoring at t=2; failure at 5 lies past the horizon
        let s = LifetimeSample::new(
            vec![
                rec(2.0, false),
                rec(2.0, true),
                rec(2.0, false),
                rec(1.0, false),
                rec(5.0, false),
            ],
            4.0,
        )
        .unwrap();
        let c = nelson_aalen(&s).unwrap();
        assert_eq!(c.jump_times(), &[1.0, 2.0]);
        assert!((c.values()[0] - 0.2).abs() < 1e-15);
        assert!((c.values()[1] - 0.7).abs() < 1e-15);
        assert_eq!(c.horizon(), 4.0);
    }

    #[test]
    fn lifetime_sample_validation() {
        assert!(LifetimeSample::uncensored(&[0.0, 1.0], 2.0).is_err());
        assert!(LifetimeSample::uncensored(&[3.0], 2.0).is_err());
        assert!(LifetimeSample::new(vec![rec(1.0, true)], 2.0).is_err());
        assert!(LifetimeSample::uncensored(&[], 2.0).is_err());
        assert!(LifetimeSample::uncensored(&[1.0], -2.0).is_err());
    }

    #[test]
    fn mcf_examples() {
        let hs = vec![
            EventHistory::new("a", vec![1.0], 2.0).unwrap(),
            EventHistory::new("b", vec![1.0, 2.0], 2.0).unwrap(),
        ];
        let c = mcf(&hs, 2.0).unwrap();
        assert_eq!(c.jump_times(), &[1.0, 2.0]);
        assert_eq!(c.values(), &[1.0, 1.5]);

        let one = vec![EventHistory::new("x", vec![], 2.0).unwrap()];
        let c = mcf(&one, 2.0).unwrap();
        assert!(c.jump_times().is_empty());
        assert_eq!(gt_from_step_curve(&c), Err(GtError::DegenerateCurve));

        let same: Vec<_> = (0..3)
            .map(|i| EventHistory::new(i.to_string(), vec![0.5, 1.5], 2.0).unwrap())
            .collect();
        let c = mcf(&same, 2.0).unwrap();
        assert_eq!(c.jump_times(), &[0.5, 1.5]);
        assert_eq!(c.values(), &[1.0, 2.0]);
    }

    #[test]
    fn mcf_validation() {
        assert!(mcf(&[], 1.0).is_err());
        let h = EventHistory::new("a", vec![1.0], 3.0).unwrap();
        assert!(mcf(&[h], 2.0).is_err());
        assert!(EventHistory::new("a", vec![1.0, 1.0], 3.0).is_err());
        assert!(EventHistory::new("a", vec![4.0], 3.0).is_err());
        assert!(EventHistory::new("a", vec![0.0], 3.0).is_err());
    }

    #[test]
    fn step_curve_gt_examples() {
        let c = StepCurve::new(vec![1.0, 2.0], vec![1.0, 1.5], 2.0).unwrap();
        assert_eq!(c.integral(), 1.0);
        assert!((gt_from_step_curve(&c).unwrap().value - 1.0 / 3.0).abs() < 1e-15);

        let half = StepCurve::new(vec![1.5], vec![2.5], 3.0).unwrap();
        assert_eq!(gt_from_step_curve(&half).unwrap().value, 0.0);

        let na = nelson_aalen(&LifetimeSample::uncensored(&[1.0, 2.0, 3.0], 3.0).unwrap()).unwrap();
        let expected = 1.0 - 2.0 * (1.0 / 3.0 + 5.0 / 6.0) / (3.0 * 11.0 / 6.0);
        assert!((gt_from_step_curve(&na).unwrap().value - expected).abs() < 1e-12);
        assert!((expected - 0.575_757_575_757_575_8).abs() < 1e-15);
    }

    #[test]
    fn step_curve_validation() {
        assert!(StepCurve::new(vec![1.0, 0.5], vec![1.0, 2.0], 2.0).is_err());
        assert!(StepCurve::new(vec![1.0, 1.5], vec![1.0, 1.0], 2.0).is_err());
        assert!(StepCurve::new(vec![3.0], vec![1.0], 2.0).is_err());
        assert!(StepCurve::new(vec![1.0], vec![1.0, 2.0], 2.0).is_err());
        let c = StepCurve::new(vec![1.0, 1.5], vec![1.0, 2.0], 2.0).unwrap();
        assert_eq!(c.value_at(0.5), 0.0);
        assert_eq!(c.value_at(1.0), 1.0);
        assert_eq!(c.value_at(1.7), 2.0);
    }

    /// Piecewise-linear rendering of a step curve with a near-vertical rise at
    /// each jump (left limit one ulp before the jump time).
    fn as_sampled(curve: &StepCurve) -> SampledCurve {
        let mut grid = vec![0.0];
        let mut values = vec![0.0];
        let mut level = 0.0;
        for (&t, &v) in curve.jump_times().iter().zip(curve.values()) {
            grid.extend([t.next_down(), t]);
            values.extend([level, v]);
            level = v;
        }
        if *grid.last().unwrap() < curve.horizon() {
            grid.push(curve.horizon());
            values.push(level);
        }
        SampledCurve::new(grid, values).unwrap()
    }

    proptest! {
        #[test]
        fn step_integration_matches_refined_trapezoid(
            raw in proptest::collection::vec((0.01f64..1.0, 0.01f64..3.0), 1..30),
            tail in 0.0f64..2.0,
        ) {
            let mut t = 0.0;
            let mut v = 0.0;
            let (mut times, mut values) = (Vec::new(), Vec::new());
            for (dt, dv) in raw {
                t += dt;
                v += dv;
                times.push(t);
                values.push(v);
            }
            let curve = StepCurve::new(times, values, t + tail).unwrap();
            let exact = gt_from_step_curve(&curve).unwrap().value;
            let refined = gt_from_sampled_curve(&as_sampled(&curve)).unwrap().value;
            prop_assert!((exact - refined).abs() < 1e-12, "{} vs {}", exact, refined);
        }
    }

    fn inverse_cdf_sample(dist: &DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = replication_rng(seed, 0);
        let (scale, shape) = (dist.scale(), dist.shape());
        (0..n)
            .map(|_| {
                let e = -(1.0 - rng.random::<f64>()).ln();
                scale * e.powf(1.0 / shape)
            })
            .collect()
    }

    #[test]
    fn exponential_lifetimes_give_near_zero() {
        let d = DistributionSpec::exponential(1.0).unwrap();
        let times = inverse_cdf_sample(&d, 10_000, 21);
        let sample = LifetimeSample::uncensored(&times, 2.0).unwrap();
        let c = gt_from_step_curve(&nelson_aalen(&sample).unwrap())
            .unwrap()
            .value;
        assert!(c.abs() < 0.05, "{c}");
    }

    #[test]
    fn weibull_lifetimes_track_parametric_value() {
        let d = DistributionSpec::weibull(1.0, 2.0).unwrap();
        let times = inverse_cdf_sample(&d, 10_000, 22);
        for horizon in [1.0, 1.5, 2.0] {
            let sample = LifetimeSample::uncensored(&times, horizon).unwrap();
            let c = gt_from_step_curve(&nelson_aalen(&sample).unwrap())
                .unwrap()
                .value;
            let reference = gt_nonrepairable(&d, horizon, DEFAULT_QUAD_TOL)
                .unwrap()
                .value;
            assert!(
                (c - reference).abs() < 0.1,
                "T={horizon}: {c} vs {reference}"
            );
        }
    }

    #[test]
    fn hpp_fleet_gives_near_zero() {
        let spec = PointProcessSpec::new(DistributionSpec::exponential(1.0).unwrap(), 0.5).unwrap();
        let histories: Vec<_> = (0..1000)
            .map(|i| {
                let mut rng = replication_rng(23, i);
                let events = simulate_history(&spec, 5.0, &mut rng).unwrap();
                EventHistory::new(format!("s{i}"), events, 5.0).unwrap()
            })
            .collect();
        let c = gt_from_step_curve(&mcf(&histories, 5.0).unwrap())
            .unwrap()
            .value;
        assert!(c.abs() < 0.05, "{c}");
    }
}
