//! Repairable-system point processes and their GT coefficient.
//!
//! A process is described by the distribution of time to first failure and a
//! repair effectiveness factor `q ∈ [0, 1]` acting on the system's virtual
//! age. After a repair at virtual age `v`, the next interarrival `x` has
//! conditional survival `R(v + x) / R(v)`, which is sampled by solving
//! `H(v + x) = H(v) + E` for a unit exponential `E`.
//!
//! `q = 0` restores the unit to new (renewal process) and `q = 1` leaves the
//! age untouched (NHPP with `Λ(t) = H(t)`); an exponential underlying
//! distribution gives the HPP for every `q`.
//!
//! Monte-Carlo estimates draw replication `r` from the ChaCha stream `r` of
//! the master seed, so results do not depend on how replications are
//! scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GtError, Result};
use crate::gt::{gt_from_sampled_curve, gt_ratio, uniform_grid, GtResult, SampledCurve};
use crate::hazard::DistributionSpec;

pub const DEFAULT_REPLICATIONS: usize = 100_000;
pub const DEFAULT_GRID_POINTS: usize = 200;
pub const BOOTSTRAP_RESAMPLES: usize = 200;

const CHUNK: usize = 1024;
const BOOTSTRAP_STREAM: u64 = u64::MAX;
const RENEWAL_TOL: f64 = 1e-5;
const RENEWAL_MAX_STEPS: usize = 1 << 14;

/// How a repair updates the virtual age `v` after an interarrival `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VirtualAgeModel {
    /// `v ← v + q·x`: repair only removes damage from the latest interarrival.
    KijimaI,
    /// `v ← q·(v + x)`: repair scales back all accumulated age.
    #[default]
    KijimaII,
}

impl VirtualAgeModel {
    pub fn next_age(self, age: f64, interarrival: f64, q: f64) -> f64 {
        match self {
            VirtualAgeModel::KijimaI => age + q * interarrival,
            VirtualAgeModel::KijimaII => q * (age + interarrival),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProcessModel {
    Hpp,
    Nhpp,
    Renewal,
    GRenewal,
}

impl ProcessModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProcessModel::Hpp => "HPP",
            ProcessModel::Nhpp => "NHPP",
            ProcessModel::Renewal => "RP",
            ProcessModel::GRenewal => "GRP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointProcessSpec {
    underlying: DistributionSpec,
    repair_effectiveness: f64,
    virtual_age: VirtualAgeModel,
}

impl PointProcessSpec {
    pub fn new(underlying: DistributionSpec, repair_effectiveness: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&repair_effectiveness) {
            return Err(GtError::InvalidParameter(format!(
                "repair effectiveness must lie in [0, 1], got {repair_effectiveness}"
            )));
        }
        Ok(Self {
            underlying,
            repair_effectiveness,
            virtual_age: VirtualAgeModel::default(),
        })
    }

    pub fn with_virtual_age(mut self, model: VirtualAgeModel) -> Self {
        self.virtual_age = model;
        self
    }

    pub fn underlying(&self) -> &DistributionSpec {
        &self.underlying
    }

    pub fn repair_effectiveness(&self) -> f64 {
        self.repair_effectiveness
    }

    pub fn virtual_age(&self) -> VirtualAgeModel {
        self.virtual_age
    }

    pub fn model(&self) -> ProcessModel {
        if self.underlying.shape() == 1.0 {
            ProcessModel::Hpp
        } else if self.repair_effectiveness == 0.0 {
            ProcessModel::Renewal
        } else if self.repair_effectiveness == 1.0 {
            ProcessModel::Nhpp
        } else {
            ProcessModel::GRenewal
        }
    }
}

/// Time `x > 0` to the next failure from virtual age `age`, given a unit
/// exponential draw `e`: the root of `H(age + x) = H(age) + e`.
pub fn conditional_interarrival(dist: &DistributionSpec, age: f64, e: f64) -> f64 {
    match *dist {
        DistributionSpec::Exponential { rate } => e / rate,
        DistributionSpec::Weibull { scale, shape } => {
            scale * ((age / scale).powf(shape) + e).powf(1.0 / shape) - age
        }
        DistributionSpec::Gamma { .. } => {
            let scale = dist.scale();
            let target = dist.cumulative_hazard_raw(age) + e;
            let mut lo = age;
            let mut hi = age + scale;
            while dist.cumulative_hazard_raw(hi) < target {
                lo = hi;
                hi = age + 2.0 * (hi - age);
            }
            while hi - lo > 1e-10 * scale {
                let mid = 0.5 * (lo + hi);
                if dist.cumulative_hazard_raw(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi) - age
        }
    }
}

/// Simulates one history and returns its event times in `(0, horizon]`.
pub fn simulate_history<R: Rng + ?Sized>(
    spec: &PointProcessSpec,
    horizon: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(GtError::Domain(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let mut events = Vec::new();
    simulate_into(spec, horizon, rng, &mut events);
    Ok(events)
}

fn simulate_into<R: Rng + ?Sized>(
    spec: &PointProcessSpec,
    horizon: f64,
    rng: &mut R,
    events: &mut Vec<f64>,
) {
    events.clear();
    let q = spec.repair_effectiveness;
    let mut age = 0.0;
    let mut now = 0.0;
    loop {
        // 1 − U lies in (0, 1], so e is finite
        let e = -(1.0 - rng.random::<f64>()).ln();
        let x = conditional_interarrival(&spec.underlying, age, e);
        let next = now + x;
        if !(next > now) {
            // interarrival lost to rounding; redraw
            continue;
        }
        if next > horizon {
            return;
        }
        events.push(next);
        now = next;
        age = spec.virtual_age.next_age(age, x, q);
    }
}

/// Per-replication quantities kept for resampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationSummary {
    /// Trapezoid integral of this replication's grid-sampled `N(t)`.
    pub area: f64,
    /// `N(T)`.
    pub terminal: u32,
}

/// Monte-Carlo estimate of the cumulative intensity `Λ(t) = E[N(t)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CifEstimate {
    grid: Vec<f64>,
    mean_counts: Vec<f64>,
    std_errors: Vec<f64>,
    replications: usize,
    seed: u64,
    summaries: Vec<ReplicationSummary>,
}

impl CifEstimate {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn mean_counts(&self) -> &[f64] {
        &self.mean_counts
    }

    pub fn std_errors(&self) -> &[f64] {
        &self.std_errors
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("nonempty grid")
    }

    pub fn summaries(&self) -> &[ReplicationSummary] {
        &self.summaries
    }

    pub fn to_sampled_curve(&self) -> Result<SampledCurve> {
        SampledCurve::new(self.grid.clone(), self.mean_counts.clone())
    }
}

/// Rng for replication `index` of a run seeded with `seed`.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

struct ChunkTotals {
    sum: Vec<u64>,
    sum_sq: Vec<u64>,
    summaries: Vec<ReplicationSummary>,
}

fn run_chunk(
    spec: &PointProcessSpec,
    grid: &[f64],
    seed: u64,
    reps: std::ops::Range<usize>,
) -> ChunkTotals {
    let n = grid.len();
    let horizon = grid[n - 1];
    let mut totals = ChunkTotals {
        sum: vec![0; n],
        sum_sq: vec![0; n],
        summaries: Vec::with_capacity(reps.len()),
    };
    let mut events = Vec::new();
    let mut counts = vec![0u32; n];
    for r in reps {
        let mut rng = replication_rng(seed, r as u64);
        simulate_into(spec, horizon, &mut rng, &mut events);
        counts.iter_mut().for_each(|c| *c = 0);
        for &e in &events {
            // first grid point at or after the event
            counts[grid.partition_point(|&g| g < e)] += 1;
        }
        let mut running = 0u32;
        let mut area = 0.0;
        for i in 0..n {
            let prev = running;
            running += counts[i];
            counts[i] = running;
            if i > 0 {
                area += 0.5 * (grid[i] - grid[i - 1]) * f64::from(prev + running);
            }
            totals.sum[i] += u64::from(running);
            totals.sum_sq[i] += u64::from(running) * u64::from(running);
        }
        totals.summaries.push(ReplicationSummary {
            area,
            terminal: running,
        });
    }
    totals
}

/// Estimates `Λ(t)` on a uniform grid of `grid_points` over `[0, horizon]`.
///
/// Output is bit-identical for identical arguments regardless of the size of
/// the rayon pool it runs on.
pub fn estimate_cif(
    spec: &PointProcessSpec,
    horizon: f64,
    grid_points: usize,
    replications: usize,
    seed: u64,
) -> Result<CifEstimate> {
    if replications < 100 {
        return Err(GtError::InvalidParameter(format!(
            "at least 100 replications required, got {replications}"
        )));
    }
    let grid = uniform_grid(horizon, grid_points)?;
    let chunks: Vec<ChunkTotals> = (0..replications.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            run_chunk(
                spec,
                &grid,
                seed,
                c * CHUNK..((c + 1) * CHUNK).min(replications),
            )
        })
        .collect();

    let n = grid.len();
    let mut sum = vec![0u64; n];
    let mut sum_sq = vec![0u64; n];
    let mut summaries = Vec::with_capacity(replications);
    for chunk in chunks {
        for i in 0..n {
            sum[i] += chunk.sum[i];
            sum_sq[i] += chunk.sum_sq[i];
        }
        summaries.extend(chunk.summaries);
    }

    let reps = replications as f64;
    let mean_counts = sum.iter().map(|&s| s as f64 / reps).collect();
    let std_errors = sum
        .iter()
        .zip(&sum_sq)
        .map(|(&s, &ss)| {
            // n·Σx² − (Σx)² exactly, then the unbiased variance
            let num = replications as u128 * u128::from(ss) - u128::from(s) * u128::from(s);
            let var = num as f64 / (reps * (reps - 1.0));
            (var / reps).sqrt()
        })
        .collect();

    Ok(CifEstimate {
        grid,
        mean_counts,
        std_errors,
        replications,
        seed,
        summaries,
    })
}

/// GT coefficient of an estimated CIF, with a bootstrap standard error over
/// replications.
pub fn gt_repairable(cif: &CifEstimate) -> Result<GtResult> {
    let value = gt_from_sampled_curve(&cif.to_sampled_curve()?)?.value;
    let std_error = bootstrap_std_error(cif, BOOTSTRAP_RESAMPLES);
    Ok(GtResult::monte_carlo(value, cif.horizon(), std_error))
}

fn bootstrap_std_error(cif: &CifEstimate, resamples: usize) -> f64 {
    let horizon = cif.horizon();
    let n = cif.summaries.len();
    let stats: Vec<f64> = (0..resamples)
        .into_par_iter()
        .filter_map(|b| {
            let mut rng = replication_rng(cif.seed, BOOTSTRAP_STREAM - b as u64);
            let (mut area, mut terminal) = (0.0, 0u64);
            for _ in 0..n {
                let s = cif.summaries[rng.random_range(0..n)];
                area += s.area;
                terminal += u64::from(s.terminal);
            }
            (terminal > 0).then(|| gt_ratio(area, horizon, terminal as f64))
        })
        .collect();
    if stats.len() < 2 {
        return 0.0;
    }
    let m = stats.len() as f64;
    let mean = stats.iter().sum::<f64>() / m;
    (stats.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
}

/// Power-law NHPP cumulative intensity `(t/α)^β`.
pub fn power_law_cif(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(GtError::Domain(format!(
            "power law needs α > 0 and β > 0, got α={alpha}, β={beta}"
        )));
    }
    if !(t >= 0.0) {
        return Err(GtError::Domain(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    Ok((t / alpha).powf(beta))
}

/// Solves the renewal equation `m(t) = F(t) + ∫₀ᵗ m(t − x) dF(x)` on a
/// uniform grid, doubling the step count from `steps` until the terminal
/// value moves by less than 1e-5.
pub fn solve_renewal_equation(
    dist: &DistributionSpec,
    horizon: f64,
    steps: usize,
) -> Result<SampledCurve> {
    if steps < 16 {
        return Err(GtError::InvalidParameter(format!(
            "renewal solver needs at least 16 steps, got {steps}"
        )));
    }
    let mut n = steps;
    let mut curve = renewal_on_grid(dist, horizon, n)?;
    while n < RENEWAL_MAX_STEPS {
        n *= 2;
        let finer = renewal_on_grid(dist, horizon, n)?;
        let delta = (finer.terminal() - curve.terminal()).abs();
        curve = finer;
        if delta < RENEWAL_TOL {
            break;
        }
    }
    Ok(curve)
}

/// One solve with `steps` intervals: the Stieltjes integral uses trapezoid
/// weights `½(m(tᵢ − tⱼ) + m(tᵢ − tⱼ₋₁))·(F(tⱼ) − F(tⱼ₋₁))`. The `j = 1`
/// term contains `m(tᵢ)` itself, which is solved for in closed form.
pub fn renewal_on_grid(
    dist: &DistributionSpec,
    horizon: f64,
    steps: usize,
) -> Result<SampledCurve> {
    let grid = uniform_grid(horizon, steps + 1)?;
    let cdf: Vec<f64> = grid.iter().map(|&t| dist.cdf(t)).collect::<Result<_>>()?;
    let df: Vec<f64> = cdf.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; steps + 1];
    let self_weight = 1.0 - 0.5 * df[0];
    for i in 1..=steps {
        let mut acc = cdf[i] + 0.5 * m[i - 1] * df[0];
        for j in 2..=i {
            acc += 0.5 * (m[i - j] + m[i - j + 1]) * df[j - 1];
        }
        m[i] = acc / self_weight;
    }
    SampledCurve::new(grid, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weibull_pp(shape: f64, q: f64) -> PointProcessSpec {
        PointProcessSpec::new(DistributionSpec::weibull(1.0, shape).unwrap(), q).unwrap()
    }

    #[test]
    fn spec_validation_and_tags() {
        let w = DistributionSpec::weibull(1.0, 2.0).unwrap();
        assert!(PointProcessSpec::new(w, 1.2).is_err());
        assert!(PointProcessSpec::new(w, -0.1).is_err());
        assert_eq!(weibull_pp(2.0, 0.0).model(), ProcessModel::Renewal);
        assert_eq!(weibull_pp(2.0, 1.0).model(), ProcessModel::Nhpp);
        assert_eq!(weibull_pp(2.0, 0.5).model(), ProcessModel::GRenewal);
        assert_eq!(weibull_pp(1.0, 0.5).model(), ProcessModel::Hpp);
        assert_eq!(
            weibull_pp(2.0, 0.5).virtual_age(),
            VirtualAgeModel::KijimaII
        );
    }

    #[test]
    fn kijima_arithmetic() {
        let q = 0.5;
        let v = [0.5, 0.7]
            .iter()
            .fold(0.0, |v, &x| VirtualAgeModel::KijimaI.next_age(v, x, q));
        assert!((v - 0.6).abs() < 1e-15);
        let v = [0.5, 0.7]
            .iter()
            .fold(0.0, |v, &x| VirtualAgeModel::KijimaII.next_age(v, x, q));
        assert!((v - 0.475).abs() < 1e-15);
        for m in [VirtualAgeModel::KijimaI, VirtualAgeModel::KijimaII] {
            assert_eq!(
                m.next_age(0.8, 0.3, 0.0),
                if m == VirtualAgeModel::KijimaI {
                    0.8
                } else {
                    0.0
                }
            );
            assert!((m.next_age(0.8, 0.3, 1.0) - 1.1).abs() < 1e-15);
        }
    }

    #[test]
    fn weibull_conditional_inversion() {
        let d = DistributionSpec::weibull(1.0, 2.0).unwrap();
        for (prev, u) in [(0.0, 0.3), (0.4, 0.9), (1.7, 0.05)] {
            let e = -f64::ln(1.0 - u);
            let next = prev + conditional_interarrival(&d, prev, e);
            let expected = (prev.powi(2) - f64::ln(1.0 - u)).powf(0.5);
            assert!((next - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_conditional_solves_hazard_equation() {
        let d = DistributionSpec::gamma(2.5, 1.5).unwrap();
        for (age, e) in [(0.0, 0.2), (1.3, 1.0), (4.0, 3.5), (0.0, 1e-6)] {
            let x = conditional_interarrival(&d, age, e);
            assert!(x > 0.0);
            let lhs = d.cumulative_hazard(age + x).unwrap() - d.cumulative_hazard(age).unwrap();
            let h = d.hazard(age + x).unwrap();
            // bisection resolves x to 1e-10·scale
            assert!(
                (lhs - e).abs() <= h * 1e-9 + 1e-12,
                "age={age} e={e}: {lhs}"
            );
        }
    }

    #[test]
    fn histories_are_strictly_increasing_within_horizon() {
        let specs = [
            weibull_pp(0.5, 0.0),
            weibull_pp(2.0, 0.5),
            weibull_pp(3.0, 1.0),
            PointProcessSpec::new(DistributionSpec::gamma(0.4, 2.0).unwrap(), 0.3).unwrap(),
            PointProcessSpec::new(DistributionSpec::gamma(3.0, 1.0).unwrap(), 0.7)
                .unwrap()
                .with_virtual_age(VirtualAgeModel::KijimaI),
        ];
        for spec in specs {
            for r in 0..2000 {
                let mut rng = replication_rng(5, r);
                let h = simulate_history(&spec, 2.0, &mut rng).unwrap();
                assert!(h.iter().all(|&t| t > 0.0 && t <= 2.0));
                assert!(h.windows(2).all(|w| w[1] > w[0]));
            }
        }
    }

    #[test]
    fn hpp_interarrivals_have_unit_mean() {
        let spec = weibull_pp(1.0, 0.0);
        let mut rng = replication_rng(11, 0);
        // one long history, so the censored final gap is negligible
        let h = simulate_history(&spec, 120_000.0, &mut rng).unwrap();
        let gaps: Vec<f64> = std::iter::once(h[0])
            .chain(h.windows(2).map(|w| w[1] - w[0]))
            .take(100_000)
            .collect();
        assert_eq!(gaps.len(), 100_000);
        let n = gaps.len() as f64;
        let mean = gaps.iter().sum::<f64>() / n;
        // exponential(1) has unit standard deviation
        assert!((mean - 1.0).abs() < 4.0 / n.sqrt(), "mean {mean}");
    }

    #[test]
    fn power_law_examples() {
        assert_eq!(power_law_cif(1.0, 2.0, 2.0).unwrap(), 4.0);
        assert_eq!(power_law_cif(3.0, 0.7, 0.0).unwrap(), 0.0);
        assert_eq!(power_law_cif(2.0, 1.0, 3.0).unwrap(), 1.5);
        assert!(power_law_cif(0.0, 1.0, 1.0).is_err());
        assert!(power_law_cif(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn cif_estimate_shape_and_validation() {
        let spec = weibull_pp(2.0, 1.0);
        assert!(estimate_cif(&spec, 2.0, 10, 99, 1).is_err());
        assert!(estimate_cif(&spec, 2.0, 2, 100, 1).is_err());
        let cif = estimate_cif(&spec, 2.0, 21, 3000, 1).unwrap();
        assert_eq!(cif.grid().len(), 21);
        assert_eq!(cif.mean_counts()[0], 0.0);
        assert!(cif.mean_counts().windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(cif.summaries().len(), 3000);
        assert_eq!(cif.seed(), 1);
        let total: u64 = cif.summaries().iter().map(|s| u64::from(s.terminal)).sum();
        assert_eq!(total as f64 / 3000.0, *cif.mean_counts().last().unwrap());
    }

    #[test]
    fn std_errors_match_direct_computation() {
        let spec = weibull_pp(2.0, 0.5);
        let cif = estimate_cif(&spec, 2.0, 5, 500, 3).unwrap();
        let terminals: Vec<f64> = cif
            .summaries()
            .iter()
            .map(|s| f64::from(s.terminal))
            .collect();
        let n = terminals.len() as f64;
        let mean = terminals.iter().sum::<f64>() / n;
        let var = terminals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(((var / n).sqrt() - cif.std_errors()[4]).abs() < 1e-12);
        assert_eq!(cif.std_errors()[0], 0.0);
    }

    #[test]
    fn renewal_equation_for_exponential_is_a_line() {
        let d = DistributionSpec::exponential(1.0).unwrap();
        let m = renewal_on_grid(&d, 2.0, 2048).unwrap();
        assert!((m.terminal() - 2.0).abs() < 1e-4);
        for (t, v) in m.grid().iter().zip(m.values()) {
            assert!((v - t).abs() < 1e-4);
        }
    }

    #[test]
    fn renewal_solver_converges_by_step_halving() {
        let d = DistributionSpec::weibull(1.0, 2.0).unwrap();
        let coarse = solve_renewal_equation(&d, 2.0, 16).unwrap();
        let fine = solve_renewal_equation(&d, 2.0, 2048).unwrap();
        assert!((coarse.terminal() - fine.terminal()).abs() < 1e-4);
        // fine-grid reference 1.894039; GT ≈ 0.151516
        assert!(
            (fine.terminal() - 1.894_039).abs() < 2e-5,
            "{}",
            fine.terminal()
        );
        let c = gt_from_sampled_curve(&fine).unwrap().value;
        assert!((c - 0.151_516).abs() < 5e-5, "{c}");
        assert!(solve_renewal_equation(&d, 2.0, 8).is_err());
    }
}
