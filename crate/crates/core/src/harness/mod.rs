//! Convergence and error-versus-time studies.
//!
//! * [`aitken_order`]: spatial order from three nested meshes sharing one
//!   time grid, `p ≈ log₂(‖u_{h/2} − u_h‖ / ‖u_{h/4} − u_{h/2}‖)`.
//! * [`time_error_study`]: `L²` error against a spatially refined reference
//!   at every time level, with the step chosen by [`dt_rule`].
//! * [`fit_power_law`]: least-squares fit of `a t^{-s}` in log–log space.

mod report;

pub use report::{emit_report, format_number, write_atomically, write_order_csv, write_time_series_csv, Report};

use crate::error::{invalid, Error, Result};
use crate::fem1d::{difference_norms, make_mesh};
use crate::fraccalc::FracOrder;
use crate::timestepper::{march, ProblemSpec, SolutionHistory, TimeGrid};

/// Default safety factor in the step rule.
pub const DEFAULT_GAMMA: f64 = 0.1;
/// Default lower bound on the time step.
pub const DEFAULT_DT_FLOOR: f64 = 1e-7;
/// Default number of leading points used by the power-law fit.
pub const DEFAULT_FIT_POINTS: usize = 100;
/// Difference norms below this make the order estimate meaningless.
pub const RELIABILITY_FLOOR: f64 = 1e-12;

/// Result of a three-mesh order study.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStudyResult {
    pub problem: String,
    pub alpha: f64,
    pub h: f64,
    pub dt: f64,
    pub horizon: f64,
    /// `‖u_{h/2} − u_h‖`
    pub norm_coarse_mid: f64,
    /// `‖u_{h/4} − u_{h/2}‖`
    pub norm_mid_fine: f64,
    pub p_estimate: f64,
    /// False when a difference norm is at round-off level.
    pub reliable: bool,
}

/// `log₂(coarse_mid / mid_fine)`.
pub fn aitken_estimate(norm_coarse_mid: f64, norm_mid_fine: f64) -> f64 {
    (norm_coarse_mid / norm_mid_fine).log2()
}

/// One sample of an error-versus-time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeErrorPoint {
    pub t: f64,
    pub err: f64,
    /// `t^{α(2-p)/2} · err`
    pub scaled: f64,
}

/// Errors at every positive time level of a march.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeErrorSeries {
    pub problem: String,
    pub alpha: f64,
    pub p_nominal: f64,
    pub h: f64,
    pub dt: f64,
    pub points: Vec<TimeErrorPoint>,
}

impl TimeErrorSeries {
    /// Exponent `α(2-p)/2` predicted for the error blow-up at `t → 0`.
    pub fn predicted_exponent(&self) -> f64 {
        self.alpha * (2.0 - self.p_nominal) / 2.0
    }
}

/// `err ≈ a t^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub a: f64,
    pub s: f64,
    pub n_points: usize,
    pub residual_rms: f64,
}

/// Step-size rule `max(γ h^{2/α}, floor)` with its safety factor and floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtRule {
    pub gamma: f64,
    pub floor: f64,
}

impl Default for DtRule {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            floor: DEFAULT_DT_FLOOR,
        }
    }
}

impl DtRule {
    pub fn step(&self, h: f64, alpha: FracOrder) -> Result<f64> {
        dt_rule(h, alpha, self.gamma, self.floor)
    }

    /// Uniform grid on `[0, horizon]` with step at most [`DtRule::step`];
    /// fails with [`Error::StepCap`] when it would need too many steps.
    pub fn grid(&self, h: f64, alpha: FracOrder, horizon: f64) -> Result<TimeGrid> {
        TimeGrid::covering(horizon, self.step(h, alpha)?)
    }
}

/// `max(γ h^{2/α}, dt_floor)`.
pub fn dt_rule(h: f64, alpha: FracOrder, gamma: f64, dt_floor: f64) -> Result<f64> {
    dt_rule_raw(h, alpha.value(), gamma, dt_floor)
}

fn dt_rule_raw(h: f64, alpha: f64, gamma: f64, dt_floor: f64) -> Result<f64> {
    if !(h > 0.0 && h < 1.0) {
        return Err(invalid("h", format!("{h} outside (0, 1)")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid("gamma", format!("{gamma} outside (0, 1]")));
    }
    if !(dt_floor > 0.0) {
        return Err(invalid("dt_floor", format!("must be positive, got {dt_floor}")));
    }
    Ok((gamma * h.powf(2.0 / alpha)).max(dt_floor))
}

/// Element count `1/h`, required to be an integer.
fn elements_for(h: f64) -> Result<usize> {
    let n = (1.0 / h).round();
    if !(h > 0.0) || ((1.0 / h) - n).abs() > 1e-8 * n || n < 2.0 {
        return Err(invalid("h", format!("1/h = {} is not an integer >= 2", 1.0 / h)));
    }
    Ok(n as usize)
}

/// Number of worker threads: `SUBDIFF_THREADS`, 0 or unset meaning all cores.
pub fn worker_count() -> usize {
    let auto = || std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var("SUBDIFF_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(0) | None => auto(),
        Some(n) => n,
    }
}

/// Runs independent jobs on at most `workers` threads; results keep job order.
pub fn run_parallel<T, F>(jobs: Vec<F>, workers: usize) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if workers <= 1 || jobs.len() <= 1 {
        return jobs.into_iter().map(|j| j()).collect();
    }
    let mut results: Vec<Option<T>> = Vec::new();
    let mut pending = jobs.into_iter();
    loop {
        let batch: Vec<F> = pending.by_ref().take(workers).collect();
        if batch.is_empty() {
            break;
        }
        std::thread::scope(|s| {
            let handles: Vec<_> = batch.into_iter().map(|j| s.spawn(j)).collect();
            for h in handles {
                results.push(Some(h.join().expect("worker panicked")));
            }
        });
    }
    results.into_iter().map(|r| r.expect("every job produced a result")).collect()
}

fn march_on(prob: &ProblemSpec, n: usize, grid: &TimeGrid, alpha: FracOrder) -> Result<SolutionHistory> {
    march(prob, &make_mesh(n)?, grid, alpha)
}

/// Order estimate from marches on `h`, `h/2`, `h/4` with the same time grid,
/// compared at `t = horizon`.
pub fn aitken_order(prob: &ProblemSpec, alpha: FracOrder, h: f64, dt: f64, horizon: f64) -> Result<OrderStudyResult> {
    let n = elements_for(h)?;
    let grid = TimeGrid::covering(horizon, dt)?;
    let jobs: Vec<_> = [n, 2 * n, 4 * n]
        .into_iter()
        .map(|m| move || march_on(prob, m, &grid, alpha).map(|hist| hist.last().into_coeffs()))
        .collect();
    let mut finals = run_parallel(jobs, worker_count()).into_iter();
    let (u1, u2, u4) = (
        finals.next().unwrap()?,
        finals.next().unwrap()?,
        finals.next().unwrap()?,
    );
    let d12 = difference_norms(n, &u1, 2 * n, &u2)?.l2;
    let d24 = difference_norms(2 * n, &u2, 4 * n, &u4)?.l2;
    Ok(OrderStudyResult {
        problem: prob.name().to_string(),
        alpha: alpha.value(),
        h,
        dt: grid.tau(),
        horizon: grid.horizon(),
        norm_coarse_mid: d12,
        norm_mid_fine: d24,
        p_estimate: aitken_estimate(d12, d24),
        reliable: d12 > RELIABILITY_FLOOR && d24 > RELIABILITY_FLOOR,
    })
}

/// Error-versus-time study with the default step rule.
pub fn time_error_study(
    prob: &ProblemSpec,
    alpha: FracOrder,
    h: f64,
    horizon: f64,
    ref_refine: usize,
) -> Result<TimeErrorSeries> {
    time_error_study_with(prob, alpha, h, horizon, ref_refine, &DtRule::default())
}

/// Error-versus-time study: the reference solution lives on `h/ref_refine`
/// and shares the time grid, so the series isolates the spatial error.
pub fn time_error_study_with(
    prob: &ProblemSpec,
    alpha: FracOrder,
    h: f64,
    horizon: f64,
    ref_refine: usize,
    rule: &DtRule,
) -> Result<TimeErrorSeries> {
    let grid = rule.grid(h, alpha, horizon)?;
    time_error_study_on(prob, alpha, h, &grid, ref_refine)
}

/// Error-versus-time study on a caller-supplied time grid.
pub fn time_error_study_on(
    prob: &ProblemSpec,
    alpha: FracOrder,
    h: f64,
    grid: &TimeGrid,
    ref_refine: usize,
) -> Result<TimeErrorSeries> {
    if ![2, 4, 8].contains(&ref_refine) {
        return Err(invalid("ref_refine", format!("{ref_refine} not in {{2, 4, 8}}")));
    }
    let n = elements_for(h)?;
    let jobs: Vec<_> = [n, ref_refine * n]
        .into_iter()
        .map(|m| move || march_on(prob, m, grid, alpha))
        .collect();
    // both histories are large; run them one after the other unless asked
    let workers = worker_count().min(2);
    let mut runs = run_parallel(jobs, workers).into_iter();
    let coarse = runs.next().unwrap()?;
    let fine = runs.next().unwrap()?;
    let exponent = alpha.value() * (2.0 - prob.p_nominal()) / 2.0;
    let mut points = Vec::with_capacity(grid.n_steps());
    for k in 1..=grid.n_steps() {
        let t = grid.time(k);
        let err = difference_norms(n, &coarse.frames()[k], ref_refine * n, &fine.frames()[k])?.l2;
        points.push(TimeErrorPoint {
            t,
            err,
            scaled: t.powf(exponent) * err,
        });
    }
    Ok(TimeErrorSeries {
        problem: prob.name().to_string(),
        alpha: alpha.value(),
        p_nominal: prob.p_nominal(),
        h,
        dt: grid.tau(),
        points,
    })
}

/// Least-squares fit of `log y = log a − s log t`.
pub fn fit_log_log(t: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if t.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            found: y.len(),
        });
    }
    if t.len() < 2 {
        return Err(Error::Fit("need at least two points".into()));
    }
    if let Some(i) = y.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Fit(format!(
            "non-positive value at point {i}; shrink the window below {i}"
        )));
    }
    if let Some(i) = t.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Fit(format!("non-positive time at point {i}")));
    }
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(PowerLawFit {
        a: intercept.exp(),
        s: -slope,
        n_points: lx.len(),
        residual_rms: rms,
    })
}

/// Fit `err ≈ a t^{-s}` over the first `n_points` entries of the series.
pub fn fit_power_law(series: &TimeErrorSeries, n_points: usize) -> Result<PowerLawFit> {
    if n_points > series.points.len() {
        return Err(Error::Fit(format!(
            "window of {n_points} exceeds the {} available points",
            series.points.len()
        )));
    }
    let window = &series.points[..n_points];
    let t: Vec<f64> = window.iter().map(|p| p.t).collect();
    let e: Vec<f64> = window.iter().map(|p| p.err).collect();
    fit_log_log(&t, &e)
}

/// Log–log slope of the scaled column over the first `n_points` entries;
/// zero when the blow-up rate matches `α(2-p)/2` exactly.
pub fn scaled_slope(series: &TimeErrorSeries, n_points: usize) -> Result<f64> {
    let window = &series.points[..n_points.min(series.points.len())];
    let t: Vec<f64> = window.iter().map(|p| p.t).collect();
    let e: Vec<f64> = window.iter().map(|p| p.scaled).collect();
    Ok(-fit_log_log(&t, &e)?.s)
}
