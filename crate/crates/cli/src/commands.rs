use std::fmt::Write as _;
use std::io::Write;

use subdiff::fem1d::make_mesh;
use subdiff::harness::{
    aitken_order, dt_rule, fit_power_law, format_number, time_error_study_on, write_atomically,
    write_order_csv, write_time_series_csv, DEFAULT_DT_FLOOR,
};
use subdiff::problems::get_problem;
use subdiff::timestepper::{march, SolutionHistory, TimeGrid};
use subdiff::{selftest, FracOrder};
use thiserror::Error;

use crate::config::{Command, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Solver(#[from] subdiff::Error),
    #[error("{failed} of {total} self-test suites failed")]
    SelftestFailed { failed: usize, total: usize },
    #[error("invalid SUBDIFF_THREADS={0:?}: expected a non-negative integer")]
    Threads(String),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

/// Rejects a malformed `SUBDIFF_THREADS` before any work starts.
pub fn check_thread_env() -> Result<(), RunError> {
    match std::env::var("SUBDIFF_THREADS") {
        Ok(v) if v.trim().parse::<usize>().is_err() => Err(RunError::Threads(v)),
        _ => Ok(()),
    }
}

/// Executes `config`. CSV goes to `out_path` (atomically) or to `stdout`;
/// progress and summaries go to `log`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, log: &mut dyn Write) -> Result<(), RunError> {
    check_thread_env()?;
    match config.command {
        Command::Selftest => run_selftest(stdout),
        Command::Solve => {
            let csv = solve_csv(config)?;
            emit(config, stdout, csv)
        }
        Command::Order => {
            let (csv, summary) = order_csv(config)?;
            writeln!(log, "{summary}")?;
            emit(config, stdout, csv)
        }
        Command::Timeerr => {
            let (csv, summary) = timeerr_csv(config)?;
            writeln!(log, "{summary}")?;
            emit(config, stdout, csv)
        }
    }
}

fn emit(config: &RunConfig, stdout: &mut dyn Write, csv: Vec<u8>) -> Result<(), RunError> {
    match &config.out_path {
        Some(path) => write_atomically(path, |buf| {
            buf.extend_from_slice(&csv);
            Ok(())
        })?,
        None => stdout.write_all(&csv)?,
    }
    Ok(())
}

fn run_selftest(stdout: &mut dyn Write) -> Result<(), RunError> {
    let reports = selftest::run_all();
    let mut failed = 0;
    for r in &reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!r.passed);
        writeln!(stdout, "{verdict} {}::{} ({})", r.module, r.name, r.detail)?;
    }
    writeln!(stdout, "{} suites, {failed} failed", reports.len())?;
    if failed > 0 {
        return Err(RunError::SelftestFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

fn setup(config: &RunConfig) -> Result<(FracOrder, subdiff::timestepper::ProblemSpec, f64), RunError> {
    let alpha = FracOrder::new(config.alpha)?;
    let name = config.problem.as_deref().unwrap_or_default();
    let prob = get_problem(name, alpha)?;
    let dt = match config.dt {
        Some(dt) => dt,
        None => dt_rule(config.h(), alpha, config.gamma, DEFAULT_DT_FLOOR)?,
    };
    Ok((alpha, prob, dt))
}

fn solve_history(config: &RunConfig) -> Result<SolutionHistory, RunError> {
    let (alpha, prob, dt) = setup(config)?;
    let grid = TimeGrid::covering(config.effective_horizon(), dt)?;
    Ok(march(&prob, &make_mesh(config.nx)?, &grid, alpha)?)
}

fn solve_csv(config: &RunConfig) -> Result<Vec<u8>, RunError> {
    let hist = solve_history(config)?;
    let nodes = hist.mesh().nodes().to_vec();
    let mut out = String::new();
    match config.frames {
        None => {
            out.push_str("x,u\n");
            for (x, u) in nodes.iter().zip(hist.last().nodal_values()) {
                let _ = writeln!(out, "{},{}", format_number(*x), format_number(u));
            }
        }
        Some(stride) => {
            out.push_str("t,x,u\n");
            let last = hist.grid().n_steps();
            for k in (0..=last).filter(|k| k % stride == 0 || *k == last) {
                let t = format_number(hist.grid().time(k));
                for (x, u) in nodes.iter().zip(hist.frame(k).nodal_values()) {
                    let _ = writeln!(out, "{t},{},{}", format_number(*x), format_number(u));
                }
            }
        }
    }
    Ok(out.into_bytes())
}

fn order_csv(config: &RunConfig) -> Result<(Vec<u8>, String), RunError> {
    let (alpha, prob, dt) = setup(config)?;
    let r = aitken_order(&prob, alpha, config.h(), dt, config.effective_horizon())?;
    let mut buf = Vec::new();
    write_order_csv(&mut buf, &r)?;
    let flag = if r.reliable { "" } else { " (unreliable: differences at round-off)" };
    let summary = format!("{} alpha={} p={:.4}{flag}", r.problem, r.alpha, r.p_estimate);
    Ok((buf, summary))
}

fn timeerr_csv(config: &RunConfig) -> Result<(Vec<u8>, String), RunError> {
    let (alpha, prob, dt) = setup(config)?;
    let grid = TimeGrid::covering(config.effective_horizon(), dt)?;
    let series = time_error_study_on(&prob, alpha, config.h(), &grid, config.ref_refine)?;
    let fit = fit_power_law(&series, config.fit_points)?;
    let mut buf = Vec::new();
    write_time_series_csv(&mut buf, &series, &fit)?;
    let summary = format!(
        "{} alpha={} s={:.4} predicted={:.4} over {} points",
        series.problem,
        series.alpha,
        fit.s,
        series.predicted_exponent(),
        fit.n_points
    );
    Ok((buf, summary))
}
