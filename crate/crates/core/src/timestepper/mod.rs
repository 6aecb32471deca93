//! Fully discrete marching: P1 Galerkin in space, L1 in time.
//!
//! Step `n` solves
//!
//! ```text
//! (βM + A(tₙ)) uⁿ = βM (b_n u⁰ + Σ_{k<n} (b_{n-1-k} − b_{n-k}) uᵏ) + (f(·, tₙ, ūⁿ), φᵢ)
//! ```
//!
//! with `β = τ^{-α}/Γ(2-α)`, the stiffness `A(tₙ)` reassembled every step and
//! the source evaluated at the extrapolated state `ūⁿ = 2uⁿ⁻¹ − uⁿ⁻²`
//! (`ū¹ = u⁰`). The scheme is linearly implicit: one SPD tridiagonal solve
//! per step. The memory sum is evaluated exactly by a blocked FFT convolution.

mod memory;
mod problem;

pub use problem::{Diffusivity, InitialDatum, Manufactured, ProblemSpec, Source, SpaceProfile};

use crate::error::{invalid, Error, Result};
use crate::fem1d::{add_state_load, assemble_mass, fill_stiffness, l2_project, FEFunction, Mesh1D, TriDiagonalOperator};
use crate::fraccalc::{l1_weight, FracOrder};
use crate::special::gamma;
use memory::MemoryConvolution;

/// Hard cap on the number of time steps of a single march.
pub const MAX_STEPS: usize = 2_000_000;

/// Uniform time grid `tₙ = nτ`, `n = 0 … n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    tau: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(tau: f64, n_steps: usize) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(invalid("tau", format!("must be positive, got {tau}")));
        }
        if n_steps == 0 {
            return Err(invalid("n_steps", "need at least one step"));
        }
        if n_steps > MAX_STEPS {
            return Err(Error::StepCap {
                steps: n_steps,
                cap: MAX_STEPS,
            });
        }
        Ok(Self { tau, n_steps })
    }

    /// Finest uniform grid on `[0, horizon]` whose step does not exceed
    /// `max_step`.
    pub fn covering(horizon: f64, max_step: f64) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(invalid("T", format!("must be positive, got {horizon}")));
        }
        if !(max_step > 0.0) {
            return Err(invalid("dt", format!("must be positive, got {max_step}")));
        }
        let ratio = horizon / max_step;
        // tolerate round-off in ratios that are integers in exact arithmetic
        let n = (ratio - 1e-9 * ratio).ceil().max(1.0);
        if n > MAX_STEPS as f64 {
            return Err(Error::StepCap {
                steps: n as usize,
                cap: MAX_STEPS,
            });
        }
        Self::new(horizon / n, n as usize)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn horizon(&self) -> f64 {
        self.tau * self.n_steps as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }
}

/// Nodal coefficient vectors `u⁰ … u^N` of a march.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHistory {
    grid: TimeGrid,
    mesh: Mesh1D,
    frames: Vec<Vec<f64>>,
}

impl SolutionHistory {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    pub fn frame(&self, n: usize) -> FEFunction {
        FEFunction::new(&self.mesh, self.frames[n].clone()).expect("frame length matches mesh")
    }

    pub fn last(&self) -> FEFunction {
        self.frame(self.frames.len() - 1)
    }
}

/// Source state used at step `n`: `2uⁿ⁻¹ − uⁿ⁻²` for `n ≥ 2`, `u⁰` for `n = 1`.
///
/// `frames` holds at least the frames up to `n - 1`.
pub fn extrapolate_state<S: AsRef<[f64]>>(frames: &[S], n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("n", "extrapolation starts at step 1"));
    }
    if frames.len() < n {
        return Err(invalid("frames", format!("step {n} needs {n} frames, got {}", frames.len())));
    }
    let last = frames[n - 1].as_ref();
    if n == 1 {
        return Ok(last.to_vec());
    }
    let prev = frames[n - 2].as_ref();
    Ok(last.iter().zip(prev).map(|(a, b)| 2.0 * a - b).collect())
}

/// March `prob` on `mesh` over `grid`.
pub fn march(prob: &ProblemSpec, mesh: &Mesh1D, grid: &TimeGrid, alpha: FracOrder) -> Result<SolutionHistory> {
    let dim = mesh.n_interior();
    let n_steps = grid.n_steps();
    let tau = grid.tau();
    let a = alpha.value();
    let oma = 1.0 - a;
    let beta = tau.powf(-a) / gamma(2.0 - a);

    let u0 = l2_project(mesh, |x| prob.phi(x))?.into_coeffs();
    let mut frames: Vec<Vec<f64>> = Vec::with_capacity(n_steps + 1);
    frames.push(u0);

    let mass = assemble_mass(mesh);
    let mut stiffness = TriDiagonalOperator::zeros(dim);
    let mut memory = MemoryConvolution::new(dim, n_steps + 1, |j| l1_weight(oma, j - 1) - l1_weight(oma, j));
    memory.push(&frames);

    let mut hist = vec![0.0; dim];
    let mut rhs = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut ubar = vec![0.0; dim];

    for n in 1..=n_steps {
        let t = grid.time(n);
        fill_stiffness(mesh, &|x, t| prob.diffusivity(x, t), t, &mut stiffness)?;
        let system = mass.linear_combination(beta, &stiffness, 1.0);

        let b_n = l1_weight(oma, n);
        for ((h, m), u) in hist.iter_mut().zip(memory.term(n)).zip(&frames[0]) {
            *h = m + b_n * u;
        }
        mass.apply_into(&hist, &mut rhs);
        rhs.iter_mut().for_each(|r| *r *= beta);

        if n == 1 {
            ubar.copy_from_slice(&frames[0]);
        } else {
            for ((e, a), b) in ubar.iter_mut().zip(&frames[n - 1]).zip(&frames[n - 2]) {
                *e = 2.0 * a - b;
            }
        }
        add_state_load(mesh, &ubar, &mut rhs, |x, u| prob.source(x, t, u))?;

        system.solve_in_place(&mut rhs, &mut scratch)?;
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { step: n, t });
        }
        if let Some(bound) = prob.state_bound() {
            if rhs.iter().any(|v| v.abs() > bound) {
                return Err(Error::StateOutOfBand { step: n, bound });
            }
        }
        frames.push(rhs.clone());
        memory.push(&frames);
    }

    Ok(SolutionHistory {
        grid: *grid,
        mesh: mesh.clone(),
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::make_mesh;
    use crate::fraccalc::l1_weights;
    use std::sync::Arc;

    #[test]
    fn grid_construction() {
        let g = TimeGrid::covering(1.0, 2e-3).unwrap();
        assert_eq!(g.n_steps(), 500);
        assert!((g.horizon() - 1.0).abs() < 1e-12);
        let g = TimeGrid::covering(1e-2, 1e-7).unwrap();
        assert_eq!(g.n_steps(), 100_000);
        let g = TimeGrid::covering(1.0, 0.3).unwrap();
        assert_eq!(g.n_steps(), 4);
        assert!(matches!(TimeGrid::covering(1.0, 1e-7), Err(Error::StepCap { .. })));
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(0.1, 0).is_err());
    }

    #[test]
    fn extrapolation_examples() {
        let c = vec![1.5, -2.0];
        assert_eq!(extrapolate_state(&[c.clone(), c.clone()], 2).unwrap(), c);
        assert_eq!(extrapolate_state(std::slice::from_ref(&c), 1).unwrap(), c);
        let v = vec![0.25, 1.0];
        assert_eq!(extrapolate_state(&[vec![0.0, 0.0], v], 2).unwrap(), vec![0.5, 2.0]);
        assert!(extrapolate_state(std::slice::from_ref(&c), 0).is_err());
        assert!(extrapolate_state(&[c], 3).is_err());
    }

    #[test]
    fn history_weights_telescope() {
        // coefficients of u⁰ … uⁿ⁻¹ in the step equation sum to b_0 = 1
        for &a in &[0.1, 0.5, 0.9] {
            let oma = 1.0 - a;
            for n in [1usize, 2, 7, 1000] {
                let w = l1_weights(FracOrder::new(a).unwrap(), n + 1).unwrap();
                let mut s = w[n];
                for j in 1..=n {
                    s += l1_weight(oma, j - 1) - l1_weight(oma, j);
                }
                assert!((s - 1.0).abs() < 1e-14);
                assert!(s.is_finite() && w[n] > 0.0);
            }
        }
    }

    fn quiet_problem(phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ProblemSpec {
        ProblemSpec::builder("quiet")
            .diffusivity(|_, _| 1.0)
            .source(|_, _, _| 0.0)
            .initial(phi)
            .build()
            .unwrap()
    }

    #[test]
    fn zero_state_is_preserved() {
        let prob = quiet_problem(|_| 0.0);
        let mesh = make_mesh(16).unwrap();
        let grid = TimeGrid::new(0.01, 50).unwrap();
        let h = march(&prob, &mesh, &grid, FracOrder::new(0.6).unwrap()).unwrap();
        assert_eq!(h.frames().len(), 51);
        assert!(h.frames().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn first_frame_is_l2_projection() {
        let prob = quiet_problem(|x| x.sin());
        let mesh = make_mesh(10).unwrap();
        let grid = TimeGrid::new(0.1, 2).unwrap();
        let h = march(&prob, &mesh, &grid, FracOrder::new(0.5).unwrap()).unwrap();
        let p = l2_project(&mesh, |x| x.sin()).unwrap();
        assert_eq!(h.frames()[0], p.coeffs());
    }

    #[test]
    fn divergence_is_reported_with_step() {
        let prob = ProblemSpec::builder("blowup")
            .diffusivity(|_, _| 1.0)
            .source(|_, t, _| if t > 0.25 { f64::INFINITY } else { 0.0 })
            .initial(|_| 0.0)
            .build()
            .unwrap();
        let mesh = make_mesh(4).unwrap();
        let grid = TimeGrid::new(0.1, 5).unwrap();
        let err = march(&prob, &mesh, &grid, FracOrder::new(0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. } | Error::Diverged { step: 3, .. }));
    }

    #[test]
    fn band_violation_aborts() {
        let prob = ProblemSpec::builder("grow")
            .diffusivity(|_, _| 1.0)
            .source(|_, _, _| 1e4)
            .initial(|_| 0.0)
            .state_bound(4.0)
            .build()
            .unwrap();
        let mesh = make_mesh(8).unwrap();
        let grid = TimeGrid::new(0.1, 5).unwrap();
        let err = march(&prob, &mesh, &grid, FracOrder::new(0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::StateOutOfBand { .. }));
    }

    #[test]
    fn problem_closures_are_shareable() {
        let prob = Arc::new(quiet_problem(|x| x * (1.0 - x)));
        let mesh = make_mesh(8).unwrap();
        let grid = TimeGrid::new(0.05, 4).unwrap();
        let alpha = FracOrder::new(0.5).unwrap();
        let handles: Vec<_> = (0..2)
            .map(|_| {
                let (p, m) = (prob.clone(), mesh.clone());
                std::thread::spawn(move || march(&p, &m, &grid, alpha).unwrap())
            })
            .collect();
        let runs: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert_eq!(runs[0], runs[1]);
    }
}
