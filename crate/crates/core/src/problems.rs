//! Registry of the benchmark problems.
//!
//! | id | φ | D | f |
//! |----|---|---|---|
//! | `order1` | `x(1-x)` | `1+x+t` | manufactured, exact `u = (1+t²)x(1-x)` |
//! | `order2` | `x(1-x)` | `1 + cos(2πx)/2 + √|t-1/2|` | `u(1-u)` |
//! | `order3` | step at `1/2` | as `order2` | `u(1-u)` |
//! | `errtime1…4` | `x(1-x)`, tent, `√(x(1-x))`, step | as `order2` | `u(1-u)` |
//! | `ml_relaxation` | `√2 sin(πx)` | `1` | `0`, exact via Mittag-Leffler |

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fraccalc::{mittag_leffler, FracOrder};
use crate::special::gamma;
use crate::timestepper::{Manufactured, ProblemSpec};

/// Identifiers accepted by [`get_problem`].
pub const PROBLEM_NAMES: [&str; 8] = [
    "order1",
    "order2",
    "order3",
    "errtime1",
    "errtime2",
    "errtime3",
    "errtime4",
    "ml_relaxation",
];

/// Band on which the logistic source is given its Lipschitz constant.
pub const LOGISTIC_BAND: f64 = 4.0;

fn step(x: f64) -> f64 {
    if x >= 0.5 {
        1.0
    } else {
        0.0
    }
}

fn parabola(x: f64) -> f64 {
    x * (1.0 - x)
}

fn tent(x: f64) -> f64 {
    1.0 - (2.0 * x - 1.0).abs()
}

fn sqrt_parabola(x: f64) -> f64 {
    (x * (1.0 - x)).max(0.0).sqrt()
}

/// `1 + cos(2πx)/2 + √|t - 1/2|`: bounded, with an integrable but unbounded
/// time derivative at `t = 1/2`.
pub fn kinked_diffusivity(x: f64, t: f64) -> f64 {
    1.0 + 0.5 * (2.0 * PI * x).cos() + (t - 0.5).abs().sqrt()
}

fn logistic(_x: f64, _t: f64, u: f64) -> f64 {
    u * (1.0 - u)
}

fn logistic_problem(name: &str, phi: fn(f64) -> f64, p: f64) -> Result<ProblemSpec> {
    ProblemSpec::builder(name)
        .diffusivity(kinked_diffusivity)
        .source(logistic)
        .initial(phi)
        .p_nominal(p)
        .lipschitz(1.0 + 2.0 * LOGISTIC_BAND)
        .diffusivity_bounds(0.5, 1.5 + 0.5f64.sqrt() + 1e-12)
        .state_bound(LOGISTIC_BAND)
        .build()
}

fn order1(alpha: FracOrder) -> Result<ProblemSpec> {
    let a = alpha.value();
    let g3 = gamma(3.0 - a);
    let manufactured = Manufactured {
        time_terms: vec![(1.0, 0.0), (1.0, 2.0)],
        space: Arc::new(|x| [x * (1.0 - x), 1.0 - 2.0 * x, -2.0]),
        diffusivity_dx: Arc::new(|_, _| 1.0),
    };
    ProblemSpec::builder("order1")
        .diffusivity(|x, t| 1.0 + x + t)
        .source(move |x, t, u| {
            let s = 1.0 + t * t;
            s * (1.0 + 2.0 * t + 4.0 * x) + 2.0 * t.powf(2.0 - a) / (s * g3) * u
        })
        .initial(parabola)
        .manufactured(manufactured)
        .p_nominal(2.0)
        .lipschitz(1.0 / g3)
        .build()
}

fn ml_relaxation(alpha: FracOrder) -> Result<ProblemSpec> {
    let a = alpha.value();
    ProblemSpec::builder("ml_relaxation")
        .diffusivity(|_, _| 1.0)
        .source(|_, _, _| 0.0)
        .initial(|x| SQRT_2 * (PI * x).sin())
        .exact(move |x, t| {
            let mode = if t == 0.0 {
                1.0
            } else {
                mittag_leffler(a, 1.0, -PI * PI * t.powf(a)).unwrap_or(f64::NAN)
            };
            mode * SQRT_2 * (PI * x).sin()
        })
        .p_nominal(2.0)
        .build()
}

/// Read-only table of problem constructors.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProblemRegistry;

impl ProblemRegistry {
    pub fn names(&self) -> &'static [&'static str] {
        &PROBLEM_NAMES
    }

    pub fn contains(&self, name: &str) -> bool {
        PROBLEM_NAMES.contains(&name)
    }

    pub fn get(&self, name: &str, alpha: FracOrder) -> Result<ProblemSpec> {
        match name {
            "order1" => order1(alpha),
            "order2" => logistic_problem(name, parabola, 2.0),
            "order3" => logistic_problem(name, step, 0.5),
            "errtime1" => logistic_problem(name, parabola, 2.0),
            "errtime2" => logistic_problem(name, tent, 1.5),
            "errtime3" => logistic_problem(name, sqrt_parabola, 1.0),
            "errtime4" => logistic_problem(name, step, 0.5),
            "ml_relaxation" => ml_relaxation(alpha),
            other => Err(Error::UnknownProblem(other.to_string())),
        }
    }
}

/// Problem `name` instantiated for order `alpha`.
pub fn get_problem(name: &str, alpha: FracOrder) -> Result<ProblemSpec> {
    ProblemRegistry.get(name, alpha)
}

/// Largest residual `|∂ᵅu − (D uₓ)ₓ − f(x,t,u)|` of the manufactured solution
/// over `samples`.
pub fn verify_manufactured(prob: &ProblemSpec, alpha: FracOrder, samples: &[(f64, f64)]) -> Result<f64> {
    let m = prob
        .manufactured()
        .ok_or_else(|| Error::NoExactSolution(prob.name().to_string()))?;
    let mut worst: f64 = 0.0;
    for &(x, t) in samples {
        let u = m.value(x, t);
        let r = m.caputo(alpha, x, t)? - m.flux_divergence(prob.diffusivity_fn(), x, t) - prob.source(x, t, u);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn grid10() -> Vec<(f64, f64)> {
        let mut v = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                v.push(((i as f64 + 0.5) / 10.0, 0.01 + 0.99 * j as f64 / 9.0));
            }
        }
        v
    }

    #[test]
    fn registry_is_complete() {
        for name in PROBLEM_NAMES {
            assert!(get_problem(name, order(0.5)).is_ok(), "{name}");
        }
        assert!(matches!(get_problem("order4", order(0.5)), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn pointwise_examples() {
        let p = get_problem("order1", order(0.3)).unwrap();
        assert_eq!(p.exact(0.5, 0.0), Some(0.25));
        let p = get_problem("errtime4", order(0.3)).unwrap();
        assert_eq!(p.phi(0.25), 0.0);
        assert_eq!(p.phi(0.75), 1.0);
        let p = get_problem("order2", order(0.3)).unwrap();
        assert!((p.diffusivity(0.0, 0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn nominal_smoothness_labels() {
        let labels: Vec<f64> = ["errtime1", "errtime2", "errtime3", "errtime4"]
            .iter()
            .map(|n| get_problem(n, order(0.75)).unwrap().p_nominal())
            .collect();
        assert_eq!(labels, vec![2.0, 1.5, 1.0, 0.5]);
    }

    #[test]
    fn manufactured_residual_vanishes() {
        for a in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let p = get_problem("order1", order(a)).unwrap();
            let r = verify_manufactured(&p, order(a), &grid10()).unwrap();
            assert!(r <= 1e-10, "alpha={a}: residual {r}");
        }
    }

    #[test]
    fn corrupted_source_is_detected() {
        let a = order(0.5);
        let good = get_problem("order1", a).unwrap();
        let m = good.manufactured().unwrap().clone();
        let g = good.clone();
        let bad = ProblemSpec::builder("corrupt")
            .diffusivity(|x, t| 1.0 + x + t)
            .source(move |x, t, u| g.source(x, t, u) + 1.0)
            .initial(|x| x * (1.0 - x))
            .manufactured(m)
            .build()
            .unwrap();
        let r = verify_manufactured(&bad, a, &grid10()).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let none = get_problem("order2", a).unwrap();
        assert!(matches!(verify_manufactured(&none, a, &grid10()), Err(Error::NoExactSolution(_))));
    }

    #[test]
    fn diffusivity_box_constraints() {
        let hi = 1.5 + 0.5f64.sqrt() + 1e-12;
        for name in ["order2", "order3", "errtime1", "errtime4"] {
            let p = get_problem(name, order(0.5)).unwrap();
            for i in 0..=200 {
                for j in 0..=200 {
                    let v = p.diffusivity(i as f64 / 200.0, j as f64 / 200.0);
                    assert!((0.5..=hi).contains(&v));
                }
            }
        }
    }

    #[test]
    fn sources_are_lipschitz_on_band() {
        for name in PROBLEM_NAMES {
            let p = get_problem(name, order(0.6)).unwrap();
            let band = p.state_bound().unwrap_or(LOGISTIC_BAND);
            for i in 0..=20 {
                for j in 0..=20 {
                    let (x, t) = (i as f64 / 20.0, j as f64 / 20.0);
                    for k in 0..40 {
                        let u = -band + 2.0 * band * k as f64 / 40.0;
                        let v = u + 0.05;
                        let diff = (p.source(x, t, u) - p.source(x, t, v)).abs();
                        assert!(diff <= p.lipschitz() * 0.05 + 1e-12, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn ml_relaxation_exact_at_zero_is_phi() {
        let p = get_problem("ml_relaxation", order(0.5)).unwrap();
        assert!((p.exact(0.3, 0.0).unwrap() - p.phi(0.3)).abs() < 1e-15);
        let v = p.exact(0.5, 1.0).unwrap();
        assert!((v - SQRT_2 * 0.056_875_338_719_078_234).abs() < 1e-12);
    }
}
