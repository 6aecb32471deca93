//! Sine-eigenbasis expansions and the `Ḣˢ` smoothness scale on `(0, 1)`.
//!
//! The Dirichlet Laplacian has eigenpairs `λₙ = n²π²`, `φₙ = √2 sin(nπx)`, and
//! `‖v‖ₛ² = Σ λₙˢ (v, φₙ)²`. Decay `|cₙ| ~ n^{-p-1/2}` puts `v` in `Ḣˢ` for
//! every `s < p`; [`estimate_smoothness`] reads `p` off a log–log fit.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{invalid, Error, Result};
use crate::quadrature::GaussRule;

/// Default truncation used by the smoothness classification.
pub const DEFAULT_MODES: usize = 1024;

/// Upper end of the smoothness scale the fit reports.
pub const SMOOTHNESS_CEILING: f64 = 2.0;

const POINTS_PER_PANEL: usize = 8;

/// Coefficients `cₙ = (v, φₙ)` for `n = 1 … N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineExpansion {
    coeffs: Vec<f64>,
}

impl SineExpansion {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `c_1 … c_N`; index 0 holds `c_1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }
}

/// Composite rule on `[0, 1]` with `2N` equal panels of 8 Gauss points, i.e.
/// 16 points per half-wavelength of `φ_N`. Panel breaks include `x = 1/2`.
fn composite_rule(modes: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = 2 * modes.max(1);
    let rule = GaussRule::new(POINTS_PER_PANEL);
    let w = 1.0 / panels as f64;
    let mut xs = Vec::with_capacity(panels * POINTS_PER_PANEL);
    let mut ws = Vec::with_capacity(panels * POINTS_PER_PANEL);
    for p in 0..panels {
        let a = p as f64 * w;
        for (x, wt) in rule.mapped(a, a + w) {
            xs.push(x);
            ws.push(wt);
        }
    }
    (xs, ws)
}

/// Sine coefficients of `v` by composite Gauss quadrature.
pub fn sine_coeffs<V>(v: V, modes: usize) -> Result<SineExpansion>
where
    V: Fn(f64) -> f64,
{
    if modes == 0 {
        return Err(invalid("N", "need at least one mode"));
    }
    let (xs, ws) = composite_rule(modes);
    let mut weighted = Vec::with_capacity(xs.len());
    for (&x, &w) in xs.iter().zip(&ws) {
        let val = v(x);
        if !val.is_finite() {
            return Err(Error::NonFinite {
                context: format!("function sample at x = {x}"),
            });
        }
        weighted.push(SQRT_2 * w * val);
    }
    let mut coeffs = vec![0.0; modes];
    // sin(nθ) by the Chebyshev recurrence, one pass per quadrature point
    for (&x, &wv) in xs.iter().zip(&weighted) {
        let theta = PI * x;
        let two_cos = 2.0 * theta.cos();
        let mut prev = 0.0;
        let mut cur = theta.sin();
        for c in coeffs.iter_mut() {
            *c += wv * cur;
            let next = two_cos * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    Ok(SineExpansion { coeffs })
}

/// Truncated `Ḣˢ` norm `√(Σ (n²π²)ˢ cₙ²)`.
pub fn hdot_norm(e: &SineExpansion, s: f64) -> f64 {
    e.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lambda = ((i + 1) as f64 * PI).powi(2);
            lambda.powf(s) * c * c
        })
        .sum::<f64>()
        .sqrt()
}

/// Least-squares slope of `log|cₙ|` against `log n` over `n ∈ [N/4, N]`,
/// ignoring coefficients below `1e-14`.
pub fn decay_exponent(e: &SineExpansion) -> Result<f64> {
    let n = e.modes();
    let lo = (n / 4).max(1);
    let pts: Vec<(f64, f64)> = (lo..=n)
        .filter_map(|k| {
            let c = e.coeffs[k - 1].abs();
            (c >= 1e-14).then(|| ((k as f64).ln(), c.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::Fit(
            "fewer than two coefficients above 1e-14 in the fit window".into(),
        ));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Estimated smoothness index `p̂` of `v`, clamped to `[0, 2]`.
pub fn estimate_smoothness<V>(v: V, modes: usize) -> Result<f64>
where
    V: Fn(f64) -> f64,
{
    if modes < 64 {
        return Err(invalid("N", format!("need at least 64 modes, got {modes}")));
    }
    let e = sine_coeffs(v, modes)?;
    let slope = decay_exponent(&e)?;
    Ok((-slope - 0.5).clamp(0.0, SMOOTHNESS_CEILING))
}
