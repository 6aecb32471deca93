//! Fractional-calculus kernels on uniform time grids.
//!
//! * [`l1_weights`] / [`caputo_l1_apply`]: the L1 discretisation of the
//!   Caputo derivative,
//!   `∂ᵅy(tₙ) ≈ τ^{-α}/Γ(2-α) Σ_{k<n} b_{n-1-k} (y^{k+1} - y^k)` with
//!   `b_j = (j+1)^{1-α} - j^{1-α}`.
//! * [`frac_integral_apply`]: product-rectangle rule for the Riemann–Liouville
//!   integral with exact kernel moments.
//! * [`caputo_monomial`]: closed-form Caputo derivative of `t^γ`.
//! * [`mittag_leffler`]: `E_{α,β}(z)` for real arguments.

pub(crate) mod mittag_leffler;

pub use mittag_leffler::mittag_leffler;

use crate::error::{invalid, Error, Result};
use crate::special::gamma;

/// Order `α` of a Caputo derivative, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        FracOrder::new(alpha)
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Leading L1 weights `b_0, …, b_{n-1}` for a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    alpha: FracOrder,
    b: Vec<f64>,
}

/// `b_j = (j+1)^{1-α} - j^{1-α}`, evaluated without cancellation for large `j`.
pub(crate) fn l1_weight(one_minus_alpha: f64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let jf = j as f64;
    jf.powf(one_minus_alpha) * (one_minus_alpha * (1.0 / jf).ln_1p()).exp_m1()
}

impl L1Weights {
    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// The prefactor `τ^{-α} / Γ(2-α)`.
    pub fn scale(&self, tau: f64) -> f64 {
        let a = self.alpha.value();
        tau.powf(-a) / gamma(2.0 - a)
    }
}

impl std::ops::Index<usize> for L1Weights {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.b[j]
    }
}

/// The first `n` L1 weights for order `alpha`.
pub fn l1_weights(alpha: FracOrder, n: usize) -> Result<L1Weights> {
    if n == 0 {
        return Err(invalid("n", "at least one weight is required"));
    }
    let oma = 1.0 - alpha.value();
    let b = (0..n).map(|j| l1_weight(oma, j)).collect();
    Ok(L1Weights { alpha, b })
}

fn check_dims<S: AsRef<[f64]>>(samples: &[S]) -> Result<usize> {
    let dim = samples[0].as_ref().len();
    for s in samples {
        if s.as_ref().len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.as_ref().len(),
            });
        }
    }
    Ok(dim)
}

/// L1 approximation of the Caputo derivative at `t_n = nτ` from the samples
/// `y⁰ … yⁿ` (one vector per time level).
pub fn caputo_l1_apply<S: AsRef<[f64]>>(w: &L1Weights, tau: f64, samples: &[S]) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(invalid("samples", "need at least two time levels"));
    }
    if !(tau > 0.0) {
        return Err(invalid("tau", format!("must be positive, got {tau}")));
    }
    let n = samples.len() - 1;
    if w.len() < n {
        return Err(invalid(
            "w",
            format!("{} weights cannot serve {n} steps", w.len()),
        ));
    }
    let dim = check_dims(samples)?;
    let mut out = vec![0.0; dim];
    for k in 0..n {
        let bk = w.b[n - 1 - k];
        let (lo, hi) = (samples[k].as_ref(), samples[k + 1].as_ref());
        for ((o, a), b) in out.iter_mut().zip(lo).zip(hi) {
            *o += bk * (b - a);
        }
    }
    let scale = w.scale(tau);
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Product-rectangle approximation of `I^α y(t_n)` from samples `y⁰ … yⁿ`.
///
/// On each subinterval `[t_{k-1}, t_k]` the integrand is frozen at its right
/// endpoint `y^k` and the kernel `(t_n - s)^{α-1}/Γ(α)` is integrated exactly,
/// so `y⁰` does not enter and the rule is exact on constants. Freezing at the
/// right endpoint keeps the current value on the diagonal, which makes the
/// discrete operator positive: `Σₙ ⟨(I^α u)ⁿ, uⁿ⟩ ≥ 0`.
pub fn frac_integral_apply<S: AsRef<[f64]>>(alpha: f64, tau: f64, samples: &[S]) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", format!("{alpha} outside (0, 1]")));
    }
    if samples.is_empty() {
        return Err(invalid("samples", "empty sample sequence"));
    }
    if !(tau > 0.0) {
        return Err(invalid("tau", format!("must be positive, got {tau}")));
    }
    let dim = check_dims(samples)?;
    let n = samples.len() - 1;
    let mut out = vec![0.0; dim];
    let scale = tau.powf(alpha) / gamma(alpha + 1.0);
    for k in 1..=n {
        let m = (n - k) as f64;
        let moment = (m + 1.0).powf(alpha) - m.powf(alpha);
        for (o, y) in out.iter_mut().zip(samples[k].as_ref()) {
            *o += moment * y;
        }
    }
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Caputo derivative of `t ↦ t^γ` at `t`: `Γ(γ+1)/Γ(γ+1-α) t^{γ-α}`, and zero
/// for the constant `γ = 0`.
pub fn caputo_monomial(alpha: FracOrder, gamma_exp: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    if !(gamma_exp >= 0.0) {
        return Err(invalid("gamma", format!("must be non-negative, got {gamma_exp}")));
    }
    if gamma_exp == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.value();
    Ok(gamma(gamma_exp + 1.0) / gamma(gamma_exp + 1.0 - a) * t.powf(gamma_exp - a))
}
