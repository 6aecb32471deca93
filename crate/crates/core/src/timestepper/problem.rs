use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::fraccalc::{caputo_monomial, FracOrder};

pub type Diffusivity = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Source = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
pub type InitialDatum = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `x ↦ [X(x), X'(x), X''(x)]`.
pub type SpaceProfile = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

/// Separable exact solution `u(x,t) = (Σ cᵢ t^{γᵢ}) X(x)` together with `∂ₓD`,
/// enough to evaluate every term of the equation analytically.
#[derive(Clone)]
pub struct Manufactured {
    pub time_terms: Vec<(f64, f64)>,
    pub space: SpaceProfile,
    pub diffusivity_dx: Diffusivity,
}

impl Manufactured {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        self.time_factor(t) * (self.space)(x)[0]
    }

    fn time_factor(&self, t: f64) -> f64 {
        self.time_terms.iter().map(|&(c, g)| c * t.powf(g)).sum()
    }

    /// `∂ᵅₜ u(x,t)`, term by term from the monomial formula.
    pub fn caputo(&self, alpha: FracOrder, x: f64, t: f64) -> Result<f64> {
        let mut s = 0.0;
        for &(c, g) in &self.time_terms {
            s += c * caputo_monomial(alpha, g, t)?;
        }
        Ok(s * (self.space)(x)[0])
    }

    /// `(D uₓ)ₓ = Dₓ uₓ + D uₓₓ`.
    pub fn flux_divergence(&self, d: &Diffusivity, x: f64, t: f64) -> f64 {
        let [_, dx1, dx2] = (self.space)(x);
        let tf = self.time_factor(t);
        (self.diffusivity_dx)(x, t) * tf * dx1 + d(x, t) * tf * dx2
    }
}

/// Data of one problem instance: diffusivity, source, initial datum and the
/// constants that describe them.
#[derive(Clone)]
pub struct ProblemSpec {
    name: String,
    d: Diffusivity,
    f: Source,
    phi: InitialDatum,
    exact: Option<Diffusivity>,
    manufactured: Option<Manufactured>,
    p_nominal: f64,
    lipschitz: f64,
    d_bounds: (f64, f64),
    state_bound: Option<f64>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("p_nominal", &self.p_nominal)
            .field("lipschitz", &self.lipschitz)
            .field("d_bounds", &self.d_bounds)
            .field("state_bound", &self.state_bound)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn builder(name: impl Into<String>) -> ProblemBuilder {
        ProblemBuilder {
            name: name.into(),
            d: None,
            f: None,
            phi: None,
            exact: None,
            manufactured: None,
            p_nominal: 2.0,
            lipschitz: 0.0,
            d_bounds: None,
            state_bound: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn diffusivity(&self, x: f64, t: f64) -> f64 {
        (self.d)(x, t)
    }

    #[inline]
    pub fn source(&self, x: f64, t: f64, u: f64) -> f64 {
        (self.f)(x, t, u)
    }

    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        (self.phi)(x)
    }

    pub fn diffusivity_fn(&self) -> &Diffusivity {
        &self.d
    }

    pub fn exact(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(x, t))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn manufactured(&self) -> Option<&Manufactured> {
        self.manufactured.as_ref()
    }

    /// Nominal smoothness index `p` of the initial datum.
    pub fn p_nominal(&self) -> f64 {
        self.p_nominal
    }

    /// Lipschitz constant of `f` in `u` (on the admissible band).
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `(D₋, D₊)`.
    pub fn diffusivity_bounds(&self) -> (f64, f64) {
        self.d_bounds
    }

    /// Band `|u| ≤ bound` in which the Lipschitz constant is valid.
    pub fn state_bound(&self) -> Option<f64> {
        self.state_bound
    }
}

pub struct ProblemBuilder {
    name: String,
    d: Option<Diffusivity>,
    f: Option<Source>,
    phi: Option<InitialDatum>,
    exact: Option<Diffusivity>,
    manufactured: Option<Manufactured>,
    p_nominal: f64,
    lipschitz: f64,
    d_bounds: Option<(f64, f64)>,
    state_bound: Option<f64>,
}

impl ProblemBuilder {
    pub fn diffusivity(mut self, d: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d = Some(Arc::new(d));
        self
    }

    pub fn source(mut self, f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f = Some(Arc::new(f));
        self
    }

    pub fn initial(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi = Some(Arc::new(phi));
        self
    }

    pub fn exact(mut self, u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(u));
        self
    }

    /// Attaches a separable manufactured solution; it also becomes the exact
    /// solution.
    pub fn manufactured(mut self, m: Manufactured) -> Self {
        let mm = m.clone();
        self.exact = Some(Arc::new(move |x, t| mm.value(x, t)));
        self.manufactured = Some(m);
        self
    }

    pub fn p_nominal(mut self, p: f64) -> Self {
        self.p_nominal = p;
        self
    }

    pub fn lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = l;
        self
    }

    /// Declared `(D₋, D₊)`; checked against samples at build time.
    pub fn diffusivity_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.d_bounds = Some((lo, hi));
        self
    }

    pub fn state_bound(mut self, bound: f64) -> Self {
        self.state_bound = Some(bound);
        self
    }

    /// Validates the data on a sample grid of `[0,1]²` and builds the problem.
    pub fn build(self) -> Result<ProblemSpec> {
        let d = self.d.ok_or_else(|| invalid("D", "diffusivity missing"))?;
        let f = self.f.ok_or_else(|| invalid("f", "source missing"))?;
        let phi = self.phi.ok_or_else(|| invalid("phi", "initial datum missing"))?;
        if !(0.0..=2.0).contains(&self.p_nominal) {
            return Err(invalid("p_nominal", format!("{} outside [0, 2]", self.p_nominal)));
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        const SAMPLES: usize = 41;
        for i in 0..=SAMPLES {
            for j in 0..=SAMPLES {
                let (x, t) = (i as f64 / SAMPLES as f64, j as f64 / SAMPLES as f64);
                let v = d(x, t);
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        context: format!("diffusivity of `{}` at ({x}, {t})", self.name),
                    });
                }
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let bounds = match self.d_bounds {
            Some((dl, dh)) => {
                if lo < dl || hi > dh {
                    return Err(invalid(
                        "D",
                        format!("samples in [{lo}, {hi}] leave declared bounds [{dl}, {dh}]"),
                    ));
                }
                (dl, dh)
            }
            None => (lo, hi),
        };
        if !(bounds.0 > 0.0) {
            return Err(invalid("D", format!("lower bound {} is not positive", bounds.0)));
        }
        Ok(ProblemSpec {
            name: self.name,
            d,
            f,
            phi,
            exact: self.exact,
            manufactured: self.manufactured,
            p_nominal: self.p_nominal,
            lipschitz: self.lipschitz,
            d_bounds: bounds,
            state_bound: self.state_bound,
        })
    }
}
