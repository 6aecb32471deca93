//! Continuous piecewise-linear finite elements on `[0, 1]` with homogeneous
//! Dirichlet conditions.
//!
//! Only interior nodes carry unknowns; a coefficient vector of length
//! `n_elements - 1` holds the nodal values at `x_1, …, x_{M-1}`. All element
//! integrals use three-point Gauss–Legendre quadrature.

mod assembly;
mod projection;
mod tridiag;

pub use assembly::{assemble_load, assemble_mass, assemble_stiffness};
pub(crate) use assembly::{add_state_load, fill_stiffness};
pub use projection::{fe_error_norms, l2_project, ritz_project, ErrorNorms};
pub(crate) use projection::difference_norms;
pub use tridiag::{solve_tridiag, TriDiagonalOperator};

use crate::error::{invalid, Error, Result};

/// Uniform partition of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    n_elements: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    /// Number of interior (unknown-carrying) nodes.
    pub fn n_interior(&self) -> usize {
        self.n_elements - 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Endpoints of element `e`.
    #[inline]
    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }
}

/// Uniform mesh with `n_elements` elements.
pub fn make_mesh(n_elements: usize) -> Result<Mesh1D> {
    if n_elements < 2 {
        return Err(invalid("n_elements", format!("need at least 2, got {n_elements}")));
    }
    let n = n_elements as f64;
    let nodes = (0..=n_elements).map(|i| i as f64 / n).collect();
    Ok(Mesh1D {
        n_elements,
        h: 1.0 / n,
        nodes,
    })
}

/// A member of the P1 space on a mesh, stored by interior nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct FEFunction {
    mesh: Mesh1D,
    coeffs: Vec<f64>,
}

impl FEFunction {
    pub fn new(mesh: &Mesh1D, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != mesh.n_interior() {
            return Err(Error::DimensionMismatch {
                expected: mesh.n_interior(),
                found: coeffs.len(),
            });
        }
        Ok(Self {
            mesh: mesh.clone(),
            coeffs,
        })
    }

    pub fn zero(mesh: &Mesh1D) -> Self {
        Self {
            mesh: mesh.clone(),
            coeffs: vec![0.0; mesh.n_interior()],
        }
    }

    /// Nodal interpolant of `v`; boundary values are dropped.
    pub fn interpolate(mesh: &Mesh1D, v: impl Fn(f64) -> f64) -> Self {
        let coeffs = mesh.nodes[1..mesh.n_elements].iter().map(|&x| v(x)).collect();
        Self {
            mesh: mesh.clone(),
            coeffs,
        }
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Nodal values including the two zero boundary values.
    pub fn nodal_values(&self) -> Vec<f64> {
        with_boundary(&self.coeffs)
    }

    /// Point evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        let n = self.mesh.n_elements;
        let e = ((x * n as f64).floor() as usize).min(n - 1);
        let (a, b) = self.mesh.element(e);
        let va = if e == 0 { 0.0 } else { self.coeffs[e - 1] };
        let vb = if e + 1 == n { 0.0 } else { self.coeffs[e] };
        va + (vb - va) * (x - a) / (b - a)
    }
}

pub(crate) fn with_boundary(coeffs: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(coeffs.len() + 2);
    v.push(0.0);
    v.extend_from_slice(coeffs);
    v.push(0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_examples() {
        let m = make_mesh(2).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(m.h(), 0.5);
        let m = make_mesh(100).unwrap();
        assert_eq!(m.nodes().len(), 101);
        assert!((m.h() - 0.01).abs() < 1e-16);
        let m = make_mesh(3).unwrap();
        assert!((m.nodes()[1] - 1.0 / 3.0).abs() < 1e-16);
        assert!((m.nodes()[2] - 2.0 / 3.0).abs() < 1e-16);
        assert!(make_mesh(1).is_err());
        assert!(make_mesh(0).is_err());
    }

    #[test]
    fn mesh_spacing_is_uniform() {
        let m = make_mesh(997).unwrap();
        for w in m.nodes().windows(2) {
            assert!((w[1] - w[0] - m.h()).abs() <= 1e-14);
        }
    }

    #[test]
    fn fe_function_evaluation() {
        let m = make_mesh(4).unwrap();
        let f = FEFunction::new(&m, vec![1.0, 2.0, 1.0]).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(0.5), 2.0);
        assert!((f.eval(0.125) - 0.5).abs() < 1e-15);
        assert_eq!(f.eval(1.0), 0.0);
        assert!(FEFunction::new(&m, vec![1.0]).is_err());
    }
}
