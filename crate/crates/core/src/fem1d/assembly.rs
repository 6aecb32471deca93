use super::{Mesh1D, TriDiagonalOperator};
use crate::error::{Error, Result};

const GAUSS_X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Quadrature points and weights on `[a, b]` together with the value of the
/// left hat function `(b - x)/(b - a)` at each point.
#[inline]
fn element_points(a: f64, b: f64) -> [(f64, f64, f64); 3] {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut out = [(0.0, 0.0, 0.0); 3];
    for q in 0..3 {
        let x = mid + half * GAUSS_X[q];
        out[q] = (x, half * GAUSS_W[q], 0.5 * (1.0 - GAUSS_X[q]));
    }
    out
}

/// Gram matrix of the interior hat functions.
pub fn assemble_mass(mesh: &Mesh1D) -> TriDiagonalOperator {
    let n = mesh.n_interior();
    let h = mesh.h();
    TriDiagonalOperator::new(vec![2.0 * h / 3.0; n], vec![h / 6.0; n - 1])
        .expect("mesh has at least one interior node")
}

/// Weighted stiffness matrix `∫ D(x,t) φᵢ' φⱼ' dx`.
pub fn assemble_stiffness<D>(mesh: &Mesh1D, d: D, t: f64) -> Result<TriDiagonalOperator>
where
    D: Fn(f64, f64) -> f64,
{
    let mut a = TriDiagonalOperator::zeros(mesh.n_interior());
    fill_stiffness(mesh, &d, t, &mut a)?;
    Ok(a)
}

pub(crate) fn fill_stiffness<D>(mesh: &Mesh1D, d: &D, t: f64, a: &mut TriDiagonalOperator) -> Result<()>
where
    D: Fn(f64, f64) -> f64,
{
    let n = mesh.n_elements();
    let (diag, off) = a.parts_mut();
    diag.iter_mut().for_each(|v| *v = 0.0);
    off.iter_mut().for_each(|v| *v = 0.0);
    for e in 0..n {
        let (xa, xb) = mesh.element(e);
        let h = xb - xa;
        let mut integral = 0.0;
        for (x, w, _) in element_points(xa, xb) {
            let dv = d(x, t);
            if !dv.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("diffusivity on element {e} at x = {x}, t = {t}"),
                });
            }
            integral += w * dv;
        }
        let k = integral / (h * h);
        // element couples interior unknowns e-1 (left node) and e (right node)
        if e > 0 {
            diag[e - 1] += k;
        }
        if e + 1 < n {
            diag[e] += k;
        }
        if e > 0 && e + 1 < n {
            off[e - 1] -= k;
        }
    }
    Ok(())
}

/// Load vector `(g, φᵢ)`.
pub fn assemble_load<G>(mesh: &Mesh1D, g: G) -> Result<Vec<f64>>
where
    G: Fn(f64) -> f64,
{
    let mut out = vec![0.0; mesh.n_interior()];
    accumulate_load(mesh, &mut out, |x, _| g(x), None)?;
    Ok(out)
}

/// Adds `(g(x, u_h(x)), φᵢ)` to `out`, where `u_h` is the P1 function with
/// interior nodal values `state`.
pub(crate) fn add_state_load<G>(mesh: &Mesh1D, state: &[f64], out: &mut [f64], g: G) -> Result<()>
where
    G: Fn(f64, f64) -> f64,
{
    accumulate_load(mesh, out, g, Some(state))
}

fn accumulate_load<G>(mesh: &Mesh1D, out: &mut [f64], g: G, state: Option<&[f64]>) -> Result<()>
where
    G: Fn(f64, f64) -> f64,
{
    let n = mesh.n_elements();
    for e in 0..n {
        let (xa, xb) = mesh.element(e);
        let (ua, ub) = match state {
            Some(s) => (
                if e == 0 { 0.0 } else { s[e - 1] },
                if e + 1 == n { 0.0 } else { s[e] },
            ),
            None => (0.0, 0.0),
        };
        let mut left = 0.0;
        let mut right = 0.0;
        for (x, w, phi_l) in element_points(xa, xb) {
            let u = phi_l * ua + (1.0 - phi_l) * ub;
            let gv = g(x, u);
            if !gv.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("load integrand on element {e} at x = {x}"),
                });
            }
            left += w * gv * phi_l;
            right += w * gv * (1.0 - phi_l);
        }
        if e > 0 {
            out[e - 1] += left;
        }
        if e + 1 < n {
            out[e] += right;
        }
    }
    Ok(())
}
