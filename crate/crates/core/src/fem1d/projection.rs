use super::{assemble_load, assemble_mass, assemble_stiffness, solve_tridiag, FEFunction, Mesh1D};
use crate::error::{Error, Result};

const GAUSS_X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// L² projection `P_h v`: solves `M c = ((v, φᵢ))ᵢ`.
pub fn l2_project<V>(mesh: &Mesh1D, v: V) -> Result<FEFunction>
where
    V: Fn(f64) -> f64,
{
    let load = assemble_load(mesh, v)?;
    let c = solve_tridiag(&assemble_mass(mesh), &load)?;
    FEFunction::new(mesh, c)
}

/// Ritz projection `R_h v` for the form `a(D(t); u, w) = ∫ D u' w'`.
///
/// `dv` is the derivative of `v`; the right-hand side is `∫ D v' φᵢ'`.
pub fn ritz_project<D, DV>(mesh: &Mesh1D, d: D, t: f64, dv: DV) -> Result<FEFunction>
where
    D: Fn(f64, f64) -> f64,
    DV: Fn(f64) -> f64,
{
    let a = assemble_stiffness(mesh, &d, t)?;
    let n = mesh.n_elements();
    let mut rhs = vec![0.0; mesh.n_interior()];
    for e in 0..n {
        let (xa, xb) = mesh.element(e);
        let h = xb - xa;
        let (mid, half) = (0.5 * (xa + xb), 0.5 * h);
        let mut flux = 0.0;
        for q in 0..3 {
            let x = mid + half * GAUSS_X[q];
            let val = d(x, t) * dv(x);
            if !val.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("Ritz load on element {e} at x = {x}"),
                });
            }
            flux += half * GAUSS_W[q] * val;
        }
        // on element e the left node's hat has slope -1/h, the right node's +1/h
        if e > 0 {
            rhs[e - 1] -= flux / h;
        }
        if e + 1 < n {
            rhs[e] += flux / h;
        }
    }
    let c = solve_tridiag(&a, &rhs)?;
    FEFunction::new(mesh, c)
}

/// L² norm and H¹ seminorm of a difference of two P1 functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1_semi: f64,
}

/// Norms of `f_fine - f_coarse`, integrated on the finer mesh.
///
/// The finer element count must be an integer multiple of the coarser one.
pub fn fe_error_norms(f_coarse: &FEFunction, f_fine: &FEFunction) -> Result<ErrorNorms> {
    difference_norms(
        f_coarse.mesh().n_elements(),
        f_coarse.coeffs(),
        f_fine.mesh().n_elements(),
        f_fine.coeffs(),
    )
}

/// Coefficient-level form of [`fe_error_norms`].
pub(crate) fn difference_norms(
    n_coarse: usize,
    coarse: &[f64],
    n_fine: usize,
    fine: &[f64],
) -> Result<ErrorNorms> {
    if !n_fine.is_multiple_of(n_coarse) {
        return Err(Error::NotNested {
            coarse: n_coarse,
            fine: n_fine,
        });
    }
    let r = n_fine / n_coarse;
    let hc = 1.0 / n_coarse as f64;
    let hf = 1.0 / n_fine as f64;
    let nodal = |c: &[f64], i: usize, n: usize| if i == 0 || i == n { 0.0 } else { c[i - 1] };
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    for e in 0..n_fine {
        let ce = e / r;
        let c0 = nodal(coarse, ce, n_coarse);
        let c1 = nodal(coarse, ce + 1, n_coarse);
        let slope_c = (c1 - c0) / hc;
        // local position of the fine element inside its coarse parent
        let off = (e - ce * r) as f64 * hf;
        let ca = c0 + slope_c * off;
        let cb = ca + slope_c * hf;
        let da = nodal(fine, e, n_fine) - ca;
        let db = nodal(fine, e + 1, n_fine) - cb;
        for q in 0..3 {
            let s = 0.5 * (1.0 + GAUSS_X[q]);
            let d = da + (db - da) * s;
            l2 += 0.5 * hf * GAUSS_W[q] * d * d;
        }
        let ds = (db - da) / hf;
        h1 += hf * ds * ds;
    }
    Ok(ErrorNorms {
        l2: l2.sqrt(),
        h1_semi: h1.sqrt(),
    })
}

/// L² norm of a P1 function given by interior coefficients.
#[cfg(test)]
pub(crate) fn l2_norm_coeffs(coeffs: &[f64]) -> f64 {
    let v = super::with_boundary(coeffs);
    let h = 1.0 / (v.len() - 1) as f64;
    let s: f64 = v
        .windows(2)
        .map(|w| h / 3.0 * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]))
        .sum();
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::super::make_mesh;
    use super::*;
    use crate::quadrature::GaussRule;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// ‖v − v_h‖ with a 10-point rule on every element.
    fn fine_l2_error(fe: &FEFunction, v: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussRule::new(10);
        let mesh = fe.mesh();
        let mut s = 0.0;
        for e in 0..mesh.n_elements() {
            let (a, b) = mesh.element(e);
            s += rule.integrate(a, b, |x| (v(x) - fe.eval(x)).powi(2));
        }
        s.sqrt()
    }

    fn observed_orders(errs: &[f64]) -> Vec<f64> {
        errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
    }

    #[test]
    fn l2_projection_is_identity_on_vh() {
        let mesh = make_mesh(12).unwrap();
        let f = FEFunction::new(&mesh, (1..12).map(|i| (i as f64).sin()).collect()).unwrap();
        let p = l2_project(&mesh, |x| f.eval(x)).unwrap();
        for (a, b) in p.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn l2_projection_is_orthogonal() {
        let mesh = make_mesh(20).unwrap();
        let v = |x: f64| (3.0 * x).exp() * x * (1.0 - x);
        let p = l2_project(&mesh, v).unwrap();
        let residual = assemble_load(&mesh, |x| v(x) - p.eval(x)).unwrap();
        assert!(residual.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn l2_projection_sine_second_order() {
        let v = |x: f64| (PI * x).sin();
        let errs: Vec<f64> = [16, 32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let mesh = make_mesh(n).unwrap();
                fine_l2_error(&l2_project(&mesh, v).unwrap(), v)
            })
            .collect();
        for p in observed_orders(&errs) {
            assert!(p >= 1.95, "order {p}");
        }
    }

    #[test]
    fn l2_projection_of_step_is_stable() {
        let step = |x: f64| if x >= 0.5 { 1.0 } else { 0.0 };
        for n in [7, 16, 101] {
            let mesh = make_mesh(n).unwrap();
            let p = l2_project(&mesh, step).unwrap();
            assert!(l2_norm_coeffs(p.coeffs()) <= 0.5f64.sqrt() + 1e-10);
        }
    }

    #[test]
    fn ritz_projection_of_vh_member_is_itself() {
        let mesh = make_mesh(10).unwrap();
        let f = FEFunction::new(&mesh, (1..10).map(|i| (i as f64 * 0.7).cos()).collect()).unwrap();
        let h = mesh.h();
        let slope = |x: f64| {
            let e = ((x / h).floor() as usize).min(9);
            let (a, b) = mesh.element(e);
            (f.eval(b) - f.eval(a)) / (b - a)
        };
        let d = |x: f64, _t: f64| 1.0 + x;
        let r = ritz_project(&mesh, d, 0.0, slope).unwrap();
        for (a, b) in r.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn ritz_projection_interpolates_for_laplacian() {
        let mesh = make_mesh(9).unwrap();
        let r = ritz_project(&mesh, |_, _| 1.0, 0.0, |x| 1.0 - 2.0 * x).unwrap();
        let interp = FEFunction::interpolate(&mesh, |x| x * (1.0 - x));
        for (a, b) in r.coeffs().iter().zip(interp.coeffs()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn ritz_projection_variable_coefficient_order() {
        let d = |x: f64, t: f64| 1.0 + 0.5 * (2.0 * PI * x).cos() + (t - 0.5f64).abs().sqrt();
        let v = |x: f64| (PI * x).sin();
        let dv = |x: f64| PI * (PI * x).cos();
        let errs: Vec<f64> = [16, 32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let mesh = make_mesh(n).unwrap();
                fine_l2_error(&ritz_project(&mesh, d, 0.0, dv).unwrap(), v)
            })
            .collect();
        for p in observed_orders(&errs) {
            assert!(p >= 1.9, "order {p}");
        }
    }

    #[test]
    fn error_norm_examples() {
        let coarse = make_mesh(8).unwrap();
        let fine = make_mesh(32).unwrap();
        let f = FEFunction::interpolate(&coarse, |x| x.sin());
        let same = FEFunction::interpolate(&fine, |x| f.eval(x));
        let n = fe_error_norms(&f, &same).unwrap();
        assert!(n.l2 < 1e-15 && n.h1_semi < 1e-13);

        let mesh = make_mesh(256).unwrap();
        let s = FEFunction::interpolate(&mesh, |x| (PI * x).sin());
        let zero = FEFunction::zero(&make_mesh(4).unwrap());
        let n = fe_error_norms(&zero, &s).unwrap();
        assert!((n.l2 - 0.5f64.sqrt()).abs() < 1e-3);
        assert!((n.h1_semi - PI / 2f64.sqrt()).abs() < 1e-3);

        let scaled = FEFunction::new(&mesh, s.coeffs().iter().map(|c| -2.0 * c).collect()).unwrap();
        let m = fe_error_norms(&zero, &scaled).unwrap();
        assert!((m.l2 - 2.0 * n.l2).abs() < 1e-14);
        assert!((m.h1_semi - 2.0 * n.h1_semi).abs() < 1e-12);

        let other = FEFunction::zero(&make_mesh(6).unwrap());
        assert!(matches!(fe_error_norms(&other, &s), Err(Error::NotNested { .. })));
    }

    #[test]
    fn inverse_inequality_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..64);
            let mesh = make_mesh(n).unwrap();
            let f = FEFunction::new(&mesh, (1..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let zero = FEFunction::zero(&mesh);
            let norms = fe_error_norms(&zero, &f).unwrap();
            assert!(norms.h1_semi <= (2.0 * 3f64.sqrt() / mesh.h() + 1e-9) * norms.l2);
        }
    }

    #[test]
    fn closed_form_l2_norm_agrees_with_quadrature() {
        let mesh = make_mesh(13).unwrap();
        let f = FEFunction::interpolate(&mesh, |x| (5.0 * x).sin());
        let zero = FEFunction::zero(&mesh);
        let a = fe_error_norms(&zero, &f).unwrap().l2;
        assert!((a - l2_norm_coeffs(f.coeffs())).abs() < 1e-14);
    }
}
