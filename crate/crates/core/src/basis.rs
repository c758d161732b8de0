//! Non-adaptive basis method on a fixed parameter plan.
//!
//! Given distinct parameters `q_1..q_n`, the normalized kernels `E_l` are
//! orthonormalized into `B_l`, with `E = A B` for the lower-triangular transfer
//! matrix `A`. The three solutions are
//!
//! - expansion: `S1 = F_B B`, the projection of `F` onto the span;
//! - inversion: `S2 = F_B A^{-1} T`, `T_l = h_{q_l} / ‖h_{q_l}‖`;
//! - pseudo-inversion: `S3 = {<F, K_.>}_B A^{-1} T`, i.e. `S2` applied to the
//!   analytic part of boundary data `F`.
//!
//! `F_B A^{-1}` is obtained by a triangular solve; `A^{-1}` is never formed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{apply_l, hk_inner, szego_boundary, BoundaryFunction, DiscFunction, KernelParam};
use crate::ortho::{OrthoSystem, DEFAULT_DELTA_SPAN, DEFAULT_EPS_COINCIDE};

/// Largest accepted 1-norm condition estimate of the transfer matrix.
pub const MAX_TRANSFER_CONDITION: f64 = 1e12;

/// A fixed sequence of pairwise distinct kernel parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisPlan {
    params: Vec<KernelParam>,
    pub eps_coincide: f64,
    pub delta_span: f64,
}

impl BasisPlan {
    pub fn new(points: &[Complex64]) -> Result<Self> {
        Self::with_tolerances(points, DEFAULT_EPS_COINCIDE, DEFAULT_DELTA_SPAN)
    }

    pub fn with_tolerances(points: &[Complex64], eps_coincide: f64, delta_span: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("basis plan is empty".into()));
        }
        let mut params = Vec::with_capacity(points.len());
        for (i, q) in points.iter().enumerate() {
            let p = KernelParam::new(*q, 0)?;
            if let Some(j) = points[..i].iter().position(|r| (r - q).norm() <= eps_coincide) {
                return Err(Error::DegeneratePlan {
                    index: i,
                    reason: format!("coincides with parameter {j}"),
                });
            }
            params.push(p);
        }
        Ok(Self {
            params,
            eps_coincide,
            delta_span,
        })
    }

    pub fn params(&self) -> &[KernelParam] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

/// Orthonormalizes the plan kernels at truncation `trunc`.
pub fn basis_build(plan: &BasisPlan, trunc: usize) -> Result<OrthoSystem> {
    let mut sys = OrthoSystem::new(trunc);
    for (index, p) in plan.params.iter().enumerate() {
        let d = sys.extend(*p, plan.delta_span)?;
        if !d.accepted {
            return Err(Error::DegeneratePlan {
                index,
                reason: format!(
                    "kernel numerically in the span of its predecessors (relative defect {:.3e})",
                    d.defect / d.candidate_norm2
                ),
            });
        }
    }
    Ok(sys)
}

/// Row vector `F_B = (<F, B_l>)`.
fn coefficients(f: &DiscFunction, sys: &OrthoSystem) -> Vec<Complex64> {
    sys.basis().iter().map(|b| hk_inner(f, b)).collect()
}

/// Solves `y A = rhs` for lower-triangular `A`, i.e. `A^T y^T = rhs^T`.
fn solve_row_times_inverse(sys: &OrthoSystem, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = rhs.len();
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        let mut acc = rhs[j];
        for (i, yi) in y.iter().enumerate().skip(j + 1) {
            acc -= yi * sys.transfer(i, j);
        }
        y[j] = acc / sys.transfer(j, j);
    }
    y
}

/// Solves `A x = rhs` (forward substitution).
fn solve_lower(sys: &OrthoSystem, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = rhs.len();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = rhs[i];
        for (j, xj) in x.iter().enumerate().take(i) {
            acc -= sys.transfer(i, j) * xj;
        }
        x[i] = acc / sys.transfer(i, i);
    }
    x
}

/// 1-norm condition estimate `‖A‖_1 ‖A^{-1}‖_1` of the transfer matrix.
pub fn transfer_condition(sys: &OrthoSystem) -> f64 {
    let n = sys.len();
    if n == 0 {
        return 1.0;
    }
    let col_norm = |j: usize| (j..n).map(|i| sys.transfer(i, j).norm()).sum::<f64>();
    let a_norm = (0..n).map(col_norm).fold(0.0, f64::max);
    let mut inv_norm: f64 = 0.0;
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e[j] = Complex64::new(1.0, 0.0);
        let x = solve_lower(sys, &e);
        inv_norm = inv_norm.max(x.iter().map(|z| z.norm()).sum());
    }
    a_norm * inv_norm
}

/// `Σ_l y_l T_l` with `T_l = h̃_{q_l} / ‖h̃_{q_l}‖`.
fn combine_boundary_atoms(sys: &OrthoSystem, y: &[Complex64]) -> BoundaryFunction {
    let mut out = BoundaryFunction::zeros(sys.trunc());
    for ((p, norm), yl) in sys.params().iter().zip(sys.atom_norms()).zip(y) {
        out.axpy(yl / norm, &szego_boundary(p, sys.trunc()));
    }
    out
}

/// Transfer-matrix route `F_B A^{-1} T` for an existing system.
pub fn transfer_inverse(f: &DiscFunction, sys: &OrthoSystem) -> Result<BoundaryFunction> {
    let estimate = transfer_condition(sys);
    if !(estimate <= MAX_TRANSFER_CONDITION) {
        return Err(Error::IllConditioned {
            estimate,
            limit: MAX_TRANSFER_CONDITION,
        });
    }
    let fb = coefficients(f, sys);
    let y = solve_row_times_inverse(sys, &fb);
    Ok(combine_boundary_atoms(sys, &y))
}

/// `S1`: orthogonal projection of `F` onto the span of the plan kernels.
pub fn basis_expand(f: &DiscFunction, plan: &BasisPlan) -> Result<DiscFunction> {
    let sys = basis_build(plan, f.trunc())?;
    let mut out = DiscFunction::zeros(f.trunc());
    for b in sys.basis() {
        out.axpy(hk_inner(f, b), b);
    }
    Ok(out)
}

/// `S2`: minimum-norm boundary function whose image under `L` is `S1`.
pub fn basis_invert(f: &DiscFunction, plan: &BasisPlan) -> Result<BoundaryFunction> {
    let sys = basis_build(plan, f.trunc())?;
    transfer_inverse(f, &sys)
}

/// `S3`: `S2` applied to `G = L F`, the analytic part of boundary data `F`.
pub fn basis_pseudo_inverse(f: &BoundaryFunction, plan: &BasisPlan) -> Result<BoundaryFunction> {
    basis_invert(&apply_l(f), plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{apply_l_inverse, szego};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_origin_plan() {
        let plan = BasisPlan::new(&[c(0.0, 0.0)]).unwrap();
        let sys = basis_build(&plan, 32).unwrap();
        assert_eq!(sys.basis()[0], DiscFunction::constant(c(1.0, 0.0), 32));
        assert_eq!(sys.transfer(0, 0), c(1.0, 0.0));
        let s2 = basis_invert(&DiscFunction::constant(c(1.0, 0.0), 32), &plan).unwrap();
        assert_eq!(s2, BoundaryFunction::from_analytic(&DiscFunction::constant(c(1.0, 0.0), 32).into_coeffs()));
    }

    #[test]
    fn two_point_transfer_matrix() {
        let plan = BasisPlan::new(&[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let sys = basis_build(&plan, 256).unwrap();
        let expect = [[1.0, 0.0], [3f64.sqrt() / 2.0, 0.5]];
        for (i, row) in expect.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((sys.transfer(i, j) - c(*v, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coincident_plan_rejected() {
        let err = BasisPlan::new(&[c(0.0, 0.0), c(1e-14, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DegeneratePlan { index: 1, .. }));
        assert!(BasisPlan::new(&[]).is_err());
        assert!(matches!(BasisPlan::new(&[c(0.99, 0.0)]), Err(Error::ParameterOutOfDomain { .. })));
    }

    #[test]
    fn numerically_dependent_plan_reports_index() {
        let plan = BasisPlan::with_tolerances(&[c(0.0, 0.0), c(1e-8, 0.0)], 1e-12, 1e-12).unwrap();
        let err = basis_build(&plan, 64).unwrap_err();
        assert!(matches!(err, Error::DegeneratePlan { index: 1, .. }), "{err}");
    }

    #[test]
    fn kernel_inverts_to_boundary_kernel() {
        let n = 256;
        let q = KernelParam::new(c(0.5, 0.0), 0).unwrap();
        let plan = BasisPlan::new(&[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let s2 = basis_invert(&szego(&q, n), &plan).unwrap();
        let h = szego_boundary(&q, n);
        assert!(s2.sub(&h).norm() < 1e-12);
        assert!(s2.coanalytic_coeffs().iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn pseudo_inverse_cases() {
        let plan = BasisPlan::new(&[c(0.0, 0.0)]).unwrap();
        let f = BoundaryFunction::from_two_sided(-1, vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let s3 = basis_pseudo_inverse(&f, &plan).unwrap();
        assert!((s3.coeff(0) - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(s3.coeff(-1), c(0.0, 0.0));

        let mut neg = BoundaryFunction::zeros(4);
        neg.set(-3, c(1.0, 1.0));
        assert!(basis_pseudo_inverse(&neg, &plan).unwrap().is_zero());
    }

    #[test]
    fn s2_isometry_and_round_trip() {
        let n = 128;
        let plan = BasisPlan::new(&[c(0.1, 0.2), c(-0.4, 0.0), c(0.3, -0.5)]).unwrap();
        let f = DiscFunction::from_coeffs((0..=n).map(|k| c(1.0 / (k + 1) as f64, 0.3 / (k + 2) as f64)).collect()).unwrap();
        let s1 = basis_expand(&f, &plan).unwrap();
        let s2 = basis_invert(&f, &plan).unwrap();
        assert!((s2.norm() - s1.norm()).abs() < 1e-10);
        assert!(apply_l(&s2).sub(&s1).norm() < 1e-10);
        assert!(apply_l_inverse(&s1).sub(&s2).norm() < 1e-10);
    }
}
