//! Incremental Gram-Schmidt over Szegő kernel dictionaries.
//!
//! [`OrthoSystem`] keeps the selected parameters, the orthonormal functions
//! `B_1..B_n`, the normalized dictionary elements `E_1..E_n` and the
//! lower-triangular transfer matrix `A` with `A[i][j] = <E_i, B_j>`, so that
//! `E = A B`. Every accepted extension also records its Gram-Schmidt recipe
//! (the projection coefficients of each pass and the final norm), which lets
//! the same construction be replayed on the boundary kernels to obtain
//! `L^{-1} B_k` exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{hk_inner, szego, szego_boundary, BoundaryFunction, DiscFunction, KernelParam};

/// Relative defect below which a candidate counts as lying in the span.
pub const DEFAULT_DELTA_SPAN: f64 = 1e-12;
/// Distance below which two parameters are the same point.
pub const DEFAULT_EPS_COINCIDE: f64 = 1e-9;
/// Relative defect below which a second orthogonalization pass runs.
pub const REORTH_RATIO: f64 = 1e-4;
/// Largest tolerated `|<B_n, B_k>|` before an extra pass is forced.
const ORTHO_CHECK: f64 = 1e-10;
const MAX_PASSES: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct GsDiagnostics {
    /// First-pass projection coefficients `<K, B_k>`.
    pub projection_coeffs: Vec<Complex64>,
    /// Squared norm of the component orthogonal to the current span.
    pub defect: f64,
    pub candidate_norm2: f64,
    pub passes: usize,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
struct Recipe {
    passes: Vec<Vec<Complex64>>,
    norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoSystem {
    trunc: usize,
    params: Vec<KernelParam>,
    #[serde(rename = "basis")]
    basis: Vec<DiscFunction>,
    #[serde(rename = "transfer")]
    transfer: Vec<Vec<Complex64>>,
    atom_norms: Vec<f64>,
    #[serde(skip)]
    atoms: Vec<DiscFunction>,
    #[serde(skip)]
    recipes: Vec<Recipe>,
}

/// Component of `candidate` orthogonal to the span of `basis`, computed by
/// modified Gram-Schmidt with re-orthogonalization.
pub(crate) struct OrthogonalPart {
    pub residual: DiscFunction,
    pub passes: Vec<Vec<Complex64>>,
    pub norm2: f64,
}

pub(crate) fn orthogonal_part(basis: &[DiscFunction], candidate: &DiscFunction) -> OrthogonalPart {
    let cand_norm2 = candidate.norm2();
    let mut v = candidate.clone();
    let mut passes = Vec::new();
    loop {
        let mut coeffs = Vec::with_capacity(basis.len());
        for b in basis {
            let c = hk_inner(&v, b);
            v.axpy(-c, b);
            coeffs.push(c);
        }
        passes.push(coeffs);
        if basis.is_empty() || passes.len() >= MAX_PASSES {
            break;
        }
        let n2 = v.norm2();
        if passes.len() == 1 && n2 < REORTH_RATIO * cand_norm2 {
            continue;
        }
        // residual overlap relative to ‖v‖
        let n = n2.sqrt();
        if n == 0.0 {
            break;
        }
        let worst = basis.iter().map(|b| hk_inner(&v, b).norm()).fold(0.0, f64::max) / n;
        if worst <= ORTHO_CHECK {
            break;
        }
    }
    let norm2 = v.norm2();
    OrthogonalPart {
        residual: v,
        passes,
        norm2,
    }
}

/// `1 +` the number of entries of `params` within `eps_coincide` of `q`.
pub fn multiplicity(params: &[KernelParam], q: Complex64, eps_coincide: f64) -> usize {
    1 + params.iter().filter(|p| (p.q - q).norm() <= eps_coincide).count()
}

/// The parameter to use when `q` is proposed after `params`: its order is the
/// number of earlier selections at the same point.
pub fn candidate_param(params: &[KernelParam], q: Complex64, eps_coincide: f64) -> KernelParam {
    KernelParam {
        q,
        order: multiplicity(params, q, eps_coincide) - 1,
    }
}

/// The multiple kernel for `q` given earlier selections.
pub fn candidate_kernel(
    params: &[KernelParam],
    q: Complex64,
    eps_coincide: f64,
    trunc: usize,
) -> Result<DiscFunction> {
    let p = candidate_param(params, q, eps_coincide);
    let p = KernelParam::new(p.q, p.order)?;
    Ok(szego(&p, trunc))
}

impl OrthoSystem {
    pub fn new(trunc: usize) -> Self {
        Self {
            trunc,
            params: Vec::new(),
            basis: Vec::new(),
            transfer: Vec::new(),
            atom_norms: Vec::new(),
            atoms: Vec::new(),
            recipes: Vec::new(),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn params(&self) -> &[KernelParam] {
        &self.params
    }

    /// Orthonormal functions `B_1..B_n`.
    pub fn basis(&self) -> &[DiscFunction] {
        &self.basis
    }

    /// Normalized dictionary elements `E_i = K̃_i / ‖K̃_i‖`.
    pub fn atoms(&self) -> &[DiscFunction] {
        &self.atoms
    }

    /// `‖K̃_i‖` of every selected (multiple) kernel.
    pub fn atom_norms(&self) -> &[f64] {
        &self.atom_norms
    }

    /// Rows of the transfer matrix; row `i` holds `A[i][0..=i]`.
    pub fn transfer_rows(&self) -> &[Vec<Complex64>] {
        &self.transfer
    }

    /// Entry `A[i][j]`, zero above the diagonal.
    pub fn transfer(&self, i: usize, j: usize) -> Complex64 {
        if j > i {
            Complex64::new(0.0, 0.0)
        } else {
            self.transfer[i][j]
        }
    }

    /// Appends the Gram-Schmidt orthonormalization of the kernel for `param`.
    ///
    /// A candidate whose orthogonal defect is at most `delta_span * ‖K‖²` is
    /// reported as not accepted and leaves the system unchanged.
    pub fn extend(&mut self, param: KernelParam, delta_span: f64) -> Result<GsDiagnostics> {
        if !(delta_span > 0.0) {
            return Err(Error::InvalidConfig(format!("delta_span must be positive, got {delta_span}")));
        }
        let candidate = szego(&param, self.trunc);
        let cand_norm2 = candidate.norm2();
        if cand_norm2 == 0.0 {
            return Err(Error::ZeroCandidate);
        }
        let part = orthogonal_part(&self.basis, &candidate);
        let diagnostics = GsDiagnostics {
            projection_coeffs: part.passes[0].clone(),
            defect: part.norm2,
            candidate_norm2: cand_norm2,
            passes: part.passes.len(),
            accepted: part.norm2 > delta_span * cand_norm2,
        };
        if !diagnostics.accepted {
            return Ok(diagnostics);
        }

        let norm = part.norm2.sqrt();
        let b_new = part.residual.scale(Complex64::new(1.0 / norm, 0.0));
        let cand_norm = cand_norm2.sqrt();
        let atom = candidate.scale(Complex64::new(1.0 / cand_norm, 0.0));

        let mut row: Vec<Complex64> = self.basis.iter().map(|b| hk_inner(&atom, b)).collect();
        row.push(hk_inner(&atom, &b_new));

        self.params.push(param);
        self.basis.push(b_new);
        self.atoms.push(atom);
        self.atom_norms.push(cand_norm);
        self.transfer.push(row);
        self.recipes.push(Recipe {
            passes: part.passes,
            norm,
        });
        Ok(diagnostics)
    }

    /// `L^{-1} B_k` for every `k`, obtained by replaying each recorded
    /// Gram-Schmidt step on the boundary kernels `h̃_q` in place of `K̃_q`.
    pub fn inverse_basis(&self) -> Vec<BoundaryFunction> {
        let mut out: Vec<BoundaryFunction> = Vec::with_capacity(self.len());
        for (param, recipe) in self.params.iter().zip(&self.recipes) {
            let mut v = szego_boundary(param, self.trunc);
            for pass in &recipe.passes {
                for (c, w) in pass.iter().zip(&out) {
                    v.axpy(-c, w);
                }
            }
            out.push(v.scale(Complex64::new(1.0 / recipe.norm, 0.0)));
        }
        out
    }

    /// `max_{i,j} |<B_i, B_j> - δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, bi) in self.basis.iter().enumerate() {
            for (j, bj) in self.basis.iter().enumerate().take(i + 1) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((hk_inner(bi, bj) - target).norm());
            }
        }
        worst
    }

    /// Orthogonal projection of `f` onto the span of the system.
    pub fn project(&self, f: &DiscFunction) -> DiscFunction {
        let mut out = DiscFunction::zeros(self.trunc.max(f.trunc()));
        for b in &self.basis {
            out.axpy(hk_inner(f, b), b);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::szego;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(re: f64, im: f64, order: usize) -> KernelParam {
        KernelParam::new(c(re, im), order).unwrap()
    }

    #[test]
    fn multiplicity_counts_prior_coincidences() {
        assert_eq!(multiplicity(&[], c(0.5, 0.0), 1e-6), 1);
        assert_eq!(multiplicity(&[p(0.5, 0.0, 0)], c(0.5, 0.0), 1e-6), 2);
        assert_eq!(multiplicity(&[p(0.5, 0.0, 0), p(0.5, 0.0, 1)], c(0.5, 0.0), 1e-6), 3);
        assert_eq!(multiplicity(&[p(0.5, 0.0, 0)], c(0.5 + 1e-3, 0.0), 1e-6), 1);
    }

    #[test]
    fn candidate_kernel_orders() {
        let n = 32;
        let k = candidate_kernel(&[], c(0.3, 0.0), 1e-9, n).unwrap();
        assert_eq!(k, szego(&p(0.3, 0.0, 0), n));
        let k = candidate_kernel(&[p(0.3, 0.0, 0)], c(0.3, 0.0), 1e-9, n).unwrap();
        assert_eq!(k, szego(&p(0.3, 0.0, 1), n));
        let k = candidate_kernel(&[p(0.3, 0.0, 0)], c(0.7, 0.0), 1e-9, n).unwrap();
        assert_eq!(k, szego(&p(0.7, 0.0, 0), n));
    }

    #[test]
    fn first_extend_is_normalized_constant() {
        let mut sys = OrthoSystem::new(64);
        let d = sys.extend(p(0.0, 0.0, 0), 1e-12).unwrap();
        assert!(d.accepted);
        assert_eq!(sys.basis()[0], DiscFunction::constant(c(1.0, 0.0), 64));
        assert_eq!(sys.transfer(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn second_extend_closed_form() {
        let n = 256;
        let mut sys = OrthoSystem::new(n);
        sys.extend(p(0.0, 0.0, 0), 1e-12).unwrap();
        let d = sys.extend(p(0.5, 0.0, 0), 1e-12).unwrap();
        assert!(d.accepted);
        assert!((d.projection_coeffs[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((d.defect - 1.0 / 3.0).abs() < 1e-14);
        let k = szego(&p(0.5, 0.0, 0), n);
        let mut expect = k.clone();
        expect.axpy(c(-1.0, 0.0), &DiscFunction::constant(c(1.0, 0.0), n));
        let expect = expect.scale(c(3f64.sqrt(), 0.0));
        assert!(sys.basis()[1].sub(&expect).norm() < 1e-13);
        assert!((sys.transfer(1, 0) - c(3f64.sqrt() / 2.0, 0.0)).norm() < 1e-14);
        assert!((sys.transfer(1, 1) - c(0.5, 0.0)).norm() < 1e-14);
        assert_eq!(sys.transfer(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn candidate_in_span_is_rejected_without_change() {
        let mut sys = OrthoSystem::new(16);
        sys.extend(p(0.0, 0.0, 0), 1e-12).unwrap();
        let before = sys.basis().to_vec();
        let d = sys.extend(p(0.0, 0.0, 0), 1e-12).unwrap();
        assert!(!d.accepted);
        assert!(d.defect >= -1e-12 && d.defect < 1e-20);
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.basis(), &before[..]);
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let mut sys = OrthoSystem::new(8);
        assert!(matches!(sys.extend(p(0.1, 0.0, 0), 0.0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn transfer_matrix_reproduces_atoms() {
        let n = 128;
        let mut sys = OrthoSystem::new(n);
        for (re, im, m) in [(0.1, 0.2, 0), (-0.5, 0.3, 0), (0.1, 0.2, 1), (0.7, -0.1, 0), (0.1, 0.2, 2)] {
            assert!(sys.extend(p(re, im, m), 1e-12).unwrap().accepted);
        }
        assert!(sys.orthonormality_error() < 1e-12);
        for i in 0..sys.len() {
            let mut rebuilt = DiscFunction::zeros(n);
            for j in 0..=i {
                rebuilt.axpy(sys.transfer(i, j), &sys.basis()[j]);
            }
            assert!(rebuilt.sub(&sys.atoms()[i]).coeffs().iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn nearby_parameters_stay_orthonormal() {
        let n = 256;
        let mut sys = OrthoSystem::new(n);
        for k in 0..12 {
            let q = c(0.5, 0.3) + Complex64::from_polar(0.002 * k as f64, k as f64);
            sys.extend(KernelParam::new(q, 0).unwrap(), 1e-12).unwrap();
        }
        assert!(sys.orthonormality_error() < 1e-10, "{}", sys.orthonormality_error());
    }

    #[test]
    fn inverse_basis_replays_exactly() {
        let n = 64;
        let mut sys = OrthoSystem::new(n);
        for (re, im, m) in [(0.0, 0.0, 0), (0.4, 0.4, 0), (0.4, 0.4, 1), (-0.2, 0.0, 0)] {
            sys.extend(p(re, im, m), 1e-12).unwrap();
        }
        for (b, h) in sys.basis().iter().zip(sys.inverse_basis()) {
            assert!(h.coanalytic_coeffs().iter().all(|z| *z == c(0.0, 0.0)));
            assert_eq!(h.analytic_coeffs(), b.coeffs());
        }
    }
}
