//! End-to-end solvers driven by POAFD: adaptive expansion, minimum-norm
//! inversion of `L`, and Moore-Penrose pseudo-inversion for boundary data.

use serde::Serialize;

use crate::engine::{poafd_expand, reconstruct, ExpansionResult, PoafdConfig};
use crate::error::{Error, Result};
use crate::hardy::{apply_l, apply_l_inverse, plemelj_split, BoundaryFunction, DiscFunction};

/// POAFD expansion together with its image under `L^{-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct InversionResult {
    pub expansion: ExpansionResult,
    /// `Σ_k <F,B_k> L^{-1} B_k` over all selected terms.
    pub inverse: BoundaryFunction,
    /// `L^{-1} B_k` for every term.
    #[serde(skip)]
    pub inverse_atoms: Vec<BoundaryFunction>,
}

impl InversionResult {
    fn from_expansion(expansion: ExpansionResult) -> Self {
        let inverse_atoms = expansion.system.inverse_basis();
        let mut inverse = BoundaryFunction::zeros(expansion.system.trunc());
        for (c, h) in expansion.coefficients.iter().zip(&inverse_atoms) {
            inverse.axpy(*c, h);
        }
        Self {
            expansion,
            inverse,
            inverse_atoms,
        }
    }

    /// `Σ_{k<=n} <F,B_k> L^{-1} B_k`.
    pub fn inverse_partial(&self, n: usize) -> Result<BoundaryFunction> {
        if n > self.expansion.terms() {
            return Err(Error::TermsExceeded {
                requested: n,
                available: self.expansion.terms(),
            });
        }
        let mut out = BoundaryFunction::zeros(self.expansion.system.trunc());
        for (c, h) in self.expansion.coefficients.iter().zip(&self.inverse_atoms).take(n) {
            out.axpy(*c, h);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoInverseResult {
    /// `G = P_{H_K} F`, realized as the analytic part of `F`.
    pub projection: DiscFunction,
    /// `d_F = ‖F - G‖`.
    pub defect: f64,
    pub expansion: ExpansionResult,
    /// `L^{-1} G` as accumulated from the expansion.
    pub inverse: BoundaryFunction,
    #[serde(skip)]
    pub inverse_atoms: Vec<BoundaryFunction>,
    #[serde(skip)]
    data: BoundaryFunction,
}

/// Terms of `‖F - G_n‖² = d_F² + ‖G - G_n‖²`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ErrorDecomposition {
    pub total: f64,
    pub defect2: f64,
    pub expansion2: f64,
}

impl PseudoInverseResult {
    pub fn inverse_partial(&self, n: usize) -> Result<BoundaryFunction> {
        if n > self.expansion.terms() {
            return Err(Error::TermsExceeded {
                requested: n,
                available: self.expansion.terms(),
            });
        }
        let mut out = BoundaryFunction::zeros(self.expansion.system.trunc());
        for (c, h) in self.expansion.coefficients.iter().zip(&self.inverse_atoms).take(n) {
            out.axpy(*c, h);
        }
        Ok(out)
    }

    /// Both sides of the error identity after `n` terms, each computed directly.
    pub fn error_decomposition(&self, n: usize) -> Result<ErrorDecomposition> {
        let gn = self.inverse_partial(n)?;
        let total = self.data.sub(&gn).norm2();
        let expansion2 = self.expansion.residual_norms[n].powi(2);
        Ok(ErrorDecomposition {
            total,
            defect2: self.defect * self.defect,
            expansion2,
        })
    }
}

/// Adaptive expansion of `F ∈ H_K`.
pub fn solve_expansion(f: &DiscFunction, config: &PoafdConfig) -> Result<ExpansionResult> {
    poafd_expand(f, config)
}

/// Minimum-norm solution of `L f = F`.
pub fn solve_inversion(f: &DiscFunction, config: &PoafdConfig) -> Result<InversionResult> {
    let expansion = poafd_expand(f, config)?;
    Ok(InversionResult::from_expansion(expansion))
}

/// Minimum-norm least-squares solution for boundary data `F` that may have
/// co-analytic content.
pub fn solve_pseudo_inverse(f: &BoundaryFunction, config: &PoafdConfig) -> Result<PseudoInverseResult> {
    config.validate()?;
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let projection = apply_l(f);
    let (_, minus) = plemelj_split(f);
    let defect = minus.norm();
    let expansion = if projection.is_zero() {
        ExpansionResult::empty(f.trunc(), 0.0)
    } else {
        poafd_expand(&projection, config)?
    };
    let inv = InversionResult::from_expansion(expansion);
    Ok(PseudoInverseResult {
        projection,
        defect,
        expansion: inv.expansion,
        inverse: inv.inverse,
        inverse_atoms: inv.inverse_atoms,
        data: f.clone(),
    })
}

/// The analytic lift `f⁺ = L^{-1} F` in the coefficient model.
pub fn analytic_lift(f: &DiscFunction) -> BoundaryFunction {
    apply_l_inverse(f)
}

/// `‖F_n‖` in `H_K` for every prefix, as used by the isometry checks.
pub fn partial_sum_norms(expansion: &ExpansionResult) -> Result<Vec<f64>> {
    (0..=expansion.terms())
        .map(|n| reconstruct(expansion, n).map(|g| g.norm()))
        .collect()
}
