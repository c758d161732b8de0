//! Sparse adaptive kernel expansion, minimum-norm inversion and Moore-Penrose
//! pseudo-inversion in the Hardy space `H²(D)`.
//!
//! The operator `(L f)(p) = <f, h_p>` maps boundary data on the unit circle to
//! holomorphic functions on the disc; its range carries the Szegő reproducing
//! kernel `K(q, p) = 1 / (1 - conj(q) p)`. This crate
//!
//! - expands `F ∈ H²(D)` by pre-orthogonal adaptive Fourier decomposition
//!   (POAFD), with full or weak maximal selection and multiple kernels
//!   ([`engine`]);
//! - recovers the minimum-norm solution of `L f = F` by mapping each
//!   orthonormal term through `L^{-1}` ([`solvers`]);
//! - solves the least-squares problem for boundary data with co-analytic
//!   content ([`solvers::solve_pseudo_inverse`]);
//! - provides the non-adaptive basis method on a fixed plan ([`basis`]);
//! - cross-checks all of the above against independent brute-force
//!   computations ([`oracle`], [`verify`]).
//!
//! Functions are finite coefficient vectors, so all inner products and `L`
//! itself are exact finite sums.
//!
//! ```
//! use hardy_poafd::{poafd_expand, szego, KernelParam, PoafdConfig, SelectionGrid};
//! use num_complex::Complex64;
//!
//! let q = Complex64::new(0.3, 0.0);
//! let f = szego(&KernelParam::new(q, 0).unwrap(), 128);
//! let config = PoafdConfig {
//!     grid: SelectionGrid::polar(16, 32, 0.95).unwrap().with_points(vec![q]).unwrap(),
//!     ..Default::default()
//! };
//! let result = poafd_expand(&f, &config).unwrap();
//! assert_eq!(result.terms(), 1);
//! assert!(result.final_residual() < 1e-10);
//! ```

// `!(x <= limit)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod hardy;
pub mod io;
pub mod oracle;
pub mod ortho;
pub mod quadrature;
pub mod solvers;
pub mod verify;

pub use basis::{basis_build, basis_expand, basis_invert, basis_pseudo_inverse, BasisPlan};
pub use engine::{
    maximal_selection, poafd_expand, reconstruct, selection_objective, ExpansionResult, PoafdConfig, Selection,
    SelectionGrid, SelectionMode,
};
pub use error::{Error, Result};
pub use hardy::{
    apply_l, apply_l_inverse, evaluate, hk_inner, l2_inner, littlewood_paley_norm2, plemelj_split, szego,
    szego_boundary, BoundaryFunction, DiscFunction, KernelParam,
};
pub use ortho::{candidate_kernel, multiplicity, GsDiagnostics, OrthoSystem};
pub use solvers::{
    solve_expansion, solve_inversion, solve_pseudo_inverse, InversionResult, PseudoInverseResult,
};
