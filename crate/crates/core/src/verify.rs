//! Randomized cross-checks of the primary routines against the oracles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{basis_expand, basis_invert, BasisPlan};
use crate::engine::{poafd_expand, PoafdConfig, SelectionGrid};
use crate::error::Result;
use crate::hardy::{apply_l, evaluate, hk_inner, szego, DiscFunction, KernelParam};
use crate::oracle::{
    exhaustive_greedy, finite_difference_kernel_derivative, projection_least_squares, quadrature_hk_norm2,
    relative_error,
};
use crate::ortho::{DEFAULT_DELTA_SPAN, DEFAULT_EPS_COINCIDE};
use crate::solvers::{partial_sum_norms, solve_inversion};

pub const DEFAULT_SEED: u64 = 0x5eed_0afd;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub all_passed: bool,
}

/// Random point with `|q| <= r`.
pub fn random_point<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    let radius = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(radius, std::f64::consts::TAU * rng.random::<f64>())
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random polynomial of degree `deg`, zero-padded to `trunc`.
pub fn random_polynomial<R: Rng>(rng: &mut R, deg: usize, trunc: usize) -> DiscFunction {
    let mut coeffs: Vec<Complex64> = (0..=deg).map(|_| random_complex(rng)).collect();
    coeffs.resize(trunc + 1, Complex64::new(0.0, 0.0));
    DiscFunction::from_coeffs(coeffs).expect("finite")
}

/// Random combination of `atoms` normalized kernels with `|q| <= r`.
pub fn random_kernel_sum<R: Rng>(rng: &mut R, atoms: usize, r: f64, trunc: usize) -> DiscFunction {
    let mut f = DiscFunction::zeros(trunc);
    for _ in 0..atoms {
        let k = szego(&KernelParam { q: random_point(rng, r), order: 0 }, trunc);
        f.axpy(random_complex(rng) / k.norm(), &k);
    }
    f
}

/// `count` points with `|q| <= r` and pairwise distance at least `sep`.
pub fn separated_points<R: Rng>(rng: &mut R, count: usize, r: f64, sep: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let q = random_point(rng, r);
        if out.iter().all(|p| (p - q).norm() >= sep) {
            out.push(q);
        }
    }
    out
}

fn outcome(name: &'static str, trials: usize, errors: impl IntoIterator<Item = f64>, tolerance: f64) -> CheckOutcome {
    let max_error = errors.into_iter().fold(0.0, |a: f64, e| if e.is_nan() { f64::NAN } else { a.max(e) });
    CheckOutcome {
        name,
        trials,
        max_error,
        tolerance,
        passed: max_error <= tolerance,
    }
}

/// Runs every oracle/primary pair with `trials` randomized cases (fewer for
/// the expensive greedy and quadrature checks).
pub fn run_suite(seed: u64, trials: usize) -> Result<VerifyReport> {
    let trials = trials.max(1);
    let few = (trials / 10).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let n = 256;

    let mut errs = Vec::new();
    for _ in 0..trials {
        let f = random_kernel_sum(&mut rng, 4, 0.9, n);
        let mut g = random_polynomial(&mut rng, n, n);
        g.axpy(Complex64::new(1.0, 0.0), &f);
        let q = random_point(&mut rng, 0.9);
        let lhs = hk_inner(&g, &szego(&KernelParam { q, order: 0 }, n));
        errs.push((lhs - evaluate(&g, q)?).norm() / g.norm());
    }
    checks.push(outcome("reproducing-property", trials, errs, 1e-10));

    let mut errs = Vec::new();
    for _ in 0..few {
        let f = random_polynomial(&mut rng, 8, 8);
        errs.push((quadrature_hk_norm2(&f, 256)? - f.norm2()).abs());
    }
    checks.push(outcome("littlewood-paley-norm", few, errs, 1e-6));

    let mut s1_errs = Vec::new();
    let mut s2_errs = Vec::new();
    for _ in 0..trials {
        let size = rng.random_range(1..=8);
        let points = separated_points(&mut rng, size, 0.85, 0.15);
        let plan = BasisPlan::new(&points)?;
        let f = random_kernel_sum(&mut rng, 6, 0.9, n);
        let s1 = basis_expand(&f, &plan)?;
        let oracle = projection_least_squares(&f, &points)?;
        s1_errs.push(relative_error(&s1, &oracle));
        let s2 = basis_invert(&f, &plan)?;
        s2_errs.push(relative_error(&apply_l(&s2), &s1));
    }
    checks.push(outcome("basis-expand-vs-gram-projection", trials, s1_errs, 1e-8));
    checks.push(outcome("basis-invert-round-trip", trials, s2_errs, 1e-8));

    let mut errs = Vec::new();
    for _ in 0..trials {
        let q = random_point(&mut rng, 0.9);
        let e1 = relative_error(
            &finite_difference_kernel_derivative(q, 1, 1e-5, n)?,
            &szego(&KernelParam { q, order: 1 }, n),
        );
        errs.push(e1);
    }
    checks.push(outcome("kernel-derivative-order-1", trials, errs, 1e-6));
    let mut errs = Vec::new();
    for _ in 0..trials {
        let q = random_point(&mut rng, 0.9);
        errs.push(relative_error(
            &finite_difference_kernel_derivative(q, 2, 1e-4, n)?,
            &szego(&KernelParam { q, order: 2 }, n),
        ));
    }
    checks.push(outcome("kernel-derivative-order-2", trials, errs, 1e-4));

    let grid = SelectionGrid::polar(8, 16, 0.9)?;
    let config = PoafdConfig {
        grid: grid.clone(),
        refine_steps: 0,
        max_terms: 6,
        tol_residual: 0.0,
        ..Default::default()
    };
    let mut errs = Vec::new();
    for _ in 0..few {
        let f = random_kernel_sum(&mut rng, 5, 0.8, 64);
        let fast = poafd_expand(&f, &config)?;
        let slow = exhaustive_greedy(&f, grid.points(), fast.terms(), DEFAULT_EPS_COINCIDE, DEFAULT_DELTA_SPAN);
        let same = fast.params() == &slow.params[..];
        let worst = fast
            .residual_norms
            .iter()
            .zip(&slow.residual_norms)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        errs.push(if same { worst } else { f64::INFINITY });
    }
    checks.push(outcome("poafd-vs-exhaustive-greedy", few, errs, 1e-9));

    let config = PoafdConfig {
        grid: SelectionGrid::polar(16, 32, 0.95)?,
        max_terms: 12,
        ..Default::default()
    };
    let mut errs = Vec::new();
    for _ in 0..few {
        let f = random_kernel_sum(&mut rng, 6, 0.8, n);
        let inv = solve_inversion(&f, &config)?;
        let norms = partial_sum_norms(&inv.expansion)?;
        for (k, norm) in norms.iter().enumerate() {
            errs.push((inv.inverse_partial(k)?.norm() - norm).abs());
        }
    }
    checks.push(outcome("inversion-isometry", few, errs, 1e-10));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        seed,
        checks,
        all_passed,
    })
}
