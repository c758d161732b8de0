//! Brute-force reference computations.
//!
//! Nothing here calls the orthonormalization, selection or basis-method code:
//! the oracles use only the coefficient primitives of [`crate::hardy`] and their
//! own linear algebra, so agreement with the primary routines is a genuine
//! cross-check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{evaluate, littlewood_paley_norm2, szego, DiscFunction, KernelParam};

/// Largest condition number accepted by [`projection_least_squares`].
pub const MAX_GRAM_CONDITION: f64 = 1e14;
const GRAM_REGULARIZATION: f64 = 1e-12;

/// Normal equations for the projection onto `span{K_{q_j}}`.
#[derive(Clone, Debug)]
pub struct GramSystem {
    /// `gram[(i, j)] = <K_{q_i}, K_{q_j}>`.
    pub gram: DMatrix<Complex64>,
    /// `rhs[j] = <F, K_{q_j}> = F(q_j)`.
    pub rhs: DVector<Complex64>,
}

impl GramSystem {
    /// Entries in closed form: the geometric sum `Σ_{k<=N} (conj(q_i) q_j)^k`.
    pub fn build(f: &DiscFunction, points: &[Complex64]) -> Result<Self> {
        let trunc = f.trunc() as i32;
        let n = points.len();
        let gram = DMatrix::from_fn(n, n, |i, j| {
            let z = points[i].conj() * points[j];
            if z == Complex64::new(0.0, 0.0) {
                Complex64::new(1.0, 0.0)
            } else {
                (Complex64::new(1.0, 0.0) - z.powi(trunc + 1)) / (Complex64::new(1.0, 0.0) - z)
            }
        });
        let rhs = points
            .iter()
            .map(|q| evaluate(f, *q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            gram,
            rhs: DVector::from_vec(rhs),
        })
    }

    /// 2-norm condition number from the singular values.
    pub fn condition(&self) -> f64 {
        let s = self.gram.clone().singular_values();
        let max = s.iter().copied().fold(0.0, f64::max);
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

/// Least-squares projection of `F` onto the span of the order-zero kernels at
/// `points`, by the Gram normal equations.
pub fn projection_least_squares(f: &DiscFunction, points: &[Complex64]) -> Result<DiscFunction> {
    let system = GramSystem::build(f, points)?;
    let estimate = system.condition();
    if !(estimate <= MAX_GRAM_CONDITION) {
        return Err(Error::IllConditioned {
            estimate,
            limit: MAX_GRAM_CONDITION,
        });
    }
    // Σ_j x_j <K_j, K_i> = <F, K_i>; the matrix is the transpose of `gram`.
    let matrix = system.gram.transpose();
    let x = match matrix.clone().cholesky() {
        Some(ch) => ch.solve(&system.rhs),
        None => {
            let shift = GRAM_REGULARIZATION * matrix.diagonal().iter().map(|z| z.re).fold(0.0, f64::max);
            let reg = &matrix + DMatrix::<Complex64>::identity(points.len(), points.len()) * Complex64::new(shift, 0.0);
            reg.cholesky()
                .ok_or(Error::IllConditioned {
                    estimate,
                    limit: MAX_GRAM_CONDITION,
                })?
                .solve(&system.rhs)
        }
    };
    let mut out = DiscFunction::zeros(f.trunc());
    for (q, xj) in points.iter().zip(x.iter()) {
        let k = szego(&KernelParam { q: *q, order: 0 }, f.trunc());
        out.axpy(*xj, &k);
    }
    Ok(out)
}

/// Selections and residuals of a from-scratch greedy run.
#[derive(Clone, Debug, Serialize)]
pub struct GreedyTrace {
    pub params: Vec<KernelParam>,
    pub objectives: Vec<f64>,
    /// Entry 0 is `‖F‖`; entry `n` is the residual after `n` selections.
    pub residual_norms: Vec<f64>,
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Classical Gram-Schmidt, applied twice, over raw coefficient vectors.
/// Vectors whose remainder is at most `delta` relative are dropped.
fn orthonormal_basis(vectors: &[Vec<Complex64>], delta: f64) -> Vec<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let rem = remove_span(&q, v);
        let n2: f64 = rem.iter().map(|z| z.norm_sqr()).sum();
        let v2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if n2 > delta * v2 {
            let n = n2.sqrt();
            q.push(rem.iter().map(|z| z / n).collect());
        }
    }
    q
}

fn remove_span(q: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        let coeffs: Vec<Complex64> = q.iter().map(|b| cdot(&w, b)).collect();
        for (c, b) in coeffs.iter().zip(q) {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
    w
}

fn order_at(prior: &[KernelParam], q: Complex64, eps_coincide: f64) -> usize {
    prior.iter().filter(|p| (p.q - q).norm() <= eps_coincide).count()
}

/// Objective `|<G_n, B_n^q>|` at every point of `grid`, for the prior
/// selections `prior`, recomputed from scratch.
pub fn objective_scan(
    f: &DiscFunction,
    prior: &[KernelParam],
    grid: &[Complex64],
    eps_coincide: f64,
    delta_span: f64,
) -> Vec<f64> {
    let trunc = f.trunc();
    let kernels: Vec<Vec<Complex64>> = prior.iter().map(|p| szego(p, trunc).into_coeffs()).collect();
    let basis = orthonormal_basis(&kernels, delta_span);
    let residual = remove_span(&basis, f.coeffs());
    grid.iter()
        .map(|q| {
            let param = KernelParam {
                q: *q,
                order: order_at(prior, *q, eps_coincide),
            };
            let k = szego(&param, trunc).into_coeffs();
            let k2: f64 = k.iter().map(|z| z.norm_sqr()).sum();
            let v = remove_span(&basis, &k);
            let v2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if v2 <= delta_span * k2 {
                0.0
            } else {
                cdot(&residual, &v).norm() / v2.sqrt()
            }
        })
        .collect()
}

/// Residual norm of `F` after projecting out the kernels of `params`.
pub fn residual_norm(f: &DiscFunction, params: &[KernelParam], delta_span: f64) -> f64 {
    let kernels: Vec<Vec<Complex64>> = params.iter().map(|p| szego(p, f.trunc()).into_coeffs()).collect();
    let basis = orthonormal_basis(&kernels, delta_span);
    vnorm(&remove_span(&basis, f.coeffs()))
}

/// Greedy selection over `grid` for `steps` steps, every objective recomputed
/// from scratch. Ties go to the smaller modulus, then the smaller argument.
pub fn exhaustive_greedy(
    f: &DiscFunction,
    grid: &[Complex64],
    steps: usize,
    eps_coincide: f64,
    delta_span: f64,
) -> GreedyTrace {
    let mut params: Vec<KernelParam> = Vec::new();
    let mut objectives = Vec::new();
    let mut residual_norms = vec![vnorm(f.coeffs())];
    for _ in 0..steps {
        let values = objective_scan(f, &params, grid, eps_coincide, delta_span);
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in values.iter().enumerate() {
            let take = match best {
                None => true,
                Some((j, bv)) => {
                    *v > bv
                        || (*v == bv
                            && (grid[i].norm() < grid[j].norm()
                                || (grid[i].norm() == grid[j].norm() && grid[i].arg() < grid[j].arg())))
                }
            };
            if take {
                best = Some((i, *v));
            }
        }
        let Some((i, v)) = best else { break };
        if v == 0.0 {
            break;
        }
        let q = grid[i];
        params.push(KernelParam {
            q,
            order: order_at(&params, q, eps_coincide),
        });
        objectives.push(v);
        residual_norms.push(residual_norm(f, &params, delta_span));
    }
    GreedyTrace {
        params,
        objectives,
        residual_norms,
    }
}

/// Central finite difference of order `m` in the conjugate parameter
/// `w = conj(q)` of the coefficients `w^k`, with step `h`.
pub fn finite_difference_kernel_derivative(q: Complex64, m: usize, h: f64, trunc: usize) -> Result<DiscFunction> {
    if m == 0 {
        return DiscFunction::from_coeffs(powers(q.conj(), trunc));
    }
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::InvalidConfig(format!("finite-difference step {h} outside [1e-7, 1e-3]")));
    }
    let w = q.conj();
    let mut acc = vec![Complex64::new(0.0, 0.0); trunc + 1];
    let mut binom = 1.0;
    for j in 0..=m {
        let shift = (m as f64 / 2.0 - j as f64) * h;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for (a, v) in acc.iter_mut().zip(powers(w + shift, trunc)) {
            *a += v * (sign * binom);
        }
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    let scale = h.powi(m as i32);
    DiscFunction::from_coeffs(acc.into_iter().map(|z| z / scale).collect())
}

fn powers(w: Complex64, trunc: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(trunc + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=trunc {
        out.push(p);
        p *= w;
    }
    out
}

/// `‖F‖²` by the Littlewood-Paley area integral on a `nodes × nodes` grid.
pub fn quadrature_hk_norm2(f: &DiscFunction, nodes: usize) -> Result<f64> {
    littlewood_paley_norm2(f, nodes, nodes)
}

/// Relative coefficient-space distance `‖a - b‖ / ‖b‖`.
pub fn relative_error(a: &DiscFunction, b: &DiscFunction) -> f64 {
    let diff = a.sub(b).norm();
    let scale = b.norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kernel(q: Complex64, n: usize) -> DiscFunction {
        szego(&KernelParam { q, order: 0 }, n)
    }

    #[test]
    fn projection_of_member_is_itself() {
        let n = 256;
        let q1 = c(0.3, -0.2);
        let f = kernel(q1, n);
        let p = projection_least_squares(&f, &[q1]).unwrap();
        assert!(relative_error(&p, &f) < 1e-12);
        let f = kernel(c(0.5, 0.0), n);
        let p = projection_least_squares(&f, &[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(relative_error(&p, &f) < 1e-9);
    }

    #[test]
    fn refuses_singular_gram() {
        let f = kernel(c(0.1, 0.0), 64);
        let err = projection_least_squares(&f, &[c(0.1, 0.0), c(0.1, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }));
    }

    #[test]
    fn greedy_picks_atom_first() {
        let n = 128;
        let q0 = c(0.25, 0.5);
        let grid = vec![c(0.0, 0.0), c(0.5, 0.0), q0, c(-0.3, -0.3)];
        let t = exhaustive_greedy(&kernel(q0, n), &grid, 2, 1e-9, 1e-12);
        assert_eq!(t.params[0].q, q0);
        assert!(t.residual_norms[1] < 1e-12);
        assert!(t.residual_norms.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn finite_difference_orders() {
        let n = 128;
        let q = c(0.5, 0.0);
        assert_eq!(
            finite_difference_kernel_derivative(q, 0, 1e-5, n).unwrap(),
            kernel(q, n)
        );
        let fd = finite_difference_kernel_derivative(q, 1, 1e-5, n).unwrap();
        let exact = szego(&KernelParam { q, order: 1 }, n);
        assert!(relative_error(&fd, &exact) < 1e-6);
        let q = c(0.0, 0.3);
        let fd = finite_difference_kernel_derivative(q, 2, 1e-4, n).unwrap();
        let exact = szego(&KernelParam { q, order: 2 }, n);
        assert!(relative_error(&fd, &exact) < 1e-4);
        assert!(finite_difference_kernel_derivative(q, 1, 1e-2, n).is_err());
        assert!(finite_difference_kernel_derivative(q, 1, 1e-9, n).is_err());
    }

    #[test]
    fn quadrature_norms() {
        let z = DiscFunction::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((quadrature_hk_norm2(&z, 256).unwrap() - 1.0).abs() < 1e-8);
        let one = DiscFunction::constant(c(1.0, 0.0), 3);
        assert!((quadrature_hk_norm2(&one, 16).unwrap() - 1.0).abs() < 1e-15);
    }
}
