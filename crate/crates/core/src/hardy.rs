//! Coefficient model of the Hardy space on the unit disc and of `L²` on the
//! unit circle.
//!
//! A [`DiscFunction`] is a truncated Taylor series `Σ_{k=0}^{N} c_k z^k`, an
//! element of `H²(D)` with norm `Σ|c_k|²`. A [`BoundaryFunction`] is a truncated
//! Fourier series `Σ_{k=-N}^{N} c_k e^{ikt}` on the circle. Inner products are
//! exact finite sums in both spaces, so the operator
//!
//! ```text
//! (L f)(p) = <f, h_p>_{L²},    h_p(e^{it}) = 1 / (1 - conj(p) e^{it})
//! ```
//!
//! is realized exactly: it keeps the nonnegative frequencies of `f` and
//! annihilates the negative ones. Its null space is the co-analytic part and its
//! inverse on the range is the boundary-value embedding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Default truncation degree of coefficient vectors.
pub const DEFAULT_TRUNCATION: usize = 256;
/// Default bound on parameter moduli.
pub const DEFAULT_R_MAX: f64 = 0.95;
/// Minimum radial/angular node count for the area-integral norm.
pub const MIN_QUADRATURE_NODES: usize = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated Taylor series on the unit disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::FunctionRecord", into = "crate::io::FunctionRecord")]
pub struct DiscFunction {
    coeffs: Vec<Complex64>,
}

/// Truncated two-sided Fourier series on the unit circle, `c_{-N}..c_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::FunctionRecord", into = "crate::io::FunctionRecord")]
pub struct BoundaryFunction {
    trunc: usize,
    coeffs: Vec<Complex64>,
}

/// Kernel parameter: a point of the disc together with a derivative order.
///
/// The order is the multiplicity minus one; order `m` selects the `m`-th
/// derivative of the Szegő kernel along the conjugate parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParam {
    pub q: Complex64,
    pub order: usize,
}

fn check_finite(coeffs: &[Complex64]) -> Result<()> {
    if let Some(i) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::MalformedInput(format!("coefficient {i} is not finite")));
    }
    Ok(())
}

impl KernelParam {
    /// Parameter checked against [`DEFAULT_R_MAX`].
    pub fn new(q: Complex64, order: usize) -> Result<Self> {
        Self::with_limit(q, order, DEFAULT_R_MAX)
    }

    pub fn with_limit(q: Complex64, order: usize, r_max: f64) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite()) || q.norm() > r_max || r_max >= 1.0 {
            return Err(Error::ParameterOutOfDomain {
                q_re: q.re,
                q_im: q.im,
                r_max,
            });
        }
        Ok(Self { q, order })
    }

    /// Order-zero parameter.
    pub fn simple(q: Complex64) -> Result<Self> {
        Self::new(q, 0)
    }
}

impl DiscFunction {
    pub fn zeros(trunc: usize) -> Self {
        Self {
            coeffs: vec![ZERO; trunc + 1],
        }
    }

    /// Wraps a coefficient vector `c_0..c_N`; rejects an empty or non-finite one.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::MalformedInput("empty coefficient vector".into()));
        }
        check_finite(&coeffs)?;
        Ok(Self { coeffs })
    }

    /// The constant function `value`, truncated at `trunc`.
    pub fn constant(value: Complex64, trunc: usize) -> Self {
        let mut f = Self::zeros(trunc);
        f.coeffs[0] = value;
        f
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Truncation degree `N`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Zero-pads or truncates to degree `trunc`.
    pub fn resized(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc + 1, ZERO);
        Self { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`, zero-padding `self` if `other` is longer.
    pub fn axpy(&mut self, s: Complex64, other: &DiscFunction) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), ZERO);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn sub(&self, other: &DiscFunction) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }

    /// Taylor coefficients of the derivative, degree `N - 1`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zeros(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// Highest index with a nonzero coefficient (0 for the zero function).
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }
}

impl BoundaryFunction {
    pub fn zeros(trunc: usize) -> Self {
        Self {
            trunc,
            coeffs: vec![ZERO; 2 * trunc + 1],
        }
    }

    /// Builds from coefficients `c_{min_k}, c_{min_k+1}, ...`; pads to a
    /// symmetric band `-N..N`.
    pub fn from_two_sided(min_k: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::MalformedInput("empty coefficient vector".into()));
        }
        if min_k > 0 {
            return Err(Error::MalformedInput(format!("min_k must be <= 0, got {min_k}")));
        }
        check_finite(&coeffs)?;
        let max_k = min_k + coeffs.len() as i64 - 1;
        let trunc = (-min_k).max(max_k) as usize;
        let mut out = Self::zeros(trunc);
        for (i, c) in coeffs.into_iter().enumerate() {
            out.set(min_k + i as i64, c);
        }
        Ok(out)
    }

    /// Boundary function with only nonnegative frequencies `c_0..c_N`.
    pub fn from_analytic(coeffs: &[Complex64]) -> Self {
        let trunc = coeffs.len().saturating_sub(1);
        let mut out = Self::zeros(trunc);
        out.coeffs[trunc..].copy_from_slice(coeffs);
        out
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn min_k(&self) -> i64 {
        -(self.trunc as i64)
    }

    /// All coefficients from `c_{-N}` to `c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficients `c_0..c_N`.
    pub fn analytic_coeffs(&self) -> &[Complex64] {
        &self.coeffs[self.trunc..]
    }

    /// Coefficients `c_{-N}..c_{-1}`.
    pub fn coanalytic_coeffs(&self) -> &[Complex64] {
        &self.coeffs[..self.trunc]
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.trunc as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Sets `c_k`, widening the band if needed.
    pub fn set(&mut self, k: i64, value: Complex64) {
        let need = k.unsigned_abs() as usize;
        if need > self.trunc {
            *self = self.resized(need);
        }
        let idx = (k + self.trunc as i64) as usize;
        self.coeffs[idx] = value;
    }

    pub fn resized(&self, trunc: usize) -> Self {
        let mut out = Self::zeros(trunc);
        let lo = -(self.trunc.min(trunc) as i64);
        for k in lo..=-lo {
            let idx = (k + trunc as i64) as usize;
            out.coeffs[idx] = self.coeff(k);
        }
        out
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`, widening the band of `self` if needed.
    pub fn axpy(&mut self, s: Complex64, other: &BoundaryFunction) {
        if other.trunc > self.trunc {
            *self = self.resized(other.trunc);
        }
        let offset = self.trunc - other.trunc;
        for (a, b) in self.coeffs[offset..].iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn add(&self, other: &BoundaryFunction) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other);
        out
    }

    pub fn sub(&self, other: &BoundaryFunction) -> Self {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// `<a, b>` in `H²(D)`: `Σ a_k conj(b_k)`. Shorter inputs are zero-padded.
pub fn hk_inner(a: &DiscFunction, b: &DiscFunction) -> Complex64 {
    dot(&a.coeffs, &b.coeffs)
}

/// `<f, g>` in `L²(∂D)` with normalized arc length, by Parseval.
pub fn l2_inner(f: &BoundaryFunction, g: &BoundaryFunction) -> Complex64 {
    let n = f.trunc.min(g.trunc);
    let fs = &f.coeffs[f.trunc - n..f.trunc + n + 1];
    let gs = &g.coeffs[g.trunc - n..g.trunc + n + 1];
    dot(fs, gs)
}

/// Fills `out[k] = falling(k, m) * w^{k-m}` for `k >= m`, zero below.
fn kernel_coeffs(w: Complex64, order: usize, out: &mut [Complex64]) {
    let mut power = Complex64::new(1.0, 0.0);
    for (k, slot) in out.iter_mut().enumerate() {
        if k < order {
            *slot = ZERO;
            continue;
        }
        let falling: f64 = (0..order).map(|i| (k - i) as f64).product();
        *slot = power * falling;
        power *= w;
    }
}

/// Szegő kernel `K_q(z) = 1 / (1 - conj(q) z)` of `H²(D)` (order 0), or its
/// `m`-th derivative in `conj(q)`, truncated at degree `trunc`.
pub fn szego(param: &KernelParam, trunc: usize) -> DiscFunction {
    let mut coeffs = vec![ZERO; trunc + 1];
    kernel_coeffs(param.q.conj(), param.order, &mut coeffs);
    DiscFunction { coeffs }
}

/// Boundary representative `h_q` of the Szegő kernel (and its derivatives):
/// the same coefficients as [`szego`] at nonnegative frequencies.
pub fn szego_boundary(param: &KernelParam, trunc: usize) -> BoundaryFunction {
    let mut out = BoundaryFunction::zeros(trunc);
    kernel_coeffs(param.q.conj(), param.order, &mut out.coeffs[trunc..]);
    out
}

/// `‖K_q‖²` of the order-zero kernel at truncation `trunc`.
pub fn szego_norm2(q: Complex64, trunc: usize) -> f64 {
    let r2 = q.norm_sqr();
    if r2 == 0.0 {
        return 1.0;
    }
    (1.0 - r2.powi(trunc as i32 + 1)) / (1.0 - r2)
}

/// Horner evaluation of the Taylor polynomial at `p`, `|p| < 1`.
pub fn evaluate(f: &DiscFunction, p: Complex64) -> Result<Complex64> {
    let modulus = p.norm();
    if !(modulus < 1.0) {
        return Err(Error::OutsideDisc { modulus });
    }
    Ok(horner(&f.coeffs, p))
}

pub(crate) fn horner(coeffs: &[Complex64], p: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * p + c)
}

/// The operator `L`: the Cauchy integral of boundary data, i.e. the
/// nonnegative-frequency coefficients of `f`.
pub fn apply_l(f: &BoundaryFunction) -> DiscFunction {
    DiscFunction {
        coeffs: f.analytic_coeffs().to_vec(),
    }
}

/// Minimum-norm preimage of `F` under `L`: its boundary values, with no
/// negative-frequency content.
pub fn apply_l_inverse(f: &DiscFunction) -> BoundaryFunction {
    BoundaryFunction::from_analytic(&f.coeffs)
}

/// Splits `f` into its analytic (`k >= 0`) and co-analytic (`k < 0`) parts.
pub fn plemelj_split(f: &BoundaryFunction) -> (BoundaryFunction, BoundaryFunction) {
    let mut plus = BoundaryFunction::zeros(f.trunc);
    let mut minus = BoundaryFunction::zeros(f.trunc);
    plus.coeffs[f.trunc..].copy_from_slice(f.analytic_coeffs());
    minus.coeffs[..f.trunc].copy_from_slice(f.coanalytic_coeffs());
    (plus, minus)
}

/// `‖F‖²` via the Littlewood-Paley area integral
/// `|F(0)|² + 2 ∫_D |F'(z)|² log(1/|z|) dA(z)` (normalized area measure).
///
/// Angle uses the trapezoid rule; radius uses Gauss-Legendre after the
/// substitution `r = t²`, which turns the weight into `4 t³ log(1/t)`.
pub fn littlewood_paley_norm2(
    f: &DiscFunction,
    radial_nodes: usize,
    angular_nodes: usize,
) -> Result<f64> {
    if radial_nodes < MIN_QUADRATURE_NODES || angular_nodes < MIN_QUADRATURE_NODES {
        return Err(Error::InvalidConfig(format!(
            "quadrature needs at least {MIN_QUADRATURE_NODES} nodes per direction, got {radial_nodes}x{angular_nodes}"
        )));
    }
    let deriv = f.derivative();
    let deg = deriv.effective_degree();
    let dcoeffs = &deriv.coeffs[..=deg];
    let (ts, ws) = gauss_legendre(radial_nodes, 0.0, 1.0);
    let angles: Vec<Complex64> = (0..angular_nodes)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / angular_nodes as f64))
        .collect();
    let mut radial_sum = 0.0;
    for (t, w) in ts.iter().zip(&ws) {
        let r = t * t;
        let ring: f64 = angles.iter().map(|u| horner(dcoeffs, u * r).norm_sqr()).sum();
        radial_sum += w * t.powi(3) * (1.0 / t).ln() * ring;
    }
    Ok(f.coeffs[0].norm_sqr() + 16.0 / angular_nodes as f64 * radial_sum)
}
