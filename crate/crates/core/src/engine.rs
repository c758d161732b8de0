//! POAFD and Weak-POAFD.
//!
//! Each step picks the parameter `q` maximizing `|<G_n, B_n^q>|`, where `G_n`
//! is the current residual and `B_n^q` is the Gram-Schmidt orthonormalization
//! of the (multiple) kernel at `q` against `B_1..B_{n-1}`. The continuum
//! supremum is replaced by a polar grid followed by local refinement.
//!
//! The grid sweep uses a cached form of the objective. Because `G_n` is
//! orthogonal to `B_1..B_{n-1}` and `<K_q, B_k> = conj(B_k(q))`,
//!
//! ```text
//! |<G_n, B_n^q>| = |G_n(q)| / sqrt(‖K_q‖² - Σ_k |B_k(q)|²)
//! ```
//!
//! and the energies `Σ_k |B_k(q)|²` are accumulated per grid point, one new
//! term per step. Points where the denominator suffers cancellation, points
//! coinciding with earlier selections (multiple kernels) and near-maximal
//! points are re-evaluated through explicit Gram-Schmidt.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{horner, hk_inner, szego, szego_norm2, DiscFunction, KernelParam, DEFAULT_R_MAX};
use crate::ortho::{candidate_param, orthogonal_part, OrthoSystem, DEFAULT_DELTA_SPAN, DEFAULT_EPS_COINCIDE};

/// Below this relative defect the cached objective is recomputed explicitly.
const CANCELLATION_RATIO: f64 = 1e-8;
/// Grid values within this relative distance of the maximum are recomputed explicitly.
const POLISH_BAND: f64 = 1e-5;
/// Half-width (in grid steps) of each local refinement patch.
const REFINE_HALF_WIDTH: i32 = 2;
const REFINE_SHRINK: f64 = 4.0;

/// Candidate parameters for the maximal selection.
#[derive(Clone, Debug, Serialize)]
pub struct SelectionGrid {
    points: Vec<Complex64>,
    radial_count: usize,
    angular_count: usize,
    r_max: f64,
}

impl SelectionGrid {
    /// Polar grid with radii `r_max * i / (radial_count - 1)` and angles
    /// `2π j / angular_count`; the origin appears once.
    pub fn polar(radial_count: usize, angular_count: usize, r_max: f64) -> Result<Self> {
        if radial_count < 2 || angular_count < 1 {
            return Err(Error::InvalidConfig(format!(
                "polar grid needs radial_count >= 2 and angular_count >= 1, got {radial_count}x{angular_count}"
            )));
        }
        check_r_max(r_max)?;
        let mut points = Vec::with_capacity(1 + (radial_count - 1) * angular_count);
        points.push(Complex64::new(0.0, 0.0));
        for i in 1..radial_count {
            let r = r_max * i as f64 / (radial_count - 1) as f64;
            for j in 0..angular_count {
                points.push(Complex64::from_polar(r, TAU * j as f64 / angular_count as f64));
            }
        }
        Ok(Self {
            points,
            radial_count,
            angular_count,
            r_max,
        })
    }

    /// Unstructured grid; local refinement is unavailable for it.
    pub fn from_points(points: Vec<Complex64>, r_max: f64) -> Result<Self> {
        check_r_max(r_max)?;
        let grid = Self {
            points: Vec::new(),
            radial_count: 0,
            angular_count: 0,
            r_max,
        };
        grid.with_points(points)
    }

    /// Adds extra points (for instance exact atom locations).
    pub fn with_points(mut self, extra: Vec<Complex64>) -> Result<Self> {
        for q in extra {
            if !(q.norm() <= self.r_max) {
                return Err(Error::ParameterOutOfDomain {
                    q_re: q.re,
                    q_im: q.im,
                    r_max: self.r_max,
                });
            }
            if !self.points.contains(&q) {
                self.points.push(q);
            }
        }
        if self.points.is_empty() {
            return Err(Error::InvalidConfig("selection grid is empty".into()));
        }
        Ok(self)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn radial_count(&self) -> usize {
        self.radial_count
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    fn spacing(&self) -> Option<(f64, f64)> {
        (self.radial_count >= 2 && self.angular_count >= 1).then(|| {
            (
                self.r_max / (self.radial_count - 1) as f64,
                TAU / self.angular_count as f64,
            )
        })
    }
}

impl Default for SelectionGrid {
    fn default() -> Self {
        Self::polar(64, 128, DEFAULT_R_MAX).expect("default grid is valid")
    }
}

fn check_r_max(r_max: f64) -> Result<()> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::InvalidConfig(format!("r_max must lie in (0, 1), got {r_max}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SelectionMode {
    Full,
    Weak { rho: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct PoafdConfig {
    pub mode: SelectionMode,
    pub max_terms: usize,
    /// Stopping tolerance on `‖G‖`, relative to `‖F‖`.
    pub tol_residual: f64,
    pub eps_coincide: f64,
    pub delta_span: f64,
    #[serde(skip)]
    pub grid: SelectionGrid,
    pub refine_steps: usize,
}

impl Default for PoafdConfig {
    fn default() -> Self {
        Self {
            mode: SelectionMode::Full,
            max_terms: 64,
            tol_residual: 1e-8,
            eps_coincide: DEFAULT_EPS_COINCIDE,
            delta_span: DEFAULT_DELTA_SPAN,
            grid: SelectionGrid::default(),
            refine_steps: 3,
        }
    }
}

impl PoafdConfig {
    pub fn validate(&self) -> Result<()> {
        if let SelectionMode::Weak { rho } = self.mode {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::InvalidConfig(format!("rho must lie in (0, 1), got {rho}")));
            }
        }
        if !(self.tol_residual >= 0.0) {
            return Err(Error::InvalidConfig("tol_residual must be nonnegative".into()));
        }
        if !(self.eps_coincide > 0.0) || !(self.delta_span > 0.0) {
            return Err(Error::InvalidConfig("eps_coincide and delta_span must be positive".into()));
        }
        if self.grid.points.is_empty() {
            return Err(Error::InvalidConfig("selection grid is empty".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionResult {
    pub system: OrthoSystem,
    /// `<F, B_k>` for every selected term.
    pub coefficients: Vec<Complex64>,
    /// `residual_norms[n] = ‖F - Σ_{k<=n} <F,B_k> B_k‖`; entry 0 is `‖F‖`.
    pub residual_norms: Vec<f64>,
    /// Objective value achieved at each step.
    pub objective_trace: Vec<f64>,
    /// Largest objective over the base grid at each step.
    pub supremum_trace: Vec<f64>,
}

impl ExpansionResult {
    pub(crate) fn empty(trunc: usize, norm: f64) -> Self {
        Self {
            system: OrthoSystem::new(trunc),
            coefficients: Vec::new(),
            residual_norms: vec![norm],
            objective_trace: Vec::new(),
            supremum_trace: Vec::new(),
        }
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn params(&self) -> &[KernelParam] {
        self.system.params()
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_norms.last().expect("residual_norms is never empty")
    }
}

/// `|<G, B^q>|` for the (multiple) kernel at `q` against the current system,
/// computed by explicit Gram-Schmidt. Degenerate candidates give 0.
pub fn selection_objective(
    sys: &OrthoSystem,
    residual: &DiscFunction,
    q: Complex64,
    eps_coincide: f64,
    delta_span: f64,
) -> f64 {
    let param = candidate_param(sys.params(), q, eps_coincide);
    objective_for(sys, residual, &param, delta_span)
}

fn objective_for(sys: &OrthoSystem, residual: &DiscFunction, param: &KernelParam, delta_span: f64) -> f64 {
    let candidate = szego(param, sys.trunc());
    let cand_norm2 = candidate.norm2();
    let part = orthogonal_part(sys.basis(), &candidate);
    if !(part.norm2 > delta_span * cand_norm2) {
        return 0.0;
    }
    hk_inner(residual, &part.residual).norm() / part.norm2.sqrt()
}

#[derive(Clone, Copy, Debug)]
struct Scored {
    q: Complex64,
    value: f64,
}

/// Greater value wins; exact ties go to smaller |q|, then smaller argument.
fn better(a: &Scored, b: &Scored) -> bool {
    match a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match a.q.norm().partial_cmp(&b.q.norm()).unwrap_or(Ordering::Equal) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => a.q.arg() < b.q.arg(),
        },
    }
}

/// Outcome of one maximal selection.
#[derive(Clone, Copy, Debug)]
pub struct Selection {
    pub param: KernelParam,
    pub objective: f64,
    /// Supremum of the objective over the (eligible) base grid.
    pub grid_supremum: f64,
}

/// Per-grid-point cache for the sweep.
struct SweepState {
    points: Vec<Complex64>,
    kernel_norm2: Vec<f64>,
    energy: Vec<f64>,
}

impl SweepState {
    fn new(grid: &SelectionGrid, trunc: usize) -> Self {
        let points = grid.points.clone();
        let kernel_norm2 = points.par_iter().map(|q| szego_norm2(*q, trunc)).collect();
        let energy = vec![0.0; points.len()];
        Self {
            points,
            kernel_norm2,
            energy,
        }
    }

    fn for_system(grid: &SelectionGrid, sys: &OrthoSystem) -> Self {
        let mut state = Self::new(grid, sys.trunc());
        for b in sys.basis() {
            state.absorb(b);
        }
        state
    }

    fn absorb(&mut self, b: &DiscFunction) {
        let coeffs = b.coeffs();
        self.energy
            .par_iter_mut()
            .zip(self.points.par_iter())
            .for_each(|(e, q)| *e += horner(coeffs, *q).norm_sqr());
    }

    /// Objective at every grid point; `None` marks points excluded from the sweep.
    fn sweep(
        &self,
        sys: &OrthoSystem,
        residual: &DiscFunction,
        eps_coincide: f64,
        delta_span: f64,
        skip_coincident: bool,
    ) -> Vec<Option<f64>> {
        let coeffs = residual.coeffs();
        let mut values: Vec<Option<f64>> = (0..self.points.len())
            .into_par_iter()
            .map(|i| {
                let q = self.points[i];
                let param = candidate_param(sys.params(), q, eps_coincide);
                if param.order > 0 {
                    if skip_coincident {
                        return None;
                    }
                    return Some(objective_for(sys, residual, &param, delta_span));
                }
                let norm2 = self.kernel_norm2[i];
                let defect = norm2 - self.energy[i];
                if defect < CANCELLATION_RATIO * norm2 {
                    return Some(objective_for(sys, residual, &param, delta_span));
                }
                Some(horner(coeffs, q).norm() / defect.sqrt())
            })
            .collect();

        let top = values.iter().flatten().copied().fold(0.0, f64::max);
        if top > 0.0 {
            let threshold = top * (1.0 - POLISH_BAND);
            values.par_iter_mut().enumerate().for_each(|(i, v)| {
                if let Some(x) = v {
                    if *x >= threshold {
                        let param = candidate_param(sys.params(), self.points[i], eps_coincide);
                        *x = objective_for(sys, residual, &param, delta_span);
                    }
                }
            });
        }
        values
    }
}

/// One maximal-selection step for residual `residual` against `sys`.
pub fn maximal_selection(sys: &OrthoSystem, residual: &DiscFunction, config: &PoafdConfig) -> Result<Selection> {
    config.validate()?;
    let state = SweepState::for_system(&config.grid, sys);
    select_with_state(&state, sys, residual, config)
}

fn select_with_state(
    state: &SweepState,
    sys: &OrthoSystem,
    residual: &DiscFunction,
    config: &PoafdConfig,
) -> Result<Selection> {
    if residual.is_zero() {
        return Err(Error::ZeroInput);
    }
    let weak = matches!(config.mode, SelectionMode::Weak { .. });
    let values = state.sweep(sys, residual, config.eps_coincide, config.delta_span, weak);

    let mut best: Option<Scored> = None;
    for (q, v) in state.points.iter().zip(&values) {
        if let Some(value) = *v {
            let s = Scored { q: *q, value };
            if best.as_ref().is_none_or(|b| better(&s, b)) {
                best = Some(s);
            }
        }
    }
    let best = match best {
        Some(b) if b.value > 0.0 => b,
        _ => return Err(Error::ExhaustedDictionary),
    };
    let supremum = best.value;

    let chosen = match config.mode {
        SelectionMode::Weak { rho } => {
            let threshold = rho * supremum;
            let (q, value) = state
                .points
                .iter()
                .zip(&values)
                .find_map(|(q, v)| v.filter(|x| *x >= threshold).map(|x| (*q, x)))
                .expect("the supremum itself passes the threshold");
            Scored { q, value }
        }
        SelectionMode::Full => refine(best, sys, residual, config),
    };
    Ok(Selection {
        param: candidate_param(sys.params(), chosen.q, config.eps_coincide),
        objective: chosen.value,
        grid_supremum: supremum,
    })
}

fn refine(mut incumbent: Scored, sys: &OrthoSystem, residual: &DiscFunction, config: &PoafdConfig) -> Scored {
    let Some((mut dr, mut dt)) = config.grid.spacing() else {
        return incumbent;
    };
    let r_max = config.grid.r_max;
    for _ in 0..config.refine_steps {
        dr /= REFINE_SHRINK;
        dt /= REFINE_SHRINK;
        let center = incumbent;
        let (r0, t0) = (center.q.norm(), center.q.arg());
        let mut patch = Vec::new();
        for i in -REFINE_HALF_WIDTH..=REFINE_HALF_WIDTH {
            let r = r0 + i as f64 * dr;
            if r < 0.0 || r > r_max {
                continue;
            }
            for j in -REFINE_HALF_WIDTH..=REFINE_HALF_WIDTH {
                if i == 0 && j == 0 {
                    continue;
                }
                patch.push(Complex64::from_polar(r, t0 + j as f64 * dt));
            }
        }
        let scored: Vec<Scored> = patch
            .par_iter()
            .map(|q| Scored {
                q: *q,
                value: selection_objective(sys, residual, *q, config.eps_coincide, config.delta_span),
            })
            .collect();
        for s in scored {
            if better(&s, &incumbent) {
                incumbent = s;
            }
        }
    }
    incumbent
}

/// Adaptive expansion of `f` by POAFD (or Weak-POAFD).
pub fn poafd_expand(f: &DiscFunction, config: &PoafdConfig) -> Result<ExpansionResult> {
    config.validate()?;
    let f_norm = f.norm();
    if f_norm == 0.0 {
        return Err(Error::ZeroInput);
    }
    let mut result = ExpansionResult::empty(f.trunc(), f_norm);
    let mut state = SweepState::new(&config.grid, f.trunc());
    let mut residual = f.clone();
    let stop = config.tol_residual * f_norm;

    while result.terms() < config.max_terms {
        let current = result.final_residual();
        if current <= stop || residual.is_zero() {
            break;
        }
        let selection = select_with_state(&state, &result.system, &residual, config)?;
        let diagnostics = result.system.extend(selection.param, config.delta_span)?;
        if !diagnostics.accepted {
            return Err(Error::ExhaustedDictionary);
        }
        let b = result.system.basis().last().expect("just extended");
        let coefficient = hk_inner(f, b);
        let step = hk_inner(&residual, b);
        residual.axpy(-step, b);
        state.absorb(b);

        result.coefficients.push(coefficient);
        result.residual_norms.push(residual.norm());
        result.objective_trace.push(selection.objective);
        result.supremum_trace.push(selection.grid_supremum);
    }
    Ok(result)
}

/// Partial sum `Σ_{k<=n} <F, B_k> B_k`.
pub fn reconstruct(result: &ExpansionResult, n: usize) -> Result<DiscFunction> {
    if n > result.terms() {
        return Err(Error::TermsExceeded {
            requested: n,
            available: result.terms(),
        });
    }
    let mut out = DiscFunction::zeros(result.system.trunc());
    for (c, b) in result.coefficients.iter().zip(result.system.basis()).take(n) {
        out.axpy(*c, b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::szego;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kernel(q: Complex64, n: usize) -> DiscFunction {
        szego(&KernelParam::new(q, 0).unwrap(), n)
    }

    fn normalized(q: Complex64, n: usize) -> DiscFunction {
        let k = kernel(q, n);
        k.scale(c(1.0 / k.norm(), 0.0))
    }

    #[test]
    fn polar_grid_layout() {
        let g = SelectionGrid::polar(4, 8, 0.9).unwrap();
        assert_eq!(g.points().len(), 1 + 3 * 8);
        assert!(g.points().iter().all(|q| q.norm() <= 0.9 + 1e-15));
        assert!(SelectionGrid::polar(1, 8, 0.9).is_err());
        assert!(SelectionGrid::polar(4, 8, 1.0).is_err());
        assert!(SelectionGrid::from_points(vec![], 0.9).is_err());
        assert!(SelectionGrid::from_points(vec![c(0.95, 0.0)], 0.9).is_err());
    }

    #[test]
    fn objective_for_constant_residual() {
        let n = 256;
        let sys = OrthoSystem::new(n);
        let f = kernel(c(0.0, 0.0), n);
        for q in [c(0.0, 0.0), c(0.3, 0.1), c(-0.6, 0.5)] {
            let v = selection_objective(&sys, &f, q, 1e-9, 1e-12);
            assert!((v - (1.0 - q.norm_sqr()).sqrt()).abs() < 1e-12);
        }
        let zero = DiscFunction::zeros(n);
        assert_eq!(selection_objective(&sys, &zero, c(0.2, 0.0), 1e-9, 1e-12), 0.0);
    }

    #[test]
    fn objective_is_one_at_atom() {
        let n = 256;
        let sys = OrthoSystem::new(n);
        let q0 = c(0.4, 0.2);
        let f = normalized(q0, n);
        assert!((selection_objective(&sys, &f, q0, 1e-9, 1e-12) - 1.0).abs() < 1e-12);
        assert!(selection_objective(&sys, &f, c(0.1, 0.2), 1e-9, 1e-12) < 1.0);
    }

    #[test]
    fn selects_origin_for_constant() {
        let cfg = PoafdConfig {
            grid: SelectionGrid::polar(16, 32, 0.95).unwrap(),
            ..Default::default()
        };
        let sys = OrthoSystem::new(64);
        let s = maximal_selection(&sys, &kernel(c(0.0, 0.0), 64), &cfg).unwrap();
        assert_eq!(s.param.q, c(0.0, 0.0));
        assert!((s.objective - 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_atom_is_recovered() {
        let n = 256;
        let q0 = c(0.4, 0.2);
        let cfg = PoafdConfig {
            grid: SelectionGrid::polar(16, 32, 0.95).unwrap().with_points(vec![q0]).unwrap(),
            ..Default::default()
        };
        let f = normalized(q0, n);
        let s = maximal_selection(&OrthoSystem::new(n), &f, &cfg).unwrap();
        assert_eq!(s.param.q, q0);
        assert!((s.objective - 1.0).abs() < 1e-12);

        let f3 = normalized(c(0.2, 0.0), n).scale(c(3.0, 0.0));
        let cfg = PoafdConfig {
            grid: SelectionGrid::polar(16, 32, 0.95).unwrap().with_points(vec![c(0.2, 0.0)]).unwrap(),
            ..Default::default()
        };
        let r = poafd_expand(&f3, &cfg).unwrap();
        assert_eq!(r.terms(), 1);
        assert!((r.coefficients[0] - c(3.0, 0.0)).norm() < 1e-10);
        assert!(r.final_residual() < 1e-10);
    }

    #[test]
    fn weak_mode_threshold_for_constant() {
        let cfg = PoafdConfig {
            mode: SelectionMode::Weak { rho: 0.9 },
            grid: SelectionGrid::polar(32, 64, 0.95).unwrap(),
            ..Default::default()
        };
        let s = maximal_selection(&OrthoSystem::new(64), &kernel(c(0.0, 0.0), 64), &cfg).unwrap();
        assert!(s.param.q.norm() <= 0.19f64.sqrt() + 1e-12);
        assert!(s.objective >= 0.9 * s.grid_supremum);
    }

    #[test]
    fn config_validation() {
        let mut cfg = PoafdConfig {
            mode: SelectionMode::Weak { rho: 1.0 },
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        cfg.mode = SelectionMode::Full;
        cfg.tol_residual = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_input_rejected() {
        let cfg = PoafdConfig::default();
        assert!(matches!(poafd_expand(&DiscFunction::zeros(8), &cfg), Err(Error::ZeroInput)));
    }

    #[test]
    fn reconstruct_bounds_and_energy() {
        let n = 128;
        let mut f = kernel(c(0.3, 0.0), n);
        f.axpy(c(0.5, -1.0), &kernel(c(-0.2, 0.6), n));
        let cfg = PoafdConfig {
            grid: SelectionGrid::polar(16, 32, 0.95).unwrap(),
            max_terms: 6,
            tol_residual: 0.0,
            ..Default::default()
        };
        let r = poafd_expand(&f, &cfg).unwrap();
        assert!(reconstruct(&r, 0).unwrap().is_zero());
        assert!(matches!(reconstruct(&r, r.terms() + 1), Err(Error::TermsExceeded { .. })));
        for k in 0..=r.terms() {
            let part = reconstruct(&r, k).unwrap();
            assert!((f.sub(&part).norm() - r.residual_norms[k]).abs() < 1e-10);
            let energy = part.norm2() + r.residual_norms[k].powi(2);
            assert!((energy - f.norm2()).abs() < 1e-8 * f.norm2());
        }
        assert!(r.residual_norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
    }

    #[test]
    fn tie_break_prefers_smaller_modulus_then_argument() {
        let a = Scored { q: c(0.5, 0.0), value: 1.0 };
        let b = Scored { q: c(0.3, 0.0), value: 1.0 };
        assert!(better(&b, &a));
        let d = Scored { q: c(0.0, 0.3), value: 1.0 };
        assert!(better(&b, &d));
        let e = Scored { q: c(0.9, 0.0), value: 1.1 };
        assert!(better(&e, &b));
    }
}
