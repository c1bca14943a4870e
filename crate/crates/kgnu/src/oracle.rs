//! Independent numerical ground truth: a finite-difference eigensolver for
//! `-psi'' + V_eff(x; E) psi = Ebar^2 psi` with Dirichlet walls.
//!
//! Central differences give a symmetric tridiagonal matrix whose lowest
//! eigenvalues come from Sturm-sequence bisection (pivot signs of the LDL^T
//! factorization count eigenvalues below a shift). Because the effective
//! strengths depend on the relativistic energy, bound levels are roots of
//! `g_n(E) = eps_n(E) - (E^2 - M^2)`, found by scan and bisection.
//! Richardson extrapolation over an (N, 2N) grid pair removes the leading
//! O(h^2) discretization error.

use crate::kg_core::{effective_problem, Domain, KGProblem};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no self-consistent level n = {n} in the energy window")]
    NoRoot { n: u32 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Uniform Dirichlet grid: `steps` intervals, unknowns at the interior
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, steps: usize) -> Result<Self, OracleError> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(OracleError::InvalidGrid(format!(
                "bad span [{x_min}, {x_max}]"
            )));
        }
        if steps < 100 {
            return Err(OracleError::InvalidGrid(format!(
                "need at least 100 steps, got {steps}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            steps,
        })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.steps as f64
    }

    /// Same span, twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            steps: 2 * self.steps,
            ..*self
        }
    }

    /// Default grid for a problem, per [`OracleConfig::default`].
    pub fn for_problem(problem: &KGProblem) -> Self {
        Self::for_problem_with(problem, &OracleConfig::default())
    }

    pub fn for_problem_with(problem: &KGProblem, cfg: &OracleConfig) -> Self {
        let alpha = problem.potential.alpha;
        let half_width = cfg.l_factor / alpha;
        match problem.domain {
            Domain::FullLine => Self {
                x_min: -half_width,
                x_max: half_width,
                steps: cfg.steps,
            },
            Domain::HalfLine { x0 } => {
                let eta = cfg.eta_factor / alpha;
                Self {
                    x_min: x0 + eta,
                    x_max: x0 + 2.0 * half_width,
                    steps: cfg.steps,
                }
            }
        }
    }
}

/// Oracle defaults: L = 20/alpha, N = 4000, extrapolation on. Chosen so the
/// discretization error sits well below the 1e-4 cross-check tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub l_factor: f64,
    pub steps: usize,
    /// Half-line Dirichlet offset from the pole, in units of 1/alpha.
    pub eta_factor: f64,
    pub richardson: bool,
    pub scan_points: usize,
    pub bisect_tol: f64,
    pub edge_margin_frac: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            l_factor: 20.0,
            steps: 4000,
            eta_factor: 1e-4,
            richardson: true,
            scan_points: 512,
            bisect_tol: 1e-10,
            edge_margin_frac: 1e-6,
        }
    }
}

/// One self-consistent finite-difference level.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub n: u32,
    pub energy: f64,
    pub ebar2: f64,
    /// |psi| at the first/last interior point relative to max |psi|.
    pub boundary_leak: f64,
    pub grid: GridSpec,
    pub extrapolated: bool,
}

/// Number of eigenvalues strictly below `shift`, from the signs of the
/// LDL^T pivots of T - shift I.
pub fn sturm_count_below(diag: &[f64], offdiag: &[f64], shift: f64) -> usize {
    debug_assert_eq!(offdiag.len() + 1, diag.len().max(1));
    let mut count = 0;
    let mut pivot = match diag.first() {
        Some(d) => d - shift,
        None => return 0,
    };
    if pivot < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let guard = 1e-300_f64;
        let safe = if pivot.abs() < guard {
            if pivot >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            pivot
        };
        pivot = (diag[i] - shift) - offdiag[i - 1] * offdiag[i - 1] / safe;
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k-th smallest eigenvalue (0-based) by Sturm bisection, to relative
/// 1e-12.
pub fn tridiag_eigenvalue(diag: &[f64], offdiag: &[f64], index: usize) -> f64 {
    assert!(index < diag.len());
    let (mut lo, mut hi) = gershgorin_bounds(diag, offdiag);
    for _ in 0..160 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= 1e-12 * mid.abs().max(1.0) {
            break;
        }
        if sturm_count_below(diag, offdiag, mid) <= index {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The lowest k eigenvalues, ascending.
pub fn tridiag_eigen_lowest(diag: &[f64], offdiag: &[f64], k: usize) -> Vec<f64> {
    assert!(k <= diag.len());
    (0..k).map(|i| tridiag_eigenvalue(diag, offdiag, i)).collect()
}

fn gershgorin_bounds(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..diag.len() {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i < offdiag.len() { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo - 1.0, hi + 1.0)
}

/// Interior sign changes, skipping entries below 1e-12 of the peak.
pub fn count_nodes(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let floor = 1e-12 * scale;
    let mut nodes = 0;
    let mut prev = 0.0_f64;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if prev != 0.0 && v.signum() != prev.signum() {
            nodes += 1;
        }
        prev = v;
    }
    nodes
}

fn discretize<F: Fn(f64) -> f64>(v_eff: &F, grid: &GridSpec) -> (Vec<f64>, Vec<f64>) {
    let n = grid.steps - 1;
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    for i in 1..grid.steps {
        let x = grid.x_min + i as f64 * h;
        diag.push(2.0 * inv_h2 + v_eff(x));
    }
    let offdiag = vec![-inv_h2; n - 1];
    (diag, offdiag)
}

/// Lowest k Dirichlet eigenvalues of `-d^2/dx^2 + V_eff` on the grid.
pub fn schrodinger_levels<F: Fn(f64) -> f64>(v_eff: F, grid: &GridSpec, k: usize) -> Vec<f64> {
    let (diag, offdiag) = discretize(&v_eff, grid);
    tridiag_eigen_lowest(&diag, &offdiag, k)
}

/// Richardson-extrapolated eigenvalues from the (N, 2N) grid pair:
/// `(4 e_{2N} - e_N) / 3`.
pub fn schrodinger_levels_extrapolated<F: Fn(f64) -> f64>(
    v_eff: F,
    grid: &GridSpec,
    k: usize,
) -> Vec<f64> {
    let coarse = schrodinger_levels(&v_eff, grid, k);
    let fine = schrodinger_levels(&v_eff, &grid.refined(), k);
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Eigenvalues plus inverse-iteration eigenvectors on the interior points,
/// each L2-normalized with the grid weight.
pub fn schrodinger_eigensystem<F: Fn(f64) -> f64>(
    v_eff: F,
    grid: &GridSpec,
    k: usize,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (diag, offdiag) = discretize(&v_eff, grid);
    let values = tridiag_eigen_lowest(&diag, &offdiag, k);
    let h = grid.h();
    let vectors = values
        .iter()
        .map(|&ev| inverse_iteration(&diag, &offdiag, ev, h))
        .collect();
    (values, vectors)
}

fn inverse_iteration(diag: &[f64], offdiag: &[f64], eigenvalue: f64, h: f64) -> Vec<f64> {
    let n = diag.len();
    // Deterministic start vector with no accidental parity.
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i as f64 * 0.754_877 + 0.3).sin() + 1.2) / n as f64)
        .collect();
    // Small shift keeps the nearly singular solve bounded.
    let scale = diag.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let shift = eigenvalue + 1e-11 * scale.max(1.0);
    for _ in 0..3 {
        v = solve_shifted(diag, offdiag, shift, &v);
        let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1e-300);
        for x in &mut v {
            *x /= peak;
        }
    }
    let norm2: f64 = v.iter().map(|x| x * x).sum::<f64>() * h;
    let norm = norm2.sqrt().max(1e-300);
    for x in &mut v {
        *x /= norm;
    }
    // Fix the overall sign: first significant entry positive.
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
    }
    v
}

/// Thomas solve of (T - shift I) w = rhs with zero-pivot nudging.
fn solve_shifted(diag: &[f64], offdiag: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let guard = 1e-300;
    let mut pivot = diag[0] - shift;
    if pivot.abs() < guard {
        pivot = guard;
    }
    if n > 1 {
        c[0] = offdiag[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        let mut denom = (diag[i] - shift) - offdiag[i - 1] * c[i - 1];
        if denom.abs() < guard {
            denom = guard;
        }
        if i < n - 1 {
            c[i] = offdiag[i] / denom;
        }
        d[i] = (rhs[i] - offdiag[i - 1] * d[i - 1]) / denom;
    }
    let mut w = vec![0.0; n];
    w[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        w[i] = d[i] - c[i] * w[i + 1];
    }
    w
}

fn boundary_leak(vector: &[f64]) -> f64 {
    let peak = vector.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || vector.is_empty() {
        return 0.0;
    }
    vector[0].abs().max(vector[vector.len() - 1].abs()) / peak
}

/// The n-th Dirichlet eigenvalue of the effective problem at trial energy E.
fn eps_n_at(problem: &KGProblem, n: u32, energy: f64, grid: &GridSpec, richardson: bool) -> f64 {
    let (veff, _) = effective_problem(problem, energy);
    let sampler = |x: f64| veff.eval(x);
    if richardson {
        schrodinger_levels_extrapolated(sampler, grid, n as usize + 1)[n as usize]
    } else {
        schrodinger_levels(sampler, grid, n as usize + 1)[n as usize]
    }
}

fn selfconsistency_gap(
    problem: &KGProblem,
    n: u32,
    energy: f64,
    grid: &GridSpec,
    richardson: bool,
) -> f64 {
    let ebar2 = energy * energy - problem.mass * problem.mass;
    eps_n_at(problem, n, energy, grid, richardson) - ebar2
}

fn finish_root(problem: &KGProblem, n: u32, energy: f64, grid: &GridSpec, cfg: &OracleConfig) -> OracleResult {
    let fine = grid.refined();
    let (veff, _) = effective_problem(problem, energy);
    let (_, vectors) = schrodinger_eigensystem(|x| veff.eval(x), &fine, n as usize + 1);
    OracleResult {
        n,
        energy,
        ebar2: energy * energy - problem.mass * problem.mass,
        boundary_leak: boundary_leak(&vectors[n as usize]),
        grid: *grid,
        extrapolated: cfg.richardson,
    }
}

/// All self-consistent roots of `g_n(E) = eps_n(E) - (E^2 - M^2)` in the
/// window (-M + d, M - d), each bisected to `cfg.bisect_tol`, ascending in E.
pub fn kg_selfconsistent_levels(
    problem: &KGProblem,
    n: u32,
    cfg: &OracleConfig,
) -> Result<Vec<OracleResult>, OracleError> {
    let grid = GridSpec::for_problem_with(problem, cfg);
    let m = problem.mass;
    let delta = cfg.edge_margin_frac * m;
    let (lo, hi) = (-m + delta, m - delta);
    let points = cfg.scan_points.max(8);
    let step = (hi - lo) / (points - 1) as f64;
    let g = |e: f64| selfconsistency_gap(problem, n, e, &grid, cfg.richardson);

    let mut roots = Vec::new();
    let mut prev = (lo, g(lo));
    for i in 1..points {
        let e = if i + 1 == points { hi } else { lo + i as f64 * step };
        let ge = g(e);
        if prev.1 == 0.0 {
            roots.push(prev.0);
        } else if prev.1.signum() != ge.signum() {
            roots.push(bisect_gap(&g, prev.0, prev.1, e, cfg.bisect_tol));
        }
        prev = (e, ge);
    }
    if roots.is_empty() {
        return Err(OracleError::NoRoot { n });
    }
    Ok(roots
        .into_iter()
        .map(|e| finish_root(problem, n, e, &grid, cfg))
        .collect())
}

/// Refine the self-consistent root nearest `center`, expanding the bracket
/// up to four times before giving up.
pub fn selfconsistent_root_near(
    problem: &KGProblem,
    n: u32,
    center: f64,
    half_width: f64,
    cfg: &OracleConfig,
) -> Option<OracleResult> {
    let grid = GridSpec::for_problem_with(problem, cfg);
    let m = problem.mass;
    let delta = cfg.edge_margin_frac * m;
    let g = |e: f64| selfconsistency_gap(problem, n, e, &grid, cfg.richardson);
    let mut w = half_width;
    for _ in 0..4 {
        let a = (center - w).max(-m + delta);
        let b = (center + w).min(m - delta);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            return Some(finish_root(problem, n, a, &grid, cfg));
        }
        if ga.signum() != gb.signum() {
            let root = bisect_gap(&g, a, ga, b, cfg.bisect_tol);
            return Some(finish_root(problem, n, root, &grid, cfg));
        }
        w *= 2.0;
    }
    None
}

fn bisect_gap<F: Fn(f64) -> f64>(g: &F, mut a: f64, mut ga: f64, mut b: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
