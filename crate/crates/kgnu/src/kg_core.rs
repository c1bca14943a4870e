//! Bound states of the 1-D Klein-Gordon equation with equal scalar and
//! vector Rosen-Morse type potentials.
//!
//! With S(x) = V(x) the equation collapses to a Schrödinger-like problem
//! `psi'' + [Ebar^2 + v1bar sech_q^2(ax) + v2bar tanh_q(ax)] psi = 0` with
//! `Ebar^2 = E^2 - M^2` and `vibar = 2(E + M) Vi`. That transformed equation
//! is the single source of truth here: the effective potential handed to the
//! finite-difference oracle is defined to match it, `V_eff = 2(E + M) V(x)`.
//!
//! Energies are roots of the implicit residual
//! `F_n(E) = E^2 - M^2 + v2bar^2/(a^2 L^2) + a^2 L^2 / 4` with
//! `L = 2n + 1 - sqrt(1 + 4 v1bar/(q a^2))`, self-consistent because the
//! potential strengths depend on E. Wavefunctions assemble exponent
//! prefactors with Jacobi polynomials in s = tanh_q(ax).

use crate::nu_engine::{NUProblem, NUReduction, PiSign, Poly};
use crate::orthopoly::{
    jacobi_derivative, jacobi_eval, jacobi_second_derivative, JacobiParams,
};
use crate::oracle::GridSpec;
use crate::qhyper::{self, PotentialParams};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KgError {
    #[error("rest mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("spectrum computations require q in [-1, 0) or (0, 1], got {0}")]
    InvalidDeformation(f64),
    #[error("state is not physical: {reasons:?}")]
    NotPhysical { reasons: Vec<Unphysical> },
}

/// Why the quantization residual is undefined at a trial energy.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidualError {
    #[error("square-root argument 1 + 4 v1bar/(q a^2) = {value} is negative")]
    DiscriminantNegative { value: f64 },
    #[error("level factor {lambda} is inside the degeneracy guard")]
    DegenerateLevel { lambda: f64 },
}

/// Solution domain: the full line for q > 0, the half line right of the
/// cosh_q pole for q < 0 (Dirichlet at the pole).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    FullLine,
    HalfLine { x0: f64 },
}

/// A mass plus a potential, with the domain implied by the sign of q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGProblem {
    pub mass: f64,
    pub potential: PotentialParams,
    pub domain: Domain,
}

impl KGProblem {
    pub fn new(mass: f64, potential: PotentialParams) -> Result<Self, KgError> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(KgError::InvalidMass(mass));
        }
        let q = potential.q.value();
        if q == 0.0 {
            return Err(KgError::InvalidDeformation(q));
        }
        let domain = match potential.pole() {
            Some(x0) => Domain::HalfLine { x0 },
            None => Domain::FullLine,
        };
        Ok(Self {
            mass,
            potential,
            domain,
        })
    }
}

/// Frozen solver defaults; every knob is overridable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Energy window margin: roots are sought in (-M + d, M - d), d = frac * M.
    pub edge_margin_frac: f64,
    /// Scan resolution for bracketing residual sign changes.
    pub scan_points: usize,
    /// Bisection stops at |b - a| <= frac * M.
    pub bisect_tol_frac: f64,
    /// Degeneracy guard on the level factor.
    pub lambda_guard: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            edge_margin_frac: 1e-6,
            scan_points: 2001,
            bisect_tol_frac: 1e-12,
            lambda_guard: 1e-8,
        }
    }
}

/// Energy-dependent reduced parameters at a trial energy.
///
/// The squares are formal and may be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    /// Ebar^2 = E^2 - M^2.
    pub ebar2: f64,
    /// v1bar = 2 (E + M) V1.
    pub v1bar: f64,
    /// v2bar = 2 (E + M) V2.
    pub v2bar: f64,
    /// eps^2 = -v1bar / (q a^2).
    pub eps_sq: f64,
    /// gamma^2 = -v2bar / a^2.
    pub gamma_sq: f64,
    /// beta^2 = -Ebar^2 / a^2.
    pub beta_sq: f64,
}

pub fn reduced_params(problem: &KGProblem, energy: f64) -> ReducedParams {
    let m = problem.mass;
    let p = &problem.potential;
    let a2 = p.alpha * p.alpha;
    let q = p.q.value();
    let ebar2 = energy * energy - m * m;
    let v1bar = 2.0 * (energy + m) * p.v1;
    let v2bar = 2.0 * (energy + m) * p.v2;
    ReducedParams {
        ebar2,
        v1bar,
        v2bar,
        eps_sq: -v1bar / (q * a2),
        gamma_sq: -v2bar / a2,
        beta_sq: -ebar2 / a2,
    }
}

/// Effective potential sampler for the Schrödinger-form equation
/// `-psi'' + V_eff psi = Ebar^2 psi`, i.e. `V_eff = 2 (E + M) V(x)`.
#[derive(Debug, Clone, Copy)]
pub struct EffectivePotential {
    v1bar: f64,
    v2bar: f64,
    alpha: f64,
    q: f64,
}

impl EffectivePotential {
    /// Evaluate at a point inside the problem domain.
    pub fn eval(&self, x: f64) -> f64 {
        let u = self.alpha * x;
        let sech = qhyper::sech_q(u, self.q).expect("x inside problem domain");
        let tanh = qhyper::tanh_q(u, self.q).expect("x inside problem domain");
        -(self.v1bar * sech * sech + self.v2bar * tanh)
    }
}

/// The effective eigenproblem at a trial energy: a potential sampler and the
/// energy parameter Ebar^2 it must reproduce.
pub fn effective_problem(problem: &KGProblem, energy: f64) -> (EffectivePotential, f64) {
    let rp = reduced_params(problem, energy);
    (
        EffectivePotential {
            v1bar: rp.v1bar,
            v2bar: rp.v2bar,
            alpha: problem.potential.alpha,
            q: problem.potential.q.value(),
        },
        rp.ebar2,
    )
}

/// Wavefunction exponents and the level factor at (n, E).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    /// mu >= 0 at physical states; mu = (D - (2n+1)) / 2.
    pub mu: f64,
    /// nu = gamma^2 / (2 mu); carries the sign of gamma^2.
    pub nu: f64,
    /// Level factor 2n + 1 - D.
    pub lambda_n: f64,
    /// D = sqrt(1 + 4 v1bar / (q a^2)).
    pub disc_root: f64,
}

/// Reasons a root of the energy equation fails the physicality filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unphysical {
    /// D(E) <= 2n + 1: the exponent mu is not positive.
    BelowThreshold,
    /// beta^4 <= gamma^4: the exponent pair turns complex.
    BetaQuartic,
    /// mu <= |nu|: one tail of the wavefunction grows.
    TailGrowth,
    /// Root within the guard band of |E| = M.
    NearMassEdge,
}

impl fmt::Display for Unphysical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unphysical::BelowThreshold => "below-threshold",
            Unphysical::BetaQuartic => "beta-quartic",
            Unphysical::TailGrowth => "tail-growth",
            Unphysical::NearMassEdge => "near-mass-edge",
        };
        f.write_str(s)
    }
}

/// One root of the energy equation, flagged and optionally cross-checked.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub n: u32,
    pub energy: f64,
    pub exponents: Exponents,
    pub physical: bool,
    pub reasons: Vec<Unphysical>,
    /// 1/sqrt of the squared-norm integral of the raw product form;
    /// populated for physical states.
    pub norm_constant: Option<f64>,
    pub oracle_energy: Option<f64>,
    pub oracle_gap: Option<f64>,
}

impl BoundState {
    pub fn reason_string(&self) -> String {
        self.reasons
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn discriminant(problem: &KGProblem, rp: &ReducedParams) -> f64 {
    let a2 = problem.potential.alpha * problem.potential.alpha;
    1.0 + 4.0 * rp.v1bar / (problem.potential.q.value() * a2)
}

/// Exponent data at (n, E); requires the discriminant to be non-negative and
/// the level factor to clear the degeneracy guard.
pub fn exponents_at(
    problem: &KGProblem,
    n: u32,
    energy: f64,
    cfg: &SolverConfig,
) -> Result<Exponents, ResidualError> {
    let rp = reduced_params(problem, energy);
    let disc = discriminant(problem, &rp);
    if disc < 0.0 {
        return Err(ResidualError::DiscriminantNegative { value: disc });
    }
    let disc_root = disc.sqrt();
    let lambda_n = (2 * n + 1) as f64 - disc_root;
    if lambda_n.abs() <= cfg.lambda_guard {
        return Err(ResidualError::DegenerateLevel { lambda: lambda_n });
    }
    let mu = -0.5 * lambda_n;
    let nu = if rp.gamma_sq == 0.0 {
        0.0
    } else {
        rp.gamma_sq / (2.0 * mu)
    };
    Ok(Exponents {
        mu,
        nu,
        lambda_n,
        disc_root,
    })
}

/// The self-consistent quantization residual
/// `F_n(E) = E^2 - M^2 + v2bar^2/(a^2 L^2) + a^2 L^2/4`, zero exactly at
/// bound energies.
pub fn energy_residual(
    problem: &KGProblem,
    n: u32,
    energy: f64,
    cfg: &SolverConfig,
) -> Result<f64, ResidualError> {
    let rp = reduced_params(problem, energy);
    let exps = exponents_at(problem, n, energy, cfg)?;
    let a2 = problem.potential.alpha * problem.potential.alpha;
    let l2 = exps.lambda_n * exps.lambda_n;
    Ok(rp.ebar2 + rp.v2bar * rp.v2bar / (a2 * l2) + 0.25 * a2 * l2)
}

/// The polynomial triple of the s = tanh_q(ax) transformed equation at a
/// trial energy, ready for the generic reduction engine.
pub fn nu_problem_at(problem: &KGProblem, energy: f64) -> NUProblem {
    let rp = reduced_params(problem, energy);
    NUProblem::new(
        Poly::linear(0.0, -2.0),
        Poly::new([1.0, 0.0, -1.0]),
        Poly::new([-(rp.eps_sq + rp.beta_sq), -rp.gamma_sq, rp.eps_sq]),
    )
    .expect("transformed-equation triple is always valid")
}

/// The reduction branch the solver quantizes on: smallest kappa, minus sign.
pub fn selected_reduction(problem: &KGProblem, energy: f64) -> Option<(NUProblem, NUReduction)> {
    let nu = nu_problem_at(problem, energy);
    let reductions = nu.select_admissible().ok()?;
    let chosen = reductions
        .iter()
        .find(|r| r.sign == PiSign::Minus)
        .cloned()?;
    Some((nu, chosen))
}

/// Gap between the two quantization routes at (n, E): the reduction-engine
/// eigenvalue `lambda = kappa + pi'` minus the ladder value `lambda_n`.
pub fn quantization_gap(problem: &KGProblem, n: u32, energy: f64) -> Option<f64> {
    let (nu, reduction) = selected_reduction(problem, energy)?;
    let ladder = crate::nu_engine::lambda_of_n(&reduction, &nu.sigma, n);
    Some(reduction.lambda() - ladder)
}

/// Scan-and-bisect root finder for the quantization residual.
///
/// For each n up to the hint the window (-M + d, M - d) is scanned on a
/// uniform grid, sign changes between adjacent valid samples are refined by
/// bisection and every root is classified and returned (physical or not),
/// sorted by (n, E).
pub fn energy_levels(problem: &KGProblem, n_max_hint: u32, cfg: &SolverConfig) -> Vec<BoundState> {
    let m = problem.mass;
    let delta = cfg.edge_margin_frac * m;
    let lo = -m + delta;
    let hi = m - delta;
    let tol = cfg.bisect_tol_frac * m;

    let mut states = Vec::new();
    for n in 0..=n_max_hint {
        let f = |e: f64| energy_residual(problem, n, e, cfg);
        for root in scan_residual_roots(&f, lo, hi, cfg.scan_points, tol) {
            if let Some(state) = classify(problem, n, root, cfg) {
                states.push(state);
            }
        }
    }
    states.sort_by(|a, b| a.n.cmp(&b.n).then(a.energy.total_cmp(&b.energy)));
    states
}

/// Bracket sign changes of a partially defined residual on a uniform grid
/// and refine each bracket by bisection. Brackets never straddle points
/// where the residual is undefined.
pub(crate) fn scan_residual_roots<F>(f: &F, lo: f64, hi: f64, points: usize, tol: f64) -> Vec<f64>
where
    F: Fn(f64) -> Result<f64, ResidualError>,
{
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..points {
        let e = if i + 1 == points { hi } else { lo + i as f64 * step };
        match f(e) {
            Ok(fe) => {
                if fe == 0.0 {
                    roots.push(e);
                    prev = Some((e, fe));
                    continue;
                }
                if let Some((ep, fp)) = prev {
                    if fp.signum() != fe.signum() {
                        if let Some(root) = bisect(f, ep, fp, e, tol) {
                            roots.push(root);
                        }
                    }
                }
                prev = Some((e, fe));
            }
            Err(_) => prev = None,
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * tol);
    roots
}

fn bisect<F>(f: &F, mut a: f64, mut fa: f64, mut b: f64, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> Result<f64, ResidualError>,
{
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid).ok()?;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

fn classify(problem: &KGProblem, n: u32, energy: f64, cfg: &SolverConfig) -> Option<BoundState> {
    let exps = exponents_at(problem, n, energy, cfg).ok()?;
    let rp = reduced_params(problem, energy);
    let mut reasons = Vec::new();
    let delta = cfg.edge_margin_frac * problem.mass;
    if problem.mass - energy.abs() <= delta {
        reasons.push(Unphysical::NearMassEdge);
    }
    if exps.disc_root <= (2 * n + 1) as f64 {
        reasons.push(Unphysical::BelowThreshold);
    }
    if rp.beta_sq <= rp.gamma_sq.abs() {
        reasons.push(Unphysical::BetaQuartic);
    }
    if exps.mu <= exps.nu.abs() {
        reasons.push(Unphysical::TailGrowth);
    }
    let physical = reasons.is_empty();
    let mut state = BoundState {
        n,
        energy,
        exponents: exps,
        physical,
        reasons,
        norm_constant: None,
        oracle_energy: None,
        oracle_gap: None,
    };
    if physical {
        let grid = GridSpec::for_problem(problem);
        if let Ok(w) = Wavefunction::assemble(problem, &state, &grid) {
            state.norm_constant = Some(w.norm_constant());
        }
    }
    Some(state)
}

/// Normalized bound-state wavefunction sampler.
///
/// `psi(x) = N |1-s|^{(mu+nu)/2} |1+s|^{(mu-nu)/2} P_n^{(mu+nu, mu-nu)}(s)`
/// with s = tanh_q(ax). For q < 0 the bases are negative on part of the
/// half-line and the magnitude convention applies (`formal()` reports it);
/// the finite-difference oracle is the arbiter of validity there.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    alpha: f64,
    q: f64,
    exp_minus: f64,
    exp_plus: f64,
    jacobi: JacobiParams,
    domain: Domain,
    norm: f64,
    formal: bool,
}

impl Wavefunction {
    fn assemble(
        problem: &KGProblem,
        state: &BoundState,
        grid: &GridSpec,
    ) -> Result<Self, KgError> {
        if !state.physical {
            return Err(KgError::NotPhysical {
                reasons: state.reasons.clone(),
            });
        }
        let e = &state.exponents;
        let a = e.mu + e.nu;
        let b = e.mu - e.nu;
        let mut w = Self {
            alpha: problem.potential.alpha,
            q: problem.potential.q.value(),
            exp_minus: 0.5 * a,
            exp_plus: 0.5 * b,
            jacobi: JacobiParams::new(a, b, state.n),
            domain: problem.domain,
            norm: 1.0,
            formal: problem.potential.q.value() < 0.0,
        };
        let norm2 = simpson(|x| w.eval(x).powi(2), grid.x_min, grid.x_max, grid.steps);
        if norm2.is_finite() && norm2 > 0.0 {
            w.norm = 1.0 / norm2.sqrt();
        }
        Ok(w)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Domain::HalfLine { x0 } = self.domain {
            if x <= x0 {
                return 0.0;
            }
        }
        let s = match qhyper::tanh_q(self.alpha * x, self.q) {
            Ok(s) => s,
            Err(_) => return 0.0,
        };
        let envelope =
            (1.0 - s).abs().powf(self.exp_minus) * (1.0 + s).abs().powf(self.exp_plus);
        self.norm * envelope * jacobi_eval(&self.jacobi, s)
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm
    }

    /// Magnitude convention in use (q < 0 half-line states).
    pub fn formal(&self) -> bool {
        self.formal
    }

    /// Interior sign changes over a uniform sampling of [x_min, x_max].
    pub fn count_nodes(&self, x_min: f64, x_max: f64, samples: usize) -> usize {
        let h = (x_max - x_min) / (samples - 1) as f64;
        let values: Vec<f64> = (0..samples).map(|i| self.eval(x_min + i as f64 * h)).collect();
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut nodes = 0;
        let mut prev = 0.0_f64;
        for v in values {
            if v.abs() <= 1e-9 * scale {
                continue;
            }
            if prev != 0.0 && v.signum() != prev.signum() {
                nodes += 1;
            }
            prev = v;
        }
        nodes
    }
}

pub fn wavefunction(
    problem: &KGProblem,
    state: &BoundState,
    grid: &GridSpec,
) -> Result<Wavefunction, KgError> {
    Wavefunction::assemble(problem, state, grid)
}

/// Max of `|psi'' + (Ebar^2 + v1bar sech_q^2 + v2bar tanh_q) psi|` over the
/// sample points, relative to max |psi|, with all derivatives taken through
/// the exact chain rule (no finite differences).
pub fn ode_residual(
    problem: &KGProblem,
    state: &BoundState,
    w: &Wavefunction,
    xs: &[f64],
) -> f64 {
    let rp = reduced_params(problem, state.energy);
    let alpha = problem.potential.alpha;
    let q = problem.potential.q.value();
    let pe = w.exp_minus;
    let me = w.exp_plus;
    let mut max_residual = 0.0_f64;
    let mut max_psi = 0.0_f64;
    for &x in xs {
        let s = qhyper::tanh_q(alpha * x, q).expect("x inside problem domain");
        let envelope = (1.0 - s).abs().powf(pe) * (1.0 + s).abs().powf(me);
        let p = jacobi_eval(&w.jacobi, s);
        let dp = jacobi_derivative(&w.jacobi, s);
        let ddp = jacobi_second_derivative(&w.jacobi, s);
        // Logarithmic derivative of the envelope and its derivative.
        let g = -pe / (1.0 - s) + me / (1.0 + s);
        let dg = -pe / ((1.0 - s) * (1.0 - s)) - me / ((1.0 + s) * (1.0 + s));
        let psi = envelope * p;
        let f_s = envelope * (g * p + dp);
        let f_ss = envelope * ((g * g + dg) * p + 2.0 * g * dp + ddp);
        let sp = alpha * (1.0 - s * s);
        let spp = -2.0 * alpha * alpha * s * (1.0 - s * s);
        let psi_xx = f_ss * sp * sp + f_s * spp;
        let sech2 = (1.0 - s * s) / q;
        let bracket = rp.ebar2 + rp.v1bar * sech2 + rp.v2bar * s;
        max_residual = max_residual.max((psi_xx + bracket * psi).abs());
        max_psi = max_psi.max(psi.abs());
    }
    if max_psi == 0.0 {
        return f64::INFINITY;
    }
    max_residual / max_psi
}

/// Composite Simpson rule on a uniform grid (step count rounded up to even).
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, steps: usize) -> f64 {
    let n = if steps % 2 == 0 { steps } else { steps + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qhyper::PotentialParams;

    fn problem(m: f64, v1: f64, v2: f64, alpha: f64, q: f64) -> KGProblem {
        KGProblem::new(m, PotentialParams::new(v1, v2, alpha, q).unwrap()).unwrap()
    }

    #[test]
    fn spectrum_rejects_q_zero() {
        let p = PotentialParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            KGProblem::new(1.0, p),
            Err(KgError::InvalidDeformation(_))
        ));
    }

    #[test]
    fn effective_potential_matches_the_transformed_equation() {
        // V(0) = -1, E = 0, M = 1: the Schrödinger-form effective potential
        // that reproduces the transformed equation is 2(E+M)V(0) = -2
        // (attractive where V is attractive).
        let p = problem(1.0, 1.0, 0.0, 1.0, 1.0);
        let (veff, ebar2) = effective_problem(&p, 0.0);
        assert!((veff.eval(0.0) + 2.0).abs() < 1e-14);
        assert_eq!(ebar2, -1.0);

        let (veff, ebar2) = effective_problem(&p, 0.5);
        assert!((veff.eval(0.0) + 3.0).abs() < 1e-14);
        assert!((ebar2 + 0.75).abs() < 1e-14);

        // At E = -M every strength vanishes.
        let (veff, ebar2) = effective_problem(&p, -1.0);
        assert_eq!(veff.eval(0.3), 0.0);
        assert_eq!(ebar2, 0.0);
    }

    #[test]
    fn reduced_params_examples() {
        let p = problem(1.0, 0.0, 0.0, 2.0, 0.5);
        let rp = reduced_params(&p, 0.25);
        assert_eq!(rp.eps_sq, 0.0);
        assert_eq!(rp.gamma_sq, 0.0);
        assert!((rp.beta_sq - (1.0 - 0.0625) / 4.0).abs() < 1e-15);

        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let rp = reduced_params(&p, 0.0);
        assert_eq!(rp.v1bar, 4.0);
        assert_eq!(rp.eps_sq, -4.0);
        assert_eq!(rp.beta_sq, 1.0);
    }

    #[test]
    fn residual_free_particle_values() {
        let p = problem(1.0, 0.0, 0.0, 1.0, 1.0);
        let cfg = SolverConfig::default();
        // n = 1, E = 0.5: D = 1, L = 2, F = 0.25 - 1 + 0 + 1.
        let f = energy_residual(&p, 1, 0.5, &cfg).unwrap();
        assert!((f - 0.25).abs() < 1e-14);
        // n = 0: L = 0 is degenerate.
        assert!(matches!(
            energy_residual(&p, 0, 0.5, &cfg),
            Err(ResidualError::DegenerateLevel { .. })
        ));
    }

    #[test]
    fn residual_small_at_the_known_ground_state() {
        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let cfg = SolverConfig::default();
        let f = energy_residual(&p, 0, -0.6854, &cfg).unwrap();
        assert!(f.abs() < 1e-3, "residual {f}");
    }

    #[test]
    fn discriminant_negative_is_reported() {
        // q = -1 with attractive v1: 1 - 8 (E+M) V1 < 0 for E near M.
        let p = problem(1.0, 2.0, 0.0, 1.0, -1.0);
        let cfg = SolverConfig::default();
        assert!(matches!(
            energy_residual(&p, 0, 0.5, &cfg),
            Err(ResidualError::DiscriminantNegative { .. })
        ));
    }

    #[test]
    fn free_particle_has_no_levels() {
        let p = problem(1.0, 0.0, 0.0, 1.0, 1.0);
        let states = energy_levels(&p, 3, &SolverConfig::default());
        assert!(states.is_empty());
    }

    #[test]
    fn ground_state_of_the_reference_well() {
        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let states = energy_levels(&p, 0, &SolverConfig::default());
        let ground: Vec<_> = states.iter().filter(|s| s.physical).collect();
        assert_eq!(ground.len(), 1);
        assert!((ground[0].energy + 0.6854).abs() < 1e-4);
        assert!(ground[0].norm_constant.is_some());
        // Exponent bookkeeping at the root.
        let e = &ground[0].exponents;
        assert!(e.mu > 0.0 && e.nu == 0.0);
        assert!((e.lambda_n + 2.0 * e.mu).abs() < 1e-12);
    }

    #[test]
    fn quantization_routes_agree_at_roots() {
        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let states = energy_levels(&p, 1, &SolverConfig::default());
        for s in states.iter().filter(|s| s.physical) {
            let gap = quantization_gap(&p, s.n, s.energy).unwrap();
            assert!(gap.abs() < 1e-8, "n = {}, gap = {gap}", s.n);
        }
    }

    #[test]
    fn wavefunction_requires_physical_state() {
        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let states = energy_levels(&p, 0, &SolverConfig::default());
        let mut fake = states[0].clone();
        fake.physical = false;
        fake.reasons = vec![Unphysical::TailGrowth];
        let grid = GridSpec::for_problem(&p);
        assert!(matches!(
            wavefunction(&p, &fake, &grid),
            Err(KgError::NotPhysical { .. })
        ));
    }

    #[test]
    fn symmetric_ground_state_parity_and_nodes() {
        let p = problem(1.0, 2.0, 0.0, 1.0, 1.0);
        let states = energy_levels(&p, 0, &SolverConfig::default());
        let grid = GridSpec::for_problem(&p);
        let w = wavefunction(&p, &states[0], &grid).unwrap();
        for &x in &[0.3, 1.1, 2.7, 5.0] {
            assert!((w.eval(x) - w.eval(-x)).abs() <= 1e-10 * w.eval(0.0).abs());
        }
        assert_eq!(w.count_nodes(-10.0, 10.0, 2001), 0);
        // Normalization: Simpson integral of psi^2 is 1.
        let norm2 = simpson(|x| w.eval(x).powi(2), grid.x_min, grid.x_max, grid.steps);
        assert!((norm2 - 1.0).abs() < 1e-8);
    }
}
