//! Generic reduction of `psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0`
//! to hypergeometric type.
//!
//! Given the polynomial triple (tau~, sigma, sigma~) with deg(tau~) <= 1 and
//! deg(sigma), deg(sigma~) <= 2, the engine finds the constants kappa for
//! which `((sigma' - tau~)/2)^2 - sigma~ + kappa sigma` is a perfect square,
//! builds the linear pi(s) branches, keeps those with tau'(s) < 0 and
//! produces the eigenvalue ladder `lambda_n = -n tau' - n(n-1)/2 sigma''`
//! together with the weight and prefactor exponents for the Jacobi class
//! `sigma = c (1 - s^2)`.

use thiserror::Error;

const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("invalid polynomial data: {0}")]
    InvalidPoly(String),
    #[error("the kappa equation has no real roots")]
    NoRealKappa,
    #[error("degenerate reduction: {0}")]
    DegenerateSigma(String),
    #[error("discriminant residual {residual} exceeds the perfect-square tolerance")]
    NotPerfectSquare { residual: f64 },
    #[error("no branch satisfies tau'(s) < 0")]
    NoAdmissibleBranch,
    #[error("sigma is not of the form c(1 - s^2) with c > 0")]
    UnsupportedSigmaClass,
}

/// Real polynomial of degree at most two, coefficients lowest degree first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly {
    pub coeffs: [f64; 3],
}

impl Poly {
    pub fn new(coeffs: [f64; 3]) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new([c, 0.0, 0.0])
    }

    pub fn linear(c0: f64, c1: f64) -> Self {
        Self::new([c0, c1, 0.0])
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.coeffs[2] * s + self.coeffs[1]) * s + self.coeffs[0]
    }

    pub fn degree(&self) -> usize {
        if self.coeffs[2] != 0.0 {
            2
        } else if self.coeffs[1] != 0.0 {
            1
        } else {
            0
        }
    }

    /// First-derivative coefficients (degree drops by one).
    pub fn derivative(&self) -> Poly {
        Poly::new([self.coeffs[1], 2.0 * self.coeffs[2], 0.0])
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly::new([
            self.coeffs[0] + other.coeffs[0],
            self.coeffs[1] + other.coeffs[1],
            self.coeffs[2] + other.coeffs[2],
        ])
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        Poly::new([
            self.coeffs[0] - other.coeffs[0],
            self.coeffs[1] - other.coeffs[1],
            self.coeffs[2] - other.coeffs[2],
        ])
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new([
            self.coeffs[0] * factor,
            self.coeffs[1] * factor,
            self.coeffs[2] * factor,
        ])
    }

    /// Product of two linear polynomials (panics if either is quadratic).
    pub fn mul_linear(&self, other: &Poly) -> Poly {
        assert!(self.coeffs[2] == 0.0 && other.coeffs[2] == 0.0);
        let (a0, a1) = (self.coeffs[0], self.coeffs[1]);
        let (b0, b1) = (other.coeffs[0], other.coeffs[1]);
        Poly::new([a0 * b0, a0 * b1 + a1 * b0, a1 * b1])
    }

    fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }
}

/// The equation data: tau~ (deg <= 1), sigma and sigma~ (deg <= 2).
#[derive(Debug, Clone, PartialEq)]
pub struct NUProblem {
    pub tau_tilde: Poly,
    pub sigma: Poly,
    pub sigma_tilde: Poly,
}

/// Which sign of the square root was taken in pi = (sigma'-tau~)/2 +/- w.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PiSign {
    Minus,
    Plus,
}

/// One admissible reduction: kappa, pi(s), tau(s) = tau~ + 2 pi and the
/// branch that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NUReduction {
    pub kappa: f64,
    pub pi: Poly,
    pub tau: Poly,
    pub sign: PiSign,
}

impl NUReduction {
    /// The eigenvalue expression `lambda = kappa + pi'(s)`.
    pub fn lambda(&self) -> f64 {
        self.kappa + self.pi.coeffs[1]
    }

    pub fn tau_slope(&self) -> f64 {
        self.tau.coeffs[1]
    }
}

impl NUProblem {
    pub fn new(tau_tilde: Poly, sigma: Poly, sigma_tilde: Poly) -> Result<Self, NuError> {
        if tau_tilde.coeffs[2] != 0.0 {
            return Err(NuError::InvalidPoly(
                "tau~ must have degree at most one".into(),
            ));
        }
        if sigma.max_abs() == 0.0 {
            return Err(NuError::InvalidPoly("sigma must not vanish".into()));
        }
        for p in [&tau_tilde, &sigma, &sigma_tilde] {
            if p.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(NuError::InvalidPoly("non-finite coefficient".into()));
            }
        }
        Ok(Self {
            tau_tilde,
            sigma,
            sigma_tilde,
        })
    }

    /// `h(s) = (sigma'(s) - tau~(s)) / 2`, the polynomial part of pi.
    fn half_diff(&self) -> Poly {
        self.sigma.derivative().sub(&self.tau_tilde).scale(0.5)
    }

    /// Coefficients of `u(s; kappa) = h^2 - sigma~ + kappa sigma` as
    /// (constant part, kappa multiplier) per power of s.
    fn square_argument(&self, kappa: f64) -> Poly {
        let h = self.half_diff();
        h.mul_linear(&h)
            .sub(&self.sigma_tilde)
            .add(&self.sigma.scale(kappa))
    }

    /// The real kappa values making `u(s; kappa)` a perfect square.
    ///
    /// Setting the discriminant of u (in s) to zero gives an equation that is
    /// at most quadratic in kappa; both real roots are returned, deduplicated,
    /// in ascending order.
    pub fn kappa_candidates(&self) -> Result<Vec<f64>, NuError> {
        let h = self.half_diff();
        let h2 = h.mul_linear(&h);
        let base = h2.sub(&self.sigma_tilde);
        let (a0, b0, c0u) = (base.coeffs[2], base.coeffs[1], base.coeffs[0]);
        let (s0, s1, s2) = (self.sigma.coeffs[0], self.sigma.coeffs[1], self.sigma.coeffs[2]);

        // Discriminant of u in s, expanded in powers of kappa.
        let q2 = s1 * s1 - 4.0 * s2 * s0;
        let q1 = 2.0 * b0 * s1 - 4.0 * (a0 * s0 + c0u * s2);
        let q0 = b0 * b0 - 4.0 * a0 * c0u;

        let scale = q2.abs().max(q1.abs()).max(q0.abs()).max(f64::MIN_POSITIVE);
        if q2.abs() > REL_TOL * scale {
            let disc = q1 * q1 - 4.0 * q2 * q0;
            let disc_scale = (q1 * q1).max((4.0 * q2 * q0).abs()).max(1.0);
            if disc < -REL_TOL * disc_scale {
                return Err(NuError::NoRealKappa);
            }
            let root = disc.max(0.0).sqrt();
            // Stable quadratic formula.
            let q = -0.5 * (q1 + q1.signum() * root);
            let (r1, r2) = if q == 0.0 {
                (0.0, 0.0)
            } else {
                (q / q2, q0 / q)
            };
            let mut roots = vec![r1.min(r2), r1.max(r2)];
            if (roots[1] - roots[0]).abs() <= 1e-12 * roots[1].abs().max(roots[0].abs()).max(1.0) {
                roots.truncate(1);
            }
            Ok(roots)
        } else if q1.abs() > REL_TOL * scale {
            Ok(vec![-q0 / q1])
        } else if q0.abs() <= REL_TOL * scale.max(1.0) {
            Err(NuError::DegenerateSigma(
                "perfect-square condition holds for every kappa".into(),
            ))
        } else {
            Err(NuError::NoRealKappa)
        }
    }

    /// The pi(s) branches for one kappa: `pi = h +/- w` where `w^2 = u`.
    ///
    /// Returns one entry when w vanishes identically, otherwise the minus
    /// branch followed by the plus branch.
    pub fn pi_branches(&self, kappa: f64) -> Result<Vec<Poly>, NuError> {
        let w = self.square_root_of_u(kappa)?;
        let h = self.half_diff();
        if w.max_abs() == 0.0 {
            return Ok(vec![h]);
        }
        Ok(vec![h.sub(&w), h.add(&w)])
    }

    /// Linear square root of `u(s; kappa)`, normalized so the leading
    /// nonzero coefficient is non-negative.
    fn square_root_of_u(&self, kappa: f64) -> Result<Poly, NuError> {
        let u = self.square_argument(kappa);
        let (a, b, c) = (u.coeffs[2], u.coeffs[1], u.coeffs[0]);
        let scale = a.abs().max(b.abs()).max(c.abs());
        if scale == 0.0 {
            return Ok(Poly::constant(0.0));
        }
        let tol = 1e-10 * scale.max(1.0);
        if a.abs() > tol {
            if a < 0.0 {
                return Err(NuError::NotPerfectSquare { residual: a });
            }
            let residual = b * b - 4.0 * a * c;
            if residual.abs() > 1e-10 * (b * b).max((4.0 * a * c).abs()).max(1.0) {
                return Err(NuError::NotPerfectSquare { residual });
            }
            let slope = a.sqrt();
            Ok(Poly::linear(0.5 * b / slope, slope))
        } else if b.abs() > tol {
            Err(NuError::NotPerfectSquare { residual: b })
        } else if c < -tol {
            Err(NuError::NotPerfectSquare { residual: c })
        } else {
            Ok(Poly::constant(c.max(0.0).sqrt()))
        }
    }

    /// All reductions with strictly negative tau slope, ordered by
    /// (kappa ascending, minus branch before plus branch).
    pub fn select_admissible(&self) -> Result<Vec<NUReduction>, NuError> {
        let mut kappas = self.kappa_candidates()?;
        kappas.sort_by(f64::total_cmp);
        let mut admissible = Vec::new();
        for kappa in kappas {
            let branches = self.pi_branches(kappa)?;
            let signs: &[PiSign] = if branches.len() == 1 {
                &[PiSign::Minus]
            } else {
                &[PiSign::Minus, PiSign::Plus]
            };
            for (pi, &sign) in branches.iter().zip(signs) {
                let tau = self.tau_tilde.add(&pi.scale(2.0));
                if tau.coeffs[1] < 0.0 {
                    admissible.push(NUReduction {
                        kappa,
                        pi: *pi,
                        tau,
                        sign,
                    });
                }
            }
        }
        if admissible.is_empty() {
            return Err(NuError::NoAdmissibleBranch);
        }
        Ok(admissible)
    }
}

/// The eigenvalue ladder `lambda_n = -n tau'(s) - n(n-1)/2 sigma''(s)`.
///
/// The quantization condition is `reduction.lambda() == lambda_of_n(...)`.
pub fn lambda_of_n(reduction: &NUReduction, sigma: &Poly, n: u32) -> f64 {
    let n = n as f64;
    -n * reduction.tau.coeffs[1] - 0.5 * n * (n - 1.0) * (2.0 * sigma.coeffs[2])
}

/// Check that sigma has the Jacobi form `c (1 - s^2)` and return c.
fn jacobi_class_scale(sigma: &Poly) -> Result<f64, NuError> {
    let c = sigma.coeffs[0];
    let scale = sigma.max_abs();
    if c <= 0.0
        || sigma.coeffs[1].abs() > REL_TOL * scale
        || (sigma.coeffs[2] + c).abs() > REL_TOL * scale
    {
        return Err(NuError::UnsupportedSigmaClass);
    }
    Ok(c)
}

/// Exponents (a, b) of the weight `rho = (1-s)^a (1+s)^b` solving
/// `(sigma rho)' = tau rho` for Jacobi-class sigma.
pub fn weight_exponents(reduction: &NUReduction, sigma: &Poly) -> Result<(f64, f64), NuError> {
    let c = jacobi_class_scale(sigma)?;
    let t1 = reduction.tau.coeffs[1];
    let t0 = reduction.tau.coeffs[0];
    let a = -(t1 + t0 + 2.0 * c) / (2.0 * c);
    let b = (t0 - t1 - 2.0 * c) / (2.0 * c);
    Ok((a, b))
}

/// Exponents (a, b) of the prefactor `phi = (1-s)^a (1+s)^b` solving
/// `phi'/phi = pi/sigma` for Jacobi-class sigma.
pub fn phi_exponents(reduction: &NUReduction, sigma: &Poly) -> Result<(f64, f64), NuError> {
    let c = jacobi_class_scale(sigma)?;
    let p1 = reduction.pi.coeffs[1];
    let p0 = reduction.pi.coeffs[0];
    let a = -(p1 + p0) / (2.0 * c);
    let b = (p0 - p1) / (2.0 * c);
    Ok((a, b))
}

/// Residual of the defining identity `pi^2 + pi (tau~ - sigma') + (sigma~ -
/// kappa sigma) = 0`, as the largest coefficient magnitude.
pub fn defining_identity_residual(problem: &NUProblem, reduction: &NUReduction) -> f64 {
    let pi = reduction.pi;
    let lin = problem.tau_tilde.sub(&problem.sigma.derivative());
    let residual = pi
        .mul_linear(&pi)
        .add(&pi.mul_linear(&lin))
        .add(&problem.sigma_tilde)
        .sub(&problem.sigma.scale(reduction.kappa));
    residual.max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sigma~ in the printed form `-e s^2 + g s + e - b` used by the
    /// tanh-substituted equation, with literal (e, g, b) values.
    fn printed_triple(e: f64, g: f64, b: f64) -> NUProblem {
        NUProblem::new(
            Poly::linear(0.0, -2.0),
            Poly::new([1.0, 0.0, -1.0]),
            Poly::new([e - b, g, -e]),
        )
        .unwrap()
    }

    #[test]
    fn kappa_roots_match_closed_form() {
        // (e, g, b) = (-2, 1, 4): kappa = (2e - b +/- sqrt(b^2 - g^2))/2.
        let p = printed_triple(-2.0, 1.0, 4.0);
        let kappas = p.kappa_candidates().unwrap();
        assert_eq!(kappas.len(), 2);
        let root = 15.0_f64.sqrt();
        assert!((kappas[0] - (-8.0 - root) / 2.0).abs() < 1e-12);
        assert!((kappas[1] - (-8.0 + root) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_degenerate_linear_case() {
        // tau~ = 0, sigma = 1, sigma~ = -s^2: u = s^2 + kappa, single root 0.
        let p = NUProblem::new(
            Poly::constant(0.0),
            Poly::constant(1.0),
            Poly::new([0.0, 0.0, -1.0]),
        )
        .unwrap();
        let kappas = p.kappa_candidates().unwrap();
        assert_eq!(kappas, vec![0.0]);
    }

    #[test]
    fn pi_zero_double_branch_collapses() {
        let p = NUProblem::new(
            Poly::constant(0.0),
            Poly::constant(1.0),
            Poly::constant(0.0),
        )
        .unwrap();
        let branches = p.pi_branches(0.0).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0], Poly::constant(0.0));
    }

    #[test]
    fn pi_branches_carry_both_signs() {
        let p = printed_triple(-2.0, 1.0, 4.0);
        let kappas = p.kappa_candidates().unwrap();
        let root = 15.0_f64.sqrt();
        // Smaller kappa pairs with the larger slope-squared (b + sqrt)/2.
        let branches = p.pi_branches(kappas[0]).unwrap();
        let mu = ((4.0 + root) / 2.0_f64).sqrt();
        let nu = 1.0 / (2.0 * mu);
        assert!((branches[0].coeffs[1] + mu).abs() < 1e-12);
        assert!((branches[0].coeffs[0] - nu).abs() < 1e-12);
        assert!((branches[1].coeffs[1] - mu).abs() < 1e-12);
        assert!((branches[1].coeffs[0] + nu).abs() < 1e-12);
        // Larger kappa: slope-squared (b - sqrt)/2.
        let branches = p.pi_branches(kappas[1]).unwrap();
        let mu_small = ((4.0 - root) / 2.0_f64).sqrt();
        assert!((branches[1].coeffs[1] - mu_small).abs() < 1e-12);
    }

    #[test]
    fn admissible_selection_orders_by_kappa_then_sign() {
        let p = printed_triple(-2.0, 1.0, 4.0);
        let reductions = p.select_admissible().unwrap();
        // kappa_minus admits only the minus sign; kappa_plus has mu < 1 so
        // both signs give tau' < 0. Three reductions in total.
        assert_eq!(reductions.len(), 3);
        let root = 15.0_f64.sqrt();
        let mu = ((4.0 + root) / 2.0_f64).sqrt();
        let first = &reductions[0];
        assert!((first.kappa - (-8.0 - root) / 2.0).abs() < 1e-12);
        assert_eq!(first.sign, PiSign::Minus);
        assert!((first.tau.coeffs[1] + 2.0 * (1.0 + mu)).abs() < 1e-12);
        assert!(first.tau_slope() < 0.0);
        assert!(reductions[1].kappa > first.kappa);
        for r in &reductions {
            assert!(r.tau_slope() < 0.0);
            assert!(defining_identity_residual(&p, r) < 1e-10);
        }
    }

    #[test]
    fn already_hypergeometric_triple() {
        // tau~ = -2s, sigma = 1 - s^2, sigma~ = 0: pi = 0 is admissible.
        let p = NUProblem::new(
            Poly::linear(0.0, -2.0),
            Poly::new([1.0, 0.0, -1.0]),
            Poly::constant(0.0),
        )
        .unwrap();
        let reductions = p.select_admissible().unwrap();
        let zero = reductions
            .iter()
            .find(|r| r.pi.max_abs() < 1e-14)
            .expect("pi = 0 branch");
        assert!((zero.tau.coeffs[1] + 2.0).abs() < 1e-14);
        assert_eq!(weight_exponents(zero, &p.sigma).unwrap(), (0.0, 0.0));
        assert_eq!(phi_exponents(zero, &p.sigma).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn no_admissible_branch_case() {
        // tau~ = 0, sigma = s^2, sigma~ = -1: both branches have tau' = 2.
        let p = NUProblem::new(
            Poly::constant(0.0),
            Poly::new([0.0, 0.0, 1.0]),
            Poly::constant(-1.0),
        )
        .unwrap();
        assert_eq!(p.select_admissible(), Err(NuError::NoAdmissibleBranch));
    }

    #[test]
    fn lambda_ladder() {
        let p = printed_triple(-2.0, 1.0, 4.0);
        let r = &p.select_admissible().unwrap()[0];
        // tau' = -2(1 + mu) for this branch.
        let mu = -(r.tau.coeffs[1] + 2.0) / 2.0;
        assert!(mu > 0.0);
        assert_eq!(lambda_of_n(r, &p.sigma, 0), 0.0);
        for n in 1..=4u32 {
            let expected = 2.0 * n as f64 * (1.0 + mu) + (n * (n - 1)) as f64;
            assert!((lambda_of_n(r, &p.sigma, n) - expected).abs() < 1e-12);
        }
        // n = 1 with mu = 0.5 gives 3 on the same formula.
        assert!((2.0 * 1.0 * 1.5_f64 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn weight_and_phi_exponents_for_selected_branch() {
        // Reduction with tau = -2(1+mu)s - 2nu, pi = -(mu s + nu) for
        // mu = 1.2, nu = 0.5: weight (mu+nu, mu-nu), phi half of that.
        let sigma = Poly::new([1.0, 0.0, -1.0]);
        let r = NUReduction {
            kappa: 0.0,
            pi: Poly::linear(-0.5, -1.2),
            tau: Poly::linear(-1.0, -4.4),
            sign: PiSign::Minus,
        };
        let (a, b) = weight_exponents(&r, &sigma).unwrap();
        assert!((a - 1.7).abs() < 1e-14 && (b - 0.7).abs() < 1e-14);
        let (pa, pb) = phi_exponents(&r, &sigma).unwrap();
        assert!((pa - 0.85).abs() < 1e-14 && (pb - 0.35).abs() < 1e-14);
        // phi and weight are consistent: rho exponents are twice phi's.
        assert!((a - 2.0 * pa).abs() < 1e-14 && (b - 2.0 * pb).abs() < 1e-14);
    }

    #[test]
    fn non_jacobi_sigma_is_rejected() {
        let sigma = Poly::new([0.0, 1.0, -1.0]); // s(1 - s)
        let r = NUReduction {
            kappa: 0.0,
            pi: Poly::constant(0.0),
            tau: Poly::linear(0.0, -2.0),
            sign: PiSign::Minus,
        };
        assert_eq!(
            weight_exponents(&r, &sigma),
            Err(NuError::UnsupportedSigmaClass)
        );
        assert_eq!(
            phi_exponents(&r, &sigma),
            Err(NuError::UnsupportedSigmaClass)
        );
    }

    #[test]
    fn problem_validation() {
        assert!(NUProblem::new(
            Poly::new([0.0, 0.0, 1.0]),
            Poly::constant(1.0),
            Poly::constant(0.0)
        )
        .is_err());
        assert!(NUProblem::new(
            Poly::constant(0.0),
            Poly::constant(0.0),
            Poly::constant(0.0)
        )
        .is_err());
    }
}
