//! q-deformed hyperbolic functions and the Rosen-Morse type potential.
//!
//! The deformed family is generated by
//! `sinh_q x = (e^x - q e^{-x}) / 2` and `cosh_q x = (e^x + q e^{-x}) / 2`,
//! which satisfy `cosh_q^2 - sinh_q^2 = q`. Setting q = 1 recovers the
//! ordinary hyperbolic functions, q = -1 swaps the sinh/cosh roles
//! (tanh_{-1} = coth) and q = 0 collapses the family to pure exponentials.
//!
//! The potential evaluated here is `V(x) = -V1 sech_q^2(ax) - V2 tanh_q(ax)`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QhyperError {
    /// The denominator function (cosh_q or sinh_q) vanishes at `x0`.
    #[error("pole of the deformed function at x0 = {x0}")]
    PoleAtX { x0: f64 },
    /// A requested interval contains the potential's pole.
    #[error("interval [{x_min}, {x_max}] contains the potential pole at x0 = {x0}")]
    DomainViolation { x0: f64, x_min: f64, x_max: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

/// Deformation parameter restricted to the supported range [-1, 1].
///
/// q = 0 is allowed for function and potential evaluation (the exponential
/// limit) but is rejected by the spectrum-solving entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationQ(f64);

impl DeformationQ {
    pub fn new(q: f64) -> Result<Self, QhyperError> {
        if !q.is_finite() || !(-1.0..=1.0).contains(&q) {
            return Err(QhyperError::InvalidParams(format!(
                "deformation parameter must lie in [-1, 1], got {q}"
            )));
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Parameters of the Rosen-Morse type potential
/// `V(x) = -v1 sech_q^2(alpha x) - v2 tanh_q(alpha x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub v1: f64,
    pub v2: f64,
    pub alpha: f64,
    pub q: DeformationQ,
}

impl PotentialParams {
    pub fn new(v1: f64, v2: f64, alpha: f64, q: f64) -> Result<Self, QhyperError> {
        if !v1.is_finite() || !v2.is_finite() {
            return Err(QhyperError::InvalidParams(format!(
                "well parameters must be finite, got v1 = {v1}, v2 = {v2}"
            )));
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(QhyperError::InvalidParams(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            v1,
            v2,
            alpha,
            q: DeformationQ::new(q)?,
        })
    }

    /// Location of the cosh_q zero of `cosh_q(alpha x)`, present for q < 0.
    pub fn pole(&self) -> Option<f64> {
        cosh_pole(self.q.value()).map(|u| u / self.alpha)
    }
}

/// Argument of the cosh_q zero: `u0 = ln(-q) / 2` for q < 0, none otherwise.
fn cosh_pole(q: f64) -> Option<f64> {
    if q < 0.0 {
        Some(0.5 * (-q).ln())
    } else {
        None
    }
}

/// Argument of the sinh_q zero: `u0 = ln(q) / 2` for q > 0, none otherwise.
fn sinh_pole(q: f64) -> Option<f64> {
    if q > 0.0 {
        Some(0.5 * q.ln())
    } else {
        None
    }
}

pub fn sinh_q(x: f64, q: f64) -> f64 {
    0.5 * (x.exp() - q * (-x).exp())
}

pub fn cosh_q(x: f64, q: f64) -> f64 {
    0.5 * (x.exp() + q * (-x).exp())
}

/// tanh_q = sinh_q / cosh_q, evaluated in a form that never overflows:
/// for x >= 0 divide through by e^x, for x < 0 by e^{-x}.
pub fn tanh_q(x: f64, q: f64) -> Result<f64, QhyperError> {
    let value = if x >= 0.0 {
        let w = q * (-2.0 * x).exp();
        (1.0 - w) / (1.0 + w)
    } else {
        let w = (2.0 * x).exp();
        (w - q) / (w + q)
    };
    guard_pole(value, cosh_pole(q))
}

pub fn coth_q(x: f64, q: f64) -> Result<f64, QhyperError> {
    let value = if x >= 0.0 {
        let w = q * (-2.0 * x).exp();
        (1.0 + w) / (1.0 - w)
    } else {
        let w = (2.0 * x).exp();
        (w + q) / (w - q)
    };
    guard_pole(value, sinh_pole(q))
}

pub fn sech_q(x: f64, q: f64) -> Result<f64, QhyperError> {
    let value = if x >= 0.0 {
        2.0 * (-x).exp() / (1.0 + q * (-2.0 * x).exp())
    } else {
        2.0 * x.exp() / ((2.0 * x).exp() + q)
    };
    guard_pole(value, cosh_pole(q))
}

pub fn cosech_q(x: f64, q: f64) -> Result<f64, QhyperError> {
    let value = if x >= 0.0 {
        2.0 * (-x).exp() / (1.0 - q * (-2.0 * x).exp())
    } else {
        2.0 * x.exp() / ((2.0 * x).exp() - q)
    };
    guard_pole(value, sinh_pole(q))
}

fn guard_pole(value: f64, pole: Option<f64>) -> Result<f64, QhyperError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QhyperError::PoleAtX {
            x0: pole.unwrap_or(f64::NAN),
        })
    }
}

/// `V(x) = -v1 sech_q^2(alpha x) - v2 tanh_q(alpha x)`.
pub fn potential_eval(p: &PotentialParams, x: f64) -> Result<f64, QhyperError> {
    let q = p.q.value();
    let u = p.alpha * x;
    let sech = sech_q(u, q).map_err(|_| pole_error(p))?;
    let tanh = tanh_q(u, q).map_err(|_| pole_error(p))?;
    Ok(-p.v1 * sech * sech - p.v2 * tanh)
}

fn pole_error(p: &PotentialParams) -> QhyperError {
    QhyperError::PoleAtX {
        x0: p.pole().unwrap_or(f64::NAN),
    }
}

/// Uniform samples of the potential on [x_min, x_max], ordered by x.
///
/// Rejects intervals that contain the q < 0 pole.
pub fn potential_curve(
    p: &PotentialParams,
    x_min: f64,
    x_max: f64,
    n_points: usize,
) -> Result<Vec<(f64, f64)>, QhyperError> {
    if n_points < 2 {
        return Err(QhyperError::InvalidParams(format!(
            "need at least 2 sample points, got {n_points}"
        )));
    }
    if !(x_min < x_max) {
        return Err(QhyperError::InvalidParams(format!(
            "empty interval [{x_min}, {x_max}]"
        )));
    }
    if let Some(x0) = p.pole() {
        if x_min <= x0 && x0 <= x_max {
            return Err(QhyperError::DomainViolation { x0, x_min, x_max });
        }
    }
    let h = (x_max - x_min) / (n_points - 1) as f64;
    let mut samples = Vec::with_capacity(n_points);
    for i in 0..n_points {
        // Pin the endpoints so the grid is exact regardless of rounding.
        let x = if i + 1 == n_points {
            x_max
        } else {
            x_min + i as f64 * h
        };
        samples.push((x, potential_eval(p, x)?));
    }
    Ok(samples)
}
