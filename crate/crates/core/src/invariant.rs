//! Second-order algebraic invariant of the oscillator
//!
//! ```text
//! I(z, p, τ) = A1 z + A2 p + A3 z² + A4 z p + A5 p² + A6 z³
//! ```
//!
//! together with its secular reduction `I_s(z, p, τ)` (unperturbed part plus
//! the `ε² τ` terms) and the sampled form `I_s(z, p, n)` at `τ = nπ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::model::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
}

// Shared bracket of A3 and A5:
// ε² sin(τ/2)/(144 y0⁶) · (15τ cos(τ/2) + 15τ cos(3τ/2) + 5 sin(τ/2) − 15 sin(3τ/2) − 4 sin(5τ/2))
fn half_angle_bracket(tau: f64, y0: f64, eps: f64) -> f64 {
    let h = 0.5 * tau;
    eps * eps * h.sin() / (144.0 * y0.powi(6))
        * (15.0 * tau * h.cos() + 15.0 * tau * (3.0 * h).cos() + 5.0 * h.sin()
            - 15.0 * (3.0 * h).sin()
            - 4.0 * (5.0 * h).sin())
}

// First-order term −ε(−1 + cos τ) sin τ / (3 y0^{5/2}) shared by A3 and A5.
fn first_order_a3(tau: f64, y0: f64, eps: f64) -> f64 {
    -eps * (-1.0 + tau.cos()) * tau.sin() / (3.0 * y0.powf(2.5))
}

/// The cosine bracket of A3, the only part in which A3 and A5 differ.
pub fn a3_cosine_bracket(tau: f64, y0: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    let y72 = y0.powf(3.5);
    (5.0 * e2 * tau.cos() + 4.0 * e2 * (2.0 * tau).cos() - 9.0 * e2 * (3.0 * tau).cos()
        - 24.0 * y72 * eps * tau.sin()
        + 48.0 * y72 * eps * (2.0 * tau).sin()
        - 15.0 * e2 * tau * (2.0 * tau).sin())
        / (144.0 * y0.powi(6))
}

pub fn a1(tau: f64, eps: f64) -> f64 {
    0.5 * eps * tau.sin()
}

pub fn a2(tau: f64, eps: f64) -> f64 {
    0.5 * eps * tau.cos()
}

pub fn a3(tau: f64, y0: f64, eps: f64) -> f64 {
    y0 + first_order_a3(tau, y0, eps)
        + a3_cosine_bracket(tau, y0, eps)
        + half_angle_bracket(tau, y0, eps)
}

pub fn a4(tau: f64, y0: f64, eps: f64) -> f64 {
    let first = -eps * (tau.cos() - (2.0 * tau).cos()) / (3.0 * y0.powf(2.5));
    let second = -eps * eps / (288.0 * y0.powi(6))
        * (30.0 * tau * (2.0 * tau).cos() + 20.0 * tau.sin()
            - 7.0 * (2.0 * tau).sin()
            - 12.0 * (3.0 * tau).sin());
    first + second
}

pub fn a5(tau: f64, y0: f64, eps: f64) -> f64 {
    y0 + first_order_a3(tau, y0, eps) + half_angle_bracket(tau, y0, eps)
}

pub fn a6(tau: f64, y0: f64, eps: f64) -> f64 {
    let h = 0.5 * tau;
    let lead = 2.0 / (3.0 * y0.powf(1.5));
    let first = eps * (-1.0 + tau.cos()) * tau.sin() / (3.0 * y0.powi(5));
    let second = eps * eps * h.sin() / (144.0 * y0.powf(8.5))
        * (-15.0 * tau * h.cos() - 15.0 * tau * (3.0 * h).cos()
            + 20.0 * h.sin()
            + 20.0 * (3.0 * h).sin()
            - 11.0 * (5.0 * h).sin()
            + 5.0 * (7.0 * h).sin());
    lead + first + second
}

pub fn coeffs(tau: f64, y0: f64, eps: f64) -> InvariantCoeffs {
    InvariantCoeffs {
        a1: a1(tau, eps),
        a2: a2(tau, eps),
        a3: a3(tau, y0, eps),
        a4: a4(tau, y0, eps),
        a5: a5(tau, y0, eps),
        a6: a6(tau, y0, eps),
    }
}

impl InvariantCoeffs {
    pub fn eval(&self, z: f64, p: f64) -> f64 {
        self.a1 * z + self.a2 * p + self.a3 * z * z + self.a4 * z * p + self.a5 * p * p
            + self.a6 * z * z * z
    }
}

/// Full second-order invariant `I(z, p, τ)`.
pub fn eval_full(z: f64, p: f64, tau: f64, y0: f64, eps: f64) -> f64 {
    coeffs(tau, y0, eps).eval(z, p)
}

/// Invariant of the unforced system, `y0 p² + y0 z² + (2/3) y0^{-3/2} z³`.
pub fn eval_unforced(z: f64, p: f64, y0: f64) -> f64 {
    y0 * p * p + y0 * z * z + 2.0 * z * z * z / (3.0 * y0.powf(1.5))
}

/// Secular reduction: unperturbed part plus the terms growing like `ε² τ`.
pub fn eval_secular(z: f64, p: f64, tau: f64, y0: f64, eps: f64) -> f64 {
    let y52 = y0.powf(2.5);
    let bracket = -5.0 * p * z / (48.0 * y0.powi(6)) * (2.0 * tau).cos()
        + 15.0 / (288.0 * y0.powf(8.5)) * (p * p * y52 - y52 * z * z - z * z * z)
            * (2.0 * tau).sin();
    eval_unforced(z, p, y0) + eps * eps * tau * bracket
}

/// Secular invariant sampled at `τ = nπ`.
pub fn eval_sampled(z: f64, p: f64, n: i64, y0: f64, eps: f64) -> f64 {
    eval_sampled_continuous(z, p, n as f64, y0, eps)
}

/// [`eval_sampled`] with the sample index treated as a real number.
pub fn eval_sampled_continuous(z: f64, p: f64, n: f64, y0: f64, eps: f64) -> f64 {
    eval_unforced(z, p, y0) - eps * eps * 5.0 / (48.0 * y0.powi(6)) * n * PI * p * z
}

/// Gradient `(∂/∂z, ∂/∂p)` of [`eval_sampled_continuous`].
pub fn sampled_gradient(z: f64, p: f64, n: f64, y0: f64, eps: f64) -> (f64, f64) {
    let s = eps * eps * 5.0 / (48.0 * y0.powi(6)) * n * PI;
    (
        2.0 * y0 * z + 2.0 * z * z / y0.powf(1.5) - s * p,
        2.0 * y0 * p - s * z,
    )
}

/// Level `K = y0 z0² + (2/3) y0^{-3/2} z0³` fixed by the initial condition.
pub fn k_constant(params: &SystemParams) -> Result<f64> {
    if params.p0 != 0.0 {
        return Err(Error::NonZeroInitialMomentum(params.p0));
    }
    Ok(eval_unforced(params.z0, 0.0, params.y0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSample {
    pub n: i64,
    pub i_value: f64,
    pub k_ref: f64,
    /// `(I − K)/K`, or the absolute difference when `K = 0`.
    pub rel_drift: f64,
}

pub fn drift(i_value: f64, k_ref: f64) -> f64 {
    if k_ref == 0.0 {
        i_value - k_ref
    } else {
        (i_value - k_ref) / k_ref
    }
}

/// Sampled invariant against `K` at every recorded grid point.
pub fn drift_series(traj: &Trajectory, params: &SystemParams) -> Result<Vec<InvariantSample>> {
    let k_ref = k_constant(params)?;
    Ok(traj
        .samples
        .iter()
        .map(|s| {
            let i_value = eval_sampled(s.state.z, s.state.p, s.n, params.y0, params.eps);
            InvariantSample { n: s.n, i_value, k_ref, rel_drift: drift(i_value, k_ref) }
        })
        .collect())
}
