//! Rupture of the invariant tube.
//!
//! In polar coordinates `z = r cos φ`, `p = r sin φ` the sampled invariant
//! `I_s(z, p, n) = K` becomes the radial cubic
//!
//! ```text
//! A(φ) r³ + B(φ, n) r² + D = 0
//! A = 2 cos³φ / (3 y0^{3/2})
//! B = y0 − 5 n π ε² sin 2φ / (96 y0⁶)
//! D = −K
//! ```
//!
//! The cross-section ruptures at the first `n` for which some ray carries a
//! double root, `D + (4/27) B³/A² = 0`. Solving that for `n` gives the rupture
//! function `n(φ)`, whose positive minimum is available in closed form.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::invariant::{eval_unforced, k_constant};
use crate::model::SystemParams;

/// `|A|` below which the radial cubic is treated as a quadratic.
pub const LEADING_COEFF_EPS: f64 = 1e-14;
/// `|sin 2φ|` below which the rupture function is singular.
pub const ANGLE_SINGULAR_EPS: f64 = 1e-12;
/// `|sin 2φ|` below which oracle scans skip the angle.
pub const ORACLE_ANGLE_EXCLUSION: f64 = 1e-6;
pub const DEFAULT_ORACLE_GRID: usize = 100_000;

/// `96 y0⁶ / (5 ε²)`, the time scale of the secular drift.
pub fn secular_time_scale(y0: f64, eps: f64) -> f64 {
    96.0 * y0.powi(6) / (5.0 * eps * eps)
}

fn c_raw(y0: f64, z0: f64) -> f64 {
    z0 * z0 * (3.0 * y0.powf(2.5) + 2.0 * z0) / y0.powf(4.5)
}

/// `C = z0² (3 y0^{5/2} + 2 z0) / y0^{9/2}`, equal to `3K / y0³`.
pub fn c_const(y0: f64, z0: f64) -> Result<f64> {
    if z0 == 0.0 {
        return Err(Error::ZeroInitialDisplacement);
    }
    if !(3.0 * y0.powf(2.5) + 2.0 * z0 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "3 y0^(5/2) + 2 z0 must be > 0 (z0 = {z0} is beyond the unforced saddle)"
        )));
    }
    Ok(c_raw(y0, z0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCubic {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub phi: f64,
    pub n: f64,
}

impl PolarCubic {
    pub fn coeffs(&self) -> [f64; 4] {
        [self.a, self.b, 0.0, self.d]
    }

    pub fn eval(&self, r: f64) -> f64 {
        cubic::eval(self.coeffs(), r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        cubic::eval_derivative(self.coeffs(), r)
    }

    fn check_leading(&self) -> Result<()> {
        if self.a.abs() < LEADING_COEFF_EPS {
            return Err(Error::DegenerateLeadingCoefficient(self.a));
        }
        Ok(())
    }
}

pub fn polar_cubic(phi: f64, n: f64, params: &SystemParams) -> PolarCubic {
    let SystemParams { y0, eps, z0, .. } = *params;
    PolarCubic {
        a: 2.0 * phi.cos().powi(3) / (3.0 * y0.powf(1.5)),
        b: y0 - 5.0 * n * PI * eps * eps / (96.0 * y0.powi(6)) * (2.0 * phi).sin(),
        d: -eval_unforced(z0, 0.0, y0),
        phi,
        n,
    }
}

/// `D + (4/27) B³/A²`: zero exactly when the cubic has the double root `r*`.
/// Positive means the ray still crosses the closed tube wall.
pub fn double_root_residual(cubic: &PolarCubic) -> Result<f64> {
    cubic.check_leading()?;
    Ok(cubic.d + 4.0 / 27.0 * cubic.b.powi(3) / (cubic.a * cubic.a))
}

/// Nontrivial critical point `r* = −2B / (3A)` of the radial cubic.
pub fn r_star(cubic: &PolarCubic) -> Result<f64> {
    cubic.check_leading()?;
    Ok(-2.0 * cubic.b / (3.0 * cubic.a))
}

/// `n(φ) = 96 y0⁶/(5π ε²) · (y0 − C^{1/3} cos²φ) / sin 2φ`; may be negative.
pub fn rupture_function(phi: f64, params: &SystemParams) -> Result<f64> {
    if params.eps == 0.0 {
        return Err(Error::ZeroForcing);
    }
    let s2 = (2.0 * phi).sin();
    if s2.abs() < ANGLE_SINGULAR_EPS {
        return Err(Error::AngleSingular(s2));
    }
    let c = c_const(params.y0, params.z0)?;
    let cos2 = phi.cos().powi(2);
    Ok(secular_time_scale(params.y0, params.eps) / PI * (params.y0 - c.cbrt() * cos2) / s2)
}

/// `cos²φ_crit = y0 / (2 y0 − C^{1/3})`.
pub fn cos2_phi_crit(y0: f64, z0: f64) -> Result<f64> {
    let k = c_const(y0, z0)?.cbrt();
    // k = y0 puts the extremum on the boundary cos²φ = 1, not in the interior
    if !(k < y0) {
        return Err(Error::NoRealExtremum { c_cbrt: k, y0 });
    }
    Ok(y0 / (2.0 * y0 - k))
}

/// The four extremal angles of the rupture function in `(0, 2π)`, ascending.
pub fn phi_crit(y0: f64, z0: f64) -> Result<[f64; 4]> {
    let base = cos2_phi_crit(y0, z0)?.sqrt().acos();
    Ok([base, PI - base, PI + base, 2.0 * PI - base])
}

pub fn n_crit_closed(params: &SystemParams) -> Result<f64> {
    if params.eps == 0.0 {
        return Err(Error::ZeroForcing);
    }
    let y0 = params.y0;
    let k = c_const(y0, params.z0)?.cbrt();
    if !(k < y0) {
        return Err(Error::NoRealExtremum { c_cbrt: k, y0 });
    }
    Ok(secular_time_scale(y0, params.eps) / PI * (y0 * (y0 - k)).sqrt())
}

pub fn tau_rupt_closed(params: &SystemParams) -> Result<f64> {
    Ok(PI * n_crit_closed(params)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityCheck {
    pub inside: bool,
    /// `y0 (y0 − C^{1/3})`, compared against 1.
    pub value: f64,
    /// `1 − value`; positive inside.
    pub margin: f64,
}

/// Region `y0 (y0 − C^{1/3}) < 1` where the rupture time stays inside the
/// time domain of the second-order expansion.
pub fn validity_check(y0: f64, z0: f64) -> ValidityCheck {
    let value = y0 * (y0 - c_raw(y0, z0).cbrt());
    ValidityCheck { inside: value < 1.0, value, margin: 1.0 - value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    NonPositiveRadius,
    /// The double root is not where the wall around the initial point opens.
    NotConnected,
    NonPositiveIndex,
    NotMinimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub phi: f64,
    pub n: f64,
    pub r_star: f64,
    pub z: f64,
    pub rejected: Option<Rejection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "quadrant")]
pub enum Branch {
    ThirdQuadrant,
    FirstQuadrant,
    Other { lo: f64, hi: f64 },
}

impl Branch {
    pub fn classify(phi: f64) -> Self {
        let phi = phi.rem_euclid(2.0 * PI);
        let q = (phi / (PI / 2.0)).floor();
        match q as i32 {
            0 => Branch::FirstQuadrant,
            2 => Branch::ThirdQuadrant,
            _ => Branch::Other { lo: q * PI / 2.0, hi: (q + 1.0) * PI / 2.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuptureReport {
    pub params: SystemParams,
    pub c_const: f64,
    pub phi_crit: f64,
    pub n_crit: f64,
    pub tau_rupt: f64,
    pub r_star: f64,
    pub z_at_rupture: f64,
    pub p_at_rupture: f64,
    pub branch: Branch,
    pub valid: bool,
    pub validity: ValidityCheck,
    pub candidates: Vec<Candidate>,
}

/// Pick the physical rupture angle among `candidates`:
/// (i) `r* > 0`, (ii) the double root joins the wall around the initial point
/// to the outer branch (`A < 0`, `D < 0`), (iii) minimal positive `n(φ)`.
pub fn select_branch(candidates: &[f64], params: &SystemParams) -> Result<RuptureReport> {
    let c = c_const(params.y0, params.z0)?;
    let mut evaluated = Vec::with_capacity(candidates.len());
    for &phi in candidates {
        let n = rupture_function(phi, params)?;
        let cubic = polar_cubic(phi, n, params);
        let r = r_star(&cubic)?;
        let rejected = if !(r > 0.0) {
            Some(Rejection::NonPositiveRadius)
        } else if !(cubic.a < 0.0 && cubic.d < 0.0) {
            Some(Rejection::NotConnected)
        } else if !(n > 0.0) {
            Some(Rejection::NonPositiveIndex)
        } else {
            None
        };
        evaluated.push(Candidate { phi, n, r_star: r, z: r * phi.cos(), rejected });
    }

    let best = evaluated
        .iter()
        .enumerate()
        .filter(|(_, c)| c.rejected.is_none())
        .min_by(|(_, a), (_, b)| a.n.total_cmp(&b.n))
        .map(|(i, _)| i)
        .ok_or(Error::NoPhysicalBranch)?;
    for (i, cand) in evaluated.iter_mut().enumerate() {
        if i != best && cand.rejected.is_none() {
            cand.rejected = Some(Rejection::NotMinimal);
        }
    }

    let chosen = evaluated[best];
    let validity = validity_check(params.y0, params.z0);
    Ok(RuptureReport {
        params: *params,
        c_const: c,
        phi_crit: chosen.phi,
        n_crit: chosen.n,
        tau_rupt: PI * chosen.n,
        r_star: chosen.r_star,
        z_at_rupture: chosen.z,
        p_at_rupture: chosen.r_star * chosen.phi.sin(),
        branch: Branch::classify(chosen.phi),
        valid: validity.inside,
        validity,
        candidates: evaluated,
    })
}

/// Full closed-form prediction for `params`.
pub fn predict(params: &SystemParams) -> Result<RuptureReport> {
    params.validate()?;
    if params.p0 != 0.0 {
        return Err(Error::NonZeroInitialMomentum(params.p0));
    }
    if params.eps == 0.0 {
        return Err(Error::ZeroForcing);
    }
    let angles = phi_crit(params.y0, params.z0)?;
    select_branch(&angles, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleHit {
    pub phi: f64,
    pub n: f64,
}

/// Smallest `n` in `[0, n_max]` at which the ray at `phi` no longer meets the
/// level set (no positive root), found by doubling and bisection on the root
/// count of the radial cubic.
fn ray_opening_index(phi: f64, params: &SystemParams, n_max: f64) -> Option<f64> {
    let open = |n: f64| {
        let c = polar_cubic(phi, n, params);
        cubic::solve(c.a, c.b, 0.0, c.d).is_some_and(|r| r.count_positive() == 0)
    };
    if open(0.0) {
        return Some(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0f64.min(n_max);
    loop {
        if open(hi) {
            break;
        }
        if hi >= n_max {
            return None;
        }
        lo = hi;
        hi = (2.0 * hi).min(n_max);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if open(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Brute-force rupture search over a uniform angle grid, independent of the
/// closed-form chain. Ties resolve to the lowest angle.
pub fn n_crit_oracle_hit(params: &SystemParams, phi_grid_size: usize, n_max: f64) -> Result<OracleHit> {
    params.validate()?;
    if params.eps == 0.0 {
        return Err(Error::OracleExhausted(n_max));
    }
    k_constant(params)?;
    c_const(params.y0, params.z0)?;
    let step = 2.0 * PI / phi_grid_size as f64;
    let hits: Vec<Option<OracleHit>> = (0..phi_grid_size)
        .into_par_iter()
        .map(|i| {
            let phi = (i as f64 + 0.5) * step;
            if (2.0 * phi).sin().abs() < ORACLE_ANGLE_EXCLUSION {
                return None;
            }
            let n = ray_opening_index(phi, params, n_max)?;
            let c = polar_cubic(phi, n, params);
            let r = r_star(&c).ok()?;
            (r > 0.0).then_some(OracleHit { phi, n })
        })
        .collect();
    hits.into_iter()
        .flatten()
        .fold(None, |best: Option<OracleHit>, h| match best {
            Some(b) if b.n <= h.n => Some(b),
            _ => Some(h),
        })
        .ok_or(Error::OracleExhausted(n_max))
}

pub fn n_crit_oracle(params: &SystemParams, phi_grid_size: usize, n_max: f64) -> Result<f64> {
    Ok(n_crit_oracle_hit(params, phi_grid_size, n_max)?.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(y0: f64, eps: f64, z0: f64) -> SystemParams {
        SystemParams::new(y0, eps, z0).unwrap()
    }

    #[test]
    fn c_values() {
        assert!((c_const(1.0, 0.2).unwrap() - 0.136).abs() < 1e-15);
        assert!((c_const(1.0, 0.25).unwrap() - 0.21875).abs() < 1e-15);
        assert!(c_const(1.0, 1e-8).unwrap() < 1e-15);
        assert!(matches!(c_const(1.0, 0.0), Err(Error::ZeroInitialDisplacement)));
        assert!(c_const(1.0, -1.6).is_err());
    }

    #[test]
    fn c_is_three_k_over_y0_cubed() {
        for &(y0, z0) in &[(1.0, 0.2), (1.3, -0.2), (0.7, 0.05)] {
            let k = eval_unforced(z0, 0.0, y0);
            assert!((c_const(y0, z0).unwrap() - 3.0 * k / (y0 * y0 * y0)).abs() < 1e-14);
        }
    }

    #[test]
    fn polar_cubic_values() {
        let p = params(1.0, 0.05, 0.2);
        let c = polar_cubic(0.0, 0.0, &p);
        assert!((c.a - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(c.b, 1.0);
        assert!((c.d + 0.045_333_333_333_333_33).abs() < 1e-15);
        assert!(polar_cubic(PI / 2.0, 10.0, &p).a.abs() < 1e-16);
        for phi in [0.3, 2.0, 4.0] {
            assert_eq!(polar_cubic(phi, 0.0, &p).b, 1.0);
        }
        assert!(polar_cubic(1.0, 100.0, &p).d < 0.0);
    }

    #[test]
    fn polar_cubic_reproduces_sampled_invariant() {
        let p = params(1.2, 0.07, 0.3);
        let k = k_constant(&p).unwrap();
        for &(r, phi, n) in &[(0.3, 0.4, 10.0), (0.7, 3.9, 800.0), (0.1, 5.5, 3.0)] {
            let c = polar_cubic(phi, n, &p);
            let (z, q) = (r * f64::cos(phi), r * f64::sin(phi));
            let is = crate::invariant::eval_sampled_continuous(z, q, n, 1.2, 0.07);
            assert!((c.eval(r) - (is - k)).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_values() {
        let p = params(1.0, 0.05, 0.2);
        let c = polar_cubic(0.0, 0.0, &p);
        let res = double_root_residual(&c).unwrap();
        assert!((res - (-0.045_333_333_333_333_33 + 1.0 / 3.0)).abs() < 1e-15);
        assert!(res > 0.0);
        let degenerate = polar_cubic(PI / 2.0, 0.0, &p);
        assert!(matches!(
            double_root_residual(&degenerate),
            Err(Error::DegenerateLeadingCoefficient(_))
        ));
    }

    #[test]
    fn residual_vanishes_on_rupture_function() {
        let p = params(1.0, 0.05, 0.2);
        for phi in [0.3, 1.2, 3.5, 3.9, 5.0] {
            let n = rupture_function(phi, &p).unwrap();
            let c = polar_cubic(phi, n, &p);
            let b_closed = c_const(1.0, 0.2).unwrap().cbrt() * phi.cos().powi(2);
            assert!((c.b - b_closed).abs() < 1e-12);
            let res = double_root_residual(&c).unwrap();
            assert!(res.abs() < 1e-9 * c.d.abs(), "phi={phi} res={res}");
        }
    }

    #[test]
    fn r_star_values() {
        let base = PolarCubic { a: 2.0 / 3.0, b: 1.0, d: -0.1, phi: 0.0, n: 0.0 };
        assert!((r_star(&base).unwrap() + 1.0).abs() < 1e-16);
        assert!(r_star(&PolarCubic { a: -0.3, b: 0.5, ..base }).unwrap() > 0.0);
        assert!(r_star(&PolarCubic { a: 1e-15, ..base }).is_err());
    }

    #[test]
    fn rupture_function_near_quarter_pi() {
        let p = params(1.0, 0.05, 0.2);
        let n = rupture_function(PI / 4.0, &p).unwrap();
        let k = 0.136f64.cbrt();
        assert!((k - 0.514_256).abs() < 1e-6);
        let expect = 96.0 / (5.0 * PI * 0.0025) * (1.0 - 0.5 * k);
        assert!((n - expect).abs() < 1e-9 * expect);
        assert!((n - 1816.04).abs() < 0.01, "{n}");
    }

    #[test]
    fn rupture_function_errors() {
        let p = params(1.0, 0.05, 0.2);
        assert!(matches!(rupture_function(PI, &p), Err(Error::AngleSingular(_))));
        assert!(matches!(rupture_function(0.4, &params(1.0, 0.0, 0.2)), Err(Error::ZeroForcing)));
        assert!(matches!(
            rupture_function(0.4, &params(1.0, 0.1, 0.0)),
            Err(Error::ZeroInitialDisplacement)
        ));
    }

    #[test]
    fn phi_crit_angles() {
        let angles = phi_crit(1.0, 0.2).unwrap();
        let cos2 = 1.0 / (2.0 - 0.136f64.cbrt());
        assert!((cos2 - 0.673_064).abs() < 1e-6);
        assert!((angles[0] - 0.608_678).abs() < 1e-4);
        assert!((angles[2] - (PI + 0.608_678)).abs() < 1e-4);
        for a in angles {
            assert!((a.cos().powi(2) - cos2).abs() < 1e-14);
            assert!(a > 0.0 && a < 2.0 * PI);
        }
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn phi_crit_small_c_limit() {
        let angles = phi_crit(1.0, 1e-6).unwrap();
        assert!((angles[0] - PI / 4.0).abs() < 1e-3);
    }

    #[test]
    fn phi_crit_boundary_is_rejected() {
        // choose z0 with C^(1/3) = y0 = 1: z0²(3 + 2 z0) = 1
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..200 {
            let mid: f64 = 0.5 * (lo + hi);
            if mid * mid * (3.0 + 2.0 * mid) < 1.0 { lo = mid } else { hi = mid }
        }
        assert!(matches!(phi_crit(1.0, hi), Err(Error::NoRealExtremum { .. })));
        assert!(phi_crit(1.0, 0.9 * lo).is_ok());
    }

    #[test]
    fn closed_form_table_values() {
        let expect = [(0.025, 21411.0), (0.05, 5353.7), (0.10, 1338.2), (0.15, 594.8), (0.20, 334.5)];
        for (eps, tau) in expect {
            let t = tau_rupt_closed(&params(1.0, eps, 0.2)).unwrap();
            assert!((t - tau).abs() / tau < 1e-3, "eps={eps} t={t}");
        }
        let a = tau_rupt_closed(&params(1.0, 0.08, 0.2)).unwrap();
        let b = tau_rupt_closed(&params(1.0, 0.04, 0.2)).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
        assert!(matches!(n_crit_closed(&params(1.0, 0.0, 0.2)), Err(Error::ZeroForcing)));
    }

    #[test]
    fn validity_points() {
        let v = validity_check(1.0, 0.25);
        assert!(v.inside);
        assert!((v.value - 0.397_464).abs() < 1e-6, "{}", v.value);
        let v = validity_check(1.0, 0.2);
        assert!(v.inside && (v.value - 0.485_744).abs() < 1e-6);
        assert!(!validity_check(2.0, 1e-6).inside);
        assert!(!validity_check(2.0, 0.01).inside);
    }

    #[test]
    fn branch_selection_third_quadrant() {
        let p = params(1.0, 0.05, 0.2);
        let report = predict(&p).unwrap();
        assert_eq!(report.branch, Branch::ThirdQuadrant);
        assert!((report.phi_crit - (PI + 0.608_678)).abs() < 1e-4);
        assert!((report.phi_crit - 3.750_271).abs() < 1e-5);
        assert!(report.r_star > 0.0 && report.z_at_rupture < 0.0);
        assert_eq!(report.tau_rupt, PI * report.n_crit);
        let first = report.candidates.iter().find(|c| c.phi < PI / 2.0).unwrap();
        assert_eq!(first.rejected, Some(Rejection::NonPositiveRadius));
        assert_eq!(report.candidates.iter().filter(|c| c.rejected.is_none()).count(), 1);
    }

    #[test]
    fn negative_displacement_still_opens_toward_negative_z() {
        let report = predict(&params(1.0, 0.05, -0.2)).unwrap();
        assert!(report.z_at_rupture < 0.0);
        assert_eq!(report.branch, Branch::ThirdQuadrant);
    }

    #[test]
    fn predict_errors() {
        assert!(matches!(predict(&params(1.0, 0.0, 0.2)), Err(Error::ZeroForcing)));
        assert!(matches!(predict(&params(1.0, 0.05, 0.0)), Err(Error::ZeroInitialDisplacement)));
        assert!(matches!(predict(&params(1.0, 0.05, 0.9)), Err(Error::NoRealExtremum { .. })));
        let p = SystemParams::with_momentum(1.0, 0.05, 0.2, 0.1).unwrap();
        assert!(matches!(predict(&p), Err(Error::NonZeroInitialMomentum(_))));
    }

    #[test]
    fn outside_validity_still_predicts() {
        let report = predict(&params(2.0, 0.05, 0.01)).unwrap();
        assert!(!report.valid);
        assert!(report.validity.value > 1.0);
        assert!(report.tau_rupt > 0.0);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let p = params(1.0, 0.05, 0.2);
        let closed = n_crit_closed(&p).unwrap();
        assert!((PI * closed - 5352.6).abs() < 0.01);
        let hit = n_crit_oracle_hit(&p, 20_000, 1e7).unwrap();
        assert!((hit.n - closed).abs() / closed < 1e-4, "{} vs {closed}", hit.n);
        assert_eq!(Branch::classify(hit.phi), Branch::ThirdQuadrant);
    }

    #[test]
    fn oracle_exhausted() {
        assert!(matches!(
            n_crit_oracle(&params(1.0, 0.0, 0.2), 1000, 1e9),
            Err(Error::OracleExhausted(_))
        ));
        assert!(matches!(
            n_crit_oracle(&params(1.0, 0.05, 0.2), 1000, 100.0),
            Err(Error::OracleExhausted(_))
        ));
    }

    #[test]
    fn branch_classification() {
        assert_eq!(Branch::classify(0.3), Branch::FirstQuadrant);
        assert_eq!(Branch::classify(3.5), Branch::ThirdQuadrant);
        assert_eq!(Branch::classify(2.0), Branch::Other { lo: PI / 2.0, hi: PI });
    }

    proptest! {
        #[test]
        fn rupture_function_is_pi_periodic(phi in 0.01..3.1f64) {
            prop_assume!((2.0 * phi).sin().abs() > 1e-3);
            let p = params(1.0, 0.07, 0.2);
            let a = rupture_function(phi, &p).unwrap();
            let b = rupture_function(phi + PI, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn pi_shift_flips_radius_direction(phi in 0.01..3.1f64, n in 0.0..3000.0f64) {
            prop_assume!(phi.cos().abs() > 1e-3);
            let p = params(1.0, 0.05, 0.2);
            let a = r_star(&polar_cubic(phi, n, &p)).unwrap();
            let b = r_star(&polar_cubic(phi + PI, n, &p)).unwrap();
            // cos flips sign, B unchanged: r* flips sign, the point (z, p) is the same
            prop_assert!((a + b).abs() <= 1e-9 * a.abs().max(1.0));
            prop_assert!((a * phi.cos() - b * (phi + PI).cos()).abs() <= 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn sign_follows_sin_two_phi_inside_validity(phi in 0.01..6.27f64, z0 in 0.01..0.4f64) {
            prop_assume!((2.0 * phi).sin().abs() > 1e-3);
            let p = params(1.0, 0.05, z0);
            let n = rupture_function(phi, &p).unwrap();
            prop_assert_eq!(n > 0.0, (2.0 * phi).sin() > 0.0);
        }
    }
}
