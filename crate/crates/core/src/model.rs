//! Parameters, state and right-hand sides of the coupled driver/oscillator system
//!
//! ```text
//! y''' + 4 y' = ε y^{-5/2} cos τ,      y(0) = y0, y'(0) = y''(0) = 0
//! z''  + z + y^{-5/2} z² = 0,          z(0) = z0, z'(0) = p0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest driver value for which `y^{-5/2}` is evaluated.
pub const DRIVER_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub y0: f64,
    pub eps: f64,
    pub z0: f64,
    #[serde(default)]
    pub p0: f64,
}

impl SystemParams {
    /// Parameters with the conventional `p0 = 0`.
    pub fn new(y0: f64, eps: f64, z0: f64) -> Result<Self> {
        Self::with_momentum(y0, eps, z0, 0.0)
    }

    pub fn with_momentum(y0: f64, eps: f64, z0: f64, p0: f64) -> Result<Self> {
        let params = Self { y0, eps, z0, p0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.y0.is_finite() && self.y0 > 0.0) {
            return Err(Error::InvalidParams(format!("y0 must be > 0, got {}", self.y0)));
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(Error::InvalidParams(format!("eps must be >= 0, got {}", self.eps)));
        }
        if !self.z0.is_finite() || !self.p0.is_finite() {
            return Err(Error::InvalidParams("z0 and p0 must be finite".into()));
        }
        Ok(())
    }
}

/// Joint state `(y, y', y'', z, p)` at time `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtendedState {
    pub tau: f64,
    pub y: f64,
    pub yp: f64,
    pub ypp: f64,
    pub z: f64,
    pub p: f64,
}

impl ExtendedState {
    pub fn components(&self) -> [f64; 5] {
        [self.y, self.yp, self.ypp, self.z, self.p]
    }

    pub fn from_components(tau: f64, c: [f64; 5]) -> Self {
        Self { tau, y: c[0], yp: c[1], ypp: c[2], z: c[3], p: c[4] }
    }
}

/// How the driver `y(τ)` entering `g(τ) = y^{-5/2}` is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Driver {
    /// Closed-form second-order expansion `y0 + ε y1(τ) + ε² y2(τ)`, the
    /// driver the invariant coefficients are built from.
    #[default]
    SecondOrder,
    /// Direct integration of the third-order driver equation.
    Exact,
}

impl std::str::FromStr for Driver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "second-order" => Ok(Driver::SecondOrder),
            "exact" => Ok(Driver::Exact),
            other => Err(Error::InvalidParams(format!(
                "unknown driver '{other}' (expected second-order | exact)"
            ))),
        }
    }
}

pub fn initial_state(params: &SystemParams) -> ExtendedState {
    ExtendedState { tau: 0.0, y: params.y0, yp: 0.0, ypp: 0.0, z: params.z0, p: params.p0 }
}

/// `y^{-5/2}` computed as `exp(-2.5 ln y)`, refusing values at or below the floor.
pub fn modulation(y: f64, tau: f64) -> Result<f64> {
    if !(y > DRIVER_FLOOR) {
        return Err(Error::DriverNonPositive { tau, y });
    }
    Ok((-2.5 * y.ln()).exp())
}

/// Derivative of `(y, y', y'', z, p)` for the jointly integrated driver.
pub fn rhs(state: &ExtendedState, params: &SystemParams) -> Result<[f64; 5]> {
    let g = modulation(state.y, state.tau)?;
    let z = state.z;
    Ok([
        state.yp,
        state.ypp,
        params.eps * g * state.tau.cos() - 4.0 * state.yp,
        state.p,
        -z - g * z * z,
    ])
}

/// Derivative under the chosen driver model. With [`Driver::SecondOrder`] the
/// y-block derivatives are the closed-form ones, so the y components of the
/// state track the expansion to integrator tolerance.
pub fn rhs_with(driver: Driver, state: &ExtendedState, params: &SystemParams) -> Result<[f64; 5]> {
    match driver {
        Driver::Exact => rhs(state, params),
        Driver::SecondOrder => {
            let d = second_order_driver(state.tau, params.y0, params.eps);
            let g = modulation(state.y, state.tau)?;
            let z = state.z;
            Ok([d.yp, d.ypp, d.yppp, state.p, -z - g * z * z])
        }
    }
}

/// Value and first three derivatives of the driver expansion at one τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverValue {
    pub y: f64,
    pub yp: f64,
    pub ypp: f64,
    pub yppp: f64,
}

/// Second-order expansion of the driver with `y(0) = y0`, `y'(0) = y''(0) = 0`:
///
/// ```text
/// y1 = (2 sin τ − sin 2τ) / (6 y0^{5/2})
/// y2 = (15 τ sin 2τ − 20 cos τ + 11 cos 2τ + 4 cos 3τ + 5) / (288 y0^6)
/// ```
///
/// `y2` carries the resonant secular term `τ sin 2τ`.
pub fn second_order_driver(tau: f64, y0: f64, eps: f64) -> DriverValue {
    let (s1, c1) = tau.sin_cos();
    let (s2, c2) = (2.0 * tau).sin_cos();
    let (s3, c3) = (3.0 * tau).sin_cos();

    let k1 = eps / (6.0 * y0.powf(2.5));
    let y1 = 2.0 * s1 - s2;
    let y1p = 2.0 * c1 - 2.0 * c2;
    let y1pp = -2.0 * s1 + 4.0 * s2;
    let y1ppp = -2.0 * c1 + 8.0 * c2;

    let k2 = eps * eps / (288.0 * y0.powi(6));
    let y2 = 15.0 * tau * s2 - 20.0 * c1 + 11.0 * c2 + 4.0 * c3 + 5.0;
    let y2p = 30.0 * tau * c2 + 20.0 * s1 - 7.0 * s2 - 12.0 * s3;
    let y2pp = -60.0 * tau * s2 + 20.0 * c1 + 16.0 * c2 - 36.0 * c3;
    let y2ppp = -120.0 * tau * c2 - 20.0 * s1 - 92.0 * s2 + 108.0 * s3;

    DriverValue {
        y: y0 + k1 * y1 + k2 * y2,
        yp: k1 * y1p + k2 * y2p,
        ypp: k1 * y1pp + k2 * y2pp,
        yppp: k1 * y1ppp + k2 * y2ppp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(tau: f64, y: f64, z: f64) -> ExtendedState {
        ExtendedState { tau, y, yp: 0.0, ypp: 0.0, z, p: 0.0 }
    }

    #[test]
    fn rhs_at_rest() {
        let params = SystemParams::new(1.0, 0.05, 0.0).unwrap();
        let d = rhs(&state(0.0, 1.0, 0.0), &params).unwrap();
        assert_eq!(d, [0.0, 0.0, 0.05, 0.0, 0.0]);
    }

    #[test]
    fn rhs_oscillator_acceleration() {
        let params = SystemParams::new(1.0, 0.3, 0.2).unwrap();
        let d = rhs(&state(0.0, 1.0, 0.2), &params).unwrap();
        assert_eq!(d[3], 0.0);
        assert!((d[4] + 0.24).abs() < 1e-15);
    }

    #[test]
    fn rhs_cosine_zero() {
        let params = SystemParams::new(1.0, 0.05, 0.0).unwrap();
        let d = rhs(&state(PI / 2.0, 1.0, 0.0), &params).unwrap();
        assert!(d[2].abs() < 1e-17);
    }

    #[test]
    fn rhs_rejects_nonpositive_driver() {
        let params = SystemParams::new(1.0, 0.05, 0.2).unwrap();
        for y in [0.0, -1.0, 1e-9] {
            assert!(matches!(
                rhs(&state(1.0, y, 0.2), &params),
                Err(Error::DriverNonPositive { .. })
            ));
        }
    }

    #[test]
    fn initial_states() {
        let s = initial_state(&SystemParams::new(1.0, 0.05, 0.2).unwrap());
        assert_eq!(s.components(), [1.0, 0.0, 0.0, 0.2, 0.0]);
        assert_eq!(s.tau, 0.0);
        let s = initial_state(&SystemParams::new(2.0, 0.0, -0.1).unwrap());
        assert_eq!(s.components(), [2.0, 0.0, 0.0, -0.1, 0.0]);
        let s = initial_state(&SystemParams::new(1.0, 0.08, 0.25).unwrap());
        assert_eq!(s.components(), [1.0, 0.0, 0.0, 0.25, 0.0]);
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::new(0.0, 0.1, 0.2).is_err());
        assert!(SystemParams::new(1.0, -0.1, 0.2).is_err());
        assert!(SystemParams::new(1.0, 0.1, f64::NAN).is_err());
        assert_eq!(SystemParams::new(1.0, 0.1, 0.2).unwrap().p0, 0.0);
    }

    #[test]
    fn quadratic_term_breaks_oddness() {
        let params = SystemParams::new(1.3, 0.1, 0.0).unwrap();
        for &(y, z, p) in &[(1.3, 0.2, 0.1), (0.7, -0.4, 0.3), (2.0, 0.05, -0.2)] {
            let a = ExtendedState { tau: 0.4, y, yp: 0.0, ypp: 0.0, z, p };
            let b = ExtendedState { z: -z, p: -p, ..a };
            let da = rhs(&a, &params).unwrap();
            let db = rhs(&b, &params).unwrap();
            let g = y.powf(-2.5);
            assert!((da[4] + db[4] + 2.0 * g * z * z).abs() < 1e-14);
            assert_eq!(da[3] + db[3], 0.0);
        }
    }

    #[test]
    fn driver_expansion_initial_conditions() {
        let d = second_order_driver(0.0, 1.7, 0.2);
        assert!((d.y - 1.7).abs() < 1e-15);
        assert!(d.yp.abs() < 1e-15);
        assert!(d.ypp.abs() < 1e-15);
    }

    #[test]
    fn driver_expansion_derivatives_match_finite_differences() {
        let (y0, eps) = (1.2, 0.15);
        let h = 1e-5;
        for &tau in &[0.3, 2.0, 17.5, 140.0] {
            let d = second_order_driver(tau, y0, eps);
            let f = |t: f64| second_order_driver(t, y0, eps);
            let fd = |a: f64, b: f64| (a - b) / (2.0 * h);
            assert!((fd(f(tau + h).y, f(tau - h).y) - d.yp).abs() < 1e-8);
            assert!((fd(f(tau + h).yp, f(tau - h).yp) - d.ypp).abs() < 1e-8);
            assert!((fd(f(tau + h).ypp, f(tau - h).ypp) - d.yppp).abs() < 1e-8);
        }
    }

    // The expansion satisfies the driver equation with an O(ε³) residual.
    #[test]
    fn driver_expansion_solves_driver_equation_to_third_order() {
        let y0 = 1.0;
        let residual = |eps: f64| {
            (0..400)
                .map(|k| {
                    let tau = 0.05 * k as f64;
                    let d = second_order_driver(tau, y0, eps);
                    (d.yppp + 4.0 * d.yp - eps * d.y.powf(-2.5) * tau.cos()).abs()
                })
                .fold(0.0, f64::max)
        };
        let r1 = residual(0.02);
        let r2 = residual(0.01);
        let ratio = r1 / r2;
        assert!((6.0..10.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn driver_parse() {
        assert_eq!("exact".parse::<Driver>().unwrap(), Driver::Exact);
        assert_eq!("second-order".parse::<Driver>().unwrap(), Driver::SecondOrder);
        assert!("rk4".parse::<Driver>().is_err());
    }
}
