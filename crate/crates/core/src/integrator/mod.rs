//! Adaptive integration of the extended system with exact hits on the
//! sampling grid `τ = nπ` and blow-up detection.

mod tableau;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{initial_state, rhs_with, Driver, ExtendedState, SystemParams};

use tableau::{A, B7, B8, C, STAGES};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
// 1/(p+1) with p = 7, the order of the error estimate
const EXPONENT: f64 = 1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    /// `|z|` at or beyond which the run is declared divergent.
    pub blowup_threshold: f64,
    pub driver: Driver,
    /// Keep every accepted step in [`Trajectory::dense`].
    pub record_dense: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            blowup_threshold: 1e6,
            driver: Driver::SecondOrder,
            record_dense: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.rel_tol) && positive(self.abs_tol)) {
            return Err(Error::InvalidConfig("tolerances must be > 0".into()));
        }
        if !(positive(self.h_min) && self.h_init.is_finite() && self.h_min < self.h_init) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < h_min < h_init, got h_min = {}, h_init = {}",
                self.h_min, self.h_init
            )));
        }
        if !positive(self.blowup_threshold) {
            return Err(Error::InvalidConfig("blowup_threshold must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "tau")]
pub enum Termination {
    ReachedEnd,
    /// First accepted step with `|z| >= blowup_threshold`.
    BlowUp(f64),
    StepCollapse(f64),
    DriverNonPositive(f64),
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::ReachedEnd => "ReachedEnd",
            Termination::BlowUp(_) => "BlowUp",
            Termination::StepCollapse(_) => "StepCollapse",
            Termination::DriverNonPositive(_) => "DriverNonPositive",
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match *self {
            Termination::ReachedEnd => None,
            Termination::BlowUp(t)
            | Termination::StepCollapse(t)
            | Termination::DriverNonPositive(t) => Some(t),
        }
    }

    /// True when the run stopped for a numerical reason other than the
    /// expected divergence.
    pub fn is_failure(&self) -> bool {
        matches!(self, Termination::StepCollapse(_) | Termination::DriverNonPositive(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub n: i64,
    pub state: ExtendedState,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub accepted: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<GridSample>,
    pub dense: Option<Vec<ExtendedState>>,
    pub termination: Termination,
    pub stats: Stats,
    /// Last accepted state.
    pub last: ExtendedState,
}

impl Trajectory {
    /// Stored state at `τ = nπ`; grid points are exact step endpoints so no
    /// interpolation is involved.
    pub fn sample_at_grid(&self, n: i64) -> Result<ExtendedState> {
        let first = self.samples.first().map_or(0, |s| s.n);
        let last = self.samples.last().map_or(-1, |s| s.n);
        if n < first || n > last {
            return Err(Error::OutOfRange { n, first, last });
        }
        let sample = &self.samples[(n - first) as usize];
        debug_assert_eq!(sample.n, n);
        Ok(sample.state)
    }
}

pub fn sample_at_grid(traj: &Trajectory, n: i64) -> Result<ExtendedState> {
    traj.sample_at_grid(n)
}

fn grid_tau(n: i64) -> f64 {
    n as f64 * PI
}

struct Stepper<'a> {
    params: &'a SystemParams,
    driver: Driver,
    k: [[f64; 5]; STAGES],
    evals: u64,
}

enum StepOutcome {
    Done { y: [f64; 5], err: f64 },
    Driver,
}

impl Stepper<'_> {
    fn step(&mut self, tau: f64, y: &[f64; 5], h: f64, scale: impl Fn(f64, f64) -> f64) -> StepOutcome {
        for i in 0..STAGES {
            let mut yi = *y;
            for (j, kj) in self.k.iter().enumerate().take(i) {
                let a = A[i][j];
                if a != 0.0 {
                    for c in 0..5 {
                        yi[c] += h * a * kj[c];
                    }
                }
            }
            let st = ExtendedState::from_components(tau + C[i] * h, yi);
            self.evals += 1;
            match rhs_with(self.driver, &st, self.params) {
                Ok(d) => self.k[i] = d,
                Err(_) => return StepOutcome::Driver,
            }
        }
        let mut out = *y;
        let mut err = 0.0f64;
        for c in 0..5 {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for i in 0..STAGES {
                hi += B8[i] * self.k[i][c];
                lo += B7[i] * self.k[i][c];
            }
            out[c] += h * hi;
            let e = (h * (hi - lo)).abs() / scale(y[c], out[c]);
            err = err.max(e);
        }
        StepOutcome::Done { y: out, err }
    }
}

/// Integrate from [`initial_state`] to `tau_end`, recording the state at every
/// grid point `nπ <= tau_end`.
pub fn integrate(params: &SystemParams, config: &IntegratorConfig, tau_end: f64) -> Result<Trajectory> {
    params.validate()?;
    config.validate()?;
    if !(tau_end.is_finite() && tau_end > 0.0) {
        return Err(Error::InvalidConfig(format!("tau_end must be > 0, got {tau_end}")));
    }

    let start = initial_state(params);
    if !(start.y > crate::model::DRIVER_FLOOR) {
        return Err(Error::DriverNonPositive { tau: 0.0, y: start.y });
    }

    let mut stepper = Stepper { params, driver: config.driver, k: [[0.0; 5]; STAGES], evals: 0 };
    let scale = |a: f64, b: f64| config.abs_tol + config.rel_tol * a.abs().max(b.abs());

    let mut samples = vec![GridSample { n: 0, state: start }];
    let mut dense = config.record_dense.then(Vec::new);
    let mut stats = Stats::default();

    let mut tau = 0.0;
    let mut y = start.components();
    let mut h = config.h_init;
    let mut next_n: i64 = 1;

    let termination = loop {
        if tau >= tau_end {
            break Termination::ReachedEnd;
        }
        let grid = grid_tau(next_n);
        let target = grid.min(tau_end);
        let mut h_try = h;
        let mut lands = false;
        if tau + h_try >= target - 1e-12 * (1.0 + target.abs()) {
            h_try = target - tau;
            lands = true;
        }

        match stepper.step(tau, &y, h_try, scale) {
            StepOutcome::Driver => {
                stats.rejected += 1;
                h = 0.5 * h_try;
                if h < config.h_min {
                    break Termination::DriverNonPositive(tau);
                }
            }
            StepOutcome::Done { y: y_new, err } => {
                let finite = err.is_finite() && y_new.iter().all(|v| v.is_finite());
                if finite && err <= 1.0 {
                    stats.accepted += 1;
                    tau = if lands { target } else { tau + h_try };
                    y = y_new;
                    let state = ExtendedState::from_components(tau, y);
                    if let Some(d) = dense.as_mut() {
                        d.push(state);
                    }
                    if lands && target == grid {
                        samples.push(GridSample { n: next_n, state });
                        next_n += 1;
                    }
                    if y[3].abs() >= config.blowup_threshold {
                        break Termination::BlowUp(tau);
                    }
                    if !(y[0] > crate::model::DRIVER_FLOOR) {
                        break Termination::DriverNonPositive(tau);
                    }
                    let factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        (SAFETY * err.powf(-EXPONENT)).clamp(MIN_FACTOR, MAX_FACTOR)
                    };
                    // a step shortened to land on the grid should not shrink the next one
                    h = if lands { h.max(h_try * factor) } else { h_try * factor };
                } else {
                    stats.rejected += 1;
                    let factor = if finite {
                        (SAFETY * err.powf(-EXPONENT)).clamp(MIN_FACTOR, 1.0)
                    } else {
                        MIN_FACTOR
                    };
                    h = h_try * factor;
                    if h < config.h_min {
                        break Termination::StepCollapse(tau);
                    }
                }
            }
        }
    };
    stats.rhs_evals = stepper.evals;

    Ok(Trajectory {
        samples,
        dense,
        termination,
        stats,
        last: ExtendedState::from_components(tau, y),
    })
}
