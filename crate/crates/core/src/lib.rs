//! Invariant-tube rupture prediction for the oscillator
//! `z'' + z + y^{-5/2} z² = 0` driven by `y''' + 4y' = ε y^{-5/2} cos τ`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod cubic;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod invariant;
pub mod io;
pub mod model;
pub mod rupture;

pub use error::{Error, Result};
pub use integrator::{integrate, IntegratorConfig, Termination, Trajectory};
pub use model::{Driver, ExtendedState, SystemParams};
pub use rupture::{predict, RuptureReport};
