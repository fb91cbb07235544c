//! Nonlinear dynamics of aggregate educational choice with imitative
//! followers, positional agents and an endogenous wage premium.
//!
//! * [`model`]: parameters, preference weights, shares, indirect utilities
//!   and their derivatives.
//! * [`map1d`]: the enrolment map with a fixed population mix.
//! * [`map2d`]: the joint enrolment / follower-share map with logit switching.
//! * [`analysis`]: sweeps, Lyapunov exponents, period detection, cobwebs.
//! * [`config`], [`experiment`] and [`output`]: run configuration, dispatch
//!   and CSV output for the command-line tool.

pub mod analysis;
pub mod config;
pub mod error;
pub mod experiment;
pub mod map1d;
pub mod map2d;
pub mod model;
pub mod output;

pub use error::{ModelError, Result};
pub use model::{ModelParams, Param, PopulationMix, Tolerances};
