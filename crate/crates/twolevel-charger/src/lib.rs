//! Modeling, analysis, control synthesis and time-domain simulation of a
//! non-ideal two-level (buck-type) battery charger.
//!
//! The power stage feeds a Thevenin battery (EMF behind an internal
//! resistance) through an LC filter; every conduction parasitic is kept:
//! MOSFET on-resistance, inductor and capacitor ESR. The crate covers the
//! full desk workflow for such a charger:
//!
//! - [`model`] — plant parameters, per-interval switched dynamics, the
//!   duty-averaged model, DC equilibria and the small-signal state space;
//! - [`analysis`] — efficiency, L/C sizing against ripple bounds, the
//!   duty-to-battery-current transfer function, Bode/crossover data, root
//!   locus, closed-loop step response, and parasitic sweep surfaces;
//! - [`control`] — PI design by the crossover-placement rule, the discrete
//!   PI runtime with anti-windup, and the trailing-edge PWM modulator;
//! - [`sim`] — fixed-step Runge–Kutta simulation of the switched (PWM,
//!   closed-loop) and averaged models over event scenarios, with ripple,
//!   settling and cycle-average metrics;
//! - [`cli`] — configuration loading and the `twolevel-charger` command-line
//!   tool producing plot-ready CSV and JSON artifacts.
//!
//! Every type is a plain value and every operation is a pure function of its
//! arguments (the PI state is owned by a single simulation run), so anything
//! here can be evaluated concurrently without coordination.
//!
//! The `examples/` directory is the best starting point; each example is a
//! runnable walkthrough of one capability.

pub mod analysis;
pub mod cli;
pub mod control;
pub mod error;
pub mod model;
mod poly;
pub mod sim;

pub use error::{Error, Result};
