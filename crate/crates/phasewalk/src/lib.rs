//! Discrete-time quantum walk on a circle in phase space, two ways:
//!
//! * [`ideal`] — the textbook walker/coin model: a Hadamard coin flip
//!   followed by a coin-conditioned rotation of the oscillator phase, applied
//!   to a truncated coherent state.
//! * [`cqed`] — a physically motivated realization: a driven two-level
//!   system dispersively coupled to a resonator, evolved segment-by-segment
//!   under piecewise-constant Hamiltonians, where drive imperfections turn
//!   the quantum walk into a classical random walk.
//!
//! [`analysis`] extracts phase distributions, circular spreads σ, and the
//! spreading exponent ζ from ln σ = ζ ln t + ξ (ζ = 1 ballistic quantum
//! walk, ζ = 1/2 diffusive classical walk). [`runner`] orchestrates full
//! experiments with reproducible file outputs; the `phasewalk` binary is a
//! thin command-line wrapper over it.
//!
//! Start with the runnable examples (`cargo run --release --example …`):
//! each major capability has one.

pub mod analysis;
pub mod cqed;
pub mod error;
pub mod ideal;
pub mod quantum;

pub use error::{Error, Result};

pub mod config;
pub mod runner;

pub use quantum::C64;
