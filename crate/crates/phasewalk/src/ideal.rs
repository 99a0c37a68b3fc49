//! The ideal walker/coin model: a discrete-time quantum walk on a circle of
//! oscillator phases.
//!
//! One step is a Hadamard flip of the two-level coin followed by a
//! coin-conditioned rotation of the walker phase: `E(Δθ) · (I ⊗ H)` with
//! `E = exp(i n̂ σ_z Δθ)`, i.e. coin |0⟩ rotates the walker by +Δθ and coin
//! |1⟩ by −Δθ. The walker starts in a truncated coherent state, so its phase
//! distribution begins as a single peak that the walk splits and spreads
//! ballistically until the two fronts meet on the far side of the circle.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::quantum::{coherent_state, tensor, tensor_state, StateVector, UnitaryOperator, C64};

/// Parameters of an ideal walk run.
#[derive(Debug, Clone)]
pub struct IdealWalkConfig {
    /// Fock truncation of the walker space.
    pub fock_dim: usize,
    /// Per-step conditional phase rotation in rad.
    pub delta_theta: f64,
    /// Number of steps to evolve.
    pub steps: usize,
    /// Coherent-state amplitude of the initial walker.
    pub alpha: C64,
    /// Initial coin amplitudes (|0⟩, |1⟩); need not be pre-normalized.
    pub coin: [C64; 2],
}

impl Default for IdealWalkConfig {
    /// The worked operating point used throughout the examples: Δθ = 0.3,
    /// α = 3 (mean photon number 9), 25 steps, and the balanced coin
    /// (|0⟩ + i|1⟩)/√2 that keeps the distribution symmetric.
    fn default() -> Self {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            fock_dim: 64,
            delta_theta: 0.3,
            steps: 25,
            alpha: C64::new(3.0, 0.0),
            coin: [
                C64::new(inv_sqrt2, 0.0),
                C64::new(0.0, inv_sqrt2),
            ],
        }
    }
}

/// The 2×2 Hadamard coin (1/√2)[[1, 1], [1, −1]].
pub fn hadamard_coin() -> DMatrix<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(h, 0.0),
            C64::new(-h, 0.0),
        ],
    )
}

/// The conditional phase rotation `E = exp(i n̂ σ_z Δθ)` on walker ⊗ coin:
/// diagonal with entry e^{+inΔθ} at (n, coin 0) and e^{−inΔθ} at (n, coin 1).
pub fn conditional_phase(fock_dim: usize, delta_theta: f64) -> DMatrix<C64> {
    let dim = 2 * fock_dim;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..fock_dim {
        let phase = delta_theta * n as f64;
        m[(2 * n, 2 * n)] = C64::from_polar(1.0, phase);
        m[(2 * n + 1, 2 * n + 1)] = C64::from_polar(1.0, -phase);
    }
    m
}

/// One full walk step `E(Δθ) · (I ⊗ H)` as a unitary on walker ⊗ coin.
pub fn walk_step(fock_dim: usize, delta_theta: f64) -> UnitaryOperator {
    let coin_flip = tensor(&DMatrix::identity(fock_dim, fock_dim), &hadamard_coin());
    let step = conditional_phase(fock_dim, delta_theta) * coin_flip;
    UnitaryOperator::new_unchecked(step)
}

/// Run the walk, returning the state after every step (index 0 is the
/// initial state, so the result has `steps + 1` entries).
pub fn run_ideal(cfg: &IdealWalkConfig) -> Result<Vec<StateVector>> {
    let walker = coherent_state(cfg.alpha, cfg.fock_dim)?.state;
    let coin_norm = (cfg.coin[0].norm_sqr() + cfg.coin[1].norm_sqr()).sqrt();
    let coin = [cfg.coin[0] / coin_norm, cfg.coin[1] / coin_norm];
    let mut psi = tensor_state(&walker, &coin)?;
    let step = walk_step(cfg.fock_dim, cfg.delta_theta);
    let mut states = Vec::with_capacity(cfg.steps + 1);
    states.push(psi.clone());
    for _ in 0..cfg.steps {
        psi = step.apply(&psi)?;
        states.push(psi.clone());
    }
    Ok(states)
}

/// One walk step computed amplitude-by-amplitude, never building a matrix.
///
/// Slow reference path used to cross-check the matrix engine: applies the
/// Hadamard flip and the conditional phase via explicit per-amplitude
/// formulas.
pub fn oracle_step(psi: &StateVector, delta_theta: f64) -> StateVector {
    assert_eq!(psi.coin_dim(), 2, "oracle_step requires a two-level coin");
    let d = psi.walker_dim();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = DVector::zeros(2 * d);
    for n in 0..d {
        let up = psi.amp(n, 0);
        let down = psi.amp(n, 1);
        let flipped0 = (up + down) * inv_sqrt2;
        let flipped1 = (up - down) * inv_sqrt2;
        let phase = delta_theta * n as f64;
        amps[2 * n] = flipped0 * C64::from_polar(1.0, phase);
        amps[2 * n + 1] = flipped1 * C64::from_polar(1.0, -phase);
    }
    StateVector::new_unchecked(amps, d, 2)
}
