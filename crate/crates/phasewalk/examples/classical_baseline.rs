//! The exact classical baseline: a fair-coin ±Δθ random walk wrapped onto
//! the phase circle.
//!
//! The unwrapped spread after t steps is exactly Δθ√t, so the log-log fit
//! recovers ζ = 1/2 — the diffusive floor the driven quantum walk degrades
//! toward. Distributions are exact wrapped binomials, not sampled, so the
//! baseline is deterministic and instantaneous.
//!
//! Run with `cargo run --release --example classical_baseline`.

use phasewalk::config::{EngineKind, ExperimentConfig};
use phasewalk::runner::run_experiment;

fn main() {
    let cfg = ExperimentConfig {
        engine: EngineKind::Classical,
        ..ExperimentConfig::default()
    };
    let res = run_experiment(&cfg).expect("classical baseline runs");

    println!("classical ±Δθ random walk, Δθ = {}:\n", cfg.delta_theta);
    println!("step   σ (rad)   Δθ·√t");
    for &(t, sigma) in res.sigma.iter().take(11) {
        let unwrapped = cfg.delta_theta * (t as f64).sqrt();
        println!("{t:4}   {sigma:7.4}   {unwrapped:7.4}");
    }

    let fit = res.fit.as_ref().expect("default fit window has enough points");
    println!("\nln σ = ζ ln t + ξ over steps {:?}:", fit.steps_used);
    println!("  ζ = {:.4}  (diffusion: exactly 1/2 before wrap-around)", fit.zeta);
}
