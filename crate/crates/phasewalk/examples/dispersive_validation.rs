//! How trustworthy is the effective model? One-step fidelity between the
//! untruncated rotating-frame evolution and the dispersive effective model.
//!
//! The effective Hamiltonian replaces the qubit–resonator exchange
//! g(a†σ₋ + aσ₊) with the conditional phase shift χ a†a σ_z, valid when the
//! detuning dominates the coupling (|δ|/g ≫ 1) and the photon number is
//! modest. The comparison dresses the initial state with the second-order
//! transformation, evolves one full walk step under both models, and
//! maximizes the overlap over the frame registrations (a θ·n̂ rotation and a
//! coin phase) that carry no walk information. At the worked operating
//! point (ratio 20) one step keeps F ≳ 0.97; at ratio 4 the approximation
//! collapses.
//!
//! Run with `cargo run --release --example dispersive_validation`.

use phasewalk::config::{EngineKind, ExperimentConfig};
use phasewalk::runner::validate_dispersive;

fn main() {
    let base = ExperimentConfig {
        engine: EngineKind::Cqed,
        ..ExperimentConfig::default()
    };

    println!("coupling g   |δ|/g   dispersive?   one-step fidelity");
    for g in [0.005, 0.01, 0.05] {
        let cfg = ExperimentConfig {
            g,
            allow_nondispersive: true,
            ..base.clone()
        };
        let v = validate_dispersive(&cfg).expect("validation runs");
        println!(
            "  {g:<9}  {:5.1}   {}          {:.4}",
            v.ratio,
            if v.ratio_ok { "yes" } else { "no " },
            v.fidelity
        );
    }

    println!();
    println!("The residual infidelity at the worked point is a real property of");
    println!("the effective model, not a frame artifact: the true conditional");
    println!("phase rate at ⟨n̂⟩ = 9 sits ≈ 5% below χ (the next order in");
    println!("(g/δ)² is photon-number dependent), and the mismatch compounds");
    println!("over the free segment.");
}
