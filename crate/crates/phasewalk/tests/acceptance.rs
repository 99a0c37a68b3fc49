//! End-to-end acceptance checks, one per guaranteed behavior of the crate.
//!
//! Each test prints a single `[PASS]`/`[FAIL]` line with the measured values
//! and the pinned tolerance. To see the lines in order, run
//!
//! ```text
//! cargo test --test acceptance -- --test-threads=1 --nocapture
//! ```

use std::time::Instant;

use phasewalk::config::{EngineKind, ExperimentConfig};
use phasewalk::cqed::{build_effective, build_refocused_pulse, make_schedule, CqedParams};
use phasewalk::ideal::{oracle_step, run_ideal, walk_step, IdealWalkConfig};
use phasewalk::quantum::{propagator, unitarity_deviation, C64};
use phasewalk::runner::{run_experiment, run_sweep, validate_dispersive, RunResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(name: &str, ok: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn fmt3(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", items.join(", "))
}

#[test]
fn a01_norm_conservation_and_unitary_propagators() {
    let t0 = Instant::now();
    let ideal = run_experiment(&ExperimentConfig::default()).unwrap();
    let cqed = run_experiment(&ExperimentConfig {
        engine: EngineKind::Cqed,
        ..ExperimentConfig::default()
    })
    .unwrap();
    let worst_norm = ideal
        .norm_errors
        .iter()
        .chain(&cqed.norm_errors)
        .cloned()
        .fold(0.0, f64::max);

    let p = CqedParams {
        fock_dim: 128,
        ..CqedParams::default()
    };
    let sched = make_schedule(&p, 0.3, std::f64::consts::FRAC_PI_4).unwrap();
    let pulse = propagator(&build_refocused_pulse(&p), sched.t_pulse).unwrap();
    let free = propagator(
        &build_effective(&CqedParams { epsilon: 0.0, ..p }),
        sched.t_free,
    )
    .unwrap();
    let worst_unitarity = [
        unitarity_deviation(pulse.matrix()),
        unitarity_deviation(free.matrix()),
        unitarity_deviation(walk_step(128, 0.3).matrix()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let secs = t0.elapsed().as_secs_f64();

    let ok = worst_norm < 1e-8 && worst_unitarity < 1e-9 && secs < 5.0;
    check(
        "01 norm conservation and unitary propagators",
        ok,
        &format!(
            "worst norm error over 25 steps of both engines {worst_norm:.2e} (< 1e-8), \
             worst propagator unitarity deviation at 128 levels {worst_unitarity:.2e} (< 1e-9), \
             {secs:.2} s (< 5 s)"
        ),
    );
}

#[test]
fn a02_ideal_walk_spreads_ballistically() {
    let t0 = Instant::now();
    let res = run_experiment(&ExperimentConfig::default()).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let fit = res.fit.as_ref().unwrap();
    let ok = (0.9..=1.1).contains(&fit.zeta) && secs < 2.0;
    check(
        "02 ideal walk spreads ballistically",
        ok,
        &format!(
            "zeta = {:.4} over even steps {:?} (within [0.9, 1.1]), {secs:.2} s (< 2 s)",
            fit.zeta, fit.steps_used
        ),
    );
}

#[test]
fn a03_spread_peaks_when_fronts_meet() {
    let res = run_experiment(&ExperimentConfig::default()).unwrap();
    let (argmax, max) = res
        .sigma
        .iter()
        .cloned()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let last = res.sigma[25].1;
    let ok = (12..=18).contains(&argmax) && last < max;
    check(
        "03 spread peaks when the fronts meet",
        ok,
        &format!(
            "sigma max {max:.4} at step {argmax} (within 12..=18), \
             sigma(25) = {last:.4} (< max)"
        ),
    );
}

#[test]
fn a04_exponent_decreases_across_drive_sweep() {
    let t0 = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let sweep = run_sweep(
        &ExperimentConfig {
            engine: EngineKind::Cqed,
            ..ExperimentConfig::default()
        },
        dir.path(),
    )
    .unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let targets = [1.0, 0.89, 0.64, 0.53];
    let within = sweep
        .zetas
        .iter()
        .zip(targets)
        .all(|(z, t)| (z - t).abs() <= 0.2);
    let ok = sweep.monotone_decreasing && within && secs < 30.0;
    check(
        "04 exponent decreases across the drive sweep",
        ok,
        &format!(
            "zetas {} (strictly decreasing = {}), all within 0.2 of {targets:?}, \
             {secs:.2} s (< 30 s)",
            fmt3(&sweep.zetas),
            sweep.monotone_decreasing
        ),
    );
}

#[test]
fn a05_interference_peaks_flatten_with_stronger_drive() {
    let run_at = |eps: f64| -> RunResult {
        run_experiment(&ExperimentConfig {
            engine: EngineKind::Cqed,
            epsilon: eps,
            steps: 6,
            ..ExperimentConfig::default()
        })
        .unwrap()
    };
    let weak = run_at(0.01);
    let strong = run_at(0.012);
    let peak = |r: &RunResult| r.distributions[4].probs.iter().cloned().fold(0.0, f64::max);
    let (p_weak, p_strong) = (peak(&weak), peak(&strong));
    let m_weak = weak.distributions[4].dominant_maxima(0.1).len();
    let m_strong = strong.distributions[4].dominant_maxima(0.1).len();
    let ok = p_strong < p_weak && m_weak == 3 && m_strong == 3;
    check(
        "05 interference peaks flatten with stronger drive",
        ok,
        &format!(
            "step-4 peak {p_strong:.5} at eps = 0.012 < {p_weak:.5} at eps = 0.01, \
             dominant maxima {m_weak} and {m_strong} (both 3 at a 0.1 height fraction)"
        ),
    );
}

#[test]
fn a06_classical_baseline_is_diffusive() {
    let t0 = Instant::now();
    let res = run_experiment(&ExperimentConfig {
        engine: EngineKind::Classical,
        steps: 10,
        ..ExperimentConfig::default()
    })
    .unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let fit = res.fit.as_ref().unwrap();
    let ok = (fit.zeta - 0.5).abs() <= 0.02 && secs < 1.0;
    check(
        "06 classical baseline is diffusive",
        ok,
        &format!(
            "zeta = {:.4} over steps {:?} (within 0.5 ± 0.02), {secs:.2} s (< 1 s)",
            fit.zeta, fit.steps_used
        ),
    );
}

#[test]
fn a07_dispersive_validity_tracks_coupling_ratio() {
    let base = ExperimentConfig {
        engine: EngineKind::Cqed,
        ..ExperimentConfig::default()
    };
    let good = validate_dispersive(&base).unwrap();
    let strong = validate_dispersive(&ExperimentConfig {
        g: 0.05,
        allow_nondispersive: true,
        ..base.clone()
    })
    .unwrap();
    let ok = good.fidelity >= 0.95
        && good.ratio_ok
        && strong.fidelity < good.fidelity
        && !strong.ratio_ok;
    check(
        "07 dispersive validity tracks the coupling ratio",
        ok,
        &format!(
            "one-step fidelity {:.4} at detuning ratio {:.0} (>= 0.95), \
             {:.4} at ratio {:.0} (strictly lower)",
            good.fidelity, good.ratio, strong.fidelity, strong.ratio
        ),
    );
}

#[test]
fn a08_matrix_engine_matches_amplitude_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let fock_dim = rng.gen_range(8..=32);
        let steps = rng.gen_range(1..=10);
        let delta_theta = rng.gen_range(0.05..1.0);
        // Keep |α| small enough that the coherent tail beyond fock_dim stays
        // under the truncation limit for every draw.
        let radius = rng.gen_range(0.0..0.25 * (fock_dim as f64).sqrt());
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let coin = [
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ];
        let cfg = IdealWalkConfig {
            fock_dim,
            delta_theta,
            steps,
            alpha: C64::from_polar(radius, angle),
            coin,
        };
        let states = run_ideal(&cfg).unwrap();
        let mut oracle = states[0].clone();
        for _ in 0..steps {
            oracle = oracle_step(&oracle, delta_theta);
        }
        let dev = (states.last().unwrap().amplitudes() - oracle.amplitudes())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    let ok = worst <= 1e-10;
    check(
        "08 matrix engine matches the amplitude oracle",
        ok,
        &format!(
            "20 seeded random configurations, worst per-amplitude deviation \
             {worst:.2e} (<= 1e-10)"
        ),
    );
}

#[test]
fn a09_sweep_reruns_are_byte_identical() {
    let cfg = ExperimentConfig {
        engine: EngineKind::Cqed,
        ..ExperimentConfig::default()
    };
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let r1 = run_sweep(&cfg, d1.path()).unwrap();
    let r2 = run_sweep(&cfg, d2.path()).unwrap();
    let mut compared = 0usize;
    let mut identical = true;
    for name in ["sweep.csv", "sweep.toml"] {
        let a = std::fs::read(d1.path().join(name)).unwrap();
        let b = std::fs::read(d2.path().join(name)).unwrap();
        identical &= a == b;
        compared += 1;
    }
    for (dir1, dir2) in r1.run_dirs.iter().zip(&r2.run_dirs) {
        for name in ["distribution.csv", "sigma.csv", "fit.toml", "manifest.toml"] {
            let a = std::fs::read(dir1.join(name)).unwrap();
            let b = std::fs::read(dir2.join(name)).unwrap();
            identical &= a == b;
            compared += 1;
        }
    }
    check(
        "09 sweep reruns are byte-identical",
        identical,
        &format!("{compared} files compared across two full sweeps, identical = {identical}"),
    );
}
