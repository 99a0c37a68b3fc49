//! Run pipeline: dispatch a configured experiment to its engine, analyze the
//! trajectory, and write artifacts.
//!
//! Artifacts are deterministic down to the byte: rerunning the same config
//! writes identical files. Floats are written with 17 significant digits
//! (`{:.16e}`), which round-trips every f64 exactly, so a manifest's
//! `[config]` table reloads to the exact run configuration.
//!
//! Files per run directory:
//! - `distribution.csv` — header `theta,step_0,…,step_N`; one row per grid
//!   point; circuit-QED states are counter-rotated by the drive–resonator
//!   detuning frame (−δ₂ n̂) before sampling, so distributions from both
//!   engines live in the same frame.
//! - `sigma.csv` — header `step,sigma`; circular spread per step.
//! - `fit.toml` — the ln σ vs ln t fit (ζ, ξ, window, residuals).
//! - `manifest.toml` — `[config]` (resolved), `[derived]`, `[fit]`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{
    circular_std, circular_std_about, classical_rw_distribution, fit_power_law,
    phase_distribution,
    phase_distribution_renormalized, reduce_walker, PhaseDistribution, PowerLawFit,
};
use crate::config::{EngineKind, ExperimentConfig};
use crate::cqed::{
    compensated_schedule, dispersive_fidelity, initial_state, make_schedule, run_cqed_compensated,
    run_cqed_with, EngineOptions, PulseSchedule,
};
use crate::error::{Error, Result};
use crate::ideal::{run_ideal, IdealWalkConfig};
use crate::quantum::{angular, StateVector, C64};

/// Format a float with 17 significant digits; parses back to the same f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Everything produced by one run, before any files are written.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Fully resolved configuration (every optional made explicit).
    pub config: ExperimentConfig,
    /// Phase distribution per step (index 0 is the initial state).
    pub distributions: Vec<PhaseDistribution>,
    /// Circular spread per step.
    pub sigma: Vec<(usize, f64)>,
    /// ln σ vs ln t fit, or the reason it was skipped (e.g. too few points).
    pub fit: std::result::Result<PowerLawFit, String>,
    /// Mean photon number per step; empty for the classical engine.
    pub mean_photon: Vec<f64>,
    /// Norm error per step; empty for the classical engine.
    pub norm_errors: Vec<f64>,
    /// Pulse schedule; present for the circuit-QED engine.
    pub schedule: Option<PulseSchedule>,
}

impl RunResult {
    /// Fitted spreading exponent, if the fit succeeded.
    pub fn zeta(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.zeta)
    }
}

/// Run one experiment in memory. IO-free; pair with [`write_artifacts`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let resolved = cfg.resolved();
    let s = cfg.grid();
    match cfg.engine {
        EngineKind::Classical => {
            let distributions: Vec<PhaseDistribution> = (0..=cfg.steps)
                .map(|t| classical_rw_distribution(t, cfg.delta_theta, s))
                .collect();
            finish(resolved, distributions, Vec::new(), Vec::new(), None)
        }
        EngineKind::Ideal => {
            let states = run_ideal(&IdealWalkConfig {
                fock_dim: cfg.fock_dim,
                delta_theta: cfg.delta_theta,
                steps: cfg.steps,
                alpha: C64::new(cfg.alpha, 0.0),
                coin: cfg.coin_state(),
            })?;
            let distributions = states
                .iter()
                .map(|st| sample_distribution(st, s))
                .collect::<Result<Vec<_>>>()?;
            let (mean_photon, norm_errors) = state_diagnostics(&states);
            finish(resolved, distributions, mean_photon, norm_errors, None)
        }
        EngineKind::Cqed => {
            let p = cfg.cqed_params();
            // Pulse timings come from the calibration amplitude, which a
            // sweep holds fixed while the actual drive ε varies.
            let mut cal = p;
            cal.epsilon = cfg.schedule_epsilon();
            let schedule = make_schedule(&cal, cfg.delta_theta, cfg.coin_angle)?;
            let initial = initial_state(&p, C64::new(cfg.alpha, 0.0), cfg.coin_state())?;
            let opts = EngineOptions {
                pulse_model: cfg.pulse_model.into(),
                zero_displacement: false,
            };
            let states = if cfg.compensate {
                run_cqed_compensated(&p, cfg.delta_theta, cfg.coin_angle, cfg.steps, &initial, &opts)?
            } else {
                run_cqed_with(&p, &schedule, cfg.steps, &initial, &opts)?
            };
            let angles = frame_angles(cfg, &states)?;
            let distributions = states
                .iter()
                .zip(&angles)
                .map(|(st, &angle)| sample_distribution(&st.rotate_phase(angle), s))
                .collect::<Result<Vec<_>>>()?;
            let (mean_photon, norm_errors) = state_diagnostics(&states);
            finish(resolved, distributions, mean_photon, norm_errors, Some(schedule))
        }
    }
}

/// Counter-rotation angle per step undoing the −δ₂ n̂ frame term. For
/// compensated runs the drive retunes each step, so the per-step δ₂ sequence
/// is replayed from the stored states exactly as the engine derived it.
fn frame_angles(cfg: &ExperimentConfig, states: &[StateVector]) -> Result<Vec<f64>> {
    let p = cfg.cqed_params();
    if !cfg.compensate {
        let mut cal = p;
        cal.epsilon = cfg.schedule_epsilon();
        let schedule = make_schedule(&cal, cfg.delta_theta, cfg.coin_angle)?;
        let per_step = -angular(p.delta2()) * schedule.step_duration();
        return Ok((0..states.len()).map(|t| per_step * t as f64).collect());
    }
    let mut angles = Vec::with_capacity(states.len());
    let mut acc = 0.0;
    angles.push(acc);
    for state in &states[..states.len() - 1] {
        let (retuned, schedule) =
            compensated_schedule(&p, cfg.delta_theta, cfg.coin_angle, state.mean_photon())?;
        acc += -angular(retuned.delta2()) * schedule.step_duration();
        angles.push(acc);
    }
    Ok(angles)
}

fn sample_distribution(state: &StateVector, s: usize) -> Result<PhaseDistribution> {
    let rho = reduce_walker(state);
    if s == state.walker_dim() {
        phase_distribution(&rho, s)
    } else {
        Ok(phase_distribution_renormalized(&rho, s))
    }
}

fn state_diagnostics(states: &[StateVector]) -> (Vec<f64>, Vec<f64>) {
    let mean_photon = states.iter().map(|st| st.mean_photon()).collect();
    let norm_errors = states.iter().map(|st| st.norm_error()).collect();
    (mean_photon, norm_errors)
}

fn finish(
    config: ExperimentConfig,
    distributions: Vec<PhaseDistribution>,
    mean_photon: Vec<f64>,
    norm_errors: Vec<f64>,
    schedule: Option<PulseSchedule>,
) -> Result<RunResult> {
    // Spread is measured about the launch angle (the circular mean at step
    // 0), held fixed for the whole trajectory; see `circular_std_about`.
    let center = distributions
        .first()
        .map(|d| circular_std(d).mean)
        .unwrap_or(0.0);
    let sigma: Vec<(usize, f64)> = distributions
        .iter()
        .enumerate()
        .map(|(t, d)| (t, circular_std_about(d, center).sigma))
        .collect();
    let (lo, hi) = config.fit_window();
    // Clamp the window to the steps actually run so short runs still fit.
    let window = (lo, hi.min(config.steps));
    let fit =
        fit_power_law(&sigma, window, config.fit_even_only()).map_err(|e| e.to_string());
    Ok(RunResult {
        config,
        distributions,
        sigma,
        fit,
        mean_photon,
        norm_errors,
        schedule,
    })
}

/// Write `distribution.csv`, `sigma.csv`, `fit.toml`, and `manifest.toml`
/// into `dir` (created if needed).
pub fn write_artifacts(res: &RunResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_file(&dir.join("distribution.csv"), &distribution_csv(res))?;
    write_file(&dir.join("sigma.csv"), &sigma_csv(res))?;
    write_file(&dir.join("fit.toml"), &fit_toml(res))?;
    write_file(&dir.join("manifest.toml"), &manifest_toml(res))?;
    Ok(())
}

/// [`run_experiment`] + [`write_artifacts`].
pub fn run_to_dir(cfg: &ExperimentConfig, dir: &Path) -> Result<RunResult> {
    let res = run_experiment(cfg)?;
    write_artifacts(&res, dir)?;
    Ok(res)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn distribution_csv(res: &RunResult) -> String {
    let steps = res.distributions.len();
    let s = res.distributions[0].s();
    let mut out = String::from("theta");
    for t in 0..steps {
        write!(out, ",step_{t}").unwrap();
    }
    out.push('\n');
    for j in 0..s {
        out.push_str(&fmt_g17(res.distributions[0].thetas[j]));
        for dist in &res.distributions {
            out.push(',');
            out.push_str(&fmt_g17(dist.probs[j]));
        }
        out.push('\n');
    }
    out
}

fn sigma_csv(res: &RunResult) -> String {
    let mut out = String::from("step,sigma\n");
    for &(t, sigma) in &res.sigma {
        writeln!(out, "{t},{}", fmt_g17(sigma)).unwrap();
    }
    out
}

fn fit_body(fit: &std::result::Result<PowerLawFit, String>) -> String {
    match fit {
        Ok(f) => {
            let mut out = String::new();
            writeln!(out, "zeta = {}", fmt_g17(f.zeta)).unwrap();
            writeln!(out, "xi = {}", fmt_g17(f.xi)).unwrap();
            writeln!(out, "window = [{}, {}]", f.window.0, f.window.1).unwrap();
            writeln!(out, "steps_used = {}", usize_array(&f.steps_used)).unwrap();
            writeln!(out, "residual_rms = {}", fmt_g17(f.residual_rms)).unwrap();
            out
        }
        Err(reason) => format!("skipped = {}\n", toml_string(reason)),
    }
}

fn fit_toml(res: &RunResult) -> String {
    fit_body(&res.fit)
}

fn manifest_toml(res: &RunResult) -> String {
    let c = &res.config;
    let mut out = String::from("[config]\n");
    writeln!(out, "engine = \"{}\"", c.engine.as_str()).unwrap();
    writeln!(out, "steps = {}", c.steps).unwrap();
    writeln!(out, "delta_theta = {}", fmt_g17(c.delta_theta)).unwrap();
    writeln!(out, "fock_dim = {}", c.fock_dim).unwrap();
    writeln!(out, "grid = {}", c.grid()).unwrap();
    writeln!(out, "alpha = {}", fmt_g17(c.alpha)).unwrap();
    writeln!(
        out,
        "coin = [[{}, {}], [{}, {}]]",
        fmt_g17(c.coin[0][0]),
        fmt_g17(c.coin[0][1]),
        fmt_g17(c.coin[1][0]),
        fmt_g17(c.coin[1][1])
    )
    .unwrap();
    writeln!(out, "omega_q = {}", fmt_g17(c.omega_q)).unwrap();
    writeln!(out, "omega_c = {}", fmt_g17(c.omega_c)).unwrap();
    writeln!(out, "g = {}", fmt_g17(c.g)).unwrap();
    writeln!(out, "omega_d = {}", fmt_g17(c.omega_d())).unwrap();
    writeln!(out, "epsilon = {}", fmt_g17(c.epsilon)).unwrap();
    writeln!(out, "coin_angle = {}", fmt_g17(c.coin_angle)).unwrap();
    let pulse_model = match c.pulse_model {
        crate::config::PulseModelConfig::Refocused => "refocused",
        crate::config::PulseModelConfig::Full => "full",
    };
    writeln!(out, "pulse_model = \"{pulse_model}\"").unwrap();
    writeln!(out, "allow_nondispersive = {}", c.allow_nondispersive).unwrap();
    writeln!(out, "compensate = {}", c.compensate).unwrap();
    writeln!(out, "schedule_epsilon = {}", fmt_g17(c.schedule_epsilon())).unwrap();
    let (lo, hi) = c.fit_window();
    writeln!(out, "fit_window = [{lo}, {hi}]").unwrap();
    writeln!(out, "fit_even_only = {}", c.fit_even_only()).unwrap();
    writeln!(out, "sweep_epsilons = {}", f64_array(&c.sweep_epsilons)).unwrap();

    out.push_str("\n[derived]\n");
    if let Some(schedule) = &res.schedule {
        let p = c.cqed_params();
        writeln!(out, "delta = {}", fmt_g17(p.delta())).unwrap();
        writeln!(out, "delta1 = {}", fmt_g17(p.delta1())).unwrap();
        writeln!(out, "delta2 = {}", fmt_g17(p.delta2())).unwrap();
        writeln!(out, "chi = {}", fmt_g17(p.chi())).unwrap();
        writeln!(out, "omega2 = {}", fmt_g17(p.omega2())).unwrap();
        writeln!(out, "dispersive_ratio = {}", fmt_g17(p.dispersive_ratio())).unwrap();
        writeln!(out, "t_pulse_ns = {}", fmt_g17(schedule.t_pulse)).unwrap();
        writeln!(out, "t_free_ns = {}", fmt_g17(schedule.t_free)).unwrap();
        writeln!(out, "step_duration_ns = {}", fmt_g17(schedule.step_duration())).unwrap();
        writeln!(
            out,
            "total_time_ns = {}",
            fmt_g17(schedule.step_duration() * c.steps as f64)
        )
        .unwrap();
        writeln!(
            out,
            "frame_derotation_per_step = {}",
            fmt_g17(-angular(p.delta2()) * schedule.step_duration())
        )
        .unwrap();
    }
    if !res.norm_errors.is_empty() {
        writeln!(
            out,
            "final_norm_error = {}",
            fmt_g17(*res.norm_errors.last().unwrap())
        )
        .unwrap();
        writeln!(out, "mean_photon = {}", f64_array(&res.mean_photon)).unwrap();
    }
    writeln!(
        out,
        "final_sigma = {}",
        fmt_g17(res.sigma.last().map(|&(_, s)| s).unwrap())
    )
    .unwrap();

    out.push_str("\n[fit]\n");
    out.push_str(&fit_body(&res.fit));
    out
}

fn f64_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| fmt_g17(x)).collect();
    format!("[{}]", items.join(", "))
}

fn usize_array(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn toml_string(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Outcome of a drive-amplitude sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub epsilons: Vec<f64>,
    pub zetas: Vec<f64>,
    pub run_dirs: Vec<PathBuf>,
    /// Whether ζ strictly decreases with ε across the sweep.
    pub monotone_decreasing: bool,
}

/// Run the configured drive-amplitude sweep: one run directory per ε plus
/// `sweep.csv` and `sweep.toml` summaries in `out_dir`. Runs execute in
/// parallel; outputs are position-stable and deterministic.
pub fn run_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<SweepResult> {
    if cfg.engine != EngineKind::Cqed {
        return Err(Error::Config(format!(
            "sweep requires engine = \"cqed\", got \"{}\"",
            cfg.engine.as_str()
        )));
    }
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let runs: Vec<(f64, PathBuf, RunResult)> = cfg
        .sweep_epsilons
        .par_iter()
        .enumerate()
        .map(|(i, &epsilon)| {
            let dir = out_dir.join(format!("eps_{i:02}_{epsilon:.6}"));
            // Calibrate pulse timings once, at the base amplitude, and keep
            // them fixed across the sweep; only the drive strength varies.
            let sub = ExperimentConfig {
                epsilon,
                schedule_epsilon: Some(cfg.schedule_epsilon()),
                ..cfg.clone()
            };
            let res = run_to_dir(&sub, &dir)?;
            Ok((epsilon, dir, res))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut zetas = Vec::with_capacity(runs.len());
    for (epsilon, _, res) in &runs {
        match res.zeta() {
            Some(z) => zetas.push(z),
            None => {
                return Err(Error::Fit(format!(
                    "sweep point ε = {epsilon} produced no fit: {}",
                    res.fit.as_ref().err().unwrap()
                )))
            }
        }
    }
    let monotone_decreasing = zetas.windows(2).all(|w| w[1] < w[0]);

    let mut csv = String::from("epsilon,zeta,xi,residual_rms\n");
    for ((epsilon, _, res), zeta) in runs.iter().zip(&zetas) {
        let fit = res.fit.as_ref().unwrap();
        writeln!(
            csv,
            "{},{},{},{}",
            fmt_g17(*epsilon),
            fmt_g17(*zeta),
            fmt_g17(fit.xi),
            fmt_g17(fit.residual_rms)
        )
        .unwrap();
    }
    write_file(&out_dir.join("sweep.csv"), &csv)?;

    let mut toml = String::new();
    writeln!(toml, "epsilons = {}", f64_array(&cfg.sweep_epsilons)).unwrap();
    writeln!(toml, "zetas = {}", f64_array(&zetas)).unwrap();
    writeln!(toml, "monotone_decreasing = {monotone_decreasing}").unwrap();
    let dir_names: Vec<String> = runs
        .iter()
        .map(|(_, dir, _)| toml_string(&dir.file_name().unwrap().to_string_lossy()))
        .collect();
    writeln!(toml, "runs = [{}]", dir_names.join(", ")).unwrap();
    write_file(&out_dir.join("sweep.toml"), &toml)?;

    Ok(SweepResult {
        epsilons: cfg.sweep_epsilons.clone(),
        zetas,
        run_dirs: runs.into_iter().map(|(_, dir, _)| dir).collect(),
        monotone_decreasing,
    })
}

/// Dispersive-approximation check at the configured operating point.
#[derive(Debug, Clone)]
pub struct DispersiveValidation {
    /// |δ|/g.
    pub ratio: f64,
    /// Whether the ratio clears the dispersive threshold.
    pub ratio_ok: bool,
    /// One-step fidelity between the rotating-frame and effective models.
    pub fidelity: f64,
    /// Frame alignment rotation used for the fidelity (rad).
    pub n_rotation: f64,
    pub schedule: PulseSchedule,
}

/// Validate the dispersive approximation: threshold check on |δ|/g (fails
/// with a non-dispersive error unless allowed) plus the one-step fidelity
/// between the rotating-frame model and the effective model.
pub fn validate_dispersive(cfg: &ExperimentConfig) -> Result<DispersiveValidation> {
    let p = cfg.cqed_params();
    p.validate(cfg.allow_nondispersive)?;
    let schedule = make_schedule(&p, cfg.delta_theta, cfg.coin_angle)?;
    let initial = initial_state(&p, C64::new(cfg.alpha, 0.0), cfg.coin_state())?;
    let report = dispersive_fidelity(&p, &schedule, &initial)?;
    Ok(DispersiveValidation {
        ratio: report.ratio,
        ratio_ok: report.ratio >= crate::cqed::DISPERSIVE_MIN_RATIO,
        fidelity: report.fidelity,
        n_rotation: report.n_rotation,
        schedule,
    })
}

/// Read a `sigma.csv` written by [`write_artifacts`] (or any two-column
/// `step,sigma` CSV with an optional header).
pub fn read_sigma_csv(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("step")) {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| {
            Error::Config(format!(
                "{}:{}: expected `step,sigma`, got {line:?}",
                path.display(),
                i + 1
            ))
        })?;
        let step: usize = a.trim().parse().map_err(|e| {
            Error::Config(format!("{}:{}: bad step: {e}", path.display(), i + 1))
        })?;
        let sigma: f64 = b.trim().parse().map_err(|e| {
            Error::Config(format!("{}:{}: bad sigma: {e}", path.display(), i + 1))
        })?;
        out.push((step, sigma));
    }
    if out.is_empty() {
        return Err(Error::Config(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn small_ideal() -> ExperimentConfig {
        ExperimentConfig {
            fock_dim: 16,
            steps: 6,
            alpha: 1.0,
            fit_window: Some([2, 6]),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn ideal_run_writes_complete_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_to_dir(&small_ideal(), dir.path()).unwrap();
        assert_eq!(res.distributions.len(), 7);
        assert_eq!(res.sigma.len(), 7);
        assert!(res.fit.is_ok());

        let csv = std::fs::read_to_string(dir.path().join("distribution.csv")).unwrap();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), 8, "theta plus steps 0..=6");
        assert!(header.starts_with("theta,step_0,"));
        assert_eq!(lines.count(), 16, "one row per grid point");

        let sigma = std::fs::read_to_string(dir.path().join("sigma.csv")).unwrap();
        assert_eq!(sigma.lines().count(), 8);
        assert!(sigma.starts_with("step,sigma\n0,"));
    }

    #[test]
    fn manifest_reloads_to_the_resolved_config() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_to_dir(&small_ideal(), dir.path()).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
        let loaded = parse_config(&manifest).unwrap();
        assert_eq!(loaded, res.config);
        assert_eq!(loaded.grid, Some(16));
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let cfg = ExperimentConfig {
            engine: EngineKind::Cqed,
            fock_dim: 24,
            steps: 3,
            alpha: 1.0,
            ..ExperimentConfig::default()
        };
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run_to_dir(&cfg, d1.path()).unwrap();
        run_to_dir(&cfg, d2.path()).unwrap();
        for name in ["distribution.csv", "sigma.csv", "fit.toml", "manifest.toml"] {
            let a = std::fs::read(d1.path().join(name)).unwrap();
            let b = std::fs::read(d2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical runs");
        }
    }

    #[test]
    fn classical_run_fits_diffusive_exponent() {
        let cfg = ExperimentConfig {
            engine: EngineKind::Classical,
            steps: 10,
            ..ExperimentConfig::default()
        };
        let res = run_experiment(&cfg).unwrap();
        let zeta = res.zeta().unwrap();
        assert!(
            (zeta - 0.5).abs() < 0.02,
            "classical walk must spread diffusively, got ζ = {zeta}"
        );
        assert!(res.mean_photon.is_empty());
    }

    #[test]
    fn short_run_skips_fit_instead_of_failing() {
        let cfg = ExperimentConfig {
            steps: 2,
            fock_dim: 16,
            alpha: 1.0,
            ..ExperimentConfig::default()
        };
        let res = run_experiment(&cfg).unwrap();
        assert!(res.fit.is_err());
        let body = fit_toml(&res);
        assert!(body.starts_with("skipped = "), "got: {body}");
    }

    #[test]
    fn sweep_is_parallel_deterministic_and_summarized() {
        let cfg = ExperimentConfig {
            engine: EngineKind::Cqed,
            fock_dim: 24,
            steps: 6,
            alpha: 1.0,
            fit_window: Some([2, 6]),
            sweep_epsilons: vec![0.01, 0.015],
            ..ExperimentConfig::default()
        };
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let r1 = run_sweep(&cfg, d1.path()).unwrap();
        let r2 = run_sweep(&cfg, d2.path()).unwrap();
        assert_eq!(r1.zetas, r2.zetas);
        assert_eq!(r1.run_dirs.len(), 2);
        for name in ["sweep.csv", "sweep.toml"] {
            let a = std::fs::read(d1.path().join(name)).unwrap();
            let b = std::fs::read(d2.path().join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical sweeps");
        }
        let rel1 = r1.run_dirs[0].strip_prefix(d1.path()).unwrap();
        assert_eq!(rel1.to_str().unwrap(), "eps_00_0.010000");
        for dir in &r1.run_dirs {
            assert!(dir.join("manifest.toml").exists());
        }
    }

    #[test]
    fn sweep_rejects_non_cqed_engines() {
        let cfg = ExperimentConfig::default(); // engine = ideal
        let err = run_sweep(&cfg, Path::new("/tmp/unused")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn sigma_csv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_to_dir(&small_ideal(), dir.path()).unwrap();
        let read = read_sigma_csv(&dir.path().join("sigma.csv")).unwrap();
        assert_eq!(read.len(), res.sigma.len());
        for ((t1, s1), (t2, s2)) in read.iter().zip(&res.sigma) {
            assert_eq!(t1, t2);
            assert_eq!(s1, s2, "17-digit float must round-trip exactly");
        }
    }

    #[test]
    fn g17_round_trips_f64_exactly() {
        for &x in &[
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            5e-324,
            -0.30000000000000004,
        ] {
            let back: f64 = fmt_g17(x).parse().unwrap();
            assert_eq!(back, x, "{x} failed to round-trip via {}", fmt_g17(x));
        }
    }

    #[test]
    fn compensated_run_produces_valid_artifacts() {
        let cfg = ExperimentConfig {
            engine: EngineKind::Cqed,
            fock_dim: 24,
            steps: 2,
            alpha: 1.0,
            compensate: true,
            ..ExperimentConfig::default()
        };
        let res = run_experiment(&cfg).unwrap();
        for dist in &res.distributions {
            let total: f64 = dist.probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-9, "distribution not normalized");
        }
    }
}
