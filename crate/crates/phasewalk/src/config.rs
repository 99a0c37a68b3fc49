//! Experiment configuration: a strict TOML schema with defaults at the
//! worked operating point.
//!
//! Unknown keys are rejected (catching typos like `epslion`), parse errors
//! carry line/column positions, and every run writes a manifest whose
//! `[config]` table is the fully resolved configuration — loading a manifest
//! back as a config reproduces the run.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cqed::{CqedParams, PulseModel};
use crate::error::{Error, Result};
use crate::quantum::C64;

/// Which model produces the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    /// Walker/coin unitary model (Hadamard coin + conditional phase).
    Ideal,
    /// Driven qubit–resonator model evolved segment by segment.
    Cqed,
    /// Exact wrapped-binomial classical random walk.
    Classical,
}

impl EngineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EngineKind::Ideal => "ideal",
            EngineKind::Cqed => "cqed",
            EngineKind::Classical => "classical",
        }
    }
}

/// Drive-on segment treatment (see the circuit-QED module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PulseModelConfig {
    #[default]
    Refocused,
    Full,
}

impl From<PulseModelConfig> for PulseModel {
    fn from(value: PulseModelConfig) -> Self {
        match value {
            PulseModelConfig::Refocused => PulseModel::Refocused,
            PulseModelConfig::Full => PulseModel::Full,
        }
    }
}

/// Full description of one experiment. Every field has a default, so an
/// empty config with just `engine = "ideal"` runs the standard walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub engine: EngineKind,
    /// Number of walk steps.
    pub steps: usize,
    /// Per-step conditional phase in rad.
    pub delta_theta: f64,
    /// Fock truncation of the walker/resonator space.
    pub fock_dim: usize,
    /// Phase-grid size for distributions; `None` means the walker dimension.
    pub grid: Option<usize>,
    /// Coherent amplitude of the initial walker (real).
    pub alpha: f64,
    /// Initial coin amplitudes [[re, im]; 2]; normalized on use.
    pub coin: [[f64; 2]; 2],
    /// Qubit splitting Ω (GHz).
    pub omega_q: f64,
    /// Resonator frequency ω_c (GHz).
    pub omega_c: f64,
    /// Qubit–resonator coupling g (GHz).
    pub g: f64,
    /// Drive frequency ω_d (GHz); `None` means qubit-resonant (ω_d = Ω).
    pub omega_d: Option<f64>,
    /// Drive amplitude ε (GHz).
    pub epsilon: f64,
    /// σ_x rotation angle of the coin pulse (rad).
    pub coin_angle: f64,
    /// Drive-on segment treatment.
    pub pulse_model: PulseModelConfig,
    /// Accept operating points with |δ|/g below the dispersive threshold.
    pub allow_nondispersive: bool,
    /// Retune the drive each step from the predicted photon number.
    pub compensate: bool,
    /// Drive amplitude the pulse timings are calibrated at (GHz); `None`
    /// means the run's own ε. Sweeps calibrate once at the base amplitude
    /// and hold the timings fixed while ε varies, as a real pulse sequence
    /// would.
    pub schedule_epsilon: Option<f64>,
    /// Inclusive step window for the ln σ vs ln t fit; `None` means the
    /// default window 4–10 (even steps only for the quantum walks, all
    /// steps for the classical baseline).
    pub fit_window: Option<[usize; 2]>,
    /// Restrict the fit to even steps; `None` picks the engine default
    /// (even-only for the quantum walks, all steps for the classical walk).
    pub fit_even_only: Option<bool>,
    /// Drive amplitudes visited by the `sweep` command (GHz).
    pub sweep_epsilons: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            engine: EngineKind::Ideal,
            steps: 25,
            delta_theta: 0.3,
            fock_dim: 64,
            grid: None,
            alpha: 3.0,
            coin: {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [[h, 0.0], [0.0, h]]
            },
            omega_q: 0.7,
            omega_c: 0.5,
            g: 0.01,
            omega_d: None,
            epsilon: 0.01,
            coin_angle: std::f64::consts::FRAC_PI_4,
            pulse_model: PulseModelConfig::default(),
            allow_nondispersive: false,
            compensate: false,
            schedule_epsilon: None,
            fit_window: None,
            fit_even_only: None,
            sweep_epsilons: vec![0.01, 0.012, 0.015, 0.018],
        }
    }
}

impl ExperimentConfig {
    /// Resolved drive frequency (defaults to the qubit splitting).
    pub fn omega_d(&self) -> f64 {
        self.omega_d.unwrap_or(self.omega_q)
    }

    /// Resolved phase-grid size (defaults to the walker dimension).
    pub fn grid(&self) -> usize {
        self.grid.unwrap_or(self.fock_dim)
    }

    /// Resolved fit parity: even-only for the quantum walks, all steps for
    /// the classical baseline unless overridden.
    pub fn fit_even_only(&self) -> bool {
        self.fit_even_only
            .unwrap_or(self.engine != EngineKind::Classical)
    }

    /// Resolved fit window, steps 4–10 by default: early steps where the
    /// initial coherent-state width still dominates the spread would drag
    /// the slope well below its asymptotic value, and later steps approach
    /// the wrap-around of the circle.
    pub fn fit_window(&self) -> (usize, usize) {
        match self.fit_window {
            Some([lo, hi]) => (lo, hi),
            None => (4, 10),
        }
    }

    /// Resolved pulse-calibration amplitude (defaults to the run's ε).
    pub fn schedule_epsilon(&self) -> f64 {
        self.schedule_epsilon.unwrap_or(self.epsilon)
    }

    /// Normalized initial coin state.
    pub fn coin_state(&self) -> [C64; 2] {
        let c0 = C64::new(self.coin[0][0], self.coin[0][1]);
        let c1 = C64::new(self.coin[1][0], self.coin[1][1]);
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        [c0 / norm, c1 / norm]
    }

    /// Operating-point parameters for the circuit-QED engine.
    pub fn cqed_params(&self) -> CqedParams {
        CqedParams {
            omega_q: self.omega_q,
            omega_c: self.omega_c,
            g: self.g,
            omega_d: self.omega_d(),
            epsilon: self.epsilon,
            fock_dim: self.fock_dim,
        }
    }

    /// A copy with every optional field made explicit, as echoed into run
    /// manifests.
    pub fn resolved(&self) -> ExperimentConfig {
        ExperimentConfig {
            grid: Some(self.grid()),
            omega_d: Some(self.omega_d()),
            fit_even_only: Some(self.fit_even_only()),
            fit_window: {
                let (lo, hi) = self.fit_window();
                Some([lo, hi])
            },
            schedule_epsilon: Some(self.schedule_epsilon()),
            ..self.clone()
        }
    }

    /// Cross-field validation shared by every entry point.
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if self.fock_dim < 2 {
            return Err(Error::Config(format!(
                "fock_dim must be at least 2, got {}",
                self.fock_dim
            )));
        }
        if !self.delta_theta.is_finite()
            || self.delta_theta <= 0.0
            || self.delta_theta >= std::f64::consts::PI
        {
            return Err(Error::Config(format!(
                "delta_theta must lie in (0, π), got {}",
                self.delta_theta
            )));
        }
        if self.alpha < 0.0 || !self.alpha.is_finite() {
            return Err(Error::Config(format!(
                "alpha must be a finite nonnegative amplitude, got {}",
                self.alpha
            )));
        }
        if self.grid() < 2 {
            return Err(Error::Config(format!(
                "grid must be at least 2, got {}",
                self.grid()
            )));
        }
        let coin_norm: f64 = self
            .coin
            .iter()
            .map(|c| c[0] * c[0] + c[1] * c[1])
            .sum();
        if coin_norm <= 0.0 || !coin_norm.is_finite() {
            return Err(Error::Config("coin amplitudes must not all vanish".into()));
        }
        let (lo, hi) = self.fit_window();
        if lo > hi {
            return Err(Error::Config(format!(
                "fit window {lo}..{hi} is empty"
            )));
        }
        if let Some(eps0) = self.schedule_epsilon {
            if eps0 <= 0.0 || !eps0.is_finite() {
                return Err(Error::Config(format!(
                    "schedule_epsilon must be positive and finite, got {eps0}"
                )));
            }
        }
        if self.engine == EngineKind::Cqed {
            self.cqed_params().validate(self.allow_nondispersive)?;
            if self.sweep_epsilons.is_empty() {
                return Err(Error::Config("sweep_epsilons must not be empty".into()));
            }
            for &eps in &self.sweep_epsilons {
                if eps <= 0.0 || !eps.is_finite() {
                    return Err(Error::Config(format!(
                        "sweep drive amplitudes must be positive and finite, got {eps}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A run manifest: the resolved config plus derived quantities. Loading a
/// manifest as a config ignores everything but `[config]`.
#[derive(Debug, Clone, Deserialize)]
struct ManifestDoc {
    config: ExperimentConfig,
}

/// Load a config from a TOML file. Accepts either a bare config or a run
/// manifest (whose `[config]` table is used), so manifests round-trip.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Parse config text (bare config or manifest). Returns the position-
/// annotated TOML error message on failure.
pub fn parse_config(text: &str) -> std::result::Result<ExperimentConfig, String> {
    let value: toml::Value = text.parse().map_err(|e| format!("{e}"))?;
    let is_manifest = value
        .as_table()
        .map(|t| t.contains_key("config"))
        .unwrap_or(false);
    if is_manifest {
        let doc: ManifestDoc = ManifestDoc::deserialize(value).map_err(|e| format!("{e}"))?;
        Ok(doc.config)
    } else {
        // Reparse from text so error positions point into the file.
        toml::from_str(text).map_err(|e| format!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        cfg.validate().unwrap();
        assert_eq!(cfg.grid(), 64);
        assert_eq!(cfg.omega_d(), 0.7);
        assert!(cfg.fit_even_only());
    }

    #[test]
    fn unknown_key_is_rejected_by_name() {
        let err = parse_config("epslion = 0.01\n").unwrap_err();
        assert!(err.contains("epslion"), "error should name the key: {err}");
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_config("engine = \"cqed\"\nsteps = \"many\"\n").unwrap_err();
        assert!(
            err.contains("line 2") || err.contains("2,"),
            "error should be position-annotated: {err}"
        );
    }

    #[test]
    fn classical_engine_defaults_differ() {
        let cfg = parse_config("engine = \"classical\"\n").unwrap();
        assert_eq!(cfg.fit_window(), (4, 10));
        assert!(!cfg.fit_even_only());
        let quantum = parse_config("engine = \"cqed\"\n").unwrap();
        assert_eq!(quantum.fit_window(), (4, 10));
        assert!(quantum.fit_even_only());
        let pinned = parse_config("engine = \"classical\"\nfit_window = [2, 8]\n").unwrap();
        assert_eq!(pinned.fit_window(), (2, 8));
    }

    #[test]
    fn zero_detuning_is_rejected() {
        let cfg = parse_config("engine = \"cqed\"\nomega_q = 0.5\nomega_c = 0.5\n").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn nondispersive_requires_flag() {
        let text = "engine = \"cqed\"\ng = 0.05\n";
        let cfg = parse_config(text).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::NonDispersive { .. })));
        let allowed = format!("{text}allow_nondispersive = true\n");
        parse_config(&allowed).unwrap().validate().unwrap();
    }

    #[test]
    fn manifest_round_trips_through_loader() {
        let cfg = ExperimentConfig {
            engine: EngineKind::Cqed,
            epsilon: 0.012,
            ..ExperimentConfig::default()
        }
        .resolved();
        let manifest = format!(
            "[config]\n{}\n[derived]\nchi = 5.0e-4\n",
            toml::to_string(&cfg).unwrap()
        );
        let loaded = parse_config(&manifest).unwrap();
        assert_eq!(loaded, cfg);
    }

    #[test]
    fn resolved_config_pins_optionals() {
        let cfg = ExperimentConfig::default().resolved();
        assert_eq!(cfg.grid, Some(64));
        assert_eq!(cfg.omega_d, Some(0.7));
        assert_eq!(cfg.fit_even_only, Some(true));
        assert_eq!(cfg.fit_window, Some([4, 10]));
        assert_eq!(cfg.schedule_epsilon, Some(0.01));
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        let bad = [
            ExperimentConfig {
                steps: 0,
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                delta_theta: 0.0,
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                delta_theta: 4.0,
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                delta_theta: f64::NAN,
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                coin: [[0.0, 0.0], [0.0, 0.0]],
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                fit_window: Some([9, 3]),
                ..ExperimentConfig::default()
            },
            ExperimentConfig {
                schedule_epsilon: Some(0.0),
                ..ExperimentConfig::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "accepted: {cfg:?}");
        }
    }
}
