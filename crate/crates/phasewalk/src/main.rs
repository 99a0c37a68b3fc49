//! Command-line front end. All heavy lifting lives in the library; this
//! binary parses flags, merges them over the config file, dispatches, and
//! maps errors to exit codes (2 = config/IO, 3 = numerical/validation).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phasewalk::analysis::fit_power_law;
use phasewalk::config::{load_config, EngineKind, ExperimentConfig};
use phasewalk::runner::{
    fmt_g17, read_sigma_csv, run_sweep, run_to_dir, validate_dispersive, RunResult,
};
use phasewalk::Error;

#[derive(Parser)]
#[command(
    name = "phasewalk",
    version,
    about = "Discrete-time quantum walk on a circle of oscillator phases, \
             as an ideal walker/coin model or a driven qubit–resonator \
             simulation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every run subcommand; each overrides the config file.
#[derive(Args, Debug, Default)]
struct CommonOpts {
    /// Config TOML: a bare config or a manifest from an earlier run.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Number of walk steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Per-step conditional phase in rad.
    #[arg(long)]
    delta_theta: Option<f64>,
    /// Fock truncation of the walker space.
    #[arg(long)]
    fock_dim: Option<usize>,
    /// Phase-grid size for distributions.
    #[arg(long)]
    grid: Option<usize>,
    /// Inclusive step window for the ζ fit, as `a..b`.
    #[arg(long, value_name = "A..B", value_parser = parse_window)]
    fit_window: Option<(usize, usize)>,
}

#[derive(Args, Debug, Default)]
struct DriveOpts {
    /// Drive amplitude ε in GHz.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Accept operating points below the dispersive threshold.
    #[arg(long)]
    allow_nondispersive: bool,
    /// Retune the drive each step from the predicted photon number.
    #[arg(long)]
    compensate: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the ideal walker/coin walk.
    Ideal {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the driven qubit–resonator walk.
    Cqed {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        drive: DriveOpts,
    },
    /// Run the classical wrapped random-walk baseline.
    Classical {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the drive-amplitude sweep and tabulate ζ(ε).
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        drive: DriveOpts,
    },
    /// Check the dispersive approximation at the operating point.
    ValidateDispersive {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        drive: DriveOpts,
    },
    /// Fit ln σ vs ln t from a sigma.csv.
    Fit {
        /// CSV with `step,sigma` rows, e.g. a run's sigma.csv.
        csv: PathBuf,
        /// Inclusive step window, as `a..b`.
        #[arg(long, value_name = "A..B", value_parser = parse_window)]
        fit_window: Option<(usize, usize)>,
        /// Use even steps only (walk distributions carry a parity artifact).
        #[arg(long)]
        even_only: bool,
    },
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `a..b`, got {s:?}"))?;
    let lo = a.trim().parse().map_err(|e| format!("bad start {a:?}: {e}"))?;
    let hi = b.trim().parse().map_err(|e| format!("bad end {b:?}: {e}"))?;
    Ok((lo, hi))
}

fn load_base(common: &CommonOpts) -> Result<ExperimentConfig, Error> {
    match &common.config {
        Some(path) => load_config(path),
        None => Ok(ExperimentConfig::default()),
    }
}

fn merge(cfg: &mut ExperimentConfig, common: &CommonOpts, drive: Option<&DriveOpts>) {
    if let Some(steps) = common.steps {
        cfg.steps = steps;
    }
    if let Some(dt) = common.delta_theta {
        cfg.delta_theta = dt;
    }
    if let Some(d) = common.fock_dim {
        cfg.fock_dim = d;
    }
    if let Some(g) = common.grid {
        cfg.grid = Some(g);
    }
    if let Some((lo, hi)) = common.fit_window {
        cfg.fit_window = Some([lo, hi]);
    }
    if let Some(drive) = drive {
        if let Some(eps) = drive.epsilon {
            cfg.epsilon = eps;
        }
        if drive.allow_nondispersive {
            cfg.allow_nondispersive = true;
        }
        if drive.compensate {
            cfg.compensate = true;
        }
    }
}

fn out_dir(common: &CommonOpts) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn print_run(res: &RunResult, dir: &std::path::Path) {
    let c = &res.config;
    println!(
        "{}: {} steps, grid {}, Δθ = {}",
        c.engine.as_str(),
        c.steps,
        c.grid(),
        c.delta_theta
    );
    if let Some(schedule) = &res.schedule {
        println!(
            "schedule: t_pulse = {:.4} ns, t_free = {:.4} ns per step",
            schedule.t_pulse, schedule.t_free
        );
    }
    if let Some(&(t, sigma)) = res.sigma.last() {
        println!("σ({t}) = {sigma:.6}");
    }
    match &res.fit {
        Ok(fit) => println!(
            "fit over steps {}..{} ({}): ζ = {:.4}, ξ = {:.4}, rms = {:.2e}",
            fit.window.0,
            fit.window.1,
            if res.config.fit_even_only() {
                "even"
            } else {
                "all"
            },
            fit.zeta,
            fit.xi,
            fit.residual_rms
        ),
        Err(reason) => println!("fit skipped: {reason}"),
    }
    println!("wrote {}", dir.display());
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Ideal { common } => {
            let mut cfg = load_base(&common)?;
            cfg.engine = EngineKind::Ideal;
            merge(&mut cfg, &common, None);
            let dir = out_dir(&common);
            let res = run_to_dir(&cfg, &dir)?;
            print_run(&res, &dir);
            Ok(())
        }
        Cmd::Classical { common } => {
            let mut cfg = load_base(&common)?;
            cfg.engine = EngineKind::Classical;
            merge(&mut cfg, &common, None);
            let dir = out_dir(&common);
            let res = run_to_dir(&cfg, &dir)?;
            print_run(&res, &dir);
            Ok(())
        }
        Cmd::Cqed { common, drive } => {
            let mut cfg = load_base(&common)?;
            cfg.engine = EngineKind::Cqed;
            merge(&mut cfg, &common, Some(&drive));
            let dir = out_dir(&common);
            let res = run_to_dir(&cfg, &dir)?;
            print_run(&res, &dir);
            Ok(())
        }
        Cmd::Sweep { common, drive } => {
            let mut cfg = load_base(&common)?;
            cfg.engine = EngineKind::Cqed;
            merge(&mut cfg, &common, Some(&drive));
            let dir = out_dir(&common);
            let sweep = run_sweep(&cfg, &dir)?;
            println!("epsilon      zeta");
            for (eps, zeta) in sweep.epsilons.iter().zip(&sweep.zetas) {
                println!("{eps:<12} {zeta:.4}");
            }
            println!(
                "ζ strictly decreasing with ε: {}",
                if sweep.monotone_decreasing { "yes" } else { "no" }
            );
            println!("wrote {}", dir.display());
            Ok(())
        }
        Cmd::ValidateDispersive { common, drive } => {
            let mut cfg = load_base(&common)?;
            cfg.engine = EngineKind::Cqed;
            merge(&mut cfg, &common, Some(&drive));
            cfg.validate()?;
            let v = validate_dispersive(&cfg)?;
            let p = cfg.cqed_params();
            println!(
                "operating point: Ω = {} GHz, ω_c = {} GHz, g = {} GHz, ω_d = {} GHz, ε = {} GHz",
                p.omega_q, p.omega_c, p.g, p.omega_d, p.epsilon
            );
            println!(
                "|δ|/g = {:.2} (threshold {}): {}",
                v.ratio,
                phasewalk::cqed::DISPERSIVE_MIN_RATIO,
                if v.ratio_ok { "ok" } else { "below threshold (allowed)" }
            );
            println!(
                "schedule: t_pulse = {:.4} ns, t_free = {:.4} ns",
                v.schedule.t_pulse, v.schedule.t_free
            );
            println!(
                "one-step model agreement: fidelity = {} (frame rotation {:.6} rad)",
                fmt_g17(v.fidelity),
                v.n_rotation
            );
            Ok(())
        }
        Cmd::Fit {
            csv,
            fit_window,
            even_only,
        } => {
            let points = read_sigma_csv(&csv)?;
            let max_step = points.iter().map(|&(t, _)| t).max().unwrap();
            let window = fit_window.unwrap_or((2, max_step));
            let fit = fit_power_law(&points, window, even_only)?;
            println!(
                "fit over steps {}..{} ({}, {} points)",
                fit.window.0,
                fit.window.1,
                if even_only { "even" } else { "all" },
                fit.steps_used.len()
            );
            println!("zeta = {}", fmt_g17(fit.zeta));
            println!("xi = {}", fmt_g17(fit.xi));
            println!("residual_rms = {}", fmt_g17(fit.residual_rms));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
