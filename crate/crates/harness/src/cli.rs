//! Command-line interface.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{
    parse_grid, parse_sweep_spec, ConfigError, ExperimentConfig, Settings, SweepParam, SystemKind,
};
use crate::error::HarnessError;
use crate::experiment::{run_experiment, ExperimentResult, SUMMARY_FILE, TRACE_FILE};
use crate::plot::{emit_plot, PlotKind};

pub const PLOT_FILE: &str = "plot.svg";
pub const DEFAULT_D0_GRID: &str = "10,40,70,100";
pub const DEFAULT_DELTA_GRID: &str = "0.1,0.3,0.5,1.0";

#[derive(Debug, Parser)]
#[command(
    name = "swarmsteer",
    version,
    about = "Broadcast steering of random walkers and gathering swarms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One random walker.
    Single(RunArgs),
    /// Full-visibility linear gathering swarm.
    Linear(RunArgs),
    /// Bearing-only gathering swarm with limited visibility.
    Bearing(RunArgs),
    /// Any system, chosen with `--system`.
    Run(SystemRunArgs),
    /// Steps-to-target over a grid of start distances and descent thresholds.
    SweepKdelta(SweepArgs),
    /// Render a CSV written by another subcommand as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat `key = value` file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent runs per parameter point [default: 1000].
    #[arg(long)]
    pub runs: Option<u64>,
    /// Step cap per run [default: 100000].
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Stop fraction in (0, 1]; 1 disables control [default: 0.1].
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub goal_x: Option<f64>,
    #[arg(long)]
    pub goal_y: Option<f64>,
    /// Goal disc radius [default: 1, or the equilibrium radius for
    /// `single` when `--delta-descent` is given].
    #[arg(long)]
    pub goal_radius: Option<f64>,
    /// Fixed direction `X,Y` instead of steering to the goal.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    /// Output directory [default: .].
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Keep every `s`-th trace step (terminal steps are always kept).
    #[arg(long)]
    pub trace_stride: Option<u64>,
    /// Skip `trace.csv`.
    #[arg(long)]
    pub no_trace: bool,
    /// Also write `plot.svg`.
    #[arg(long)]
    pub plot: bool,
    /// Swarm size [default: 10].
    #[arg(long)]
    pub n: Option<usize>,
    /// Gathering gain (linear, default 1/n) or step radius (bearing, default 1).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Bearing visibility radius [default: 5].
    #[arg(long)]
    pub visibility: Option<f64>,
    /// Bearing per-step move probability [default: 0.5].
    #[arg(long)]
    pub delta_jump: Option<f64>,
    /// Largest expected neighbor cone, used for the bearing drift bound.
    #[arg(long)]
    pub psi_star: Option<f64>,
    /// Start distance from the goal [default: 10].
    #[arg(long)]
    pub d0: Option<f64>,
    /// Minimum expected descent per step; sets the single-agent goal radius.
    #[arg(long)]
    pub delta_descent: Option<f64>,
    /// Linear noise disc radius [default: 1].
    #[arg(long)]
    pub noise_radius: Option<f64>,
    /// Initial placement disc radius [default: 10 linear, 5 bearing].
    #[arg(long)]
    pub init_radius: Option<f64>,
    /// Sweep `name=v1,v2,...`; repeat for a grid.
    #[arg(long)]
    pub sweep: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SystemRunArgs {
    #[arg(long)]
    pub system: SystemKind,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = DEFAULT_D0_GRID)]
    pub d0_grid: String,
    #[arg(long, default_value = DEFAULT_DELTA_GRID)]
    pub delta_grid: String,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `k_vs_delta` or `trajectory`.
    #[arg(long)]
    pub kind: PlotKind,
    #[arg(long, default_value = PLOT_FILE)]
    pub output: PathBuf,
    /// Run to draw for `trajectory` [default: first run in the file].
    #[arg(long)]
    pub run: Option<u64>,
}

impl RunArgs {
    /// Flag values only; unset flags stay `None`.
    pub fn to_settings(&self) -> Result<Settings, ConfigError> {
        let mut s = Settings {
            seed: self.seed,
            runs: self.runs,
            max_steps: self.max_steps,
            mu: self.mu,
            goal_x: self.goal_x,
            goal_y: self.goal_y,
            goal_radius: self.goal_radius,
            out_dir: self.out_dir.clone(),
            trace_stride: self.trace_stride,
            no_trace: self.no_trace.then_some(true),
            n: self.n,
            sigma: self.sigma,
            visibility: self.visibility,
            delta_jump: self.delta_jump,
            psi_star: self.psi_star,
            d0: self.d0,
            delta_descent: self.delta_descent,
            noise_radius: self.noise_radius,
            init_radius: self.init_radius,
            ..Settings::default()
        };
        if let Some(d) = &self.direction {
            s.set("direction", d, None)?;
        }
        for spec in &self.sweep {
            s.sweep.push(parse_sweep_spec(spec)?);
        }
        Ok(s)
    }

    /// File settings overlaid with flags.
    pub fn settings(&self) -> Result<Settings, HarnessError> {
        let flags = self.to_settings()?;
        let base = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
                Settings::from_file_str(&text)?
            }
            None => Settings::default(),
        };
        Ok(base.overlay(flags))
    }

    pub fn resolve(&self, system: SystemKind) -> Result<ExperimentConfig, HarnessError> {
        Ok(ExperimentConfig::resolve(system, self.settings()?)?)
    }
}

/// Single-agent sweep over start distance and descent threshold, with the
/// goal radius set to the equilibrium radius of each threshold.
pub fn sweep_k_delta_config(
    mut settings: Settings,
    d0_grid: Vec<f64>,
    delta_grid: Vec<f64>,
) -> Result<ExperimentConfig, ConfigError> {
    if settings.direction.is_some() {
        return Err(ConfigError::Unsupported(
            "sweep-kdelta needs a goal; remove `direction`".into(),
        ));
    }
    if settings.goal_radius.is_some() {
        return Err(ConfigError::Unsupported(
            "sweep-kdelta derives the goal radius from each delta; remove `goal-radius`".into(),
        ));
    }
    if let Some(mu) = settings.mu {
        if mu >= 1.0 {
            return Err(ConfigError::OutOfRange {
                key: "mu".into(),
                value: mu,
                expected: "0 < mu < 1 for sweep-kdelta".into(),
            });
        }
    }
    settings.sweep = vec![
        (SweepParam::D0, d0_grid),
        (SweepParam::DeltaDescent, delta_grid),
    ];
    settings.no_trace = Some(true);
    ExperimentConfig::resolve(SystemKind::Single, settings)
}

/// Executes a parsed command and returns a short report for stdout.
pub fn execute(cli: Cli) -> Result<String, HarnessError> {
    let (cfg, plot) = match cli.command {
        Command::Single(a) => (
            a.resolve(SystemKind::Single)?,
            a.plot.then_some(PlotKind::Trajectory),
        ),
        Command::Linear(a) => (
            a.resolve(SystemKind::Linear)?,
            a.plot.then_some(PlotKind::Trajectory),
        ),
        Command::Bearing(a) => (
            a.resolve(SystemKind::Bearing)?,
            a.plot.then_some(PlotKind::Trajectory),
        ),
        Command::Run(a) => (
            a.run.resolve(a.system)?,
            a.run.plot.then_some(PlotKind::Trajectory),
        ),
        Command::SweepKdelta(a) => {
            let d0 = parse_grid("d0-grid", &a.d0_grid, None)?;
            let delta = parse_grid("delta-grid", &a.delta_grid, None)?;
            let cfg = sweep_k_delta_config(a.run.settings()?, d0, delta)?;
            (cfg, a.run.plot.then_some(PlotKind::KVsDelta))
        }
        Command::Plot(a) => {
            emit_plot(&a.input, a.kind, &a.output, a.run)?;
            return Ok(format!("wrote {}\n", a.output.display()));
        }
    };
    let result = run_experiment(&cfg)?;
    let mut report = describe(&cfg, &result);
    if let Some(kind) = plot {
        let input = match kind {
            PlotKind::KVsDelta => cfg.out_dir.join(SUMMARY_FILE),
            PlotKind::Trajectory if cfg.write_trace => cfg.out_dir.join(TRACE_FILE),
            PlotKind::Trajectory => {
                return Err(ConfigError::Unsupported(
                    "--plot needs the trace; remove --no-trace".into(),
                )
                .into())
            }
        };
        let out = cfg.out_dir.join(PLOT_FILE);
        emit_plot(&input, kind, &out, None)?;
        report.push_str(&format!("wrote {}\n", out.display()));
    }
    Ok(report)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into())
}

fn describe(cfg: &ExperimentConfig, result: &ExperimentResult) -> String {
    let mut out = String::new();
    for p in &result.points {
        let s = &p.summary;
        out.push_str(&format!(
            "{} mu={} d0={} goal_radius={:.4}: success {}/{} mean_steps {} drift {} ± {} theory {}{}\n",
            s.system,
            s.mu,
            s.d0,
            s.goal_radius,
            s.successes,
            s.runs,
            opt(s.mean_steps),
            opt(s.drift),
            opt(s.drift_stderr),
            opt(s.theory_drift),
            match (s.k_delta_bound, s.vacuous) {
                (Some(k), _) => format!(" k_delta_bound {k:.1}"),
                (None, true) => " k_delta_bound vacuous".into(),
                _ => String::new(),
            }
        ));
    }
    out.push_str(&format!(
        "wrote {}\n",
        cfg.out_dir.join(SUMMARY_FILE).display()
    ));
    if cfg.write_trace {
        out.push_str(&format!(
            "wrote {}\n",
            cfg.out_dir.join(TRACE_FILE).display()
        ));
    }
    out
}
