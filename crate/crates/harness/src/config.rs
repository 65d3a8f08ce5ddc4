//! Experiment configuration: flat `key = value` files, CLI overlays, and
//! validation into fully resolved parameter points.
//!
//! Keys are the long CLI flag names without the leading dashes
//! (`mu`, `goal-x`, `delta-jump`, ...); underscores are accepted in place
//! of dashes. A sweep over a parameter is written `sweep.<name> = v1,v2,...`
//! in a file and `--sweep <name>=v1,v2,...` on the command line.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use swarmsteer_core::bearing::BearingParams;
use swarmsteer_core::bounds::{disc_constants, equilibrium_radius};
use swarmsteer_core::controller::DEFAULT_GOAL_RADIUS;
use swarmsteer_core::linear::LinearParams;
use swarmsteer_core::{ControllerConfig, SteerError, Vec2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{}unknown key `{key}`", line_prefix(*.line))]
    UnknownKey { key: String, line: Option<usize> },
    #[error("{}invalid value `{value}` for `{key}`: {reason}", line_prefix(*.line))]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
        line: Option<usize>,
    },
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("`{key}` = {value} is out of range ({expected})")]
    OutOfRange {
        key: String,
        value: f64,
        expected: String,
    },
    #[error("{0}")]
    Unsupported(String),
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl From<SteerError> for ConfigError {
    fn from(e: SteerError) -> Self {
        match e {
            SteerError::OutOfRange {
                name,
                value,
                expected,
            } => ConfigError::OutOfRange {
                key: name.replace('_', "-"),
                value,
                expected: expected.to_string(),
            },
            other => ConfigError::Unsupported(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Single,
    Linear,
    Bearing,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Single => "single",
            SystemKind::Linear => "linear",
            SystemKind::Bearing => "bearing",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "single" => Ok(SystemKind::Single),
            "linear" => Ok(SystemKind::Linear),
            "bearing" => Ok(SystemKind::Bearing),
            _ => Err("expected single, linear or bearing".into()),
        }
    }
}

/// Parameters that may be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Mu,
    D0,
    GoalRadius,
    N,
    Sigma,
    Visibility,
    DeltaJump,
    PsiStar,
    DeltaDescent,
    NoiseRadius,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Mu => "mu",
            SweepParam::D0 => "d0",
            SweepParam::GoalRadius => "goal-radius",
            SweepParam::N => "n",
            SweepParam::Sigma => "sigma",
            SweepParam::Visibility => "visibility",
            SweepParam::DeltaJump => "delta-jump",
            SweepParam::PsiStar => "psi-star",
            SweepParam::DeltaDescent => "delta-descent",
            SweepParam::NoiseRadius => "noise-radius",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match normalize_key(s).as_str() {
            "mu" => SweepParam::Mu,
            "d0" => SweepParam::D0,
            "goal-radius" => SweepParam::GoalRadius,
            "n" => SweepParam::N,
            "sigma" => SweepParam::Sigma,
            "visibility" => SweepParam::Visibility,
            "delta-jump" => SweepParam::DeltaJump,
            "psi-star" => SweepParam::PsiStar,
            "delta-descent" => SweepParam::DeltaDescent,
            "noise-radius" => SweepParam::NoiseRadius,
            other => return Err(format!("`{other}` cannot be swept")),
        })
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

/// Partially specified settings, as read from a file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub system: Option<SystemKind>,
    pub seed: Option<u64>,
    pub runs: Option<u64>,
    pub max_steps: Option<u64>,
    pub mu: Option<f64>,
    pub goal_x: Option<f64>,
    pub goal_y: Option<f64>,
    pub goal_radius: Option<f64>,
    pub direction: Option<Vec2>,
    pub out_dir: Option<PathBuf>,
    pub trace_stride: Option<u64>,
    pub no_trace: Option<bool>,
    pub n: Option<usize>,
    pub sigma: Option<f64>,
    pub visibility: Option<f64>,
    pub delta_jump: Option<f64>,
    pub psi_star: Option<f64>,
    pub d0: Option<f64>,
    pub delta_descent: Option<f64>,
    pub noise_radius: Option<f64>,
    pub init_radius: Option<f64>,
    pub sweep: Vec<(SweepParam, Vec<f64>)>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: Option<usize>) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: e.to_string(),
            line,
        })
}

pub fn parse_grid(key: &str, value: &str, line: Option<usize>) -> Result<Vec<f64>, ConfigError> {
    let grid = value
        .split(',')
        .map(|v| parse_value::<f64>(key, v, line))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() {
        return Err(ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "empty grid".into(),
            line,
        });
    }
    Ok(grid)
}

/// `name=v1,v2,...`
pub fn parse_sweep_spec(spec: &str) -> Result<(SweepParam, Vec<f64>), ConfigError> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::InvalidValue {
            key: "sweep".into(),
            value: spec.into(),
            reason: "expected name=v1,v2,...".into(),
            line: None,
        })?;
    let param = name.parse().map_err(|reason| ConfigError::InvalidValue {
        key: "sweep".into(),
        value: spec.into(),
        reason,
        line: None,
    })?;
    Ok((param, parse_grid(name.trim(), values, None)?))
}

pub fn parse_direction(key: &str, value: &str, line: Option<usize>) -> Result<Vec2, ConfigError> {
    let parts = parse_grid(key, value, line)?;
    match parts.as_slice() {
        [x, y] => Ok(Vec2::new(*x, *y)),
        _ => Err(ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            reason: "expected x,y".into(),
            line,
        }),
    }
}

impl Settings {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        let k = key.as_str();
        if let Some(name) = k.strip_prefix("sweep.") {
            let param = name.parse().map_err(|reason| ConfigError::InvalidValue {
                key: key.clone(),
                value: value.into(),
                reason,
                line,
            })?;
            self.sweep.push((param, parse_grid(k, value, line)?));
            return Ok(());
        }
        match k {
            "system" => {
                self.system =
                    Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|reason| ConfigError::InvalidValue {
                                key: key.clone(),
                                value: value.into(),
                                reason,
                                line,
                            })?,
                    )
            }
            "seed" => self.seed = Some(parse_value(k, value, line)?),
            "runs" => self.runs = Some(parse_value(k, value, line)?),
            "max-steps" => self.max_steps = Some(parse_value(k, value, line)?),
            "mu" => self.mu = Some(parse_value(k, value, line)?),
            "goal-x" => self.goal_x = Some(parse_value(k, value, line)?),
            "goal-y" => self.goal_y = Some(parse_value(k, value, line)?),
            "goal-radius" => self.goal_radius = Some(parse_value(k, value, line)?),
            "direction" => self.direction = Some(parse_direction(k, value, line)?),
            "out-dir" => self.out_dir = Some(PathBuf::from(value.trim())),
            "trace-stride" => self.trace_stride = Some(parse_value(k, value, line)?),
            "no-trace" => self.no_trace = Some(parse_value(k, value, line)?),
            "n" => self.n = Some(parse_value(k, value, line)?),
            "sigma" => self.sigma = Some(parse_value(k, value, line)?),
            "visibility" => self.visibility = Some(parse_value(k, value, line)?),
            "delta-jump" => self.delta_jump = Some(parse_value(k, value, line)?),
            "psi-star" => self.psi_star = Some(parse_value(k, value, line)?),
            "d0" => self.d0 = Some(parse_value(k, value, line)?),
            "delta-descent" => self.delta_descent = Some(parse_value(k, value, line)?),
            "noise-radius" => self.noise_radius = Some(parse_value(k, value, line)?),
            "init-radius" => self.init_radius = Some(parse_value(k, value, line)?),
            _ => return Err(ConfigError::UnknownKey { key, line }),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file. Blank lines and `#` comments are
    /// skipped.
    pub fn from_file_str(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Malformed { line: i + 1 })?;
            s.set(key, value, Some(i + 1))?;
        }
        Ok(s)
    }

    /// Values in `top` win; sweeps given in `top` replace those here.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            system: top.system.or(self.system),
            seed: top.seed.or(self.seed),
            runs: top.runs.or(self.runs),
            max_steps: top.max_steps.or(self.max_steps),
            mu: top.mu.or(self.mu),
            goal_x: top.goal_x.or(self.goal_x),
            goal_y: top.goal_y.or(self.goal_y),
            goal_radius: top.goal_radius.or(self.goal_radius),
            direction: top.direction.or(self.direction),
            out_dir: top.out_dir.or(self.out_dir),
            trace_stride: top.trace_stride.or(self.trace_stride),
            no_trace: top.no_trace.or(self.no_trace),
            n: top.n.or(self.n),
            sigma: top.sigma.or(self.sigma),
            visibility: top.visibility.or(self.visibility),
            delta_jump: top.delta_jump.or(self.delta_jump),
            psi_star: top.psi_star.or(self.psi_star),
            d0: top.d0.or(self.d0),
            delta_descent: top.delta_descent.or(self.delta_descent),
            noise_radius: top.noise_radius.or(self.noise_radius),
            init_radius: top.init_radius.or(self.init_radius),
            sweep: if top.sweep.is_empty() {
                self.sweep
            } else {
                top.sweep
            },
        }
    }
}

/// Defaults applied when a key is absent.
pub mod defaults {
    pub const SEED: u64 = 42;
    pub const RUNS: u64 = 1_000;
    pub const MAX_STEPS: u64 = 100_000;
    pub const MU: f64 = 0.1;
    pub const D0: f64 = 10.0;
    pub const N: usize = 10;
    pub const NOISE_RADIUS: f64 = 1.0;
    pub const LINEAR_INIT_RADIUS: f64 = 10.0;
    pub const BEARING_SIGMA: f64 = 1.0;
    pub const BEARING_VISIBILITY: f64 = 5.0;
    pub const BEARING_DELTA_JUMP: f64 = 0.5;
    pub const BEARING_INIT_RADIUS: f64 = 5.0;
    pub const TRACE_STRIDE: u64 = 1;
}

/// Every swept or swept-over value of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues {
    pub mu: f64,
    pub d0: f64,
    pub goal_radius: f64,
    pub n: Option<usize>,
    pub sigma: Option<f64>,
    pub visibility: Option<f64>,
    pub delta_jump: Option<f64>,
    pub psi_star: Option<f64>,
    pub delta_descent: Option<f64>,
    pub noise_radius: Option<f64>,
    pub init_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Single,
    Linear(LinearParams),
    Bearing(BearingParams),
}

/// A fully validated parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub system: SystemKind,
    pub values: PointValues,
    pub controller: ControllerConfig,
    pub model: Model,
    /// Initial position (single) or centroid of the initial placement.
    pub start: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemKind,
    pub master_seed: u64,
    pub runs: u64,
    pub max_steps: u64,
    pub goal: Vec2,
    pub direction: Option<Vec2>,
    pub out_dir: PathBuf,
    pub trace_stride: u64,
    pub write_trace: bool,
    base: Settings,
    pub sweep: Vec<(SweepParam, Vec<f64>)>,
    pub points: Vec<PointSpec>,
}

fn positive_int(key: &str, value: u64) -> Result<u64, ConfigError> {
    if value >= 1 {
        Ok(value)
    } else {
        Err(ConfigError::OutOfRange {
            key: key.into(),
            value: value as f64,
            expected: format!("{key} >= 1"),
        })
    }
}

impl ExperimentConfig {
    /// Resolves defaults and validates every parameter point.
    pub fn resolve(system: SystemKind, settings: Settings) -> Result<Self, ConfigError> {
        if let Some(declared) = settings.system {
            if declared != system {
                return Err(ConfigError::Unsupported(format!(
                    "config file declares system `{declared}` but `{system}` was requested"
                )));
            }
        }
        let runs = positive_int("runs", settings.runs.unwrap_or(defaults::RUNS))?;
        let max_steps = positive_int(
            "max-steps",
            settings.max_steps.unwrap_or(defaults::MAX_STEPS),
        )?;
        let trace_stride = positive_int(
            "trace-stride",
            settings.trace_stride.unwrap_or(defaults::TRACE_STRIDE),
        )?;
        let goal = Vec2::new(
            settings.goal_x.unwrap_or(0.0),
            settings.goal_y.unwrap_or(0.0),
        );
        for (param, grid) in &settings.sweep {
            if grid.is_empty() {
                return Err(ConfigError::InvalidValue {
                    key: format!("sweep.{}", param.as_str()),
                    value: String::new(),
                    reason: "empty grid".into(),
                    line: None,
                });
            }
        }
        let mut cfg = ExperimentConfig {
            system,
            master_seed: settings.seed.unwrap_or(defaults::SEED),
            runs,
            max_steps,
            goal,
            direction: settings.direction,
            out_dir: settings
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from(".")),
            trace_stride,
            write_trace: !settings.no_trace.unwrap_or(false),
            sweep: settings.sweep.clone(),
            base: settings,
            points: Vec::new(),
        };
        cfg.points = cfg
            .grid_assignments()
            .into_iter()
            .map(|assign| cfg.build_point(&assign))
            .collect::<Result<_, _>>()?;
        Ok(cfg)
    }

    /// Cartesian product of the sweep grids, first sweep outermost.
    fn grid_assignments(&self) -> Vec<Vec<(SweepParam, f64)>> {
        let mut out = vec![Vec::new()];
        for (param, grid) in &self.sweep {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    grid.iter().map(move |&v| {
                        let mut next = prefix.clone();
                        next.push((*param, v));
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn build_point(&self, assign: &[(SweepParam, f64)]) -> Result<PointSpec, ConfigError> {
        let b = &self.base;
        let get = |p: SweepParam, base: Option<f64>| {
            assign
                .iter()
                .rev()
                .find(|(q, _)| *q == p)
                .map(|&(_, v)| v)
                .or(base)
        };
        let mu = get(SweepParam::Mu, b.mu).unwrap_or(defaults::MU);
        let d0 = get(SweepParam::D0, b.d0).unwrap_or(defaults::D0);
        let delta_descent = get(SweepParam::DeltaDescent, b.delta_descent);
        let psi_star = get(SweepParam::PsiStar, b.psi_star);
        let n_raw = get(SweepParam::N, b.n.map(|n| n as f64));
        if let Some(n) = n_raw {
            if n.fract() != 0.0 || n < 0.0 {
                return Err(ConfigError::OutOfRange {
                    key: "n".into(),
                    value: n,
                    expected: "a whole number >= 2".into(),
                });
            }
        }
        if !(d0.is_finite() && d0 >= 0.0) {
            return Err(ConfigError::OutOfRange {
                key: "d0".into(),
                value: d0,
                expected: "d0 >= 0".into(),
            });
        }
        if let Some(d) = delta_descent {
            if d.is_nan() || d <= 0.0 {
                return Err(ConfigError::OutOfRange {
                    key: "delta-descent".into(),
                    value: d,
                    expected: "delta-descent > 0".into(),
                });
            }
        }
        let explicit_goal_radius = get(SweepParam::GoalRadius, b.goal_radius);
        let goal_radius = match (explicit_goal_radius, self.system, delta_descent) {
            (Some(r), _, _) => r,
            (None, SystemKind::Single, Some(delta)) if mu < 1.0 => {
                equilibrium_radius(&disc_constants(), mu, delta)
            }
            _ => DEFAULT_GOAL_RADIUS,
        };
        let controller = match self.direction {
            Some(d) => ControllerConfig::new(
                mu,
                swarmsteer_core::SteeringMode::FixedDirection(d),
                goal_radius,
            ),
            None => ControllerConfig::goal_seeking(mu, self.goal, goal_radius),
        }
        .map_err(|e| match e {
            SteerError::ZeroVector => ConfigError::InvalidValue {
                key: "direction".into(),
                value: "0,0".into(),
                reason: "direction must be nonzero".into(),
                line: None,
            },
            other => other.into(),
        })?;
        let start = self.goal - Vec2::new(d0, 0.0);

        let mut values = PointValues {
            mu,
            d0,
            goal_radius,
            n: None,
            sigma: None,
            visibility: None,
            delta_jump: None,
            psi_star,
            delta_descent,
            noise_radius: None,
            init_radius: None,
        };
        let model = match self.system {
            SystemKind::Single => Model::Single,
            SystemKind::Linear => {
                let n = n_raw.map(|n| n as usize).unwrap_or(defaults::N);
                let sigma = get(SweepParam::Sigma, b.sigma).unwrap_or(1.0 / n as f64);
                let noise =
                    get(SweepParam::NoiseRadius, b.noise_radius).unwrap_or(defaults::NOISE_RADIUS);
                let params = LinearParams::new(n, sigma, noise)?;
                values.n = Some(n);
                values.sigma = Some(sigma);
                values.noise_radius = Some(noise);
                values.init_radius = Some(b.init_radius.unwrap_or(defaults::LINEAR_INIT_RADIUS));
                Model::Linear(params)
            }
            SystemKind::Bearing => {
                let n = n_raw.map(|n| n as usize).unwrap_or(defaults::N);
                let sigma = get(SweepParam::Sigma, b.sigma).unwrap_or(defaults::BEARING_SIGMA);
                let vis = get(SweepParam::Visibility, b.visibility)
                    .unwrap_or(defaults::BEARING_VISIBILITY);
                let dj = get(SweepParam::DeltaJump, b.delta_jump)
                    .unwrap_or(defaults::BEARING_DELTA_JUMP);
                let params = BearingParams::new(n, vis, sigma, dj)?;
                values.n = Some(n);
                values.sigma = Some(sigma);
                values.visibility = Some(vis);
                values.delta_jump = Some(dj);
                values.init_radius = Some(b.init_radius.unwrap_or(defaults::BEARING_INIT_RADIUS));
                Model::Bearing(params)
            }
        };
        if let Some(r) = values.init_radius {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(ConfigError::OutOfRange {
                    key: "init-radius".into(),
                    value: r,
                    expected: "init-radius >= 0".into(),
                });
            }
        }
        if let Some(psi) = psi_star {
            swarmsteer_core::bounds::var_star(values.delta_jump.unwrap_or(1.0), 1.0, psi)?;
        }
        Ok(PointSpec {
            system: self.system,
            values,
            controller,
            model,
            start,
        })
    }
}
