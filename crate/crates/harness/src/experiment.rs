//! Parallel, seeded Monte Carlo runs and their CSV outputs.
//!
//! Run `r` of every parameter point draws from
//! `RngStream::for_run(master_seed, r)`, so points in a sweep share random
//! streams run by run. Results are written in run order.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use swarmsteer_core::bearing::BearingSwarm;
use swarmsteer_core::bounds::{
    bearing_drift_bound, disc_constants, k_delta_bound, linear_drift_bound, single_agent_drift,
    var_star,
};
use swarmsteer_core::linear::LinearSwarm;
use swarmsteer_core::single::SingleAgentState;
use swarmsteer_core::swarm::{connected_placement, random_disc_placement};
use swarmsteer_core::{run_controlled, RngStream, RunOutcome, SteerError, Steerable};

use crate::config::{ExperimentConfig, Model, PointSpec};
use crate::error::HarnessError;
use crate::stats::{quantile, Moments};

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRACE_SCHEMA: &str = "swarmsteer trace v1";
pub const SUMMARY_SCHEMA: &str = "swarmsteer summary v1";
pub const PLACEMENT_ATTEMPTS: usize = 10_000;

/// One trace line. The `k = 0` row holds the initial centroid and has no
/// `c` or `projection`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub run_id: u64,
    pub k: u64,
    pub centroid_x: f64,
    pub centroid_y: f64,
    pub c: Option<f64>,
    pub projection: Option<f64>,
    pub distance_to_goal: Option<f64>,
    pub terminal: bool,
}

/// One line of `summary.csv`. Step statistics cover successful runs only;
/// runs that hit `max_steps` count against `success_fraction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub system: String,
    pub mu: f64,
    pub d0: f64,
    pub delta_descent: Option<f64>,
    pub goal_radius: f64,
    pub n: Option<usize>,
    pub sigma: Option<f64>,
    pub visibility: Option<f64>,
    pub delta_jump: Option<f64>,
    pub psi_star: Option<f64>,
    pub runs: u64,
    pub successes: u64,
    pub success_fraction: f64,
    pub mean_steps: Option<f64>,
    pub median_steps: Option<f64>,
    pub p95_steps: Option<f64>,
    /// Mean per-step centroid displacement along the required direction.
    pub drift: Option<f64>,
    pub drift_stderr: Option<f64>,
    pub theory_drift: Option<f64>,
    pub k_delta_bound: Option<f64>,
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run_id: u64,
    pub outcome: RunOutcome,
    pub drift: Moments,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub point: PointSpec,
    pub runs: Vec<RunResult>,
    pub summary: SummaryRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub points: Vec<PointResult>,
}

impl ExperimentResult {
    pub fn summary(&self) -> Vec<SummaryRecord> {
        self.points.iter().map(|p| p.summary.clone()).collect()
    }

    pub fn trace(&self) -> impl Iterator<Item = &TraceRow> {
        self.points
            .iter()
            .flat_map(|p| p.runs.iter().flat_map(|r| r.rows.iter()))
    }
}

fn build_system(
    point: &PointSpec,
    rng: &mut RngStream,
) -> Result<Box<dyn Steerable + Send>, HarnessError> {
    let init_radius = point.values.init_radius.unwrap_or(0.0);
    Ok(match point.model {
        Model::Single => Box::new(SingleAgentState::new(point.start)),
        Model::Linear(params) => {
            let pos = random_disc_placement(params.n(), point.start, init_radius, rng);
            Box::new(LinearSwarm::new(pos, params)?)
        }
        Model::Bearing(params) => {
            let pos = connected_placement(
                params.n(),
                point.start,
                init_radius,
                params.visibility(),
                PLACEMENT_ATTEMPTS,
                rng,
            )
            .ok_or(HarnessError::Placement(PLACEMENT_ATTEMPTS))?;
            Box::new(BearingSwarm::new(pos, params)?)
        }
    })
}

/// Simulates one run. `stream` selects the random stream, `run_id` only
/// labels trace rows. With `stride = None` no trace is kept.
pub fn simulate_run(
    point: &PointSpec,
    master_seed: u64,
    stream: u64,
    run_id: u64,
    max_steps: u64,
    stride: Option<u64>,
) -> Result<RunResult, HarnessError> {
    let mut rng = RngStream::for_run(master_seed, stream);
    let mut system = build_system(point, &mut rng)?;
    let controller = point.controller;
    let start = system.centroid();
    let mut rows = Vec::new();
    let mut drift = Moments::default();
    if stride.is_some() {
        rows.push(TraceRow {
            run_id,
            k: 0,
            centroid_x: start.x,
            centroid_y: start.y,
            c: None,
            projection: None,
            distance_to_goal: controller.distance_to_goal(start),
            terminal: false,
        });
    }
    let outcome = run_controlled(system.as_mut(), &controller, max_steps, &mut rng, |rec| {
        drift.push(rec.drift());
        if let Some(s) = stride {
            if rec.k % s == 0 || rec.terminal {
                rows.push(TraceRow {
                    run_id,
                    k: rec.k,
                    centroid_x: rec.centroid.x,
                    centroid_y: rec.centroid.y,
                    c: Some(rec.c),
                    projection: Some(rec.projection),
                    distance_to_goal: rec.distance_to_goal,
                    terminal: rec.terminal,
                });
            }
        }
    })?;
    if outcome.steps == 0 {
        if let Some(first) = rows.first_mut() {
            first.terminal = true;
        }
    }
    Ok(RunResult {
        run_id,
        outcome,
        drift,
        rows,
    })
}

fn theory_columns(point: &PointSpec) -> (Option<f64>, Option<f64>, bool) {
    let v = &point.values;
    let consts = disc_constants();
    let theory = match point.model {
        Model::Single => Some(single_agent_drift(&consts, v.mu)),
        Model::Linear(p) => Some(linear_drift_bound(p.n(), v.mu)),
        Model::Bearing(p) => v.psi_star.and_then(|psi| {
            var_star(p.delta_jump(), p.sigma_step(), psi)
                .ok()
                .map(|vs| bearing_drift_bound(p.n(), v.mu, vs))
        }),
    };
    let (bound, vacuous) = match (point.model, point.controller.goal(), v.delta_descent) {
        (Model::Single, Some(_), Some(delta)) => match k_delta_bound(v.d0, v.mu, delta, &consts) {
            Ok(k) => (Some(k), false),
            Err(SteerError::VacuousBound { .. }) => (None, true),
            Err(_) => (None, false),
        },
        _ => (None, false),
    };
    (theory, bound, vacuous)
}

pub fn summarize(point: &PointSpec, runs: &[RunResult]) -> SummaryRecord {
    let v = &point.values;
    let steps: Vec<f64> = runs
        .iter()
        .filter_map(|r| r.outcome.steps_to_target.map(|s| s as f64))
        .collect();
    let mut drift = Moments::default();
    for r in runs {
        drift.merge(&r.drift);
    }
    let (theory_drift, k_delta_bound, vacuous) = theory_columns(point);
    let successes = steps.len() as u64;
    let total = runs.len() as u64;
    SummaryRecord {
        system: point.system.to_string(),
        mu: v.mu,
        d0: v.d0,
        delta_descent: v.delta_descent,
        goal_radius: v.goal_radius,
        n: v.n,
        sigma: v.sigma,
        visibility: v.visibility,
        delta_jump: v.delta_jump,
        psi_star: v.psi_star,
        runs: total,
        successes,
        success_fraction: if total == 0 {
            0.0
        } else {
            successes as f64 / total as f64
        },
        mean_steps: (!steps.is_empty()).then(|| steps.iter().sum::<f64>() / steps.len() as f64),
        median_steps: quantile(&steps, 0.5),
        p95_steps: quantile(&steps, 0.95),
        drift: drift.mean(),
        drift_stderr: drift.std_error(),
        theory_drift,
        k_delta_bound,
        vacuous,
    }
}

/// Runs every parameter point without touching the filesystem.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let stride = cfg.write_trace.then_some(cfg.trace_stride);
    let points = cfg
        .points
        .iter()
        .enumerate()
        .map(|(idx, point)| {
            let runs = (0..cfg.runs)
                .into_par_iter()
                .map(|r| {
                    let run_id = idx as u64 * cfg.runs + r;
                    simulate_run(point, cfg.master_seed, r, run_id, cfg.max_steps, stride)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let summary = summarize(point, &runs);
            Ok(PointResult {
                point: *point,
                runs,
                summary,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(ExperimentResult { points })
}

/// Runs the experiment and writes `trace.csv` (unless disabled) and
/// `summary.csv` into `cfg.out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let result = execute(cfg)?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| HarnessError::io(&cfg.out_dir, e))?;
    if cfg.write_trace {
        write_trace(&cfg.out_dir.join(TRACE_FILE), cfg, result.trace())?;
    }
    write_summary(&cfg.out_dir.join(SUMMARY_FILE), &result.summary())?;
    Ok(result)
}

fn header_goal(cfg: &ExperimentConfig) -> String {
    let radius = cfg
        .points
        .first()
        .map(|p| p.values.goal_radius)
        .filter(|r| cfg.points.iter().all(|p| p.values.goal_radius == *r));
    match (cfg.direction, radius) {
        (None, Some(r)) => format!(
            " goal_x={} goal_y={} goal_radius={}",
            cfg.goal.x, cfg.goal.y, r
        ),
        (None, None) => format!(" goal_x={} goal_y={}", cfg.goal.x, cfg.goal.y),
        (Some(_), _) => String::new(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

pub fn write_trace<'a>(
    path: &Path,
    cfg: &ExperimentConfig,
    rows: impl IntoIterator<Item = &'a TraceRow>,
) -> Result<(), HarnessError> {
    let mut out = create(path)?;
    writeln!(
        out,
        "# {TRACE_SCHEMA} system={} seed={}{}",
        cfg.system,
        cfg.master_seed,
        header_goal(cfg)
    )
    .map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}

pub fn write_summary(path: &Path, rows: &[SummaryRecord]) -> Result<(), HarnessError> {
    let mut out = create(path)?;
    writeln!(out, "# {SUMMARY_SCHEMA}").map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}

/// Reads rows of a CSV written by this crate, skipping `#` comment lines.
pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(file);
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| HarnessError::Schema {
            path: PathBuf::from(path),
            reason: e.to_string(),
        })
}
