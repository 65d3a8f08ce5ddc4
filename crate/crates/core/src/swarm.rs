//! Shared state types and the controlled run loop.

use alloc::vec::Vec;

use crate::controller::{goal_reached, ControllerConfig};
use crate::error::SteerError;
use crate::geometry::Vec2;
use crate::sampling::{sample_unit_disc, RngStream};

/// Positions of all agents at step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<Vec2>,
    pub k: u64,
}

impl SwarmState {
    pub fn new(positions: Vec<Vec2>) -> Self {
        Self { positions, k: 0 }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn centroid(&self) -> Vec2 {
        centroid(&self.positions)
    }

    /// Largest distance between any two agents.
    pub fn max_pairwise_distance(&self) -> f64 {
        let p = &self.positions;
        let mut best = 0.0_f64;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                best = best.max(p[i].distance(p[j]));
            }
        }
        best
    }
}

/// Arithmetic mean of `positions`; the origin for an empty slice.
pub fn centroid(positions: &[Vec2]) -> Vec2 {
    if positions.is_empty() {
        return Vec2::ZERO;
    }
    let mut sum = Vec2::ZERO;
    for &p in positions {
        sum += p;
    }
    sum / positions.len() as f64
}

/// Moves every agent by `c` times its own plan and advances the step index.
pub fn apply_broadcast(state: &mut SwarmState, planned: &[Vec2], c: f64) {
    debug_assert_eq!(state.positions.len(), planned.len());
    for (p, &step) in state.positions.iter_mut().zip(planned) {
        *p += step * c;
    }
    state.k += 1;
}

/// `n` points uniform in the disc of `radius` around `center`.
pub fn random_disc_placement(
    n: usize,
    center: Vec2,
    radius: f64,
    rng: &mut RngStream,
) -> Vec<Vec2> {
    (0..n)
        .map(|_| center + sample_unit_disc(rng) * radius)
        .collect()
}

/// Whether the graph linking agents within `visibility` of each other is connected.
pub fn is_visibility_connected(positions: &[Vec2], visibility: f64) -> bool {
    if positions.is_empty() {
        return true;
    }
    let mut seen = alloc::vec![false; positions.len()];
    let mut stack = alloc::vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for (j, &q) in positions.iter().enumerate() {
            if !seen[j] && positions[i].distance(q) <= visibility {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == positions.len()
}

/// Rejection-samples [`random_disc_placement`] until the visibility graph
/// is connected. Gives up after `max_attempts` draws.
pub fn connected_placement(
    n: usize,
    center: Vec2,
    radius: f64,
    visibility: f64,
    max_attempts: usize,
    rng: &mut RngStream,
) -> Option<Vec<Vec2>> {
    (0..max_attempts)
        .map(|_| random_disc_placement(n, center, radius, rng))
        .find(|p| is_visibility_connected(p, visibility))
}

/// One completed controlled step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Index of the step just completed (1 for the first step).
    pub k: u64,
    /// Centroid after the step.
    pub centroid: Vec2,
    /// Broadcast scale applied during the step.
    pub c: f64,
    /// Planned centroid displacement projected on the required direction.
    pub projection: f64,
    /// Distance from the centroid to the goal after the step.
    pub distance_to_goal: Option<f64>,
    /// Set on the last record of a run.
    pub terminal: bool,
}

impl StepRecord {
    /// Actual centroid displacement along the step's required direction.
    pub fn drift(&self) -> f64 {
        self.c * self.projection
    }
}

/// A system the broadcast controller can steer one step at a time.
pub trait Steerable {
    fn centroid(&self) -> Vec2;

    fn step_index(&self) -> u64;

    /// Advance one synchronous step under `controller`.
    fn step(
        &mut self,
        controller: &ControllerConfig,
        rng: &mut RngStream,
    ) -> Result<StepRecord, SteerError>;
}

/// How a controlled run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub start_centroid: Vec2,
    pub steps: u64,
    /// First step count at which the centroid was inside the goal disc;
    /// `None` if the run hit `max_steps` first or has no goal.
    pub steps_to_target: Option<u64>,
}

/// Steps `system` until its centroid enters the goal disc or `max_steps`
/// steps have been taken. The goal test runs before the first step and
/// after every step, so a run starting inside the goal takes zero steps.
pub fn run_controlled<S: Steerable + ?Sized>(
    system: &mut S,
    controller: &ControllerConfig,
    max_steps: u64,
    rng: &mut RngStream,
    mut on_record: impl FnMut(&StepRecord),
) -> Result<RunOutcome, SteerError> {
    let start_centroid = system.centroid();
    let seeking = controller.goal().is_some();
    let start_k = system.step_index();
    if seeking && goal_reached(start_centroid, controller)? {
        return Ok(RunOutcome {
            start_centroid,
            steps: 0,
            steps_to_target: Some(0),
        });
    }
    let mut steps = 0;
    while steps < max_steps {
        let mut record = system.step(controller, rng)?;
        steps += 1;
        let arrived = seeking && goal_reached(record.centroid, controller)?;
        record.terminal = arrived || steps == max_steps;
        on_record(&record);
        if arrived {
            return Ok(RunOutcome {
                start_centroid,
                steps,
                steps_to_target: Some(system.step_index() - start_k),
            });
        }
    }
    Ok(RunOutcome {
        start_centroid,
        steps,
        steps_to_target: None,
    })
}
