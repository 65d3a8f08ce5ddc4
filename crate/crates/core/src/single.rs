//! A single random walker: each step it plans a jump uniform in the unit
//! disc, and the controller lets it finish or stops it at fraction `mu`.

use alloc::vec::Vec;

use crate::controller::{desired_direction, stop_decision, ControllerConfig};
use crate::error::SteerError;
use crate::geometry::Vec2;
use crate::sampling::{sample_unit_disc, RngStream};
use crate::swarm::{run_controlled, RunOutcome, Steerable, StepRecord};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleAgentState {
    pub p: Vec2,
    pub k: u64,
}

impl SingleAgentState {
    pub fn new(p: Vec2) -> Self {
        Self { p, k: 0 }
    }
}

/// Planned displacement for the coming step.
pub fn plan_step(rng: &mut RngStream) -> Vec2 {
    sample_unit_disc(rng)
}

pub fn apply_step(state: SingleAgentState, planned: Vec2, c: f64) -> SingleAgentState {
    SingleAgentState {
        p: state.p + planned * c,
        k: state.k + 1,
    }
}

impl Steerable for SingleAgentState {
    fn centroid(&self) -> Vec2 {
        self.p
    }

    fn step_index(&self) -> u64 {
        self.k
    }

    fn step(
        &mut self,
        controller: &ControllerConfig,
        rng: &mut RngStream,
    ) -> Result<StepRecord, SteerError> {
        let planned = plan_step(rng);
        let d = desired_direction(controller, self.p)?;
        let decision = stop_decision(planned, d, controller.mu());
        *self = apply_step(*self, planned, decision.c);
        Ok(StepRecord {
            k: self.k,
            centroid: self.p,
            c: decision.c,
            projection: decision.projection,
            distance_to_goal: controller.distance_to_goal(self.p),
            terminal: false,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleRun {
    pub trace: Vec<StepRecord>,
    pub outcome: RunOutcome,
}

impl SingleRun {
    pub fn steps_to_target(&self) -> Option<u64> {
        self.outcome.steps_to_target
    }
}

/// Runs one walker from `start` and keeps the full trace.
pub fn run_single(
    config: &ControllerConfig,
    start: Vec2,
    max_steps: u64,
    rng: &mut RngStream,
) -> Result<SingleRun, SteerError> {
    let mut state = SingleAgentState::new(start);
    let mut trace = Vec::new();
    let outcome = run_controlled(&mut state, config, max_steps, rng, |r| trace.push(*r))?;
    Ok(SingleRun { trace, outcome })
}
