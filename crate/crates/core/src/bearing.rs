//! Limited-visibility, bearing-only gathering with random activation.
//!
//! Each step, every agent independently activates with probability
//! `delta_jump`. It senses only the directions to agents within the
//! visibility range. If those bearings do not fit inside a half-plane
//! (angular spread ≥ π) the agent is surrounded and holds; otherwise an
//! active agent plans a jump to a point uniform by area in the sector of
//! radius `sigma_step` spanning exactly the smallest cone of its neighbor
//! bearings. Agents with no visible neighbor hold.
//!
//! The sector construction is this crate's reading of the jump region: the
//! underlying gathering law is only referenced, never restated, in the
//! source material.

use alloc::vec::Vec;

use crate::controller::{desired_direction, stop_decision, ControllerConfig};
use crate::error::{check_range, SteerError};
use crate::geometry::{angular_spread, smallest_enclosing_disc, Cone, Vec2};
use crate::sampling::{sample_wedge, RngStream};
use crate::swarm::{apply_broadcast, centroid, Steerable, StepRecord, SwarmState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BearingParams {
    n: usize,
    visibility: f64,
    sigma_step: f64,
    delta_jump: f64,
}

impl BearingParams {
    pub fn new(
        n: usize,
        visibility: f64,
        sigma_step: f64,
        delta_jump: f64,
    ) -> Result<Self, SteerError> {
        check_range("n", n as f64, n >= 2, "n >= 2")?;
        check_range("visibility", visibility, visibility > 0.0, "visibility > 0")?;
        check_range("sigma", sigma_step, sigma_step > 0.0, "sigma > 0")?;
        check_range(
            "delta_jump",
            delta_jump,
            delta_jump > 0.0 && delta_jump <= 1.0,
            "0 < delta_jump <= 1",
        )?;
        Ok(Self {
            n,
            visibility,
            sigma_step,
            delta_jump,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn sigma_step(&self) -> f64 {
        self.sigma_step
    }

    pub fn delta_jump(&self) -> f64 {
        self.delta_jump
    }
}

/// One agent's decision for the coming step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentPlan {
    /// Planned displacement; zero when holding.
    pub planned: Vec2,
    /// Outcome of the activation coin.
    pub active: bool,
    /// Angular spread of the neighbor bearings (0 with no neighbors).
    pub spread: f64,
    /// Smallest cone of neighbor bearings, if any neighbor is sensed.
    pub cone: Option<Cone>,
}

impl AgentPlan {
    /// Whether the hold rule forces this agent to stay put.
    pub fn must_hold(&self) -> bool {
        !self.active || self.cone.is_none_or(|c| c.surrounds())
    }
}

/// Indices `j ≠ i` with `‖p_j − p_i‖ ≤ visibility`.
pub fn visible_neighbors(positions: &[Vec2], i: usize, visibility: f64) -> Vec<usize> {
    let Some(&p_i) = positions.get(i) else {
        return Vec::new();
    };
    positions
        .iter()
        .enumerate()
        .filter(|&(j, &q)| j != i && p_i.distance(q) <= visibility)
        .map(|(j, _)| j)
        .collect()
}

/// Plans agent `i`'s step from the current snapshot.
///
/// Draw order per agent: one word for the activation coin, then two words
/// for the sector sample only if the agent moves. Neighbors at exactly the
/// agent's own position carry no bearing and are ignored.
pub fn plan_bearing_step(
    positions: &[Vec2],
    i: usize,
    params: &BearingParams,
    rng: &mut RngStream,
) -> Result<AgentPlan, SteerError> {
    let p_i = *positions.get(i).ok_or(SteerError::IndexOutOfRange {
        index: i,
        len: positions.len(),
    })?;
    let active = rng.bernoulli(params.delta_jump);
    let bearings: Vec<Vec2> = visible_neighbors(positions, i, params.visibility)
        .into_iter()
        .map(|j| positions[j] - p_i)
        .filter(|b| b.norm() > 0.0)
        .collect();
    let cone = if bearings.is_empty() {
        None
    } else {
        Some(angular_spread(&bearings)?)
    };
    let mut plan = AgentPlan {
        planned: Vec2::ZERO,
        active,
        spread: cone.map_or(0.0, |c| c.width),
        cone,
    };
    if !plan.must_hold() {
        if let Some(c) = cone {
            plan.planned = sample_wedge(rng, params.sigma_step, c.start, c.width);
        }
    }
    Ok(plan)
}

/// Plans for every agent, in index order, from one snapshot.
pub fn plan_bearing(
    state: &SwarmState,
    params: &BearingParams,
    rng: &mut RngStream,
) -> Result<Vec<AgentPlan>, SteerError> {
    if state.positions.len() != params.n {
        return Err(SteerError::AgentCount {
            expected: params.n,
            actual: state.positions.len(),
        });
    }
    (0..state.positions.len())
        .map(|i| plan_bearing_step(&state.positions, i, params, rng))
        .collect()
}

/// One synchronous controlled step; also returns the per-agent plans.
pub fn step_bearing_with_plans(
    state: &mut SwarmState,
    params: &BearingParams,
    controller: &ControllerConfig,
    rng: &mut RngStream,
) -> Result<(StepRecord, Vec<AgentPlan>), SteerError> {
    let plans = plan_bearing(state, params, rng)?;
    let planned: Vec<Vec2> = plans.iter().map(|p| p.planned).collect();
    let planned_centroid = centroid(&planned);
    let d = desired_direction(controller, state.centroid())?;
    let decision = stop_decision(planned_centroid, d, controller.mu());
    apply_broadcast(state, &planned, decision.c);
    let p_cm = state.centroid();
    let record = StepRecord {
        k: state.k,
        centroid: p_cm,
        c: decision.c,
        projection: decision.projection,
        distance_to_goal: controller.distance_to_goal(p_cm),
        terminal: false,
    };
    Ok((record, plans))
}

pub fn step_bearing(
    state: &mut SwarmState,
    params: &BearingParams,
    controller: &ControllerConfig,
    rng: &mut RngStream,
) -> Result<StepRecord, SteerError> {
    step_bearing_with_plans(state, params, controller, rng).map(|(r, _)| r)
}

/// Radius of the exact smallest disc enclosing all agents.
pub fn gathered_radius(positions: &[Vec2]) -> f64 {
    smallest_enclosing_disc(positions).1
}

#[derive(Debug, Clone, PartialEq)]
pub struct BearingSwarm {
    pub state: SwarmState,
    pub params: BearingParams,
}

impl BearingSwarm {
    pub fn new(positions: Vec<Vec2>, params: BearingParams) -> Result<Self, SteerError> {
        if positions.len() != params.n {
            return Err(SteerError::AgentCount {
                expected: params.n,
                actual: positions.len(),
            });
        }
        Ok(Self {
            state: SwarmState::new(positions),
            params,
        })
    }
}

impl Steerable for BearingSwarm {
    fn centroid(&self) -> Vec2 {
        self.state.centroid()
    }

    fn step_index(&self) -> u64 {
        self.state.k
    }

    fn step(
        &mut self,
        controller: &ControllerConfig,
        rng: &mut RngStream,
    ) -> Result<StepRecord, SteerError> {
        step_bearing(&mut self.state, &self.params, controller, rng)
    }
}
