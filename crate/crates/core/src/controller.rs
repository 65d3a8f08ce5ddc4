//! The external observer. It sees only the planned centroid displacement
//! and broadcasts one scale factor `c ∈ {μ, 1}` to every agent.

use crate::error::{check_range, SteerError};
use crate::geometry::Vec2;

/// How the required direction of motion is chosen each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteeringMode {
    /// Constant unit direction.
    FixedDirection(Vec2),
    /// Direction from the current centroid towards a goal point.
    GoalSeeking(Vec2),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerConfig {
    mu: f64,
    mode: SteeringMode,
    goal_radius: f64,
}

pub const DEFAULT_GOAL_RADIUS: f64 = 1.0;

impl ControllerConfig {
    /// Stop fraction `mu` must lie in `(0, 1]`; `mu = 1` disables control.
    pub fn new(mu: f64, mode: SteeringMode, goal_radius: f64) -> Result<Self, SteerError> {
        check_range("mu", mu, mu > 0.0 && mu <= 1.0, "0 < mu <= 1")?;
        check_range(
            "goal_radius",
            goal_radius,
            goal_radius > 0.0,
            "goal_radius > 0",
        )?;
        let mode = match mode {
            SteeringMode::FixedDirection(d) => SteeringMode::FixedDirection(d.unit()?),
            SteeringMode::GoalSeeking(g) => {
                if !g.is_finite() {
                    return Err(SteerError::OutOfRange {
                        name: "goal",
                        value: f64::NAN,
                        expected: "finite coordinates",
                    });
                }
                SteeringMode::GoalSeeking(g)
            }
        };
        Ok(Self {
            mu,
            mode,
            goal_radius,
        })
    }

    pub fn fixed(mu: f64, direction: Vec2) -> Result<Self, SteerError> {
        Self::new(
            mu,
            SteeringMode::FixedDirection(direction),
            DEFAULT_GOAL_RADIUS,
        )
    }

    pub fn goal_seeking(mu: f64, goal: Vec2, goal_radius: f64) -> Result<Self, SteerError> {
        Self::new(mu, SteeringMode::GoalSeeking(goal), goal_radius)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mode(&self) -> SteeringMode {
        self.mode
    }

    pub fn goal_radius(&self) -> f64 {
        self.goal_radius
    }

    pub fn goal(&self) -> Option<Vec2> {
        match self.mode {
            SteeringMode::GoalSeeking(g) => Some(g),
            SteeringMode::FixedDirection(_) => None,
        }
    }

    /// Distance from `p_cm` to the goal, in goal-seeking mode.
    pub fn distance_to_goal(&self, p_cm: Vec2) -> Option<f64> {
        self.goal().map(|g| g.distance(p_cm))
    }
}

/// One broadcast decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopDecision {
    /// Scale applied to every agent's planned step: `mu` or `1`.
    pub c: f64,
    /// Projection of the planned centroid displacement on the direction.
    pub projection: f64,
}

impl StopDecision {
    pub fn stopped(&self) -> bool {
        self.projection < 0.0
    }
}

pub fn desired_direction(config: &ControllerConfig, p_cm: Vec2) -> Result<Vec2, SteerError> {
    match config.mode {
        SteeringMode::FixedDirection(d) => Ok(d),
        SteeringMode::GoalSeeking(goal) => (goal - p_cm)
            .unit()
            .map_err(|_| SteerError::DegenerateDirection),
    }
}

/// Stop (scale by `mu`) iff the planned centroid move points strictly
/// against `d`. A zero projection lets the agents finish their steps.
pub fn stop_decision(planned_cm_displacement: Vec2, d: Vec2, mu: f64) -> StopDecision {
    let projection = planned_cm_displacement.dot(d);
    let c = if projection < 0.0 { mu } else { 1.0 };
    StopDecision { c, projection }
}

/// Closed-disc test against the goal area.
pub fn goal_reached(p_cm: Vec2, config: &ControllerConfig) -> Result<bool, SteerError> {
    match config.mode {
        SteeringMode::GoalSeeking(goal) => Ok((goal - p_cm).norm() <= config.goal_radius),
        SteeringMode::FixedDirection(_) => Err(SteerError::NotGoalSeeking),
    }
}
