//! Full-visibility linear gathering with additive disc noise.
//!
//! Each agent plans `−σ Σ_j (p_i − p_j) + Δ̃_i` with `Δ̃_i` uniform in a disc
//! of radius `noise_radius`; the controller scales every plan by the same
//! `c`. The gathering terms cancel in the centroid, so the centroid's
//! planned displacement is the average noise.

use alloc::vec::Vec;

use crate::controller::{desired_direction, stop_decision, ControllerConfig};
use crate::error::{check_range, SteerError};
use crate::geometry::Vec2;
use crate::sampling::{sample_unit_disc, RngStream};
use crate::swarm::{apply_broadcast, centroid, Steerable, StepRecord, SwarmState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearParams {
    n: usize,
    sigma_gain: f64,
    noise_radius: f64,
}

impl LinearParams {
    /// Requires `n ≥ 2`, `0 < sigma_gain < 2/n` and `noise_radius ≥ 0`.
    pub fn new(n: usize, sigma_gain: f64, noise_radius: f64) -> Result<Self, SteerError> {
        check_range("n", n as f64, n >= 2, "n >= 2")?;
        check_range(
            "sigma",
            sigma_gain,
            sigma_gain > 0.0 && sigma_gain < 2.0 / n as f64,
            "0 < sigma < 2/n",
        )?;
        check_range(
            "noise_radius",
            noise_radius,
            noise_radius >= 0.0,
            "noise_radius >= 0",
        )?;
        Ok(Self {
            n,
            sigma_gain,
            noise_radius,
        })
    }

    /// Unit noise and the midpoint gain `1/n`.
    pub fn with_defaults(n: usize) -> Result<Self, SteerError> {
        Self::new(n, 1.0 / n as f64, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma_gain(&self) -> f64 {
        self.sigma_gain
    }

    pub fn noise_radius(&self) -> f64 {
        self.noise_radius
    }
}

/// `−σ Σ_j (p_i − p_j)`, evaluated as `−σ (n p_i − Σ_j p_j)`.
pub fn gather_term(positions: &[Vec2], i: usize, sigma_gain: f64) -> Result<Vec2, SteerError> {
    let p_i = *positions.get(i).ok_or(SteerError::IndexOutOfRange {
        index: i,
        len: positions.len(),
    })?;
    let sum = positions.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
    Ok(-(p_i * positions.len() as f64 - sum) * sigma_gain)
}

/// Planned per-agent displacements and the planned centroid displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPlan {
    pub planned: Vec<Vec2>,
    pub planned_centroid: Vec2,
}

/// Draws one noise sample per agent (in index order) and adds the
/// gathering term computed from the current snapshot.
pub fn plan_linear(
    state: &SwarmState,
    params: &LinearParams,
    rng: &mut RngStream,
) -> Result<LinearPlan, SteerError> {
    let positions = &state.positions;
    if positions.len() != params.n {
        return Err(SteerError::AgentCount {
            expected: params.n,
            actual: positions.len(),
        });
    }
    let n = positions.len() as f64;
    let sum = positions.iter().fold(Vec2::ZERO, |acc, &p| acc + p);
    let mut noise_sum = Vec2::ZERO;
    let planned = positions
        .iter()
        .map(|&p| {
            let noise = sample_unit_disc(rng) * params.noise_radius;
            noise_sum += noise;
            -(p * n - sum) * params.sigma_gain + noise
        })
        .collect();
    Ok(LinearPlan {
        planned,
        planned_centroid: noise_sum / n,
    })
}

/// One synchronous controlled step.
pub fn step_linear(
    state: &mut SwarmState,
    params: &LinearParams,
    controller: &ControllerConfig,
    rng: &mut RngStream,
) -> Result<StepRecord, SteerError> {
    let plan = plan_linear(state, params, rng)?;
    let d = desired_direction(controller, state.centroid())?;
    let decision = stop_decision(plan.planned_centroid, d, controller.mu());
    apply_broadcast(state, &plan.planned, decision.c);
    let p_cm = centroid(&state.positions);
    Ok(StepRecord {
        k: state.k,
        centroid: p_cm,
        c: decision.c,
        projection: decision.projection,
        distance_to_goal: controller.distance_to_goal(p_cm),
        terminal: false,
    })
}

/// A linear swarm bundled with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSwarm {
    pub state: SwarmState,
    pub params: LinearParams,
}

impl LinearSwarm {
    pub fn new(positions: Vec<Vec2>, params: LinearParams) -> Result<Self, SteerError> {
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

impl Steerable for LinearSwarm {
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
        step_linear(&mut self.state, &self.params, controller, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::swarm::random_disc_placement;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn quiet(n: usize, sigma: f64) -> LinearParams {
        LinearParams::new(n, sigma, 0.0).unwrap()
    }

    #[test]
    fn gather_term_examples() {
        let two = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
        assert_eq!(gather_term(&two, 0, 0.5).unwrap(), Vec2::new(0.5, 0.0));
        let same = [Vec2::new(3.0, -2.0); 5];
        for i in 0..5 {
            assert_eq!(gather_term(&same, i, 0.1).unwrap(), Vec2::ZERO);
        }
        assert!(gather_term(&two, 2, 0.5).is_err());
    }

    #[test]
    fn param_ranges() {
        assert!(LinearParams::new(10, 0.5, 1.0).is_err());
        assert!(LinearParams::new(10, 0.2, 1.0).is_err());
        assert!(LinearParams::new(10, 0.19, 1.0).is_ok());
        assert!(LinearParams::new(1, 0.5, 1.0).is_err());
        assert!(LinearParams::new(4, 0.1, -1.0).is_err());
    }

    #[test]
    fn noiseless_centroid_is_invariant_and_swarm_gathers() {
        let mut rng = RngStream::from_seed(9);
        let ctl = ControllerConfig::goal_seeking(0.2, Vec2::new(50.0, 0.0), 1.0).unwrap();
        for _ in 0..5 {
            let start = random_disc_placement(5, Vec2::ZERO, 10.0, &mut rng);
            let mut state = SwarmState::new(start);
            let c0 = state.centroid();
            let params = quiet(5, 0.3);
            let mut prev = state.max_pairwise_distance();
            for _ in 0..200 {
                let rec = step_linear(&mut state, &params, &ctl, &mut rng).unwrap();
                assert_eq!(rec.c, 1.0);
                assert!((state.centroid() - c0).norm() < 1e-12);
                let spread = state.max_pairwise_distance();
                if prev > 1e-9 {
                    assert!(spread < prev);
                }
                prev = spread;
            }
            assert!(prev < 1e-9);
        }
    }

    #[test]
    fn broadcast_scales_every_plan_identically() {
        let params = LinearParams::with_defaults(8).unwrap();
        let ctl = ControllerConfig::goal_seeking(0.05, Vec2::new(100.0, 0.0), 1.0).unwrap();
        let mut rng = RngStream::from_seed(21);
        let mut state = SwarmState::new(random_disc_placement(8, Vec2::ZERO, 5.0, &mut rng));
        for step in 0..2_000 {
            let before = state.clone();
            let mut replay = RngStream::from_seed(1_000 + step);
            let plan = plan_linear(&before, &params, &mut replay.clone()).unwrap();
            let rec = step_linear(&mut state, &params, &ctl, &mut replay).unwrap();
            for i in 0..8 {
                let moved = state.positions[i] - before.positions[i];
                assert!((moved - plan.planned[i] * rec.c).norm() < 1e-12);
            }
            let cm_move = state.centroid() - before.centroid();
            assert!((cm_move - plan.planned_centroid * rec.c).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn gather_terms_cancel(
            pts in proptest::collection::vec((-20.0..20.0_f64, -20.0..20.0_f64), 2..15),
        ) {
            let p: Vec<Vec2> = pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
            let sigma = 1.0 / p.len() as f64;
            let total = (0..p.len())
                .map(|i| gather_term(&p, i, sigma).unwrap())
                .fold(Vec2::ZERO, |a, b| a + b);
            prop_assert!(total.norm() < 1e-9);
        }
    }
}
