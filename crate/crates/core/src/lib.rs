//! Broadcast steering of random walkers and gathering swarms.
//!
//! An external observer watches only the centroid of a group of identical,
//! anonymous agents. Each step it looks at the direction the centroid is
//! about to move; if that direction points away from where the group should
//! go, it broadcasts a single "stop" signal and every agent completes only a
//! fraction `mu` of its planned step. The asymmetry biases the centroid's
//! otherwise unbiased wandering towards the target.
//!
//! Three systems are provided:
//!
//! * [`single`]: one agent jumping uniformly in the unit disc,
//! * [`linear`]: full-visibility linear gathering with additive disc noise,
//! * [`bearing`]: limited-visibility, bearing-only gathering with random
//!   activation.
//!
//! [`bounds`] holds the matching closed-form drift and hitting-time bounds.
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bearing;
pub mod bounds;
pub mod controller;
pub mod error;
pub mod geometry;
pub mod linear;
pub mod sampling;
pub mod single;
pub mod swarm;

pub use controller::{ControllerConfig, SteeringMode, StopDecision};
pub use error::SteerError;
pub use geometry::{Cone, Vec2};
pub use sampling::RngStream;
pub use swarm::{run_controlled, RunOutcome, Steerable, StepRecord, SwarmState};
