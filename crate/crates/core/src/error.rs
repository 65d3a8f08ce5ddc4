use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteerError {
    #[error("zero-length vector has no direction")]
    ZeroVector,
    #[error("input list is empty")]
    EmptyInput,
    #[error("invalid angle range: theta_hi ({hi}) must exceed theta_lo ({lo}) by less than 2π")]
    InvalidAngleRange { lo: f64, hi: f64 },
    #[error("invalid sector radius {0}")]
    InvalidRadius(f64),
    #[error("centroid coincides with the goal; steering direction is undefined")]
    DegenerateDirection,
    #[error("operation requires goal-seeking mode")]
    NotGoalSeeking,
    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("bound is vacuous: initial distance {d0} does not exceed equilibrium radius {radius}")]
    VacuousBound { d0: f64, radius: f64 },
    #[error("agent index {index} out of range for {len} agents")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected {expected} agents, got {actual}")]
    AgentCount { expected: usize, actual: usize },
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<(), SteerError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(SteerError::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
