use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid step: dt must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("goal coincides with the robot position")]
    DegenerateGoal,
    #[error("degenerate triangle: third side is (close to) zero")]
    DegenerateTriangle,
    #[error("angle {0} outside the open interval (0, pi)")]
    InvalidAngle(f64),
    #[error("scan does not cover the front and the followed side ({0} beams)")]
    InsufficientScan(usize),
    #[error("velocity search space is empty")]
    EmptySearchSpace,
    #[error("point ({0}, {1}) lies outside the world bounds")]
    OutOfBounds(f64, f64),
    #[error("no runs to aggregate")]
    NoRuns,
    #[error("trajectory log has no samples")]
    EmptyLog,
    #[error("trajectory log has no reference path")]
    NoReference,
    #[error("trajectory log has no sensor readings")]
    NoSensorData,
}
