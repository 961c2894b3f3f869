use thiserror::Error;

use crate::plan::PlanResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("half angle must lie in [0, pi], got {0}")]
    InvalidHalfAngle(f64),
    #[error("sector length must be non-negative and finite, got {0}")]
    InvalidLength(f64),
    #[error("direction undefined for coincident points")]
    ZeroVector,
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("could not place obstacle {index} after {attempts} attempts")]
    GenerationFailed { index: usize, attempts: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalPlanError {
    #[error("cell size must be positive and finite")]
    InvalidCellSize,
    #[error("source cell is blocked")]
    SourceBlocked,
    #[error("destination cell is blocked")]
    DestinationBlocked,
    #[error("cell {0:?} lies outside the grid")]
    OutOfGrid((usize, usize)),
    #[error("no global path between source and destination")]
    NoGlobalPath,
}

#[derive(Debug, Error)]
pub enum PlanError {
    /// The run finished without any vertex entering the goal region; the
    /// partial result still carries metrics and the explored tree.
    #[error("no path found after {} iterations", .0.metrics.iterations)]
    NoPathFound(Box<PlanResult>),
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
    #[error("free-space sampling exhausted after {0} consecutive rejections")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Scenario(#[from] WorldError),
}
