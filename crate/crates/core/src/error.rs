use thiserror::Error;

use crate::config::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration:\n{0}")]
    Invalid(ValidationReport),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown polygon `{0}`")]
    UnknownPolygon(String),

    #[error("unknown angle `{0}`")]
    UnknownAngle(String),

    #[error("angle `{angle}` lies in polygon `{polygon}` of size {size}, which is not an edge")]
    NotAnEdge {
        angle: String,
        polygon: String,
        size: usize,
    },

    #[error("step count {steps} out of range 1..={valency} at angle `{angle}`")]
    StepOutOfRange {
        angle: String,
        steps: usize,
        valency: usize,
    },

    #[error("paths are not composable: `{left}` ends at `{left_end}`, `{right}` starts at `{right_start}`")]
    NotComposable {
        left: String,
        left_end: String,
        right: String,
        right_start: String,
    },

    #[error(
        "polygon `{polygon}` violates condition (E) ({direction}): neighbour of angle `{angle}` lies in `{offending}`"
    )]
    ConditionE {
        polygon: String,
        direction: String,
        angle: String,
        offending: String,
    },

    #[error("flip step {index} failed: {source}")]
    FlipStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("infeasible generator bounds: {0}")]
    Infeasible(String),

    #[error("chain map for arrow `{0}` does not commute with the differentials")]
    CommutingSquare(String),

    #[error("no good prime found: {0}")]
    BadPrime(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
