//! Exact rational polyhedral cones and fans.

mod cone;
mod fan;
mod json;

pub use cone::Cone;
pub use fan::{separating_vector, validate_fan, Fan, FanCone};
pub use json::FanInput;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone {id} is not proper")]
    ImproperCone { id: String },
    #[error("face {face} of cone {cone} is not a member of the fan")]
    MissingFace { cone: String, face: String },
    #[error("cones {first} and {second} meet in {intersection}, which is not a face of both")]
    BadIntersection {
        first: String,
        second: String,
        intersection: String,
    },
    #[error("cones are not separable: {reason}")]
    NotSeparable { reason: String },
}
