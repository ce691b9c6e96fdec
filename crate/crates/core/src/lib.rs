//! Exact computations for persistence modules over the Novikov ring, their
//! almost and Tamarkin quotients, interleaving distance, K₀ classes, and the
//! polyhedral fan combinatorics behind microlocal cut-off and Novikov toric
//! gluing.

pub mod barcode;
pub mod catalog;
pub mod cutoff;
pub mod fm;
pub mod geometry;
pub mod graded;
pub mod interleaving;
pub mod k0;
pub mod linalg;
pub mod rational;
pub mod toric;

pub use geometry::{Cone, Fan, GeometryError};
pub use linalg::FieldTag;
pub use rational::{Grade, QVec, Q};
