//! Renorming constructions and diametral-point diagnostics on
//! finite-dimensional unit balls, with every closed-form norm checked
//! against LP and vertex-enumeration oracles.

pub mod diag;
pub mod error;
pub mod jsonfmt;
pub mod lp;
pub mod polytope;
pub mod renorm;
pub mod space;
pub mod sums;
pub mod tensor;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use space::{PExp, SpaceDescriptor};
pub use vector::SparseVector;

/// The single comparison tolerance used by every geometric predicate.
pub const TOL: f64 = 1e-9;
