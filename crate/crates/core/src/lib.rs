//! Numerical checks for almost complex structures: torsion on chart balls,
//! closure of eigen-distributions, and invariant complex structures on
//! homogeneous spaces described at the Lie algebra level.

pub mod chart;
pub mod error;
pub mod flag;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod rng;

pub use error::{Error, Result};
