//! Cyclic A-infinity algebras over the rationals: structure checks,
//! cyclic models, potentials and their filtered versions.

pub mod ainfty;
pub mod bimodule;
pub mod cyclic;
pub mod error;
pub mod filtered;
pub mod fixtures;
pub mod graded;
pub mod potential;
pub mod random;
pub mod report;

pub use error::{Error, Result};
pub use report::{Failure, RelationReport};
