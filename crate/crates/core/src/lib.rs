//! Exact counts of commuting pairs of 2×2 rational matrices drawn from
//! finite measures, with the energies and profiles they reduce to.

pub mod commute;
pub mod error;
pub mod exact;
pub mod generators;
pub mod harness;
pub mod measures;
pub mod oracle;
pub mod profiles;
pub mod roots;

pub use error::{Error, Result};
pub use exact::{Mat2, Scalar};
pub use measures::{AsWeights, Exponent, MatrixMeasure, ScalarMeasure, ScalarSet, Weights};
