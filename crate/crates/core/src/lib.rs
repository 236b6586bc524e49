//! Exact verification toolkit for the six-class neighborhood structure of the
//! bilinear forms graph over GF(q).

pub mod eoracle;
pub mod error;
pub mod field;
pub mod kernel;
pub mod linalg;
pub mod local;
pub mod norton;
pub mod params;
pub mod report;
pub mod smodel;

pub use error::{Error, Result};

/// Library version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
