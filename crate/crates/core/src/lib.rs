//! Current noise of a double quantum dot coupled to a resonator.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod steady;
pub mod superop;
pub mod sweep;
pub mod system;

pub use error::{Error, Result};
pub use system::{full_generator, TransportSystem};
