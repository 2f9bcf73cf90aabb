pub mod bounds;
pub mod channel;
pub mod detector;
pub mod error;
pub mod metrics;
pub mod optimize;
pub mod report;
pub mod rng;
pub mod subspace;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
