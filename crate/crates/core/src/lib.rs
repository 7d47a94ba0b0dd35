pub mod error;
pub mod born;
pub mod dtn;
pub mod fourier;
pub mod highprec;
pub mod profiles;
pub mod harness;
pub mod reconstruct;

pub use error::{Error, Result};
