pub mod cli;
pub mod error;
pub mod exponent;
pub mod prob;
pub mod scheme;
pub mod sim;

pub use error::{Error, Result};
