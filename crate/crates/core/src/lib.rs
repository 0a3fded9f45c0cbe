pub mod beta;
pub mod cli;
pub mod data;
pub mod distribution;
pub mod error;
pub mod glm;
pub mod numerics;

pub use error::{Error, Result};
