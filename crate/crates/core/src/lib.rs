pub mod cli;
pub mod error;
pub mod esa;
pub mod experiments;
pub mod fractional_time;
pub mod linalg;
pub mod properties;
pub mod qsc;
pub mod schemes;
pub mod special;

pub use error::{Error, Result};
