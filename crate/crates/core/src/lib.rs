pub mod algebra;
pub mod comoment;
pub mod error;
pub mod forms;
pub mod lie;
pub mod random;
pub mod registry;

pub use error::{Error, Result};
