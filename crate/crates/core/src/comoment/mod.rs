//! Homotopy comoment maps: models, constructions, verification and
//! existence criteria.

pub mod construct;
pub mod model;
pub mod obstruction;
pub mod types;
pub mod verify;

pub use construct::*;
pub use model::{ActionModel, Manifold};
pub use obstruction::*;
pub use types::{koszul_sign, Comoment};
pub use verify::*;
