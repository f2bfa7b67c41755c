pub mod cones;
pub mod doublecover;
pub mod enumerate;
pub mod error;
pub mod fibration;
pub mod lattice;
pub mod verify;

pub use error::{Error, Result};
