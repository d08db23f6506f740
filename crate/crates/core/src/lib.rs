//! Expander extraction and small `K_t` minors and subdivisions.

pub mod error;
pub mod expansion;
pub mod graph;
pub mod harness;
pub mod io;
pub mod minor;
pub mod subdivision;
pub mod verify;

pub use error::{Error, Result};
