#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod rpca;
pub mod graph;
pub mod predict;
pub mod eval;

pub use error::{Error, Result};
