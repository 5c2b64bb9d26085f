//! Finite closure spaces, spatial logic over them, and a sequent checker.

pub mod algebra;
pub mod bitset;
pub mod doctrine;
pub mod error;
pub mod logic;
pub mod sequent;
pub mod spaces;

pub use error::{Error, Result};
