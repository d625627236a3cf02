//! Multi-base Goodstein processes over base hierarchies, with the ordinal
//! notation system used to certify their termination.

pub mod assignment;
pub mod classify;
pub mod error;
pub mod nat;
pub mod hierarchy;
pub mod ordinal;
pub mod process;
pub mod upgrade;

pub use error::{Error, Result};
