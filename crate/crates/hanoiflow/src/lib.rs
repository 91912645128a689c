//! Command-line front end, file formats and verification suite for
//! [`hanoiflow_core`].

pub mod commands;
pub mod dump;
pub mod error;
pub mod random;
pub mod records;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
