pub mod cli;
pub mod error;
pub mod fp;
pub mod frobenius;
pub mod group;
pub mod growth;
pub mod hom;
pub mod symchar;
pub mod verify;

pub use error::{Error, Result};
