pub mod cli;
pub mod composite;
pub mod error;
pub mod fock;
pub mod limits;
pub mod qarith;
pub mod realizations;
pub mod verifier;

pub use error::{Error, Result};
