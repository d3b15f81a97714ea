//! QAOA toolkit for linear-chain quantum processors.
//!
//! The pipeline runs problem → [`problem::WeightGraph`] → optimal angles
//! ([`engine`]) → scheduled physical circuit ([`compiler`]) → OpenQASM
//! ([`qasm`]) → sampled counts ([`tasks`]).

pub mod bench;
pub mod circuit;
pub mod compiler;
pub mod engine;
mod error;
pub mod fmt;
pub mod hardware;
pub mod problem;
pub mod qasm;
pub mod sim;
pub mod tasks;

pub use error::{Error, Result};
