//! Virtual neutral-atom (Rydberg) quantum processor.
//!
//! A trace-non-increasing density-matrix simulator carrying the device's
//! native lossy gate operators and idle decoherence, a transpiler targeting
//! static and reconfigurable connectivity, and the quantum-volume,
//! Bernstein-Vazirani and Grover benchmark procedures.
//!
//! Computational-basis convention: qubit 0 is the most significant bit.

pub mod bench;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod noise;
pub mod runner;
pub mod state;
pub mod transpile;

pub use error::{Error, Result};
