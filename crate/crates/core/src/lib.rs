//! Quantum estimation of the neutrino mixing angle.
//!
//! [`linalg`] holds small dense complex matrices and a Hermitian eigensolver.
//! [`qet`] builds the symmetric logarithmic derivative, quantum and classical
//! Fisher information and Cramér–Rao bounds on top of it. [`neutrino`] supplies
//! the two-flavor oscillation states and measurements, and [`entanglement`]
//! quantifies their mode entanglement.

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod neutrino;
pub mod qet;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use qet::{DensityMatrix, Povm};
