//! Exact classical W-algebras: finite Poisson brackets on Slodowy slices,
//! affine λ-brackets, Hamiltonian reduction and Drinfeld-Sokolov hierarchies.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod cli;
pub mod diffpoly;
pub mod error;
pub mod hierarchy;
pub mod lie;
pub mod linalg;
pub mod pva;
pub mod rational;
pub mod walgebra;

pub use error::{Error, Result};
