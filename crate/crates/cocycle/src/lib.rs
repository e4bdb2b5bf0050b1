//! Harmonic analysis on finite groups.
//!
//! The crate validates Cayley tables, computes a complete set of irreducible
//! unitary representations, implements the nonabelian Fourier transform, and
//! solves the d'Alembert, Wilson, and d'Alembert-long functional equations
//! with independently checkable certificates.

pub mod equations;
pub mod formats;
pub mod fourier;
pub mod group;
pub mod lemma;
pub mod matrix;
pub mod repr;
pub mod solver;

pub use matrix::{CMatrix, EigenResult, MatrixError};
pub use num_complex::Complex64;
