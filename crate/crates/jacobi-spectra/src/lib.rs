//! Discrete spectra of complex Jacobi matrices.
//!
//! A complex Jacobi matrix that differs from the free discrete laplacian in
//! finitely many entries is handled through its perturbation determinant
//! `Δ(z, J)`, an analytic function on the unit disk whose zeros map to the
//! eigenvalues under `λ = (z + 1/z)/2`.
//!
//! * [`core`] holds the matrix types, the Joukowski map, moments and decay fits.
//! * [`detkit`] evaluates `Δ` four ways and builds its Taylor series.
//! * [`spectra`] finds zeros in the disk and cross-checks them against a dense solver.
//! * [`scattering`] runs forward and inverse scattering for real symmetric matrices.
//! * [`pavlov`] builds a matrix whose eigenvalues accumulate at an interior point of `[-1, 1]`.
//! * [`cli`] is the command-line front end.
//! * [`fixtures`] draws the seeded random specs used by the examples and tests.

pub mod cli;
pub mod core;
pub mod detkit;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod pavlov;
pub mod quad;
pub mod scattering;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
