//! Finite sections of complex perturbed Jacobi matrices and block Toeplitz
//! matrices, the eigen/singular-value kernels needed to look at their
//! spectra, and the report builders that compare those spectra with the
//! spectral symbol of the family.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel rung evaluation live in the `speclab` companion crate.
//!
//! Layout:
//! - [`numkernel`]: dense/tridiagonal containers, Hessenberg QR, symmetric
//!   QL, one-sided Jacobi SVD, norms.
//! - [`sequences`]: coefficient rules, presets and every matrix family.
//! - [`symbols`]: matrix-valued trigonometric symbols and their integrals.
//! - [`testfn`]: the test functions used for eigenvalue means.
//! - [`analysis`]: distribution, cluster and attraction reports, and the
//!   inequality checks.
//! - [`normlab`]: diagonal decomposition and trace-norm equivalence.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod normlab;
pub mod numkernel;
pub mod random;
pub mod sequences;
pub mod symbols;
pub mod testfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numkernel::{DenseMatrix, Spectrum, SquareMatrix, TridiagonalMatrix};

/// Convenience constructor for complex literals.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
