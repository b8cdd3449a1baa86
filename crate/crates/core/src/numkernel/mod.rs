//! Dense and tridiagonal complex matrices and the spectral kernels the rest
//! of the crate consumes.
//!
//! - General spectra: complex single-shift Hessenberg QR with Wilkinson
//!   shift ([`eig_general`], [`eig_dense`]).
//! - Hermitian spectra: implicit QL on real symmetric tridiagonal matrices
//!   ([`eig_hermitian`]); complex Hermitian inputs are reduced to that form.
//! - Singular values: one-sided cyclic Jacobi ([`singular_values`]).
//!
//! Tolerances are relative to `‖A‖_[1]`, the entrywise ℓ¹ norm.

mod hessenberg;
mod matrix;
mod svd;
mod symtri;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use hessenberg::{
    eig_dense, eig_general, hessenberg_qr, reduce_to_hessenberg, HessenbergForm, DEFLATION_TOL,
    EXCEPTIONAL_SHIFT_PERIOD, ITERATIONS_PER_EIGENVALUE,
};
pub use matrix::{DenseMatrix, SquareMatrix, TridiagonalMatrix};
pub use svd::{entrywise_l1, operator_norm, singular_values, trace_norm, ROTATION_SINE_TOL, SWEEP_BUDGET};
pub use symtri::{eig_hermitian, eig_hermitian_dense, eig_hermitian_tridiagonal, symmetric_tridiagonal_eigenvalues};

/// Eigenvalues of one matrix, with multiplicity, plus solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    /// Largest subdiagonal modulus neglected at a deflation.
    max_residual: f64,
    iterations: usize,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<Complex64>, max_residual: f64, iterations: usize) -> Self {
        Spectrum { eigenvalues, max_residual, iterations }
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn into_eigenvalues(self) -> Vec<Complex64> {
        self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checks `|Σλ - tr A| <= 1e-10 (1 + ‖A‖_[1])`.
    pub fn preserves_trace<M: SquareMatrix + ?Sized>(&self, a: &M) -> bool {
        self.len() == a.order() && (self.sum() - a.trace()).norm() <= 1e-10 * (1.0 + a.entrywise_l1())
    }

    /// Eigenvalues sorted by real part, then imaginary part.
    pub fn sorted_by_real(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

/// Greedy multiset match: the largest distance from an element of `a` to
/// its nearest unused partner in `b`. Infinite when lengths differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = alloc::vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}
