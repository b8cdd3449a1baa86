//! Seeded random instances for the property suites and the CLI.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numkernel::{DenseMatrix, TridiagonalMatrix};

pub const DEFAULT_SEED: u64 = 20240101;

/// Deterministic generator of test matrices with entries whose real and
/// imaginary parts are uniform in `[-1, 1]`.
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.rng.gen_range(-1.0..=1.0), self.rng.gen_range(-1.0..=1.0))
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn order(&mut self, min: usize, max: usize) -> usize {
        self.rng.gen_range(min..=max)
    }

    fn vec(&mut self, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| self.complex()).collect()
    }

    pub fn tridiagonal(&mut self, n: usize) -> TridiagonalMatrix {
        let sub = self.vec(n - 1);
        let diag = self.vec(n);
        let sup = self.vec(n - 1);
        TridiagonalMatrix::new(sub, diag, sup).expect("finite by construction")
    }

    pub fn dense(&mut self, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |_, _| self.complex())
    }

    /// Banded matrix with `bandwidth` diagonals centred on the main one
    /// (`bandwidth` odd).
    pub fn banded(&mut self, n: usize, bandwidth: usize) -> DenseMatrix {
        let half = (bandwidth / 2) as isize;
        DenseMatrix::from_fn(n, n, |i, j| {
            if (i as isize - j as isize).abs() <= half {
                self.complex()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Random real `k`-periodic background vectors, `a` in `[0.2, 2]` and
    /// `b` in `[-1, 1]`.
    pub fn periodic_vectors(&mut self, k: usize) -> (Vec<f64>, Vec<f64>) {
        let a = (0..k).map(|_| self.real(0.2, 2.0)).collect();
        let b = (0..k).map(|_| self.real(-1.0, 1.0)).collect();
        (a, b)
    }
}
