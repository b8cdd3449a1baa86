//! One-sided cyclic Jacobi SVD (singular values only) and the norms built on
//! it.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{DenseMatrix, SquareMatrix};
use crate::{Error, Result};

pub const ROTATION_SINE_TOL: f64 = 1e-14;
pub const SWEEP_BUDGET: usize = 30;

/// Singular values of a square matrix, nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    a.require_square()?;
    let n = a.rows();
    // column-major working copy so that column pairs are contiguous
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).collect()).collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
    let mut converged = n < 2;
    for _sweep in 0..SWEEP_BUDGET {
        if converged {
            break;
        }
        let mut max_sine: f64 = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                let gamma: Complex64 = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                max_sine = max_sine.max(s.abs());
                let rot = phase.conj();
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yt = *y * rot;
                    let (xp, yp) = (*x * c - yt * s, *x * s + yt * c);
                    *x = xp;
                    *y = yp;
                }
                norms[p] = cp.iter().map(|z| z.norm_sqr()).sum();
                norms[q] = cq.iter().map(|z| z.norm_sqr()).sum();
            }
        }
        converged = max_sine <= ROTATION_SINE_TOL;
    }
    if !converged {
        return Err(Error::NonConvergence { index: 0, iterations: SWEEP_BUDGET });
    }
    let mut sv: Vec<f64> = norms.into_iter().map(libm::sqrt).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// `‖A‖₁`, the sum of the singular values.
pub fn trace_norm<M: SquareMatrix + ?Sized>(a: &M) -> Result<f64> {
    Ok(singular_values(&a.dense())?.iter().sum())
}

/// Largest singular value.
pub fn operator_norm<M: SquareMatrix + ?Sized>(a: &M) -> Result<f64> {
    Ok(singular_values(&a.dense())?.first().copied().unwrap_or(0.0))
}

/// `‖A‖_[1]`.
pub fn entrywise_l1<M: SquareMatrix + ?Sized>(a: &M) -> f64 {
    a.entrywise_l1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn golden_ratio_pair() {
        let a = DenseMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        // eigenvalues of A*A = [[1,1],[1,2]] are (3 ± sqrt 5)/2
        let l1 = (3.0 + libm::sqrt(5.0)) / 2.0;
        let l2 = (3.0 - libm::sqrt(5.0)) / 2.0;
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - libm::sqrt(l1)).abs() < 1e-14);
        assert!((sv[1] - libm::sqrt(l2)).abs() < 1e-14);
        assert!((trace_norm(&a).unwrap() - libm::sqrt(5.0)).abs() < 1e-14);
    }

    #[test]
    fn all_ones_and_identity() {
        let ones = DenseMatrix::from_fn(5, 5, |_, _| c64(1.0, 0.0));
        let sv = singular_values(&ones).unwrap();
        assert!((sv[0] - 5.0).abs() < 1e-13);
        assert!(sv[1..].iter().all(|&s| s < 1e-13));
        assert!((trace_norm(&ones).unwrap() - 5.0).abs() < 1e-13);
        assert_eq!(entrywise_l1(&ones), 25.0);
        assert!((operator_norm(&ones).unwrap() - 5.0).abs() < 1e-13);

        let id = DenseMatrix::identity(5);
        assert_eq!(singular_values(&id).unwrap(), [1.0; 5]);
        assert_eq!(entrywise_l1(&id), 5.0);
        assert_eq!(operator_norm(&id).unwrap(), 1.0);
    }

    #[test]
    fn zero_and_small_entrywise() {
        assert_eq!(trace_norm(&DenseMatrix::zeros(3, 3)).unwrap(), 0.0);
        let mut a = DenseMatrix::zeros(2, 2);
        a[(0, 1)] = c64(0.0, -2.0);
        a[(1, 0)] = c64(3.0, 0.0);
        assert_eq!(entrywise_l1(&a), 5.0);
        assert_eq!(singular_values(&a).unwrap(), [3.0, 2.0]);
    }

    #[test]
    fn frobenius_identity_on_complex_input() {
        let a = DenseMatrix::from_fn(9, 9, |i, j| c64(((3 * i + 5 * j) % 7) as f64 - 3.0, ((i * j) % 4) as f64 - 1.5));
        let sv = singular_values(&a).unwrap();
        let sq: f64 = sv.iter().map(|s| s * s).sum();
        let fro = a.frobenius_norm().powi(2);
        assert!((sq - fro).abs() <= 1e-10 * fro);
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        assert!(sv.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn rectangular_is_rejected() {
        assert!(matches!(singular_values(&DenseMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }
}
