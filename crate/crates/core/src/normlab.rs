//! Diagonal decomposition of a matrix and the equivalence between the trace
//! norm `‖·‖₁` and the entrywise norm `‖·‖_[1]` on banded matrices.
//!
//! For a matrix with `C` structurally nonzero diagonals,
//! `‖A‖₁ ≤ ‖A‖_[1] ≤ C ‖A‖₁`; tridiagonal matrices have `C = 3`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::numkernel::{singular_values, trace_norm, DenseMatrix, SquareMatrix};
use crate::{Error, Result};

/// `D_m(A)`: keeps entry `(j, k)` iff `j - k = m`.
pub fn diagonal_part(a: &DenseMatrix, m: isize) -> Result<DenseMatrix> {
    a.require_square()?;
    let n = a.rows() as isize;
    if m.abs() >= n {
        return Err(Error::invalid("diagonal index must satisfy |m| < n"));
    }
    Ok(DenseMatrix::from_fn(a.rows(), a.cols(), |j, k| {
        if j as isize - k as isize == m {
            a[(j, k)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Discrete version of `(1/2π) ∫ D(t) A D(t)* e^{-imt} dt` with
/// `D(t) = diag(e^{ijt})`, on `grid` uniform nodes. Exact (up to rounding)
/// once `grid >= 2n - 1`.
pub fn bhatia_average(a: &DenseMatrix, m: isize, grid: usize) -> Result<DenseMatrix> {
    a.require_square()?;
    let n = a.rows();
    let required = 2 * n - 1;
    if grid < required {
        return Err(Error::GridTooCoarse { order: n, grid, required });
    }
    let mut acc = DenseMatrix::zeros(n, n);
    for l in 0..grid {
        let t = 2.0 * PI * l as f64 / grid as f64;
        let d: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, j as f64 * t)).collect();
        let w = Complex64::from_polar(1.0 / grid as f64, -(m as f64) * t);
        for j in 0..n {
            for k in 0..n {
                acc[(j, k)] += d[j] * a[(j, k)] * d[k].conj() * w;
            }
        }
    }
    Ok(acc)
}

/// Closed-form singular values of a matrix supported on one diagonal: the
/// moduli of that diagonal, padded with zeros, nonincreasing.
pub fn single_diagonal_singular_values(a: &DenseMatrix, m: isize) -> Result<Vec<f64>> {
    let part = diagonal_part(a, m)?;
    if part != *a {
        return Err(Error::invalid("matrix has entries off the requested diagonal"));
    }
    let mut sv: Vec<f64> = Vec::with_capacity(a.rows());
    for j in 0..a.rows() {
        let k = j as isize - m;
        if k >= 0 && (k as usize) < a.cols() {
            sv.push(a[(j, k as usize)].norm());
        }
    }
    sv.resize(a.rows(), 0.0);
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormEquivalenceReport {
    pub order: usize,
    pub trace_norm: f64,
    pub entrywise: f64,
    /// Number of structurally nonzero diagonals.
    pub c_struct: usize,
    pub tolerance: f64,
    /// `‖A‖_[1] ≥ ‖A‖₁`.
    pub lower_ok: bool,
    /// `‖A‖_[1] ≤ C_struct ‖A‖₁`.
    pub upper_ok: bool,
    /// `(1/3)‖A‖₁ ≤ ‖A‖_[1] ≤ 9‖A‖₁`.
    pub loose_ok: bool,
}

impl NormEquivalenceReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

pub fn norm_equivalence_check<M: SquareMatrix + ?Sized>(a: &M) -> Result<NormEquivalenceReport> {
    let tn = trace_norm(a)?;
    let ent = a.entrywise_l1();
    let c_struct = a.structural_diagonals();
    let tol = 1e-9 * (1.0 + ent);
    Ok(NormEquivalenceReport {
        order: a.order(),
        trace_norm: tn,
        entrywise: ent,
        c_struct,
        tolerance: tol,
        lower_ok: ent >= tn - tol,
        upper_ok: ent <= c_struct as f64 * tn + tol,
        loose_ok: tn / 3.0 <= ent + tol && ent <= 9.0 * tn + tol,
    })
}

/// Largest relative disagreement between the Jacobi SVD and the closed form
/// over every diagonal of `a`.
pub fn single_diagonal_cross_check(a: &DenseMatrix) -> Result<f64> {
    let n = a.rows() as isize;
    let mut worst: f64 = 0.0;
    for m in -(n - 1)..n {
        let part = diagonal_part(a, m)?;
        let exact = single_diagonal_singular_values(&part, m)?;
        let svd = singular_values(&part)?;
        let scale = part.entrywise_l1().max(f64::MIN_POSITIVE);
        for (x, y) in exact.iter().zip(&svd) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    Ok(worst)
}
