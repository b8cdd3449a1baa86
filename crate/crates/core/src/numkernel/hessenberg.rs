//! Complex single-shift Hessenberg QR (eigenvalues only).
//!
//! The active window `[lo, hi]` is the trailing unreduced block. A
//! subdiagonal entry is neglected once
//! `|h[k,k-1]| <= 1e-14 (|h[k-1,k-1]| + |h[k,k]|)`. Each eigenvalue gets a
//! budget of [`ITERATIONS_PER_EIGENVALUE`] sweeps, with an exceptional shift
//! every [`EXCEPTIONAL_SHIFT_PERIOD`] stalled sweeps.

use alloc::vec;

use num_complex::Complex64;

use super::{DenseMatrix, Spectrum, TridiagonalMatrix};
use crate::{Error, Result};

pub const DEFLATION_TOL: f64 = 1e-14;
pub const ITERATIONS_PER_EIGENVALUE: usize = 40;
pub const EXCEPTIONAL_SHIFT_PERIOD: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Inputs the Hessenberg QR accepts directly.
pub trait HessenbergForm {
    /// Dense upper-Hessenberg copy, or `NotHessenberg`.
    fn hessenberg(&self) -> Result<DenseMatrix>;
}

impl HessenbergForm for TridiagonalMatrix {
    fn hessenberg(&self) -> Result<DenseMatrix> {
        Ok(self.to_dense())
    }
}

impl HessenbergForm for DenseMatrix {
    fn hessenberg(&self) -> Result<DenseMatrix> {
        self.require_square()?;
        let tol = DEFLATION_TOL * self.entrywise_l1();
        let n = self.rows();
        for i in 2..n {
            for j in 0..i - 1 {
                let modulus = self[(i, j)].norm();
                if modulus > tol {
                    return Err(Error::NotHessenberg { row: i, col: j, modulus });
                }
            }
        }
        let mut h = self.clone();
        for i in 2..n {
            for j in 0..i - 1 {
                h[(i, j)] = ZERO;
            }
        }
        Ok(h)
    }
}

/// All eigenvalues of a tridiagonal or dense upper-Hessenberg matrix.
pub fn eig_general<M: HessenbergForm + ?Sized>(a: &M) -> Result<Spectrum> {
    let mut h = a.hessenberg()?;
    hessenberg_qr(&mut h)
}

/// All eigenvalues of an arbitrary square dense matrix: Householder
/// reduction to Hessenberg form followed by the QR iteration.
pub fn eig_dense(a: &DenseMatrix) -> Result<Spectrum> {
    a.require_square()?;
    let mut h = a.clone();
    reduce_to_hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

/// In-place unitary similarity to upper-Hessenberg form.
pub fn reduce_to_hessenberg(a: &mut DenseMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let Some(len) = householder_vector(a, k, &mut v) else { continue };
        let v = &v[..len];
        let off = k + 1;
        // A <- (I - 2 v v^H) A on rows off.., columns k..
        for j in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[(off + i, j)]).sum();
            let dot = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                a[(off + i, j)] -= vi * dot;
            }
        }
        // A <- A (I - 2 v v^H) on columns off..
        for i in 0..n {
            let row = &mut a.as_mut_slice()[i * n + off..(i + 1) * n];
            let dot: Complex64 = row.iter().zip(v).map(|(x, vi)| x * vi).sum();
            let dot = dot * 2.0;
            for (x, vi) in row.iter_mut().zip(v) {
                *x -= dot * vi.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Unit Householder vector annihilating `a[k+2.., k]`; returns its length.
fn householder_vector(a: &DenseMatrix, k: usize, v: &mut [Complex64]) -> Option<usize> {
    let n = a.rows();
    let off = k + 1;
    let len = n - off;
    let tail: f64 = (off + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let x0 = a[(off, k)];
    let xnorm = libm::sqrt(x0.norm_sqr() + tail);
    let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
    let alpha = -phase * xnorm;
    v[0] = x0 - alpha;
    for i in 1..len {
        v[i] = a[(off + i, k)];
    }
    let vnorm = libm::sqrt(v[..len].iter().map(|z| z.norm_sqr()).sum());
    if vnorm == 0.0 {
        return None;
    }
    for z in &mut v[..len] {
        *z /= vnorm;
    }
    Some(len)
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = libm::hypot(ax, ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (m1, m2) = (mid + disc, mid - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Runs the shifted QR iteration on an upper-Hessenberg matrix, which is
/// overwritten.
pub fn hessenberg_qr(h: &mut DenseMatrix) -> Result<Spectrum> {
    let n = h.rows();
    let mut eig = vec![ZERO; n];
    let anorm = h.entrywise_l1();
    let mut max_residual: f64 = 0.0;
    let mut total = 0usize;
    if n == 0 {
        return Ok(Spectrum::new(eig, 0.0, 0));
    }
    let mut hi = n - 1;
    let mut its = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // locate the start of the trailing unreduced block
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = h[(k, k - 1)].norm();
            let mut scale = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            if scale == 0.0 {
                scale = anorm / n as f64;
            }
            if sub <= DEFLATION_TOL * scale || sub < f64::MIN_POSITIVE {
                max_residual = max_residual.max(sub);
                h[(k, k - 1)] = ZERO;
                lo = k;
                break;
            }
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        if its >= ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NonConvergence { index: hi, iterations: its });
        }
        its += 1;
        total += 1;

        let shift = if its.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(h, lo, hi, shift);
    }
    Ok(Spectrum::new(eig, max_residual, total))
}

/// One implicit single-shift bulge chase over rows/columns `lo..=hi`.
fn qr_sweep(h: &mut DenseMatrix, lo: usize, hi: usize, shift: Complex64) {
    let n = h.cols();
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        if k > lo {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s) = givens(x, y);
        let first = if k > lo { k - 1 } else { lo };
        {
            let data = h.as_mut_slice();
            let (top, bottom) = data.split_at_mut((k + 1) * n);
            let rk = &mut top[k * n + first..k * n + hi + 1];
            let rk1 = &mut bottom[first..hi + 1];
            for (u, v) in rk.iter_mut().zip(rk1.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a * c + s * b;
                *v = b * c - s.conj() * a;
            }
        }
        if k > lo {
            h[(k + 1, k - 1)] = ZERO;
        }
        let last = (k + 2).min(hi);
        for i in lo..=last {
            let (a, b) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = a * c + b * s.conj();
            h[(i, k + 1)] = b * c - a * s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec::Vec;

    #[test]
    fn givens_annihilates() {
        for (x, y) in [(c64(1.0, 2.0), c64(-3.0, 0.5)), (c64(0.0, 0.0), c64(0.0, 2.0)), (c64(2.0, 0.0), c64(0.0, 0.0))]
        {
            let (c, s) = givens(x, y);
            let second = y * c - s.conj() * x;
            assert!(second.norm() < 1e-15);
            assert!((c * c + s.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hessenberg_reduction_preserves_trace_and_shape() {
        let a =
            DenseMatrix::from_fn(6, 6, |i, j| c64((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0 - 1.0));
        let mut h = a.clone();
        reduce_to_hessenberg(&mut h);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn dense_non_hessenberg_is_rejected() {
        let a = DenseMatrix::from_fn(3, 3, |_, _| c64(1.0, 0.0));
        assert!(matches!(eig_general(&a), Err(Error::NotHessenberg { row: 2, col: 0, .. })));
        let s = eig_dense(&a).unwrap();
        let mut re: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[2] - 3.0).abs() < 1e-12 && re[0].abs() < 1e-12 && re[1].abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_deflates_immediately() {
        let s = eig_general(&DenseMatrix::zeros(4, 4)).unwrap();
        assert!(s.eigenvalues().iter().all(|z| z.norm() == 0.0));
        assert_eq!(s.iterations(), 0);
    }
}
