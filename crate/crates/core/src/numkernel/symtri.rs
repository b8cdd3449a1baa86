//! Hermitian eigenvalues: implicit-shift QL on a real symmetric tridiagonal
//! matrix, with Hermitian inputs brought to that form first.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{DenseMatrix, Spectrum, TridiagonalMatrix};
use crate::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-14;
pub const QL_ITERATIONS_PER_EIGENVALUE: usize = 40;

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
pub fn eig_hermitian(a: &TridiagonalMatrix) -> Result<Spectrum> {
    let scale = HERMITIAN_TOL * (1.0 + a.entrywise_l1());
    if !a.is_real_symmetric(scale) {
        return Err(Error::NotHermitian);
    }
    let diag: Vec<f64> = a.diag().iter().map(|z| z.re).collect();
    let off: Vec<f64> = a.sub().iter().zip(a.sup()).map(|(x, y)| 0.5 * (x.re + y.re)).collect();
    let (values, iterations) = symmetric_tridiagonal_eigenvalues(diag, off)?;
    Ok(Spectrum::new(values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), 0.0, iterations))
}

/// Eigenvalues of a complex Hermitian tridiagonal matrix, ascending.
///
/// A diagonal unitary similarity turns the off-diagonal pair `(e, conj e)`
/// into `(|e|, |e|)`, so the QL solver applies unchanged.
pub fn eig_hermitian_tridiagonal(a: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let scale = HERMITIAN_TOL * (1.0 + a.entrywise_l1());
    if !a.is_hermitian(scale) {
        return Err(Error::NotHermitian);
    }
    let diag = a.diag().iter().map(|z| z.re).collect();
    let off = a.sub().iter().zip(a.sup()).map(|(x, y)| 0.5 * (x.norm() + y.norm())).collect();
    Ok(symmetric_tridiagonal_eigenvalues(diag, off)?.0)
}

/// Eigenvalues of a dense Hermitian matrix, ascending.
pub fn eig_hermitian_dense(a: &DenseMatrix) -> Result<Vec<f64>> {
    a.require_square()?;
    if !a.is_hermitian(HERMITIAN_TOL * (1.0 + a.entrywise_l1())) {
        return Err(Error::NotHermitian);
    }
    let (diag, off) = hermitian_tridiagonalize(a);
    Ok(symmetric_tridiagonal_eigenvalues(diag, off)?.0)
}

/// Householder reduction of a Hermitian matrix; returns the real diagonal
/// and the moduli of the off-diagonal.
fn hermitian_tridiagonalize(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut m = a.clone();
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let off = k + 1;
        let len = n - off;
        let tail: f64 = (off + 1..n).map(|i| m[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = m[(off, k)];
        let xnorm = libm::sqrt(x0.norm_sqr() + tail);
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        v[0] = x0 + phase * xnorm;
        for i in 1..len {
            v[i] = m[(off + i, k)];
        }
        let vnorm = libm::sqrt(v[..len].iter().map(|z| z.norm_sqr()).sum());
        for z in &mut v[..len] {
            *z /= vnorm;
        }
        // two-sided update of the trailing block with H = I - 2 v v^H:
        // p = B v, K = v^H p, q = 2p - 2K v, B <- B - v q^H - q v^H
        for i in 0..len {
            w[i] = (0..len).map(|j| m[(off + i, off + j)] * v[j]).sum();
        }
        let kappa: Complex64 = (0..len).map(|i| v[i].conj() * w[i]).sum();
        for i in 0..len {
            w[i] = (w[i] - v[i] * kappa) * 2.0;
        }
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                m[(off + i, off + j)] -= upd;
            }
        }
        let new_sub = -phase * xnorm;
        m[(off, k)] = new_sub;
        m[(k, off)] = new_sub.conj();
        for i in off + 1..n {
            m[(i, k)] = zero;
            m[(k, i)] = zero;
        }
    }
    let diag = (0..n).map(|i| m[(i, i)].re).collect();
    let offd = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)].norm()).collect();
    (diag, offd)
}

/// Implicit QL with Wilkinson-type shift on `(diag, off)`; `off[i]`
/// couples rows `i` and `i+1`. Returns ascending eigenvalues and the number
/// of sweeps.
pub fn symmetric_tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Result<(Vec<f64>, usize)> {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    let mut total = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter >= QL_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NonConvergence { index: l, iterations: iter });
            }
            iter += 1;
            total += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok((d, total))
}
