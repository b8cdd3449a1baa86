use alloc::borrow::Cow;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Real-valued convenience constructor, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(r, c, data)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `‖A‖_[1]`, the sum of the moduli of all entries.
    pub fn entrywise_l1(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Leading principal `m x m` block.
    pub fn leading_block(&self, m: usize) -> Self {
        assert!(m <= self.rows && m <= self.cols);
        Self::from_fn(m, m, |i, j| self[(i, j)])
    }

    /// `(A + A*)/2` and `(A - A*)/(2i)`.
    pub fn hermitian_parts(&self) -> Result<(DenseMatrix, DenseMatrix)> {
        self.require_square()?;
        let n = self.rows;
        let half = Complex64::new(0.5, 0.0);
        let inv_2i = Complex64::new(0.0, -0.5);
        let re = Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half);
        let im = Self::from_fn(n, n, |i, j| (self[(i, j)] - self[(j, i)].conj()) * inv_2i);
        Ok((re, im))
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() && self.rows > 0 {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Complex tridiagonal matrix with subdiagonal `a_1..a_{n-1}`, diagonal
/// `b_0..b_{n-1}` and superdiagonal `c_1..c_{n-1}`.
///
/// Entry `(j+1, j)` is `sub[j]` and `(j, j+1)` is `sup[j]` (zero based).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    sub: Vec<Complex64>,
    diag: Vec<Complex64>,
    sup: Vec<Complex64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<Complex64>, diag: Vec<Complex64>, sup: Vec<Complex64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::invalid("tridiagonal order must be positive"));
        }
        for off in [&sub, &sup] {
            if off.len() != n - 1 {
                return Err(Error::DimensionMismatch { expected: n - 1, found: off.len() });
            }
        }
        let all = sub.iter().chain(&diag).chain(&sup);
        if let Some(index) = all.clone().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(TridiagonalMatrix { sub, diag, sup })
    }

    pub fn from_real(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(c(sub), c(diag), c(sup))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[Complex64] {
        &self.sub
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn sup(&self) -> &[Complex64] {
        &self.sup
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..n - 1 {
            m[(i + 1, i)] = self.sub[i];
            m[(i, i + 1)] = self.sup[i];
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        TridiagonalMatrix {
            sub: self.sup.iter().map(|z| z.conj()).collect(),
            diag: self.diag.iter().map(|z| z.conj()).collect(),
            sup: self.sub.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.diag.iter().sum()
    }

    pub fn entrywise_l1(&self) -> f64 {
        self.sub.iter().chain(&self.diag).chain(&self.sup).map(|z| z.norm()).sum()
    }

    pub fn leading_block(&self, m: usize) -> Self {
        assert!(m >= 1 && m <= self.order());
        TridiagonalMatrix {
            sub: self.sub[..m - 1].to_vec(),
            diag: self.diag[..m].to_vec(),
            sup: self.sup[..m - 1].to_vec(),
        }
    }

    pub fn sub_matrix(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), found: other.order() });
        }
        let d = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(a, b)| a - b).collect();
        Ok(TridiagonalMatrix {
            sub: d(&self.sub, &other.sub),
            diag: d(&self.diag, &other.diag),
            sup: d(&self.sup, &other.sup),
        })
    }

    /// True when `sub == sup` and every entry is real, both within `tol`.
    pub fn is_real_symmetric(&self, tol: f64) -> bool {
        self.diag.iter().all(|z| z.im.abs() <= tol)
            && self
                .sub
                .iter()
                .zip(&self.sup)
                .all(|(a, c)| a.im.abs() <= tol && c.im.abs() <= tol && (a - c).norm() <= tol)
    }

    /// True when the matrix equals its adjoint within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.diag.iter().all(|z| z.im.abs() <= tol)
            && self.sub.iter().zip(&self.sup).all(|(a, c)| (a - c.conj()).norm() <= tol)
    }

    /// `(A + A*)/2` and `(A - A*)/(2i)`, both tridiagonal.
    pub fn hermitian_parts(&self) -> (TridiagonalMatrix, TridiagonalMatrix) {
        let half = Complex64::new(0.5, 0.0);
        let inv_2i = Complex64::new(0.0, -0.5);
        let re = TridiagonalMatrix {
            sub: self.sub.iter().zip(&self.sup).map(|(a, c)| (a + c.conj()) * half).collect(),
            diag: self.diag.iter().map(|b| Complex64::new(b.re, 0.0)).collect(),
            sup: self.sup.iter().zip(&self.sub).map(|(c, a)| (c + a.conj()) * half).collect(),
        };
        let im = TridiagonalMatrix {
            sub: self.sub.iter().zip(&self.sup).map(|(a, c)| (a - c.conj()) * inv_2i).collect(),
            diag: self.diag.iter().map(|b| Complex64::new(b.im, 0.0)).collect(),
            sup: self.sup.iter().zip(&self.sub).map(|(c, a)| (c - a.conj()) * inv_2i).collect(),
        };
        (re, im)
    }
}

/// Operations shared by the dense and tridiagonal containers.
pub trait SquareMatrix {
    fn order(&self) -> usize;
    fn trace(&self) -> Complex64;
    fn entrywise_l1(&self) -> f64;
    fn dense(&self) -> Cow<'_, DenseMatrix>;
    /// Number of diagonals that may hold nonzero entries.
    fn structural_diagonals(&self) -> usize;
    /// All eigenvalues through the general (non-Hermitian) solver.
    fn spectrum(&self) -> Result<super::Spectrum>;
    /// Ascending eigenvalues of `Re(A)` and `Im(A)`.
    fn hermitian_part_eigenvalues(&self) -> Result<(Vec<f64>, Vec<f64>)>;
}

impl SquareMatrix for DenseMatrix {
    fn order(&self) -> usize {
        self.rows
    }

    fn trace(&self) -> Complex64 {
        DenseMatrix::trace(self)
    }

    fn entrywise_l1(&self) -> f64 {
        DenseMatrix::entrywise_l1(self)
    }

    fn dense(&self) -> Cow<'_, DenseMatrix> {
        Cow::Borrowed(self)
    }

    fn structural_diagonals(&self) -> usize {
        let n = self.rows as isize;
        (-(n - 1)..n)
            .filter(|&m| {
                (0..self.rows).any(|i| {
                    let j = i as isize - m;
                    j >= 0 && j < n && self[(i, j as usize)] != Complex64::new(0.0, 0.0)
                })
            })
            .count()
    }

    fn spectrum(&self) -> Result<super::Spectrum> {
        super::eig_dense(self)
    }

    fn hermitian_part_eigenvalues(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (re, im) = self.hermitian_parts()?;
        Ok((super::eig_hermitian_dense(&re)?, super::eig_hermitian_dense(&im)?))
    }
}

impl SquareMatrix for TridiagonalMatrix {
    fn order(&self) -> usize {
        self.diag.len()
    }

    fn trace(&self) -> Complex64 {
        TridiagonalMatrix::trace(self)
    }

    fn entrywise_l1(&self) -> f64 {
        TridiagonalMatrix::entrywise_l1(self)
    }

    fn dense(&self) -> Cow<'_, DenseMatrix> {
        Cow::Owned(self.to_dense())
    }

    fn structural_diagonals(&self) -> usize {
        3
    }

    fn spectrum(&self) -> Result<super::Spectrum> {
        super::eig_general(self)
    }

    fn hermitian_part_eigenvalues(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (re, im) = self.hermitian_parts();
        Ok((super::eig_hermitian_tridiagonal(&re)?, super::eig_hermitian_tridiagonal(&im)?))
    }
}
