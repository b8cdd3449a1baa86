//! Matrix-valued trigonometric symbols `h(t) = Σ_j ĥ_j e^{ijt}` on
//! `[-π, π]`, their eigenvalue curves, essential range, and the symbol-side
//! integrals that eigenvalue means are compared against.
//!
//! Integrals use the composite trapezoid rule on the uniform periodic grid
//! `t_l = -π + 2πl/N`, which is exact for trigonometric polynomials once
//! `N` exceeds the bandwidth of the integrand.

mod interval;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::numkernel::{eig_hermitian_dense, DenseMatrix};
use crate::sequences::{periodic_jacobi, PeriodicBackground};
use crate::testfn::TestFunction;
use crate::{Error, Result};

pub use interval::{Interval, IntervalUnion};

pub const DEFAULT_QUADRATURE_NODES: usize = 1024;
pub const DEFAULT_RANGE_GRID: usize = 4096;

/// Finite Fourier series with `k x k` matrix coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    k: usize,
    coeffs: BTreeMap<i64, DenseMatrix>,
}

impl MatrixSymbol {
    /// Zero coefficients are dropped; every coefficient must be `k x k`.
    pub fn new(k: usize, coeffs: impl IntoIterator<Item = (i64, DenseMatrix)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("block size must be positive"));
        }
        let mut map = BTreeMap::new();
        for (j, m) in coeffs {
            if m.rows() != k || m.cols() != k {
                return Err(Error::DimensionMismatch { expected: k, found: m.rows().max(m.cols()) });
            }
            if m.is_zero() {
                continue;
            }
            if let Some(prev) = map.get_mut(&j) {
                *prev = DenseMatrix::add(prev, &m)?;
            } else {
                map.insert(j, m);
            }
        }
        Ok(MatrixSymbol { k, coeffs: map })
    }

    /// Scalar symbol from `(j, ĥ_j)` pairs.
    pub fn scalar(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        Self::new(1, coeffs.into_iter().map(|(j, c)| (j, DenseMatrix::from_diagonal(&[c]))))
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, DenseMatrix> {
        &self.coeffs
    }

    pub fn coefficient(&self, j: i64) -> DenseMatrix {
        self.coeffs.get(&j).cloned().unwrap_or_else(|| DenseMatrix::zeros(self.k, self.k))
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest `|j|` with `ĥ_j ≠ 0`.
    pub fn bandwidth(&self) -> usize {
        self.coeffs.keys().map(|j| j.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// `ĥ_{-j} = ĥ_j*` for every `j`, compared exactly.
    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|(&j, m)| match self.coeffs.get(&-j) {
            Some(other) => *other == m.adjoint(),
            None => false,
        })
    }

    fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitianSymbol)
        }
    }

    /// `h(t) = Σ_j ĥ_j e^{ijt}`.
    pub fn evaluate(&self, t: f64) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.k, self.k);
        for (&j, m) in &self.coeffs {
            let phase = Complex64::from_polar(1.0, j as f64 * t);
            for (o, &c) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
                *o += c * phase;
            }
        }
        if self.is_hermitian() {
            // symmetrize the rounding so the eigen-solver's Hermitian check passes
            let adj = out.adjoint();
            for (o, a) in out.as_mut_slice().iter_mut().zip(adj.as_slice()) {
                *o = (*o + a) * 0.5;
            }
        }
        out
    }

    /// Trapezoid approximation of `(1/2π) ∫ h(t) e^{-ijt} dt` on `n` nodes.
    pub fn sample_fourier_coefficient(&self, j: i64, n: usize) -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(self.k, self.k);
        for t in grid(n) {
            let w = Complex64::from_polar(1.0 / n as f64, -(j as f64) * t);
            let h = self.evaluate(t);
            for (a, &v) in acc.as_mut_slice().iter_mut().zip(h.as_slice()) {
                *a += v * w;
            }
        }
        acc
    }

    /// Eigenvalues of `h(t)` at one angle, ascending.
    pub fn eigenvalues_at(&self, t: f64) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let h = self.evaluate(t);
        if self.k == 1 {
            return Ok(alloc::vec![h[(0, 0)].re]);
        }
        eig_hermitian_dense(&h)
    }

    /// `curves[j][l]` is the `j`-th smallest eigenvalue at `t_l`.
    pub fn eigenvalue_curves(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        self.require_hermitian()?;
        if n < 2 {
            return Err(Error::invalid("eigenvalue curves need at least 2 grid points"));
        }
        let mut curves = alloc::vec![Vec::with_capacity(n); self.k];
        for t in grid(n) {
            for (curve, v) in curves.iter_mut().zip(self.eigenvalues_at(t)?) {
                curve.push(v);
            }
        }
        Ok(curves)
    }

    /// Grid approximation of `S(h) = ⋃_j Range(λ_j(h))`. Components closer
    /// than `gap_tol` are merged; `None` means `1e-6` times the total width.
    pub fn essential_range(&self, n: usize, gap_tol: Option<f64>) -> Result<IntervalUnion> {
        if n < 64 {
            return Err(Error::invalid("essential range needs a grid of at least 64 points"));
        }
        let curves = self.eigenvalue_curves(n)?;
        let ranges: Vec<(f64, f64)> = curves
            .iter()
            .map(|c| {
                (c.iter().copied().fold(f64::INFINITY, f64::min), c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            })
            .collect();
        let lo = ranges.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let hi = ranges.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let tol = gap_tol.unwrap_or(1e-6 * (hi - lo));
        Ok(IntervalUnion::merged(ranges, tol))
    }

    /// `(1/(2πk)) Σ_j ∫ F(λ_j(h(t))) dt` by the trapezoid rule on `n` nodes.
    pub fn functional(&self, f: &TestFunction, n: usize) -> Result<Complex64> {
        self.require_hermitian()?;
        if n == 0 {
            return Err(Error::invalid("quadrature needs at least one node"));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in grid(n) {
            for v in self.eigenvalues_at(t)? {
                acc += f.eval(Complex64::new(v, 0.0));
            }
        }
        Ok(acc / (n * self.k) as f64)
    }
}

/// `θ(a, b, t)`: `ĥ_0 = J_k[a, b]`, and `a_0` in the top-right corner of
/// `ĥ_1` and the bottom-left corner of `ĥ_{-1}`.
pub fn periodic_symbol(bg: &PeriodicBackground) -> MatrixSymbol {
    let k = bg.period();
    let h0 = periodic_jacobi(bg, k).to_dense();
    let a0 = Complex64::new(bg.a()[0], 0.0);
    let mut h1 = DenseMatrix::zeros(k, k);
    h1[(0, k - 1)] = a0;
    let mut hm1 = DenseMatrix::zeros(k, k);
    hm1[(k - 1, 0)] = a0;
    MatrixSymbol::new(k, [(0, h0), (1, h1), (-1, hm1)]).expect("well-formed by construction")
}

/// Free-function form of [`MatrixSymbol::functional`].
pub fn symbol_functional(sym: &MatrixSymbol, f: &TestFunction, n: usize) -> Result<Complex64> {
    sym.functional(f, n)
}

/// Uniform periodic grid `t_l = -π + 2πl/n`, `l = 0..n`.
pub fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |l| -PI + 2.0 * PI * l as f64 / n as f64)
}

/// Free-symbol functional written over `[-2, 2]`,
/// `(1/π) ∫ F(x) / √(4 - x²) dx`, evaluated with `n`-point Gauss–Chebyshev
/// nodes `2 cos((2l-1)π/(2n))` (the substituted form, free of the endpoint
/// singularity). Exact for polynomials of degree below `2n`.
pub fn arcsine_functional(f: &TestFunction, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::invalid("quadrature needs at least one node"));
    }
    let sum: Complex64 =
        (1..=n).map(|l| f.eval(Complex64::new(2.0 * libm::cos((2 * l - 1) as f64 * PI / (2 * n) as f64), 0.0))).sum();
    Ok(sum / n as f64)
}
