//! Matrix families: free and periodic Jacobi sections, complex perturbed
//! sections, block Toeplitz sections and their scalar truncations, plus
//! finite-prefix diagnostics of the perturbation size.

mod diagnostics;
mod presets;
mod rules;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkernel::{DenseMatrix, TridiagonalMatrix};
use crate::symbols::MatrixSymbol;
use crate::{Error, Result};

pub use diagnostics::{perturbation_diagnostics, DiagnosticThresholds, PerturbationDiagnostics, VerdictHint};
pub use presets::{BackgroundPreset, PerturbationPreset};
pub use rules::{PeriodicBackground, Rule};

/// Realized entries above this modulus are rejected.
pub const DEFAULT_BOUND_GUARD: f64 = 1e6;

/// Coefficients `j ↦ (a_j, b_j, c_j)` of an infinite complex Jacobi matrix,
/// split as a real periodic background plus a complex perturbation.
///
/// In the `n x n` section, `b_0..b_{n-1}` fill the diagonal, `a_1..a_{n-1}`
/// the subdiagonal and `c_1..c_{n-1}` the superdiagonal. The background has
/// `c_j⁰ = a_j⁰`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoefficientSequence {
    background: PeriodicBackground,
    delta_a: Rule,
    delta_b: Rule,
    delta_c: Rule,
    description: String,
    bound: f64,
}

impl CoefficientSequence {
    pub fn new(background: PeriodicBackground, delta_a: Rule, delta_b: Rule, delta_c: Rule) -> Result<Self> {
        for r in [&delta_a, &delta_b, &delta_c] {
            r.validate()?;
        }
        let description = alloc::format!(
            "k={} background; da={}, db={}, dc={}",
            background.period(),
            delta_a.describe(),
            delta_b.describe(),
            delta_c.describe()
        );
        Ok(CoefficientSequence { background, delta_a, delta_b, delta_c, description, bound: DEFAULT_BOUND_GUARD })
    }

    /// Background only, no perturbation.
    pub fn unperturbed(background: PeriodicBackground) -> Self {
        Self::new(background, Rule::Zero, Rule::Zero, Rule::Zero).expect("zero rules are valid")
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn background(&self) -> &PeriodicBackground {
        &self.background
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn rules(&self) -> (&Rule, &Rule, &Rule) {
        (&self.delta_a, &self.delta_b, &self.delta_c)
    }

    pub fn is_unperturbed(&self) -> bool {
        self.delta_a.is_zero() && self.delta_b.is_zero() && self.delta_c.is_zero()
    }

    /// Perturbation `(δa_j, δb_j, δc_j)`.
    pub fn delta(&self, j: usize) -> (Complex64, Complex64, Complex64) {
        (self.delta_a.at(j), self.delta_b.at(j), self.delta_c.at(j))
    }

    /// `(a_j, b_j, c_j)` = background + perturbation.
    pub fn entries(&self, j: usize) -> (Complex64, Complex64, Complex64) {
        let (da, db, dc) = self.delta(j);
        let a0 = self.background.a_at(j);
        let b0 = self.background.b_at(j);
        (Complex64::new(a0, 0.0) + da, Complex64::new(b0, 0.0) + db, Complex64::new(a0, 0.0) + dc)
    }

    fn guarded(&self, index: usize, z: Complex64) -> Result<Complex64> {
        let modulus = z.norm();
        if !z.is_finite() || modulus > self.bound {
            return Err(Error::Unbounded { index, modulus, bound: self.bound });
        }
        Ok(z)
    }

    fn build(&self, n: usize, f: impl Fn(usize) -> (Complex64, Complex64, Complex64)) -> Result<TridiagonalMatrix> {
        if n == 0 {
            return Err(Error::invalid("section order must be at least 1"));
        }
        let mut sub = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut sup = Vec::with_capacity(n - 1);
        for j in 0..n {
            let (a, b, c) = f(j);
            diag.push(self.guarded(j, b)?);
            if j >= 1 {
                sub.push(self.guarded(j, a)?);
                sup.push(self.guarded(j, c)?);
            }
        }
        TridiagonalMatrix::new(sub, diag, sup)
    }

    /// The `n x n` principal section `A_n`.
    pub fn section(&self, n: usize) -> Result<TridiagonalMatrix> {
        self.build(n, |j| self.entries(j))
    }

    /// The perturbation part `P_n` of the section.
    pub fn perturbation_section(&self, n: usize) -> Result<TridiagonalMatrix> {
        self.build(n, |j| self.delta(j))
    }

    /// `‖P_n‖_[1]` straight from the rules.
    pub fn perturbation_l1(&self, n: usize) -> f64 {
        let sub = (1..n).map(|j| self.delta_a.at(j));
        let diag = (0..n).map(|j| self.delta_b.at(j));
        let sup = (1..n).map(|j| self.delta_c.at(j));
        sub.chain(diag).chain(sup).map(|z| z.norm()).sum()
    }

    /// `sup_j (|a_j| + |b_j| + |c_j|)` over `j < n`.
    pub fn prefix_sup(&self, n: usize) -> f64 {
        (0..n)
            .map(|j| {
                let (a, b, c) = self.entries(j);
                a.norm() + b.norm() + c.norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `J_n⁰`: zero diagonal, unit off-diagonals.
pub fn free_jacobi(n: usize) -> TridiagonalMatrix {
    assert!(n >= 1, "order must be positive");
    TridiagonalMatrix::from_real(&alloc::vec![1.0; n - 1], &alloc::vec![0.0; n], &alloc::vec![1.0; n - 1])
        .expect("valid by construction")
}

/// `J_m[a, b]`, the `m x m` section of the periodic background.
pub fn periodic_jacobi(bg: &PeriodicBackground, m: usize) -> TridiagonalMatrix {
    assert!(m >= 1, "order must be positive");
    let off: Vec<f64> = (1..m).map(|j| bg.a_at(j)).collect();
    let diag: Vec<f64> = (0..m).map(|j| bg.b_at(j)).collect();
    TridiagonalMatrix::from_real(&off, &diag, &off).expect("valid by construction")
}

/// Convenience alias for [`CoefficientSequence::section`].
pub fn jacobi_section(seq: &CoefficientSequence, n: usize) -> Result<TridiagonalMatrix> {
    seq.section(n)
}

/// `T_n(h)`, the `kn x kn` block Toeplitz matrix with block `(p, q)` equal
/// to `ĥ_{p-q}`.
pub fn block_toeplitz(sym: &MatrixSymbol, n: usize) -> DenseMatrix {
    truncated_block_toeplitz(sym, sym.block_size() * n)
}

/// `T̃_m(h)`, the leading `m x m` principal block of `T_∞(h)`.
pub fn truncated_block_toeplitz(sym: &MatrixSymbol, m: usize) -> DenseMatrix {
    let k = sym.block_size();
    let mut out = DenseMatrix::zeros(m, m);
    for (&j, coeff) in sym.coefficients() {
        for r in 0..m {
            let p = (r / k) as i64;
            let q = p - j;
            if q < 0 {
                continue;
            }
            let c0 = q as usize * k;
            if c0 >= m {
                continue;
            }
            for cc in 0..k.min(m - c0) {
                out[(r, c0 + cc)] = coeff[(r % k, cc)];
            }
        }
    }
    out
}
