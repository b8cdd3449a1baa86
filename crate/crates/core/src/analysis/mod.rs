//! Empirical checks of eigenvalue distribution, clustering and attraction
//! for matrix families, plus the per-matrix inequality checks.
//!
//! Every report builder has a `*_from_spectra` form taking precomputed
//! spectra (one per ladder rung) so callers can evaluate rungs in parallel;
//! the assembly itself is a deterministic reduction.

mod attraction;
mod cluster;
mod distribution;
mod inequalities;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkernel::{eig_dense, eig_general, eig_hermitian, eig_hermitian_dense, Spectrum};
use crate::sequences::{truncated_block_toeplitz, CoefficientSequence};
use crate::symbols::MatrixSymbol;
use crate::{Error, Result};

pub use crate::testfn::TestFunction;
pub use attraction::{attraction_profile, attraction_profile_from_spectra, AttractionOrder, AttractionReport};
pub use cluster::{cluster_count, cluster_report_from_spectra, ClusterReport, Trend, TrendFit};
pub use distribution::{
    distribution_compare, distribution_report_from_spectra, equal_distribution_gap, DistributionReport, FunctionSeries,
};
pub use inequalities::{
    kyfan_mirsky_check, kyfan_mirsky_check_with, nonreal_outlier_bound, nonreal_outlier_bounds_with,
    recurrence_residual, recurrence_residual_of, KyFanReport, OutlierReport, RecurrenceReport,
};

/// `Σ_λ(F, A_n) = (1/n) Σ_j F(λ_j)`.
pub fn eigen_mean(spec: &Spectrum, f: &TestFunction) -> Complex64 {
    let n = spec.len();
    assert!(n > 0, "empty spectrum");
    spec.eigenvalues().iter().map(|&z| f.eval(z)).sum::<Complex64>() / n as f64
}

/// A matrix sequence indexed by its order.
#[derive(Debug, Clone)]
pub enum Family {
    /// Principal sections `A_n` of a coefficient sequence.
    Jacobi(CoefficientSequence),
    /// Scalar truncations `T̃_m` of a block Toeplitz symbol.
    TruncatedToeplitz(MatrixSymbol),
}

impl Family {
    pub fn spectrum(&self, n: usize) -> Result<Spectrum> {
        match self {
            Family::Jacobi(seq) => {
                let a = seq.section(n)?;
                if a.is_real_symmetric(0.0) {
                    eig_hermitian(&a)
                } else {
                    eig_general(&a)
                }
            }
            Family::TruncatedToeplitz(sym) => {
                let a = truncated_block_toeplitz(sym, n);
                if sym.is_hermitian() {
                    let values = eig_hermitian_dense(&a)?;
                    Ok(Spectrum::new(values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(), 0.0, 0))
                } else {
                    eig_dense(&a)
                }
            }
        }
    }

    /// Spectra for every rung, sequentially.
    pub fn spectra(&self, ladder: &[usize]) -> Result<Vec<Spectrum>> {
        ladder.iter().map(|&n| self.spectrum(n)).collect()
    }
}

pub(crate) fn check_ladder(ladder: &[usize], spectra_len: usize) -> Result<()> {
    if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ladder must be nonempty, positive and strictly increasing"));
    }
    if spectra_len != ladder.len() {
        return Err(Error::DimensionMismatch { expected: ladder.len(), found: spectra_len });
    }
    Ok(())
}
