use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_ladder, eigen_mean, Family, TestFunction};
use crate::numkernel::Spectrum;
use crate::symbols::MatrixSymbol;
use crate::{Error, Result};

/// Gaps below this count as exact agreement.
const EXACT_GAP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FunctionSeries {
    pub label: String,
    pub function: TestFunction,
    /// `Σ_λ(F, A_n)` per rung.
    pub means: Vec<Complex64>,
    pub symbol_value: Complex64,
    /// `|Σ_λ(F, A_n) - symbol_value|` per rung.
    pub gaps: Vec<f64>,
    /// Gaps nonincreasing along the ladder.
    pub gaps_monotone: bool,
    /// Last gap below half the first and below the absolute threshold.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistributionReport {
    pub n_ladder: Vec<usize>,
    pub quadrature_nodes: usize,
    pub abs_threshold: f64,
    pub functions: Vec<FunctionSeries>,
}

impl DistributionReport {
    pub fn all_converged(&self) -> bool {
        self.functions.iter().all(|f| f.converged)
    }
}

pub fn distribution_report_from_spectra(
    ladder: &[usize],
    spectra: &[Spectrum],
    sym: &MatrixSymbol,
    tests: &[TestFunction],
    quadrature_nodes: usize,
    abs_threshold: f64,
) -> Result<DistributionReport> {
    check_ladder(ladder, spectra.len())?;
    for (&n, s) in ladder.iter().zip(spectra) {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.len() });
        }
    }
    let mut functions = Vec::with_capacity(tests.len());
    for f in tests {
        let symbol_value = sym.functional(f, quadrature_nodes)?;
        let means: Vec<Complex64> = spectra.iter().map(|s| eigen_mean(s, f)).collect();
        let gaps: Vec<f64> = means.iter().map(|m| (m - symbol_value).norm()).collect();
        let gaps_monotone = gaps.windows(2).all(|w| w[1] <= w[0] + EXACT_GAP);
        let (first, last) = (gaps[0], gaps[gaps.len() - 1]);
        let converged = last <= EXACT_GAP || (last < 0.5 * first && last < abs_threshold);
        functions.push(FunctionSeries {
            label: f.label(),
            function: f.clone(),
            means,
            symbol_value,
            gaps,
            gaps_monotone,
            converged,
        });
    }
    Ok(DistributionReport { n_ladder: ladder.to_vec(), quadrature_nodes, abs_threshold, functions })
}

/// Eigenvalue means of `family` along `ladder` against the symbol integrals.
pub fn distribution_compare(
    family: &Family,
    sym: &MatrixSymbol,
    tests: &[TestFunction],
    ladder: &[usize],
    quadrature_nodes: usize,
    abs_threshold: f64,
) -> Result<DistributionReport> {
    let spectra = family.spectra(ladder)?;
    distribution_report_from_spectra(ladder, &spectra, sym, tests, quadrature_nodes, abs_threshold)
}

/// `|Σ_λ(F, B) - Σ_λ(F, A)|` for each test function.
pub fn equal_distribution_gap(a: &Spectrum, b: &Spectrum, tests: &[TestFunction]) -> Result<Vec<f64>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(tests.iter().map(|f| (eigen_mean(b, f) - eigen_mean(a, f)).norm()).collect())
}
