use alloc::vec::Vec;

use super::check_ladder;
use crate::numkernel::Spectrum;
use crate::symbols::IntervalUnion;
use crate::{Error, Result};

/// `q_ε(n, S)`: eigenvalues at distance at least `eps` from `S`.
pub fn cluster_count(spec: &Spectrum, set: &IntervalUnion, eps: f64) -> usize {
    assert!(eps > 0.0, "eps must be positive");
    spec.eigenvalues().iter().filter(|&&z| set.distance(z) >= eps).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Trend {
    Bounded,
    Sublinear,
    Linear,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Bounded => "bounded",
            Trend::Sublinear => "sublinear",
            Trend::Linear => "linear",
        }
    }
}

/// Least-squares fits of `q(n)` against `c`, `c√n` and `c n`; the class
/// with the smallest residual wins (ties go to the slower growth).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrendFit {
    pub class: Trend,
    /// Residual sums of squares for bounded, sublinear, linear.
    pub residuals: [f64; 3],
}

impl TrendFit {
    pub fn fit(ladder: &[usize], counts: &[usize]) -> Self {
        let bases: [fn(f64) -> f64; 3] = [|_| 1.0, libm::sqrt, |n| n];
        let mut residuals = [0.0; 3];
        for (r, g) in residuals.iter_mut().zip(bases) {
            let gs: Vec<f64> = ladder.iter().map(|&n| g(n as f64)).collect();
            let num: f64 = gs.iter().zip(counts).map(|(g, &q)| g * q as f64).sum();
            let den: f64 = gs.iter().map(|g| g * g).sum();
            let c = num / den;
            *r = gs
                .iter()
                .zip(counts)
                .map(|(g, &q)| {
                    let e = q as f64 - c * g;
                    e * e
                })
                .sum();
        }
        let mut best = 0;
        for i in 1..3 {
            if residuals[i] < residuals[best] * (1.0 - 1e-12) {
                best = i;
            }
        }
        let class = [Trend::Bounded, Trend::Sublinear, Trend::Linear][best];
        TrendFit { class, residuals }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterReport {
    pub n_ladder: Vec<usize>,
    pub eps_grid: Vec<f64>,
    pub set: IntervalUnion,
    /// `counts[rung][eps_index]`.
    pub counts: Vec<Vec<usize>>,
    pub max_per_eps: Vec<usize>,
    pub trends: Vec<TrendFit>,
}

impl ClusterReport {
    /// `q_ε` nonincreasing in `ε` at every rung (grid taken in sorted order).
    pub fn monotone_in_eps(&self) -> bool {
        let mut order: Vec<usize> = (0..self.eps_grid.len()).collect();
        order.sort_by(|&a, &b| self.eps_grid[a].total_cmp(&self.eps_grid[b]));
        self.counts.iter().all(|row| order.windows(2).all(|w| row[w[0]] >= row[w[1]]))
    }

    /// Counts for one `ε` column along the ladder.
    pub fn column(&self, eps_index: usize) -> Vec<usize> {
        self.counts.iter().map(|row| row[eps_index]).collect()
    }
}

pub fn cluster_report_from_spectra(
    ladder: &[usize],
    spectra: &[Spectrum],
    set: &IntervalUnion,
    eps_grid: &[f64],
) -> Result<ClusterReport> {
    check_ladder(ladder, spectra.len())?;
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::invalid("eps values must be positive"));
    }
    let counts: Vec<Vec<usize>> =
        spectra.iter().map(|s| eps_grid.iter().map(|&e| cluster_count(s, set, e)).collect()).collect();
    let mut max_per_eps = Vec::with_capacity(eps_grid.len());
    let mut trends = Vec::with_capacity(eps_grid.len());
    for e in 0..eps_grid.len() {
        let col: Vec<usize> = counts.iter().map(|row| row[e]).collect();
        max_per_eps.push(col.iter().copied().max().unwrap_or(0));
        trends.push(TrendFit::fit(ladder, &col));
    }
    Ok(ClusterReport {
        n_ladder: ladder.to_vec(),
        eps_grid: eps_grid.to_vec(),
        set: set.clone(),
        counts,
        max_per_eps,
        trends,
    })
}
