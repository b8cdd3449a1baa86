use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_ladder, Family};
use crate::numkernel::Spectrum;
use crate::{Error, Result};

/// Heuristic order of attraction read off a finite ladder. `Finite(0)`
/// means the nearest eigenvalue did not approach the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AttractionOrder {
    Finite(usize),
    Infinite { up_to: usize },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AttractionReport {
    pub point: Complex64,
    pub n_ladder: Vec<usize>,
    /// `distances[rung][j]`, nondecreasing in `j`.
    pub distances: Vec<Vec<f64>>,
    /// First-rung over last-rung distance for each `j`.
    pub shrink_factors: Vec<f64>,
    pub estimated_order: AttractionOrder,
}

impl AttractionReport {
    pub fn nearest(&self) -> Vec<f64> {
        self.distances.iter().map(|d| d[0]).collect()
    }
}

fn nearest_distances(spec: &Spectrum, s: Complex64, j_max: usize) -> Vec<f64> {
    let mut d: Vec<f64> = spec.eigenvalues().iter().map(|z| (z - s).norm()).collect();
    d.sort_by(f64::total_cmp);
    d.truncate(j_max);
    d
}

pub fn attraction_profile_from_spectra(
    ladder: &[usize],
    spectra: &[Spectrum],
    s: Complex64,
    j_max: usize,
) -> Result<AttractionReport> {
    check_ladder(ladder, spectra.len())?;
    if j_max == 0 || spectra.iter().any(|sp| sp.len() < j_max) {
        return Err(Error::invalid("j_max must be positive and at most the smallest rung"));
    }
    let distances: Vec<Vec<f64>> = spectra.iter().map(|sp| nearest_distances(sp, s, j_max)).collect();
    let (first, last) = (&distances[0], &distances[distances.len() - 1]);
    let shrink_factors: Vec<f64> = first.iter().zip(last).map(|(f, l)| f / l).collect();
    let failing = (0..j_max).find(|&j| 2.0 * last[j] > first[j]);
    let estimated_order = match failing {
        Some(j) => AttractionOrder::Finite(j),
        None => AttractionOrder::Infinite { up_to: j_max },
    };
    Ok(AttractionReport { point: s, n_ladder: ladder.to_vec(), distances, shrink_factors, estimated_order })
}

/// Distances from `s` to the `j_max` nearest eigenvalues at each rung.
pub fn attraction_profile(family: &Family, s: Complex64, ladder: &[usize], j_max: usize) -> Result<AttractionReport> {
    let spectra = family.spectra(ladder)?;
    attraction_profile_from_spectra(ladder, &spectra, s, j_max)
}
