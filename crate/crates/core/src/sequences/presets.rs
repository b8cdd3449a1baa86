//! Named perturbations and backgrounds addressable from experiment configs.

use alloc::vec;

use num_complex::Complex64;

use super::{CoefficientSequence, PeriodicBackground, Rule};
use crate::{Error, Result};

/// Perturbation families, each multiplied by a user `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PerturbationPreset {
    /// No perturbation.
    None,
    /// Entries decaying like `1/(j+1)²`: summable, bounded trace norm.
    TraceClassDemo,
    /// Entries decaying like `1/√(j+1)`: `S_n = o(n)` but unbounded.
    CesaroDemo,
    /// Entries decaying like `1/(j+1)`: compact, not trace class.
    CompactDemo,
    /// A single nonzero diagonal entry at `j = 0`.
    RankOneDemo,
}

impl PerturbationPreset {
    pub const ALL: [PerturbationPreset; 5] = [
        PerturbationPreset::CesaroDemo,
        PerturbationPreset::CompactDemo,
        PerturbationPreset::None,
        PerturbationPreset::RankOneDemo,
        PerturbationPreset::TraceClassDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PerturbationPreset::None => "none",
            PerturbationPreset::TraceClassDemo => "trace_class_demo",
            PerturbationPreset::CesaroDemo => "cesaro_demo",
            PerturbationPreset::CompactDemo => "compact_demo",
            PerturbationPreset::RankOneDemo => "rank_one_demo",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::invalid(alloc::format!("unknown perturbation preset `{name}`")))
    }

    pub fn summary(self) -> &'static str {
        match self {
            PerturbationPreset::None => "no perturbation (background only)",
            PerturbationPreset::TraceClassDemo => "da=0.6i/(j+1)^2, db=(1.5+1i)/(j+1)^2, dc=-0.4/(j+1)^2 (trace class)",
            PerturbationPreset::CesaroDemo => "da=0.3/sqrt(j+1), db=1i/sqrt(j+1), dc=0 (Cesaro compact)",
            PerturbationPreset::CompactDemo => "db=(0.5+0.5i)/(j+1), dc=0.5i/(j+1) (compact, not trace class)",
            PerturbationPreset::RankOneDemo => "db_0=1.5+1.5i, all else 0 (rank one)",
        }
    }

    /// Rules `(δa, δb, δc)` scaled by `scale`.
    pub fn rules(self, scale: f64) -> (Rule, Rule, Rule) {
        let c = |re: f64, im: f64| Complex64::new(re * scale, im * scale);
        match self {
            PerturbationPreset::None => (Rule::Zero, Rule::Zero, Rule::Zero),
            PerturbationPreset::TraceClassDemo => (
                Rule::power(c(0.0, 0.6), 1.0, 2.0),
                Rule::power(c(1.5, 1.0), 1.0, 2.0),
                Rule::power(c(-0.4, 0.0), 1.0, 2.0),
            ),
            PerturbationPreset::CesaroDemo => {
                (Rule::power(c(0.3, 0.0), 1.0, 0.5), Rule::power(c(0.0, 1.0), 1.0, 0.5), Rule::Zero)
            }
            PerturbationPreset::CompactDemo => {
                (Rule::Zero, Rule::power(c(0.5, 0.5), 1.0, 1.0), Rule::power(c(0.0, 0.5), 1.0, 1.0))
            }
            PerturbationPreset::RankOneDemo => (Rule::Zero, Rule::Single { index: 0, value: c(1.5, 1.5) }, Rule::Zero),
        }
    }

    pub fn sequence(self, background: PeriodicBackground, scale: f64) -> Result<CoefficientSequence> {
        if !scale.is_finite() {
            return Err(Error::invalid("preset scale must be finite"));
        }
        let (a, b, c) = self.rules(scale);
        Ok(CoefficientSequence::new(background, a, b, c)?
            .with_description(alloc::format!("{} (scale {scale})", self.name())))
    }
}

/// Named periodic backgrounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BackgroundPreset {
    Free,
    Period2Gap,
    Period3Gap,
    Period4Gap,
}

impl BackgroundPreset {
    pub const ALL: [BackgroundPreset; 4] = [
        BackgroundPreset::Free,
        BackgroundPreset::Period2Gap,
        BackgroundPreset::Period3Gap,
        BackgroundPreset::Period4Gap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BackgroundPreset::Free => "free",
            BackgroundPreset::Period2Gap => "period2_gap",
            BackgroundPreset::Period3Gap => "period3_gap",
            BackgroundPreset::Period4Gap => "period4_gap",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::invalid(alloc::format!("unknown background preset `{name}`")))
    }

    pub fn vectors(self) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
        match self {
            BackgroundPreset::Free => (vec![1.0], vec![0.0]),
            BackgroundPreset::Period2Gap => (vec![1.0, 0.5], vec![0.0, 0.0]),
            BackgroundPreset::Period3Gap => (vec![1.0, 0.6, 0.8], vec![0.5, -0.5, 0.0]),
            BackgroundPreset::Period4Gap => (vec![1.0, 0.7, 1.2, 0.5], vec![0.0, 0.4, -0.4, 0.2]),
        }
    }

    pub fn background(self) -> PeriodicBackground {
        let (a, b) = self.vectors();
        PeriodicBackground::new(a, b).expect("preset vectors are valid")
    }
}
