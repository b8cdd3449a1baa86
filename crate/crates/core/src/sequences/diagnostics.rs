use alloc::vec::Vec;

use super::CoefficientSequence;
use crate::{Error, Result};

/// Heuristic label for a finite prefix of a perturbation. Asymptotic
/// classes cannot be decided from finitely many entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum VerdictHint {
    TraceClassConsistent,
    CesaroConsistent,
    Inconsistent,
    Inconclusive,
}

impl VerdictHint {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictHint::TraceClassConsistent => "trace-class-consistent",
            VerdictHint::CesaroConsistent => "cesaro-consistent",
            VerdictHint::Inconsistent => "inconsistent",
            VerdictHint::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticThresholds {
    /// `(S_last - S_prev) / S_prev` below this reads as summable.
    pub relative_increment: f64,
    /// Required overall decay factor of `S_n / n` across the ladder.
    pub cesaro_decay: f64,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        DiagnosticThresholds { relative_increment: 1e-2, cesaro_decay: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PerturbationDiagnostics {
    pub n_ladder: Vec<usize>,
    /// `S_n = Σ_{j=1..n} (|δa_j| + |δb_j| + |δc_j|)`.
    pub partial_sums: Vec<f64>,
    pub cesaro_ratios: Vec<f64>,
    pub verdict_hint: VerdictHint,
    pub thresholds: DiagnosticThresholds,
}

pub fn perturbation_diagnostics(
    seq: &CoefficientSequence,
    n_ladder: &[usize],
    thresholds: DiagnosticThresholds,
) -> Result<PerturbationDiagnostics> {
    if n_ladder.is_empty() || n_ladder.windows(2).any(|w| w[0] >= w[1]) || n_ladder[0] == 0 {
        return Err(Error::invalid("ladder must be nonempty, positive and strictly increasing"));
    }
    let mut partial_sums = Vec::with_capacity(n_ladder.len());
    let mut sum = 0.0;
    let mut j = 1;
    for &n in n_ladder {
        while j <= n {
            let (da, db, dc) = seq.delta(j);
            sum += da.norm() + db.norm() + dc.norm();
            j += 1;
        }
        partial_sums.push(sum);
    }
    let cesaro_ratios: Vec<f64> = partial_sums.iter().zip(n_ladder).map(|(s, &n)| s / n as f64).collect();
    let verdict_hint = classify(&partial_sums, &cesaro_ratios, &thresholds);
    Ok(PerturbationDiagnostics { n_ladder: n_ladder.to_vec(), partial_sums, cesaro_ratios, verdict_hint, thresholds })
}

fn classify(sums: &[f64], ratios: &[f64], th: &DiagnosticThresholds) -> VerdictHint {
    let last = *sums.last().expect("nonempty");
    if last == 0.0 {
        return VerdictHint::TraceClassConsistent;
    }
    if sums.len() < 2 {
        return VerdictHint::Inconclusive;
    }
    let prev = sums[sums.len() - 2];
    if prev > 0.0 && (last - prev) / prev < th.relative_increment {
        return VerdictHint::TraceClassConsistent;
    }
    let first = ratios[0];
    let end = *ratios.last().expect("nonempty");
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0]);
    if monotone && end * th.cesaro_decay <= first {
        VerdictHint::CesaroConsistent
    } else if end >= first {
        VerdictHint::Inconsistent
    } else {
        VerdictHint::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::sequences::{PeriodicBackground, Rule};

    fn diag_only(rule: Rule) -> CoefficientSequence {
        CoefficientSequence::new(PeriodicBackground::free(), Rule::Zero, rule, Rule::Zero).unwrap()
    }

    #[test]
    fn zero_perturbation_is_trace_class() {
        let seq = CoefficientSequence::unperturbed(PeriodicBackground::free());
        let d = perturbation_diagnostics(&seq, &[10, 100], DiagnosticThresholds::default()).unwrap();
        assert_eq!(d.partial_sums, [0.0, 0.0]);
        assert_eq!(d.verdict_hint, VerdictHint::TraceClassConsistent);
    }

    #[test]
    fn inverse_square_sums_to_basel_minus_one() {
        let seq = diag_only(Rule::power(c64(1.0, 0.0), 1.0, 2.0));
        let d = perturbation_diagnostics(&seq, &[100, 1000, 10000], DiagnosticThresholds::default()).unwrap();
        // oracle: direct partial sums of 1/m² for m = 2..=n+1
        for (&n, &s) in d.n_ladder.iter().zip(&d.partial_sums) {
            let oracle: f64 = (2..=n + 1).map(|m| 1.0 / (m as f64 * m as f64)).sum();
            assert!((s - oracle).abs() < 1e-12);
        }
        let limit = core::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!((d.partial_sums[2] - limit).abs() < 1.1e-4);
        assert!(d.partial_sums.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(d.verdict_hint, VerdictHint::TraceClassConsistent);
    }

    #[test]
    fn inverse_sqrt_is_cesaro() {
        let seq = diag_only(Rule::power(c64(1.0, 0.0), 1.0, 0.5));
        let d = perturbation_diagnostics(&seq, &[100, 1000, 10000], DiagnosticThresholds::default()).unwrap();
        assert!(d.partial_sums[2] > 190.0);
        assert!(d.cesaro_ratios[2] < 0.03);
        assert_eq!(d.verdict_hint, VerdictHint::CesaroConsistent);
    }

    #[test]
    fn constant_perturbation_is_inconsistent() {
        let seq = diag_only(Rule::Periodic { values: alloc::vec![c64(0.5, 0.0)] });
        let d = perturbation_diagnostics(&seq, &[10, 100, 1000], DiagnosticThresholds::default()).unwrap();
        assert_eq!(d.verdict_hint, VerdictHint::Inconsistent);
    }

    #[test]
    fn ladder_must_increase() {
        let seq = CoefficientSequence::unperturbed(PeriodicBackground::free());
        assert!(perturbation_diagnostics(&seq, &[10, 10], DiagnosticThresholds::default()).is_err());
    }
}
