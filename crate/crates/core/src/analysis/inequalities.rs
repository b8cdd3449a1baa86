use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numkernel::{Spectrum, SquareMatrix, TridiagonalMatrix};
use crate::sequences::CoefficientSequence;
use crate::symbols::Interval;
use crate::Result;

/// Scale-free tolerance `1e-9 (1 + ‖A‖_[1])`.
fn tolerance<M: SquareMatrix + ?Sized>(a: &M) -> f64 {
    1e-9 * (1.0 + a.entrywise_l1())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KyFanReport {
    pub order: usize,
    /// `max_q (Σ_{j≤q} Im λ_j(A) - Σ_{j≤q} λ_j(Im A))`, clamped at 0.
    pub im_max_violation: f64,
    pub re_max_violation: f64,
    /// `|Σ Im λ_j(A) - Σ λ_j(Im A)|` over all `j`.
    pub im_equality_gap: f64,
    pub re_equality_gap: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Largest positive excess of the partial sums of `lhs` over `rhs`, both
/// sorted decreasing, and the gap of the full sums.
fn majorization(mut lhs: Vec<f64>, mut rhs: Vec<f64>) -> (f64, f64) {
    lhs.sort_by(|a, b| b.total_cmp(a));
    rhs.sort_by(|a, b| b.total_cmp(a));
    let (mut sl, mut sr, mut worst) = (0.0, 0.0, 0.0f64);
    for (l, r) in lhs.iter().zip(&rhs) {
        sl += l;
        sr += r;
        worst = worst.max(sl - sr);
    }
    (worst, (sl - sr).abs())
}

/// Partial sums of `Im λ_j(A)` (resp. `Re`) against those of the
/// eigenvalues of `Im(A)` (resp. `Re(A)`), both sorted decreasing.
pub fn kyfan_mirsky_check<M: SquareMatrix + ?Sized>(a: &M) -> Result<KyFanReport> {
    kyfan_mirsky_check_with(a, &a.spectrum()?)
}

/// [`kyfan_mirsky_check`] with a precomputed spectrum of `a`.
pub fn kyfan_mirsky_check_with<M: SquareMatrix + ?Sized>(a: &M, spec: &Spectrum) -> Result<KyFanReport> {
    let (re_eigs, im_eigs) = a.hermitian_part_eigenvalues()?;
    let mut eig = spec.eigenvalues().to_vec();
    // deterministic order: Im descending, Re descending, solver index
    eig.sort_by(|x, y| y.im.total_cmp(&x.im).then(y.re.total_cmp(&x.re)));
    let (im_max_violation, im_equality_gap) = majorization(eig.iter().map(|z| z.im).collect(), im_eigs);
    let (re_max_violation, re_equality_gap) = majorization(eig.iter().map(|z| z.re).collect(), re_eigs);
    let tol = tolerance(a);
    let holds = im_max_violation <= tol && re_max_violation <= tol && im_equality_gap <= tol && re_equality_gap <= tol;
    Ok(KyFanReport {
        order: a.order(),
        im_max_violation,
        re_max_violation,
        im_equality_gap,
        re_equality_gap,
        tolerance: tol,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OutlierReport {
    pub epsilon: f64,
    /// `#{λ : |Im λ| > ε}`.
    pub count: usize,
    /// `‖Im(A)‖₁ / ε`.
    pub bound: f64,
    pub holds: bool,
    /// `[c, d]` spanned by the eigenvalues of `Re(A)`.
    pub re_interval: Interval,
    /// Eigenvalues outside the `ε`-neighbourhood of `[c, d]`.
    pub outside_neighborhood: usize,
    pub neighborhood_holds: bool,
    /// Largest distance of a `Re λ` outside `[c, d]`.
    pub real_part_excess: f64,
    pub confinement_tolerance: f64,
    pub confinement_holds: bool,
}

impl OutlierReport {
    pub fn all_hold(&self) -> bool {
        self.holds && self.neighborhood_holds && self.confinement_holds
    }
}

/// Counts nonreal outliers against `‖Im(A)‖₁/ε` and checks that the real
/// parts stay in the numerical range of `Re(A)`.
pub fn nonreal_outlier_bound<M: SquareMatrix + ?Sized>(a: &M, eps: f64) -> Result<OutlierReport> {
    let spec = a.spectrum()?;
    let (re_eigs, im_eigs) = a.hermitian_part_eigenvalues()?;
    Ok(outlier_report(a, &spec, &re_eigs, &im_eigs, eps))
}

/// [`nonreal_outlier_bound`] for several `eps` with a precomputed spectrum.
pub fn nonreal_outlier_bounds_with<M: SquareMatrix + ?Sized>(
    a: &M,
    spec: &Spectrum,
    eps: &[f64],
) -> Result<Vec<OutlierReport>> {
    let (re_eigs, im_eigs) = a.hermitian_part_eigenvalues()?;
    Ok(eps.iter().map(|&e| outlier_report(a, spec, &re_eigs, &im_eigs, e)).collect())
}

fn outlier_report<M: SquareMatrix + ?Sized>(
    a: &M,
    spec: &Spectrum,
    re_eigs: &[f64],
    im_eigs: &[f64],
    eps: f64,
) -> OutlierReport {
    assert!(eps > 0.0, "eps must be positive");
    // Im(A) is Hermitian, so its trace norm is the sum of |eigenvalues|
    let bound = im_eigs.iter().map(|x| x.abs()).sum::<f64>() / eps;
    let (lo, hi) = re_eigs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let re_interval = Interval { lo, hi };
    let eig = spec.eigenvalues();
    let count = eig.iter().filter(|z| z.im.abs() > eps).count();
    let outside_neighborhood = eig.iter().filter(|&&z| re_interval.distance(z) >= eps).count();
    let real_part_excess =
        eig.iter().map(|z| (re_interval.lo - z.re).max(z.re - re_interval.hi).max(0.0)).fold(0.0, f64::max);
    let slack = 1e-9;
    let confinement_tolerance = tolerance(a);
    OutlierReport {
        epsilon: eps,
        count,
        bound,
        holds: count as f64 <= bound + slack,
        re_interval,
        outside_neighborhood,
        neighborhood_holds: outside_neighborhood as f64 <= bound + slack,
        real_part_excess,
        confinement_tolerance,
        confinement_holds: real_part_excess <= confinement_tolerance,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecurrenceReport {
    pub order: usize,
    /// `max_j |d_n(λ_j) / d_n'(λ_j)|` over non-degenerate eigenvalues.
    pub max_residual: f64,
    /// `1e-6 (1 + max_j |λ_j|)`.
    pub bound: f64,
    pub holds: bool,
    /// Eigenvalue indices where `d_n'` vanished or underflowed.
    pub degenerate: Vec<usize>,
}

/// `(d_n(z), d_n'(z))` from
/// `d_j = (z - b_{j-1}) d_{j-1} - a_{j-1} c_{j-1} d_{j-2}`, `d_{-1} = 0`,
/// `d_0 = 1`, with a common rescaling that leaves the ratio intact.
fn characteristic(a: &TridiagonalMatrix, z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (diag, sub, sup) = (a.diag(), a.sub(), a.sup());
    let (mut d_prev, mut d) = (zero, Complex64::new(1.0, 0.0));
    let (mut dp_prev, mut dp) = (zero, zero);
    for j in 1..=a.order() {
        let shift = z - diag[j - 1];
        let coupling = if j >= 2 { sub[j - 2] * sup[j - 2] } else { zero };
        let d_next = shift * d - coupling * d_prev;
        let dp_next = d + shift * dp - coupling * dp_prev;
        d_prev = d;
        d = d_next;
        dp_prev = dp;
        dp = dp_next;
        let big = d.norm().max(dp.norm()).max(d_prev.norm()).max(dp_prev.norm());
        if big > 1e100 || (big < 1e-100 && big > 0.0) {
            let s = 1.0 / big;
            d *= s;
            dp *= s;
            d_prev *= s;
            dp_prev *= s;
        }
    }
    (d, dp)
}

/// Newton-normalized residual of the characteristic recurrence at the
/// computed eigenvalues of `a`.
pub fn recurrence_residual_of(a: &TridiagonalMatrix, spec: &Spectrum) -> RecurrenceReport {
    let mut max_residual: f64 = 0.0;
    let mut degenerate = Vec::new();
    for (i, &z) in spec.eigenvalues().iter().enumerate() {
        let (d, dp) = characteristic(a, z);
        if dp.norm() < f64::MIN_POSITIVE || !dp.is_finite() || !d.is_finite() {
            degenerate.push(i);
            continue;
        }
        max_residual = max_residual.max((d / dp).norm());
    }
    let bound = 1e-6 * (1.0 + spec.max_modulus());
    RecurrenceReport { order: a.order(), max_residual, bound, holds: max_residual <= bound, degenerate }
}

/// Residual check for the `n x n` section of `seq`.
pub fn recurrence_residual(seq: &CoefficientSequence, n: usize) -> Result<RecurrenceReport> {
    let a = seq.section(n)?;
    let spec = crate::numkernel::eig_general(&a)?;
    Ok(recurrence_residual_of(&a, &spec))
}
