use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Euclidean distance from `z` to the real segment `[lo, hi]`.
    pub fn distance(&self, z: Complex64) -> f64 {
        if z.re >= self.lo && z.re <= self.hi {
            z.im.abs()
        } else {
            let dx = if z.re < self.lo { self.lo - z.re } else { z.re - self.hi };
            libm::hypot(dx, z.im)
        }
    }
}

/// Ordered union of disjoint closed real intervals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    /// Requires sorted, strictly separated, nondegenerate-or-point intervals.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::invalid("interval endpoints must be finite with lo <= hi"));
            }
        }
        if intervals.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::invalid("intervals must be sorted and disjoint"));
        }
        Ok(IntervalUnion { intervals: intervals.into_iter().map(|(lo, hi)| Interval { lo, hi }).collect() })
    }

    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![(lo, hi)])
    }

    /// Union of arbitrary intervals, merging any two separated by less than
    /// `gap_tol`.
    pub fn merged(mut ranges: Vec<(f64, f64)>, gap_tol: f64) -> Self {
        ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<Interval> = Vec::new();
        for (lo, hi) in ranges {
            match out.last_mut() {
                Some(last) if lo - last.hi < gap_tol => last.hi = last.hi.max(hi),
                _ => out.push(Interval { lo, hi }),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn components(&self) -> usize {
        self.intervals.len()
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.intervals.iter().map(|i| i.distance(z)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.lo <= x && x <= i.hi)
    }

    pub fn lo(&self) -> Option<f64> {
        self.intervals.first().map(|i| i.lo)
    }

    pub fn hi(&self) -> Option<f64> {
        self.intervals.last().map(|i| i.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec;

    #[test]
    fn distance_to_segment() {
        let s = IntervalUnion::single(-2.0, 2.0).unwrap();
        assert_eq!(s.distance(c64(1.0, -0.5)), 0.5);
        assert_eq!(s.distance(c64(5.0, 0.0)), 3.0);
        assert_eq!(s.distance(c64(-5.0, 4.0)), 5.0);
        assert_eq!(s.distance(c64(0.0, 0.0)), 0.0);
    }

    #[test]
    fn merging_and_validation() {
        let u = IntervalUnion::merged(vec![(1.0, 2.0), (-1.0, 0.5), (0.5 + 1e-9, 0.9)], 1e-6);
        assert_eq!(u.components(), 2);
        assert_eq!(u.intervals()[0], Interval { lo: -1.0, hi: 0.9 });
        assert!(IntervalUnion::new(vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(IntervalUnion::new(vec![(1.0, 0.0)]).is_err());
        assert!(IntervalUnion::new(vec![(0.0, 0.0), (1.0, 2.0)]).is_ok());
    }
}
