use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Closed-form rule `j ↦ value` for one perturbation stream.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "rule", rename_all = "snake_case"))]
pub enum Rule {
    Zero,
    /// `scale / (j + offset)^exponent`
    Power {
        scale: Complex64,
        offset: f64,
        exponent: f64,
    },
    /// `scale * ratio^j`
    Geometric {
        scale: Complex64,
        ratio: f64,
    },
    /// `values[j mod len]`
    Periodic {
        values: Vec<Complex64>,
    },
    /// `values[j]` for `j < len`, zero afterwards.
    Finite {
        values: Vec<Complex64>,
    },
    /// `value` at `index`, zero elsewhere.
    Single {
        index: usize,
        value: Complex64,
    },
}

impl Rule {
    pub fn power(scale: Complex64, offset: f64, exponent: f64) -> Self {
        Rule::Power { scale, offset, exponent }
    }

    pub fn at(&self, j: usize) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Rule::Zero => zero,
            Rule::Power { scale, offset, exponent } => *scale / libm::pow(j as f64 + offset, *exponent),
            Rule::Geometric { scale, ratio } => *scale * libm::pow(*ratio, j as f64),
            Rule::Periodic { values } => values[j % values.len()],
            Rule::Finite { values } => values.get(j).copied().unwrap_or(zero),
            Rule::Single { index, value } => {
                if j == *index {
                    *value
                } else {
                    zero
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rule::Zero => true,
            Rule::Power { scale, .. } | Rule::Geometric { scale, .. } => scale.norm() == 0.0,
            Rule::Periodic { values } | Rule::Finite { values } => values.iter().all(|z| z.norm() == 0.0),
            Rule::Single { value, .. } => value.norm() == 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Rule::Power { offset, exponent, scale } => {
                if !(*offset > 0.0 && exponent.is_finite() && scale.is_finite()) {
                    return Err(Error::invalid("power rule needs offset > 0 and finite parameters"));
                }
            }
            Rule::Geometric { scale, ratio } => {
                if !(ratio.is_finite() && scale.is_finite()) {
                    return Err(Error::invalid("geometric rule needs finite parameters"));
                }
            }
            Rule::Periodic { values } if values.is_empty() => {
                return Err(Error::invalid("periodic rule needs at least one value"));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        use alloc::format;
        match self {
            Rule::Zero => "0".into(),
            Rule::Power { scale, offset, exponent } => {
                format!("({}{:+}i)/(j+{offset})^{exponent}", scale.re, scale.im)
            }
            Rule::Geometric { scale, ratio } => format!("({}{:+}i)*{ratio}^j", scale.re, scale.im),
            Rule::Periodic { values } => format!("periodic[{}]", values.len()),
            Rule::Finite { values } => format!("finite[{}]", values.len()),
            Rule::Single { index, value } => format!("({}{:+}i) at j={index}", value.re, value.im),
        }
    }
}

/// Real `k`-periodic background with vectors `a = (a_0, …, a_{k-1})` and
/// `b = (b_0, …, b_{k-1})`.
///
/// Subdiagonal entry `a_j` (between rows `j-1` and `j`) is `a[j mod k]`,
/// so `a_0` only shows up from the `k`-th off-diagonal entry onwards, as
/// the coupling between consecutive periods.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeriodicBackground {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PeriodicBackground {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::invalid("background vectors must be nonempty and of equal length"));
        }
        if a.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid("background off-diagonal entries must be positive"));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("background diagonal entries must be finite"));
        }
        Ok(PeriodicBackground { a, b })
    }

    /// `a = (1)`, `b = (0)`: the free Jacobi background.
    pub fn free() -> Self {
        PeriodicBackground { a: alloc::vec![1.0], b: alloc::vec![0.0] }
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    #[inline]
    pub fn a_at(&self, j: usize) -> f64 {
        self.a[j % self.a.len()]
    }

    #[inline]
    pub fn b_at(&self, j: usize) -> f64 {
        self.b[j % self.b.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec;

    #[test]
    fn rule_values() {
        assert_eq!(Rule::power(c64(0.0, 1.0), 1.0, 2.0).at(1), c64(0.0, 0.25));
        assert_eq!(Rule::Geometric { scale: c64(2.0, 0.0), ratio: 0.5 }.at(3), c64(0.25, 0.0));
        let p = Rule::Periodic { values: vec![c64(1.0, 0.0), c64(2.0, 0.0)] };
        assert_eq!(p.at(5), c64(2.0, 0.0));
        let f = Rule::Finite { values: vec![c64(1.0, 0.0)] };
        assert_eq!(f.at(0), c64(1.0, 0.0));
        assert_eq!(f.at(1), c64(0.0, 0.0));
        let s = Rule::Single { index: 2, value: c64(3.0, 0.0) };
        assert_eq!((s.at(1), s.at(2)), (c64(0.0, 0.0), c64(3.0, 0.0)));
        assert!(Rule::power(c64(1.0, 0.0), 0.0, 1.0).validate().is_err());
    }

    #[test]
    fn background_validation() {
        assert!(PeriodicBackground::new(vec![1.0, -1.0], vec![0.0, 0.0]).is_err());
        assert!(PeriodicBackground::new(vec![1.0], vec![0.0, 0.0]).is_err());
        let bg = PeriodicBackground::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!((bg.a_at(3), bg.b_at(4)), (2.0, 3.0));
    }
}
