//! Test functions `F` for eigenvalue means and symbol integrals.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TestFunction {
    /// `z^degree`; degree 0 is the constant 1.
    Monomial { degree: u32 },
    /// Radial hat: 1 on `|z - center| <= inner`, 0 beyond `outer`, linear
    /// in the radius between.
    Hat { center: Complex64, inner: f64, outer: f64 },
    /// `Σ coeffs[q] z^q`.
    Polynomial { coeffs: Vec<Complex64> },
}

impl TestFunction {
    pub fn monomial(degree: u32) -> Self {
        TestFunction::Monomial { degree }
    }

    pub fn hat(center: Complex64, inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && outer > inner && outer.is_finite() && center.is_finite()) {
            return Err(Error::invalid("hat bump needs 0 <= inner < outer"));
        }
        Ok(TestFunction::Hat { center, inner, outer })
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        TestFunction::Polynomial { coeffs }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Monomial { degree } => z.powu(*degree),
            TestFunction::Hat { center, inner, outer } => {
                let r = (z - center).norm();
                let v = if r <= *inner {
                    1.0
                } else if r >= *outer {
                    0.0
                } else {
                    (outer - r) / (outer - inner)
                };
                Complex64::new(v, 0.0)
            }
            TestFunction::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
            }
        }
    }

    /// Short label used in reports, e.g. `z^2` or `hat(0+0i,0.1,0.2)`.
    pub fn label(&self) -> alloc::string::String {
        use alloc::format;
        match self {
            TestFunction::Monomial { degree } => format!("z^{degree}"),
            TestFunction::Hat { center, inner, outer } => {
                format!("hat({}{:+}i,{},{})", center.re, center.im, inner, outer)
            }
            TestFunction::Polynomial { coeffs } => {
                let parts: Vec<_> = coeffs.iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect();
                format!("poly[{}]", parts.join(";"))
            }
        }
    }
}
