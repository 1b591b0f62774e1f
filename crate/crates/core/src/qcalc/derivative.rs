use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{q_brace, q_bracket, QParam};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeKind {
    /// `(f(qz) - f(z/q)) / (z (q - 1/q))`, maps z^n to [n]_q z^{n-1}.
    Symmetric,
    /// `(f(q²z) - f(z)) / (z (q² - 1))`, maps z^n to {n}_q z^{n-1}.
    BaseQ2,
}

// relative step for the q = 1 fallback (cube root of machine epsilon)
const CLASSICAL_STEP: f64 = 6.0e-6;

/// Difference-quotient q-derivative of an arbitrary function.
///
/// The quotient is singular at z = 0, so raw function values are rejected
/// there; use [`Polynomial::q_derivative`] when coefficients are available.
/// In the classical regime the ordinary derivative is returned, estimated by
/// a central difference.
pub fn q_derivative<F>(f: F, z: Complex64, q: QParam, kind: DerivativeKind) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "q-derivative of a function value at z = 0; use the polynomial coefficient rule".into(),
        ));
    }
    if q.is_classical() {
        let h = CLASSICAL_STEP;
        return Ok((f(z * (1.0 + h)) - f(z * (1.0 - h))) / (z * 2.0 * h));
    }
    let qv = q.value();
    let value = match kind {
        DerivativeKind::Symmetric => (f(z * qv) - f(z / qv)) / (z * (qv - 1.0 / qv)),
        DerivativeKind::BaseQ2 => (f(z * qv * qv) - f(z)) / (z * (qv * qv - 1.0)),
    };
    Ok(value)
}

/// Dense polynomial `Σ c_n z^n`, the coefficient representation on which the
/// q-derivative and its Jackson inverse act exactly (including at z = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn number(n: usize, q: QParam, kind: DerivativeKind) -> Result<f64> {
        match kind {
            DerivativeKind::Symmetric => q_bracket(n as f64, q),
            DerivativeKind::BaseQ2 => q_brace(n as f64, q),
        }
    }

    /// Coefficient rule: `c_n z^n -> c_n [n] z^{n-1}` (or `{n}` for base q²).
    pub fn q_derivative(&self, q: QParam, kind: DerivativeKind) -> Result<Polynomial> {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (n, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * Self::number(n, q, kind)?);
        }
        Ok(Polynomial { coeffs: out })
    }

    /// Primitive vanishing at zero: `c_n z^n -> c_n z^{n+1} / [n+1]`.
    pub fn q_primitive(&self, q: QParam, kind: DerivativeKind) -> Result<Polynomial> {
        let mut out = vec![Complex64::new(0.0, 0.0)];
        for (n, &c) in self.coeffs.iter().enumerate() {
            out.push(c / Self::number(n + 1, q, kind)?);
        }
        Ok(Polynomial { coeffs: out })
    }
}
