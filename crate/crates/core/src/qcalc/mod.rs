//! Scalar q-arithmetic and q-calculus.
//!
//! Two q-numbers are used throughout:
//!
//! * the symmetric bracket `[x]_q = (q^x - q^-x) / (q - q^-1)`,
//! * the brace `{x}_q = (q^{2x} - 1) / (q^2 - 1) = [x]_q q^{x-1}`.
//!
//! Both are evaluated through `sinh`/`expm1` so that the value stays accurate
//! for q close to one; inside the classical-limit band `|q - 1| < ε_limit`
//! every function switches to its exact q = 1 formula.

mod derivative;
mod jackson;

pub use derivative::{q_derivative, DerivativeKind, Polynomial};
pub use jackson::{
    jackson_integral, jackson_integral_detailed, JacksonEstimate, LatticeBase, LatticeExtent,
    QLattice, CONSECUTIVE_SMALL_NODES, DEFAULT_MAX_INDEX,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of the band around q = 1 treated as the classical limit.
pub const DEFAULT_LIMIT_EPS: f64 = 1e-8;

/// Hard cap on the number of series terms for the q-exponentials.
pub const MAX_SERIES_TERMS: usize = 10_000;

// exp overflows a little above 709
const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Generic,
    ClassicalLimit,
}

/// The deformation parameter together with its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QParam {
    q: f64,
    regime: Regime,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_limit(q, DEFAULT_LIMIT_EPS)
    }

    pub fn with_limit(q: f64, eps_limit: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "q must be a positive finite real, got {q}"
            )));
        }
        if !(eps_limit >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps_limit must be non-negative, got {eps_limit}"
            )));
        }
        let regime = if (q - 1.0).abs() < eps_limit {
            Regime::ClassicalLimit
        } else {
            Regime::Generic
        };
        Ok(QParam { q, regime })
    }

    /// q = 1.
    pub fn classical() -> Self {
        QParam {
            q: 1.0,
            regime: Regime::ClassicalLimit,
        }
    }

    pub fn value(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn is_classical(&self) -> bool {
        self.regime == Regime::ClassicalLimit
    }

    pub fn ln(&self) -> f64 {
        self.q.ln()
    }

    /// q². Stays in the classical regime if q is.
    pub fn squared(&self) -> QParam {
        QParam {
            q: self.q * self.q,
            regime: self.regime,
        }
    }

    pub fn reciprocal(&self) -> QParam {
        QParam {
            q: 1.0 / self.q,
            regime: self.regime,
        }
    }

    /// The member of {q, 1/q} that is at most one; lattices are laid out with it.
    pub fn oriented(&self) -> QParam {
        if self.q > 1.0 {
            self.reciprocal()
        } else {
            *self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QNumberKind {
    /// `[x]_q`
    Bracket,
    /// `{x}_q`
    Brace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpKind {
    /// `e_q^x = Σ x^n / [n]_q!`
    SmallE,
    /// `E_q^x = Σ x^n / {n}_q!`
    BigE,
}

impl ExpKind {
    fn number_kind(self) -> QNumberKind {
        match self {
            ExpKind::SmallE => QNumberKind::Bracket,
            ExpKind::BigE => QNumberKind::Brace,
        }
    }
}

fn check_exponent(arg: f64, what: &str, x: f64, q: QParam) -> Result<()> {
    if !arg.is_finite() || arg.abs() > MAX_EXPONENT {
        return Err(Error::Range(format!(
            "{what}: |x ln q| too large for x = {x}, q = {}",
            q.value()
        )));
    }
    Ok(())
}

/// `[x]_q = (q^x - q^-x) / (q - q^-1)`.
pub fn q_bracket(x: f64, q: QParam) -> Result<f64> {
    if q.is_classical() {
        return Ok(x);
    }
    let lnq = q.ln();
    let arg = x * lnq;
    check_exponent(arg, "q_bracket", x, q)?;
    Ok(arg.sinh() / lnq.sinh())
}

/// `{x}_q = (q^{2x} - 1) / (q^2 - 1)`.
pub fn q_brace(x: f64, q: QParam) -> Result<f64> {
    if q.is_classical() {
        return Ok(x);
    }
    let lnq = q.ln();
    let arg = 2.0 * x * lnq;
    check_exponent(arg, "q_brace", x, q)?;
    Ok(arg.exp_m1() / (2.0 * lnq).exp_m1())
}

pub fn q_number(x: f64, q: QParam, kind: QNumberKind) -> Result<f64> {
    match kind {
        QNumberKind::Bracket => q_bracket(x, q),
        QNumberKind::Brace => q_brace(x, q),
    }
}

/// Product of the q-numbers 1..=n of the given kind.
pub fn q_factorial(n: u32, q: QParam, kind: QNumberKind) -> Result<f64> {
    let mut acc = 1.0;
    for j in 1..=n {
        acc *= q_number(f64::from(j), q, kind)?;
    }
    if !acc.is_finite() {
        return Err(Error::Range(format!("q_factorial overflows at n = {n}")));
    }
    Ok(acc)
}

/// `[n]! / ([m]! [n-m]!)` with bracket q-factorials.
pub fn q_binomial(n: u32, m: u32, q: QParam) -> Result<f64> {
    if m > n {
        return Err(Error::Domain(format!(
            "q_binomial needs m <= n, got n = {n}, m = {m}"
        )));
    }
    let m = m.min(n - m);
    let mut acc = 1.0;
    for j in 1..=m {
        acc *= q_bracket(f64::from(n - m + j), q)? / q_bracket(f64::from(j), q)?;
    }
    Ok(acc)
}

/// Coefficients of `x^m`, m = 0..=n, in `(1 - x)^n_q`.
pub fn q_one_minus_pow_coeffs(n: u32, q: QParam) -> Result<Vec<f64>> {
    (0..=n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * q_binomial(n, m, q)?)
        })
        .collect()
}

/// `(1 - x)^n_q = Σ_m [n]!/([m]![n-m]!) (-x)^m`.
///
/// Evaluated through the equivalent product `∏_{j<n} (1 - q^{2j-n+1} x)`,
/// which avoids the cancellation of the expanded sum for q far from 1.
pub fn q_one_minus_pow(x: f64, n: u32, q: QParam) -> Result<f64> {
    if q.is_classical() {
        return Ok((1.0 - x).powi(n as i32));
    }
    let lnq = q.ln();
    let mut acc = 1.0;
    for j in 0..n {
        let e = 2.0 * f64::from(j) - f64::from(n) + 1.0;
        acc *= 1.0 - (e * lnq).exp() * x;
    }
    if !acc.is_finite() {
        return Err(Error::Range(format!("(1 - x)^{n}_q overflows at x = {x}")));
    }
    Ok(acc)
}

/// A truncated series value together with what is needed to judge it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
    /// Σ |term|; the ratio to |value| is the cancellation factor.
    pub abs_sum: f64,
}

impl SeriesSum {
    pub fn condition(&self) -> f64 {
        let v = self.value.norm();
        if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / v
        }
    }
}

/// Partial sum of the q-exponential series, stopped once the next term is
/// below `tol * (|partial sum| + 1)`.
pub fn q_exp_series(x: Complex64, q: QParam, kind: ExpKind, tol: f64) -> Result<SeriesSum> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if q.is_classical() {
        let value = x.exp();
        return Ok(SeriesSum {
            value,
            terms: 0,
            abs_sum: x.norm().exp(),
        });
    }
    let nk = kind.number_kind();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    for n in 1..=MAX_SERIES_TERMS {
        let number = match q_number(n as f64, q, nk) {
            Ok(v) => v,
            // q-numbers saturate only after the terms have stopped shrinking
            Err(Error::Range(_)) => {
                return Err(Error::Convergence {
                    terms: n,
                    remainder: term.norm(),
                })
            }
            Err(e) => return Err(e),
        };
        term = term * x / number;
        let mag = term.norm();
        if !mag.is_finite() {
            return Err(Error::Convergence {
                terms: n,
                remainder: f64::INFINITY,
            });
        }
        sum += term;
        abs_sum += mag;
        if mag < tol * (sum.norm() + 1.0) {
            return Ok(SeriesSum {
                value: sum,
                terms: n + 1,
                abs_sum,
            });
        }
    }
    Err(Error::Convergence {
        terms: MAX_SERIES_TERMS,
        remainder: term.norm(),
    })
}

pub fn q_exp(x: Complex64, q: QParam, kind: ExpKind, tol: f64) -> Result<Complex64> {
    q_exp_series(x, q, kind, tol).map(|s| s.value)
}

/// `E_q^x` for real x through its infinite-product form.
///
/// With p = q² < 1 this is `1 / ((1 - p) x; p)_∞`, the continuation of the
/// series beyond its radius `1/(1 - p)`; with q > 1 and p = q⁻² it is the
/// entire function `(-(1 - p) x; p)_∞`.
pub fn big_e_product(x: f64, q: QParam) -> Result<f64> {
    if q.is_classical() {
        return Ok(x.exp());
    }
    let below_one = q.value() < 1.0;
    let p = q.oriented().squared().value();
    let c = (1.0 - p) * x;
    let mut acc = 1.0_f64;
    let mut pk = 1.0_f64;
    for _ in 0..MAX_SERIES_TERMS {
        let inc = c * pk;
        let factor = if below_one { 1.0 - inc } else { 1.0 + inc };
        acc *= factor;
        if inc.abs() < 1e-18 {
            break;
        }
        pk *= p;
    }
    if below_one {
        if acc == 0.0 {
            return Err(Error::Range(format!("E_q^x has a pole at x = {x}")));
        }
        acc = 1.0 / acc;
    }
    if !acc.is_finite() {
        return Err(Error::Range(format!("E_q^x overflows at x = {x}")));
    }
    Ok(acc)
}
