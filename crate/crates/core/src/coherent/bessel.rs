use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::{
    q_bracket, q_exp_series, q_factorial, q_one_minus_pow, ExpKind, QNumberKind, QParam,
    CONSECUTIVE_SMALL_NODES, DEFAULT_MAX_INDEX,
};

/// Relative rounding error tolerated in a single `e_q` evaluation.
pub const E_SERIES_PRECISION: f64 = 1e-10;

const LAGUERRE_DEGREE: usize = 48;

/// Choice of the integer exponent n in the q-Bessel integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselOrder {
    /// n = l - 1, the exponent of the integral representation of `K_{l-1/2}`.
    #[default]
    Classical,
    /// n = l.
    Literal,
}

impl BesselOrder {
    pub fn exponent(self, l: u32) -> u32 {
        match self {
            BesselOrder::Classical => l.saturating_sub(1),
            BesselOrder::Literal => l,
        }
    }
}

/// `e_q^x` with a rounding check on the alternating series.
pub fn small_e_checked(x: f64, q: QParam) -> Result<f64> {
    let s = q_exp_series(Complex64::new(x, 0.0), q, ExpKind::SmallE, 1e-17)?;
    let err = s.condition() * f64::EPSILON * (s.terms.max(1) as f64).sqrt();
    if err > E_SERIES_PRECISION {
        return Err(Error::Precision(format!(
            "e_q series at x = {x:e} has relative rounding error ~{err:e} (condition {:e})",
            s.condition()
        )));
    }
    Ok(s.value.re)
}

/// `(t² - 1)ⁿ_{q²} = (-1)ⁿ (1 - t²)ⁿ_{q²}`.
pub fn shifted_square_power(t: f64, n: u32, q: QParam) -> Result<f64> {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * q_one_minus_pow(t * t, n, q.squared())?)
}

/// The q-deformed modified Bessel function of order l - 1/2:
///
/// ```text
/// K̃(x) = (x/[2]_q)^{l-1/2} √π / [n]_{q²}! ∫_{q^{l-1}}^∞ d(t:q) e_q(-xt) (t² - 1)ⁿ_{q²}
/// ```
///
/// The Jackson integral runs over `a p^{-k}`, k ≥ 1, with weights
/// `(1 - p) t` and `p = min(q, 1/q)`. In the classical regime the ordinary
/// integral is taken by Gauss-Laguerre quadrature.
pub fn q_bessel_tilde(l: u32, x: f64, q: QParam, tol: f64, order: BesselOrder) -> Result<f64> {
    if l == 0 {
        return Err(Error::Domain("q-Bessel order needs l >= 1".into()));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "q-Bessel argument must be positive, got {x}"
        )));
    }
    let n = order.exponent(l);
    let two = q_bracket(2.0, q)?;
    let nu = l as f64 - 0.5;
    let pref = (x / two).powf(nu) * PI.sqrt() / q_factorial(n, q.squared(), QNumberKind::Bracket)?;
    let integral = if q.is_classical() {
        classical_integral(x, n)?
    } else {
        jackson_tail_integral(x, n, l, q, tol)?
    };
    Ok(pref * integral)
}

fn classical_integral(x: f64, n: u32) -> Result<f64> {
    // t = 1 + s/x
    let rule = GaussLaguerre::new(
        NonZeroUsize::new(LAGUERRE_DEGREE).expect("non-zero degree"),
        FiniteAboveNegOneF64::new(0.0).expect("alpha = 0"),
    );
    let sum = rule.integrate(|s| {
        let t = 1.0 + s / x;
        (t * t - 1.0).powi(n as i32)
    });
    Ok((-x).exp() / x * sum)
}

fn jackson_tail_integral(x: f64, n: u32, l: u32, q: QParam, tol: f64) -> Result<f64> {
    let a = q.value().powi(l as i32 - 1);
    let p = q.oriented().value();
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut small = 0;
    let mut last = 0.0;
    for k in 1..=DEFAULT_MAX_INDEX {
        let t = a * p.powi(-(k as i32));
        if !t.is_finite() {
            break;
        }
        let term = (1.0 - p) * t * small_e_checked(-x * t, q)? * shifted_square_power(t, n, q)?;
        sum += term;
        abs_sum += term.abs();
        last = if abs_sum > 0.0 {
            term.abs() / abs_sum
        } else {
            0.0
        };
        if term.abs() <= tol * abs_sum {
            small += 1;
            if small >= CONSECUTIVE_SMALL_NODES {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::QuadratureTail {
        tail: last,
        tol,
        cutoff: DEFAULT_MAX_INDEX,
    })
}
