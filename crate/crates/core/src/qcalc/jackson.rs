use serde::{Deserialize, Serialize};

use super::QParam;
use crate::error::{Error, Result};

/// Number of consecutive negligible nodes that ends a lattice sweep.
pub const CONSECUTIVE_SMALL_NODES: usize = 5;

/// Default cap on the lattice index in each direction.
pub const DEFAULT_MAX_INDEX: usize = 100_000;

const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeBase {
    /// Points `c q^{2k+1}`, weights `(q⁻¹ - q) x_k`; inverts the symmetric q-derivative.
    Symmetric,
    /// Points `c q^{2k}`, weights `(1 - q²) x_k`; inverts the base-q² derivative.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeExtent {
    /// `[0, upper]`, indices k ≥ 0.
    OneSided { upper: f64 },
    /// `[0, ∞)`, indices k ∈ ℤ around the anchor point.
    Bilateral { anchor: f64 },
}

/// Geometric q-lattice used for Jackson integration.
///
/// The lattice is always laid out with the member of {q, 1/q} below one, so
/// points decrease toward zero as the index grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QLattice {
    q: QParam,
    base: LatticeBase,
    extent: LatticeExtent,
    max_index: usize,
}

impl QLattice {
    pub fn new(q: QParam, base: LatticeBase, extent: LatticeExtent) -> Result<Self> {
        if q.is_classical() {
            return Err(Error::Domain(format!(
                "Jackson lattice degenerates at q = {}; use ordinary quadrature",
                q.value()
            )));
        }
        let scale = match extent {
            LatticeExtent::OneSided { upper } => upper,
            LatticeExtent::Bilateral { anchor } => anchor,
        };
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lattice scale must be positive, got {scale}"
            )));
        }
        Ok(QLattice {
            q: q.oriented(),
            base,
            extent,
            max_index: DEFAULT_MAX_INDEX,
        })
    }

    pub fn symmetric(q: QParam, upper: f64) -> Result<Self> {
        Self::new(q, LatticeBase::Symmetric, LatticeExtent::OneSided { upper })
    }

    pub fn standard(q: QParam, upper: f64) -> Result<Self> {
        Self::new(q, LatticeBase::Standard, LatticeExtent::OneSided { upper })
    }

    pub fn bilateral(q: QParam, base: LatticeBase, anchor: f64) -> Result<Self> {
        Self::new(q, base, LatticeExtent::Bilateral { anchor })
    }

    pub fn with_max_index(mut self, max_index: usize) -> Self {
        self.max_index = max_index;
        self
    }

    /// The lattice parameter (≤ 1).
    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn base(&self) -> LatticeBase {
        self.base
    }

    pub fn extent(&self) -> LatticeExtent {
        self.extent
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn is_bilateral(&self) -> bool {
        matches!(self.extent, LatticeExtent::Bilateral { .. })
    }

    /// Point and weight of node `k`.
    pub fn node(&self, k: i64) -> (f64, f64) {
        let q = self.q.value();
        let lnq = q.ln();
        let scale = match self.extent {
            LatticeExtent::OneSided { upper } => upper,
            LatticeExtent::Bilateral { anchor } => anchor,
        };
        match self.base {
            LatticeBase::Symmetric => {
                let x = scale * ((2 * k + 1) as f64 * lnq).exp();
                (x, (1.0 / q - q) * x)
            }
            LatticeBase::Standard => {
                let x = scale * ((2 * k) as f64 * lnq).exp();
                (x, (1.0 - q * q) * x)
            }
        }
    }

    /// Nodes `k = 0..count` (the inner, one-sided part).
    pub fn nodes(&self, count: usize) -> Vec<(f64, f64)> {
        (0..count as i64).map(|k| self.node(k)).collect()
    }
}

/// Value of a Jackson integral together with the lattice range that was used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacksonEstimate {
    pub value: f64,
    /// Largest inner index summed (toward t = 0).
    pub inner_index: usize,
    /// Largest outer index summed (toward t = ∞); zero for one-sided lattices.
    pub outer_index: usize,
    /// Last node contribution relative to the running absolute sum.
    pub tail: f64,
}

struct Sweep {
    sum: f64,
    abs_sum: f64,
}

impl Sweep {
    fn run<F>(
        &mut self,
        f: &mut F,
        lattice: &QLattice,
        tol: f64,
        indices: impl Iterator<Item = i64>,
    ) -> Result<(usize, f64)>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut small = 0;
        let mut count = 0;
        let mut last = 0.0;
        for k in indices {
            let (x, w) = lattice.node(k);
            if !(x.is_finite() && w.is_finite()) || x == 0.0 {
                return Err(Error::QuadratureTail {
                    tail: last,
                    tol,
                    cutoff: count,
                });
            }
            let term = w * f(x)?;
            if !term.is_finite() {
                return Err(Error::Range(format!(
                    "non-finite Jackson node contribution at t = {x:e}"
                )));
            }
            self.sum += term;
            self.abs_sum += term.abs();
            count += 1;
            last = if self.abs_sum > 0.0 {
                term.abs() / self.abs_sum
            } else {
                0.0
            };
            if term.abs() <= tol * self.abs_sum {
                small += 1;
            } else {
                small = 0;
            }
            if small >= CONSECUTIVE_SMALL_NODES && count >= MIN_NODES {
                return Ok((count, last));
            }
            if count >= lattice.max_index {
                break;
            }
        }
        Err(Error::QuadratureTail {
            tail: last,
            tol,
            cutoff: count,
        })
    }
}

/// Jackson integral of `f` over the lattice.
///
/// Each direction is summed until [`CONSECUTIVE_SMALL_NODES`] consecutive
/// node contributions fall below `tol` times the running absolute sum;
/// reaching the index cap first is a [`Error::QuadratureTail`] error.
pub fn jackson_integral_detailed<F>(
    mut f: F,
    lattice: &QLattice,
    tol: f64,
) -> Result<JacksonEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let mut sweep = Sweep {
        sum: 0.0,
        abs_sum: 0.0,
    };
    let (inner_index, inner_tail) = sweep.run(&mut f, lattice, tol, 0..)?;
    let (outer_index, outer_tail) = if lattice.is_bilateral() {
        sweep.run(&mut f, lattice, tol, (1..).map(|k: i64| -k))?
    } else {
        (0, 0.0)
    };
    Ok(JacksonEstimate {
        value: sweep.sum,
        inner_index,
        outer_index,
        tail: inner_tail.max(outer_tail),
    })
}

pub fn jackson_integral<F>(f: F, lattice: &QLattice, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    jackson_integral_detailed(f, lattice, tol).map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{
        big_e_product, q_brace, q_bracket, q_derivative, DerivativeKind, Polynomial,
    };
    use num_complex::Complex64;

    const TOL: f64 = 1e-17;

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    #[test]
    fn constant_integrates_to_length() {
        // geometric sum of the weights: (q⁻¹ - q) q / (1 - q²) = 1
        for &q in &[0.3, 0.9, 1.4] {
            for lat in [
                QLattice::symmetric(qp(q), 1.0).unwrap(),
                QLattice::standard(qp(q), 1.0).unwrap(),
            ] {
                let v = jackson_integral(|_| Ok(1.0), &lat, TOL).unwrap();
                assert!((v - 1.0).abs() < 1e-14, "q = {q}: {v}");
            }
        }
    }

    #[test]
    fn square_integrates_to_inverse_q_number() {
        let q = qp(0.8);
        let sym = QLattice::symmetric(q, 1.0).unwrap();
        let v = jackson_integral(|t| Ok(t * t), &sym, TOL).unwrap();
        assert!((v - 1.0 / q_bracket(3.0, q).unwrap()).abs() < 1e-14);
        let std = QLattice::standard(q, 1.0).unwrap();
        let v = jackson_integral(|t| Ok(t * t), &std, TOL).unwrap();
        assert!((v - 1.0 / q_brace(3.0, q).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn right_inverse_of_symmetric_derivative_on_monomials() {
        let q = qp(0.75);
        let a = 0.9;
        for n in 0..=6 {
            let primitive = |x: Complex64| {
                let lat = QLattice::symmetric(q, x.re).unwrap();
                Complex64::new(jackson_integral(|t| Ok(t.powi(n)), &lat, TOL).unwrap(), 0.0)
            };
            let d = q_derivative(
                primitive,
                Complex64::new(a, 0.0),
                q,
                DerivativeKind::Symmetric,
            )
            .unwrap();
            let f = a.powi(n);
            assert!((d.re - f).abs() <= 1e-12 * f, "n = {n}: {} vs {f}", d.re);
        }
    }

    #[test]
    fn exact_on_polynomials_up_to_degree_ten() {
        let q = qp(0.6);
        let coeffs = [
            1.0, -2.0, 0.5, 3.0, -1.5, 0.25, 2.0, -0.75, 1.25, -0.5, 0.125,
        ];
        let p = Polynomial::from_real(&coeffs);
        for kind in [
            (LatticeBase::Symmetric, DerivativeKind::Symmetric),
            (LatticeBase::Standard, DerivativeKind::BaseQ2),
        ] {
            let prim = p.q_primitive(q, kind.1).unwrap();
            for &x in &[0.3, 1.0, 1.7] {
                let lat = QLattice::new(q, kind.0, LatticeExtent::OneSided { upper: x }).unwrap();
                let v =
                    jackson_integral(|t| Ok(p.eval(Complex64::new(t, 0.0)).re), &lat, TOL).unwrap();
                let expect = prim.eval(Complex64::new(x, 0.0)).re;
                assert!(
                    (v - expect).abs() <= 1e-13 * expect.abs().max(1.0),
                    "{kind:?} x = {x}"
                );
            }
        }
    }

    #[test]
    fn reciprocal_q_gives_same_lattice() {
        let a = QLattice::symmetric(qp(0.8), 1.0).unwrap();
        let b = QLattice::symmetric(qp(1.25), 1.0).unwrap();
        let va = jackson_integral(|t| Ok(t.powi(3) + 1.0), &a, TOL).unwrap();
        let vb = jackson_integral(|t| Ok(t.powi(3) + 1.0), &b, TOL).unwrap();
        assert!((va - vb).abs() < 1e-14);
    }

    #[test]
    fn bilateral_zeroth_moment_of_big_e() {
        // ∫_0^∞ D(-E(-t)) = E(0) - E(∞) = 1 on any base-q² lattice
        let q = qp(0.9);
        for &anchor in &[1.0, 0.37, 5.0] {
            let lat = QLattice::bilateral(q, LatticeBase::Standard, anchor).unwrap();
            let v = jackson_integral(|t| big_e_product(-t, q), &lat, 1e-16).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "anchor {anchor}: {v}");
        }
    }

    #[test]
    fn non_decaying_tail_is_reported() {
        let lat = QLattice::bilateral(qp(0.9), LatticeBase::Standard, 1.0)
            .unwrap()
            .with_max_index(2000);
        let r = jackson_integral(|t| Ok(1.0 / (1.0 + t)), &lat, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureTail { .. })));
    }

    #[test]
    fn classical_q_rejected() {
        assert!(QLattice::symmetric(QParam::classical(), 1.0).is_err());
    }
}
