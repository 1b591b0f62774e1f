use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::{q_bessel_tilde, small_e_checked, BesselOrder};
use super::states::FamilyWeights;
use crate::error::{Error, Result};
use crate::qcalc::{big_e_product, q_bracket, q_one_minus_pow, QParam};
use crate::reps::Sector;

/// Tolerance used inside density evaluations (series and Jackson sums).
pub const DENSITY_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// `(2k₀ - 1)/π (1 - t)^{2k₀-2}` on the unit disk.
    LiouvilleClassical,
    /// `e^{-t}/π` on the plane.
    GaussianClassical,
    /// `[2k₀ - 1]_q/π (1 - t)^{2k₀-2}_q` (integer k₀ > 1), `t/π` (k₀ = 1).
    QLiouville,
    /// `e_q^{-t}/π`.
    QBargmannSmallE,
    /// `E_q^{-t}/π`.
    QBargmannBigE,
    /// q-Bessel measure of the parabose coherent states.
    ParaboseBessel,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::LiouvilleClassical,
        MeasureKind::GaussianClassical,
        MeasureKind::QLiouville,
        MeasureKind::QBargmannSmallE,
        MeasureKind::QBargmannBigE,
        MeasureKind::ParaboseBessel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::LiouvilleClassical => "liouville_classical",
            MeasureKind::GaussianClassical => "gaussian_classical",
            MeasureKind::QLiouville => "q_liouville",
            MeasureKind::QBargmannSmallE => "q_bargmann_e",
            MeasureKind::QBargmannBigE => "q_bargmann_big_e",
            MeasureKind::ParaboseBessel => "parabose_bessel",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureDomain {
    UnitDisk,
    Plane,
}

impl MeasureDomain {
    /// Upper end of the range of t = |z|².
    pub fn t_max(self) -> f64 {
        match self {
            MeasureDomain::UnitDisk => 1.0,
            MeasureDomain::Plane => f64::INFINITY,
        }
    }
}

/// A measure `g(|z|)` together with its normalization constant.
///
/// Every constant is the one fixed by requiring the n = 0 moment to give
/// `⟨0|I|0⟩ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub k0: f64,
    pub q: QParam,
    pub l: f64,
    pub sector: Sector,
    pub normalization: f64,
    pub domain: MeasureDomain,
    pub bessel_order: BesselOrder,
}

fn covered_q_liouville(k0: f64) -> bool {
    k0 == 1.0 || (k0 > 1.0 && k0.fract() == 0.0)
}

impl MeasureSpec {
    fn base(kind: MeasureKind, normalization: f64, domain: MeasureDomain) -> Self {
        MeasureSpec {
            kind,
            k0: 0.0,
            q: QParam::classical(),
            l: 0.0,
            sector: Sector::All,
            normalization,
            domain,
            bessel_order: BesselOrder::default(),
        }
    }

    pub fn liouville_classical(k0: f64) -> Result<Self> {
        if !(k0 > 0.5) || !k0.is_finite() {
            return Err(Error::Unsupported(format!(
                "classical Liouville measure needs k0 > 1/2, got {k0}"
            )));
        }
        Ok(MeasureSpec {
            k0,
            ..Self::base(
                MeasureKind::LiouvilleClassical,
                (2.0 * k0 - 1.0) / PI,
                MeasureDomain::UnitDisk,
            )
        })
    }

    pub fn gaussian_classical() -> Self {
        Self::base(
            MeasureKind::GaussianClassical,
            1.0 / PI,
            MeasureDomain::Plane,
        )
    }

    pub fn q_liouville(k0: f64, q: QParam) -> Result<Self> {
        if !covered_q_liouville(k0) {
            return Err(Error::Unsupported(format!(
                "q-Liouville measure is given only for k0 = 1 and integer k0 > 1, got {k0}"
            )));
        }
        let norm = if k0 == 1.0 {
            1.0 / PI
        } else {
            q_bracket(2.0 * k0 - 1.0, q)? / PI
        };
        Ok(MeasureSpec {
            k0,
            q,
            ..Self::base(MeasureKind::QLiouville, norm, MeasureDomain::UnitDisk)
        })
    }

    pub fn q_bargmann_small_e(q: QParam) -> Self {
        MeasureSpec {
            q,
            ..Self::base(MeasureKind::QBargmannSmallE, 1.0 / PI, MeasureDomain::Plane)
        }
    }

    pub fn q_bargmann_big_e(q: QParam) -> Self {
        MeasureSpec {
            q,
            ..Self::base(MeasureKind::QBargmannBigE, 1.0 / PI, MeasureDomain::Plane)
        }
    }

    /// `[2]_q / (π^{3/2} ∏_{j<l} [j + 1/2]_{q²}) r^{l-1/2} K̃_{l-1/2}([2]_q r)`
    /// for the even sector and integer l ≥ 1.
    pub fn parabose_bessel(l: f64, q: QParam, order: BesselOrder) -> Result<Self> {
        if !(l >= 1.0 && l.fract() == 0.0) {
            return Err(Error::Unsupported(format!(
                "q-Bessel measure is given only for integer l >= 1, got {l}"
            )));
        }
        let q2 = q.squared();
        let mut prod = 1.0;
        for j in 0..l as u32 {
            prod *= q_bracket(j as f64 + 0.5, q2)?;
        }
        let norm = q_bracket(2.0, q)? / (PI.powf(1.5) * prod);
        Ok(MeasureSpec {
            q,
            l,
            sector: Sector::Even,
            bessel_order: order,
            ..Self::base(MeasureKind::ParaboseBessel, norm, MeasureDomain::Plane)
        })
    }

    /// Coherent-state family whose resolution of unity the measure targets.
    pub fn family(&self) -> FamilyWeights {
        match self.kind {
            MeasureKind::LiouvilleClassical => FamilyWeights::Su11 {
                k0: self.k0,
                q: QParam::classical(),
            },
            MeasureKind::GaussianClassical => FamilyWeights::GlauberSmallE {
                q: QParam::classical(),
            },
            MeasureKind::QLiouville => FamilyWeights::Su11 {
                k0: self.k0,
                q: self.q,
            },
            MeasureKind::QBargmannSmallE => FamilyWeights::GlauberSmallE { q: self.q },
            MeasureKind::QBargmannBigE => FamilyWeights::GlauberBigE { q: self.q },
            MeasureKind::ParaboseBessel => FamilyWeights::Parabose {
                l: self.l,
                sector: self.sector,
                q: self.q,
            },
        }
    }

    /// Density as a function of t = |z|², including the normalization.
    pub fn density_t(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || t > self.domain.t_max() {
            return Err(Error::Domain(format!(
                "t = {t} outside the {:?} measure domain",
                self.domain
            )));
        }
        let shape = match self.kind {
            MeasureKind::LiouvilleClassical => (1.0 - t).powf(2.0 * self.k0 - 2.0),
            MeasureKind::GaussianClassical => (-t).exp(),
            MeasureKind::QLiouville => {
                if self.k0 == 1.0 {
                    t
                } else if covered_q_liouville(self.k0) {
                    q_one_minus_pow(t, (2.0 * self.k0 - 2.0) as u32, self.q)?
                } else {
                    return Err(Error::Unsupported(format!(
                        "q-Liouville measure at k0 = {}",
                        self.k0
                    )));
                }
            }
            MeasureKind::QBargmannSmallE => small_e_checked(-t, self.q)?,
            MeasureKind::QBargmannBigE => big_e_product(-t, self.q)?,
            MeasureKind::ParaboseBessel => {
                if t == 0.0 {
                    return Err(Error::Domain(
                        "q-Bessel measure is evaluated only at t > 0".into(),
                    ));
                }
                let r = t.sqrt();
                let two = q_bracket(2.0, self.q)?;
                let order = self.l - 0.5;
                r.powf(order)
                    * q_bessel_tilde(
                        self.l as u32,
                        two * r,
                        self.q,
                        DENSITY_TOL,
                        self.bessel_order,
                    )?
            }
        };
        Ok(self.normalization * shape)
    }
}

/// Density at radius r = |z|.
pub fn measure_eval(spec: &MeasureSpec, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "radius must be non-negative, got {r}"
        )));
    }
    spec.density_t(r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::q_one_minus_pow_coeffs;

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    #[test]
    fn bargmann_e_at_origin() {
        let m = MeasureSpec::q_bargmann_small_e(qp(0.9));
        assert!((measure_eval(&m, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        let m = MeasureSpec::q_bargmann_big_e(qp(0.9));
        assert!((measure_eval(&m, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn q_liouville_k0_two_expansion() {
        let q = qp(0.8);
        let m = MeasureSpec::q_liouville(2.0, q).unwrap();
        let coeffs = q_one_minus_pow_coeffs(2, q).unwrap();
        assert!((coeffs[1] + q_bracket(2.0, q).unwrap()).abs() < 1e-15);
        for &r in &[0.0, 0.3, 0.9] {
            let t: f64 = r * r;
            let shape = coeffs[0] - coeffs[1].abs() * t + coeffs[2] * t * t;
            let expect = q_bracket(3.0, q).unwrap() / PI * shape;
            assert!((measure_eval(&m, r).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn uncovered_cases() {
        assert!(matches!(
            MeasureSpec::q_liouville(1.5, qp(0.9)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            MeasureSpec::q_liouville(0.5, qp(0.9)),
            Err(Error::Unsupported(_))
        ));
        assert!(MeasureSpec::q_liouville(3.0, qp(0.9)).is_ok());
        assert!(matches!(
            MeasureSpec::parabose_bessel(0.5, qp(0.9), BesselOrder::Classical),
            Err(Error::Unsupported(_))
        ));
        let mut m = MeasureSpec::q_liouville(2.0, qp(0.9)).unwrap();
        m.k0 = 2.5;
        assert!(matches!(m.density_t(0.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn disk_domain_enforced() {
        let m = MeasureSpec::liouville_classical(2.0).unwrap();
        assert!(matches!(measure_eval(&m, 1.2), Err(Error::Domain(_))));
    }

    #[test]
    fn classical_parabose_density_is_exponential() {
        // l = 1: g = (2/π) e^{-2r}
        let m =
            MeasureSpec::parabose_bessel(1.0, QParam::classical(), BesselOrder::Classical).unwrap();
        for &r in &[0.1_f64, 0.5, 2.0] {
            let expect = 2.0 / PI * (-2.0 * r).exp();
            assert!((measure_eval(&m, r).unwrap() - expect).abs() <= 1e-13 * expect);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in MeasureKind::ALL {
            assert_eq!(MeasureKind::from_name(k.name()), Some(k));
        }
    }
}
