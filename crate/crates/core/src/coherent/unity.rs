use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussLaguerre, GaussLegendre};
use serde::{Deserialize, Serialize};

use super::measure::{MeasureDomain, MeasureKind, MeasureSpec};
use super::states::FamilyWeights;
use crate::error::{Error, Result};
use crate::qcalc::{jackson_integral, LatticeBase, LatticeExtent, QLattice};

/// Radial quadrature over t = |z|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialRule {
    Jackson(QLattice),
    /// Gauss-Legendre on `[0, upper]`.
    GaussLegendre {
        upper: f64,
        degree: usize,
    },
    /// Gauss-Laguerre after `t = s / rate`.
    GaussLaguerre {
        rate: f64,
        degree: usize,
    },
    /// Gauss-Laguerre after `t = (s / rate)²`.
    GaussLaguerreSqrt {
        rate: f64,
        degree: usize,
    },
}

impl fmt::Display for RadialRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialRule::Jackson(lat) => {
                let base = match lat.base() {
                    LatticeBase::Symmetric => "symmetric",
                    LatticeBase::Standard => "standard",
                };
                match lat.extent() {
                    LatticeExtent::OneSided { upper } => write!(f, "jackson {base} [0, {upper}]"),
                    LatticeExtent::Bilateral { anchor } => {
                        write!(f, "jackson {base} bilateral anchor {anchor}")
                    }
                }
            }
            RadialRule::GaussLegendre { upper, degree } => {
                write!(f, "gauss-legendre {degree} on [0, {upper}]")
            }
            RadialRule::GaussLaguerre { rate, degree } => {
                write!(f, "gauss-laguerre {degree} rate {rate}")
            }
            RadialRule::GaussLaguerreSqrt { rate, degree } => {
                write!(f, "gauss-laguerre {degree} in sqrt(t) rate {rate}")
            }
        }
    }
}

fn degree(d: usize) -> Result<NonZeroUsize> {
    NonZeroUsize::new(d)
        .ok_or_else(|| Error::InvalidParameter("quadrature degree must be positive".into()))
}

fn laguerre(d: usize) -> Result<GaussLaguerre> {
    Ok(GaussLaguerre::new(
        degree(d)?,
        FiniteAboveNegOneF64::new(0.0).expect("alpha = 0"),
    ))
}

impl RadialRule {
    /// `∫ f(t) dt` over the rule's range. Node contributions are summed in a
    /// fixed order.
    pub fn integrate<F>(&self, mut f: F, tol: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        match *self {
            RadialRule::Jackson(lat) => jackson_integral(f, &lat, tol),
            RadialRule::GaussLegendre { upper, degree: d } => {
                let rule = GaussLegendre::new(degree(d)?);
                let half = upper / 2.0;
                let mut sum = 0.0;
                for (x, w) in rule.iter() {
                    sum += w * f(half * (x + 1.0))?;
                }
                Ok(half * sum)
            }
            RadialRule::GaussLaguerre { rate, degree: d } => {
                let mut sum = 0.0;
                for (s, w) in laguerre(d)?.iter() {
                    sum += w * s.exp() * f(s / rate)?;
                }
                Ok(sum / rate)
            }
            RadialRule::GaussLaguerreSqrt { rate, degree: d } => {
                let mut sum = 0.0;
                for (s, w) in laguerre(d)?.iter() {
                    let r = s / rate;
                    sum += w * s.exp() * f(r * r)? * 2.0 * r / rate;
                }
                Ok(sum)
            }
        }
    }
}

/// `∫ g(t) tⁿ dt`.
pub fn radial_moment(spec: &MeasureSpec, n: usize, rule: &RadialRule, tol: f64) -> Result<f64> {
    rule.integrate(|t| Ok(spec.density_t(t)? * t.powi(n as i32)), tol)
}

/// The moment that makes `⟨n|I|n⟩ = 1`: `1 / (π w_n)`.
pub fn target_moment(weights: &FamilyWeights, n: usize) -> Result<f64> {
    Ok(1.0 / (PI * weights.weight(n)?))
}

/// `∫₀^{2π} e^{i(m-n)θ} dθ`, exactly.
pub fn angular_factor(m: usize, n: usize) -> f64 {
    if m == n {
        2.0 * PI
    } else {
        0.0
    }
}

/// `⟨m|I|n⟩` with `d²z = ½ dθ dt`.
///
/// The angular integral is taken in closed form; the radial integral is
/// only evaluated when it is not multiplied by zero.
pub fn unity_element(
    spec: &MeasureSpec,
    weights: &FamilyWeights,
    m: usize,
    n: usize,
    rule: &RadialRule,
    tol: f64,
) -> Result<f64> {
    let ang = angular_factor(m, n);
    if ang == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * ang * weights.weight(n)? * radial_moment(spec, n, rule, tol)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnityCheck {
    /// `|⟨n|I|n⟩ - 1|` for n = 0..=n_max.
    pub residuals: Vec<f64>,
    pub moments: Vec<f64>,
    pub targets: Vec<f64>,
}

impl UnityCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn verify_unity(
    weights: &FamilyWeights,
    spec: &MeasureSpec,
    rule: &RadialRule,
    n_max: usize,
    tol: f64,
) -> Result<UnityCheck> {
    let w = weights.weights(n_max + 1)?;
    let mut check = UnityCheck {
        residuals: Vec::new(),
        moments: Vec::new(),
        targets: Vec::new(),
    };
    for (n, wn) in w.iter().enumerate() {
        let moment = radial_moment(spec, n, rule, tol)?;
        let target = 1.0 / (PI * wn);
        check.residuals.push((moment / target - 1.0).abs());
        check.moments.push(moment);
        check.targets.push(target);
    }
    Ok(check)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub rule: RadialRule,
}

/// Candidate lattice conventions for a measure.
///
/// Disk measures: symmetric and standard lattices on `[0, 1]`, and the
/// standard lattice extended bilaterally over `[0, ∞)`. Plane measures:
/// symmetric and standard bilateral lattices anchored at 1, and the standard
/// lattice shifted by half a step (anchor q). Measures in the classical
/// regime get a single ordinary Gauss rule.
pub fn default_candidates(spec: &MeasureSpec) -> Result<Vec<Candidate>> {
    let ordinary = |rule| {
        vec![Candidate {
            label: "ordinary".into(),
            rule,
        }]
    };
    if spec.q.is_classical() {
        return Ok(match spec.kind {
            MeasureKind::LiouvilleClassical | MeasureKind::QLiouville => {
                ordinary(RadialRule::GaussLegendre {
                    upper: 1.0,
                    degree: 48,
                })
            }
            MeasureKind::GaussianClassical
            | MeasureKind::QBargmannSmallE
            | MeasureKind::QBargmannBigE => ordinary(RadialRule::GaussLaguerre {
                rate: 1.0,
                degree: 32,
            }),
            MeasureKind::ParaboseBessel => ordinary(RadialRule::GaussLaguerreSqrt {
                rate: 2.0,
                degree: 32,
            }),
        });
    }
    let q = spec.q;
    let lat = |base, extent| QLattice::new(q, base, extent).map(RadialRule::Jackson);
    let sym = LatticeBase::Symmetric;
    let std = LatticeBase::Standard;
    let cands = match spec.domain {
        MeasureDomain::UnitDisk => vec![
            (
                "symmetric",
                lat(sym, LatticeExtent::OneSided { upper: 1.0 })?,
            ),
            (
                "standard",
                lat(std, LatticeExtent::OneSided { upper: 1.0 })?,
            ),
            (
                "bilateral",
                lat(std, LatticeExtent::Bilateral { anchor: 1.0 })?,
            ),
        ],
        MeasureDomain::Plane => vec![
            (
                "symmetric",
                lat(sym, LatticeExtent::Bilateral { anchor: 1.0 })?,
            ),
            (
                "standard",
                lat(std, LatticeExtent::Bilateral { anchor: 1.0 })?,
            ),
            (
                "bilateral",
                lat(
                    std,
                    LatticeExtent::Bilateral {
                        anchor: q.oriented().value(),
                    },
                )?,
            ),
        ],
    };
    Ok(cands
        .into_iter()
        .map(|(label, rule)| Candidate {
            label: label.into(),
            rule,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub label: String,
    pub rule: String,
    pub residuals: Vec<f64>,
    pub max_residual: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub measure: MeasureKind,
    pub threshold: f64,
    pub candidates: Vec<CandidateOutcome>,
    pub selected: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub candidate: Candidate,
    pub check: UnityCheck,
    pub report: SelectionReport,
}

/// Run [`verify_unity`] under every candidate and pick the first one whose
/// residuals are all below `threshold`.
pub fn select_lattice_convention(
    spec: &MeasureSpec,
    weights: &FamilyWeights,
    candidates: &[Candidate],
    n_max: usize,
    threshold: f64,
    tol: f64,
) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(
            "no candidate lattices given".into(),
        ));
    }
    let mut report = SelectionReport {
        measure: spec.kind,
        threshold,
        candidates: Vec::new(),
        selected: None,
    };
    let mut chosen = None;
    for cand in candidates {
        let outcome = match verify_unity(weights, spec, &cand.rule, n_max, tol) {
            Ok(check) => {
                let max = check.max_residual();
                let passed = check.residuals.iter().all(|r| *r < threshold);
                if passed && chosen.is_none() {
                    chosen = Some((cand.clone(), check.clone()));
                    report.selected = Some(cand.label.clone());
                }
                CandidateOutcome {
                    label: cand.label.clone(),
                    rule: cand.rule.to_string(),
                    residuals: check.residuals,
                    max_residual: Some(max),
                    error: None,
                    passed,
                }
            }
            Err(e) => CandidateOutcome {
                label: cand.label.clone(),
                rule: cand.rule.to_string(),
                residuals: Vec::new(),
                max_residual: None,
                error: Some(e.to_string()),
                passed: false,
            },
        };
        report.candidates.push(outcome);
    }
    match chosen {
        Some((candidate, check)) => Ok(Selection {
            candidate,
            check,
            report,
        }),
        None => Err(Error::SelectionFailed(Box::new(report))),
    }
}
