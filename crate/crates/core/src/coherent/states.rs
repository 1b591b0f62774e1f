use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::{q_brace, q_bracket, QParam};
use crate::reps::{Realization, RealizationKind, Sector};

/// Tail size above which a truncated state carries a warning.
pub const TRUNCATION_WARNING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Su11,
    GlauberSmallE,
    GlauberBigE,
    Parabose,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    /// z, or ω for the parabose family.
    pub z: Complex64,
    pub k0: Option<f64>,
    pub l: Option<f64>,
    pub sector: Option<Sector>,
    pub q: QParam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentState {
    /// Component on |n⟩ in generating-function form (vacuum component 1).
    pub coeffs: Vec<Complex64>,
    pub family: Family,
    pub params: StateParams,
    pub normalized: bool,
    /// `|coeffs[D-1]| / max |coeffs|`.
    pub truncation_indicator: f64,
    pub warning: Option<String>,
}

impl CoherentState {
    fn assemble(coeffs: Vec<Complex64>, family: Family, params: StateParams, last: usize) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let tail = coeffs.get(last).map(|c| c.norm()).unwrap_or(0.0);
        let indicator = if max > 0.0 { tail / max } else { 0.0 };
        let warning = (indicator > TRUNCATION_WARNING)
            .then(|| format!("truncation indicator {indicator:e} exceeds {TRUNCATION_WARNING:e}"));
        CoherentState {
            coeffs,
            family,
            params,
            normalized: false,
            truncation_indicator: indicator,
            warning,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Unit-norm copy.
    pub fn normalize(&self) -> CoherentState {
        let n = self.norm_sqr().sqrt();
        let mut out = self.clone();
        if n > 0.0 {
            out.coeffs.iter_mut().for_each(|c| *c /= n);
        }
        out.normalized = true;
        out
    }
}

/// `|coeff_n|² / |z|^{2n}` for each family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyWeights {
    /// `∏_{m=1}^{n} [m + 2k₀ - 1]_q / [m]_q`
    Su11 { k0: f64, q: QParam },
    /// `1 / [n]_q!`
    GlauberSmallE { q: QParam },
    /// `1 / {n}_q!`
    GlauberBigE { q: QParam },
    /// `1 / d_n!` with `d_p = [p]_{q²} [p + l - k/2]_{q²}`
    Parabose { l: f64, sector: Sector, q: QParam },
}

impl FamilyWeights {
    pub fn family(&self) -> Family {
        match self {
            FamilyWeights::Su11 { .. } => Family::Su11,
            FamilyWeights::GlauberSmallE { .. } => Family::GlauberSmallE,
            FamilyWeights::GlauberBigE { .. } => Family::GlauberBigE,
            FamilyWeights::Parabose { .. } => Family::Parabose,
        }
    }

    /// The ratio `w_n / w_{n-1}` for n ≥ 1.
    pub fn ratio(&self, n: usize) -> Result<f64> {
        let x = n as f64;
        let r = match *self {
            FamilyWeights::Su11 { k0, q } => q_bracket(x + 2.0 * k0 - 1.0, q)? / q_bracket(x, q)?,
            FamilyWeights::GlauberSmallE { q } => 1.0 / q_bracket(x, q)?,
            FamilyWeights::GlauberBigE { q } => 1.0 / q_brace(x, q)?,
            FamilyWeights::Parabose { l, sector, q } => 1.0 / parabose_d(n, l, sector, q)?,
        };
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "non-positive coherent-state weight ratio {r} at level {n}"
            )));
        }
        Ok(r)
    }

    /// `w_0 .. w_{count-1}`.
    pub fn weights(&self, count: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        let mut w = 1.0;
        for n in 0..count {
            if n > 0 {
                w *= self.ratio(n)?;
            }
            out.push(w);
        }
        Ok(out)
    }

    pub fn weight(&self, n: usize) -> Result<f64> {
        Ok(self.weights(n + 1)?[n])
    }
}

fn k_sign(sector: Sector) -> Result<f64> {
    match sector {
        Sector::Even => Ok(1.0),
        Sector::Odd => Ok(-1.0),
        Sector::All => Err(Error::InvalidParameter(
            "parabose states need an even or odd sector".into(),
        )),
    }
}

/// `d_p = [p]_{q²} [p + l - k/2]_{q²}`, k = +1 (even) or -1 (odd).
pub fn parabose_d(p: usize, l: f64, sector: Sector, q: QParam) -> Result<f64> {
    let k = k_sign(sector)?;
    let q2 = q.squared();
    q_bracket(p as f64, q2).and_then(|a| Ok(a * q_bracket(p as f64 + l - k / 2.0, q2)?))
}

/// `d_0! .. d_{count-1}!`.
pub fn parabose_d_factorials(count: usize, l: f64, sector: Sector, q: QParam) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut f = 1.0;
    for p in 0..count {
        if p > 0 {
            let d = parabose_d(p, l, sector, q)?;
            if !(d > 0.0) {
                return Err(Error::Domain(format!(
                    "d_p = {d} is not positive at p = {p}"
                )));
            }
            f *= d;
        }
        out.push(f);
    }
    Ok(out)
}

fn from_weights(weights: &FamilyWeights, z: Complex64, count: usize) -> Result<Vec<Complex64>> {
    let w = weights.weights(count)?;
    let mut zn = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(count);
    for wn in w {
        out.push(zn * wn.sqrt());
        zn *= z;
    }
    Ok(out)
}

/// `e_q^{z Q₊}|0⟩` for a linear unitary realization:
/// `coeffs[n] = zⁿ √(∏_{m=1}^{n} [m + 2k₀ - 1]_q / [m]_q)`.
pub fn su11_coherent(rep: &Realization, z: Complex64, dim: usize) -> Result<CoherentState> {
    if rep.kind.is_quadratic() || !rep.kind.is_unitary() {
        return Err(Error::Unsupported(format!(
            "su(1,1) coherent states need a linear unitary realization, got {}",
            rep.kind.name()
        )));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "|z| must be below 1, got {}",
            z.norm()
        )));
    }
    let q = if rep.kind == RealizationKind::Hp {
        QParam::classical()
    } else {
        rep.q
    };
    let weights = FamilyWeights::Su11 { k0: rep.k0, q };
    let coeffs = from_weights(&weights, z, dim)?;
    let params = StateParams {
        z,
        k0: Some(rep.k0),
        l: None,
        sector: None,
        q,
    };
    Ok(CoherentState::assemble(
        coeffs,
        Family::Su11,
        params,
        dim.saturating_sub(1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlauberKind {
    /// `zⁿ / √[n]_q!`
    SmallE,
    /// `zⁿ / √{n}_q!`
    BigE,
}

pub fn glauber_q(z: Complex64, q: QParam, dim: usize, kind: GlauberKind) -> Result<CoherentState> {
    let (weights, family) = match kind {
        GlauberKind::SmallE => (FamilyWeights::GlauberSmallE { q }, Family::GlauberSmallE),
        GlauberKind::BigE => (FamilyWeights::GlauberBigE { q }, Family::GlauberBigE),
    };
    let coeffs = from_weights(&weights, z, dim)?;
    let params = StateParams {
        z,
        k0: None,
        l: None,
        sector: None,
        q,
    };
    Ok(CoherentState::assemble(
        coeffs,
        family,
        params,
        dim.saturating_sub(1),
    ))
}

/// `Σ_p ω^p / √(d_p!) |k, p⟩` with `|+, p⟩ = |2p⟩` and `|-, p⟩ = |2p+1⟩`.
pub fn parabose_coherent(
    omega: Complex64,
    sector: Sector,
    l: f64,
    q: QParam,
    dim: usize,
) -> Result<CoherentState> {
    if !(l > -0.5) {
        return Err(Error::Domain(format!(
            "parabose parameter must satisfy l > -1/2, got {l}"
        )));
    }
    let offset = match sector {
        Sector::Even => 0,
        Sector::Odd => 1,
        Sector::All => {
            return Err(Error::InvalidParameter(
                "parabose states need an even or odd sector".into(),
            ))
        }
    };
    let count = dim.saturating_sub(offset).div_ceil(2);
    let fact = parabose_d_factorials(count, l, sector, q)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
    let mut wp = Complex64::new(1.0, 0.0);
    let mut last = 0;
    for (p, f) in fact.iter().enumerate() {
        last = 2 * p + offset;
        coeffs[last] = wp / f.sqrt();
        wp *= omega;
    }
    let params = StateParams {
        z: omega,
        k0: None,
        l: Some(l),
        sector: Some(sector),
        q,
    };
    Ok(CoherentState::assemble(
        coeffs,
        Family::Parabose,
        params,
        last,
    ))
}
