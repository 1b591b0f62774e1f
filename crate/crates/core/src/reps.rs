//! Oscillator realizations of su(1,1), su_q(1,1) and su_{q²}(1,1) on a
//! truncated Fock space, with residual and Casimir engines.
//!
//! Every realization is assembled from closed-form matrix elements. The
//! defining relations checked by [`algebra_residuals`] are
//!
//! ```text
//! [Q₀, Q±] = ±Q±,    [Q₊, Q₋] = -[2Q₀]_b,    b ∈ {q, q²}
//! ```
//!
//! and the Casimir is `C = [Q₀]_b [Q₀ - 1]_b - Q₊Q₋` (at q = 1 the classical
//! `K₀(K₀ - 1) - K₊K₋`).

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    biedenharn_pair, combination_residual, diagonal_of_level, macfarlane_pair, q_parabose_pair,
    FockOperator,
};
use crate::qcalc::{q_brace, q_bracket, DerivativeKind, Polynomial, QParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizationKind {
    Hp,
    Dyson,
    Fb,
    QHp,
    Biedenharn,
    Macfarlane,
    Anyonic,
    FbQ,
    FbQMod,
    Quadratic,
    Parabose,
}

impl RealizationKind {
    pub const ALL: [RealizationKind; 11] = [
        RealizationKind::Hp,
        RealizationKind::Dyson,
        RealizationKind::Fb,
        RealizationKind::QHp,
        RealizationKind::Biedenharn,
        RealizationKind::Macfarlane,
        RealizationKind::Anyonic,
        RealizationKind::FbQ,
        RealizationKind::FbQMod,
        RealizationKind::Quadratic,
        RealizationKind::Parabose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RealizationKind::Hp => "hp",
            RealizationKind::Dyson => "dyson",
            RealizationKind::Fb => "fb",
            RealizationKind::QHp => "qhp",
            RealizationKind::Biedenharn => "biedenharn",
            RealizationKind::Macfarlane => "macfarlane",
            RealizationKind::Anyonic => "anyonic",
            RealizationKind::FbQ => "fbq",
            RealizationKind::FbQMod => "fbq_mod",
            RealizationKind::Quadratic => "quadratic",
            RealizationKind::Parabose => "parabose",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Undeformed kinds: q plays no role.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            RealizationKind::Hp | RealizationKind::Dyson | RealizationKind::Fb
        )
    }

    /// Kinds with `Q₊ = Q₋†`.
    pub fn is_unitary(self) -> bool {
        !matches!(
            self,
            RealizationKind::Dyson
                | RealizationKind::Fb
                | RealizationKind::FbQ
                | RealizationKind::FbQMod
        )
    }

    /// Kinds built from squared ladder operators (base q², parameter l).
    pub fn is_quadratic(self) -> bool {
        matches!(self, RealizationKind::Quadratic | RealizationKind::Parabose)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraBase {
    Q,
    Q2,
}

/// Description of the diagonal of `Q₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelOffset {
    /// `n + k₀`
    Linear { k0: f64 },
    /// `(n + l + 1/2) / 2`
    Quadratic { l: f64 },
}

impl LevelOffset {
    pub fn q0(&self, n: usize) -> f64 {
        match *self {
            LevelOffset::Linear { k0 } => n as f64 + k0,
            LevelOffset::Quadratic { l } => (n as f64 + l + 0.5) / 2.0,
        }
    }
}

/// Parity sector of the number basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    All,
    Even,
    Odd,
}

impl Sector {
    pub fn contains(self, n: usize) -> bool {
        match self {
            Sector::All => true,
            Sector::Even => n.is_multiple_of(2),
            Sector::Odd => n % 2 == 1,
        }
    }

    pub fn vacuum(self) -> usize {
        match self {
            Sector::All | Sector::Even => 0,
            Sector::Odd => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub q0: FockOperator,
    pub qplus: FockOperator,
    pub qminus: FockOperator,
    pub kind: RealizationKind,
    /// Lowest weight; for quadratic kinds the even-sector value `(2l + 1)/4`.
    pub k0: f64,
    pub q: QParam,
    pub base: AlgebraBase,
    pub level_offset: LevelOffset,
}

impl Realization {
    pub fn dim(&self) -> usize {
        self.q0.dim()
    }

    /// The deformation parameter of the algebra relations (q or q²).
    pub fn base_q(&self) -> QParam {
        match self.base {
            AlgebraBase::Q => self.q,
            AlgebraBase::Q2 => self.q.squared(),
        }
    }

    pub fn sectors(&self) -> Vec<Sector> {
        if self.kind.is_quadratic() {
            vec![Sector::Even, Sector::Odd]
        } else {
            vec![Sector::All]
        }
    }
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        return Err(Error::Domain(format!(
            "truncation dimension must be at least {min}, got {dim}"
        )));
    }
    Ok(())
}

fn check_k0(k0: f64) -> Result<()> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
    }
    Ok(())
}

fn levels<F>(dim: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<f64>,
{
    (0..dim).map(f).collect()
}

fn sqrt_level(r: f64, n: usize) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "negative radicand {r:e} at level {n}"
        )));
    }
    Ok(r.sqrt())
}

fn linear_q0(dim: usize, k0: f64) -> Result<FockOperator> {
    diagonal_of_level(|n| n as f64 + k0, dim)
}

fn linear(
    kind: RealizationKind,
    q: QParam,
    k0: f64,
    q0: FockOperator,
    qplus: FockOperator,
    qminus: FockOperator,
) -> Realization {
    Realization {
        q0,
        qplus,
        qminus,
        kind,
        k0,
        q,
        base: AlgebraBase::Q,
        level_offset: LevelOffset::Linear { k0 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    Hp,
    Dyson,
    Fb,
}

/// Undeformed su(1,1) realizations.
///
/// FB acts on monomial coefficients: `K₋ = d/dξ`, `K₊ = ξ² d/dξ + 2k₀ξ`,
/// `K₀ = ξ d/dξ + k₀`.
pub fn classical_realization(kind: ClassicalKind, dim: usize, k0: f64) -> Result<Realization> {
    check_dim(dim, 3)?;
    check_k0(k0)?;
    let q0 = linear_q0(dim, k0)?;
    let (plus, minus, rk) = match kind {
        ClassicalKind::Hp => {
            let low = levels(dim, |n| {
                sqrt_level(n as f64 * (n as f64 + 2.0 * k0 - 1.0), n)
            })?;
            let minus = FockOperator::lowering(&low);
            (minus.adjoint(), minus, RealizationKind::Hp)
        }
        ClassicalKind::Dyson => {
            let up: Vec<f64> = (0..dim)
                .map(|n| (2.0 * k0 + n as f64) * (n as f64 + 1.0).sqrt())
                .collect();
            let low: Vec<f64> = (0..dim).map(|n| (n as f64).sqrt()).collect();
            (
                FockOperator::raising(&up),
                FockOperator::lowering(&low),
                RealizationKind::Dyson,
            )
        }
        ClassicalKind::Fb => {
            let up: Vec<f64> = (0..dim).map(|n| n as f64 + 2.0 * k0).collect();
            let low: Vec<f64> = (0..dim).map(|n| n as f64).collect();
            (
                FockOperator::raising(&up),
                FockOperator::lowering(&low),
                RealizationKind::Fb,
            )
        }
    };
    Ok(linear(rk, QParam::classical(), k0, q0, plus, minus))
}

fn qhp_elements(dim: usize, k0: f64, q: QParam) -> Result<Vec<f64>> {
    let mut el = vec![0.0; dim];
    for (n, e) in el.iter_mut().enumerate().skip(1) {
        let r = q_bracket(n as f64, q)? * q_bracket(n as f64 + 2.0 * k0 - 1.0, q)?;
        if !(r >= 0.0) {
            return Err(Error::Internal(format!(
                "negative qHP radicand {r:e} at level {n}"
            )));
        }
        *e = r.sqrt();
    }
    Ok(el)
}

/// The deformed HP form `Q₋|n⟩ = √([n]_q [n + 2k₀ - 1]_q) |n-1⟩`.
pub fn q_realization_from_classical(dim: usize, k0: f64, q: QParam) -> Result<Realization> {
    check_dim(dim, 3)?;
    check_k0(k0)?;
    let minus = FockOperator::lowering(&qhp_elements(dim, k0, q)?);
    Ok(linear(
        RealizationKind::QHp,
        q,
        k0,
        linear_q0(dim, k0)?,
        minus.adjoint(),
        minus,
    ))
}

/// `Q₋ = (a_q)₋ √[N + 2k₀ - 1]_q`, `Q₊ = Q₋†`.
pub fn biedenharn_su11(dim: usize, k0: f64, q: QParam) -> Result<Realization> {
    check_dim(dim, 3)?;
    check_k0(k0)?;
    let pair = biedenharn_pair(dim, q)?;
    // level 0 is multiplied by a vanishing ladder element
    let mut dress = vec![1.0; dim];
    for (n, d) in dress.iter_mut().enumerate().skip(1) {
        *d = sqrt_level(q_bracket(n as f64 + 2.0 * k0 - 1.0, q)?, n)?;
    }
    let minus = pair.lowering.matmul(&FockOperator::diagonal_from(&dress))?;
    Ok(linear(
        RealizationKind::Biedenharn,
        q,
        k0,
        linear_q0(dim, k0)?,
        minus.adjoint(),
        minus,
    ))
}

/// `Q₋ = (b_q)₋ √(q^{-(N-1)} [N + 2k₀ - 1]_q)`, `Q₊ = Q₋†`.
pub fn macfarlane_su11(dim: usize, k0: f64, q: QParam) -> Result<Realization> {
    check_dim(dim, 3)?;
    check_k0(k0)?;
    let pair = macfarlane_pair(dim, q)?;
    let qv = q.value();
    let mut dress = vec![1.0; dim];
    for (n, d) in dress.iter_mut().enumerate().skip(1) {
        let r = qv.powf(-(n as f64 - 1.0)) * q_bracket(n as f64 + 2.0 * k0 - 1.0, q)?;
        *d = sqrt_level(r, n)?;
    }
    let minus = pair.lowering.matmul(&FockOperator::diagonal_from(&dress))?;
    Ok(linear(
        RealizationKind::Macfarlane,
        q,
        k0,
        linear_q0(dim, k0)?,
        minus.adjoint(),
        minus,
    ))
}

/// Reading of the operator under the square root in the anyonic dressing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnyonicInterpretation {
    /// `(A_q)₊(A_q)₋ + 2[k₀ - 1/2]_q`
    Resolved,
    /// `(A_q)₊(A_q)₊ + 2[k₀ - 1/2]_q`, as typeset.
    Literal,
}

fn check_anyonic_k0(k0: f64) -> Result<()> {
    if !(k0 >= 0.5) || !k0.is_finite() {
        return Err(Error::Domain(format!(
            "anyonic realization needs k0 >= 1/2, got {k0}"
        )));
    }
    Ok(())
}

/// `(A_q)₋|n⟩ = √([n + k₀ - 1/2]_q - [k₀ - 1/2]_q) |n-1⟩` and its adjoint.
pub fn anyonic_pair(dim: usize, k0: f64, q: QParam) -> Result<(FockOperator, FockOperator)> {
    check_dim(dim, 2)?;
    check_anyonic_k0(k0)?;
    let shift = q_bracket(k0 - 0.5, q)?;
    let mut el = vec![0.0; dim];
    for (n, e) in el.iter_mut().enumerate().skip(1) {
        *e = sqrt_level(q_bracket(n as f64 + k0 - 0.5, q)? - shift, n)?;
    }
    let minus = FockOperator::lowering(&el);
    Ok((minus.clone(), minus.adjoint()))
}

/// Principal square root of a lower-triangular matrix (column recurrence).
fn lower_triangular_sqrt(t: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let d = t.nrows();
    let mut u = Array2::<Complex64>::zeros((d, d));
    for i in 0..d {
        let tii = t[[i, i]];
        if !(tii.re > 0.0) || tii.im != 0.0 {
            return Err(Error::Domain(format!(
                "square-root operator has diagonal {tii} at level {i}; no principal root"
            )));
        }
        u[[i, i]] = tii.sqrt();
    }
    for gap in 1..d {
        for j in 0..d - gap {
            let i = j + gap;
            let mut acc = t[[i, j]];
            for k in j + 1..i {
                acc -= u[[i, k]] * u[[k, j]];
            }
            u[[i, j]] = acc / (u[[i, i]] + u[[j, j]]);
        }
    }
    Ok(u)
}

/// Anyonic realization with `Q₀ = N + k₀`.
pub fn anyonic_su11(
    dim: usize,
    k0: f64,
    q: QParam,
    interpretation: AnyonicInterpretation,
) -> Result<Realization> {
    check_dim(dim, 3)?;
    let (am, ap) = anyonic_pair(dim, k0, q)?;
    let shift = 2.0 * q_bracket(k0 - 0.5, q)?;
    let id = FockOperator::identity(dim);
    let (minus, plus) = match interpretation {
        AnyonicInterpretation::Resolved => {
            let inner = ap.matmul(&am)?.add(&id.scale(shift))?;
            let root = levels(dim, |n| sqrt_level(inner.get(n, n).re, n))?;
            let minus = am.matmul(&FockOperator::diagonal_from(&root))?;
            (minus.clone(), minus.adjoint())
        }
        AnyonicInterpretation::Literal => {
            let inner = ap.matmul(&ap)?.add(&id.scale(shift))?;
            let s = lower_triangular_sqrt(inner.entries())?;
            // Every factor is lower triangular apart from A₋, so the
            // truncated products agree with the infinite ones except in
            // the last row of Q₋.
            let minus = FockOperator::from_entries(am.entries().dot(&s), dim - 1, 0, 1)?;
            let plus = FockOperator::from_entries(s.dot(ap.entries()), dim, 1, 0)?;
            (minus, plus)
        }
    };
    Ok(linear(
        RealizationKind::Anyonic,
        q,
        k0,
        linear_q0(dim, k0)?,
        plus,
        minus,
    ))
}

/// The two quadratic products of the anyonic `B_q` pair.
///
/// Only the products `(B_q)₋(B_q)₊` and `(B_q)₊(B_q)₋` are fixed by the
/// identification with the `A_q` pair; both are diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AnyonicBPair {
    pub minus_plus: FockOperator,
    pub plus_minus: FockOperator,
    pub q: QParam,
}

impl AnyonicBPair {
    /// Scaled residual of `(B_q)₋(B_q)₊ - q²(B_q)₊(B_q)₋ - 1` on the valid block.
    pub fn macfarlane_residual(&self) -> Result<f64> {
        let id = FockOperator::identity(self.minus_plus.dim());
        let q2 = self.q.value() * self.q.value();
        let block = self
            .minus_plus
            .valid_block()
            .min(self.plus_minus.valid_block());
        combination_residual(
            &[
                (&self.minus_plus, 1.0),
                (&self.plus_minus, -q2),
                (&id, -1.0),
            ],
            block,
        )
    }

    /// Eigenvalue of `(B_q)₊(B_q)₋` on the vacuum.
    pub fn vacuum_eigenvalue(&self) -> f64 {
        self.plus_minus.get(0, 0).re
    }
}

/// `(B_q)₋(B_q)₊ = q^{N + k₀ - 1/2}((A_q)₋(A_q)₊ + [k₀ - 1/2]_q)` and
/// `(B_q)₊(B_q)₋ = q^{N + k₀ - 3/2}((A_q)₊(A_q)₋ + [k₀ - 1/2]_q)`.
pub fn anyonic_b_pair(dim: usize, k0: f64, q: QParam) -> Result<AnyonicBPair> {
    let (am, ap) = anyonic_pair(dim, k0, q)?;
    let shift = q_bracket(k0 - 0.5, q)?;
    let id = FockOperator::identity(dim);
    let qv = q.value();
    let up = diagonal_of_level(|n| qv.powf(n as f64 + k0 - 0.5), dim)?;
    let down = diagonal_of_level(|n| qv.powf(n as f64 + k0 - 1.5), dim)?;
    let minus_plus = up.matmul(&am.matmul(&ap)?.add(&id.scale(shift))?)?;
    let plus_minus = down.matmul(&ap.matmul(&am)?.add(&id.scale(shift))?)?;
    Ok(AnyonicBPair {
        minus_plus,
        plus_minus,
        q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FbqVariant {
    Biedenharn,
    Macfarlane,
}

/// Holomorphic q-FB realization on monomial coefficients.
///
/// Biedenharn variant: `Q₋|n⟩ = [n]_q|n-1⟩`, `Q₊|n⟩ = [n+2k₀]_q|n+1⟩`.
/// Macfarlane variant: `Q₋|n⟩ = {n}_q|n-1⟩`, `Q₊|n⟩ = q^{-n}[n+2k₀]_q|n+1⟩`.
pub fn fb_q_realization(
    dim: usize,
    k0: f64,
    q: QParam,
    variant: FbqVariant,
) -> Result<Realization> {
    check_dim(dim, 3)?;
    check_k0(k0)?;
    let qv = q.value();
    let (low, up, kind) = match variant {
        FbqVariant::Biedenharn => (
            levels(dim, |n| q_bracket(n as f64, q))?,
            levels(dim, |n| q_bracket(n as f64 + 2.0 * k0, q))?,
            RealizationKind::FbQ,
        ),
        FbqVariant::Macfarlane => (
            levels(dim, |n| q_brace(n as f64, q))?,
            levels(dim, |n| {
                Ok(qv.powi(-(n as i32)) * q_bracket(n as f64 + 2.0 * k0, q)?)
            })?,
            RealizationKind::FbQMod,
        ),
    };
    let plus = FockOperator::raising(&up);
    let minus = FockOperator::lowering(&low);
    Ok(linear(kind, q, k0, linear_q0(dim, k0)?, plus, minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ladder {
    Plus,
    Minus,
}

/// Holomorphic q-FB generator applied to a polynomial in ξ.
///
/// `Q₋` is the symmetric q-derivative (Biedenharn) or the base-q²
/// derivative (Macfarlane). `Q₊` is `ξ [ξ d/dξ + 2k₀]_q` or
/// `ξ q^{-(2ξ d/dξ + 2k₀ - 1)} {ξ d/dξ + 2k₀}_q`, evaluated on the Euler
/// operator eigenvalue of each monomial.
pub fn fb_q_holomorphic(
    variant: FbqVariant,
    op: Ladder,
    p: &Polynomial,
    k0: f64,
    q: QParam,
) -> Result<Polynomial> {
    match op {
        Ladder::Minus => {
            let kind = match variant {
                FbqVariant::Biedenharn => DerivativeKind::Symmetric,
                FbqVariant::Macfarlane => DerivativeKind::BaseQ2,
            };
            p.q_derivative(q, kind)
        }
        Ladder::Plus => {
            let mut out = vec![Complex64::new(0.0, 0.0)];
            for (n, &c) in p.coeffs().iter().enumerate() {
                let euler = n as f64;
                let factor = match variant {
                    FbqVariant::Biedenharn => q_bracket(euler + 2.0 * k0, q)?,
                    FbqVariant::Macfarlane => {
                        q.value().powf(-(2.0 * euler + 2.0 * k0 - 1.0))
                            * q_brace(euler + 2.0 * k0, q)?
                    }
                };
                out.push(c * factor);
            }
            Ok(Polynomial::new(out))
        }
    }
}

fn quadratic_from_pair(
    kind: RealizationKind,
    lowering: &FockOperator,
    raising: &FockOperator,
    q: QParam,
    l: f64,
) -> Result<Realization> {
    let dim = lowering.dim();
    let two = q_bracket(2.0, q)?;
    let qplus = raising.pow(2)?.scale(1.0 / two);
    let qminus = lowering.pow(2)?.scale(1.0 / two);
    let offset = LevelOffset::Quadratic { l };
    let q0 = diagonal_of_level(|n| offset.q0(n), dim)?;
    Ok(Realization {
        q0,
        qplus,
        qminus,
        kind,
        k0: (2.0 * l + 1.0) / 4.0,
        q,
        base: AlgebraBase::Q2,
        level_offset: offset,
    })
}

/// `Q± = (a_q)±² / [2]_q`, `Q₀ = (N + 1/2)/2`, an su_{q²}(1,1) realization.
pub fn quadratic_su_q2(dim: usize, q: QParam) -> Result<Realization> {
    check_dim(dim, 5)?;
    let p = biedenharn_pair(dim, q)?;
    quadratic_from_pair(RealizationKind::Quadratic, &p.lowering, &p.raising, q, 0.0)
}

/// `Q± = (A_q)±² / [2]_q` with the q-parabose pair, `Q₀ = (N + l + 1/2)/2`.
pub fn parabose_su_q2(dim: usize, q: QParam, l: f64) -> Result<Realization> {
    check_dim(dim, 5)?;
    let p = q_parabose_pair(dim, l, q)?;
    quadratic_from_pair(RealizationKind::Parabose, &p.lowering, &p.raising, q, l)
}

/// Build any realization kind from a common parameter set.
///
/// `k0` is ignored by the quadratic kinds and `l` by the linear ones; q is
/// ignored by the undeformed kinds.
pub fn build(kind: RealizationKind, dim: usize, k0: f64, q: QParam, l: f64) -> Result<Realization> {
    match kind {
        RealizationKind::Hp => classical_realization(ClassicalKind::Hp, dim, k0),
        RealizationKind::Dyson => classical_realization(ClassicalKind::Dyson, dim, k0),
        RealizationKind::Fb => classical_realization(ClassicalKind::Fb, dim, k0),
        RealizationKind::QHp => q_realization_from_classical(dim, k0, q),
        RealizationKind::Biedenharn => biedenharn_su11(dim, k0, q),
        RealizationKind::Macfarlane => macfarlane_su11(dim, k0, q),
        RealizationKind::Anyonic => anyonic_su11(dim, k0, q, AnyonicInterpretation::Resolved),
        RealizationKind::FbQ => fb_q_realization(dim, k0, q, FbqVariant::Biedenharn),
        RealizationKind::FbQMod => fb_q_realization(dim, k0, q, FbqVariant::Macfarlane),
        RealizationKind::Quadratic => quadratic_su_q2(dim, q),
        RealizationKind::Parabose => parabose_su_q2(dim, q, l),
    }
}

/// Residuals of the defining relations.
///
/// Each residual is the entrywise scaled residual of
/// [`combination_residual`] on the valid block of the products involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub r0plus: f64,
    pub r0minus: f64,
    pub rpm: f64,
    pub casimir_diag: Vec<f64>,
    pub casimir_spread: f64,
    pub valid_block: usize,
}

impl ResidualReport {
    /// Largest of the three relation residuals.
    pub fn max_relation(&self) -> f64 {
        self.r0plus.max(self.r0minus).max(self.rpm)
    }
}

fn bracket_diag(rep: &Realization, shift: f64, scale: f64) -> Result<FockOperator> {
    let bq = rep.base_q();
    let values = levels(rep.dim(), |n| {
        q_bracket(scale * (rep.level_offset.q0(n) + shift), bq)
    })?;
    Ok(FockOperator::diagonal_from(&values))
}

pub fn algebra_residuals(rep: &Realization) -> Result<ResidualReport> {
    let (q0, qp, qm) = (&rep.q0, &rep.qplus, &rep.qminus);
    let q0p = q0.matmul(qp)?;
    let pq0 = qp.matmul(q0)?;
    let q0m = q0.matmul(qm)?;
    let mq0 = qm.matmul(q0)?;
    let pm = qp.matmul(qm)?;
    let mp = qm.matmul(qp)?;
    let two_q0 = bracket_diag(rep, 0.0, 2.0)?;
    let b0p = q0p.valid_block().min(pq0.valid_block());
    let b0m = q0m.valid_block().min(mq0.valid_block());
    let bpm = pm.valid_block().min(mp.valid_block());
    let r0plus = combination_residual(&[(&q0p, 1.0), (&pq0, -1.0), (qp, -1.0)], b0p)?;
    let r0minus = combination_residual(&[(&q0m, 1.0), (&mq0, -1.0), (qm, 1.0)], b0m)?;
    let rpm = combination_residual(&[(&pm, 1.0), (&mp, -1.0), (&two_q0, 1.0)], bpm)?;
    let cas = casimir(rep)?;
    Ok(ResidualReport {
        r0plus,
        r0minus,
        rpm,
        casimir_diag: cas.diagonal(),
        casimir_spread: cas.spread,
        valid_block: b0p.min(b0m).min(bpm),
    })
}

/// Casimir value and spread within one parity sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorCasimir {
    pub sector: Sector,
    /// Value on the sector vacuum, where `Q₊Q₋` vanishes.
    pub value: f64,
    /// Largest scaled deviation of the diagonal from `value`.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CasimirReport {
    pub matrix: FockOperator,
    pub sectors: Vec<SectorCasimir>,
    /// Largest sector spread, including any off-diagonal entries.
    pub spread: f64,
}

impl CasimirReport {
    /// Diagonal of the Casimir on the valid block.
    pub fn diagonal(&self) -> Vec<f64> {
        let b = self.matrix.valid_block();
        self.matrix.diagonal_real().into_iter().take(b).collect()
    }

    pub fn sector(&self, s: Sector) -> Option<&SectorCasimir> {
        self.sectors.iter().find(|c| c.sector == s)
    }
}

/// `C = [Q₀]_b [Q₀ - 1]_b - Q₊Q₋`, reduced per parity sector for the
/// quadratic kinds.
pub fn casimir(rep: &Realization) -> Result<CasimirReport> {
    let bq = rep.base_q();
    let dim = rep.dim();
    let quad = levels(dim, |n| {
        let x = rep.level_offset.q0(n);
        Ok(q_bracket(x, bq)? * q_bracket(x - 1.0, bq)?)
    })?;
    let quad_op = FockOperator::diagonal_from(&quad);
    let pm = rep.qplus.matmul(&rep.qminus)?;
    let matrix = quad_op.sub(&pm)?;
    let block = matrix.valid_block();
    let mut sectors = Vec::new();
    let mut worst = 0.0_f64;
    for s in rep.sectors() {
        let vac = s.vacuum();
        if vac >= block {
            continue;
        }
        let value = matrix.get(vac, vac).re;
        let mut spread = 0.0_f64;
        for n in (0..block).filter(|&n| s.contains(n)) {
            let scale = (quad[n].abs() + pm.get(n, n).norm()).max(1.0);
            spread = spread.max((matrix.get(n, n).re - value).abs() / scale);
        }
        worst = worst.max(spread);
        sectors.push(SectorCasimir {
            sector: s,
            value,
            spread,
        });
    }
    for i in 0..block {
        for j in 0..block {
            if i != j {
                worst = worst.max(matrix.get(i, j).norm() / (pm.get(i, j).norm().max(1.0)));
            }
        }
    }
    Ok(CasimirReport {
        matrix,
        sectors,
        spread: worst,
    })
}

/// Positive diagonal `S` with `S Q± S⁻¹` equal to the target's `Q±`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub diagonal: Vec<f64>,
    pub plus_residual: f64,
    pub minus_residual: f64,
}

impl Similarity {
    pub fn max_residual(&self) -> f64 {
        self.plus_residual.max(self.minus_residual)
    }
}

/// Solve `s_{n+1} / s_n = to₊(n) / from₊(n)` with `s₀ = 1` and verify both
/// ladder operators.
pub fn diagonal_similarity(from: &Realization, to: &Realization) -> Result<Similarity> {
    let dim = from.dim();
    if to.dim() != dim {
        return Err(Error::DimensionMismatch(dim, to.dim()));
    }
    let mut s = vec![1.0; dim];
    for n in 0..dim - 1 {
        let a = from.qplus.get(n + 1, n).re;
        let b = to.qplus.get(n + 1, n).re;
        if a == 0.0 || !(b / a > 0.0) {
            return Err(Error::Domain(format!(
                "no positive similarity at level {n}: {b} / {a}"
            )));
        }
        s[n + 1] = s[n] * b / a;
    }
    let sd = FockOperator::diagonal_from(&s);
    let inv: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let si = FockOperator::diagonal_from(&inv);
    let plus = sd.matmul(&from.qplus)?.matmul(&si)?;
    let minus = sd.matmul(&from.qminus)?.matmul(&si)?;
    Ok(Similarity {
        diagonal: s,
        plus_residual: combination_residual(&[(&plus, 1.0), (&to.qplus, -1.0)], dim)?,
        minus_residual: combination_residual(&[(&minus, 1.0), (&to.qminus, -1.0)], dim)?,
    })
}

/// Entrywise scaled distance between the ladder operators of two realizations.
pub fn ladder_distance(a: &Realization, b: &Realization) -> Result<f64> {
    let dim = a.dim();
    let p = combination_residual(&[(&a.qplus, 1.0), (&b.qplus, -1.0)], dim)?;
    let m = combination_residual(&[(&a.qminus, 1.0), (&b.qminus, -1.0)], dim)?;
    Ok(p.max(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: usize = 24;

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    #[test]
    fn hp_closes_and_casimir_vanishes_at_k0_one() {
        let rep = classical_realization(ClassicalKind::Hp, D, 1.0).unwrap();
        let r = algebra_residuals(&rep).unwrap();
        assert!(r.max_relation() < 1e-12, "{r:?}");
        assert!(r.casimir_diag.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn dyson_vacuum_action() {
        let k0 = 1.5;
        let rep = classical_realization(ClassicalKind::Dyson, D, k0).unwrap();
        assert_eq!(rep.qplus.get(1, 0).re, 2.0 * k0);
        assert!(algebra_residuals(&rep).unwrap().max_relation() < 1e-12);
        assert!(!rep.kind.is_unitary());
    }

    #[test]
    fn fb_is_differentiation_on_monomials() {
        let rep = classical_realization(ClassicalKind::Fb, D, 0.5).unwrap();
        for n in 1..D {
            assert_eq!(rep.qminus.get(n - 1, n).re, n as f64);
        }
        assert!(algebra_residuals(&rep).unwrap().max_relation() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            classical_realization(ClassicalKind::Hp, D, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            classical_realization(ClassicalKind::Hp, 2, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            anyonic_su11(D, 0.3, qp(0.9), AnyonicInterpretation::Resolved),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn qhp_vacuum_and_limit() {
        let q = qp(0.7);
        let k0 = 1.25;
        let rep = q_realization_from_classical(D, k0, q).unwrap();
        let expect = q_bracket(2.0 * k0, q).unwrap().sqrt();
        assert!((rep.qplus.get(1, 0).re - expect).abs() < 1e-15);
        let hp = classical_realization(ClassicalKind::Hp, D, k0).unwrap();
        let at_one = q_realization_from_classical(D, k0, QParam::classical()).unwrap();
        assert_eq!(at_one.qplus, hp.qplus);
        assert_eq!(at_one.qminus, hp.qminus);
    }

    #[test]
    fn equivalence_class() {
        for &qv in &[0.5, 0.9, 1.25] {
            for &k0 in &[0.5, 1.0, 1.5, 2.0] {
                let q = qp(qv);
                let base = q_realization_from_classical(D, k0, q).unwrap();
                for rep in [
                    biedenharn_su11(D, k0, q).unwrap(),
                    macfarlane_su11(D, k0, q).unwrap(),
                    anyonic_su11(D, k0, q, AnyonicInterpretation::Resolved).unwrap(),
                ] {
                    let d = ladder_distance(&rep, &base).unwrap();
                    assert!(d < 1e-13, "{:?} q={qv} k0={k0}: {d:e}", rep.kind);
                }
            }
        }
    }

    #[test]
    fn anyonic_at_half_is_biedenharn() {
        let q = qp(0.8);
        let (am, _) = anyonic_pair(D, 0.5, q).unwrap();
        let b = biedenharn_pair(D, q).unwrap();
        assert!(combination_residual(&[(&am, 1.0), (&b.lowering, -1.0)], D).unwrap() < 1e-15);
    }

    #[test]
    fn anyonic_literal_reading() {
        let q = qp(0.9);
        assert!(matches!(
            anyonic_su11(D, 0.5, q, AnyonicInterpretation::Literal),
            Err(Error::Domain(_))
        ));
        let rep = anyonic_su11(D, 1.5, q, AnyonicInterpretation::Literal).unwrap();
        let r = algebra_residuals(&rep).unwrap();
        assert!(r.rpm > 1e-3, "literal reading unexpectedly closes: {r:?}");
    }

    #[test]
    fn lower_triangular_root_squares_back() {
        let q = qp(0.9);
        let (_, ap) = anyonic_pair(8, 2.0, q).unwrap();
        let inner = ap
            .matmul(&ap)
            .unwrap()
            .add(&FockOperator::identity(8).scale(3.0))
            .unwrap();
        let s = lower_triangular_sqrt(inner.entries()).unwrap();
        let back = s.dot(&s);
        for (a, b) in back.iter().zip(inner.entries().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn anyonic_b_pair_vacuum() {
        for &qv in &[0.7, 0.9] {
            for &k0 in &[0.5, 1.0, 1.5] {
                let q = qp(qv);
                let b = anyonic_b_pair(D, k0, q).unwrap();
                assert!(b.macfarlane_residual().unwrap() < 1e-12);
                let expect = q_brace(k0 - 0.5, q).unwrap();
                assert!((b.vacuum_eigenvalue() - expect).abs() < 1e-12);
            }
        }
        let b = anyonic_b_pair(D, 0.5, qp(0.7)).unwrap();
        assert_eq!(b.vacuum_eigenvalue(), 0.0);
    }

    #[test]
    fn fbq_variants_close_and_are_similar_to_qhp() {
        for &qv in &[0.5, 0.9, 1.25] {
            for &k0 in &[0.5, 1.0, 2.0] {
                let q = qp(qv);
                let target = q_realization_from_classical(D, k0, q).unwrap();
                for v in [FbqVariant::Biedenharn, FbqVariant::Macfarlane] {
                    let rep = fb_q_realization(D, k0, q, v).unwrap();
                    assert!(algebra_residuals(&rep).unwrap().max_relation() < 1e-12);
                    let sim = diagonal_similarity(&rep, &target).unwrap();
                    assert!(sim.max_residual() < 1e-10, "{v:?}: {sim:?}");
                    assert!(sim.diagonal.iter().all(|&s| s > 0.0));
                }
            }
        }
    }

    #[test]
    fn fbq_holomorphic_matches_ket_action() {
        let q = qp(0.8);
        let k0 = 0.75;
        for v in [FbqVariant::Biedenharn, FbqVariant::Macfarlane] {
            let rep = fb_q_realization(D, k0, q, v).unwrap();
            for n in 0..D - 1 {
                let mono = Polynomial::monomial(n);
                let plus = fb_q_holomorphic(v, Ladder::Plus, &mono, k0, q).unwrap();
                let c = plus.coeffs()[n + 1].re;
                assert!((c - rep.qplus.get(n + 1, n).re).abs() <= 1e-13 * c.abs());
                if n > 0 {
                    let minus = fb_q_holomorphic(v, Ladder::Minus, &mono, k0, q).unwrap();
                    let c = minus.coeffs()[n - 1].re;
                    assert!((c - rep.qminus.get(n - 1, n).re).abs() <= 1e-13 * c.abs());
                }
            }
        }
    }

    #[test]
    fn quadratic_closure_and_sector_casimirs() {
        for &qv in &[0.7, 0.9, 1.25] {
            let q = qp(qv);
            let rep = quadratic_su_q2(D, q).unwrap();
            let r = algebra_residuals(&rep).unwrap();
            assert!(r.max_relation() < 1e-12, "{r:?}");
            let c = casimir(&rep).unwrap();
            let q2 = q.squared();
            let even = q_bracket(0.25, q2).unwrap() * q_bracket(-0.75, q2).unwrap();
            assert!((c.sector(Sector::Even).unwrap().value - even).abs() < 1e-12);
            assert!(c.spread < 1e-11);
        }
        let rep = quadratic_su_q2(D, QParam::classical()).unwrap();
        let pm = rep.qplus.matmul(&rep.qminus).unwrap();
        let mp = rep.qminus.matmul(&rep.qplus).unwrap();
        let comm = pm.sub(&mp).unwrap();
        for n in 0..comm.valid_block() {
            assert!((comm.get(n, n).re + (n as f64 + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn parabose_level_oracle() {
        // ([c_{n+1}][c_{n+2}] - [c_n][c_{n-1}]) / [2]² = [n + l + 1/2]_{q²}
        use crate::fock::parabose_level;
        for &l in &[0.5, 1.0, 2.0] {
            for &qv in &[0.7, 0.9] {
                let q = qp(qv);
                let two = q_bracket(2.0, q).unwrap();
                let c = |m: i64| {
                    if m < 0 {
                        0.0
                    } else {
                        q_bracket(parabose_level(m as usize, l), q).unwrap()
                    }
                };
                for n in 0..20_i64 {
                    let lhs = (c(n + 1) * c(n + 2) - c(n) * c(n - 1)) / (two * two);
                    let rhs = q_bracket(n as f64 + l + 0.5, q.squared()).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
                        "l={l} q={qv} n={n}"
                    );
                }
                let rep = parabose_su_q2(D, q, l).unwrap();
                assert!(algebra_residuals(&rep).unwrap().max_relation() < 1e-10);
            }
        }
    }

    #[test]
    fn parabose_casimir_per_sector() {
        let q = qp(0.9);
        let q2 = q.squared();
        for &l in &[0.5, 1.0, 2.0] {
            let rep = parabose_su_q2(D, q, l).unwrap();
            let c = casimir(&rep).unwrap();
            let even =
                q_bracket(0.25 + l / 2.0, q2).unwrap() * q_bracket(-0.75 + l / 2.0, q2).unwrap();
            let odd =
                q_bracket(0.25 - l / 2.0, q2).unwrap() * q_bracket(-0.75 - l / 2.0, q2).unwrap();
            assert!((c.sector(Sector::Even).unwrap().value - even).abs() < 1e-10);
            assert!((c.sector(Sector::Odd).unwrap().value - odd).abs() < 1e-10);
            assert!(c.spread < 1e-10);
        }
        let quad = quadratic_su_q2(D, q).unwrap();
        let pb = parabose_su_q2(D, q, 0.0).unwrap();
        assert!(ladder_distance(&quad, &pb).unwrap() < 1e-15);
    }

    #[test]
    fn casimir_vacuum_value_for_linear_kinds() {
        let q = qp(0.9);
        for &k0 in &[0.5, 1.0, 1.5, 2.0] {
            let expect = q_bracket(k0, q).unwrap() * q_bracket(k0 - 1.0, q).unwrap();
            for kind in [
                RealizationKind::QHp,
                RealizationKind::FbQ,
                RealizationKind::FbQMod,
                RealizationKind::Anyonic,
            ] {
                let rep = build(kind, D, k0, q, 0.0).unwrap();
                let c = casimir(&rep).unwrap();
                assert!((c.sectors[0].value - expect).abs() < 1e-12);
                assert!(c.spread < 1e-11, "{kind:?}: {}", c.spread);
            }
        }
    }

    #[test]
    fn corrupted_entry_is_detected() {
        let rep = q_realization_from_classical(D, 1.0, qp(0.9)).unwrap();
        let mut e = rep.qplus.entries().clone();
        e[[4, 3]] += Complex64::new(1e-3, 0.0);
        let bad = Realization {
            qplus: FockOperator::from_entries(e, D, 1, 0).unwrap(),
            ..rep
        };
        assert!(algebra_residuals(&bad).unwrap().rpm >= 1e-4);
    }

    #[test]
    fn q0_spectrum() {
        let rep = biedenharn_su11(D, 1.5, qp(0.9)).unwrap();
        assert!(rep.q0.is_diagonal());
        for (n, v) in rep.q0.diagonal_real().iter().enumerate() {
            assert_eq!(*v, n as f64 + 1.5);
        }
        let pb = parabose_su_q2(D, qp(0.9), 1.0).unwrap();
        for (n, v) in pb.q0.diagonal_real().iter().enumerate() {
            assert_eq!(*v, (n as f64 + 1.5) / 2.0);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in RealizationKind::ALL {
            assert_eq!(RealizationKind::from_name(k.name()), Some(k));
        }
    }
}
