//! Truncated Fock-space operators.
//!
//! Operators are dense D×D matrices on the number basis |0⟩..|D-1⟩. Each
//! operator carries the size of its leading block on which algebraic
//! identities are free of truncation artifacts, along with its band widths
//! (how far it can raise or lower a level). A product's valid block is the
//! smaller operand block minus the total raising shift of both operands.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcalc::{q_brace, q_bracket, QParam};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    entries: Array2<Complex64>,
    valid_block: usize,
    raise: usize,
    lower: usize,
}

fn check_dim(dim: usize, min: usize) -> Result<()> {
    if dim < min {
        return Err(Error::Domain(format!(
            "truncation dimension must be at least {min}, got {dim}"
        )));
    }
    Ok(())
}

impl FockOperator {
    pub fn from_entries(
        entries: Array2<Complex64>,
        valid_block: usize,
        raise: usize,
        lower: usize,
    ) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        if valid_block > r {
            return Err(Error::InvalidParameter(format!(
                "valid block {valid_block} exceeds dimension {r}"
            )));
        }
        Ok(FockOperator {
            entries,
            valid_block,
            raise,
            lower,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        FockOperator {
            entries: Array2::zeros((dim, dim)),
            valid_block: dim,
            raise: 0,
            lower: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        FockOperator {
            entries: Array2::eye(dim),
            valid_block: dim,
            raise: 0,
            lower: 0,
        }
    }

    /// Lowering operator with `⟨n-1|A|n⟩ = elements[n]` (index 0 ignored).
    pub fn lowering(elements: &[f64]) -> Self {
        let dim = elements.len();
        let mut m = Array2::zeros((dim, dim));
        for n in 1..dim {
            m[[n - 1, n]] = Complex64::new(elements[n], 0.0);
        }
        FockOperator {
            entries: m,
            valid_block: dim,
            raise: 0,
            lower: 1,
        }
    }

    /// Raising operator with `⟨n+1|A|n⟩ = elements[n]` (last index ignored).
    pub fn raising(elements: &[f64]) -> Self {
        let dim = elements.len();
        let mut m = Array2::zeros((dim, dim));
        for n in 0..dim.saturating_sub(1) {
            m[[n + 1, n]] = Complex64::new(elements[n], 0.0);
        }
        FockOperator {
            entries: m,
            valid_block: dim,
            raise: 1,
            lower: 0,
        }
    }

    pub fn diagonal_from(values: &[f64]) -> Self {
        let dim = values.len();
        let mut m = Array2::zeros((dim, dim));
        for (n, &v) in values.iter().enumerate() {
            m[[n, n]] = Complex64::new(v, 0.0);
        }
        FockOperator {
            entries: m,
            valid_block: dim,
            raise: 0,
            lower: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn valid_block(&self) -> usize {
        self.valid_block
    }

    pub fn with_valid_block(mut self, v: usize) -> Self {
        self.valid_block = v.min(self.dim());
        self
    }

    pub fn raise(&self) -> usize {
        self.raise
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.entries.diag().to_vec()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        self.entries.diag().iter().map(|c| c.re).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .indexed_iter()
            .all(|((i, j), v)| i == j || *v == ZERO)
    }

    fn same_dim(&self, other: &FockOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &FockOperator) -> Result<FockOperator> {
        self.same_dim(other)?;
        let shift = self.raise + other.raise;
        Ok(FockOperator {
            entries: self.entries.dot(&other.entries),
            valid_block: self
                .valid_block
                .min(other.valid_block)
                .saturating_sub(shift),
            raise: shift,
            lower: self.lower + other.lower,
        })
    }

    fn combine(&self, other: &FockOperator, entries: Array2<Complex64>) -> FockOperator {
        FockOperator {
            entries,
            valid_block: self.valid_block.min(other.valid_block),
            raise: self.raise.max(other.raise),
            lower: self.lower.max(other.lower),
        }
    }

    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        self.same_dim(other)?;
        Ok(self.combine(other, &self.entries + &other.entries))
    }

    pub fn sub(&self, other: &FockOperator) -> Result<FockOperator> {
        self.same_dim(other)?;
        Ok(self.combine(other, &self.entries - &other.entries))
    }

    pub fn scale(&self, c: f64) -> FockOperator {
        FockOperator {
            entries: self.entries.mapv(|v| v * c),
            ..self.clone()
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            entries: self.entries.t().mapv(|v| v.conj()),
            valid_block: self.valid_block,
            raise: self.lower,
            lower: self.raise,
        }
    }

    pub fn pow(&self, k: u32) -> Result<FockOperator> {
        if k == 0 {
            return Ok(FockOperator::identity(self.dim()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), v.len()));
        }
        let x = ndarray::Array1::from(v.to_vec());
        Ok(self.entries.dot(&x).to_vec())
    }

    /// Max-entry norm of the leading `block × block` submatrix.
    pub fn max_abs_on_block(&self, block: usize) -> f64 {
        let b = block.min(self.dim());
        let mut m = 0.0_f64;
        for i in 0..b {
            for j in 0..b {
                m = m.max(self.entries[[i, j]].norm());
            }
        }
        m
    }

    /// Max-entry norm on the operator's own valid block.
    pub fn max_abs_valid(&self) -> f64 {
        self.max_abs_on_block(self.valid_block)
    }

    pub fn max_abs_diff_on_block(&self, other: &FockOperator, block: usize) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_on_block(block))
    }
}

/// Entrywise scaled residual of `Σ c_k T_k` on the leading block.
///
/// Each entry is divided by `max(1, Σ |c_k T_k|)` at that entry, so levels
/// where the terms are large are checked to relative precision and small
/// levels to absolute precision.
pub fn combination_residual(terms: &[(&FockOperator, f64)], block: usize) -> Result<f64> {
    let Some((first, _)) = terms.first() else {
        return Ok(0.0);
    };
    let dim = first.dim();
    for (t, _) in terms {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch(dim, t.dim()));
        }
    }
    let b = block.min(dim);
    let mut worst = 0.0_f64;
    for i in 0..b {
        for j in 0..b {
            let mut sum = ZERO;
            let mut mag = 0.0;
            for (t, c) in terms {
                let v = t.entries[[i, j]] * *c;
                sum += v;
                mag += v.norm();
            }
            worst = worst.max(sum.norm() / mag.max(1.0));
        }
    }
    Ok(worst)
}

/// `AB - BA`.
pub fn commutator(a: &FockOperator, b: &FockOperator) -> Result<FockOperator> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `AB - λ BA`.
pub fn q_commutator(a: &FockOperator, b: &FockOperator, lambda: f64) -> Result<FockOperator> {
    a.matmul(b)?.sub(&b.matmul(a)?.scale(lambda))
}

/// Diagonal operator with entries `g(n)`, n = 0..dim-1.
pub fn diagonal_of_level<G>(g: G, dim: usize) -> Result<FockOperator>
where
    G: Fn(usize) -> f64,
{
    let mut values = Vec::with_capacity(dim);
    for n in 0..dim {
        let v = g(n);
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "level function is not finite at level {n}: {v}"
            )));
        }
        values.push(v);
    }
    Ok(FockOperator::diagonal_from(&values))
}

/// Parity `M = (-1)^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityOperator {
    op: FockOperator,
}

impl ParityOperator {
    pub fn new(dim: usize) -> Self {
        let values: Vec<f64> = (0..dim)
            .map(|n| if n.is_multiple_of(2) { 1.0 } else { -1.0 })
            .collect();
        ParityOperator {
            op: FockOperator::diagonal_from(&values),
        }
    }

    pub fn as_operator(&self) -> &FockOperator {
        &self.op
    }
}

/// A lowering/raising pair with `raising = lowering†`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorPair {
    pub lowering: FockOperator,
    pub raising: FockOperator,
}

impl OscillatorPair {
    /// Pair with `⟨n-1|A₋|n⟩ = √(radicand(n))`.
    fn from_radicands<R>(dim: usize, radicand: R) -> Result<Self>
    where
        R: Fn(usize) -> Result<f64>,
    {
        let mut el = vec![0.0; dim];
        for (n, e) in el.iter_mut().enumerate().skip(1) {
            let r = radicand(n)?;
            if !(r >= 0.0) {
                return Err(Error::Domain(format!(
                    "negative ladder radicand {r} at level {n}"
                )));
            }
            *e = r.sqrt();
        }
        let lowering = FockOperator::lowering(&el);
        let raising = lowering.adjoint();
        Ok(OscillatorPair { lowering, raising })
    }
}

/// Ordinary `a₋`, `a₊`, and `N = a₊a₋`.
pub fn ladder_ops(dim: usize) -> Result<(FockOperator, FockOperator, FockOperator)> {
    check_dim(dim, 2)?;
    let pair = OscillatorPair::from_radicands(dim, |n| Ok(n as f64))?;
    let number = diagonal_of_level(|n| n as f64, dim)?;
    Ok((pair.lowering, pair.raising, number))
}

/// Biedenharn oscillator: `(a_q)₋|n⟩ = √[n]_q |n-1⟩`.
pub fn biedenharn_pair(dim: usize, q: QParam) -> Result<OscillatorPair> {
    check_dim(dim, 2)?;
    OscillatorPair::from_radicands(dim, |n| q_bracket(n as f64, q))
}

/// Macfarlane oscillator: `(b_q)₋|n⟩ = √{n}_q |n-1⟩`.
pub fn macfarlane_pair(dim: usize, q: QParam) -> Result<OscillatorPair> {
    check_dim(dim, 2)?;
    OscillatorPair::from_radicands(dim, |n| q_brace(n as f64, q))
}

/// `c_n = n + l (1 - (-1)^n)`.
pub fn parabose_level(n: usize, l: f64) -> f64 {
    if n.is_multiple_of(2) {
        n as f64
    } else {
        n as f64 + 2.0 * l
    }
}

fn check_parabose_l(l: f64) -> Result<()> {
    if !(l > -0.5) || !l.is_finite() {
        return Err(Error::Domain(format!(
            "parabose parameter must satisfy l > -1/2, got {l}"
        )));
    }
    Ok(())
}

/// Parabose pair with `[A₋, A₊] = 1 + 2lM`.
pub fn parabose_pair(dim: usize, l: f64) -> Result<(OscillatorPair, ParityOperator)> {
    check_dim(dim, 2)?;
    check_parabose_l(l)?;
    let pair = OscillatorPair::from_radicands(dim, |n| Ok(parabose_level(n, l)))?;
    Ok((pair, ParityOperator::new(dim)))
}

/// q-deformed parabose pair: `(A_q)₋|n⟩ = √[c_n]_q |n-1⟩`.
pub fn q_parabose_pair(dim: usize, l: f64, q: QParam) -> Result<OscillatorPair> {
    check_dim(dim, 2)?;
    check_parabose_l(l)?;
    OscillatorPair::from_radicands(dim, |n| q_bracket(parabose_level(n, l), q))
}
