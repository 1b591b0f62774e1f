//! Classical su(1,1) charges on the coadjoint orbit `SU(1,1)/U(1)`.
//!
//! Two coordinate systems are provided: the projective disk coordinate ξ,
//! |ξ| < 1, and the Darboux coordinate α with `{α, ᾱ} = i`. Both put the
//! charges on the hyperboloid sheet `K₁² + K₂² - K₃² = -k₀²`.
//!
//! # Bracket conventions
//!
//! With α = x + iy the bracket `{f, g} = i(∂_α f ∂_ᾱ g - ∂_ᾱ f ∂_α g)`
//! becomes `-½(f_x g_y - f_y g_x)`. The charges close as
//! `{K_a, K_b} = -ε_ab^c K_c` where `ε_{123} = +1` and the upper index is
//! raised with `η = diag(1, 1, -1)`, so that `ε_12^3 = -1`. In particular
//! `{K₁, K₂} = +K₃`, `{K₂, K₃} = -K₁`, `{K₃, K₁} = -K₂`.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric used to raise and lower su(1,1) indices.
pub const METRIC: [f64; 3] = [1.0, 1.0, -1.0];

/// Charges `(K₁, K₂, K₃)`.
pub type Charges = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    xi: Complex64,
    k0: f64,
}

impl OrbitPoint {
    pub fn new(xi: Complex64, k0: f64) -> Result<Self> {
        check_k0(k0)?;
        if !(xi.norm() < 1.0) {
            return Err(Error::Domain(format!(
                "orbit point needs |xi| < 1, got |xi| = {}",
                xi.norm()
            )));
        }
        Ok(OrbitPoint { xi, k0 })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarbouxPoint {
    pub alpha: Complex64,
    pub k0: f64,
}

fn check_k0(k0: f64) -> Result<()> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "k0 must be positive, got {k0}"
        )));
    }
    Ok(())
}

/// Charges in the disk coordinate.
pub fn isospin_classical(p: &OrbitPoint) -> Charges {
    let xi = p.xi;
    let d = 1.0 - xi.norm_sqr();
    [
        2.0 * p.k0 * xi.re / d,
        -2.0 * p.k0 * xi.im / d,
        p.k0 * (1.0 + xi.norm_sqr()) / d,
    ]
}

/// Charges in the Darboux coordinate.
pub fn darboux_charges(p: &DarbouxPoint) -> Charges {
    let a = p.alpha;
    let s = (2.0 * p.k0 + a.norm_sqr()).sqrt();
    [a.re * s, -a.im * s, a.norm_sqr() + p.k0]
}

/// `K₁² + K₂² - K₃² + k₀²`, zero on the orbit.
pub fn constraint_residual(k: &Charges, k0: f64) -> f64 {
    k[0] * k[0] + k[1] * k[1] - k[2] * k[2] + k0 * k0
}

/// `|α|² = 2k₀|ξ|² / (1 - |ξ|²)` with equal phases.
pub fn disk_to_darboux(p: &OrbitPoint) -> DarbouxPoint {
    let r2 = p.xi.norm_sqr();
    let alpha = if r2 == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        p.xi * (2.0 * p.k0 / (1.0 - r2)).sqrt()
    };
    DarbouxPoint { alpha, k0: p.k0 }
}

pub fn darboux_to_disk(p: &DarbouxPoint) -> Result<OrbitPoint> {
    let xi = p.alpha / (2.0 * p.k0 + p.alpha.norm_sqr()).sqrt();
    OrbitPoint::new(xi, p.k0)
}

/// Gradients `(∂_x K_a, ∂_y K_a)` at α = x + iy.
pub fn darboux_gradients(p: &DarbouxPoint) -> [[f64; 2]; 3] {
    let (x, y) = (p.alpha.re, p.alpha.im);
    let s = (2.0 * p.k0 + x * x + y * y).sqrt();
    [
        [s + x * x / s, x * y / s],
        [-x * y / s, -s - y * y / s],
        [2.0 * x, 2.0 * y],
    ]
}

/// `{f, g}` for real functions given by their (x, y) gradients.
pub fn bracket(df: [f64; 2], dg: [f64; 2]) -> f64 {
    -0.5 * (df[0] * dg[1] - df[1] * dg[0])
}

/// `ε_ab^c`: totally antisymmetric with `ε_{123} = 1`, last index raised by [`METRIC`].
pub fn structure_constant(a: usize, b: usize, c: usize) -> f64 {
    let eps = match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    };
    METRIC[c] * eps
}

/// All nine `{K_a, K_b}`.
pub fn bracket_table(p: &DarbouxPoint) -> [[f64; 3]; 3] {
    let g = darboux_gradients(p);
    let mut t = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            t[a][b] = bracket(g[a], g[b]);
        }
    }
    t
}

/// `max_{a,b} |{K_a, K_b} + ε_ab^c K_c|` at one point.
pub fn bracket_residual(p: &DarbouxPoint) -> f64 {
    let k = darboux_charges(p);
    let t = bracket_table(p);
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let expect: f64 = -(0..3)
                .map(|c| structure_constant(a, b, c) * k[c])
                .sum::<f64>();
            worst = worst.max((t[a][b] - expect).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub k0: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_bracket_residual: f64,
    pub max_constraint_residual: f64,
}

/// Largest disk radius drawn by [`poisson_residuals`].
pub const SAMPLE_RADIUS: f64 = 0.9;

/// Random disk points, reproducible from `seed`, uniform in area on
/// `|ξ| < SAMPLE_RADIUS`.
pub fn sample_disk(k0: f64, count: usize, seed: u64) -> Result<Vec<OrbitPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = SAMPLE_RADIUS * rng.random_range(0.0..1.0_f64).sqrt();
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            OrbitPoint::new(Complex64::from_polar(r, th), k0)
        })
        .collect()
}

/// Bracket and constraint residuals over `samples` random disk points.
pub fn poisson_residuals(k0: f64, samples: usize, seed: u64) -> Result<PoissonReport> {
    check_k0(k0)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut report = PoissonReport {
        k0,
        samples,
        seed,
        max_bracket_residual: 0.0,
        max_constraint_residual: 0.0,
    };
    for p in sample_disk(k0, samples, seed)? {
        let d = disk_to_darboux(&p);
        report.max_bracket_residual = report.max_bracket_residual.max(bracket_residual(&d));
        let c = constraint_residual(&isospin_classical(&p), k0)
            .abs()
            .max(constraint_residual(&darboux_charges(&d), k0).abs());
        report.max_constraint_residual = report.max_constraint_residual.max(c);
    }
    Ok(report)
}
