//! Numerical q-calculus and the oscillator realizations of the q-deformed
//! su(1,1) algebra, with machine checks of their algebraic identities and
//! of the resolution of unity for the associated coherent states.
//!
//! Module map:
//!
//! * [`qcalc`]: q-numbers, q-factorials, q-exponentials, q-derivatives and
//!   Jackson integration.
//! * [`fock`]: truncated Fock-space ladder operators and q-oscillators.
//! * [`reps`]: su(1,1) / su_q(1,1) / su_{q²}(1,1) realizations, residual and
//!   Casimir engines.
//! * [`coherent`]: coherent states, measures and resolution-of-unity checks.
//! * [`orbit`]: classical coadjoint-orbit charges and Lie-Poisson checks.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod error;
pub mod fock;
pub mod orbit;
pub mod qcalc;
pub mod reps;

pub use error::{Error, Result};
pub use num_complex::Complex64;
