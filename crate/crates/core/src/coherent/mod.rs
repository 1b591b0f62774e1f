//! Coherent states, their measures and numerical resolution of unity.
//!
//! After the exact angular integration, `⟨n|I|n⟩ = π w_n ∫ g(t) tⁿ dt`
//! with t = |z|² and `w_n = |coeff_n|² / |z|^{2n}`; off-diagonal elements
//! vanish identically. Unity is therefore a statement about radial moments,
//! and [`radial_moment`] and [`target_moment`] expose both sides.

mod bessel;
mod measure;
mod states;
mod unity;

pub use bessel::{
    q_bessel_tilde, shifted_square_power, small_e_checked, BesselOrder, E_SERIES_PRECISION,
};
pub use measure::{measure_eval, MeasureDomain, MeasureKind, MeasureSpec, DENSITY_TOL};
pub use states::{
    glauber_q, parabose_coherent, parabose_d, parabose_d_factorials, su11_coherent, CoherentState,
    Family, FamilyWeights, GlauberKind, StateParams, TRUNCATION_WARNING,
};
pub use unity::{
    angular_factor, default_candidates, radial_moment, select_lattice_convention, target_moment,
    unity_element, verify_unity, Candidate, CandidateOutcome, RadialRule, Selection,
    SelectionReport, UnityCheck,
};
