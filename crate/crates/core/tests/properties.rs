use num_complex::Complex64;
use proptest::prelude::*;

use suq11::coherent::{su11_coherent, FamilyWeights};
use suq11::fock::{biedenharn_pair, macfarlane_pair, parabose_pair, q_parabose_pair};
use suq11::orbit::{
    constraint_residual, darboux_charges, disk_to_darboux, isospin_classical, OrbitPoint,
};
use suq11::qcalc::{
    jackson_integral, q_brace, q_bracket, q_one_minus_pow, q_one_minus_pow_coeffs, DerivativeKind,
    Polynomial, QLattice, QParam,
};
use suq11::reps::{algebra_residuals, build, casimir, RealizationKind};

fn qparam() -> impl Strategy<Value = QParam> {
    prop_oneof![0.3..0.99_f64, 1.01..2.5_f64].prop_map(|q| QParam::new(q).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_invariant_under_inversion(x in -12.0..12.0_f64, q in qparam()) {
        let a = q_bracket(x, q).unwrap();
        let b = q_bracket(x, q.reciprocal()).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn brace_is_rescaled_bracket(x in -8.0..8.0_f64, q in qparam()) {
        let brace = q_brace(x, q).unwrap();
        let expect = q_bracket(x, q).unwrap() * q.value().powf(x - 1.0);
        prop_assert!((brace - expect).abs() <= 1e-13 * expect.abs() + 1e-300);
    }

    #[test]
    fn q_numbers_approach_x(x in -6.0..6.0_f64, sign in prop::bool::ANY) {
        let q = QParam::new(if sign { 1.0 + 1e-4 } else { 1.0 - 1e-4 }).unwrap();
        prop_assert!((q_bracket(x, q).unwrap() - x).abs() <= 1e-3 * (1.0 + x.abs()));
        prop_assert!((q_brace(x, q).unwrap() - x).abs() <= 1e-3 * (1.0 + x.abs()));
    }

    #[test]
    fn classical_shifted_power(x in -2.0..2.0_f64, n in 0u32..=8) {
        let v = q_one_minus_pow(x, n, QParam::classical()).unwrap();
        let expect = (1.0 - x).powi(n as i32);
        prop_assert!((v - expect).abs() <= 1e-13 * expect.abs().max(1.0));
    }

    #[test]
    fn shifted_power_matches_binomial_expansion(x in -1.5..1.5_f64, n in 0u32..=8, q in qparam()) {
        let coeffs = q_one_minus_pow_coeffs(n, q).unwrap();
        let (mut sum, mut scale) = (0.0, 0.0);
        for (m, c) in coeffs.iter().enumerate() {
            sum += c * x.powi(m as i32);
            scale += (c * x.powi(m as i32)).abs();
        }
        let v = q_one_minus_pow(x, n, q).unwrap();
        prop_assert!((v - sum).abs() <= 1e-13 * scale, "{v} vs {sum}");
    }

    #[test]
    fn symmetric_derivative_is_linear(
        a in prop::collection::vec(-3.0..3.0_f64, 1..10),
        b in prop::collection::vec(-3.0..3.0_f64, 1..10),
        s in -2.0..2.0_f64,
        q in qparam(),
    ) {
        let n = a.len().max(b.len());
        let pad = |v: &[f64]| { let mut w = v.to_vec(); w.resize(n, 0.0); w };
        let (a, b) = (pad(&a), pad(&b));
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
        let d = |c: &[f64]| Polynomial::from_real(c).q_derivative(q, DerivativeKind::Symmetric).unwrap();
        let (da, db, ds) = (d(&a), d(&b), d(&sum));
        for k in 0..ds.coeffs().len() {
            let expect = da.coeffs()[k] + db.coeffs()[k] * s;
            prop_assert!((ds.coeffs()[k] - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn jackson_inverts_symmetric_derivative(
        c in prop::collection::vec(-2.0..2.0_f64, 1..=11),
        upper in 0.2..1.5_f64,
        q in qparam(),
    ) {
        let p = Polynomial::from_real(&c);
        let prim = p.q_primitive(q, DerivativeKind::Symmetric).unwrap();
        let lattice = QLattice::symmetric(q, upper).unwrap();
        let j = jackson_integral(|t| Ok(p.eval(Complex64::new(t, 0.0)).re), &lattice, 1e-16).unwrap();
        let exact = prim.eval(Complex64::new(upper, 0.0)).re;
        let scale: f64 = c.iter().enumerate().map(|(n, x)| x.abs() * upper.powi(n as i32 + 1)).sum();
        prop_assert!((j - exact).abs() <= 1e-12 * scale.max(1e-300), "{j} vs {exact}");
        let back = prim.q_derivative(q, DerivativeKind::Symmetric).unwrap();
        for (x, y) in back.coeffs().iter().zip(p.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-13 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn oscillator_pairs_are_adjoint(q in qparam(), l in 0.0..3.0_f64) {
        let b = biedenharn_pair(16, q).unwrap();
        prop_assert_eq!(&b.raising, &b.lowering.adjoint());
        let m = macfarlane_pair(16, q).unwrap();
        prop_assert_eq!(&m.raising, &m.lowering.adjoint());
        let (p, _) = parabose_pair(16, l).unwrap();
        prop_assert_eq!(&p.raising, &p.lowering.adjoint());
        let pq = q_parabose_pair(16, l, q).unwrap();
        prop_assert_eq!(&pq.raising, &pq.lowering.adjoint());
    }

    #[test]
    fn parity_anticommutes_with_parabose_lowering(l in 0.0..3.0_f64) {
        let (pair, parity) = parabose_pair(20, l).unwrap();
        let m = parity.as_operator();
        let a = m.matmul(&pair.lowering).unwrap();
        let b = pair.lowering.matmul(m).unwrap();
        let block = a.valid_block().min(b.valid_block());
        prop_assert!(a.add(&b).unwrap().max_abs_on_block(block) < 1e-12);
    }

    #[test]
    fn linear_realizations_close(q in qparam(), k0 in 0.5..3.0_f64, idx in 0usize..9) {
        let kinds = [
            RealizationKind::Hp,
            RealizationKind::Dyson,
            RealizationKind::Fb,
            RealizationKind::QHp,
            RealizationKind::Biedenharn,
            RealizationKind::Macfarlane,
            RealizationKind::Anyonic,
            RealizationKind::FbQ,
            RealizationKind::FbQMod,
        ];
        let rep = build(kinds[idx], 24, k0, q, 0.0).unwrap();
        let r = algebra_residuals(&rep).unwrap();
        prop_assert!(r.max_relation() < 1e-10, "{:?} {:?}", kinds[idx], r);
        let cas = casimir(&rep).unwrap();
        prop_assert!(cas.spread < 1e-10);
        // Q₀ spectrum is n + k₀
        for (n, v) in rep.q0.diagonal_real().iter().enumerate() {
            prop_assert!((v - (n as f64 + k0)).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_realizations_close(q in qparam(), l in 0.0..2.5_f64) {
        let rep = build(RealizationKind::Parabose, 32, 0.0, q, l).unwrap();
        let r = algebra_residuals(&rep).unwrap();
        prop_assert!(r.max_relation() < 1e-10, "{r:?}");
        for (n, v) in rep.q0.diagonal_real().iter().enumerate() {
            prop_assert!((v - (n as f64 + l + 0.5) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn su11_state_norm_grows_with_radius(k0 in 0.5..3.0_f64, r1 in 0.0..0.9_f64, dr in 0.001..0.09_f64, th in 0.0..std::f64::consts::TAU) {
        let rep = build(RealizationKind::Hp, 48, k0, QParam::classical(), 0.0).unwrap();
        let a = su11_coherent(&rep, Complex64::from_polar(r1, th), 48).unwrap();
        let b = su11_coherent(&rep, Complex64::from_polar(r1 + dr, th), 48).unwrap();
        prop_assert!(b.norm_sqr() > a.norm_sqr());
    }

    #[test]
    fn su11_weights_match_state(k0 in 0.5..3.0_f64, q in qparam()) {
        let rep = build(RealizationKind::QHp, 12, k0, q, 0.0).unwrap();
        let z = Complex64::new(0.3, 0.2);
        let st = su11_coherent(&rep, z, 12).unwrap();
        let w = FamilyWeights::Su11 { k0, q }.weights(12).unwrap();
        for (n, c) in st.coeffs.iter().enumerate() {
            let expect = w[n] * z.norm_sqr().powi(n as i32);
            prop_assert!(rel(c.norm_sqr(), expect) < 1e-12);
        }
    }

    #[test]
    fn orbit_constraint_holds(r in 0.0..0.95_f64, th in 0.0..std::f64::consts::TAU, k0 in 0.1..4.0_f64) {
        let p = OrbitPoint::new(Complex64::from_polar(r, th), k0).unwrap();
        let k = isospin_classical(&p);
        prop_assert!(constraint_residual(&k, k0).abs() <= 1e-12 * k[2] * k[2]);
        let d = darboux_charges(&disk_to_darboux(&p));
        prop_assert!(constraint_residual(&d, k0).abs() <= 1e-12 * d[2] * d[2]);
    }
}
