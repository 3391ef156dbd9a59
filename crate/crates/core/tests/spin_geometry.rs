use num_complex::Complex;
use proptest::prelude::*;

use superkit::algebra_core::EndoW;
use superkit::sampling;
use superkit::scalar::{q, qf, C64, Q};
use superkit::spin_geometry::*;

fn close(a: &Momentum<f64>, b: &Momentum<f64>, tol: f64) -> bool {
    a.p.iter().zip(&b.p).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

#[test]
fn orbit_classes() {
    let c = |p: [i64; 4]| classify_orbit(&Momentum::<Q>::from_ints(p), 0.0);
    assert_eq!(c([2, 1, 0, 0]), OrbitClass::MassivePlus);
    assert_eq!(c([-2, 1, 0, 0]), OrbitClass::MassiveMinus);
    assert_eq!(c([1, 1, 0, 0]), OrbitClass::NullPlus);
    assert_eq!(c([-1, 0, 0, 1]), OrbitClass::NullMinus);
    assert_eq!(c([0, 0, 0, 0]), OrbitClass::Zero);
    assert_eq!(c([1, 2, 0, 0]), OrbitClass::ImaginaryMass);
    let near = Momentum::new(1.0, 1.0 - 1e-12, 0.0, 0.0);
    assert_eq!(classify_orbit(&near, 1e-9), OrbitClass::NullPlus);
}

#[test]
fn pairing_determinant_is_norm() {
    let p = Momentum::new(qf(5, 3), qf(4, 3), q(0), q(0));
    assert_eq!(gamma_pair(&p).det(), Complex::new(q(1), q(0)));
    let rest = gamma_pair(&Momentum::<Q>::from_ints([1, 0, 0, 0]));
    assert_eq!(rest, superkit::algebra_core::exact_identity_pairing());
}

#[test]
fn symplectic_ledger() {
    let e = SymplecticForm::ledger();
    assert!(e.is_antisymmetric());
    assert_eq!(e.contraction(), [[1, 0], [0, 1]]);
    assert_eq!(e.lower(1, 2), 1);
    assert_eq!(e.upper(1, 2), 1);
    assert_eq!(SymplecticForm::matrix_inverse_upper().contraction(), [[-1, 0], [0, -1]]);
}

#[test]
fn rationals_parse() {
    assert_eq!(parse_rational("3/4").unwrap(), qf(3, 4));
    assert_eq!(parse_rational("-2").unwrap(), q(-2));
    assert_eq!(parse_rational("0.25").unwrap(), qf(1, 4));
    assert!(parse_rational("x").is_err());
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn momentum_json_roundtrip() {
    let p = Momentum::new(qf(5, 3), q(-4), qf(1, 7), q(0));
    assert_eq!(Momentum::from_json(&p.to_json()).unwrap(), p);
    assert!(Momentum::from_json(&serde_json::json!([1, 2])).is_err());
}

#[test]
fn rest_boost_rejects_bad_input() {
    assert!(matches!(rest_boost(&Momentum::new(2.0, 0.0, 0.0, 0.0), 1.0, 1e-9), Err(GeometryError::OffOrbit { .. })));
    assert!(matches!(rest_boost(&Momentum::new(-1.0, 0.0, 0.0, 0.0), 1.0, 1e-9), Err(GeometryError::NonPositiveEnergy(_))));
    assert!(SpinElement::new([[C64::new(2.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]).is_err());
}

#[test]
fn c1_is_an_involution() {
    let z = [C64::new(1.0, 2.0), C64::new(-0.5, 0.25), C64::new(3.0, -1.0), C64::new(0.0, 1.5)];
    let back = conj_c1(conj_c1(z));
    for (a, b) in back.iter().zip(&z) {
        assert!((a - b).norm() < 1e-15);
    }
}

proptest! {
    #[test]
    fn determinant_is_norm_exact(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        let p = sampling::momentum(&mut r, 7);
        prop_assert_eq!(gamma_pair(&p).det(), Complex::new(p.norm2(), q(0)));
    }

    #[test]
    fn lorentz_action_preserves_norm(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        let h = sampling::spin_element(&mut r);
        let p = sampling::momentum(&mut r, 5).to_f64();
        let hp = h.act_on_momentum(&p);
        let scale = p.p.iter().map(|x| x * x).sum::<f64>().max(1.0) * hp.p.iter().map(|x| x * x).sum::<f64>().max(1.0);
        prop_assert!((hp.norm2() - p.norm2()).abs() <= 1e-9 * scale);
        let back = h.inverse().act_on_momentum(&hp);
        prop_assert!(close(&back, &p, 1e-7));
    }

    #[test]
    fn rest_boost_reaches_momentum(seed in 0u64..100_000, m in 0.5f64..3.0) {
        let mut r = sampling::rng(seed);
        let p = sampling::on_shell(&mut r, m);
        let h = rest_boost(&p, m, 1e-9).unwrap();
        prop_assert!(close(&h.act_on_momentum(&Momentum::rest(m)), &p, 1e-9));
        let herm = mat2_max_diff(&h.a, &mat2_dagger(&h.a));
        prop_assert!(herm <= 1e-9 * (1.0 + p.p[0]));
    }

    #[test]
    fn spin_action_is_homomorphism(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        let g = sampling::spin_element(&mut r);
        let h = sampling::spin_element(&mut r);
        let lhs = spin_action_op(&g.mul(&h));
        let rhs = spin_action_op(&g).compose(&spin_action_op(&h));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * (1.0 + lhs.max_abs()));
        let id = spin_action_op(&g).compose(&spin_action_op(&g.inverse()));
        prop_assert!(id.max_abs_diff(&EndoW::identity()) <= 1e-9 * (1.0 + lhs.max_abs()));
    }
}
