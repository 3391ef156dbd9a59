use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;

use superkit::algebra_core::{build_d, build_d2, build_dbar2, Monomial, Multivector, PairingMatrix};
use superkit::linalg::{rank, Mat};
use superkit::sampling;
use superkit::scalar::{creal, q, qf, Q};
use superkit::spin_geometry::{Momentum, SymplecticForm};
use superkit::symbols::*;

fn rest_pairing(m: f64) -> PairingMatrix<f64> {
    PairingMatrix::scalar(creal(m))
}

#[test]
fn dirac_kernel_at_rest_and_off_shell() {
    assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([1, 0, 0, 0]), &q(1), 0.0).unwrap(), 2);
    assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([5, 3, 0, 0]), &q(4), 0.0).unwrap(), 2);
    assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([5, 3, 0, 0]), &q(3), 0.0).unwrap(), 0);
    // only ‖p‖² enters, so the backward shell has the same kernel
    assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([-5, 3, 0, 0]), &q(4), 0.0).unwrap(), 2);
    assert!(matches!(dirac_symbol(&Momentum::<Q>::zero(), &q(0)), Err(SymbolError::NonPositiveMass)));
}

#[test]
fn i2_symbol_is_norm() {
    let p = Momentum::new(q(3), qf(1, 2), q(1), q(-2));
    let out = zeta_i2(&p).apply(&Multivector::basis(Monomial::new(&[], &[1, 2])));
    assert_eq!(out, Multivector::scalar(Complex::new(p.norm2(), q(0))));
}

#[test]
fn normalization() {
    assert_eq!(d2_normalization(), qf(1, 4));
}

#[test]
fn multiplicity_values() {
    assert_eq!(multiplicity(3, 1, 2), 1);
    assert_eq!(multiplicity(1, 1, 2), 1);
    assert_eq!(multiplicity(2, 1, 2), 0);
    assert_eq!(multiplicity(5, 1, 2), 0);
    assert_eq!(multiplicity(0, 4, 4), 1);
}

#[test]
fn divergence_symbol_is_surjective_on_orbit() {
    let p = Momentum::<Q>::from_ints([5, 3, 0, 0]);
    for n in 1..=4u32 {
        for np in 1..=4u32 {
            let d = divergence_symbol(n, np, &p).unwrap();
            let r = rank(&d, 0.0);
            assert_eq!(r, (n * np) as usize);
            // the kernel is the top component Sym^{n+n'}
            assert_eq!(((n + 1) * (np + 1)) as usize - r, (n + np + 1) as usize);
        }
    }
    assert!(matches!(divergence_symbol(0, 2, &p), Err(SymbolError::DegenerateOrder(0, 2))));
}

#[test]
fn superspin0_at_rest() {
    let rep = superspin0_constraints(&Momentum::from_ints([1, 0, 0, 0]), Some(&q(1)));
    assert!(rep.factor_matches());
    let (_, bos, fer) = rep.dims_at_mass.clone().unwrap();
    assert_eq!((bos, fer), (4, 4));
    assert_eq!(rep.fermion_matrix[0][1], Complex::one());
    assert_eq!(rep.fermion_matrix[1][0], -Complex::<Q>::one());
    assert!(rep.fermion_matrix[0][0].is_zero() && rep.fermion_matrix[1][1].is_zero());
}

#[test]
fn rest_symbols_agree_with_rest_operators() {
    let m = 1.5;
    let p = Momentum::rest(m);
    let eps = SymplecticForm::ledger();
    let d2 = build_d2(&rest_pairing(m), &eps).unwrap();
    assert!(zeta_d2(&p).max_abs_diff(&d2) < 1e-12);
    assert!(zeta_d(&p, 1).max_abs_diff(&build_d(1, &rest_pairing(m))) < 1e-12);
}

fn gamma_squared_is_norm(p: &Momentum<Q>) -> bool {
    let g = gamma_dirac(p);
    let g2: Mat<Complex<Q>> = g.mul(&g);
    let n = Complex::new(p.norm2(), q(0));
    (0..4).all(|i| (0..4).all(|j| *g2.get(i, j) == if i == j { n.clone() } else { Complex::zero() }))
}

proptest! {
    #[test]
    fn gamma_squares_to_norm(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        prop_assert!(gamma_squared_is_norm(&sampling::momentum(&mut r, 6)));
    }

    #[test]
    fn dirac_kernel_on_shell_is_two(seed in 0u64..100_000, m in 1i64..5) {
        let mut r = sampling::rng(seed);
        let m = q(m);
        let p = sampling::on_shell_rational(&mut r, &m);
        prop_assert_eq!(dirac_kernel_dim(&p, &m, 0.0).unwrap(), 2);
    }

    #[test]
    fn propagated_d2_matches_closed_form(seed in 0u64..100_000, m in 0.5f64..2.5) {
        let mut r = sampling::rng(seed);
        let p = sampling::on_shell(&mut r, m);
        let eps = SymplecticForm::ledger();
        for (rest, closed) in [
            (build_d2(&rest_pairing(m), &eps).unwrap(), zeta_d2(&p)),
            (build_dbar2(&rest_pairing(m), &eps).unwrap(), zeta_dbar2(&p)),
        ] {
            let moved = propagate(&rest, &p, m, 1e-9).unwrap();
            prop_assert!(moved.max_abs_diff(&closed) <= 1e-9 * (1.0 + closed.max_abs()));
        }
        let pair = propagate_d_pair(&p, m, Side::Plus, 1e-9).unwrap();
        for (a, op) in pair.iter().enumerate() {
            let closed = zeta_d(&p, a + 1);
            prop_assert!(op.max_abs_diff(&closed) <= 1e-9 * (1.0 + closed.max_abs()));
        }
    }

    #[test]
    fn symbols_are_equivariant(seed in 0u64..100_000) {
        let mut r = sampling::rng(seed);
        let h = sampling::spin_element(&mut r);
        let p = sampling::momentum(&mut r, 4).to_f64();
        let hp = h.act_on_momentum(&p);
        for (at_hp, at_p) in [(zeta_d2(&hp), zeta_d2(&p)), (zeta_i2(&hp), zeta_i2(&p)), (zeta_dbar2(&hp), zeta_dbar2(&p))] {
            let moved = conjugate_by(&h, &at_p);
            prop_assert!(moved.max_abs_diff(&at_hp) <= 1e-9 * (1.0 + at_hp.max_abs()));
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn superspin0_factor_everywhere(seed in 0u64..1_000) {
        let mut r = sampling::rng(seed);
        prop_assert!(superspin0_constraints(&sampling::momentum(&mut r, 4), None).factor_matches());
    }
}
