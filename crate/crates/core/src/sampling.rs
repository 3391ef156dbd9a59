//! Seeded random inputs for identity suites and tests.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra_core::{Monomial, Multivector, PairingMatrix};
use crate::scalar::{qf, ExactComplex, Q};
use crate::spin_geometry::{Momentum, SpinElement};
use crate::superfourier::{Domain, SuperFunction};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational n/d with |n| ≤ `span`, 1 ≤ d ≤ 4.
pub fn rational(r: &mut SeededRng, span: i64) -> Q {
    qf(r.gen_range(-span..=span), r.gen_range(1..=4))
}

pub fn exact_complex(r: &mut SeededRng, span: i64) -> ExactComplex {
    Complex::new(rational(r, span), rational(r, span))
}

pub fn momentum(r: &mut SeededRng, span: i64) -> Momentum<Q> {
    Momentum { p: std::array::from_fn(|_| rational(r, span)) }
}

pub fn invertible_pairing(r: &mut SeededRng) -> PairingMatrix<Q> {
    loop {
        let b = PairingMatrix::new(std::array::from_fn(|_| std::array::from_fn(|_| exact_complex(r, 5))));
        if !num_traits::Zero::is_zero(&b.det()) {
            return b;
        }
    }
}

pub fn multivector(r: &mut SeededRng, span: i64) -> Multivector<Q> {
    let mut v = Multivector::zero();
    for m in Monomial::all() {
        v.set(m, exact_complex(r, span));
    }
    v
}

/// Position-side superfunction with `modes` random plane waves and full coefficient vectors.
pub fn superfunction(r: &mut SeededRng, modes: usize) -> SuperFunction<Q> {
    let mut f = SuperFunction::zero(Domain::Position);
    for _ in 0..modes {
        f.add_mode(momentum(r, 6).p, multivector(r, 5));
    }
    f
}

/// Forward momentum with ‖p‖² = m², built from a random spatial part.
pub fn on_shell(r: &mut SeededRng, m: f64) -> Momentum<f64> {
    let k: [f64; 3] = std::array::from_fn(|_| r.gen_range(-3.0..3.0) * m);
    let e = (m * m + k.iter().map(|x| x * x).sum::<f64>()).sqrt();
    Momentum::new(e, k[0], k[1], k[2])
}

/// Forward momentum with rational entries and ‖p‖² = m² exactly:
/// p = m(1+|u|², 2u)/(1−|u|²) for rational u with |u| < 1.
pub fn on_shell_rational(r: &mut SeededRng, m: &Q) -> Momentum<Q> {
    loop {
        let u: [Q; 3] = std::array::from_fn(|_| qf(r.gen_range(-4..=4), 9));
        let n2: Q = u.iter().map(|x| x * x).sum();
        let one = Q::from_integer(1.into());
        if n2 >= one {
            continue;
        }
        let den = one.clone() - n2.clone();
        let two = Q::from_integer(2.into());
        return Momentum::new(
            m * (one + n2) / den.clone(),
            m * two.clone() * u[0].clone() / den.clone(),
            m * two.clone() * u[1].clone() / den.clone(),
            m * two * u[2].clone() / den,
        );
    }
}

pub fn spin_element(r: &mut SeededRng) -> SpinElement {
    loop {
        let a: [[crate::scalar::C64; 2]; 2] =
            std::array::from_fn(|_| std::array::from_fn(|_| crate::scalar::C64::new(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5))));
        let d = crate::spin_geometry::mat2_det(&a);
        if d.norm() > 0.2 {
            return SpinElement::normalized(a);
        }
    }
}
