//! Sparse exterior algebra on up to 32 odd generators.
//!
//! A monomial is a bitmask; bit `g` set means generator `g` is present, and
//! factors are always written in ascending generator order. Left
//! multiplication and left derivatives pick up `(-1)^k` where `k` counts the
//! generators of lower index already present.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sign of the product of two canonical monomials, or `None` if they share a generator.
pub fn product_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Sign for moving generator `g` to the front of monomial `m` (or inserting it there).
pub fn front_sign(m: u32, g: u32) -> i32 {
    if (m & ((1u32 << g) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grassmann<F> {
    terms: BTreeMap<u32, F>,
}

impl<F: Field> Default for Grassmann<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Grassmann<F> {
    pub fn zero() -> Self {
        Grassmann { terms: BTreeMap::new() }
    }

    pub fn scalar(c: F) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(mask: u32, c: F) -> Self {
        let mut g = Self::zero();
        g.add_term(mask, c);
        g
    }

    pub fn generator(i: u32) -> Self {
        Self::monomial(1 << i, F::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &F)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, mask: u32) -> F {
        self.terms.get(&mask).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: u32, c: F) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(F::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(s) = product_sign(*a, *b) {
                    let v = x.clone() * y.clone();
                    out.add_term(a | b, if s > 0 { v } else { -v });
                }
            }
        }
        out
    }

    /// Left multiplication by generator `g`.
    pub fn left_mul_gen(&self, g: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m & (1 << g) == 0 {
                let v = c.clone();
                out.add_term(m | (1 << g), if front_sign(*m, g) > 0 { v } else { -v });
            }
        }
        out
    }

    /// Left derivative with respect to generator `g`.
    pub fn left_deriv(&self, g: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m & (1 << g) != 0 {
                let v = c.clone();
                out.add_term(m & !(1 << g), if front_sign(*m, g) > 0 { v } else { -v });
            }
        }
        out
    }

    /// Projection onto monomials of even (`true`) or odd degree.
    pub fn parity_part(&self, even: bool) -> Self {
        Grassmann {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.count_ones() % 2 == 0) == even)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Apply `f` coefficient-wise, keeping monomials.
    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn max_generator(&self) -> Option<u32> {
        self.terms.keys().map(|m| 32 - m.leading_zeros()).max().filter(|&g| g > 0).map(|g| g - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn generators_anticommute() {
        let a = Grassmann::<Q>::generator(0);
        let b = Grassmann::<Q>::generator(3);
        assert_eq!(a.mul(&b), b.mul(&a).scale(&q(-1)));
        assert!(a.mul(&a).is_zero());
    }

    #[test]
    fn left_mul_matches_product() {
        let x = Grassmann::monomial(0b1010, q(3)).add(&Grassmann::monomial(0b0001, q(2)));
        for g in 0..4 {
            assert_eq!(x.left_mul_gen(g), Grassmann::generator(g).mul(&x));
        }
    }

    #[test]
    fn derivative_is_odd_derivation() {
        let x = Grassmann::monomial(0b0011, q(1));
        let y = Grassmann::monomial(0b0100, q(1));
        // d(xy) = (dx) y + (-1)^{|x|} x (dy), with |x| even
        let lhs = x.mul(&y).left_deriv(0);
        let rhs = x.left_deriv(0).mul(&y).add(&x.mul(&y.left_deriv(0)));
        assert_eq!(lhs, rhs);
    }
}
