//! Scalar fields used throughout the crate.
//!
//! Exact work happens over `Complex<BigRational>`; numeric work (boosts, grids)
//! over `Complex<f64>`. Most containers are generic over the real part `R`.

use std::fmt;
use std::ops::{Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type ExactComplex = Complex<Q>;
pub type C64 = Complex<f64>;

/// Real scalars: exact rationals or doubles.
pub trait Real: Num + Clone + Neg<Output = Self> + PartialOrd + fmt::Debug + Send + Sync + 'static {
    const EXACT: bool;
    fn from_i64(v: i64) -> Self;
    fn from_frac(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
}

impl Real for Q {
    const EXACT: bool = true;
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_frac(n: i64, d: i64) -> Self {
        Q::new(BigInt::from(n), BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            // huge numerators: fall back to a scaled division
            let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Real for f64 {
    const EXACT: bool = false;
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_frac(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// Operations shared by every coefficient field the linear algebra runs over.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    const EXACT: bool;
    /// Magnitude used for pivoting and tolerance tests.
    fn magnitude(&self) -> f64;
    /// Exactly zero for exact fields; below `tol` for floating ones.
    fn negligible(&self, tol: f64) -> bool;
}

impl Field for Q {
    const EXACT: bool = true;
    fn magnitude(&self) -> f64 {
        Real::to_f64(self).abs()
    }
    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl<R: Real> Field for Complex<R> {
    const EXACT: bool = R::EXACT;
    fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    fn negligible(&self, tol: f64) -> bool {
        if R::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::from_frac(n, d)
}

pub fn cx<R: Real>(re: R, im: R) -> Complex<R> {
    Complex::new(re, im)
}

pub fn cint<R: Real>(re: i64, im: i64) -> Complex<R> {
    Complex::new(R::from_i64(re), R::from_i64(im))
}

pub fn creal<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

pub fn imag_unit<R: Real>() -> Complex<R> {
    Complex::new(R::zero(), R::one())
}

pub fn to_c64<R: Real>(z: &Complex<R>) -> C64 {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn exact_to_c64(z: &ExactComplex) -> C64 {
    to_c64(z)
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
pub fn rational_approx(x: f64, max_den: i64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    Q::new(BigInt::from(sign as i128 * h1), BigInt::from(k1.max(1)))
}

/// Largest absolute difference between two complex vectors, as f64.
pub fn max_abs_diff<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).magnitude())
        .fold(0.0, f64::max)
}
