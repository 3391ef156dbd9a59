//! The 16-dimensional module W = ∧S₊* ⊗ ∧S₋* with exact coefficients.
//!
//! Basis monomials carry bits for τ¹, τ², τ̄¹, τ̄² (in that order), and a
//! monomial is always written with its τ factors left of its τ̄ factors. All
//! operators follow the Koszul rule: moving an odd generator past another
//! odd generator costs a sign, whichever tensor factor they belong to.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::grassmann::front_sign;
use crate::linalg::{null_space, Mat};
use crate::scalar::{cint, creal, ExactComplex, Field, Real, Q};
use crate::spin_geometry::SymplecticForm;

pub const DIM: usize = 16;

/// Generator bit positions inside a monomial index.
pub const TAU1: u32 = 0;
pub const TAU2: u32 = 1;
pub const TAUBAR1: u32 = 2;
pub const TAUBAR2: u32 = 3;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("index {0} is not 1 or 2")]
    BadIndex(usize),
    #[error("composed and expanded forms of {0} disagree (max entry difference {1})")]
    RouteMismatch(&'static str, f64),
    #[error("malformed multivector JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    /// Subset of {1,2} as bits: bit 0 for τ¹, bit 1 for τ².
    pub plus_set: u8,
    /// Subset of {1,2} as bits: bit 0 for τ̄¹, bit 1 for τ̄².
    pub minus_set: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { plus_set: 0, minus_set: 0 };
    pub const TOP: Monomial = Monomial { plus_set: 3, minus_set: 3 };

    pub fn new(plus: &[usize], minus: &[usize]) -> Self {
        let bits = |s: &[usize]| s.iter().fold(0u8, |acc, &i| acc | (1 << (i - 1)));
        Monomial { plus_set: bits(plus), minus_set: bits(minus) }
    }

    pub fn index(self) -> usize {
        (self.plus_set | (self.minus_set << 2)) as usize
    }

    pub fn from_index(i: usize) -> Self {
        Monomial { plus_set: (i & 3) as u8, minus_set: ((i >> 2) & 3) as u8 }
    }

    pub fn all() -> impl Iterator<Item = Monomial> {
        (0..DIM).map(Monomial::from_index)
    }

    pub fn degree(self) -> u32 {
        self.plus_set.count_ones() + self.minus_set.count_ones()
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    /// Label `"<I>|<J>"` with sorted index strings, e.g. `"12|1"`.
    pub fn label(self) -> String {
        format!("{}|{}", set_label(self.plus_set), set_label(self.minus_set))
    }

    pub fn parse_label(s: &str) -> Option<Monomial> {
        let (i, j) = s.split_once('|')?;
        Some(Monomial { plus_set: parse_set(i)?, minus_set: parse_set(j)? })
    }
}

fn set_label(bits: u8) -> String {
    let mut s = String::new();
    if bits & 1 != 0 {
        s.push('1');
    }
    if bits & 2 != 0 {
        s.push('2');
    }
    s
}

fn parse_set(s: &str) -> Option<u8> {
    match s {
        "" => Some(0),
        "1" => Some(1),
        "2" => Some(2),
        "12" => Some(3),
        _ => None,
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (bit, name) in [(1u8, "τ¹"), (2, "τ²")] {
            if self.plus_set & bit != 0 {
                parts.push(name);
            }
        }
        for (bit, name) in [(1u8, "τ̄¹"), (2, "τ̄²")] {
            if self.minus_set & bit != 0 {
                parts.push(name);
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("∧"))
        }
    }
}

/// Element of W; coefficient `i` belongs to `Monomial::from_index(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<R: Real = Q> {
    pub coeffs: [Complex<R>; DIM],
}

impl<R: Real> Multivector<R> {
    pub fn zero() -> Self {
        Multivector { coeffs: std::array::from_fn(|_| Complex::zero()) }
    }

    pub fn basis(m: Monomial) -> Self {
        Self::term(m, Complex::one())
    }

    pub fn term(m: Monomial, c: Complex<R>) -> Self {
        let mut v = Self::zero();
        v.coeffs[m.index()] = c;
        v
    }

    pub fn scalar(c: Complex<R>) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn get(&self, m: Monomial) -> &Complex<R> {
        &self.coeffs[m.index()]
    }

    pub fn set(&mut self, m: Monomial, c: Complex<R>) {
        self.coeffs[m.index()] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Multivector { coeffs: std::array::from_fn(|i| sparse_add(&self.coeffs[i], &o.coeffs[i])) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Multivector { coeffs: std::array::from_fn(|i| sparse_add(&self.coeffs[i], &-o.coeffs[i].clone())) }
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Multivector { coeffs: std::array::from_fn(|i| sparse_mul(&self.coeffs[i], c)) }
    }

    /// Even (`true`) or odd part.
    pub fn parity_part(&self, even: bool) -> Self {
        Multivector {
            coeffs: std::array::from_fn(|i| {
                if Monomial::from_index(i).is_odd() != even {
                    self.coeffs[i].clone()
                } else {
                    Complex::zero()
                }
            }),
        }
    }

    /// Wedge product in the full exterior algebra on τ¹, τ², τ̄¹, τ̄².
    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(s) = crate::grassmann::product_sign(i as u32, j as u32) {
                    let v = a.clone() * b.clone();
                    let k = i | j;
                    out.coeffs[k] = out.coeffs[k].clone() + if s > 0 { v } else { -v };
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        crate::scalar::max_abs_diff(&self.coeffs, &o.coeffs)
    }

    pub fn map<S: Real>(&self, f: impl Fn(&Complex<R>) -> Complex<S>) -> Multivector<S> {
        Multivector { coeffs: std::array::from_fn(|i| f(&self.coeffs[i])) }
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        self.map(crate::scalar::to_c64)
    }
}

impl Multivector<Q> {
    /// `{"coeffs": {"<I>|<J>": [re_num, re_den, im_num, im_den]}}`, zero entries omitted.
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for m in Monomial::all() {
            let c = self.get(m);
            if !c.is_zero() {
                map.insert(m.label(), exact_complex_json(c));
            }
        }
        json!({ "coeffs": Value::Object(map) })
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| AlgebraError::Json("missing \"coeffs\" object".into()))?;
        let mut out = Self::zero();
        for (k, val) in coeffs {
            let m = Monomial::parse_label(k).ok_or_else(|| AlgebraError::Json(format!("bad monomial label {k:?}")))?;
            out.set(m, exact_complex_from_json(val).map_err(AlgebraError::Json)?);
        }
        Ok(out)
    }
}

impl<R: Real> fmt::Display for Multivector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for m in Monomial::all() {
            let c = self.get(m);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?} + {:?}i)·{}", c.re, c.im, m)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub(crate) fn bigint_json(n: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &Value) -> Result<num_bigint::BigInt, String> {
    if let Some(i) = v.as_i64() {
        return Ok(i.into());
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| format!("bad integer string {s:?}"));
    }
    Err(format!("expected integer, got {v}"))
}

pub fn exact_complex_json(c: &ExactComplex) -> Value {
    json!([bigint_json(c.re.numer()), bigint_json(c.re.denom()), bigint_json(c.im.numer()), bigint_json(c.im.denom())])
}

pub fn exact_complex_from_json(v: &Value) -> Result<ExactComplex, String> {
    let a = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| format!("expected 4-array, got {v}"))?;
    let part = |n: &Value, d: &Value| -> Result<Q, String> {
        let d = bigint_from_json(d)?;
        if d == 0.into() {
            return Err("zero denominator".into());
        }
        Ok(Q::new(bigint_from_json(n)?, d))
    };
    Ok(Complex::new(part(&a[0], &a[1])?, part(&a[2], &a[3])?))
}

/// Pairing matrix `b[a][c]` = pairing of τᵃ with τ̄ᶜ (0-based storage).
#[derive(Clone, Debug, PartialEq)]
pub struct PairingMatrix<R: Real = Q> {
    pub b: [[Complex<R>; 2]; 2],
}

impl<R: Real> PairingMatrix<R> {
    pub fn new(b: [[Complex<R>; 2]; 2]) -> Self {
        PairingMatrix { b }
    }

    pub fn identity() -> Self {
        Self::scalar(Complex::one())
    }

    pub fn scalar(c: Complex<R>) -> Self {
        PairingMatrix { b: [[c.clone(), Complex::zero()], [Complex::zero(), c]] }
    }

    pub fn from_ints(b: [[(i64, i64); 2]; 2]) -> Self {
        PairingMatrix { b: b.map(|row| row.map(|(re, im)| cint(re, im))) }
    }

    /// Entry for 1-based indices.
    pub fn at(&self, a: usize, c: usize) -> &Complex<R> {
        &self.b[a - 1][c - 1]
    }

    pub fn det(&self) -> Complex<R> {
        self.b[0][0].clone() * self.b[1][1].clone() - self.b[0][1].clone() * self.b[1][0].clone()
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().negligible(1e-14)
    }

    pub fn to_f64(&self) -> PairingMatrix<f64> {
        PairingMatrix { b: std::array::from_fn(|i| std::array::from_fn(|j| crate::scalar::to_c64(&self.b[i][j]))) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Endomorphism of W as a 16×16 matrix; column `j` is the image of basis monomial `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoW<R: Real = Q> {
    pub matrix: Mat<Complex<R>>,
    pub parity: Parity,
}

impl<R: Real> EndoW<R> {
    pub fn from_matrix(matrix: Mat<Complex<R>>) -> Self {
        assert!(matrix.rows == DIM && matrix.cols == DIM);
        let parity = detect_parity(&matrix);
        EndoW { matrix, parity }
    }

    /// Matrix of a linear map given by its action on basis monomials.
    pub fn from_linear(f: impl Fn(&Multivector<R>) -> Multivector<R>) -> Self {
        let mut m = Mat::zeros(DIM, DIM);
        for j in 0..DIM {
            let img = f(&Multivector::basis(Monomial::from_index(j)));
            for i in 0..DIM {
                m.set(i, j, img.coeffs[i].clone());
            }
        }
        Self::from_matrix(m)
    }

    pub fn identity() -> Self {
        Self::from_matrix(Mat::identity(DIM))
    }

    pub fn zero() -> Self {
        Self::from_matrix(Mat::zeros(DIM, DIM))
    }

    pub fn apply(&self, v: &Multivector<R>) -> Multivector<R> {
        let out = self.matrix.apply(&v.coeffs);
        Multivector { coeffs: std::array::from_fn(|i| out[i].clone()) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_matrix(self.matrix.mul(&other.matrix))
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.matrix.data.iter().zip(&o.matrix.data).map(|(a, b)| sparse_add(a, b)).collect();
        Self::from_matrix(Mat { rows: DIM, cols: DIM, data })
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Complex::one()))
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        let data = self.matrix.data.iter().map(|a| sparse_mul(a, c)).collect();
        Self::from_matrix(Mat { rows: DIM, cols: DIM, data })
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.compose(o).add(&o.compose(self))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }

    /// Graded commutator: anticommutator when both are odd, commutator otherwise.
    pub fn graded_commutator(&self, o: &Self) -> Self {
        if self.parity == Parity::Odd && o.parity == Parity::Odd {
            self.anticommutator(o)
        } else {
            self.commutator(o)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        crate::scalar::max_abs_diff(&self.matrix.data, &o.matrix.data)
    }

    pub fn entry(&self, row: Monomial, col: Monomial) -> &Complex<R> {
        self.matrix.get(row.index(), col.index())
    }

    pub fn to_f64(&self) -> EndoW<f64> {
        EndoW::from_matrix(Mat { rows: DIM, cols: DIM, data: self.matrix.data.iter().map(crate::scalar::to_c64).collect() })
    }
}

impl EndoW<Q> {
    /// Dense 16×16 array of `[re_num, re_den, im_num, im_den]` in monomial index order.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..DIM)
            .map(|i| Value::Array((0..DIM).map(|j| exact_complex_json(self.matrix.get(i, j))).collect()))
            .collect();
        json!({
            "basis": Monomial::all().map(Monomial::label).collect::<Vec<_>>(),
            "parity": format!("{:?}", self.parity).to_lowercase(),
            "matrix": rows,
        })
    }
}

// Most entries are zero; skipping them avoids big-rational arithmetic.
fn sparse_add<R: Real>(a: &Complex<R>, b: &Complex<R>) -> Complex<R> {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a.clone() + b.clone()
    }
}

fn sparse_mul<R: Real>(a: &Complex<R>, c: &Complex<R>) -> Complex<R> {
    if a.is_zero() || c.is_zero() {
        Complex::zero()
    } else {
        a.clone() * c.clone()
    }
}

fn detect_parity<R: Real>(m: &Mat<Complex<R>>) -> Parity {
    let mut even = true;
    let mut odd = true;
    for i in 0..DIM {
        for j in 0..DIM {
            if m.get(i, j).is_zero() {
                continue;
            }
            if Monomial::from_index(i).is_odd() == Monomial::from_index(j).is_odd() {
                odd = false;
            } else {
                even = false;
            }
        }
    }
    match (even, odd) {
        (true, _) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::Mixed,
    }
}

fn check_index(a: usize) -> u32 {
    assert!(a == 1 || a == 2, "spinor index must be 1 or 2, got {a}");
    (a - 1) as u32
}

fn left_mul<R: Real>(gen: u32, m: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for (k, c) in m.coeffs.iter().enumerate() {
        let k = k as u32;
        if c.is_zero() || k & (1 << gen) != 0 {
            continue;
        }
        let v = c.clone();
        out.coeffs[(k | (1 << gen)) as usize] = if front_sign(k, gen) > 0 { v } else { -v };
    }
    out
}

fn left_deriv<R: Real>(gen: u32, m: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for (k, c) in m.coeffs.iter().enumerate() {
        let k = k as u32;
        if c.is_zero() || k & (1 << gen) == 0 {
            continue;
        }
        let v = c.clone();
        out.coeffs[(k & !(1 << gen)) as usize] = if front_sign(k, gen) > 0 { v } else { -v };
    }
    out
}

/// Left exterior multiplication by τᵃ.
pub fn ext_plus<R: Real>(a: usize, m: &Multivector<R>) -> Multivector<R> {
    left_mul(TAU1 + check_index(a), m)
}

/// Left exterior multiplication by τ̄ᵃ.
pub fn ext_minus<R: Real>(a: usize, m: &Multivector<R>) -> Multivector<R> {
    left_mul(TAUBAR1 + check_index(a), m)
}

/// Contraction of the ∧S₋* factor with τᵃ through the pairing: Σ_c B[a][c] ∂/∂τ̄ᶜ.
pub fn int_plus<R: Real>(a: usize, b: &PairingMatrix<R>, m: &Multivector<R>) -> Multivector<R> {
    let a0 = check_index(a) as usize;
    let mut out = Multivector::zero();
    for c in 0..2 {
        let coef = &b.b[a0][c];
        if !coef.is_zero() {
            out = out.add(&left_deriv(TAUBAR1 + c as u32, m).scale(coef));
        }
    }
    out
}

/// Contraction of the ∧S₊* factor with τ̄ᵃ through the pairing: Σ_c B[c][a] ∂/∂τᶜ.
pub fn int_minus<R: Real>(a: usize, b: &PairingMatrix<R>, m: &Multivector<R>) -> Multivector<R> {
    let a0 = check_index(a) as usize;
    let mut out = Multivector::zero();
    for c in 0..2 {
        let coef = &b.b[c][a0];
        if !coef.is_zero() {
            out = out.add(&left_deriv(TAU1 + c as u32, m).scale(coef));
        }
    }
    out
}

pub fn e_plus_op<R: Real>(a: usize) -> EndoW<R> {
    EndoW::from_linear(|m| ext_plus(a, m))
}

pub fn e_minus_op<R: Real>(a: usize) -> EndoW<R> {
    EndoW::from_linear(|m| ext_minus(a, m))
}

pub fn i_plus_op<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| int_plus(a, b, m))
}

pub fn i_minus_op<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| int_minus(a, b, m))
}

/// d_a = e_{τᵃ} + i_{τᵃ}.
pub fn build_d<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| ext_plus(a, m).add(&int_plus(a, b, m)))
}

/// d̄_a = e_{τ̄ᵃ} + i_{τ̄ᵃ}.
pub fn build_dbar<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| ext_minus(a, m).add(&int_minus(a, b, m)))
}

/// q_a = e_{τᵃ} − i_{τᵃ}.
pub fn build_q<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| ext_plus(a, m).sub(&int_plus(a, b, m)))
}

/// q̄_a = e_{τ̄ᵃ} − i_{τ̄ᵃ}.
pub fn build_qbar<R: Real>(a: usize, b: &PairingMatrix<R>) -> EndoW<R> {
    EndoW::from_linear(|m| ext_minus(a, m).sub(&int_minus(a, b, m)))
}

fn eps_sum<R: Real>(eps: &SymplecticForm, f: impl Fn(usize, usize) -> EndoW<R>) -> EndoW<R> {
    let mut out = EndoW::zero();
    for a in 1..=2 {
        for b in 1..=2 {
            let e = eps.lower(a, b);
            if e != 0 {
                out = out.add(&f(a, b).scale(&cint(e, 0)));
            }
        }
    }
    out
}

/// e² = ε_ab e_{τᵃ} e_{τᵇ}; sends λ to λ·ε with ε = ε_ab τᵃ∧τᵇ.
pub fn e_squared<R: Real>(eps: &SymplecticForm) -> EndoW<R> {
    eps_sum(eps, |a, b| e_plus_op(a).compose(&e_plus_op(b)))
}

/// ē² = ε_ab e_{τ̄ᵃ} e_{τ̄ᵇ}.
pub fn ebar_squared<R: Real>(eps: &SymplecticForm) -> EndoW<R> {
    eps_sum(eps, |a, b| e_minus_op(a).compose(&e_minus_op(b)))
}

/// i² on the ∧S₋* factor: r∧r′ ↦ ε_ab B(τᵃ,r) B(τᵇ,r′), zero in lower degree.
pub fn i_squared<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    let mut c = Complex::zero();
    for a in 1..=2 {
        for bb in 1..=2 {
            let e = eps.lower(a, bb);
            if e != 0 {
                c = c + cint::<R>(e, 0) * b.at(a, 1).clone() * b.at(bb, 2).clone();
            }
        }
    }
    EndoW::from_linear(|m| {
        let mut out = Multivector::zero();
        for k in Monomial::all().filter(|k| k.minus_set == 3) {
            let low = Monomial { plus_set: k.plus_set, minus_set: 0 };
            out.set(low, m.get(k).clone() * c.clone());
        }
        out
    })
}

/// ī² on the ∧S₊* factor: r∧r′ ↦ ε_ab B(r,τ̄ᵃ) B(r′,τ̄ᵇ).
pub fn ibar_squared<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    let mut c = Complex::zero();
    for a in 1..=2 {
        for bb in 1..=2 {
            let e = eps.lower(a, bb);
            if e != 0 {
                c = c + cint::<R>(e, 0) * b.at(1, a).clone() * b.at(2, bb).clone();
            }
        }
    }
    EndoW::from_linear(|m| {
        let mut out = Multivector::zero();
        for k in Monomial::all().filter(|k| k.plus_set == 3) {
            let low = Monomial { plus_set: 0, minus_set: k.minus_set };
            out.set(low, m.get(k).clone() * c.clone());
        }
        out
    })
}

/// d² = ε_ab d_a ∘ d_b by composition.
pub fn compose_d2<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    eps_sum(eps, |x, y| build_d(x, b).compose(&build_d(y, b)))
}

/// d̄² = ε_ab d̄_a ∘ d̄_b by composition.
pub fn compose_dbar2<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    eps_sum(eps, |x, y| build_dbar(x, b).compose(&build_dbar(y, b)))
}

/// The two-term split `e²⊗Id + Id⊗i²`.
pub fn d2_two_term<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    e_squared(eps).add(&i_squared(b, eps))
}

/// The two-term split `Id⊗ē² + ī²⊗Id`.
pub fn dbar2_two_term<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    ebar_squared(eps).add(&ibar_squared(b, eps))
}

/// Graded expansion of d²: e² + 2ε_ab e_{τᵃ}∘i_{τᵇ} + ε_ab i_{τᵃ}∘i_{τᵇ}.
///
/// Since e_{τᵃ} and i_{τᵇ} act on different factors they anticommute, so the
/// cross terms do not cancel; and ε_ab i_{τᵃ} i_{τᵇ} = −2·i².
pub fn d2_expanded<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    let cross = eps_sum(eps, |x, y| e_plus_op(x).compose(&i_plus_op(y, b)));
    e_squared(eps).add(&cross.scale(&cint(2, 0))).add(&i_squared(b, eps).scale(&cint(-2, 0)))
}

/// Graded expansion of d̄², mirror of [`d2_expanded`].
pub fn dbar2_expanded<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> EndoW<R> {
    let cross = eps_sum(eps, |x, y| e_minus_op(x).compose(&i_minus_op(y, b)));
    ebar_squared(eps).add(&cross.scale(&cint(2, 0))).add(&ibar_squared(b, eps).scale(&cint(-2, 0)))
}

fn checked<R: Real>(name: &'static str, composed: EndoW<R>, expanded: EndoW<R>) -> Result<EndoW<R>, AlgebraError> {
    let diff = composed.max_abs_diff(&expanded);
    let ok = if R::EXACT { composed == expanded } else { diff <= 1e-9 * (1.0 + composed.max_abs()) };
    if ok {
        Ok(composed)
    } else {
        Err(AlgebraError::RouteMismatch(name, diff))
    }
}

/// d², built by composition and cross-checked against its graded expansion.
pub fn build_d2<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> Result<EndoW<R>, AlgebraError> {
    checked("d²", compose_d2(b, eps), d2_expanded(b, eps))
}

/// d̄², built by composition and cross-checked against its graded expansion.
pub fn build_dbar2<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> Result<EndoW<R>, AlgebraError> {
    checked("d̄²", compose_dbar2(b, eps), dbar2_expanded(b, eps))
}

/// Names of the four chiral parameters, in the order returned by [`chiral_kernel`].
pub const CHIRAL_PARAMS: [&str; 4] = ["phi", "psi1", "psi2", "F"];

/// Closed-form basis of ker d̄₁ ∩ ker d̄₂, parameterised by (φ, ψ₁, ψ₂, F).
///
/// φ ↦ −det B + B₂₂ τ¹τ̄¹ − B₂₁ τ¹τ̄² − B₁₂ τ²τ̄¹ + B₁₁ τ²τ̄² + τ¹τ²τ̄¹τ̄²,
/// ψ_a ↦ B_{a2} τ̄¹ − B_{a1} τ̄² + τᵃτ̄¹τ̄², F ↦ τ̄¹τ̄².
pub fn chiral_kernel<R: Real>(b: &PairingMatrix<R>) -> [Multivector<R>; 4] {
    let m = |p: &[usize], q: &[usize]| Monomial::new(p, q);
    let mut phi = Multivector::scalar(-b.det());
    phi.set(m(&[1], &[1]), b.at(2, 2).clone());
    phi.set(m(&[1], &[2]), -b.at(2, 1).clone());
    phi.set(m(&[2], &[1]), -b.at(1, 2).clone());
    phi.set(m(&[2], &[2]), b.at(1, 1).clone());
    phi.set(Monomial::TOP, Complex::one());
    let psi = |a: usize| {
        let mut v = Multivector::term(m(&[], &[1]), b.at(a, 2).clone());
        v.set(m(&[], &[2]), -b.at(a, 1).clone());
        v.set(m(&[a], &[1, 2]), Complex::one());
        v
    };
    let f = Multivector::basis(m(&[], &[1, 2]));
    [phi, psi(1), psi(2), f]
}

/// The same family with the scalar and τᵃτ̄ᵇ coefficients of the φ-vector
/// written with the opposite overall sign (H = +det B, A₁₁ = −B₂₂, …): the form
/// obtained when the two tensor factors are treated as commuting.
pub fn chiral_kernel_ungraded_form<R: Real>(b: &PairingMatrix<R>) -> [Multivector<R>; 4] {
    let [phi, psi1, psi2, f] = chiral_kernel(b);
    let mut flipped = phi.clone();
    for k in Monomial::all().filter(|k| k.degree() == 0 || (k.plus_set.count_ones() == 1 && k.minus_set.count_ones() == 1)) {
        flipped.set(k, -phi.get(k).clone());
    }
    [flipped, psi1, psi2, f]
}

/// Element of the chiral kernel with the given parameters.
pub fn chiral_element<R: Real>(b: &PairingMatrix<R>, params: &[Complex<R>; 4]) -> Multivector<R> {
    chiral_kernel(b).iter().zip(params).fold(Multivector::zero(), |acc, (v, c)| acc.add(&v.scale(c)))
}

/// Null space of the stacked 32×16 system (d̄₁; d̄₂), by exact Gaussian elimination.
pub fn dbar_null_space<R: Real>(b: &PairingMatrix<R>, tol: f64) -> Vec<Multivector<R>> {
    let d1 = build_dbar(1, b);
    let d2 = build_dbar(2, b);
    let mut rows = Vec::with_capacity(2 * DIM);
    for op in [&d1, &d2] {
        for i in 0..DIM {
            rows.push(op.matrix.row(i).to_vec());
        }
    }
    null_space(&Mat::from_rows(rows), tol)
        .into_iter()
        .map(|v| Multivector { coeffs: std::array::from_fn(|i| v[i].clone()) })
        .collect()
}

/// Antilinear, order-reversing involution exchanging τᵃ and τ̄ᵃ.
///
/// On a monomial of degree k with τ-part I and τ̄-part J it gives
/// (−1)^{k(k−1)/2 + |I||J|} τ^J τ̄^I, with the coefficient conjugated.
pub fn conjugate_w<R: Real>(m: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for k in Monomial::all() {
        let c = m.get(k);
        if c.is_zero() {
            continue;
        }
        let (i, j) = (k.plus_set.count_ones(), k.minus_set.count_ones());
        let deg = i + j;
        let sign = (deg * deg.saturating_sub(1) / 2 + i * j) % 2 == 0;
        let target = Monomial { plus_set: k.minus_set, minus_set: k.plus_set };
        let v = c.conj();
        out.set(target, if sign { v } else { -v });
    }
    out
}

/// Coefficient-wise conjugation together with τ-monomial to τ̄-monomial swap, no signs.
pub fn swap_conjugate_unsigned<R: Real>(m: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for k in Monomial::all() {
        out.set(Monomial { plus_set: k.minus_set, minus_set: k.plus_set }, m.get(k).conj());
    }
    out
}

/// Generic element with named coefficients, used by display helpers.
pub fn generic_labels() -> BTreeMap<Monomial, &'static str> {
    let m = |p: &[usize], q: &[usize]| Monomial::new(p, q);
    BTreeMap::from([
        (m(&[], &[]), "H"),
        (m(&[1], &[]), "mu1"),
        (m(&[2], &[]), "mu2"),
        (m(&[], &[1]), "lambda1"),
        (m(&[], &[2]), "lambda2"),
        (m(&[1, 2], &[]), "G"),
        (m(&[], &[1, 2]), "F"),
        (m(&[1], &[1]), "A11"),
        (m(&[1], &[2]), "A12"),
        (m(&[2], &[1]), "A21"),
        (m(&[2], &[2]), "A22"),
        (m(&[1, 2], &[1]), "eta1"),
        (m(&[1, 2], &[2]), "eta2"),
        (m(&[1], &[1, 2]), "psi1"),
        (m(&[2], &[1, 2]), "psi2"),
        (Monomial::TOP, "phi"),
    ])
}

pub fn exact_identity_pairing() -> PairingMatrix<Q> {
    PairingMatrix::identity()
}

pub fn real_pairing<R: Real>(entries: [[R; 2]; 2]) -> PairingMatrix<R> {
    PairingMatrix { b: entries.map(|r| r.map(creal)) }
}
