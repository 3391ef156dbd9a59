//! Minkowski momenta, the Γ_ℂ pairing, SL(2,ℂ) acting on W, rest boosts,
//! the ζ conjugation, and orbit classification.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_core::{EndoW, Monomial, Multivector, PairingMatrix};
use crate::scalar::{cint, imag_unit, Real, C64, Q};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("momentum is off the mass shell: |‖p‖² − m²| = {residual:e} exceeds {allowed:e}")]
    OffOrbit { residual: f64, allowed: f64 },
    #[error("momentum has non-positive energy p0 = {0}")]
    NonPositiveEnergy(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("spin element has det {0:?}, expected 1")]
    NotUnimodular(C64),
    #[error("malformed momentum: {0}")]
    BadMomentum(String),
}

/// Covector p = p₀e⁰ + p₁e¹ + p₂e² + p₃e³.
#[derive(Clone, Debug, PartialEq)]
pub struct Momentum<R: Real = Q> {
    pub p: [R; 4],
}

impl<R: Real> Momentum<R> {
    pub fn new(p0: R, p1: R, p2: R, p3: R) -> Self {
        Momentum { p: [p0, p1, p2, p3] }
    }

    pub fn from_ints(p: [i64; 4]) -> Self {
        Momentum { p: p.map(R::from_i64) }
    }

    pub fn rest(m: R) -> Self {
        Momentum { p: [m, R::zero(), R::zero(), R::zero()] }
    }

    pub fn zero() -> Self {
        Momentum { p: std::array::from_fn(|_| R::zero()) }
    }

    pub fn norm2(&self) -> R {
        minkowski_norm2(self)
    }

    pub fn neg(&self) -> Self {
        Momentum { p: self.p.clone().map(|x| -x) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Momentum { p: std::array::from_fn(|i| self.p[i].clone() + o.p[i].clone()) }
    }

    pub fn scale(&self, s: &R) -> Self {
        Momentum { p: self.p.clone().map(|x| x * s.clone()) }
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Momentum<f64> {
        Momentum { p: std::array::from_fn(|i| self.p[i].to_f64()) }
    }
}

impl Momentum<Q> {
    /// `[p0,p1,p2,p3]`, each entry an integer or `[num, den]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.p
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        crate::algebra_core::bigint_json(x.numer())
                    } else {
                        json!([crate::algebra_core::bigint_json(x.numer()), crate::algebra_core::bigint_json(x.denom())])
                    }
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, GeometryError> {
        let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| GeometryError::BadMomentum(format!("expected 4 entries, got {v}")))?;
        let mut p: [Q; 4] = std::array::from_fn(|_| Q::zero());
        for (slot, e) in p.iter_mut().zip(arr) {
            *slot = json_rational(e).map_err(GeometryError::BadMomentum)?;
        }
        Ok(Momentum { p })
    }
}

/// Parse an integer, `[num, den]`, a decimal number, or a string like `"3/4"` or `"0.25"`.
pub fn json_rational(e: &Value) -> Result<Q, String> {
    use crate::algebra_core::bigint_from_json;
    match e {
        Value::Array(nd) if nd.len() == 2 => {
            let d = bigint_from_json(&nd[1])?;
            if d == 0.into() {
                return Err("zero denominator".into());
            }
            Ok(Q::new(bigint_from_json(&nd[0])?, d))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_i64(i))
            } else {
                parse_rational(&n.to_string())
            }
        }
        Value::String(s) => parse_rational(s),
        _ => Err(format!("not a rational: {e}")),
    }
}

/// Parse `"a"`, `"a/b"` or a finite decimal `"1.25"`/`"-3e-2"` exactly.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == 0.into() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| format!("bad exponent in {s:?}"))?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {s:?}"));
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {s:?}"));
    }
    let n: num_bigint::BigInt = all.parse().map_err(|_| format!("not a number: {s:?}"))?;
    let shift = exp - frac_part.len() as i32;
    let ten = num_bigint::BigInt::from(10);
    let v = if shift >= 0 {
        Q::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Q::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(if neg { -v } else { v })
}

/// ‖p‖² = p₀² − p₁² − p₂² − p₃².
pub fn minkowski_norm2<R: Real>(p: &Momentum<R>) -> R {
    let [a, b, c, d] = &p.p;
    a.clone() * a.clone() - b.clone() * b.clone() - c.clone() * c.clone() - d.clone() * d.clone()
}

/// Γ^μ_{ab} as 2×2 matrices, μ = 0..3, so that B(p) = Σ p_μ Γ^μ.
pub fn gamma_table<R: Real>() -> [[[Complex<R>; 2]; 2]; 4] {
    let z = || Complex::zero();
    let o = || Complex::one();
    [
        [[o(), z()], [z(), o()]],
        [[o(), z()], [z(), -o()]],
        [[z(), o()], [o(), z()]],
        [[z(), -imag_unit()], [imag_unit(), z()]],
    ]
}

/// B(p)_{ab} = p(Γ_ℂ(τᵃ, τ̄ᵇ)) = [[p0+p1, p2−ip3], [p2+ip3, p0−p1]].
pub fn gamma_pair<R: Real>(p: &Momentum<R>) -> PairingMatrix<R> {
    let [p0, p1, p2, p3] = p.p.clone();
    PairingMatrix::new([
        [Complex::new(p0.clone() + p1.clone(), R::zero()), Complex::new(p2.clone(), -p3.clone())],
        [Complex::new(p2, p3), Complex::new(p0 - p1, R::zero())],
    ])
}

/// Inverse of [`gamma_pair`] on Hermitian matrices.
pub fn momentum_from_pairing(b: &PairingMatrix<f64>) -> Momentum<f64> {
    let b11 = b.b[0][0].re;
    let b22 = b.b[1][1].re;
    Momentum::new((b11 + b22) / 2.0, (b11 - b22) / 2.0, b.b[1][0].re, b.b[1][0].im)
}

/// Lowered-index pairing ε B ε; the matrix Γ^μ_{ab} q_μ with both indices down.
pub fn lowered_pairing<R: Real>(b: &PairingMatrix<R>, eps: &SymplecticForm) -> PairingMatrix<R> {
    let mut out: [[Complex<R>; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| Complex::zero()));
    for (a, row) in out.iter_mut().enumerate() {
        for (d, slot) in row.iter_mut().enumerate() {
            for c in 0..2 {
                for e in 0..2 {
                    let s = eps.lower(a + 1, c + 1) * eps.lower(e + 1, d + 1);
                    if s != 0 {
                        *slot = slot.clone() + b.b[c][e].clone() * cint::<R>(s, 0);
                    }
                }
            }
        }
    }
    PairingMatrix::new(out)
}

/// ε_{ab} (lower) and ε^{ab} (upper) on the two-dimensional spin spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub eps_lower: [[i64; 2]; 2],
    pub eps_upper: [[i64; 2]; 2],
}

impl SymplecticForm {
    /// ε_{12} = ε^{12} = +1; contraction ε^{ab}ε_{cb} = δᵃ_c.
    pub fn ledger() -> Self {
        SymplecticForm { eps_lower: [[0, 1], [-1, 0]], eps_upper: [[0, 1], [-1, 0]] }
    }

    /// ε_{12} = +1 with ε^{ab} the matrix inverse, so ε^{12} = −1.
    pub fn matrix_inverse_upper() -> Self {
        SymplecticForm { eps_lower: [[0, 1], [-1, 0]], eps_upper: [[0, -1], [1, 0]] }
    }

    /// Lower-index entry for 1-based indices.
    pub fn lower(&self, a: usize, b: usize) -> i64 {
        self.eps_lower[a - 1][b - 1]
    }

    pub fn upper(&self, a: usize, b: usize) -> i64 {
        self.eps_upper[a - 1][b - 1]
    }

    pub fn is_antisymmetric(&self) -> bool {
        let anti = |m: &[[i64; 2]; 2]| m[0][0] == 0 && m[1][1] == 0 && m[0][1] == -m[1][0];
        anti(&self.eps_lower) && anti(&self.eps_upper)
    }

    /// ε^{ab}ε_{cb} summed over b, as a 2×2 matrix in (a, c).
    pub fn contraction(&self) -> [[i64; 2]; 2] {
        std::array::from_fn(|a| std::array::from_fn(|c| (0..2).map(|b| self.eps_upper[a][b] * self.eps_lower[c][b]).sum()))
    }

    pub fn to_json(&self) -> Value {
        json!({ "eps_lower": self.eps_lower, "eps_upper": self.eps_upper })
    }
}

pub type Mat2 = [[C64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

pub fn mat2_det(a: &Mat2) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat2_inv(a: &Mat2) -> Mat2 {
    let d = mat2_det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

pub fn mat2_dagger(a: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

pub fn mat2_transpose(a: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn mat2_conj(a: &Mat2) -> Mat2 {
    a.map(|r| r.map(|z| z.conj()))
}

pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    (0..2).flat_map(|i| (0..2).map(move |j| (a[i][j] - b[i][j]).norm())).fold(0.0, f64::max)
}

/// Element of SL(2,ℂ), numeric.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinElement {
    pub a: Mat2,
}

impl SpinElement {
    pub fn new(a: Mat2) -> Result<Self, GeometryError> {
        let d = mat2_det(&a);
        if (d - C64::one()).norm() > 1e-12 {
            return Err(GeometryError::NotUnimodular(d));
        }
        Ok(SpinElement { a })
    }

    pub fn identity() -> Self {
        SpinElement { a: [[C64::one(), C64::zero()], [C64::zero(), C64::one()]] }
    }

    /// Rescale an invertible matrix to determinant one.
    pub fn normalized(a: Mat2) -> Self {
        let s = mat2_det(&a).sqrt();
        SpinElement { a: a.map(|r| r.map(|z| z / s)) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        SpinElement { a: mat2_mul(&self.a, &o.a) }
    }

    pub fn inverse(&self) -> Self {
        SpinElement { a: mat2_inv(&self.a) }
    }

    /// Matrix X = h^{−T}: τᵃ ↦ Σ_b X_{ba} τᵇ.
    pub fn plus_matrix(&self) -> Mat2 {
        mat2_transpose(&mat2_inv(&self.a))
    }

    /// Matrix conj(X): τ̄ᵃ ↦ Σ_b conj(X_{ba}) τ̄ᵇ.
    pub fn minus_matrix(&self) -> Mat2 {
        mat2_conj(&self.plus_matrix())
    }

    /// h·p defined by B(h·p) = h B(p) h†.
    pub fn act_on_momentum(&self, p: &Momentum<f64>) -> Momentum<f64> {
        let b = gamma_pair(p).b;
        let hb = mat2_mul(&mat2_mul(&self.a, &b), &mat2_dagger(&self.a));
        momentum_from_pairing(&PairingMatrix::new(hb))
    }
}

/// Hermitian positive square root of a Hermitian positive 2×2 matrix.
pub fn hermitian_sqrt(m: &Mat2) -> Mat2 {
    let s = mat2_det(m).re.max(0.0).sqrt();
    let t = (m[0][0].re + m[1][1].re + 2.0 * s).sqrt();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { s } else { 0.0 };
            (m[i][j] + C64::new(id, 0.0)) / t
        })
    })
}

/// h_p with B(p) = h_p (m·Id) h_p†, the principal (Hermitian positive) choice.
pub fn rest_boost(p: &Momentum<f64>, m: f64, tol: f64) -> Result<SpinElement, GeometryError> {
    if m <= 0.0 {
        return Err(GeometryError::NonPositiveMass(m));
    }
    let residual = (p.norm2() - m * m).abs();
    let allowed = tol * m * m;
    if residual > allowed {
        return Err(GeometryError::OffOrbit { residual, allowed });
    }
    if p.p[0] <= 0.0 {
        return Err(GeometryError::NonPositiveEnergy(p.p[0]));
    }
    let b = gamma_pair(p).b.map(|r| r.map(|z| z / m));
    Ok(SpinElement::normalized(hermitian_sqrt(&b)))
}

/// Induced automorphism of W as an endomorphism.
pub fn spin_action_op(h: &SpinElement) -> EndoW<f64> {
    let x = h.plus_matrix();
    let y = h.minus_matrix();
    let images: [Multivector<f64>; 4] = [
        Multivector::term(Monomial::new(&[1], &[]), x[0][0]).add(&Multivector::term(Monomial::new(&[2], &[]), x[1][0])),
        Multivector::term(Monomial::new(&[1], &[]), x[0][1]).add(&Multivector::term(Monomial::new(&[2], &[]), x[1][1])),
        Multivector::term(Monomial::new(&[], &[1]), y[0][0]).add(&Multivector::term(Monomial::new(&[], &[2]), y[1][0])),
        Multivector::term(Monomial::new(&[], &[1]), y[0][1]).add(&Multivector::term(Monomial::new(&[], &[2]), y[1][1])),
    ];
    EndoW::from_linear(|m| {
        let mut out = Multivector::zero();
        for (k, c) in m.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut img = Multivector::scalar(*c);
            for (g, gi) in images.iter().enumerate() {
                if k & (1 << g) != 0 {
                    img = img.wedge(gi);
                }
            }
            out = out.add(&img);
        }
        out
    })
}

pub fn spin_action(h: &SpinElement, m: &Multivector<f64>) -> Multivector<f64> {
    spin_action_op(h).apply(m)
}

/// ζ(z₁, z₂) = (−i z̄₂, i z̄₁). Antilinear, and ζ∘ζ = −Id.
pub fn conj_zeta<R: Real>(z: [Complex<R>; 2]) -> [Complex<R>; 2] {
    let i = imag_unit::<R>();
    let [z1, z2] = z;
    [-(i.clone() * z2.conj()), i * z1.conj()]
}

/// Conjugation of S_ℂ* ≅ ℂ⁴: (z₁,z₂,z₃,z₄) ↦ (ζ(z₃,z₄), −ζ(z₁,z₂)).
///
/// Since ζ squares to −Id, one of the two blocks needs the extra sign for
/// c₁ to be an involution.
pub fn conj_c1<R: Real>(z: [Complex<R>; 4]) -> [Complex<R>; 4] {
    let [z1, z2, z3, z4] = z;
    let [a, b] = conj_zeta([z3, z4]);
    let [c, d] = conj_zeta([z1, z2]);
    [a, b, -c, -d]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum OrbitClass {
    MassivePlus,
    MassiveMinus,
    NullPlus,
    NullMinus,
    Zero,
    ImaginaryMass,
}

/// Classify by the sign of ‖p‖² and of p0, with a tolerance band around zero.
pub fn classify_orbit<R: Real>(p: &Momentum<R>, tol: f64) -> OrbitClass {
    let n = p.norm2().to_f64();
    let p0 = p.p[0].to_f64();
    let scale = p.p.iter().map(|x| x.to_f64() * x.to_f64()).sum::<f64>().max(1.0);
    let band = tol * scale;
    if p.p.iter().all(|x| x.to_f64().abs() <= tol) {
        return OrbitClass::Zero;
    }
    if n > band {
        if p0 > 0.0 {
            OrbitClass::MassivePlus
        } else {
            OrbitClass::MassiveMinus
        }
    } else if n < -band {
        OrbitClass::ImaginaryMass
    } else if p0 > 0.0 {
        OrbitClass::NullPlus
    } else {
        OrbitClass::NullMinus
    }
}

/// Dirac-space representation diag(h, (h†)⁻¹) as a 4×4 matrix.
pub fn dirac_rep(h: &SpinElement) -> [[C64; 4]; 4] {
    let hi = mat2_inv(&mat2_dagger(&h.a));
    let mut out = [[C64::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = h.a[i][j];
            out[i + 2][j + 2] = hi[i][j];
        }
    }
    out
}
