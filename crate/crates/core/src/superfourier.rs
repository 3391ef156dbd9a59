//! Superfunctions as finite plane-wave sums, the odd Fourier transform (Hodge
//! star), Berezin integration, the vector fields P, Q, Q̄, D, D̄, and the group
//! law over an auxiliary Grassmann algebra.
//!
//! Position-side coefficient vectors use the W indexing with θ¹, θ², θ̄¹, θ̄² in
//! place of τ¹, τ², τ̄¹, τ̄². Each mode is keyed by its effective momentum q,
//! standing for e^{i⟨q,x⟩} with ⟨q,x⟩ = q_μ x^μ.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_core::{build_d, build_dbar, compose_d2, compose_dbar2, ext_minus, ext_plus, Monomial, Multivector, PairingMatrix, DIM};
use crate::grassmann::{front_sign, Grassmann};
use crate::scalar::{cint, imag_unit, Real, C64, Q};
use crate::spin_geometry::{gamma_pair, gamma_table, json_rational, lowered_pairing, Momentum, SymplecticForm};

#[derive(Debug, Error, PartialEq)]
pub enum FourierError {
    #[error("expected a {expected:?}-side superfunction, got {found:?}")]
    SideMismatch { expected: Domain, found: Domain },
    #[error("coordinate {0} has the wrong parity")]
    GradeMismatch(String),
    #[error("malformed superfunction JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Position,
    Momentum,
}

fn momentum_of<R: Real>(q: &[R; 4]) -> Momentum<R> {
    Momentum { p: q.clone() }
}

/// Finite sum Σ a_q e^{i⟨q,x⟩}.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWaveFn<R: Real = Q> {
    terms: Vec<([R; 4], Complex<R>)>,
}

impl<R: Real> Default for PlaneWaveFn<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Real> PlaneWaveFn<R> {
    pub fn zero() -> Self {
        PlaneWaveFn { terms: Vec::new() }
    }

    pub fn wave(q: [R; 4], amp: Complex<R>) -> Self {
        let mut f = Self::zero();
        f.add_term(q, amp);
        f
    }

    /// a·e^{sign·i⟨p,x⟩}.
    pub fn signed_wave(p: &Momentum<R>, sign: i8, amp: Complex<R>) -> Self {
        let q = if sign >= 0 { p.p.clone() } else { p.neg().p };
        Self::wave(q, amp)
    }

    pub fn terms(&self) -> &[([R; 4], Complex<R>)] {
        &self.terms
    }

    pub fn add_term(&mut self, q: [R; 4], amp: Complex<R>) {
        if amp.is_zero() {
            return;
        }
        if let Some(i) = self.terms.iter().position(|(k, _)| *k == q) {
            let v = self.terms[i].1.clone() + amp;
            if v.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].1 = v;
            }
        } else {
            self.terms.push((q, amp));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (q, a) in &o.terms {
            out.add_term(q.clone(), a.clone());
        }
        out
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        let mut out = Self::zero();
        for (q, a) in &self.terms {
            out.add_term(q.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn amplitude(&self, q: &[R; 4]) -> Complex<R> {
        self.terms.iter().find(|(k, _)| k == q).map_or_else(Complex::zero, |(_, a)| a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// ∂_μ: multiply each term by i q_μ.
    pub fn partial(&self, mu: usize) -> Self {
        let mut out = Self::zero();
        for (q, a) in &self.terms {
            out.add_term(q.clone(), a.clone() * Complex::new(R::zero(), q[mu].clone()));
        }
        out
    }

    /// □ = ∂₀² − ∂₁² − ∂₂² − ∂₃², i.e. multiplication by −‖q‖².
    pub fn box_op(&self) -> Self {
        let mut out = Self::zero();
        for (q, a) in &self.terms {
            out.add_term(q.clone(), a.clone() * Complex::new(-momentum_of(q).norm2(), R::zero()));
        }
        out
    }

    /// Pointwise complex conjugate: a e^{iqx} ↦ ā e^{−iqx}.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (q, a) in &self.terms {
            out.add_term(q.clone().map(|x| -x), a.conj());
        }
        out
    }

    pub fn eval(&self, x: &[f64; 4]) -> C64 {
        self.terms
            .iter()
            .map(|(q, a)| {
                let phase: f64 = (0..4).map(|i| q[i].to_f64() * x[i]).sum();
                crate::scalar::to_c64(a) * C64::from_polar(1.0, phase)
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, a)| crate::scalar::to_c64(a).norm()).fold(0.0, f64::max)
    }

    /// Largest amplitude of `self − o`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.add(&o.scale(&-Complex::one())).max_abs()
    }

    pub fn to_f64(&self) -> PlaneWaveFn<f64> {
        let mut out = PlaneWaveFn::zero();
        for (q, a) in &self.terms {
            out.add_term(std::array::from_fn(|i| q[i].to_f64()), crate::scalar::to_c64(a));
        }
        out
    }
}

/// 16 component functions, stored mode by mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperFunction<R: Real = Q> {
    pub domain: Domain,
    modes: Vec<([R; 4], Multivector<R>)>,
}

impl<R: Real> SuperFunction<R> {
    pub fn zero(domain: Domain) -> Self {
        SuperFunction { domain, modes: Vec::new() }
    }

    pub fn single(domain: Domain, q: [R; 4], v: Multivector<R>) -> Self {
        let mut f = Self::zero(domain);
        f.add_mode(q, v);
        f
    }

    pub fn modes(&self) -> &[([R; 4], Multivector<R>)] {
        &self.modes
    }

    pub fn add_mode(&mut self, q: [R; 4], v: Multivector<R>) {
        if let Some(i) = self.modes.iter().position(|(k, _)| *k == q) {
            let s = self.modes[i].1.add(&v);
            if s.is_zero() {
                self.modes.remove(i);
            } else {
                self.modes[i].1 = s;
            }
        } else if !v.is_zero() {
            self.modes.push((q, v));
        }
    }

    pub fn mode(&self, q: &[R; 4]) -> Multivector<R> {
        self.modes.iter().find(|(k, _)| k == q).map_or_else(Multivector::zero, |(_, v)| v.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (q, v) in &o.modes {
            out.add_mode(q.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Complex::one()))
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        self.map_modes(|_, v| v.scale(c))
    }

    /// Apply a mode-dependent linear map to every coefficient vector.
    pub fn map_modes(&self, f: impl Fn(&[R; 4], &Multivector<R>) -> Multivector<R>) -> Self {
        let mut out = Self::zero(self.domain);
        for (q, v) in &self.modes {
            out.add_mode(q.clone(), f(q, v));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn component(&self, m: Monomial) -> PlaneWaveFn<R> {
        let mut out = PlaneWaveFn::zero();
        for (q, v) in &self.modes {
            out.add_term(q.clone(), v.get(m).clone());
        }
        out
    }

    pub fn components(&self) -> BTreeMap<Monomial, PlaneWaveFn<R>> {
        Monomial::all().map(|m| (m, self.component(m))).filter(|(_, f)| !f.is_zero()).collect()
    }

    pub fn from_components(domain: Domain, comps: &BTreeMap<Monomial, PlaneWaveFn<R>>) -> Self {
        let mut out = Self::zero(domain);
        for (m, f) in comps {
            for (q, a) in f.terms() {
                out.add_mode(q.clone(), Multivector::term(*m, a.clone()));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.modes.iter().flat_map(|(_, v)| v.coeffs.iter().map(crate::scalar::Field::magnitude)).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut d = self.clone();
        d.domain = o.domain;
        d.sub(o).max_abs()
    }

    fn expect(&self, d: Domain) -> Result<(), FourierError> {
        if self.domain == d {
            Ok(())
        } else {
            Err(FourierError::SideMismatch { expected: d, found: self.domain })
        }
    }

    pub fn to_f64(&self) -> SuperFunction<f64> {
        let mut out = SuperFunction::zero(self.domain);
        for (q, v) in &self.modes {
            out.add_mode(std::array::from_fn(|i| q[i].to_f64()), v.to_f64());
        }
        out
    }
}

impl SuperFunction<Q> {
    /// `{"side": ..., "components": {"<I>|<J>": [[re, im, p0, p1, p2, p3, sign], ...]}}`.
    pub fn to_json(&self) -> Value {
        let mut comps = serde_json::Map::new();
        for (m, f) in self.components() {
            let terms: Vec<Value> = f
                .terms()
                .iter()
                .map(|(q, a)| json!([a.re.to_string(), a.im.to_string(), q[0].to_string(), q[1].to_string(), q[2].to_string(), q[3].to_string(), 1]))
                .collect();
            comps.insert(m.label(), Value::Array(terms));
        }
        json!({
            "side": match self.domain { Domain::Position => "position", Domain::Momentum => "momentum" },
            "components": Value::Object(comps),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FourierError> {
        let err = |s: String| FourierError::Json(s);
        let domain = match v.get("side").and_then(Value::as_str) {
            Some("position") => Domain::Position,
            Some("momentum") => Domain::Momentum,
            other => return Err(err(format!("bad side {other:?}"))),
        };
        let comps = v.get("components").and_then(Value::as_object).ok_or_else(|| err("missing components".into()))?;
        let mut out = Self::zero(domain);
        for (label, terms) in comps {
            let m = Monomial::parse_label(label).ok_or_else(|| err(format!("bad monomial label {label:?}")))?;
            for t in terms.as_array().ok_or_else(|| err(format!("component {label} is not an array")))? {
                let t = t.as_array().filter(|t| t.len() == 7).ok_or_else(|| err(format!("term {t} needs 7 entries")))?;
                let r: Vec<Q> = t[..6].iter().map(json_rational).collect::<Result<_, _>>().map_err(err)?;
                let sign = t[6].as_i64().filter(|s| *s == 1 || *s == -1).ok_or_else(|| err("sign must be 1 or -1".into()))?;
                let p = Momentum::new(r[2].clone(), r[3].clone(), r[4].clone(), r[5].clone());
                let q = if sign > 0 { p.p } else { p.neg().p };
                out.add_mode(q, Multivector::term(m, Complex::new(r[0].clone(), r[1].clone())));
            }
        }
        Ok(out)
    }
}

fn theta_deriv<R: Real>(gen: u32, v: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for (k, c) in v.coeffs.iter().enumerate() {
        let k = k as u32;
        if c.is_zero() || k & (1 << gen) == 0 {
            continue;
        }
        let x = c.clone();
        out.coeffs[(k & !(1 << gen)) as usize] = if front_sign(k, gen) > 0 { x } else { -x };
    }
    out
}

/// Left derivative ∂/∂θᵃ on a coefficient vector.
pub fn d_theta<R: Real>(a: usize, v: &Multivector<R>) -> Multivector<R> {
    theta_deriv((a - 1) as u32, v)
}

/// Left derivative ∂/∂θ̄ᵃ.
pub fn d_thetabar<R: Real>(a: usize, v: &Multivector<R>) -> Multivector<R> {
    theta_deriv((a + 1) as u32, v)
}

/// Left multiplication by θᵃ.
pub fn mul_theta<R: Real>(a: usize, v: &Multivector<R>) -> Multivector<R> {
    ext_plus(a, v)
}

/// Left multiplication by θ̄ᵃ.
pub fn mul_thetabar<R: Real>(a: usize, v: &Multivector<R>) -> Multivector<R> {
    ext_minus(a, v)
}

/// Γ^μ_{ab} q_μ with both indices lowered by ε.
pub fn lowered_gamma<R: Real>(q: &[R; 4]) -> PairingMatrix<R> {
    lowered_pairing(&gamma_pair(&momentum_of(q)), &SymplecticForm::ledger())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    D,
    Q,
}

fn chiral_field<R: Real>(kind: Kind, bar: bool, a: usize, q: &[R; 4], v: &Multivector<R>) -> Multivector<R> {
    let g = lowered_gamma(q);
    let sign: Complex<R> = if kind == Kind::D { Complex::one() } else { -Complex::one() };
    let mut out = if bar { d_thetabar(a, v) } else { d_theta(a, v) };
    for c in 1..=2 {
        let (coef, moved) = if bar {
            (g.at(c, a).clone(), mul_theta(c, v))
        } else {
            (g.at(a, c).clone(), mul_thetabar(c, v))
        };
        if !coef.is_zero() {
            out = out.add(&moved.scale(&(coef * sign.clone())));
        }
    }
    out
}

fn on_position<R: Real>(f: &SuperFunction<R>, op: impl Fn(&[R; 4], &Multivector<R>) -> Multivector<R>) -> Result<SuperFunction<R>, FourierError> {
    f.expect(Domain::Position)?;
    Ok(f.map_modes(op))
}

/// P_μ = −i∂_μ.
pub fn apply_p<R: Real>(mu: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| v.scale(&Complex::new(q[mu].clone(), R::zero())))
}

/// ∂_μ.
pub fn apply_partial<R: Real>(mu: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| v.scale(&Complex::new(R::zero(), q[mu].clone())))
}

/// D_a = ∂/∂θᵃ − iΓ^μ_{ab} θ̄ᵇ ∂_μ.
pub fn apply_d<R: Real>(a: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| chiral_field(Kind::D, false, a, q, v))
}

/// D̄_b = ∂/∂θ̄ᵇ − iΓ^μ_{ab} θᵃ ∂_μ.
pub fn apply_dbar<R: Real>(b: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| chiral_field(Kind::D, true, b, q, v))
}

/// Q_a = ∂/∂θᵃ + iΓ^μ_{ab} θ̄ᵇ ∂_μ.
pub fn apply_q<R: Real>(a: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| chiral_field(Kind::Q, false, a, q, v))
}

/// Q̄_b = ∂/∂θ̄ᵇ + iΓ^μ_{ab} θᵃ ∂_μ.
pub fn apply_qbar<R: Real>(b: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    on_position(f, |q, v| chiral_field(Kind::Q, true, b, q, v))
}

fn eps_square<R: Real>(
    f: &SuperFunction<R>,
    op: impl Fn(usize, &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError>,
) -> Result<SuperFunction<R>, FourierError> {
    let eps = SymplecticForm::ledger();
    let mut out = SuperFunction::zero(f.domain);
    for a in 1..=2 {
        for b in 1..=2 {
            let e = eps.upper(a, b);
            if e != 0 {
                out = out.add(&op(a, &op(b, f)?)?.scale(&cint(e, 0)));
            }
        }
    }
    Ok(out)
}

/// D² = ε^{ab} D_a D_b.
pub fn apply_d2<R: Real>(f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    eps_square(f, apply_d)
}

/// D̄² = ε^{ab} D̄_a D̄_b.
pub fn apply_dbar2<R: Real>(f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    eps_square(f, apply_dbar)
}

/// ⋆ on coefficient vectors: read off ∫ e^{−i(ε₊(τ,θ)+ε₋(τ̄,θ̄))} f dθ dθ̄,
/// with ε₊(τ,θ) = τ¹θ² − τ²θ¹ and ∫θ¹θ²θ̄¹θ̄² dθdθ̄ = 1.
pub fn hodge_star<R: Real>(v: &Multivector<R>) -> Multivector<R> {
    // τ generators at bits 0..4, θ generators at bits 4..8
    let kernel = fourier_kernel::<R>();
    let mut f = Grassmann::zero();
    for (k, c) in v.coeffs.iter().enumerate() {
        f.add_term((k as u32) << 4, c.clone());
    }
    let prod = kernel.mul(&f);
    let mut out = Multivector::zero();
    for k in 0..DIM {
        out.coeffs[k] = prod.coeff(k as u32 | 0xF0);
    }
    out
}

fn fourier_kernel<R: Real>() -> Grassmann<Complex<R>> {
    let g = |i: u32| Grassmann::<Complex<R>>::generator(i);
    let minus_i = -imag_unit::<R>();
    // ε₊(τ,θ) = τ¹θ² − τ²θ¹ ; ε₋(τ̄,θ̄) = τ̄¹θ̄² − τ̄²θ̄¹
    let eps_plus = g(0).mul(&g(5)).sub(&g(1).mul(&g(4)));
    let eps_minus = g(2).mul(&g(7)).sub(&g(3).mul(&g(6)));
    exp_nilpotent(&eps_plus.scale(&minus_i)).mul(&exp_nilpotent(&eps_minus.scale(&minus_i)))
}

/// exp of an even nilpotent element by its finite series.
fn exp_nilpotent<R: Real>(x: &Grassmann<Complex<R>>) -> Grassmann<Complex<R>> {
    let mut out = Grassmann::scalar(Complex::one());
    let mut term = Grassmann::scalar(Complex::one());
    for k in 1..=8 {
        term = term.mul(x).scale(&Complex::new(R::one() / R::from_i64(k), R::zero()));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// Componentwise super Fourier expression: for each source monomial of f̂, the
/// target monomial of ⋆f̂ and its factor as (re, im).
pub const SUPER_FT_EXPRESSION: [((&str, &str), (&str, &str), (i64, i64)); 16] = [
    (("", ""), ("12", "12"), (1, 0)),
    (("1", ""), ("1", "12"), (0, 1)),
    (("2", ""), ("2", "12"), (0, 1)),
    (("", "1"), ("12", "1"), (0, 1)),
    (("", "2"), ("12", "2"), (0, 1)),
    (("12", ""), ("", "12"), (1, 0)),
    (("", "12"), ("12", ""), (1, 0)),
    (("1", "1"), ("1", "1"), (-1, 0)),
    (("1", "2"), ("1", "2"), (-1, 0)),
    (("2", "1"), ("2", "1"), (-1, 0)),
    (("2", "2"), ("2", "2"), (-1, 0)),
    (("12", "1"), ("", "1"), (0, 1)),
    (("12", "2"), ("", "2"), (0, 1)),
    (("1", "12"), ("1", ""), (0, 1)),
    (("2", "12"), ("2", ""), (0, 1)),
    (("12", "12"), ("", ""), (1, 0)),
];

/// ⋆ applied through [`SUPER_FT_EXPRESSION`] rather than the exponential kernel.
pub fn super_ft_expression<R: Real>(v: &Multivector<R>) -> Multivector<R> {
    let mono = |(a, b): (&str, &str)| Monomial::parse_label(&format!("{a}|{b}")).expect("table label");
    let mut out = Multivector::zero();
    for (src, dst, (re, im)) in SUPER_FT_EXPRESSION {
        out.set(mono(dst), v.get(mono(src)).clone() * cint::<R>(re, im));
    }
    out
}

/// Inverse of [`hodge_star`]. Each basis monomial maps to a unit multiple of a
/// single basis monomial, so the inverse is read off directly.
pub fn hodge_star_inv<R: Real>(w: &Multivector<R>) -> Multivector<R> {
    let mut out = Multivector::zero();
    for m in Monomial::all() {
        let img = hodge_star(&Multivector::<R>::basis(m));
        let Some(target) = Monomial::all().find(|t| !img.get(*t).is_zero()) else { continue };
        let c = w.get(target);
        if !c.is_zero() {
            out.set(m, c.clone() / img.get(target).clone());
        }
    }
    out
}

/// Super Fourier transform: each mode e^{i⟨q,x⟩}v goes to the momentum-side delta at q carrying ⋆v.
pub fn super_ft<R: Real>(f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    f.expect(Domain::Position)?;
    let mut out = f.map_modes(|_, v| hodge_star(v));
    out.domain = Domain::Momentum;
    Ok(out)
}

pub fn inverse_super_ft<R: Real>(f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    f.expect(Domain::Momentum)?;
    let mut out = f.map_modes(|_, v| hodge_star_inv(v));
    out.domain = Domain::Position;
    Ok(out)
}

/// Top component, ∫ · dθ dθ̄ with ∫θ¹θ²θ̄¹θ̄² = 1.
pub fn berezin_integral<R: Real>(f: &SuperFunction<R>) -> PlaneWaveFn<R> {
    f.component(Monomial::TOP)
}

/// θ = θ̄ = 0 restriction.
pub fn body_restriction<R: Real>(f: &SuperFunction<R>) -> PlaneWaveFn<R> {
    f.component(Monomial::ONE)
}

/// Discrepancies of the four exchange identities on every mode of `f`
/// (`[∂_θ, θ·, ∂_θ̄, θ̄·]`, max over a = 1, 2).
pub fn exchange_check<R: Real>(f: &SuperFunction<R>) -> Result<[f64; 4], FourierError> {
    f.expect(Domain::Position)?;
    let eps = SymplecticForm::ledger();
    let i = imag_unit::<R>();
    let mut worst = [0.0f64; 4];
    for (_, v) in f.modes() {
        let sv = hodge_star(v);
        for a in 1..=2 {
            let mut rhs = [Multivector::zero(), Multivector::zero(), Multivector::zero(), Multivector::zero()];
            for b in 1..=2 {
                let lo = cint::<R>(eps.lower(a, b), 0);
                let up = cint::<R>(eps.upper(a, b), 0);
                rhs[0] = rhs[0].add(&ext_plus(b, &sv).scale(&(i.clone() * lo.clone())));
                rhs[1] = rhs[1].add(&d_theta(b, &sv).scale(&(-i.clone() * up.clone())));
                rhs[2] = rhs[2].add(&ext_minus(b, &sv).scale(&(i.clone() * lo)));
                rhs[3] = rhs[3].add(&d_thetabar(b, &sv).scale(&(-i.clone() * up)));
            }
            let lhs = [
                hodge_star(&d_theta(a, v)),
                hodge_star(&mul_theta(a, v)),
                hodge_star(&d_thetabar(a, v)),
                hodge_star(&mul_thetabar(a, v)),
            ];
            for k in 0..4 {
                worst[k] = worst[k].max(lhs[k].max_abs_diff(&rhs[k]));
            }
        }
    }
    Ok(worst)
}

/// Discrepancies of ⋆(D_a f)^ = iε_{ab}ζ_{d_b}⋆f̂, ⋆(D̄_a f)^ = iε_{ab}ζ_{d̄_b}⋆f̂,
/// ⋆(D²f)^ = −ζ_{d²}⋆f̂ and ⋆(D̄²f)^ = −ζ_{d̄²}⋆f̂, with ζ evaluated at each mode's momentum.
pub fn intertwining_check<R: Real>(f: &SuperFunction<R>) -> Result<[f64; 4], FourierError> {
    f.expect(Domain::Position)?;
    let eps = SymplecticForm::ledger();
    let i = imag_unit::<R>();
    let ft = super_ft(f)?;
    let images = [
        [super_ft(&apply_d(1, f)?)?, super_ft(&apply_d(2, f)?)?],
        [super_ft(&apply_dbar(1, f)?)?, super_ft(&apply_dbar(2, f)?)?],
    ];
    let squares = [super_ft(&apply_d2(f)?)?, super_ft(&apply_dbar2(f)?)?];
    let mut worst = [0.0f64; 4];
    for (q, sv) in ft.modes() {
        let b = gamma_pair(&momentum_of(q));
        for (k, bar) in [false, true].into_iter().enumerate() {
            for a in 1..=2 {
                let mut rhs = Multivector::zero();
                for c in 1..=2 {
                    let e = eps.lower(a, c);
                    if e != 0 {
                        let z = if bar { build_dbar(c, &b) } else { build_d(c, &b) };
                        rhs = rhs.add(&z.apply(sv).scale(&(i.clone() * cint(e, 0))));
                    }
                }
                worst[k] = worst[k].max(images[k][a - 1].mode(q).max_abs_diff(&rhs));
            }
            let z2 = if bar { compose_dbar2(&b, &eps) } else { compose_d2(&b, &eps) };
            worst[k + 2] = worst[k + 2].max(squares[k].mode(q).max_abs_diff(&z2.apply(sv).scale(&cint(-1, 0))));
        }
    }
    Ok(worst)
}

/// Names of the eight odd vector fields, in the order used by [`bracket_table`].
pub const ODD_FIELDS: [&str; 8] = ["D1", "D2", "Dbar1", "Dbar2", "Q1", "Q2", "Qbar1", "Qbar2"];

fn odd_field<R: Real>(k: usize, f: &SuperFunction<R>) -> Result<SuperFunction<R>, FourierError> {
    let a = k % 2 + 1;
    match k / 2 {
        0 => apply_d(a, f),
        1 => apply_dbar(a, f),
        2 => apply_q(a, f),
        _ => apply_qbar(a, f),
    }
}

/// Expected anticommutator: {D_a, D̄_b} = 2Γ_{ab}·P, {Q_a, Q̄_b} = −2Γ_{ab}·P (lowered Γ, P = −i∂), all others zero.
fn expected_bracket<R: Real>(x: usize, y: usize, f: &SuperFunction<R>) -> SuperFunction<R> {
    let (lo, hi) = (x.min(y), x.max(y));
    let factor = match (lo / 2, hi / 2) {
        (0, 1) => 2,
        (2, 3) => -2,
        _ => return SuperFunction::zero(f.domain),
    };
    let (a, b) = (lo % 2 + 1, hi % 2 + 1);
    f.map_modes(|q, v| v.scale(&(lowered_gamma(q).at(a, b).clone() * cint::<R>(factor, 0))))
}

/// Discrepancy of every graded bracket {X, Y} among [`ODD_FIELDS`] on `f`, for x ≤ y.
pub fn bracket_table<R: Real>(f: &SuperFunction<R>) -> Result<Vec<(String, f64)>, FourierError> {
    let mut out = Vec::new();
    for x in 0..8 {
        for y in x..8 {
            let lhs = odd_field(x, &odd_field(y, f)?)?.add(&odd_field(y, &odd_field(x, f)?)?);
            let err = lhs.max_abs_diff(&expected_bracket(x, y, f));
            out.push((format!("{}.{}", ODD_FIELDS[x], ODD_FIELDS[y]), err));
        }
    }
    Ok(out)
}

/// Point of superspacetime with coordinates in an auxiliary Grassmann algebra:
/// v^μ even, sᵃ and tᵃ odd.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperPoint<R: Real = Q> {
    pub v: [Grassmann<Complex<R>>; 4],
    pub s: [Grassmann<Complex<R>>; 2],
    pub t: [Grassmann<Complex<R>>; 2],
}

impl<R: Real> SuperPoint<R> {
    pub fn zero() -> Self {
        SuperPoint { v: std::array::from_fn(|_| Grassmann::zero()), s: std::array::from_fn(|_| Grassmann::zero()), t: std::array::from_fn(|_| Grassmann::zero()) }
    }

    pub fn check_grades(&self) -> Result<(), FourierError> {
        for (mu, x) in self.v.iter().enumerate() {
            if *x != x.parity_part(true) {
                return Err(FourierError::GradeMismatch(format!("v^{mu}")));
            }
        }
        for (name, arr) in [("s", &self.s), ("t", &self.t)] {
            for (a, x) in arr.iter().enumerate() {
                if *x != x.parity_part(false) {
                    return Err(FourierError::GradeMismatch(format!("{name}^{}", a + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        let m1 = -Complex::<R>::one();
        SuperPoint { v: self.v.clone().map(|x| x.scale(&m1)), s: self.s.clone().map(|x| x.scale(&m1)), t: self.t.clone().map(|x| x.scale(&m1)) }
    }
}

/// (v, s, t)∗(v′, s′, t′) = (v + v′ + iΓ^μ_{ab}(sᵃt′ᵇ − s′ᵃtᵇ), s + s′, t + t′).
pub fn group_law<R: Real>(u: &SuperPoint<R>, w: &SuperPoint<R>) -> Result<SuperPoint<R>, FourierError> {
    u.check_grades()?;
    w.check_grades()?;
    let gamma = gamma_table::<R>();
    let i = imag_unit::<R>();
    let v = std::array::from_fn(|mu| {
        let mut acc = u.v[mu].add(&w.v[mu]);
        for a in 0..2 {
            for b in 0..2 {
                let g = &gamma[mu][a][b];
                if g.is_zero() {
                    continue;
                }
                let shift = u.s[a].mul(&w.t[b]).sub(&w.s[a].mul(&u.t[b]));
                acc = acc.add(&shift.scale(&(i.clone() * g.clone())));
            }
        }
        acc
    });
    Ok(SuperPoint { v, s: std::array::from_fn(|a| u.s[a].add(&w.s[a])), t: std::array::from_fn(|a| u.t[a].add(&w.t[a])) })
}
