//! Chiral superfields in components, conjugation, the Wess-Zumino operator
//! −κD̄²f̄ + mf, its reduction to component equations, on-shell solutions,
//! finite-difference residuals, and the check over auxiliary Grassmann
//! coefficients.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_core::{conjugate_w, Monomial, Multivector, PairingMatrix};
use crate::grassmann::Grassmann;
use crate::linalg::{null_space, span_rank, Mat};
use crate::scalar::{cint, creal, imag_unit, Real, C64, Q};
use crate::spin_geometry::{gamma_table, spin_action_op, GeometryError, Momentum, SpinElement, SymplecticForm};
use crate::superfourier::{
    apply_dbar, apply_dbar2, lowered_gamma, mul_theta, Domain, FourierError, PlaneWaveFn, SuperFunction,
};
use crate::symbols::d2_normalization;

#[derive(Debug, Error, PartialEq)]
pub enum ComponentError {
    #[error("superfunction is not chiral (D̄ residual {0:e})")]
    NotChiral(f64),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("grid needs at least 5 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("auxiliary generator count {0} exceeds 6")]
    TooManyGenerators(usize),
    #[error("mass must be positive")]
    NonPositiveMass,
}

/// Components (φ, ψ₁, ψ₂, F) of a chiral superfield.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralData<R: Real = Q> {
    pub phi: PlaneWaveFn<R>,
    pub psi: [PlaneWaveFn<R>; 2],
    pub f: PlaneWaveFn<R>,
}

impl<R: Real> ChiralData<R> {
    pub fn zero() -> Self {
        ChiralData { phi: PlaneWaveFn::zero(), psi: [PlaneWaveFn::zero(), PlaneWaveFn::zero()], f: PlaneWaveFn::zero() }
    }

    pub fn to_f64(&self) -> ChiralData<f64> {
        ChiralData { phi: self.phi.to_f64(), psi: [self.psi[0].to_f64(), self.psi[1].to_f64()], f: self.f.to_f64() }
    }

    fn modes(&self) -> Vec<[R; 4]> {
        let mut out: Vec<[R; 4]> = Vec::new();
        for f in [&self.phi, &self.psi[0], &self.psi[1], &self.f] {
            for (q, _) in f.terms() {
                if !out.contains(q) {
                    out.push(q.clone());
                }
            }
        }
        out
    }
}

impl ChiralData<f64> {
    pub fn to_json(&self) -> Value {
        let pw = |f: &PlaneWaveFn<f64>| -> Value {
            Value::Array(f.terms().iter().map(|(q, a)| json!({"amplitude": [a.re, a.im], "momentum": q})).collect())
        };
        json!({ "phi": pw(&self.phi), "psi1": pw(&self.psi[0]), "psi2": pw(&self.psi[1]), "F": pw(&self.f) })
    }
}

/// Γ^μ_{ab}θᵃθ̄ᵇ q_μ with lowered indices, as an even θ-element.
fn chiral_shift<R: Real>(q: &[R; 4]) -> Multivector<R> {
    let g = lowered_gamma(q);
    let mut v = Multivector::zero();
    for a in 1..=2 {
        for b in 1..=2 {
            v.set(Monomial::new(&[a], &[b]), g.at(a, b).clone());
        }
    }
    v
}

/// exp(V) for even nilpotent V.
fn exp_even<R: Real>(v: &Multivector<R>) -> Multivector<R> {
    let half = creal(R::one() / R::from_i64(2));
    Multivector::scalar(Complex::one()).add(v).add(&v.wedge(v).scale(&half))
}

/// f = exp(−iΓ^μ_{ab}θᵃθ̄ᵇ∂_μ)(φ + θᵃψ_a + θ¹θ²F), mode by mode. Expanded:
/// φ + θᵃψ_a + θ¹θ²F + (Γθθ̄)φ + (Γθθ̄)θᶜψ_c + θ¹θ²θ̄¹θ̄²□φ, with ∂_μ ↦ iq_μ.
pub fn chiral_expand<R: Real>(c: &ChiralData<R>) -> SuperFunction<R> {
    let mut out = SuperFunction::zero(Domain::Position);
    for q in c.modes() {
        let mut g = Multivector::scalar(c.phi.amplitude(&q));
        for a in 1..=2 {
            g = g.add(&mul_theta(a, &Multivector::scalar(c.psi[a - 1].amplitude(&q))));
        }
        g.set(Monomial::new(&[1, 2], &[]), c.f.amplitude(&q));
        out.add_mode(q.clone(), exp_even(&chiral_shift(&q)).wedge(&g));
    }
    out
}

/// Order-reversing antilinear involution θᵃ ↔ θ̄ᵃ, together with e^{i⟨q,x⟩} ↦ e^{−i⟨q,x⟩}.
pub fn conjugate_sf<R: Real>(f: &SuperFunction<R>) -> SuperFunction<R> {
    let mut out = SuperFunction::zero(f.domain);
    for (q, v) in f.modes() {
        out.add_mode(q.clone().map(|x| -x), conjugate_w(v));
    }
    out
}

/// max over modes of the D̄₁, D̄₂ images.
pub fn chirality_residual<R: Real>(f: &SuperFunction<R>) -> Result<f64, ComponentError> {
    Ok(apply_dbar(1, f)?.max_abs().max(apply_dbar(2, f)?.max_abs()))
}

fn require_chiral<R: Real>(f: &SuperFunction<R>) -> Result<(), ComponentError> {
    let r = chirality_residual(f)?;
    let ok = if R::EXACT { r == 0.0 } else { r <= 1e-9 * (1.0 + f.max_abs()) };
    if ok {
        Ok(())
    } else {
        Err(ComponentError::NotChiral(r))
    }
}

/// −κD̄²f̄ + mf with κ = ¼.
pub fn wz_operator<R: Real>(f: &SuperFunction<R>, m: &R) -> Result<SuperFunction<R>, ComponentError> {
    require_chiral(f)?;
    Ok(wz_unchecked(f, m)?)
}

fn wz_unchecked<R: Real>(f: &SuperFunction<R>, m: &R) -> Result<SuperFunction<R>, FourierError> {
    let kappa = creal(R::from_frac(1, 4));
    debug_assert_eq!(d2_normalization(), crate::scalar::qf(1, 4));
    Ok(apply_dbar2(&conjugate_sf(f))?.scale(&-kappa).add(&f.scale(&creal(m.clone()))))
}

/// Read (φ, ψ, F) off the θ⁰, θᵃ and θ¹θ² components.
pub fn extract_chiral<R: Real>(f: &SuperFunction<R>) -> ChiralData<R> {
    ChiralData {
        phi: f.component(Monomial::ONE),
        psi: [f.component(Monomial::new(&[1], &[])), f.component(Monomial::new(&[2], &[]))],
        f: f.component(Monomial::new(&[1, 2], &[])),
    }
}

/// Residuals of the component system
/// (□ + m²)φ = 0, mψ_a + iΓ^μ_{ab}∂_μψ̄ᵇ = 0, F = 2mφ̄,
/// with ψ̄_a the pointwise conjugate of ψ_a and ψ̄ᵇ = ε^{bc}ψ̄_c.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentResiduals<R: Real = Q> {
    pub kg_residual: PlaneWaveFn<R>,
    pub dirac_residual: [PlaneWaveFn<R>; 2],
    pub f_relation: PlaneWaveFn<R>,
}

impl<R: Real> ComponentResiduals<R> {
    pub fn max_abs(&self) -> f64 {
        [&self.kg_residual, &self.dirac_residual[0], &self.dirac_residual[1], &self.f_relation]
            .iter()
            .map(|f| f.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn all_zero(&self) -> bool {
        self.kg_residual.is_zero() && self.dirac_residual.iter().all(PlaneWaveFn::is_zero) && self.f_relation.is_zero()
    }
}

pub fn component_residuals<R: Real>(c: &ChiralData<R>, m: &R) -> ComponentResiduals<R> {
    let mc = creal(m.clone());
    let kg_residual = c.phi.box_op().add(&c.phi.scale(&creal(m.clone() * m.clone())));
    let eps = SymplecticForm::ledger();
    let psibar_low = [c.psi[0].conj(), c.psi[1].conj()];
    let psibar_up: [PlaneWaveFn<R>; 2] = std::array::from_fn(|b| {
        let mut acc = PlaneWaveFn::zero();
        for cc in 0..2 {
            let e = eps.upper(b + 1, cc + 1);
            if e != 0 {
                acc = acc.add(&psibar_low[cc].scale(&cint(e, 0)));
            }
        }
        acc
    });
    let dirac_residual = std::array::from_fn(|a| {
        let mut acc = c.psi[a].scale(&mc);
        for (b, pb) in psibar_up.iter().enumerate() {
            // iΓ^μ_{ab}∂_μ on a mode q is −Γ_{ab}(q) with lowered Γ
            let mut term = PlaneWaveFn::zero();
            for (q, amp) in pb.terms() {
                term.add_term(q.clone(), amp.clone() * -lowered_gamma(q).at(a + 1, b + 1).clone());
            }
            acc = acc.add(&term);
        }
        acc
    });
    let f_relation = c.f.add(&c.phi.conj().scale(&(mc * cint(-2, 0))));
    ComponentResiduals { kg_residual, dirac_residual, f_relation }
}

/// Extract the components of a chiral `f` and evaluate the component system.
pub fn component_reduce<R: Real>(f: &SuperFunction<R>, m: &R) -> Result<ComponentResiduals<R>, ComponentError> {
    require_chiral(f)?;
    Ok(component_residuals(&extract_chiral(f), m))
}

/// Seeds for [`solution_generator`]; `b` defaults to ā (real φ).
#[derive(Clone, Debug, PartialEq)]
pub struct Seeds<R: Real = f64> {
    pub a: Complex<R>,
    pub b: Option<Complex<R>>,
    pub u: [Complex<R>; 2],
}

/// Two-frequency on-shell solution at p:
/// φ = a e^{i⟨p,x⟩} + b e^{−i⟨p,x⟩}, F = 2mφ̄, ψ = u e^{i⟨p,x⟩} + v e^{−i⟨p,x⟩}
/// with v_a = −(1/m) Γ_{ab}(p) ε^{bc} ū_c.
pub fn solution_generator<R: Real>(p: &Momentum<R>, m: &R, seeds: &Seeds<R>, tol: f64) -> Result<ChiralData<R>, ComponentError> {
    if *m <= R::zero() {
        return Err(ComponentError::NonPositiveMass);
    }
    let n2 = p.norm2();
    let m2 = m.clone() * m.clone();
    let residual = (n2 - m2.clone()).to_f64().abs();
    let allowed = if R::EXACT { 0.0 } else { tol * m2.to_f64() };
    if residual > allowed {
        return Err(GeometryError::OffOrbit { residual, allowed }.into());
    }
    if p.p[0] <= R::zero() {
        return Err(GeometryError::NonPositiveEnergy(p.p[0].to_f64()).into());
    }
    let plus = p.p.clone();
    let minus = p.neg().p;
    let b = seeds.b.clone().unwrap_or_else(|| seeds.a.conj());
    let mut phi = PlaneWaveFn::wave(plus.clone(), seeds.a.clone());
    phi.add_term(minus.clone(), b);
    let f = phi.conj().scale(&creal(R::from_i64(2) * m.clone()));
    let g = lowered_gamma(&plus);
    let eps = SymplecticForm::ledger();
    let inv_m = creal(R::one() / m.clone());
    let v: [Complex<R>; 2] = std::array::from_fn(|a| {
        let mut acc: Complex<R> = Complex::zero();
        for bb in 1..=2 {
            for c in 1..=2 {
                let e = eps.upper(bb, c);
                if e != 0 {
                    acc = acc + g.at(a + 1, bb).clone() * cint::<R>(e, 0) * seeds.u[c - 1].conj();
                }
            }
        }
        -(acc * inv_m.clone())
    });
    let psi = std::array::from_fn(|a| {
        let mut w = PlaneWaveFn::wave(plus.clone(), seeds.u[a].clone());
        w.add_term(minus.clone(), v[a].clone());
        w
    });
    Ok(ChiralData { phi, psi, f })
}

/// Lorentz action on position-side superfunctions: mode q ↦ h·q, coefficients by the induced automorphism.
pub fn spin_transform(h: &SpinElement, f: &SuperFunction<f64>) -> SuperFunction<f64> {
    let op = spin_action_op(h);
    let mut out = SuperFunction::zero(f.domain);
    for (q, v) in f.modes() {
        out.add_mode(h.act_on_momentum(&Momentum { p: *q }).p, op.apply(v));
    }
    out
}

/// Uniform 4D grid of `n` points per axis with spacing `h`, centered at `center`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid4 {
    pub n: usize,
    pub h: f64,
    pub center: [f64; 4],
    pub periodic: bool,
}

impl Grid4 {
    pub fn new(n: usize, h: f64) -> Self {
        Grid4 { n, h, center: [0.0; 4], periodic: false }
    }

    fn len(&self) -> usize {
        self.n.pow(4)
    }

    fn point(&self, idx: [usize; 4]) -> [f64; 4] {
        let off = (self.n as f64 - 1.0) / 2.0;
        std::array::from_fn(|i| self.center[i] + (idx[i] as f64 - off) * self.h)
    }

    fn flat(&self, idx: [usize; 4]) -> usize {
        ((idx[0] * self.n + idx[1]) * self.n + idx[2]) * self.n + idx[3]
    }

    fn unflat(&self, mut k: usize) -> [usize; 4] {
        let mut idx = [0; 4];
        for i in (0..4).rev() {
            idx[i] = k % self.n;
            k /= self.n;
        }
        idx
    }
}

/// Component fields sampled on a grid.
#[derive(Clone, Debug)]
pub struct SampledChiral {
    pub grid: Grid4,
    pub phi: Vec<C64>,
    pub psi: [Vec<C64>; 2],
}

pub fn sample_chiral<R: Real>(c: &ChiralData<R>, grid: &Grid4) -> SampledChiral {
    let sample = |f: &PlaneWaveFn<R>| (0..grid.len()).map(|k| f.eval(&grid.point(grid.unflat(k)))).collect::<Vec<_>>();
    SampledChiral { grid: grid.clone(), phi: sample(&c.phi), psi: [sample(&c.psi[0]), sample(&c.psi[1])] }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GridResidual {
    pub max_kg: f64,
    pub max_dirac: f64,
    pub h: f64,
    pub points: usize,
}

/// Max-norm residuals of (□+m²)φ and mψ_a + iΓ^μ_{ab}∂_μψ̄ᵇ by second-order central differences.
pub fn grid_residual(s: &SampledChiral, m: f64) -> Result<GridResidual, ComponentError> {
    let g = &s.grid;
    if g.n < 5 {
        return Err(ComponentError::GridTooSmall(g.n));
    }
    let eps = SymplecticForm::ledger();
    let table = gamma_table::<f64>();
    // lowered Γ^μ = εΓ^με
    let lowered: [PairingMatrix<f64>; 4] = std::array::from_fn(|mu| crate::spin_geometry::lowered_pairing(&PairingMatrix::new(table[mu].clone()), &eps));
    let psibar_up: [Vec<C64>; 2] = std::array::from_fn(|b| {
        (0..g.len())
            .map(|k| {
                let mut acc = C64::zero();
                for c in 0..2 {
                    acc += s.psi[c][k].conj() * eps.upper(b + 1, c + 1) as f64;
                }
                acc
            })
            .collect()
    });
    let shift = |idx: [usize; 4], mu: usize, d: isize| -> Option<usize> {
        let mut j = idx;
        let v = idx[mu] as isize + d;
        if g.periodic {
            j[mu] = v.rem_euclid(g.n as isize) as usize;
        } else if v < 0 || v >= g.n as isize {
            return None;
        } else {
            j[mu] = v as usize;
        }
        Some(g.flat(j))
    };
    let metric = [1.0, -1.0, -1.0, -1.0];
    let (mut max_kg, mut max_dirac, mut points) = (0.0f64, 0.0f64, 0usize);
    for k in 0..g.len() {
        let idx = g.unflat(k);
        let mut neighbors = [[0usize; 2]; 4];
        let mut interior = true;
        for mu in 0..4 {
            match (shift(idx, mu, -1), shift(idx, mu, 1)) {
                (Some(a), Some(b)) => neighbors[mu] = [a, b],
                _ => interior = false,
            }
        }
        if !interior {
            continue;
        }
        points += 1;
        let h = g.h;
        let mut boxed = C64::zero();
        for mu in 0..4 {
            let [lo, hi] = neighbors[mu];
            boxed += (s.phi[hi] - 2.0 * s.phi[k] + s.phi[lo]) / (h * h) * metric[mu];
        }
        max_kg = max_kg.max((boxed + m * m * s.phi[k]).norm());
        for a in 0..2 {
            let mut r = m * s.psi[a][k];
            for (b, pb) in psibar_up.iter().enumerate() {
                for mu in 0..4 {
                    let [lo, hi] = neighbors[mu];
                    let d = (pb[hi] - pb[lo]) / (2.0 * h);
                    r += C64::new(0.0, 1.0) * lowered[mu].b[a][b] * d;
                }
            }
            max_dirac = max_dirac.max(r.norm());
        }
    }
    Ok(GridResidual { max_kg, max_dirac, h: g.h, points })
}

/// Zero threshold for grid residuals: 10·h²·scale·‖p‖².
pub fn grid_tolerance(h: f64, scale: f64, norm2: f64) -> f64 {
    10.0 * h * h * scale * norm2.abs().max(1.0)
}

// ---- coefficients in an auxiliary Grassmann algebra ----

type Aux = Grassmann<Complex<Q>>;

/// θ generators occupy bits 0..4; auxiliary ξ generators start at this bit.
const XI0: u32 = 4;

fn aux_conjugate(x: &Aux) -> Aux {
    // order-reversing antilinear: θᵃ ↔ θ̄ᵃ, ξ fixed
    let image = |g: u32| -> u32 {
        match g {
            0 => 2,
            1 => 3,
            2 => 0,
            3 => 1,
            _ => g,
        }
    };
    let mut out = Aux::zero();
    for (mask, c) in x.terms() {
        let mut prod = Aux::scalar(c.conj());
        for g in (0..32).filter(|g| mask & (1 << g) != 0) {
            // reversed order: each later generator lands on the left
            prod = Aux::generator(image(g)).mul(&prod);
        }
        out = out.add(&prod);
    }
    out
}

fn aux_dbar(b: usize, q: &[Q; 4], x: &Aux) -> Aux {
    let g = lowered_gamma(q);
    let mut out = x.left_deriv(b as u32 + 1);
    for a in 1..=2 {
        let coef = g.at(a, b).clone();
        if !coef.is_zero() {
            out = out.add(&x.left_mul_gen(a as u32 - 1).scale(&coef));
        }
    }
    out
}

fn aux_dbar2(q: &[Q; 4], x: &Aux) -> Aux {
    let eps = SymplecticForm::ledger();
    let mut out = Aux::zero();
    for a in 1..=2 {
        for b in 1..=2 {
            let e = eps.upper(a, b);
            if e != 0 {
                out = out.add(&aux_dbar(a, q, &aux_dbar(b, q, x)).scale(&cint(e, 0)));
            }
        }
    }
    out
}

fn mv_to_aux(v: &Multivector<Q>) -> Aux {
    let mut out = Aux::zero();
    for (k, c) in v.coeffs.iter().enumerate() {
        out.add_term(k as u32, c.clone());
    }
    out
}

/// Λ_N-valued chiral data at the two frequencies ±p: φ, F even, ψ odd.
struct AuxChiral {
    phi: [Aux; 2],
    psi: [[Aux; 2]; 2],
    f: [Aux; 2],
}

fn aux_expand(p: &Momentum<Q>, c: &AuxChiral) -> [([Q; 4], Aux); 2] {
    let qs = [p.p.clone(), p.neg().p];
    std::array::from_fn(|s| {
        let q = &qs[s];
        let mut g = c.phi[s].clone();
        for a in 0..2 {
            g = g.add(&Aux::generator(a as u32).mul(&c.psi[s][a]));
        }
        g = g.add(&Aux::monomial(0b11, Complex::one()).mul(&c.f[s]));
        (q.clone(), mv_to_aux(&exp_even(&chiral_shift(q))).mul(&g))
    })
}

/// WZ output over Λ_N at the modes ±p; entries indexed [mode].
fn aux_wz(p: &Momentum<Q>, m: &Q, c: &AuxChiral) -> [Aux; 2] {
    let f = aux_expand(p, c);
    let kappa = creal(d2_normalization());
    // conjugation swaps the two modes
    std::array::from_fn(|s| {
        let (q, fs) = &f[s];
        let fbar = aux_conjugate(&f[1 - s].1);
        aux_dbar2(q, &fbar).scale(&-kappa.clone()).add(&fs.scale(&creal(m.clone())))
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct EquivalenceReport {
    pub generators: usize,
    pub momentum: [String; 4],
    pub mass: String,
    pub real_unknowns: usize,
    pub solution_dim: usize,
    pub predicted_dim: usize,
    pub joint_rank: usize,
    pub expected_dim: usize,
    /// Phase attached to odd auxiliary monomials in the predicted span.
    pub odd_sector_phase: String,
    /// Joint rank when odd monomials carry r_S alone; exceeds `solution_dim` for N ≥ 1.
    pub untwisted_joint_rank: usize,
    pub passed: bool,
}

fn subsets(n: usize) -> Vec<u32> {
    (0..(1u32 << n)).collect()
}

/// Real unknown layout: per subset S, four complex slots: (φ₊, φ₋, F₊, F₋) for
/// even |S|, (ψ₁₊, ψ₂₊, ψ₁₋, ψ₂₋) for odd |S|; each as (Re, Im).
fn aux_from_unknowns(n: usize, x: &[Complex<Q>]) -> AuxChiral {
    let mut c = AuxChiral {
        phi: [Aux::zero(), Aux::zero()],
        psi: [[Aux::zero(), Aux::zero()], [Aux::zero(), Aux::zero()]],
        f: [Aux::zero(), Aux::zero()],
    };
    for s in subsets(n) {
        let base = 4 * s as usize;
        let mono = |v: &Complex<Q>| Aux::monomial(s << XI0, v.clone());
        if s.count_ones() % 2 == 0 {
            c.phi[0] = c.phi[0].add(&mono(&x[base]));
            c.phi[1] = c.phi[1].add(&mono(&x[base + 1]));
            c.f[0] = c.f[0].add(&mono(&x[base + 2]));
            c.f[1] = c.f[1].add(&mono(&x[base + 3]));
        } else {
            c.psi[0][0] = c.psi[0][0].add(&mono(&x[base]));
            c.psi[0][1] = c.psi[0][1].add(&mono(&x[base + 1]));
            c.psi[1][0] = c.psi[1][0].add(&mono(&x[base + 2]));
            c.psi[1][1] = c.psi[1][1].add(&mono(&x[base + 3]));
        }
    }
    c
}

fn complex_to_real(x: &[Complex<Q>]) -> Vec<Q> {
    x.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

/// Scalar solution space at ±p from [`solution_generator`], as complex slot vectors
/// (φ₊, φ₋, F₊, F₋) and (ψ₁₊, ψ₂₊, ψ₁₋, ψ₂₋), each list a real basis.
fn scalar_solutions(p: &Momentum<Q>, m: &Q) -> Result<(Vec<[Complex<Q>; 4]>, Vec<[Complex<Q>; 4]>), ComponentError> {
    let one = Complex::<Q>::one();
    let i = imag_unit::<Q>();
    let z = Complex::<Q>::zero;
    let plus = p.p.clone();
    let minus = p.neg().p;
    let mut bos = Vec::new();
    for (a, b) in [(one.clone(), z()), (i.clone(), z()), (z(), one.clone()), (z(), i.clone())] {
        let c = solution_generator(p, m, &Seeds { a, b: Some(b), u: [z(), z()] }, 0.0)?;
        bos.push([c.phi.amplitude(&plus), c.phi.amplitude(&minus), c.f.amplitude(&plus), c.f.amplitude(&minus)]);
    }
    let mut fer = Vec::new();
    for u in [[one.clone(), z()], [i.clone(), z()], [z(), one.clone()], [z(), i.clone()]] {
        let c = solution_generator(p, m, &Seeds { a: z(), b: Some(z()), u }, 0.0)?;
        fer.push([c.psi[0].amplitude(&plus), c.psi[1].amplitude(&plus), c.psi[0].amplitude(&minus), c.psi[1].amplitude(&minus)]);
    }
    Ok((bos, fer))
}

fn predicted_span(n: usize, bos: &[[Complex<Q>; 4]], fer: &[[Complex<Q>; 4]], odd_phase: bool) -> Vec<Vec<Q>> {
    let slots = 4 * (1usize << n);
    let i = imag_unit::<Q>();
    let mut predicted = Vec::new();
    for s in subsets(n) {
        let k = s.count_ones();
        let mut phase = Complex::<Q>::one();
        for _ in 0..(k * k.saturating_sub(1) / 2) {
            phase = phase * i.clone();
        }
        if k % 2 == 1 && odd_phase {
            phase = phase * i.clone();
        }
        let basis = if k % 2 == 0 { bos } else { fer };
        for e in basis {
            let mut x = vec![Complex::<Q>::zero(); slots];
            for t in 0..4 {
                x[4 * s as usize + t] = e[t].clone() * phase.clone();
            }
            predicted.push(complex_to_real(&x));
        }
    }
    predicted
}

/// WZ over Λ_N coefficients at one on-shell momentum: the exact solution set
/// compared with ⊕_S r_S·E_{|S| mod 2}, where r_S = i^{|S|(|S|−1)/2}ξ^S is the
/// conjugation-fixed multiple of ξ^S, and odd S carry an extra factor i.
pub fn wz_equivalence_check_at(n: usize, p: &Momentum<Q>, m: &Q) -> Result<EquivalenceReport, ComponentError> {
    if n > 6 {
        return Err(ComponentError::TooManyGenerators(n));
    }
    let slots = 4 * (1usize << n);
    let unknowns = 2 * slots;
    // column j of the real-linear map
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(unknowns);
    let mut row_keys: Vec<(usize, u32)> = Vec::new();
    let mut outputs: Vec<[Aux; 2]> = Vec::with_capacity(unknowns);
    for j in 0..unknowns {
        let mut x = vec![Complex::<Q>::zero(); slots];
        x[j / 2] = if j % 2 == 0 { Complex::one() } else { imag_unit() };
        let out = aux_wz(p, m, &aux_from_unknowns(n, &x));
        for (s, o) in out.iter().enumerate() {
            for (mask, _) in o.terms() {
                if !row_keys.contains(&(s, mask)) {
                    row_keys.push((s, mask));
                }
            }
        }
        outputs.push(out);
    }
    for out in &outputs {
        let mut col = Vec::with_capacity(2 * row_keys.len());
        for (s, mask) in &row_keys {
            let c = out[*s].coeff(*mask);
            col.push(c.re);
            col.push(c.im);
        }
        cols.push(col);
    }
    let rows = 2 * row_keys.len();
    let mut mat = Mat::zeros(rows, unknowns);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            mat.set(i, j, v.clone());
        }
    }
    let solutions = null_space(&mat, 0.0);

    let (bos, fer) = scalar_solutions(p, m)?;
    let solution_dim = solutions.len();
    let predicted = predicted_span(n, &bos, &fer, true);
    let predicted_dim = span_rank(&predicted, 0.0);
    let joint_with = |pred: &[Vec<Q>]| {
        let joint: Vec<Vec<Q>> = solutions.iter().cloned().chain(pred.iter().cloned()).collect();
        span_rank(&joint, 0.0)
    };
    let joint_rank = joint_with(&predicted);
    let untwisted_joint_rank = joint_with(&predicted_span(n, &bos, &fer, false));
    let expected_dim = if n == 0 { 4 } else { 8 << (n - 1) };
    Ok(EquivalenceReport {
        generators: n,
        momentum: p.p.clone().map(|x| x.to_string()),
        mass: m.to_string(),
        real_unknowns: unknowns,
        solution_dim,
        predicted_dim,
        joint_rank,
        expected_dim,
        odd_sector_phase: "i".into(),
        untwisted_joint_rank,
        passed: solution_dim == predicted_dim && joint_rank == solution_dim && solution_dim == expected_dim,
    })
}

/// [`wz_equivalence_check_at`] at p = (5, 3, 0, 0), m = 4.
pub fn wz_equivalence_check(n: usize) -> Result<EquivalenceReport, ComponentError> {
    wz_equivalence_check_at(n, &Momentum::from_ints([5, 3, 0, 0]), &Q::from_integer(4.into()))
}
