//! Momentum-dependent symbols on the mass orbit: the ζ family on W, propagation
//! from the rest frame, the Dirac and divergence symbols, and the superspin-0
//! constraint system.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_core::{
    build_d, build_dbar, chiral_element, compose_d2, compose_dbar2, conjugate_w, exact_complex_json, i_minus_op, i_plus_op,
    i_squared, ibar_squared, EndoW, Monomial, Multivector, PairingMatrix,
};
use crate::linalg::{null_space, rank, Mat};
use crate::poly::Poly;
use crate::scalar::{cint, creal, imag_unit, qf, ExactComplex, Real, C64, Q};
use crate::spin_geometry::{dirac_rep, gamma_pair, rest_boost, spin_action_op, GeometryError, Momentum, SpinElement, SymplecticForm};

#[derive(Debug, Error, PartialEq)]
pub enum SymbolError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("divergence symbol needs 2α ≥ 1 and 2β ≥ 1, got 2α = {0}, 2β = {1}")]
    DegenerateOrder(u32, u32),
    #[error("mass must be positive")]
    NonPositiveMass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Normalization κ in κ·ζ_{d²}(p) f(p) = m f̄(p) and in −κD̄²f̄ + mf.
pub fn d2_normalization() -> Q {
    qf(1, 4)
}

pub fn zeta_int<R: Real>(p: &Momentum<R>, side: Side, a: usize) -> EndoW<R> {
    let b = gamma_pair(p);
    match side {
        Side::Plus => i_plus_op(a, &b),
        Side::Minus => i_minus_op(a, &b),
    }
}

pub fn zeta_i2<R: Real>(p: &Momentum<R>) -> EndoW<R> {
    i_squared(&gamma_pair(p), &SymplecticForm::ledger())
}

pub fn zeta_ibar2<R: Real>(p: &Momentum<R>) -> EndoW<R> {
    ibar_squared(&gamma_pair(p), &SymplecticForm::ledger())
}

pub fn zeta_d<R: Real>(p: &Momentum<R>, a: usize) -> EndoW<R> {
    build_d(a, &gamma_pair(p))
}

pub fn zeta_dbar<R: Real>(p: &Momentum<R>, a: usize) -> EndoW<R> {
    build_dbar(a, &gamma_pair(p))
}

pub fn zeta_d2<R: Real>(p: &Momentum<R>) -> EndoW<R> {
    compose_d2(&gamma_pair(p), &SymplecticForm::ledger())
}

pub fn zeta_dbar2<R: Real>(p: &Momentum<R>) -> EndoW<R> {
    compose_dbar2(&gamma_pair(p), &SymplecticForm::ledger())
}

/// ρ(h)∘u∘ρ(h)⁻¹ on W.
pub fn conjugate_by(h: &SpinElement, u: &EndoW<f64>) -> EndoW<f64> {
    spin_action_op(h).compose(u).compose(&spin_action_op(&h.inverse()))
}

/// ζ_u(p) = ρ(h_p)∘u∘ρ(h_p)⁻¹ with the principal rest boost.
pub fn propagate(u: &EndoW<f64>, p: &Momentum<f64>, m: f64, tol: f64) -> Result<EndoW<f64>, SymbolError> {
    let h = rest_boost(p, m, tol)?;
    Ok(conjugate_by(&h, u))
}

/// The pair ζ_{d_1}(p), ζ_{d_2}(p) (or the d̄ pair) obtained from the rest
/// operators: the pair transforms as a spinor, so its two members are
/// recombined with h_pᵀ (resp. its conjugate) after conjugation.
pub fn propagate_d_pair(p: &Momentum<f64>, m: f64, side: Side, tol: f64) -> Result<[EndoW<f64>; 2], SymbolError> {
    let h = rest_boost(p, m, tol)?;
    let rest = PairingMatrix::<f64>::scalar(creal(m));
    let ops = match side {
        Side::Plus => [build_d(1, &rest), build_d(2, &rest)],
        Side::Minus => [build_dbar(1, &rest), build_dbar(2, &rest)],
    };
    let moved = ops.map(|u| conjugate_by(&h, &u));
    // X⁻¹ = hᵀ, so (X⁻¹)_{ac} = h_{ca}
    let inv: [[C64; 2]; 2] = match side {
        Side::Plus => std::array::from_fn(|a| std::array::from_fn(|c| h.a[c][a])),
        Side::Minus => std::array::from_fn(|a| std::array::from_fn(|c| h.a[c][a].conj())),
    };
    Ok(std::array::from_fn(|c| moved[0].scale(&inv[0][c]).add(&moved[1].scale(&inv[1][c]))))
}

/// γ(p) = [[0, B(p)], [adj B(p), 0]] on Dirac spinors, so γ(p)² = ‖p‖²·Id.
pub fn gamma_dirac<R: Real>(p: &Momentum<R>) -> Mat<Complex<R>> {
    let b = gamma_pair(p).b;
    let adj = [[b[1][1].clone(), -b[0][1].clone()], [-b[1][0].clone(), b[0][0].clone()]];
    let mut g = Mat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            g.set(i, j + 2, b[i][j].clone());
            g.set(i + 2, j, adj[i][j].clone());
        }
    }
    g
}

/// γ(p)/m − Id.
pub fn dirac_symbol<R: Real>(p: &Momentum<R>, m: &R) -> Result<Mat<Complex<R>>, SymbolError> {
    if *m <= R::zero() {
        return Err(SymbolError::NonPositiveMass);
    }
    let g = gamma_dirac(p);
    let inv_m = creal(R::one() / m.clone());
    let mut out = Mat::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let id = if i == j { Complex::one() } else { Complex::zero() };
            out.set(i, j, g.get(i, j).clone() * inv_m.clone() - id);
        }
    }
    Ok(out)
}

pub fn dirac_kernel_dim<R: Real>(p: &Momentum<R>, m: &R, tol: f64) -> Result<usize, SymbolError> {
    Ok(4 - rank(&dirac_symbol(p, m)?, tol))
}

/// ρ_D(h_p)∘u∘ρ_D(h_p)⁻¹ on Dirac spinors.
pub fn propagate_dirac(u: &Mat<C64>, p: &Momentum<f64>, m: f64, tol: f64) -> Result<Mat<C64>, SymbolError> {
    let h = rest_boost(p, m, tol)?;
    let r = Mat::from_rows(dirac_rep(&h).iter().map(|row| row.to_vec()).collect());
    let ri = Mat::from_rows(dirac_rep(&h.inverse()).iter().map(|row| row.to_vec()).collect());
    Ok(r.mul(u).mul(&ri))
}

/// Index of x₁^{n−k}x₂ᵏ ⊗ y₁^{n′−l}y₂ˡ in the coefficient vector of Sym^n ⊗ Sym^{n′}.
pub fn sym_index(k: usize, l: usize, n_prime: u32) -> usize {
    k * (n_prime as usize + 1) + l
}

/// f ↦ Σ_{ij} B(p)_{ij} ∂²f/∂xᵢ∂yⱼ from Sym^{2α}⊗Sym^{2β} to Sym^{2α−1}⊗Sym^{2β−1},
/// in the monomial bases of [`sym_index`].
pub fn divergence_symbol<R: Real>(two_alpha: u32, two_beta: u32, p: &Momentum<R>) -> Result<Mat<Complex<R>>, SymbolError> {
    if two_alpha == 0 || two_beta == 0 {
        return Err(SymbolError::DegenerateOrder(two_alpha, two_beta));
    }
    let (n, np) = (two_alpha, two_beta);
    let b = gamma_pair(p).b;
    let mut out: Mat<Complex<R>> = Mat::zeros((n * np) as usize, ((n + 1) * (np + 1)) as usize);
    // ∂/∂x₁ and ∂/∂x₂ on x₁^{n−k}x₂ᵏ: (new power of x₂, factor)
    let deriv = |deg: u32, k: u32, i: usize| -> Option<(u32, i64)> {
        match i {
            0 if k < deg => Some((k, (deg - k) as i64)),
            1 if k > 0 => Some((k - 1, k as i64)),
            _ => None,
        }
    };
    for k in 0..=n {
        for l in 0..=np {
            let col = sym_index(k as usize, l as usize, np);
            for (i, row_b) in b.iter().enumerate() {
                let Some((k2, fx)) = deriv(n, k, i) else { continue };
                for (j, bij) in row_b.iter().enumerate() {
                    let Some((l2, fy)) = deriv(np, l, j) else { continue };
                    let row = sym_index(k2 as usize, l2 as usize, np - 1);
                    let v = out.get(row, col).clone() + bij.clone() * cint::<R>(fx * fy, 0);
                    out.set(row, col, v);
                }
            }
        }
    }
    Ok(out)
}

/// 1 when Sym^{2σ}S₊* occurs in Sym^{2α}S₊* ⊗ Sym^{2β}S₊*, else 0 (doubled arguments).
pub fn multiplicity(two_sigma: u32, two_alpha: u32, two_beta: u32) -> u32 {
    let lo = two_alpha.abs_diff(two_beta);
    let hi = two_alpha + two_beta;
    u32::from(two_sigma >= lo && two_sigma <= hi && (hi - two_sigma) % 2 == 0)
}

/// Unknowns of the superspin-0 system: the chiral parameters of f(p), then those of f(−p).
pub const SUPERSPIN0_UNKNOWNS: [&str; 8] = ["phi", "psi1", "psi2", "F", "phi'", "chi1", "chi2", "G"];

const BOSONIC: [usize; 4] = [0, 3, 4, 7];
const FERMIONIC: [usize; 4] = [1, 2, 5, 6];

#[derive(Clone, Debug)]
pub struct Superspin0Report {
    pub momentum: Momentum<Q>,
    pub norm2: Q,
    /// Monic generator of the ideal of polynomials c(m) forced to satisfy c(m)·φ = 0.
    pub phi_factor: Poly,
    /// Same for ψ₁.
    pub psi_factor: Poly,
    /// m² − ‖p‖².
    pub expected_factor: Poly,
    /// [κζ_{d²}(p)f(p)]_top = top_coefficient · F.
    pub top_coefficient: ExactComplex,
    /// [κζ_{d²}(p)f(p)]_{τ¹τ²} = g_coefficient · φ.
    pub g_coefficient: ExactComplex,
    /// m ψ̄_a = Σ_c fermion_matrix[a][c] ψ_c, where ψ̄_a is the τ¹τ²τ̄ᵃ coefficient of f̄(p).
    pub fermion_matrix: [[ExactComplex; 2]; 2],
    /// Real solution dimensions (bosonic, fermionic) at the supplied numeric mass.
    pub dims_at_mass: Option<(Q, usize, usize)>,
}

impl Superspin0Report {
    pub fn factor_matches(&self) -> bool {
        self.phi_factor == self.expected_factor
    }

    pub fn to_json(&self) -> Value {
        json!({
            "momentum": self.momentum.to_json(),
            "norm2": self.norm2.to_string(),
            "phi_factor": self.phi_factor.to_string(),
            "psi_factor": self.psi_factor.to_string(),
            "expected_factor": self.expected_factor.to_string(),
            "factor_matches": self.factor_matches(),
            "relations": {
                "top": format!("{} F = m phibar", fmt_c(&self.top_coefficient)),
                "tau12": format!("{} phi = m Fbar", fmt_c(&self.g_coefficient)),
                "fermion_matrix": self.fermion_matrix.iter().map(|r| r.iter().map(exact_complex_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            },
            "dims_at_mass": self.dims_at_mass.as_ref().map(|(m, b, f)| json!({"mass": m.to_string(), "bosonic_real": b, "fermionic_real": f})),
        })
    }
}

pub fn fmt_c(c: &ExactComplex) -> String {
    if c.im.is_zero() {
        format!("{}", c.re)
    } else if c.re.is_zero() {
        format!("{}i", c.im)
    } else {
        format!("({} + {}i)", c.re, c.im)
    }
}

/// Residual split as R₀ + m·R₁ for the two equations κζ_{d²}(±p)f(±p) = m·c̃(f(∓p)).
fn residual_parts(p: &Momentum<Q>, unknowns: &[ExactComplex; 8]) -> [(Multivector<Q>, Multivector<Q>); 2] {
    let kappa = creal(d2_normalization());
    let mp = p.neg();
    let bp = gamma_pair(p);
    let bm = gamma_pair(&mp);
    let f_p = chiral_element(&bp, &[unknowns[0].clone(), unknowns[1].clone(), unknowns[2].clone(), unknowns[3].clone()]);
    let f_m = chiral_element(&bm, &[unknowns[4].clone(), unknowns[5].clone(), unknowns[6].clone(), unknowns[7].clone()]);
    let eq_p = (zeta_d2(p).apply(&f_p).scale(&kappa), conjugate_w(&f_m).scale(&cint(-1, 0)));
    let eq_m = (zeta_d2(&mp).apply(&f_m).scale(&kappa), conjugate_w(&f_p).scale(&cint(-1, 0)));
    [eq_p, eq_m]
}

/// Real-linear system in the 16 real unknowns (Re, Im of each of the 8 complex ones),
/// with entries in ℚ[m]; one row per real component of the residual.
fn real_system(p: &Momentum<Q>) -> Vec<Vec<Poly>> {
    let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(16);
    for j in 0..16 {
        let mut u: [ExactComplex; 8] = std::array::from_fn(|_| Complex::zero());
        u[j / 2] = if j % 2 == 0 { Complex::one() } else { imag_unit() };
        let mut col = Vec::with_capacity(64);
        for (r0, r1) in residual_parts(p, &u) {
            for k in 0..16 {
                let (a, b) = (&r0.coeffs[k], &r1.coeffs[k]);
                col.push(Poly::from_coeffs(vec![a.re.clone(), b.re.clone()]));
                col.push(Poly::from_coeffs(vec![a.im.clone(), b.im.clone()]));
            }
        }
        cols.push(col);
    }
    (0..64).map(|i| (0..16).map(|j| cols[j][i].clone()).collect()).collect()
}

fn normalize_row(row: &mut [Poly]) {
    if let Some(first) = row.iter().find(|p| !p.is_zero()) {
        let s = Q::one() / first.lead();
        for p in row.iter_mut() {
            *p = p.scale(&s);
        }
    }
}

/// Eliminate every column outside `keep` (fraction-free over ℚ[m], unit pivots
/// first) and return the gcd of all surviving entries in the kept columns.
fn eliminate_to(rows: &[Vec<Poly>], keep: &[usize]) -> Poly {
    let mut rows: Vec<Vec<Poly>> = rows.iter().filter(|r| r.iter().any(|p| !p.is_zero())).cloned().collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut used = vec![false; rows.len()];
    let mut cols: Vec<usize> = (0..ncols).filter(|c| !keep.contains(c)).collect();
    while !cols.is_empty() {
        // choose the (column, row) whose pivot has the lowest degree
        let mut best: Option<(usize, usize, usize)> = None;
        for (ci, &c) in cols.iter().enumerate() {
            for (r, row) in rows.iter().enumerate() {
                if used[r] || row[c].is_zero() {
                    continue;
                }
                let d = row[c].degree().unwrap_or(0);
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((ci, r, d));
                }
            }
        }
        let Some((ci, r, _)) = best else { break };
        let c = cols.remove(ci);
        used[r] = true;
        let pivot_row = rows[r].clone();
        let a = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let b = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                *x = x.mul(&a).sub(&b.mul(pv));
            }
            normalize_row(row);
        }
    }
    let mut g = Poly::zero();
    for (i, row) in rows.iter().enumerate() {
        if used[i] {
            continue;
        }
        for &k in keep {
            g = g.gcd(&row[k]);
        }
    }
    g
}

fn real_null_dim(rows: &[Vec<Poly>], cols: &[usize], m: &Q) -> usize {
    let mat: Vec<Vec<Q>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].eval(m)).collect()).collect();
    null_space(&Mat::from_rows(mat), 0.0).len()
}

/// The superspin-0 constraint κζ_{d²}(p)f(p) = m·f̄(p) on chiral f, with f̄(p) = c̃(f(−p)).
///
/// The mass is kept symbolic. Returns the exact factors forced on φ and ψ₁ by
/// elimination, the explicit slot relations, and, if `mass` is given, the real
/// dimensions of the bosonic and fermionic solution spaces there.
pub fn superspin0_constraints(p: &Momentum<Q>, mass: Option<&Q>) -> Superspin0Report {
    let rows = real_system(p);
    let phi_factor = eliminate_to(&rows, &[0, 1]);
    let psi_factor = eliminate_to(&rows, &[2, 3]);
    let norm2 = p.norm2();
    let expected_factor = Poly::from_coeffs(vec![-norm2.clone(), Q::zero(), Q::one()]);

    let kappa = creal(d2_normalization());
    let b = gamma_pair(p);
    let z = || Complex::<Q>::zero();
    let one = Complex::<Q>::one();
    let image = |params: [ExactComplex; 4]| zeta_d2(p).apply(&chiral_element(&b, &params)).scale(&kappa);
    let top_coefficient = image([z(), z(), z(), one.clone()]).get(Monomial::TOP).clone();
    let g_coefficient = image([one.clone(), z(), z(), z()]).get(Monomial::new(&[1, 2], &[])).clone();
    let fermion_matrix = std::array::from_fn(|a| {
        std::array::from_fn(|c| {
            let mut params = [z(), z(), z(), z()];
            params[1 + c] = one.clone();
            image(params).get(Monomial::new(&[1, 2], &[a + 1])).clone()
        })
    });

    let cols = |idx: &[usize]| idx.iter().flat_map(|&u| [2 * u, 2 * u + 1]).collect::<Vec<_>>();
    let dims_at_mass = mass.map(|m| (m.clone(), real_null_dim(&rows, &cols(&BOSONIC), m), real_null_dim(&rows, &cols(&FERMIONIC), m)));

    Superspin0Report {
        momentum: p.clone(),
        norm2,
        phi_factor,
        psi_factor,
        expected_factor,
        top_coefficient,
        g_coefficient,
        fermion_matrix,
        dims_at_mass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn rest_frame_int_is_identity_pairing() {
        let e0 = Momentum::<Q>::from_ints([1, 0, 0, 0]);
        assert_eq!(zeta_int(&e0, Side::Plus, 1), i_plus_op(1, &PairingMatrix::identity()));
        let e2 = Momentum::<Q>::from_ints([0, 0, 1, 0]);
        let v = zeta_int(&e2, Side::Plus, 1).apply(&Multivector::basis(Monomial::new(&[], &[1])));
        assert!(v.is_zero());
    }

    #[test]
    fn i2_on_top_is_norm() {
        let p = Momentum::<Q>::from_ints([3, 1, -1, 2]);
        let v = zeta_i2(&p).apply(&Multivector::basis(Monomial::new(&[], &[1, 2])));
        assert_eq!(v, Multivector::scalar(creal(p.norm2())));
    }

    #[test]
    fn dirac_kernel_dims() {
        assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([1, 0, 0, 0]), &q(1), 0.0).unwrap(), 2);
        assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([5, 3, 0, 0]), &q(4), 0.0).unwrap(), 2);
        assert_eq!(dirac_kernel_dim(&Momentum::<Q>::from_ints([2, 0, 0, 0]), &q(1), 0.0).unwrap(), 0);
    }

    #[test]
    fn divergence_rest_frame() {
        let m = divergence_symbol(1, 1, &Momentum::<Q>::from_ints([1, 0, 0, 0])).unwrap();
        assert_eq!(4 - rank(&m, 0.0), 3);
        assert!(matches!(divergence_symbol::<Q>(0, 1, &Momentum::zero()), Err(SymbolError::DegenerateOrder(0, 1))));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(2, 1, 1), 1);
        assert_eq!(multiplicity(4, 1, 1), 0);
        assert_eq!(multiplicity(3, 3, 0), 1);
    }

    #[test]
    fn superspin0_rest() {
        let r = superspin0_constraints(&Momentum::from_ints([1, 0, 0, 0]), Some(&q(1)));
        assert_eq!(r.phi_factor, r.expected_factor);
        assert_eq!(r.fermion_matrix, [[cint(0, 0), cint(1, 0)], [cint(-1, 0), cint(0, 0)]]);
    }
}
