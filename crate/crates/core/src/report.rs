//! Seeded identity suites, the end-to-end pipeline, and the report format
//! shared by the command line and the browser demo.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_core::{
    build_d, build_dbar, build_q, build_qbar, chiral_kernel, chiral_kernel_ungraded_form, compose_d2, compose_dbar2,
    conjugate_w, d2_expanded, d2_two_term, dbar2_expanded, dbar2_two_term, dbar_null_space, e_minus_op, e_plus_op,
    i_minus_op, i_plus_op, i_squared, EndoW, Monomial, Multivector, PairingMatrix, Parity,
};
use crate::components::{
    chiral_expand, component_residuals, conjugate_sf, grid_residual, grid_tolerance, sample_chiral, solution_generator,
    wz_operator, ChiralData, ComponentError, Grid4, Seeds,
};
use crate::repdecomp::tensor_sym_decompose;
use crate::sampling;
use crate::scalar::{cint, creal, to_c64, Real, C64, Q};
use crate::spin_geometry::{classify_orbit, gamma_pair, GeometryError, Momentum, OrbitClass, SymplecticForm};
use crate::superfourier::{
    apply_p, apply_q, apply_qbar, bracket_table, exchange_check, hodge_star, hodge_star_inv, intertwining_check, inverse_super_ft,
    super_ft, super_ft_expression, Domain, FourierError, SuperFunction, ODD_FIELDS,
};
use crate::symbols::{
    conjugate_by, d2_normalization, dirac_kernel_dim, dirac_symbol, multiplicity, propagate, propagate_d_pair,
    propagate_dirac, superspin0_constraints, zeta_d, zeta_d2, zeta_dbar, zeta_dbar2, zeta_i2, Side, SymbolError,
};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const SUITES: [&str; 5] = ["all", "algebra", "superfourier", "symbols", "brackets"];
const TRIALS: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("unknown suite {0:?}; expected one of all, algebra, superfourier, symbols, brackets")]
    UnknownSuite(String),
    #[error("SUPERKIT_TOL must be a positive number, got {0:?}")]
    BadTolerance(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Component(#[from] ComponentError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub max_error: f64,
    pub runtime_ms: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub ledger: Value,
    pub data: Value,
}

impl Report {
    pub fn new(suite: &str, seed: Option<u64>, tolerance: f64, mut checks: Vec<Check>, data: Value) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.to_string(), seed, tolerance, checks, ledger: ledger_snapshot(), data }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("suite {}", self.suite);
        if let Some(s) = self.seed {
            let _ = write!(out, "  seed {s}");
        }
        let _ = writeln!(out, "  tolerance {:e}", self.tolerance);
        let _ = writeln!(out, "{:<w$}  {:<6}  {:>10}  {:>9}  relation", "id", "status", "max_error", "ms");
        for c in &self.checks {
            let st = if c.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:<w$}  {st:<6}  {:>10.3e}  {:>9.2}  {} = {}", c.id, c.max_error, c.runtime_ms, c.lhs, c.rhs);
        }
        let fails = self.failures().len();
        let _ = writeln!(out, "{} checks, {} passed, {} failed", self.checks.len(), self.checks.len() - fails, fails);
        out
    }
}

/// Sign and basis conventions every report is computed under.
pub fn ledger_snapshot() -> Value {
    json!({
        "basis": "monomials tau^I taubar^J, tau factor to the left; bit order tau1, tau2, taubar1, taubar2",
        "operators": "Koszul-signed left multiplication and contraction; d_a = e_a + i_a(B), dbar_a = ebar_a + ibar_a(B)",
        "anticommutator": "{d_a, dbar_b} = 2 B_ab Id, {i_a, ebar_b} = B_ab Id",
        "epsilon": SymplecticForm::ledger().to_json(),
        "d2": "eps^{ab} d_a d_b by composition; graded expansion e^2 + 2 eps_ab e_a i_b - 2 i^2",
        "metric": "(+,-,-,-)",
        "gamma_pair": "B(p) = p0 Id + sigma-type table; B(m e0) = m Id",
        "lowered_gamma": "Gamma_ab(q) = (eps B(q) eps)_ab",
        "P": "P_mu = -i d_mu, multiplication by q_mu on exp(i<q,x>)",
        "D": "D_a = d/dtheta^a + Gamma_ab(q) thetabar^b, Dbar_b = d/dthetabar^b + Gamma_ab(q) theta^a",
        "Q": "Q_a = d/dtheta^a - Gamma_ab(q) thetabar^b, Qbar_b = d/dthetabar^b - Gamma_ab(q) theta^a",
        "D2": "eps^{ab} D_a D_b",
        "conjugation": "antilinear, order reversing, tau^a <-> taubar^a, sign (-1)^{k(k-1)/2 + |I||J|}",
        "superfield_conjugation": "conjugation per mode with q -> -q",
        "super_ft": "Hodge star per mode, 1 -> tau1 tau2 taubar1 taubar2",
        "intertwining": "star(D_a f)^ = i eps_ab zeta_{d_b}(q) star f^, star(D^2 f)^ = -zeta_{d^2}(q) star f^",
        "rest_boost": "principal Hermitian positive square root",
        "wz_operator": "-kappa Dbar^2 fbar + m f",
        "kappa": d2_normalization().to_string(),
        "chiral_expansion": "exp(Gamma_ab(q) theta^a thetabar^b)(phi + theta^a psi_a + theta1 theta2 F)",
        "aux_odd_phase": "i",
    })
}

/// `SUPERKIT_TOL`, or [`DEFAULT_TOL`] when unset.
pub fn env_tolerance() -> Result<f64, ReportError> {
    match std::env::var("SUPERKIT_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(ReportError::BadTolerance(s)),
        },
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = std::time::Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64() * 1e3)
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    (f(), 0.0)
}

/// Outcome of one check body: worst error and whether it passed.
struct Outcome(f64, bool);

fn exact(err: f64) -> Outcome {
    Outcome(err, err == 0.0)
}

fn within(err: f64, tol: f64) -> Outcome {
    Outcome(err, err <= tol)
}

fn run(id: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>, body: impl FnOnce() -> Outcome) -> Check {
    let (Outcome(max_error, ok), runtime_ms) = timed(body);
    Check {
        id: id.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        lhs: lhs.into(),
        rhs: rhs.into(),
        max_error,
        runtime_ms,
    }
}

fn rel_diff(a: &EndoW<f64>, b: &EndoW<f64>) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

/// Independent generator of each suite's randomness, so suites agree whether run alone or together.
fn suite_rng(seed: u64, salt: u64) -> sampling::SeededRng {
    sampling::rng(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn cmd_identities(suite: &str, seed: u64, tol: f64) -> Result<Report, ReportError> {
    let checks = match suite {
        "algebra" => algebra_checks(seed),
        "superfourier" => superfourier_checks(seed)?,
        "symbols" => symbol_checks(seed, tol)?,
        "brackets" => bracket_checks(seed)?,
        "all" => {
            let (a, f, s, b) = std::thread::scope(|sc| {
                let a = sc.spawn(|| algebra_checks(seed));
                let f = sc.spawn(|| superfourier_checks(seed));
                let s = sc.spawn(|| symbol_checks(seed, tol));
                let b = sc.spawn(|| bracket_checks(seed));
                (a.join(), f.join(), s.join(), b.join())
            });
            let mut all = a.expect("algebra suite");
            all.extend(f.expect("superfourier suite")?);
            all.extend(s.expect("symbols suite")?);
            all.extend(b.expect("brackets suite")?);
            all
        }
        other => return Err(ReportError::UnknownSuite(other.to_string())),
    };
    Ok(Report::new(suite, Some(seed), tol, checks, json!({ "trials": TRIALS })))
}

// ---- algebra ----

const D_NAMES: [&str; 4] = ["d1", "d2", "dbar1", "dbar2"];
const Q_NAMES: [&str; 4] = ["q1", "q2", "qbar1", "qbar2"];

fn d_op(k: usize, b: &PairingMatrix<Q>) -> EndoW<Q> {
    let a = k % 2 + 1;
    if k < 2 {
        build_d(a, b)
    } else {
        build_dbar(a, b)
    }
}

fn q_op(k: usize, b: &PairingMatrix<Q>) -> EndoW<Q> {
    let a = k % 2 + 1;
    if k < 2 {
        build_q(a, b)
    } else {
        build_qbar(a, b)
    }
}

/// Pairing index (a, b) of an unbarred/barred pair, or None if both sides match.
fn mixed_pair(x: usize, y: usize) -> Option<(usize, usize)> {
    match (x < 2, y < 2) {
        (true, false) => Some((x % 2 + 1, y % 2 + 1)),
        (false, true) => Some((y % 2 + 1, x % 2 + 1)),
        _ => None,
    }
}

/// Coefficients at which a kernel vector's parameters (φ, ψ₁, ψ₂, F) are read.
fn chiral_params(v: &Multivector<Q>) -> [Complex<Q>; 4] {
    [
        v.get(Monomial::TOP).clone(),
        v.get(Monomial::new(&[1], &[1, 2])).clone(),
        v.get(Monomial::new(&[2], &[1, 2])).clone(),
        v.get(Monomial::new(&[], &[1, 2])).clone(),
    ]
}

/// Number of coefficients, over a basis of the computed null space, at which the
/// closed form evaluated at the vector's own parameters differs from the vector.
pub fn closed_form_mismatches(null: &[Multivector<Q>], form: &[Multivector<Q>; 4]) -> usize {
    let mut bad = 0;
    for n in null {
        let params = chiral_params(n);
        let rebuilt = form.iter().zip(&params).fold(Multivector::zero(), |acc, (v, c)| acc.add(&v.scale(c)));
        bad += Monomial::all().filter(|m| rebuilt.get(*m) != n.get(*m)).count();
    }
    bad
}

/// B = Id followed by `count` random invertible rational pairings.
pub fn pairing_family(seed: u64, count: usize) -> Vec<PairingMatrix<Q>> {
    let mut r = suite_rng(seed, 1);
    std::iter::once(PairingMatrix::identity()).chain((0..count).map(|_| sampling::invertible_pairing(&mut r))).collect()
}

fn worst(bs: &[PairingMatrix<Q>], f: impl Fn(&PairingMatrix<Q>) -> f64) -> f64 {
    bs.iter().map(f).fold(0.0, f64::max)
}

/// d₁, d₂, d̄₁, d̄₂ and q₁, q₂, q̄₁, q̄₂ for one pairing.
struct OpSet {
    b: PairingMatrix<Q>,
    d: [EndoW<Q>; 4],
    q: [EndoW<Q>; 4],
    d2: EndoW<Q>,
    dbar2: EndoW<Q>,
}

pub fn algebra_checks(seed: u64) -> Vec<Check> {
    let bs = pairing_family(seed, 20);
    let eps = SymplecticForm::ledger();
    let sets: Vec<OpSet> = bs
        .iter()
        .map(|b| OpSet {
            b: b.clone(),
            d: std::array::from_fn(|k| d_op(k, b)),
            q: std::array::from_fn(|k| q_op(k, b)),
            d2: compose_d2(b, &eps),
            dbar2: compose_dbar2(b, &eps),
        })
        .collect();
    let id = EndoW::<Q>::identity();
    let over = |f: &dyn Fn(&OpSet) -> f64| sets.iter().map(f).fold(0.0, f64::max);
    let mut out = Vec::new();
    for x in 0..4 {
        for y in 0..4 {
            let pair = mixed_pair(x, y);
            let expected = |s: &OpSet, factor: i64| match pair {
                Some((a, c)) => id.scale(&(s.b.at(a, c).clone() * cint(factor, 0))),
                None => EndoW::zero(),
            };
            let rhs = |factor: i64| match pair {
                Some((a, b)) => format!("{factor} B_{a}{b} Id"),
                None => "0".into(),
            };
            out.push(run(format!("algebra.anticomm.{}.{}", D_NAMES[x], D_NAMES[y]), format!("{{{}, {}}}", D_NAMES[x], D_NAMES[y]), rhs(2), || {
                exact(over(&|s| s.d[x].anticommutator(&s.d[y]).max_abs_diff(&expected(s, 2))))
            }));
            out.push(run(format!("algebra.anticomm.{}.{}", Q_NAMES[x], Q_NAMES[y]), format!("{{{}, {}}}", Q_NAMES[x], Q_NAMES[y]), rhs(-2), || {
                exact(over(&|s| s.q[x].anticommutator(&s.q[y]).max_abs_diff(&expected(s, -2))))
            }));
            out.push(run(format!("algebra.susy.{}.{}", Q_NAMES[x], D_NAMES[y]), format!("[{}, {}]", Q_NAMES[x], D_NAMES[y]), "0", || {
                exact(over(&|s| s.q[x].graded_commutator(&s.d[y]).max_abs()))
            }));
        }
    }
    out.push(run("algebra.primitive.iplus_eminus", "{i_a, ebar_b}", "B_ab Id", || {
        exact(worst(&bs, |b| {
            let mut e = 0.0f64;
            for a in 1..=2 {
                for c in 1..=2 {
                    let lhs = i_plus_op(a, b).anticommutator(&e_minus_op(c));
                    e = e.max(lhs.max_abs_diff(&id.scale(b.at(a, c))));
                }
            }
            e
        }))
    }));
    out.push(run("algebra.primitive.iminus_eplus", "{ibar_b, e_a}", "B_ab Id", || {
        exact(worst(&bs, |b| {
            let mut e = 0.0f64;
            for a in 1..=2 {
                for c in 1..=2 {
                    let lhs = i_minus_op(c, b).anticommutator(&e_plus_op(a));
                    e = e.max(lhs.max_abs_diff(&id.scale(b.at(a, c))));
                }
            }
            e
        }))
    }));
    out.push(run("algebra.primitive.nilpotent", "{e, e}, {i, i}, {e_a, i_b}", "0", || {
        exact(worst(&bs, |b| {
            let ops: Vec<EndoW<Q>> =
                (1..=2).flat_map(|a| [e_plus_op(a), e_minus_op(a), i_plus_op(a, b), i_minus_op(a, b)]).collect();
            let mut e = 0.0f64;
            for (j, x) in ops.iter().enumerate() {
                for (k, y) in ops.iter().enumerate() {
                    // e_a with ibar_b and i_a with ebar_b are the only nonzero pairs
                    if matches!((j % 4, k % 4), (0, 3) | (3, 0) | (1, 2) | (2, 1)) {
                        continue;
                    }
                    e = e.max(x.anticommutator(y).max_abs());
                }
            }
            e
        }))
    }));
    out.push(run("algebra.parity", "parity(d, dbar, q, qbar; d2, dbar2)", "odd; even", || {
        let ok = sets.iter().all(|s| {
            s.d.iter().chain(&s.q).all(|o| o.parity == Parity::Odd)
                && s.d2.parity == Parity::Even
                && s.dbar2.parity == Parity::Even
        });
        Outcome(if ok { 0.0 } else { 1.0 }, ok)
    }));
    out.push(run("algebra.route.d2.graded_expansion", "eps^{ab} d_a d_b", "e^2 + 2 eps_ab e_a i_b - 2 i^2", || {
        exact(over(&|s| s.d2.max_abs_diff(&d2_expanded(&s.b, &eps))))
    }));
    out.push(run("algebra.route.dbar2.graded_expansion", "eps^{ab} dbar_a dbar_b", "ebar^2 + 2 eps_ab ebar_a ibar_b - 2 ibar^2", || {
        exact(over(&|s| s.dbar2.max_abs_diff(&dbar2_expanded(&s.b, &eps))))
    }));
    out.push(run("algebra.route.d2.two_term", "eps^{ab} d_a d_b", "e^2 (x) Id + Id (x) i^2", || {
        exact(over(&|s| s.d2.max_abs_diff(&d2_two_term(&s.b, &eps))))
    }));
    out.push(run("algebra.route.dbar2.two_term", "eps^{ab} dbar_a dbar_b", "ebar^2 (x) Id + Id (x) ibar^2", || {
        exact(over(&|s| s.dbar2.max_abs_diff(&dbar2_two_term(&s.b, &eps))))
    }));
    out.push(run("algebra.i2.det", "i^2 (taubar1 taubar2)", "det B", || {
        exact(worst(&bs, |b| {
            let img = i_squared(b, &eps).apply(&Multivector::basis(Monomial::new(&[], &[1, 2])));
            img.max_abs_diff(&Multivector::scalar(b.det()))
        }))
    }));
    out.push(run("algebra.chiral_kernel.dim", "dim ker dbar1 & ker dbar2", "4", || {
        let e = bs.iter().map(|b| (dbar_null_space(b, 0.0).len() as f64 - 4.0).abs()).fold(0.0, f64::max);
        exact(e)
    }));
    out.push(run("algebra.chiral_kernel.closed_form", "null space basis", "graded closed form, coefficientwise", || {
        exact(bs.iter().map(|b| closed_form_mismatches(&dbar_null_space(b, 0.0), &chiral_kernel(b)) as f64).fold(0.0, f64::max))
    }));
    out.push(run("algebra.chiral_kernel.display_form", "null space basis", "ungraded closed form, coefficientwise", || {
        exact(
            bs.iter()
                .map(|b| closed_form_mismatches(&dbar_null_space(b, 0.0), &chiral_kernel_ungraded_form(b)) as f64)
                .fold(0.0, f64::max),
        )
    }));
    let mut r = suite_rng(seed, 2);
    let vs: Vec<(Multivector<Q>, Multivector<Q>)> =
        (0..20).map(|_| (sampling::multivector(&mut r, 5), sampling::multivector(&mut r, 5))).collect();
    out.push(run("algebra.conjugate_w.involution", "conj(conj(v))", "v", || {
        exact(vs.iter().map(|(v, _)| conjugate_w(&conjugate_w(v)).max_abs_diff(v)).fold(0.0, f64::max))
    }));
    out.push(run("algebra.conjugate_w.order_reversing", "conj(v w)", "conj(w) conj(v)", || {
        exact(
            vs.iter()
                .map(|(v, w)| conjugate_w(&v.wedge(w)).max_abs_diff(&conjugate_w(w).wedge(&conjugate_w(v))))
                .fold(0.0, f64::max),
        )
    }));
    out
}

// ---- superfourier ----

pub fn superfourier_checks(seed: u64) -> Result<Vec<Check>, ReportError> {
    let mut r = suite_rng(seed, 3);
    let fs: Vec<SuperFunction<Q>> = (0..TRIALS).map(|_| sampling::superfunction(&mut r, 2)).collect();
    let mut out = Vec::new();
    out.push(run("superfourier.star.expression_table", "star(monomial)", "super FT expression table", || {
        exact(
            Monomial::all()
                .map(|m| {
                    let v = Multivector::<Q>::basis(m);
                    hodge_star(&v).max_abs_diff(&super_ft_expression(&v))
                })
                .fold(0.0, f64::max),
        )
    }));
    let mut inv_err = Ok(0.0f64);
    out.push(run("superfourier.star.inverse", "inverse_ft(ft(f)), star^-1(star(v))", "f, v", || {
        let mut e = 0.0f64;
        for f in &fs {
            let back = match super_ft(f).and_then(|g| inverse_super_ft(&g)) {
                Ok(b) => b,
                Err(x) => {
                    inv_err = Err(x);
                    return Outcome(f64::INFINITY, false);
                }
            };
            e = e.max(back.max_abs_diff(f));
            for (_, v) in f.modes() {
                e = e.max(hodge_star_inv(&hodge_star(v)).max_abs_diff(v));
            }
        }
        exact(e)
    }));
    inv_err?;
    let mut ex = [0.0f64; 4];
    let mut it = [0.0f64; 4];
    let (res, ex_ms) = timed(|| -> Result<(), FourierError> {
        for f in &fs {
            let e = exchange_check(f)?;
            for k in 0..4 {
                ex[k] = ex[k].max(e[k]);
            }
        }
        Ok(())
    });
    res?;
    let (res, it_ms) = timed(|| -> Result<(), FourierError> {
        for f in &fs {
            let e = intertwining_check(f)?;
            for k in 0..4 {
                it[k] = it[k].max(e[k]);
            }
        }
        Ok(())
    });
    res?;
    let ex_rel = [
        ("d_theta", "star(d/dtheta^a f)", "i eps_ab tau^b star f"),
        ("theta", "star(theta^a f)", "-i eps^ab d/dtau^b star f"),
        ("d_thetabar", "star(d/dthetabar^a f)", "i eps_ab taubar^b star f"),
        ("thetabar", "star(thetabar^a f)", "-i eps^ab d/dtaubar^b star f"),
    ];
    for (k, (name, lhs, rhs)) in ex_rel.iter().enumerate() {
        let mut c = run(format!("superfourier.exchange.{name}"), *lhs, *rhs, || exact(ex[k]));
        c.runtime_ms = ex_ms / 4.0;
        out.push(c);
    }
    let it_rel = [
        ("D", "star(D_a f)^", "i eps_ab zeta_{d_b} star f^"),
        ("Dbar", "star(Dbar_a f)^", "i eps_ab zeta_{dbar_b} star f^"),
        ("D2", "star(D^2 f)^", "-zeta_{d^2} star f^"),
        ("Dbar2", "star(Dbar^2 f)^", "-zeta_{dbar^2} star f^"),
    ];
    for (k, (name, lhs, rhs)) in it_rel.iter().enumerate() {
        let mut c = run(format!("superfourier.intertwine.{name}"), *lhs, *rhs, || exact(it[k]));
        c.runtime_ms = it_ms / 4.0;
        out.push(c);
    }
    Ok(out)
}

// ---- brackets ----

fn bracket_rhs(x: usize, y: usize) -> String {
    let (lo, hi) = (x.min(y), x.max(y));
    let (a, b) = (lo % 2 + 1, hi % 2 + 1);
    match (lo / 2, hi / 2) {
        (0, 1) => format!("2 Gamma_{a}{b} P"),
        (2, 3) => format!("-2 Gamma_{a}{b} P"),
        _ => "0".into(),
    }
}

pub fn bracket_checks(seed: u64) -> Result<Vec<Check>, ReportError> {
    let mut r = suite_rng(seed, 4);
    let momenta: Vec<Momentum<Q>> = (0..10).map(|_| sampling::momentum(&mut r, 6)).collect();
    let basis: Vec<SuperFunction<Q>> = momenta
        .iter()
        .flat_map(|p| Monomial::all().map(move |m| SuperFunction::single(Domain::Position, p.p.clone(), Multivector::basis(m))))
        .collect();
    let mut table = vec![0.0f64; 36];
    let (res, ms) = timed(|| -> Result<(), FourierError> {
        for f in &basis {
            for (k, (_, e)) in bracket_table(f)?.into_iter().enumerate() {
                table[k] = table[k].max(e);
            }
        }
        Ok(())
    });
    res?;
    let mut out = Vec::new();
    let mut k = 0;
    for x in 0..8 {
        for y in x..8 {
            let mut c = run(
                format!("brackets.{}.{}", ODD_FIELDS[x], ODD_FIELDS[y]),
                format!("[{}, {}]", ODD_FIELDS[x], ODD_FIELDS[y]),
                bracket_rhs(x, y),
                || exact(table[k]),
            );
            c.runtime_ms = ms / 36.0;
            out.push(c);
            k += 1;
        }
    }
    let mut perr = Ok(());
    out.push(run("brackets.P.all", "[P_mu, P_nu], [P_mu, Q], [P_mu, Qbar]", "0", || {
        let mut e = 0.0f64;
        for f in &basis {
            let r = (|| -> Result<f64, FourierError> {
                let mut e = 0.0f64;
                for mu in 0..4 {
                    for nu in 0..4 {
                        let c = apply_p(mu, &apply_p(nu, f)?)?.sub(&apply_p(nu, &apply_p(mu, f)?)?);
                        e = e.max(c.max_abs());
                    }
                    for qf in [apply_q::<Q>, apply_qbar::<Q>] {
                        for a in 1..=2 {
                            let c = apply_p(mu, &qf(a, f)?)?.sub(&qf(a, &apply_p(mu, f)?)?);
                            e = e.max(c.max_abs());
                        }
                    }
                }
                Ok(e)
            })();
            match r {
                Ok(x) => e = e.max(x),
                Err(x) => {
                    perr = Err(x);
                    return Outcome(f64::INFINITY, false);
                }
            }
        }
        exact(e)
    }));
    perr?;
    Ok(out)
}

// ---- symbols ----

pub fn symbol_checks(seed: u64, tol: f64) -> Result<Vec<Check>, ReportError> {
    let mut r = suite_rng(seed, 5);
    let samples: Vec<(f64, Momentum<f64>)> = (0..TRIALS)
        .map(|_| {
            let m = 0.5 + 2.0 * rand::Rng::gen::<f64>(&mut r);
            (m, sampling::on_shell(&mut r, m))
        })
        .collect();
    let hs: Vec<_> = (0..TRIALS).map(|_| sampling::spin_element(&mut r)).collect();
    let mut out = Vec::new();
    let mut err: Result<(), SymbolError> = Ok(());

    type Zeta = fn(&Momentum<f64>) -> EndoW<f64>;
    let invariant: [(&str, Zeta); 3] = [("d2", zeta_d2::<f64>), ("dbar2", zeta_dbar2::<f64>), ("i2", zeta_i2::<f64>)];
    for (name, z) in invariant {
        out.push(run(format!("symbols.route.{name}"), format!("propagate({name} at rest, p)"), format!("zeta_{name}(p)"), || {
            let mut e = 0.0f64;
            for (m, p) in &samples {
                match propagate(&z(&Momentum::rest(*m)), p, *m, tol) {
                    Ok(u) => e = e.max(rel_diff(&u, &z(p))),
                    Err(x) => {
                        err = Err(x);
                        return Outcome(f64::INFINITY, false);
                    }
                }
            }
            within(e, tol)
        }));
        out.push(run(format!("symbols.equivariance.{name}"), format!("rho(h) zeta_{name}(p) rho(h)^-1"), format!("zeta_{name}(hp)"), || {
            let e = samples
                .iter()
                .zip(&hs)
                .map(|((_, p), h)| rel_diff(&conjugate_by(h, &z(p)), &z(&h.act_on_momentum(p))))
                .fold(0.0, f64::max);
            within(e, tol)
        }));
    }
    std::mem::replace(&mut err, Ok(()))?;
    for (name, side) in [("d", Side::Plus), ("dbar", Side::Minus)] {
        out.push(run(format!("symbols.route.{name}_pair"), format!("propagate_d_pair({name}, p)"), format!("zeta_{name}_a(p)"), || {
            let mut e = 0.0f64;
            for (m, p) in &samples {
                match propagate_d_pair(p, *m, side, tol) {
                    Ok(pair) => {
                        for a in 1..=2 {
                            let z = if side == Side::Plus { zeta_d(p, a) } else { zeta_dbar(p, a) };
                            e = e.max(rel_diff(&pair[a - 1], &z));
                        }
                    }
                    Err(x) => {
                        err = Err(x);
                        return Outcome(f64::INFINITY, false);
                    }
                }
            }
            within(e, tol)
        }));
    }
    std::mem::replace(&mut err, Ok(()))?;
    out.push(run("symbols.route.dirac", "propagate_dirac(gamma(m e0)/m - Id, p)", "gamma(p)/m - Id", || {
        let mut e = 0.0f64;
        for (m, p) in &samples {
            let res = dirac_symbol(&Momentum::rest(*m), m)
                .and_then(|u| propagate_dirac(&u, p, *m, tol))
                .and_then(|u| Ok((u, dirac_symbol(p, m)?)));
            match res {
                Ok((u, z)) => {
                    let d = u.data.iter().zip(&z.data).map(|(a, b): (&C64, &C64)| (a - b).norm()).fold(0.0, f64::max);
                    e = e.max(d);
                }
                Err(x) => {
                    err = Err(x);
                    return Outcome(f64::INFINITY, false);
                }
            }
        }
        within(e, tol)
    }));
    std::mem::replace(&mut err, Ok(()))?;
    let mut rq = suite_rng(seed, 6);
    let exact_masses: Vec<Q> = (0..25).map(|_| Q::new((rand::Rng::gen_range(&mut rq, 1..=9)).into(), (rand::Rng::gen_range(&mut rq, 1..=4)).into())).collect();
    let on: Vec<(Q, Momentum<Q>)> = exact_masses.iter().map(|m| (m.clone(), sampling::on_shell_rational(&mut rq, m))).collect();
    let off: Vec<(Q, Momentum<Q>)> = exact_masses
        .iter()
        .map(|m| loop {
            let p = sampling::momentum(&mut rq, 6);
            if p.norm2() != m.clone() * m.clone() {
                break (m.clone(), p);
            }
        })
        .collect();
    out.push(run("symbols.dirac_kernel.on_shell", "dim ker(gamma(p)/m - Id), 25 exact on-shell p", "2", || {
        let mut e = 0.0f64;
        for (m, p) in &on {
            match dirac_kernel_dim(p, m, 0.0) {
                Ok(d) => e = e.max((d as f64 - 2.0).abs()),
                Err(x) => {
                    err = Err(x);
                    return Outcome(f64::INFINITY, false);
                }
            }
        }
        exact(e)
    }));
    out.push(run("symbols.dirac_kernel.off_shell", "dim ker(gamma(p)/m - Id), 25 exact off-shell p", "0", || {
        let mut e = 0.0f64;
        for (m, p) in &off {
            match dirac_kernel_dim(p, m, 0.0) {
                Ok(d) => e = e.max(d as f64),
                Err(x) => {
                    err = Err(x);
                    return Outcome(f64::INFINITY, false);
                }
            }
        }
        exact(e)
    }));
    std::mem::replace(&mut err, Ok(()))?;
    out.push(run("symbols.superspin0.factor", "eliminated factor on phi", "m^2 - |p|^2", || {
        let mut bad = 0.0;
        for (_, p) in on.iter().take(5).chain(off.iter().take(5)) {
            if !superspin0_constraints(p, None).factor_matches() {
                bad += 1.0;
            }
        }
        exact(bad)
    }));
    out.push(run("symbols.superspin0.rest_fermions", "fermion relations at p = e0, m = 1", "psibar1 = psi2, psibar2 = -psi1", || {
        let rep = superspin0_constraints(&Momentum::from_ints([1, 0, 0, 0]), Some(&Q::from_integer(1.into())));
        let want = [[cint(0, 0), cint(1, 0)], [cint(-1, 0), cint(0, 0)]];
        let e = (0..2)
            .flat_map(|a| (0..2).map(move |c| (a, c)))
            .map(|(a, c)| to_c64(&(rep.fermion_matrix[a][c].clone() - want[a][c].clone())).norm())
            .fold(0.0, f64::max);
        exact(e)
    }));
    out.push(run("symbols.multiplicity", "multiplicity(s, a, b), 2s, 2a, 2b <= 12", "membership in Sym^2a (x) Sym^2b", || {
        let mut bad = 0.0;
        for s in 0..=12u32 {
            for a in 0..=12u32 {
                for b in 0..=12u32 {
                    if multiplicity(s, a, b) as u64 != tensor_sym_decompose(a as u64, b as u64).mult(s as u64) {
                        bad += 1.0;
                    }
                }
            }
        }
        exact(bad)
    }));
    Ok(out)
}

// ---- pipeline ----

/// Grid used by the pipeline's convergence stage; the second pass halves `h`.
pub const PIPELINE_GRID: (usize, f64) = (5, 0.02);

pub fn seeds_json(s: &Seeds<f64>) -> Value {
    let c = |z: &C64| json!([z.re, z.im]);
    json!({ "a": c(&s.a), "b": s.b.as_ref().map(c), "u": [c(&s.u[0]), c(&s.u[1])] })
}

pub fn default_seeds() -> Seeds<f64> {
    Seeds { a: C64::new(1.0, 0.5), b: None, u: [C64::new(0.5, -0.25), C64::new(-0.75, 1.0)] }
}

/// ⋆f̂(q) for every mode of f (zero where f has no mode).
fn star_modes(f: &SuperFunction<f64>, qs: &[[f64; 4]]) -> Result<Vec<Multivector<f64>>, FourierError> {
    let ft = super_ft(f)?;
    Ok(qs.iter().map(|q| ft.mode(q)).collect())
}

pub fn cmd_pipeline(mass: &Q, momentum: &Momentum<Q>, seeds: &Seeds<f64>, tol: f64) -> Result<Report, ReportError> {
    let m = mass.to_f64();
    let p = momentum.to_f64();
    let c: ChiralData<f64> = solution_generator(&p, &m, seeds, tol)?;
    let f = chiral_expand(&c);
    let norm2 = p.norm2();
    let scale = p.p.iter().map(|x| x * x).sum::<f64>().max(1.0);
    let mut out = Vec::new();

    out.push(run("pipeline.1.orbit", "orbit of p, |p|^2 - m^2", "massive forward", || {
        let ok = classify_orbit(&p, tol) == OrbitClass::MassivePlus;
        let e = (norm2 - m * m).abs() / (m * m);
        Outcome(e, ok && e <= tol)
    }));
    out.push(run("pipeline.2.symbols.superspin0_factor", "eliminated factor on phi", "m^2 - |p|^2", || {
        let ok = superspin0_constraints(momentum, None).factor_matches();
        Outcome(if ok { 0.0 } else { 1.0 }, ok)
    }));
    out.push(run("pipeline.2.symbols.chiral_kernel_dim", "dim ker zeta_dbar(p)", "4", || {
        let d = dbar_null_space(&gamma_pair(&p), tol * scale).len();
        exact((d as f64 - 4.0).abs())
    }));
    let dirac = dirac_kernel_dim(&p, &m, tol * scale)?;
    out.push(run("pipeline.2.symbols.dirac_kernel_dim", "dim ker(gamma(p)/m - Id)", "2", || exact((dirac as f64 - 2.0).abs())));

    let qs: Vec<[f64; 4]> = f.modes().iter().map(|(q, _)| *q).collect();
    let star_f = star_modes(&f, &qs)?;
    let star_fbar = star_modes(&conjugate_sf(&f), &qs)?;
    out.push(run("pipeline.3.superfourier.chirality", "zeta_dbar_a(q) star f^(q)", "0", || {
        let mut e = 0.0f64;
        for (q, v) in qs.iter().zip(&star_f) {
            for a in 1..=2 {
                e = e.max(zeta_dbar(&Momentum { p: *q }, a).apply(v).max_abs_diff(&Multivector::zero()));
            }
        }
        within(e / scale, tol)
    }));
    out.push(run("pipeline.3.superfourier.momentum_wz", "kappa zeta_dbar2(q) star fbar^(q) + m star f^(q)", "0", || {
        let kappa = creal(d2_normalization().to_f64());
        let mut e = 0.0f64;
        for ((q, v), w) in qs.iter().zip(&star_f).zip(&star_fbar) {
            let lhs = zeta_dbar2(&Momentum { p: *q }).apply(w).scale(&kappa).add(&v.scale(&creal(m)));
            e = e.max(lhs.max_abs_diff(&Multivector::zero()));
        }
        within(e / scale, tol)
    }));
    let ex = exchange_check(&f)?;
    let it = intertwining_check(&f)?;
    out.push(run("pipeline.3.superfourier.exchange", "exchange identities on f", "0", || {
        within(ex.iter().copied().fold(0.0, f64::max) / scale, tol)
    }));
    out.push(run("pipeline.3.superfourier.intertwining", "D, Dbar, D2, Dbar2 transform identities on f", "0", || {
        within(it.iter().copied().fold(0.0, f64::max) / scale, tol)
    }));

    let wz = wz_operator(&f, &m)?;
    out.push(run("pipeline.4.components.wz_operator", "-kappa Dbar^2 fbar + m f", "0", || within(wz.max_abs() / scale, tol)));
    let res = component_residuals(&c, &m);
    out.push(run("pipeline.4.components.plane_wave", "(box + m^2) phi, Dirac, F - 2m phibar", "0", || {
        within(res.max_abs() / scale, tol)
    }));

    let (n, h) = PIPELINE_GRID;
    let coarse = grid_residual(&sample_chiral(&c, &Grid4::new(n, h)), m)?;
    let fine = grid_residual(&sample_chiral(&c, &Grid4::new(n, h / 2.0)), m)?;
    let amp = [&c.phi, &c.psi[0], &c.psi[1]].iter().map(|w| w.max_abs()).fold(0.0, f64::max);
    let gtol = grid_tolerance(h / 2.0, amp, norm2);
    let order = |a: f64, b: f64| if a == 0.0 && b == 0.0 { 2.0 } else { (a / b).log2() };
    let orders = [order(coarse.max_kg, fine.max_kg), order(coarse.max_dirac, fine.max_dirac)];
    out.push(run("pipeline.5.grid.residual", "finite-difference residual at h/2", format!("<= {gtol:.3e}"), || {
        let e = fine.max_kg.max(fine.max_dirac);
        Outcome(e, e <= gtol)
    }));
    out.push(run("pipeline.5.grid.order", "log2(residual(h) / residual(h/2))", "2.0 +- 0.2", || {
        let e = orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
        Outcome(e, e <= 0.2)
    }));

    let data = json!({
        "mass": mass.to_string(),
        "momentum": momentum.to_json(),
        "seeds": seeds_json(seeds),
        "solution": c.to_json(),
        "grid": { "n": n, "coarse": coarse, "fine": fine, "tolerance": gtol, "orders": orders },
    });
    Ok(Report::new("pipeline", None, tol, out, data))
}

/// Plane-wave and finite-difference residuals of the generated solution, plus
/// the auxiliary-coefficient check when `generators` is given (needs an exactly on-shell p).
pub fn cmd_wz_check(
    mass: &Q,
    momentum: &Momentum<Q>,
    seeds: &Seeds<f64>,
    grid: (usize, f64),
    generators: Option<usize>,
    tol: f64,
) -> Result<Report, ReportError> {
    let m = mass.to_f64();
    let p = momentum.to_f64();
    let c = solution_generator(&p, &m, seeds, tol)?;
    let f = chiral_expand(&c);
    let scale = p.p.iter().map(|x| x * x).sum::<f64>().max(1.0);
    let mut out = Vec::new();
    let wz = wz_operator(&f, &m)?;
    out.push(run("wz.operator", "-kappa Dbar^2 fbar + m f", "0", || within(wz.max_abs() / scale, tol)));
    let res = component_residuals(&c, &m);
    out.push(run("wz.components", "(box + m^2) phi, Dirac, F - 2m phibar", "0", || within(res.max_abs() / scale, tol)));
    let (n, h) = grid;
    let coarse = grid_residual(&sample_chiral(&c, &Grid4::new(n, h)), m)?;
    let fine = grid_residual(&sample_chiral(&c, &Grid4::new(n, h / 2.0)), m)?;
    let amp = [&c.phi, &c.psi[0], &c.psi[1]].iter().map(|w| w.max_abs()).fold(0.0, f64::max);
    let gtol = grid_tolerance(h, amp, p.norm2());
    out.push(run("wz.grid.residual", format!("finite-difference residual at h = {h}"), format!("<= {gtol:.3e}"), || {
        let e = coarse.max_kg.max(coarse.max_dirac);
        Outcome(e, e <= gtol)
    }));
    let order = |a: f64, b: f64| if a == 0.0 && b == 0.0 { 2.0 } else { (a / b).log2() };
    let orders = [order(coarse.max_kg, fine.max_kg), order(coarse.max_dirac, fine.max_dirac)];
    out.push(run("wz.grid.order", "log2(residual(h) / residual(h/2))", "2.0 +- 0.2", || {
        Outcome(orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max), orders.iter().all(|o| (o - 2.0).abs() <= 0.2))
    }));
    let mut equivalence = Value::Null;
    if let Some(k) = generators {
        let gap = momentum.norm2() - mass.clone() * mass.clone();
        if gap != Q::from_integer(0.into()) {
            return Err(GeometryError::OffOrbit { residual: gap.to_f64().abs(), allowed: 0.0 }.into());
        }
        let (rep, ms) = timed(|| crate::components::wz_equivalence_check_at(k, momentum, mass));
        let rep = rep?;
        out.push(Check {
            id: format!("wz.aux_coefficients.n{k}"),
            status: if rep.passed { Status::Pass } else { Status::Fail },
            lhs: format!("solution set over Lambda_{k}, dim {}", rep.solution_dim),
            rhs: format!("span of scalar solutions, dim {}", rep.expected_dim),
            max_error: (rep.solution_dim as f64 - rep.expected_dim as f64).abs(),
            runtime_ms: ms,
        });
        equivalence = serde_json::to_value(&rep).expect("serializes");
    }
    let data = json!({
        "mass": mass.to_string(),
        "momentum": momentum.to_json(),
        "seeds": seeds_json(seeds),
        "grid": { "n": n, "h": h, "coarse": coarse, "fine": fine, "tolerance": gtol, "tolerance_rule": "10 h^2 (field scale) max(|p|^2, 1)", "orders": orders },
        "aux_equivalence": equivalence,
    });
    Ok(Report::new("wz-check", None, tol, out, data))
}
