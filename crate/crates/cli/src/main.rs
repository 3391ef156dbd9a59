use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use superkit::algebra_core::{chiral_kernel, dbar_null_space, exact_complex_json, Monomial, CHIRAL_PARAMS};
use superkit::components::{solution_generator, Seeds};
use superkit::linalg::null_space;
use superkit::repdecomp::{half_str, parse_half, scalar_superfield_content, superspin_multiplet, tensor_sym_decompose};
use superkit::report::{self, closed_form_mismatches, env_tolerance, Report};
use superkit::scalar::{Real, C64, Q};
use superkit::spin_geometry::{classify_orbit, gamma_pair, parse_rational, Momentum};
use superkit::superfourier::{inverse_super_ft, super_ft, Domain, SuperFunction};
use superkit::symbols::{dirac_symbol, fmt_c, superspin0_constraints};

#[derive(Parser, Debug)]
#[command(name = "superkit", version, about = "Superspace symbols, super Fourier transform and Wess-Zumino checks")]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a seeded identity suite: all, algebra, superfourier, symbols, brackets.
    Identities {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Decompose Sym^{2a} (x) Sym^{2b} into irreducibles.
    Decompose {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Little-group content of the superspin multiplet.
    Multiplet {
        #[arg(long)]
        sigma: String,
    },
    /// Superspin content of a scalar superfield of spin sigma.
    Content {
        #[arg(long)]
        sigma: String,
    },
    /// Exact kernel of a symbol at a momentum.
    Kernel {
        /// dirac, chiral or superspin0
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        mass: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        momentum: String,
    },
    /// Super Fourier transform of a superfunction file (inverse for momentum-side input).
    Superft {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// On-shell chiral solution in components.
    Solve {
        #[arg(long)]
        mass: String,
        #[arg(long, allow_hyphen_values = true)]
        momentum: String,
        /// a_re,a_im,u1_re,u1_im,u2_re,u2_im
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
    },
    /// Plane-wave and finite-difference residuals of the generated solution.
    WzCheck {
        #[arg(long)]
        mass: String,
        #[arg(long, allow_hyphen_values = true)]
        momentum: String,
        /// n,h
        #[arg(long, default_value = "5,0.02")]
        grid: String,
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// Also compare solution sets over an auxiliary Grassmann algebra with this many generators.
        #[arg(long)]
        generators: Option<usize>,
    },
    /// Orbit class of a momentum.
    OrbitClassify {
        #[arg(long, allow_hyphen_values = true)]
        momentum: String,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Symbols, transforms and component residuals for one on-shell solution.
    Pipeline {
        #[arg(long)]
        mass: String,
        #[arg(long, allow_hyphen_values = true)]
        momentum: String,
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
    },
}

/// Failure before any check ran: bad input or an invalid request.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

enum Outcome {
    Report(Report),
    Value(Value, String),
}

fn parse_momentum(s: &str) -> Result<Momentum<Q>, UsageError> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t)?;
        return Ok(Momentum::from_json(&v)?);
    }
    let parts: Vec<Q> = t.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    let p: [Q; 4] = parts.try_into().map_err(|v: Vec<Q>| UsageError(format!("momentum needs 4 entries, got {}", v.len())))?;
    Ok(Momentum { p })
}

fn parse_mass(s: &str) -> Result<Q, UsageError> {
    let m = parse_rational(s)?;
    if m <= Q::from_integer(0.into()) {
        return Err(UsageError(format!("mass must be positive, got {s}")));
    }
    Ok(m)
}

fn parse_seeds(s: Option<&str>) -> Result<Seeds<f64>, UsageError> {
    let Some(s) = s else { return Ok(report::default_seeds()) };
    let x: Vec<f64> = s.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<_, _>>()?;
    if x.len() != 6 {
        return Err(UsageError(format!("seeds need 6 numbers a_re,a_im,u1_re,u1_im,u2_re,u2_im, got {}", x.len())));
    }
    Ok(Seeds { a: C64::new(x[0], x[1]), b: None, u: [C64::new(x[2], x[3]), C64::new(x[4], x[5])] })
}

fn parse_grid(s: &str) -> Result<(usize, f64), UsageError> {
    let (n, h) = s.split_once(',').ok_or_else(|| UsageError(format!("grid must be n,h, got {s}")))?;
    let h: f64 = h.trim().parse()?;
    if h <= 0.0 {
        return Err(UsageError("grid spacing must be positive".into()));
    }
    Ok((n.trim().parse()?, h))
}

fn two_half(s: &str) -> Result<u64, UsageError> {
    Ok(parse_half(s)?)
}

fn kernel(symbol: &str, mass: Option<&str>, momentum: &str) -> Result<Outcome, UsageError> {
    let p = parse_momentum(momentum)?;
    let need_mass = || mass.ok_or_else(|| UsageError(format!("--mass is required for symbol {symbol}"))).and_then(parse_mass);
    let (value, text) = match symbol {
        "dirac" => {
            let m = need_mass()?;
            let basis = null_space(&dirac_symbol(&p, &m)?, 0.0);
            let on_orbit = p.norm2() == m.clone() * m.clone();
            let mut text = format!("dirac symbol gamma(p)/m - Id, kernel dim {}\n", basis.len());
            for v in &basis {
                let _ = writeln!(text, "  [{}]", v.iter().map(fmt_c).collect::<Vec<_>>().join(", "));
            }
            let v = json!({
                "symbol": "dirac",
                "kernel_dim": basis.len(),
                "basis": basis.iter().map(|v| v.iter().map(exact_complex_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "constraints": { "on_orbit": on_orbit, "norm2": p.norm2().to_string(), "mass_squared": (m.clone() * m).to_string() },
            });
            (v, text)
        }
        "chiral" => {
            let b = gamma_pair(&p);
            let kern = dbar_null_space(&b, 0.0);
            let closed = chiral_kernel(&b);
            let mismatches = closed_form_mismatches(&kern, &closed);
            let mut text = format!("chiral kernel of zeta_dbar(p), dim {}, closed form mismatches {mismatches}\n", kern.len());
            for (name, v) in CHIRAL_PARAMS.iter().zip(&closed) {
                let terms: Vec<String> = Monomial::all().filter(|m| !v.get(*m).is_zero()).map(|m| format!("{} {m}", fmt_c(v.get(m)))).collect();
                let _ = writeln!(text, "  {name:>4}: {}", terms.join(" + "));
            }
            let v = json!({
                "symbol": "chiral",
                "kernel_dim": kern.len(),
                "basis": CHIRAL_PARAMS.iter().zip(&closed).map(|(n, v)| json!({"parameter": n, "vector": v.to_json()})).collect::<Vec<_>>(),
                "constraints": { "closed_form_mismatches": mismatches },
            });
            (v, text)
        }
        "superspin0" => {
            let m = need_mass()?;
            let rep = superspin0_constraints(&p, Some(&m));
            let (_, bos, fer) = rep.dims_at_mass.clone().expect("mass supplied");
            let text = format!(
                "superspin-0 constraints\n  phi factor  {}\n  expected    {}\n  matches     {}\n  real solution dims: bosonic {bos}, fermionic {fer}\n",
                rep.phi_factor,
                rep.expected_factor,
                rep.factor_matches()
            );
            let v = json!({
                "symbol": "superspin0",
                "kernel_dim": bos + fer,
                "basis": Value::Null,
                "constraints": rep.to_json(),
            });
            (v, text)
        }
        other => return Err(UsageError(format!("unknown symbol {other:?}; expected dirac, chiral or superspin0"))),
    };
    Ok(Outcome::Value(value, text))
}

fn superft(input: &PathBuf, output: Option<&PathBuf>) -> Result<Outcome, UsageError> {
    let raw = std::fs::read_to_string(input)?;
    let f = SuperFunction::from_json(&serde_json::from_str(&raw)?)?;
    let g = match f.domain {
        Domain::Position => super_ft(&f)?,
        Domain::Momentum => inverse_super_ft(&f)?,
    };
    let v = g.to_json();
    let text = format!("{} modes transformed\n", g.modes().len());
    if let Some(path) = output {
        std::fs::write(path, serde_json::to_string_pretty(&v)?)?;
        return Ok(Outcome::Value(json!({ "output": path, "modes": g.modes().len() }), text));
    }
    Ok(Outcome::Value(v, text))
}

fn solve(mass: &str, momentum: &str, seeds: Option<&str>, tol: f64) -> Result<Outcome, UsageError> {
    let m = parse_mass(mass)?.to_f64();
    let p = parse_momentum(momentum)?.to_f64();
    let c = solution_generator(&p, &m, &parse_seeds(seeds)?, tol)?;
    let v = c.to_json();
    let mut text = format!("{:>5}  {:>24}  momentum\n", "field", "amplitude");
    for (name, f) in [("phi", &c.phi), ("psi1", &c.psi[0]), ("psi2", &c.psi[1]), ("F", &c.f)] {
        for (q, a) in f.terms() {
            let _ = writeln!(text, "{name:>5}  {:>24}  {q:?}", format!("{:.6}{:+.6}i", a.re, a.im));
        }
    }
    Ok(Outcome::Value(v, text))
}

fn orbit(momentum: &str, tol: f64) -> Result<Outcome, UsageError> {
    let p = parse_momentum(momentum)?;
    let class = classify_orbit(&p, tol);
    let v = json!({ "momentum": p.to_json(), "norm2": p.norm2().to_string(), "class": class });
    Ok(Outcome::Value(v, format!("{class:?} (|p|^2 = {})\n", p.norm2())))
}

fn execute(cmd: &Cmd) -> Result<Outcome, UsageError> {
    let tol = env_tolerance()?;
    Ok(match cmd {
        Cmd::Identities { suite, seed } => Outcome::Report(report::cmd_identities(suite, *seed, tol)?),
        Cmd::Decompose { alpha, beta } => {
            let (a, b) = (two_half(alpha)?, two_half(beta)?);
            let d = tensor_sym_decompose(a, b);
            let v = json!({ "alpha": half_str(a as i64), "beta": half_str(b as i64), "spins": d.to_json(), "dimension": d.dimension() });
            Outcome::Value(v, d.table("spin"))
        }
        Cmd::Multiplet { sigma } => {
            let m = superspin_multiplet(two_half(sigma)?);
            let text = format!("{}\nbosonic\n{}fermionic\n{}", m.total(), m.even.table("spin"), m.odd.table("spin"));
            Outcome::Value(m.to_json(), text)
        }
        Cmd::Content { sigma } => {
            let c = scalar_superfield_content(two_half(sigma)?);
            let text = format!("{}total dim {}, audit {}\n", c.superspins.table("superspin"), c.total_dim, if c.audit_ok { "ok" } else { "FAILED" });
            Outcome::Value(c.to_json(), text)
        }
        Cmd::Kernel { symbol, mass, momentum } => kernel(symbol, mass.as_deref(), momentum)?,
        Cmd::Superft { input, output } => superft(input, output.as_ref())?,
        Cmd::Solve { mass, momentum, seeds } => solve(mass, momentum, seeds.as_deref(), tol)?,
        Cmd::WzCheck { mass, momentum, grid, seeds, generators } => Outcome::Report(report::cmd_wz_check(
            &parse_mass(mass)?,
            &parse_momentum(momentum)?,
            &parse_seeds(seeds.as_deref())?,
            parse_grid(grid)?,
            *generators,
            tol,
        )?),
        Cmd::OrbitClassify { momentum, tol } => orbit(momentum, *tol)?,
        Cmd::Pipeline { mass, momentum, seeds } => {
            Outcome::Report(report::cmd_pipeline(&parse_mass(mass)?, &parse_momentum(momentum)?, &parse_seeds(seeds.as_deref())?, tol)?)
        }
    })
}

/// Write to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.cmd) {
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Outcome::Report(r)) => {
            if cli.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&r.to_json()).expect("json")));
            } else {
                emit(&r.table());
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Outcome::Value(v, text)) => {
            if cli.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
            } else {
                emit(&text);
            }
            ExitCode::SUCCESS
        }
    }
}
