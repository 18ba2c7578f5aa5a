//! The `certiposi` command line: argument parsing, the five commands and their exit codes.
//!
//! Every command reads raw systems and normalizes them itself. Verification reads nothing but
//! the system, objective and certificate files.

pub mod config;
pub mod io;

use crate::approx::{markov_bound, polya_degree};
use crate::certify::{
    build_certificate, check_ball_containment, estimate_fstar, normalize_system, putinar_params, theoretical_degree, verify_with_system,
    BudgetMode, CertificateJson, CertifyOptions, SemialgSystem,
};
use crate::error::{Error, Result};
use crate::grid::{lattice_q, GridSpec};
use crate::loja::{exponent_formula_bounds, loja_report, LojaOptions, Objective};
use crate::polyalg::json::bernstein_to_json;
use crate::polyalg::{bnorm, mono_to_bernstein, Layout, MonomialPoly, Scaled, SimplexDomain};
use crate::rational::{fmt_rational, from_f64, parse_rational, to_f64, Q};
use clap::{Parser, Subcommand, ValueEnum};
use config::RunConfig;
use io::{parse_objective, parse_system, read_text, render, write_atomic};
use num_traits::{Signed, ToPrimitive};
use serde_json::json;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_NOT_POSITIVE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "certiposi", version, about = "Exact positivity certificates on semi-algebraic sets")]
pub struct Cli {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree budgets, Markov and Polya bounds, exponent bound.
    Bounds(BoundsArgs),
    /// Build a certificate and verify it.
    Certify(CertifyArgs),
    /// Check a certificate exactly.
    Verify(VerifyArgs),
    /// Lojasiewicz data of a system under the CQC.
    Loja(LojaArgs),
    /// Elevate one polynomial until its Bernstein coefficients are nonnegative.
    Polya(PolyaArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Fg,
    Eg,
    Cqc,
}

impl From<ModeArg> for BudgetMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fg => BudgetMode::Fg,
            ModeArg::Eg => BudgetMode::Eg,
            ModeArg::Cqc => BudgetMode::Cqc,
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct LojaParams {
    /// Lojasiewicz constant of the pair chosen by --mode.
    #[arg(long = "loja-c")]
    pub loja_c: Option<f64>,
    #[arg(long = "loja-L")]
    pub loja_l: Option<f64>,
    /// fg: F <= c G^(1/L); eg: E <= c G^(1/L); cqc: E <= c G.
    #[arg(long, value_enum, default_value = "fg")]
    pub mode: ModeArg,
}

#[derive(clap::Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub objective: Option<PathBuf>,
    #[arg(long)]
    pub fstar: Option<String>,
    #[command(flatten)]
    pub loja: LojaParams,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub objective: PathBuf,
    #[arg(long, conflicts_with = "estimate_fstar")]
    pub fstar: Option<String>,
    #[arg(long)]
    pub estimate_fstar: bool,
    #[command(flatten)]
    pub loja: LojaParams,
    #[arg(long)]
    pub worst_case: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub objective: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct LojaArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, requires = "fstar")]
    pub objective: Option<PathBuf>,
    #[arg(long)]
    pub fstar: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct PolyaArgs {
    /// Polynomial file: a term list or {"n": .., "terms": [..]}.
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub s_hat: Option<String>,
    /// Lower bound of the polynomial on D; estimated on a lattice when absent.
    #[arg(long)]
    pub pstar: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

/// Caps rayon's pool at CERTIPOSI_THREADS when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CERTIPOSI_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::InvalidInput(format!("CERTIPOSI_THREADS = {v:?}")))?;
        if n > 0 {
            // A second initialization in the same process is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    Ok(())
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::NotPositive(_) => EXIT_NOT_POSITIVE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first) and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::from_toml(&read_text(p)?)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, &cfg),
        Command::Certify(a) => cmd_certify(a, &cfg),
        Command::Verify(a) => cmd_verify(a, &cfg),
        Command::Loja(a) => cmd_loja(a, &cfg),
        Command::Polya(a) => cmd_polya(a, &cfg),
    }
}

struct Inputs {
    raw: SemialgSystem,
    sys: SemialgSystem,
    f: Option<MonomialPoly>,
}

fn load(system: &Path, objective: Option<&Path>) -> Result<Inputs> {
    let raw = parse_system(&read_text(system)?)?.to_system()?;
    let sys = normalize_system(&raw)?;
    let f = objective.map(|p| parse_objective(&read_text(p)?, Some(raw.n()))).transpose()?;
    Ok(Inputs { raw, sys, f })
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn norm_b(f: &MonomialPoly, dom: &SimplexDomain) -> Result<Q> {
    Ok(bnorm(&mono_to_bernstein(f, f.degree(), dom)?))
}

fn positive_fstar(s: &str) -> Result<Q> {
    let v = parse_rational(s)?;
    if !v.is_positive() {
        return Err(Error::NotPositive(format!("f* = {s} is not positive")));
    }
    Ok(v)
}

fn loja_options(cfg: &RunConfig, seed: u64) -> LojaOptions {
    LojaOptions {
        seed,
        cloud: cfg.grid.loja_cloud,
        rays_per_dim: cfg.grid.rays_per_dim,
        grid_points: cfg.grid.loja_points,
        samples: cfg.grid.loja_samples,
        tau_act: cfg.tolerances.tau_act,
        residual_tol: cfg.tolerances.residual,
        tolerance: cfg.tolerances.verify,
    }
}

/// The E/G constant of a CQC system, estimated when not supplied.
fn cqc_constant(sys: &SemialgSystem, cfg: &RunConfig, seed: u64) -> Result<f64> {
    let rep = loja_report(sys, None, &loja_options(cfg, seed))?;
    if !rep.c_eg_bound.is_finite() {
        return Err(Error::Numerical("the E/G constant is not finite".into()));
    }
    Ok(rep.c_eg_bound)
}

fn cmd_bounds(a: &BoundsArgs, cfg: &RunConfig) -> Result<u8> {
    let seed = a.seed.unwrap_or(cfg.seed);
    let inp = load(&a.system, a.objective.as_deref())?;
    let sys = &inp.sys;
    let (n, r, dg) = (sys.n(), sys.r(), sys.degree());
    let mut out = json!({
        "n": n,
        "r": r,
        "deg_g": dg,
        "s_hat": fmt_rational(sys.dom.s_hat()),
        "diam_D": sys.dom.diameter(),
        "scale_factors": sys.scale_factors.iter().map(fmt_rational).collect::<Vec<_>>(),
        "markov_bound_g": markov_bound(dg, n),
        "exponent_bound": exponent_formula_bounds(n, r.max(1), dg.max(1)),
        "seed": seed,
    });
    let mut notes: Vec<String> = vec![];
    if let Some(f) = &inp.f {
        let nf = norm_b(f, &sys.dom)?;
        let mut obj = json!({
            "deg_f": f.degree(),
            "norm_b_f": fmt_rational(&nf),
            "markov_bound_f": markov_bound(f.degree(), n),
        });
        if let Some(s) = &a.fstar {
            let fstar = positive_fstar(s)?;
            obj["fstar"] = json!(fmt_rational(&fstar));
            obj["eps"] = json!(to_f64(&(&fstar / &nf)));
            // Valid only when f >= f* on all of D, not just on S.
            obj["polya_degree_if_f_ge_fstar_on_D"] = json!(polya_degree(f.degree(), &nf, &fstar)?.to_string());
            let mode = BudgetMode::from(a.loja.mode);
            let c = match (a.loja.loja_c, mode) {
                (Some(c), _) => Some((c, "supplied")),
                (None, BudgetMode::Cqc) if r > 0 => Some((cqc_constant(sys, cfg, seed)?, "estimated c_EG_bound")),
                _ => None,
            };
            match c {
                Some((c, source)) => {
                    let b = theoretical_degree(f, sys, Some(&fstar), c, a.loja.loja_l.unwrap_or(1.0), mode)?;
                    out["budget"] = serde_json::to_value(b)?;
                    out["loja_c_source"] = json!(source);
                }
                None => notes.push("no degree budget: pass --loja-c, or --mode cqc to estimate it".into()),
            }
        } else {
            notes.push("no degree budget: pass --fstar".into());
        }
        out["objective"] = obj;
    }
    out["notes"] = json!(notes);
    emit(&render(&out)?, a.output.as_ref())?;
    Ok(EXIT_OK)
}

fn cmd_certify(a: &CertifyArgs, cfg: &RunConfig) -> Result<u8> {
    let seed = a.seed.unwrap_or(cfg.seed);
    let inp = load(&a.system, Some(&a.objective))?;
    let (sys, f) = (&inp.sys, inp.f.as_ref().expect("objective loaded"));
    let (fstar, fstar_source) = match (&a.fstar, a.estimate_fstar || cfg.estimate_fstar) {
        (Some(s), _) => (positive_fstar(s)?, "supplied"),
        (None, true) => {
            let v = estimate_fstar(f, sys, cfg.grid.fstar_samples, seed)?;
            if !(v > 0.0) {
                return Err(Error::NotPositive(format!("estimated f* = {v}")));
            }
            (from_f64(v)?, "estimated")
        }
        (None, false) => return Err(Error::InvalidInput("pass --fstar or --estimate-fstar".into())),
    };
    let nf = norm_b(f, &sys.dom)?;
    let eps = &fstar / &nf;
    if eps > Q::from_integer(1.into()) {
        return Err(Error::InvalidInput(format!("f* = {} exceeds ||f||_B = {}", fmt_rational(&fstar), fmt_rational(&nf))));
    }
    let df = f.degree().max(1) as f64;
    let mode = BudgetMode::from(a.loja.mode);
    // (c, L) of the F/G pair the construction runs on.
    let (c, l, loja_source) = match (a.loja.loja_c, mode) {
        (Some(c), BudgetMode::Fg) => (c, a.loja.loja_l.unwrap_or(1.0), "supplied"),
        (Some(c), BudgetMode::Eg) => {
            let l = a.loja.loja_l.unwrap_or(1.0);
            (2f64.powf(l) * df.powf(2.0 * l) * c, l, "supplied E/G constant")
        }
        (Some(c), BudgetMode::Cqc) => (2.0 * df * df * c, 1.0, "supplied CQC constant"),
        (None, _) if sys.r() == 0 => (1.0, 1.0, "unused"),
        (None, _) => (2.0 * df * df * cqc_constant(sys, cfg, seed)?, 1.0, "estimated c_EG_bound"),
    };
    let params = putinar_params(&eps, l, c, sys.r(), &nf, &fstar)?;
    let mut opts = CertifyOptions {
        feasibility_points: cfg.grid.feasibility_points,
        max_coefficients: cfg.max_coefficients,
        worst_case: a.worst_case || cfg.worst_case,
        seed,
        fstar_source: fstar_source.into(),
        ..CertifyOptions::default()
    };
    opts.plateau.grid = GridSpec { points_per_dim: cfg.grid.points_per_dim, total_points: cfg.grid.plateau_points };
    opts.plateau.worst_case = opts.worst_case;
    let cert = build_certificate(f, sys, &params, &opts)?;

    let mut j = cert.to_json();
    let eta = j.provenance["eta"].as_u64().and_then(|v| u32::try_from(v).ok()).unwrap_or(cert.m);
    let budget = theoretical_degree(f, sys, Some(&fstar), c, l, BudgetMode::Fg)?.with_certificate(eta, cert.m);
    j.provenance["budget"] = serde_json::to_value(&budget)?;
    j.provenance["loja_source"] = json!(loja_source);
    j.provenance["ball_check"] = serde_json::to_value(check_ball_containment(sys, cfg.grid.ball_samples, seed))?;
    let text = render(&j)?;
    // Verify what was written, not what was built.
    let back: CertificateJson = serde_json::from_str(&text)?;
    let report = verify_with_system(f, &back, &inp.raw);
    emit(&text, a.output.as_ref().or(cfg.output.certificate.as_ref()))?;
    eprintln!("certificate: m = {}, lambda = {}, verified = {}", cert.m, fmt_rational(&cert.lambda), report.passed);
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("  check {} failed: {}", c.name, c.detail);
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> Result<u8> {
    let inp = load(&a.system, Some(&a.objective))?;
    let f = inp.f.as_ref().expect("objective loaded");
    let cert: CertificateJson = serde_json::from_str(&read_text(&a.cert)?).map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    let report = verify_with_system(f, &cert, &inp.raw);
    let out = json!({ "passed": report.passed, "checks": report.checks, "seed": cfg.seed });
    let text = render(&out)?;
    match a.output.as_ref().or(cfg.output.report.as_ref()) {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_loja(a: &LojaArgs, cfg: &RunConfig) -> Result<u8> {
    let seed = a.seed.unwrap_or(cfg.seed);
    let inp = load(&a.system, a.objective.as_deref())?;
    let mut opts = loja_options(cfg, seed);
    if let Some(s) = a.samples {
        opts.samples = s;
    }
    let objective = match (&inp.f, &a.fstar) {
        (Some(f), Some(s)) => Some(Objective { f, fstar: parse_rational(s)?, norm_b_f: norm_b(f, &inp.sys.dom)? }),
        _ => None,
    };
    let rep = loja_report(&inp.sys, objective.as_ref(), &opts)?;
    let mut v = serde_json::to_value(&rep)?;
    v["seed"] = json!(seed);
    v["ball_check"] = serde_json::to_value(check_ball_containment(&inp.sys, cfg.grid.ball_samples, seed))?;
    emit(&render(&v)?, a.output.as_ref().or(cfg.output.report.as_ref()))?;
    Ok(EXIT_OK)
}

fn cmd_polya(a: &PolyaArgs, cfg: &RunConfig) -> Result<u8> {
    let seed = a.seed.unwrap_or(cfg.seed);
    let f = parse_objective(&read_text(&a.poly)?, None)?;
    let n = f.n();
    let dom = match &a.s_hat {
        Some(s) => SimplexDomain::new(n, parse_rational(s)?)?,
        None => SimplexDomain::default_for(n),
    };
    let d = f.degree();
    let b = mono_to_bernstein(&f, d, &dom)?;
    let nb = bnorm(&b);
    let (pstar, source) = match &a.pstar {
        Some(s) => (parse_rational(s)?, "supplied"),
        None => {
            let k = GridSpec { points_per_dim: cfg.grid.points_per_dim, total_points: cfg.grid.plateau_points }.resolution(n);
            let vals = lattice_q(&dom, k).iter().map(|x| f.eval(x)).collect::<Result<Vec<Q>>>()?;
            (vals.into_iter().min().expect("lattice is nonempty"), "lattice minimum (estimated)")
        }
    };
    if !pstar.is_positive() {
        return Err(Error::NotPositive(format!("p* = {} on D", fmt_rational(&pstar))));
    }
    let cap_big = polya_degree(d, &nb, &pstar)?;
    let cap = cap_big.to_u32().filter(|&c| Layout::count(n, c) <= cfg.max_coefficients);
    let scaled = Scaled::from_poly(&b);
    let mut m = d.max(1).min(cap.unwrap_or(u32::MAX).max(d));
    let mut schedule = vec![];
    let found = loop {
        if Layout::count(n, m) > cfg.max_coefficients {
            return Err(Error::BudgetExceeded(format!("degree {m} exceeds {} coefficients", cfg.max_coefficients)));
        }
        schedule.push(m);
        let e = if m == d { scaled.clone() } else { scaled.elevate_to(m) };
        if e.all_nonnegative() {
            break e.to_poly(&dom);
        }
        match cap {
            Some(c) if m >= c => return Err(Error::BudgetExceeded(format!("coefficients still negative at the Polya degree {c}"))),
            Some(c) => m = (2 * m).min(c),
            None => m *= 2,
        }
    };
    let out = json!({
        "n": n,
        "s_hat": fmt_rational(dom.s_hat()),
        "degree": d,
        "norm_b": fmt_rational(&nb),
        "pstar": fmt_rational(&pstar),
        "pstar_source": source,
        "polya_degree": cap_big.to_string(),
        "m": found.m(),
        "schedule": schedule,
        "min_coefficient": fmt_rational(&found.min_coeff()),
        "bernstein": bernstein_to_json(&found),
        "seed": seed,
    });
    emit(&render(&out)?, a.output.as_ref().or(cfg.output.report.as_ref()))?;
    Ok(EXIT_OK)
}
