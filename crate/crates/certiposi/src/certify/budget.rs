use super::system::SemialgSystem;
use crate::error::{Error, Result};
use crate::polyalg::{bnorm, mono_to_bernstein, MonomialPoly};
use crate::rational::{to_f64, Q};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// Which Łojasiewicz pair the supplied (c, L) describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMode {
    /// F ≤ c·G^{1/L} directly.
    Fg,
    /// E ≤ c·G^{1/L}; converted with F ≤ 2d_f²·E.
    Eg,
    /// CQC: L = 1 and c is the E/G constant.
    Cqc,
}

/// Inputs of the closed-form chain, detached from any polynomial so it can be swept.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetInputs {
    pub n: usize,
    pub r: usize,
    pub deg_f: u32,
    pub deg_g: u32,
    pub eps: f64,
    pub c: f64,
    pub loja_l: f64,
    pub mode: BudgetMode,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DegreeBudget {
    pub mode: BudgetMode,
    pub eps: f64,
    pub loja_l: f64,
    /// The F/G constant the chain runs on.
    pub c_eff: f64,
    pub delta: f64,
    pub nu: Option<f64>,
    pub m_prime_theory: f64,
    pub eta_theory: f64,
    /// 6·r·c·ε^{−L}, relative to ‖f‖_B.
    pub norm_p_bound: f64,
    pub m_theory: f64,
    /// n²·r·d(g)⁶·c⁷·ε^{−(7L+3)} without constant.
    pub m_asymptotic: f64,
    /// Exact η of a constructed p, when a certificate is at hand.
    pub eta: Option<u32>,
    pub m_final: Option<u32>,
    pub formulas: Vec<String>,
}

impl DegreeBudget {
    pub fn with_certificate(mut self, eta: u32, m_final: u32) -> Self {
        self.eta = Some(eta);
        self.m_final = Some(m_final);
        self
    }
}

/// Composes δ = ε^L/c, ν = δε/(20r), m' = ⌈16384·n·d(g)⁴/(δ²ν)⌉, η = max(d_f, 2m' + d(g)),
/// ‖p‖_B ≤ 6rcε^{−L}‖f‖_B and the Polya degree η²‖p‖_B/(f*/4) with f* = ε‖f‖_B.
pub fn degree_chain(inp: &BudgetInputs) -> Result<DegreeBudget> {
    if !(inp.eps > 0.0 && inp.eps <= 1.0) {
        return Err(Error::InvalidInput(format!("eps = {} must lie in (0, 1]", inp.eps)));
    }
    if !(inp.c > 0.0) || !(inp.loja_l >= 1.0) {
        return Err(Error::InvalidInput("need c > 0 and L >= 1".into()));
    }
    let df = inp.deg_f as f64;
    let (l, c_eff) = match inp.mode {
        BudgetMode::Fg => (inp.loja_l, inp.c),
        BudgetMode::Eg => (inp.loja_l, 2f64.powf(inp.loja_l) * df.powf(2.0 * inp.loja_l) * inp.c),
        BudgetMode::Cqc => (1.0, 2.0 * df * df * inp.c),
    };
    if !(c_eff > 0.0) {
        return Err(Error::InvalidInput("the E/G conversion needs deg f >= 1".into()));
    }
    let eps = inp.eps;
    let (n, r, dg) = (inp.n as f64, inp.r as f64, inp.deg_g as f64);
    let delta = eps.powf(l) / c_eff;
    let (nu, m_prime, eta, norm_p) = if inp.r == 0 {
        (None, 0.0, df, 1.0)
    } else {
        let nu = delta * eps / (20.0 * r);
        let mp = (16384.0 * n * dg.powi(4) / (delta * delta * nu)).ceil();
        (Some(nu), mp, df.max(2.0 * mp + dg), 6.0 * r * c_eff * eps.powf(-l))
    };
    let m_theory = (eta * eta * norm_p * 4.0 / eps).ceil();
    let m_asymptotic = n * n * r * dg.powi(6) * c_eff.powi(7) * eps.powf(-(7.0 * l + 3.0));
    let mut formulas = vec![
        "delta = eps^L / c".to_string(),
        "nu = delta * eps / (20 r)".into(),
        "m' = ceil(16384 n d(g)^4 / (delta^2 nu))".into(),
        "eta = max(deg f, 2 m' + d(g))".into(),
        "norm_p <= 6 r c eps^-L ||f||_B".into(),
        "m = ceil(eta^2 * norm_p / (f*/4)), f* = eps ||f||_B".into(),
        "asymptotic: n^2 r d(g)^6 c^7 eps^-(7L+3)".into(),
    ];
    match inp.mode {
        BudgetMode::Eg => formulas.insert(0, "c = 2^L d(f)^(2L) c_EG".into()),
        BudgetMode::Cqc => formulas.insert(0, "L = 1, c = 2 d(f)^2 c_EG; asymptotic c^7 eps^-10".into()),
        BudgetMode::Fg => {}
    }
    Ok(DegreeBudget {
        mode: inp.mode,
        eps,
        loja_l: l,
        c_eff,
        delta,
        nu,
        m_prime_theory: m_prime,
        eta_theory: eta,
        norm_p_bound: norm_p,
        m_theory,
        m_asymptotic,
        eta: None,
        m_final: None,
        formulas,
    })
}

/// Budget for a concrete objective and system; ε = f*/‖f‖_B.
pub fn theoretical_degree(f: &MonomialPoly, sys: &SemialgSystem, fstar: Option<&Q>, c: f64, loja_l: f64, mode: BudgetMode) -> Result<DegreeBudget> {
    let fstar = fstar.ok_or_else(|| Error::InvalidInput("theoretical degree needs f*".into()))?;
    if !fstar.is_positive() {
        return Err(Error::InvalidInput("f* must be positive".into()));
    }
    let nf = bnorm(&mono_to_bernstein(f, f.degree(), &sys.dom)?);
    let eps = to_f64(&(fstar / nf));
    degree_chain(&BudgetInputs { n: sys.n(), r: sys.r(), deg_f: f.degree(), deg_g: sys.degree(), eps, c, loja_l, mode })
}
