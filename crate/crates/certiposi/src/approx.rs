//! Bernstein operator on D̂, the plateau multipliers s_i, and closed-form degree bounds.

use crate::error::{Error, Result};
use crate::grid::{lattice_f64, GridSpec};
use crate::polyalg::{bnorm, mono_to_bernstein, BernsteinPoly, Layout, MonomialPoly, SimplexDomain};
use crate::rational::{ceil_int, fmt_rational, parse_rational, q, to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type Evaluator<'a> = Box<dyn Fn(&[Q]) -> Result<Q> + Send + Sync + 'a>;

/// A function sampled exactly at rational points of D̂, with an optional Lipschitz constant.
pub struct SampleFunction<'a> {
    evaluator: Evaluator<'a>,
    pub lipschitz: Option<f64>,
}

impl<'a> SampleFunction<'a> {
    pub fn new(f: impl Fn(&[Q]) -> Result<Q> + Send + Sync + 'a, lipschitz: Option<f64>) -> Self {
        SampleFunction { evaluator: Box::new(f), lipschitz }
    }

    pub fn from_monomial(p: &'a MonomialPoly, lipschitz: Option<f64>) -> Self {
        Self::new(move |x| p.eval(x), lipschitz)
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        (self.evaluator)(x)
    }
}

/// B_m(ψ): coefficients ψ(θ(α/m)).
pub fn bernstein_operator(psi: &SampleFunction, m: u32, dom: &SimplexDomain) -> Result<BernsteinPoly> {
    if m == 0 {
        return Err(Error::InvalidInput("Bernstein operator needs m >= 1".into()));
    }
    let layout = Layout::new(dom.n(), m);
    let mq = q(m as i64);
    let coeffs = layout
        .indices()
        .par_iter()
        .map(|a| psi.eval(&dom.theta(&a.iter().map(|&k| q(k as i64) / &mq).collect::<Vec<_>>())))
        .collect::<Result<Vec<_>>>()?;
    let idx = layout.indices().into_iter().map(crate::polyalg::MultiIndex::new);
    BernsteinPoly::from_coeffs(dom, m, idx.zip(coeffs))
}

/// 2·Lip·(2n/√m) ≥ sup_D̂ |ψ − B_m ψ|.
pub fn approx_error_bound(psi: &SampleFunction, m: u32, n: usize) -> Result<f64> {
    let lip = psi.lipschitz.ok_or_else(|| Error::InvalidInput("Lipschitz constant required".into()))?;
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    Ok(2.0 * lip * (2.0 * n as f64 / (m as f64).sqrt()))
}

/// Parameters of the plateau φ: δ, √ν and an optional fixed operator degree m'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlateauSpec {
    delta: Q,
    sqrt_nu: Q,
    pub target_degree: Option<u32>,
}

impl PlateauSpec {
    /// Requires δ > 0, √ν > 0 and (1 − √ν/4)² ≥ 1/2.
    pub fn new(delta: Q, sqrt_nu: Q, target_degree: Option<u32>) -> Result<Self> {
        if !delta.is_positive() || !sqrt_nu.is_positive() {
            return Err(Error::InvalidInput("plateau needs delta > 0 and sqrt_nu > 0".into()));
        }
        let t = q(1) - &sqrt_nu / q(4);
        if &t * &t < Q::new(1.into(), 2.into()) {
            return Err(Error::InvalidInput(format!("sqrt_nu = {} too large for the plateau contract", fmt_rational(&sqrt_nu))));
        }
        Ok(PlateauSpec { delta, sqrt_nu, target_degree })
    }

    pub fn delta(&self) -> &Q {
        &self.delta
    }

    pub fn sqrt_nu(&self) -> &Q {
        &self.sqrt_nu
    }

    pub fn nu(&self) -> Q {
        &self.sqrt_nu * &self.sqrt_nu
    }

    pub fn to_json(&self) -> PlateauJson {
        PlateauJson { delta: fmt_rational(&self.delta), sqrt_nu: fmt_rational(&self.sqrt_nu), m_prime: self.target_degree }
    }

    pub fn from_json(j: &PlateauJson) -> Result<Self> {
        Self::new(parse_rational(&j.delta)?, parse_rational(&j.sqrt_nu)?, j.m_prime)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlateauJson {
    pub delta: String,
    pub sqrt_nu: String,
    pub m_prime: Option<u32>,
}

/// φ(t): 1 on [−1,−δ], √ν on [0,1], and √ν + (1−√ν)(3t²/δ² + 2t³/δ³) in between.
pub fn phi_eval(spec: &PlateauSpec, t: &Q) -> Result<Q> {
    if t < &q(-1) || t > &q(1) {
        return Err(Error::InvalidInput(format!("phi argument {} outside [-1,1]", fmt_rational(t))));
    }
    let d = &spec.delta;
    Ok(if t <= &-d.clone() {
        q(1)
    } else if !t.is_negative() {
        spec.sqrt_nu.clone()
    } else {
        let u = t / d;
        &spec.sqrt_nu + (q(1) - &spec.sqrt_nu) * (q(3) * &u * &u + q(2) * &u * &u * &u)
    })
}

pub fn phi_f64(delta: f64, sqrt_nu: f64, t: f64) -> f64 {
    if t <= -delta {
        1.0
    } else if t >= 0.0 {
        sqrt_nu
    } else {
        let u = t / delta;
        sqrt_nu + (1.0 - sqrt_nu) * (3.0 * u * u + 2.0 * u * u * u)
    }
}

/// How the operator degree m' of the plateau multiplier is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlateauOptions {
    pub grid: GridSpec,
    pub start_degree: u32,
    pub max_degree: u32,
    /// Cap on the coefficient count of s; keeps s² tractable in higher dimension.
    pub max_coefficients: usize,
    pub worst_case: bool,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        PlateauOptions { grid: GridSpec::default(), start_degree: 2, max_degree: 4096, max_coefficients: 10_000, worst_case: false }
    }
}

/// A built multiplier s = B_{m'}(φ∘g) with its measured error.
#[derive(Clone, Debug)]
pub struct Plateau {
    pub s: BernsteinPoly,
    pub m_prime: u32,
    pub grid_error: f64,
    pub target_error: f64,
    pub meets_target: bool,
    pub grid_points: usize,
    pub lipschitz: f64,
    /// Degree from the derivation with the d⁴ factor, 16384·n·d⁴/(δ²ν).
    pub worst_case_degree: BigInt,
    /// Same constant with the d² factor printed by the statement.
    pub statement_degree: BigInt,
}

pub fn worst_case_degree(n: usize, d: u32, delta: &Q, nu: &Q) -> BigInt {
    let d = q(d as i64);
    ceil_int(&(q(16384) * q(n as i64) * &d * &d * &d * &d / (delta * delta * nu)))
}

pub fn statement_degree(n: usize, d: u32, delta: &Q, nu: &Q) -> BigInt {
    let d = q(d as i64);
    ceil_int(&(q(16384) * q(n as i64) * &d * &d / (delta * delta * nu)))
}

fn build_at(g: &MonomialPoly, spec: &PlateauSpec, dom: &SimplexDomain, m: u32) -> Result<BernsteinPoly> {
    let psi = SampleFunction::new(|x| phi_eval(spec, &g.eval(x)?), None);
    bernstein_operator(&psi, m, dom)
}

fn grid_error(s: &BernsteinPoly, g: &MonomialPoly, spec: &PlateauSpec, pts: &[Vec<f64>]) -> f64 {
    let ev = s.evaluator();
    let gf = g.to_float();
    let (d, r) = (to_f64(&spec.delta), to_f64(&spec.sqrt_nu));
    let errs: Vec<f64> = pts.par_iter().map(|x| (ev.eval(x) - phi_f64(d, r, gf.eval(x).clamp(-1.0, 1.0))).abs()).collect();
    errs.into_iter().fold(0.0, f64::max)
}

/// s = B_{m'}(φ∘g) with m' found by doubling until the grid error is at most √ν/4,
/// or fixed by `spec.target_degree`, or the derived worst case.
pub fn build_plateau(g_scaled: &MonomialPoly, spec: &PlateauSpec, dom: &SimplexDomain, opts: &PlateauOptions) -> Result<Plateau> {
    dom.check(g_scaled.n())?;
    let norm = bnorm(&mono_to_bernstein(g_scaled, g_scaled.degree(), dom)?);
    if !norm.is_one() {
        return Err(Error::InvalidInput(format!("plateau needs a scaled constraint, got norm {}", fmt_rational(&norm))));
    }
    let n = dom.n();
    let dg = g_scaled.degree();
    let target = to_f64(&spec.sqrt_nu) / 4.0;
    let pts = lattice_f64(dom, opts.grid.resolution(n));
    let lipschitz = 2.0 / to_f64(&spec.delta) * markov_bound(dg, n);
    let nu = spec.nu();
    let worst = worst_case_degree(n, dg, &spec.delta, &nu);
    let stated = statement_degree(n, dg, &spec.delta, &nu);
    let finish = |s: BernsteinPoly, m: u32, err: f64| Plateau {
        s,
        m_prime: m,
        grid_error: err,
        target_error: target,
        meets_target: err <= target,
        grid_points: pts.len(),
        lipschitz,
        worst_case_degree: worst.clone(),
        statement_degree: stated.clone(),
    };
    let within = |m: u32| m <= opts.max_degree && Layout::count(n, m) <= opts.max_coefficients;
    let fixed = if opts.worst_case {
        match worst.to_u32().filter(|&m| within(m)) {
            Some(m) => Some(m.max(1)),
            None => return Err(Error::BudgetExceeded(format!("worst-case plateau degree {worst} exceeds limit {}", opts.max_degree))),
        }
    } else {
        spec.target_degree
    };
    if let Some(m) = fixed {
        let s = build_at(g_scaled, spec, dom, m)?;
        let err = grid_error(&s, g_scaled, spec, &pts);
        return Ok(finish(s, m, err));
    }
    let mut m = opts.start_degree.max(1);
    loop {
        let s = build_at(g_scaled, spec, dom, m)?;
        let err = grid_error(&s, g_scaled, spec, &pts);
        if err <= target {
            return Ok(finish(s, m, err));
        }
        if !within(m.saturating_mul(2)) {
            return Err(Error::BudgetExceeded(format!(
                "plateau grid error {err:.3e} > {target:.3e} at degree {m}; limits {} / {} coefficients",
                opts.max_degree, opts.max_coefficients
            )));
        }
        m *= 2;
    }
}

/// 2d(2d−1)/(√n + 1) ≥ max_D ‖∇p‖₂/‖p‖_∞ for deg p = d.
pub fn markov_bound(d: u32, n: usize) -> f64 {
    let d = d as f64;
    2.0 * d * (2.0 * d - 1.0).max(0.0) / ((n as f64).sqrt() + 1.0)
}

/// ceil(d²·‖p‖_B/p*): elevation degree at which a polynomial ≥ p* on D̂ has nonnegative coefficients.
pub fn polya_degree(d: u32, norm_b: &Q, pstar: &Q) -> Result<BigInt> {
    if !pstar.is_positive() {
        return Err(Error::InvalidInput("p* must be positive".into()));
    }
    if norm_b.is_negative() {
        return Err(Error::InvalidInput("norm must be nonnegative".into()));
    }
    let d = q(d as i64);
    let v = &d * &d * norm_b / pstar;
    Ok(if v.is_zero() { BigInt::zero() } else { ceil_int(&v) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::bernstein_to_mono;
    use crate::rational::qf;

    fn d1() -> SimplexDomain {
        SimplexDomain::default_for(1)
    }

    fn x() -> MonomialPoly {
        MonomialPoly::var(1, 0)
    }

    #[test]
    fn operator_reproduces_constants_and_x() {
        let c = SampleFunction::new(|_| Ok(qf(7, 3)), Some(0.0));
        let b = bernstein_operator(&c, 4, &d1()).unwrap();
        assert!(b.dense().iter().all(|v| *v == qf(7, 3)));
        let xs = x();
        let id = SampleFunction::from_monomial(&xs, Some(1.0));
        assert_eq!(bernstein_to_mono(&bernstein_operator(&id, 3, &d1()).unwrap()), x());
        assert!(bernstein_operator(&id, 0, &d1()).is_err());
    }

    /// B_m(‖x+1‖²) on D̂ with a = n + ŝ equals ((m−1)/m)‖x+1‖² + (a/m)·Σ(x_i+1): the Bernstein
    /// operator interpolates at the vertices, so there is no constant term.
    #[test]
    fn operator_on_shifted_square() {
        let one = MonomialPoly::constant(1, q(1));
        let sq = &(&x() + &one) * &(&x() + &one);
        let psi = SampleFunction::from_monomial(&sq, None);
        let got = bernstein_to_mono(&bernstein_operator(&psi, 2, &d1()).unwrap());
        let want = &sq.scale(&qf(1, 2)) + &(&x() + &one);
        assert_eq!(got, want);
    }

    #[test]
    fn error_bound_values() {
        let c = SampleFunction::new(|_| Ok(q(1)), Some(0.0));
        assert_eq!(approx_error_bound(&c, 9, 2).unwrap(), 0.0);
        let l = SampleFunction::new(|_| Ok(q(1)), Some(1.0));
        assert_eq!(approx_error_bound(&l, 16, 1).unwrap(), 1.0);
        let none = SampleFunction::new(|_| Ok(q(1)), None);
        assert!(approx_error_bound(&none, 16, 1).is_err());
    }

    #[test]
    fn abs_error_within_bound() {
        let psi = SampleFunction::new(|x: &[Q]| Ok(x[0].abs()), Some(1.0));
        let b = bernstein_operator(&psi, 64, &d1()).unwrap();
        let ev = b.evaluator();
        let worst = lattice_f64(&d1(), 999).iter().map(|p| (ev.eval(p) - p[0].abs()).abs()).fold(0.0, f64::max);
        assert!(worst <= approx_error_bound(&psi, 64, 1).unwrap());
        assert!(worst > 0.05);
    }

    fn spec() -> PlateauSpec {
        PlateauSpec::new(qf(1, 4), qf(1, 8), None).unwrap()
    }

    #[test]
    fn phi_values() {
        let s = spec();
        assert_eq!(phi_eval(&s, &qf(-1, 4)).unwrap(), q(1));
        assert_eq!(phi_eval(&s, &q(-1)).unwrap(), q(1));
        assert_eq!(phi_eval(&s, &q(0)).unwrap(), qf(1, 8));
        assert_eq!(phi_eval(&s, &qf(-1, 8)).unwrap(), qf(9, 16));
        assert!(phi_eval(&s, &qf(3, 2)).is_err());
        assert!(PlateauSpec::new(q(1), q(2), None).is_err());
        assert!(PlateauSpec::new(q(0), qf(1, 5), None).is_err());
    }

    #[test]
    fn phi_slope_bounded() {
        let (d, r) = (0.25, 0.125);
        let h = 1e-6;
        let worst = (0..2000)
            .map(|k| -1.0 + 2.0 * k as f64 / 2000.0)
            .map(|t| ((phi_f64(d, r, t + h) - phi_f64(d, r, t - h)) / (2.0 * h)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 2.0 / d + 1e-6);
    }

    #[test]
    fn plateau_on_nonnegative_linear_constraint() {
        let dom = d1();
        // g = (x + 1)/2 is nonnegative on D̂ with Bernstein coefficients (0, 1).
        let g = (&x() + &MonomialPoly::constant(1, q(1))).scale(&qf(1, 2));
        let spec = PlateauSpec::new(qf(1, 4), qf(1, 8), None).unwrap();
        let p = build_plateau(&g, &spec, &dom, &PlateauOptions::default()).unwrap();
        assert!(p.meets_target);
        assert!(bnorm(&p.s) <= q(1));
        let h = crate::polyalg::multiply(&p.s, &p.s).unwrap().evaluator();
        let nu = 1.0 / 64.0;
        for pt in lattice_f64(&dom, 999) {
            assert!(h.eval(&pt) <= 2.0 * nu + 1e-12);
        }
    }

    #[test]
    fn plateau_below_minus_delta() {
        let dom = d1();
        let g = x().scale(&q(-1));
        let spec = PlateauSpec::new(qf(1, 4), qf(1, 8), None).unwrap();
        let p = build_plateau(&g, &spec, &dom, &PlateauOptions::default()).unwrap();
        let h = crate::polyalg::multiply(&p.s, &p.s).unwrap().evaluator();
        for pt in lattice_f64(&dom, 999).into_iter().filter(|p| p[0] >= 0.25) {
            assert!(h.eval(&pt) >= 0.5 - 1e-12, "{pt:?}");
        }
        assert!(p.worst_case_degree >= p.statement_degree);
    }

    #[test]
    fn plateau_rejects_unscaled_and_exhausted_budget() {
        let dom = d1();
        let g = x().scale(&q(-2));
        let spec = PlateauSpec::new(qf(1, 4), qf(1, 8), None).unwrap();
        assert!(build_plateau(&g, &spec, &dom, &PlateauOptions::default()).is_err());
        let g = x().scale(&q(-1));
        let tight = PlateauOptions { max_degree: 4, ..PlateauOptions::default() };
        assert!(matches!(build_plateau(&g, &spec, &dom, &tight), Err(Error::BudgetExceeded(_))));
        let worst = PlateauOptions { worst_case: true, ..PlateauOptions::default() };
        assert!(matches!(build_plateau(&g, &spec, &dom, &worst), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn plateau_json_round_trip() {
        let s = PlateauSpec::new(qf(1, 3), qf(1, 5), Some(16)).unwrap();
        let j = serde_json::to_value(s.to_json()).unwrap();
        assert_eq!(j, serde_json::json!({"delta":"1/3","sqrt_nu":"1/5","m_prime":16}));
        assert_eq!(PlateauSpec::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn markov_and_polya_values() {
        assert_eq!(markov_bound(0, 3), 0.0);
        assert_eq!(markov_bound(1, 1), 1.0);
        assert_eq!(markov_bound(2, 4), 4.0);
        assert_eq!(polya_degree(0, &q(5), &q(1)).unwrap(), BigInt::zero());
        assert_eq!(polya_degree(2, &q(4), &q(1)).unwrap(), BigInt::from(16));
        assert_eq!(polya_degree(1, &q(1), &q(1)).unwrap(), BigInt::from(1));
        assert!(polya_degree(1, &q(1), &q(0)).is_err());
    }
}
