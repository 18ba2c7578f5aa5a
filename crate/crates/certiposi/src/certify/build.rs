use super::certificate::Certificate;
use super::params::CertParams;
use super::system::SemialgSystem;
use crate::approx::{build_plateau, polya_degree, PlateauOptions, PlateauSpec};
use crate::error::{Error, Result};
use crate::grid::{lattice_k, lattice_q, sample_simplex};
use crate::polyalg::{bnorm, linear_combine, mono_to_bernstein, multiply, BernsteinPoly, Layout, MonomialPoly, Scaled};
use crate::rational::{fmt_rational, q, to_f64, Q};
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub plateau: PlateauOptions,
    /// Lattice points of D̂ scanned for f ≤ 0 on S before any construction.
    pub feasibility_points: usize,
    /// Largest coefficient vector the elevation may allocate.
    pub max_coefficients: usize,
    /// Plateau at its derived worst-case degree and elevation straight to the Polya cap.
    pub worst_case: bool,
    pub seed: u64,
    /// Recorded verbatim: "supplied" or "estimated".
    pub fstar_source: String,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            plateau: PlateauOptions::default(),
            feasibility_points: 2000,
            max_coefficients: 2_000_000,
            worst_case: false,
            seed: 0,
            fstar_source: "supplied".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct FeasibilityScan {
    points: usize,
    feasible: usize,
    min_f: Option<f64>,
}

/// Exact scan of a rational lattice; any feasible point with f ≤ 0 rules out a certificate.
fn scan_feasible(f: &MonomialPoly, sys: &SemialgSystem, target: usize) -> Result<FeasibilityScan> {
    let pts = lattice_q(&sys.dom, lattice_k(sys.n(), target.max(1)));
    let vals = pts
        .par_iter()
        .map(|x| if sys.contains(x)? { Ok(Some(f.eval(x)?)) } else { Ok(None) })
        .collect::<Result<Vec<Option<Q>>>>()?;
    let mut min: Option<Q> = None;
    for (x, v) in pts.iter().zip(&vals) {
        if let Some(v) = v {
            if !v.is_positive() {
                let shown: Vec<String> = x.iter().map(fmt_rational).collect();
                return Err(Error::NotPositive(format!("f({}) = {} on S", shown.join(", "), fmt_rational(v))));
            }
            if min.as_ref().map_or(true, |m| v < m) {
                min = Some(v.clone());
            }
        }
    }
    Ok(FeasibilityScan { points: pts.len(), feasible: vals.iter().flatten().count(), min_f: min.as_ref().map(to_f64) })
}

/// Sampled minimum of f over S: random feasible points refined by a shrinking
/// compass search that stays inside S ∩ D̂. Not a certified bound.
pub fn estimate_fstar(f: &MonomialPoly, sys: &SemialgSystem, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ff = f.to_float();
    let gs: Vec<_> = sys.g.iter().map(MonomialPoly::to_float).collect();
    let ok = |x: &[f64]| sys.dom.contains_f64(x) && gs.iter().all(|g| g.eval(x) >= 0.0);
    let mut starts: Vec<(f64, Vec<f64>)> = (0..samples)
        .map(|_| sample_simplex(&sys.dom, &mut rng))
        .filter(|x| ok(x))
        .map(|x| (ff.eval(&x), x))
        .collect();
    if starts.is_empty() {
        return Err(Error::NoFeasiblePoint(format!("no point of S among {samples} samples")));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.truncate(8);
    let n = sys.n();
    let best = starts
        .into_iter()
        .map(|(mut v, mut x)| {
            let mut step = 0.25 * sys.dom.a_f64();
            while step > 1e-10 {
                let mut moved = false;
                for i in 0..n {
                    for sgn in [-1.0, 1.0] {
                        let mut y = x.clone();
                        y[i] += sgn * step;
                        if ok(&y) {
                            let w = ff.eval(&y);
                            if w < v {
                                (v, x, moved) = (w, y, true);
                            }
                        }
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            v
        })
        .fold(f64::INFINITY, f64::min);
    Ok(best)
}

/// Builds s_i, p = f − λΣs_i²g_i and elevates p until every coefficient is nonnegative.
pub fn build_certificate(f: &MonomialPoly, sys: &SemialgSystem, params: &CertParams, opts: &CertifyOptions) -> Result<Certificate> {
    let dom = &sys.dom;
    dom.check(f.n())?;
    if !sys.scaled {
        return Err(Error::InvalidInput("system must be normalized before certification".into()));
    }
    if params.r != sys.r() {
        return Err(Error::InvalidInput(format!("parameters are for r = {}, system has r = {}", params.r, sys.r())));
    }
    let scan = scan_feasible(f, sys, opts.feasibility_points)?;

    let mut s_list = vec![];
    let mut plateau_log = vec![];
    let popts = PlateauOptions { worst_case: opts.worst_case, ..opts.plateau.clone() };
    if let Some(sqrt_nu) = &params.sqrt_nu {
        let spec = PlateauSpec::new(params.delta.clone(), sqrt_nu.clone(), None)?;
        for (gi, name) in sys.g.iter().zip(&sys.names) {
            let pl = build_plateau(gi, &spec, dom, &popts)?;
            plateau_log.push(json!({
                "name": name,
                "m_prime": pl.m_prime,
                "grid_error": pl.grid_error,
                "target_error": pl.target_error,
                "meets_target": pl.meets_target,
                "grid_points": pl.grid_points,
                "lipschitz": pl.lipschitz,
                "worst_case_degree": pl.worst_case_degree.to_string(),
                "statement_degree": pl.statement_degree.to_string(),
            }));
            s_list.push(pl.s);
        }
    }

    let f_b = mono_to_bernstein(f, f.degree(), dom)?;
    let mut terms = vec![(q(1), f_b)];
    for (s, gi) in s_list.iter().zip(&sys.g) {
        let hg = multiply(&multiply(s, s)?, &mono_to_bernstein(gi, gi.degree(), dom)?)?;
        terms.push((-params.lambda.clone(), hg));
    }
    let eta = terms.iter().map(|(_, b)| b.m()).max().unwrap_or(0);
    let p = linear_combine(&terms, eta, dom)?;
    let norm_p = bnorm(&p);
    let cap_big = polya_degree(eta, &norm_p, &(&params.fstar / q(4)))?.max(eta.into());
    let cap = cap_big.to_u32().unwrap_or(u32::MAX);
    let p_min_sampled = sampled_min(&p, opts.seed, 4096);

    let n = dom.n();
    let mut sp = Scaled::from_poly(&p);
    let mut schedule = vec![eta];
    if opts.worst_case && cap > eta {
        grow(&mut sp, cap, n, opts.max_coefficients)?;
        schedule.push(cap);
    }
    while !sp.all_nonnegative() {
        if sp.m >= cap {
            return Err(Error::BudgetExceeded(format!(
                "coefficients still negative at the Polya degree {cap_big}; the Lojasiewicz inputs are too optimistic"
            )));
        }
        let next = sp.m.saturating_mul(2).max(1).min(cap);
        grow(&mut sp, next, n, opts.max_coefficients)?;
        schedule.push(next);
    }
    let m = sp.m;
    let p_final = sp.to_poly(dom);

    let norm_f = to_f64(&params.norm_b_f);
    let ce = params.loja_c * to_f64(&params.eps).powf(-params.loja_l);
    let provenance = json!({
        "params": params.to_json(),
        "fstar_source": opts.fstar_source,
        "plateaus": plateau_log,
        "eta": eta,
        "norm_p": fmt_rational(&norm_p),
        "norm_p_bound": 6.0 * sys.r() as f64 * ce * norm_f,
        "polya_cap": cap_big.to_string(),
        "p_min_sampled": p_min_sampled,
        "elevation_schedule": schedule,
        "m": m,
        "feasibility_scan": scan,
        "scale_factors": sys.scale_factors.iter().map(fmt_rational).collect::<Vec<_>>(),
        "constraint_names": sys.names,
        "s_hat": fmt_rational(dom.s_hat()),
        "seed": opts.seed,
        "worst_case": opts.worst_case,
    });
    Ok(Certificate { dom: dom.clone(), m, p: p_final, lambda: params.lambda.clone(), s_list, g_scaled: sys.g.clone(), provenance })
}

fn grow(sp: &mut Scaled, to: u32, n: usize, max_coefficients: usize) -> Result<()> {
    if Layout::count(n, to) > max_coefficients {
        return Err(Error::BudgetExceeded(format!(
            "elevation to degree {to} needs {} coefficients, limit is {max_coefficients}",
            Layout::count(n, to)
        )));
    }
    *sp = sp.elevate_to(to);
    Ok(())
}

fn sampled_min(p: &BernsteinPoly, seed: u64, count: usize) -> f64 {
    let ev = p.evaluator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    (0..count).map(|_| ev.eval(&sample_simplex(p.dom(), &mut rng))).fold(f64::INFINITY, f64::min)
}
