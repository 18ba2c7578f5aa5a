use super::cqc::{active_set, hessian_bound_c2, jacobian, jacobian_sigma, sigma_j, Rays, SigmaReport};
use super::distance::{eval_f_distance, eval_f_distance_f64, eval_g_distance, eval_g_distance_f64, DistanceSample, Projector};
use super::fit::{empirical_loja_fit, LojaFit, LojaPair};
use crate::certify::{constraint_norm, SemialgSystem};
use crate::error::{Error, Result};
use crate::grid::{dist, lattice_f64, lattice_k, lattice_q, norm, sample_direction, sample_simplex};
use crate::numfmt::{ser_f64, ser_opt_f64};
use crate::polyalg::{FloatPoly, MonomialPoly};
use crate::rational::{fmt_rational, to_f64, Q};
use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LojaOptions {
    pub seed: u64,
    /// Simplex samples drawn to seed the projector with feasible points.
    pub cloud: usize,
    pub rays_per_dim: usize,
    /// Lattice points scanned for G* over D̂ \ U.
    pub grid_points: usize,
    /// Exterior points used for the empirical fits.
    pub samples: usize,
    pub tau_act: f64,
    pub residual_tol: f64,
    /// Slack allowed when checking the inequalities on samples.
    pub tolerance: f64,
}

impl Default for LojaOptions {
    fn default() -> Self {
        LojaOptions { seed: 0, cloud: 5000, rays_per_dim: 64, grid_points: 100_000, samples: 400, tau_act: 1e-7, residual_tol: 1e-8, tolerance: 1e-8 }
    }
}

/// An objective with its f* and ‖f‖_B, for F.
pub struct Objective<'a> {
    pub f: &'a MonomialPoly,
    pub fstar: Q,
    pub norm_b_f: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct GStar {
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    pub argmin: Option<Vec<f64>>,
    pub grid_points: usize,
    pub outside_u: usize,
    pub refined_candidates: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AffinePerturbation {
    pub constraint: usize,
    pub constant: f64,
    pub linear: Vec<f64>,
}

/// Rank-one affine change l with g − l singular at z.
#[derive(Clone, Debug, Serialize)]
pub struct SingularWitness {
    pub z: Vec<f64>,
    pub active: Vec<usize>,
    pub perturbation: Vec<AffinePerturbation>,
    /// Euclidean norm of the coefficients of l in the monomial basis.
    pub norm: f64,
    pub sigma_before: f64,
    pub sigma_after: f64,
    /// √2·σ_min(J(z)).
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionBound {
    pub c1: f64,
    /// √2·σ_J, standing in for the distance to singular systems.
    #[serde(serialize_with = "ser_f64")]
    pub delta_s: f64,
    #[serde(serialize_with = "ser_f64")]
    pub first: f64,
    #[serde(serialize_with = "ser_f64")]
    pub second: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleChecks {
    pub samples: usize,
    /// Samples with E > 2d²·... violating F ≤ 2d(f)²·E.
    pub f_le_2d2_e_violations: Option<usize>,
    pub near_boundary_checked: usize,
    /// E ≤ (2√n/σ_J)·G on samples with E ≤ σ_J/(2c₂).
    pub near_boundary_violations: usize,
    #[serde(serialize_with = "ser_f64")]
    pub sup_e_over_g: f64,
    pub sup_within_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentBound {
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LojaReport {
    pub n: usize,
    pub r: usize,
    pub s_hat: String,
    pub scale_factors: Vec<String>,
    #[serde(rename = "sigma_J", serialize_with = "ser_f64")]
    pub sigma_j: f64,
    pub sigma: SigmaReport,
    pub c2: f64,
    #[serde(rename = "U_radius", serialize_with = "ser_f64")]
    pub u_radius: f64,
    #[serde(rename = "G_star", serialize_with = "ser_f64")]
    pub g_star: f64,
    pub g_star_search: GStar,
    #[serde(rename = "diam_D")]
    pub diam_d: f64,
    #[serde(rename = "c_EG_bound", serialize_with = "ser_f64")]
    pub c_eg_bound: f64,
    pub cond_bound: ConditionBound,
    pub witness: Option<SingularWitness>,
    pub empirical_eg: Option<LojaFit>,
    pub empirical_fg: Option<LojaFit>,
    pub checks: SampleChecks,
    pub exponent_bound: ExponentBound,
    pub assumptions: Vec<String>,
    pub options: LojaOptions,
    pub sampling: serde_json::Value,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub samples: Vec<DistanceSample>,
}

/// max(c₁/δ_S, 8·diam·√n·c₂/δ_S²) with c₁ = max(2√(2n), diam·√r) and δ_S = √2·σ_J.
pub fn condition_bound(n: usize, r: usize, diam: f64, sigma_j: f64, c2: f64) -> ConditionBound {
    let c1 = (2.0 * (2.0 * n as f64).sqrt()).max(diam * (r as f64).sqrt());
    let delta_s = std::f64::consts::SQRT_2 * sigma_j;
    let first = c1 / delta_s;
    let second = if c2 == 0.0 { 0.0 } else { 8.0 * diam * (n as f64).sqrt() * c2 / (delta_s * delta_s) };
    ConditionBound { c1, delta_s, first, second, bound: first.max(second) }
}

/// Eckart–Young: P = σ_min·u·vᵀ makes J − P rank deficient; l_i(x) = P_{·i}·(x − z).
pub fn eckart_young_witness(gs: &[FloatPoly], z: &[f64], active: &[usize]) -> Result<SingularWitness> {
    if active.is_empty() {
        return Err(Error::InvalidInput("witness needs an active constraint".into()));
    }
    let j = jacobian(gs, z, active);
    let svd = j.clone().svd(true, true);
    let (u, vt) = (svd.u.as_ref().expect("u"), svd.v_t.as_ref().expect("v_t"));
    let k = (0..svd.singular_values.len()).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).expect("nonempty");
    let s = svd.singular_values[k];
    let p: DMatrix<f64> = u.column(k) * vt.row(k) * s;
    let perturbation: Vec<AffinePerturbation> = active
        .iter()
        .enumerate()
        .map(|(c, &i)| {
            let linear: Vec<f64> = p.column(c).iter().copied().collect();
            let constant = -linear.iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
            AffinePerturbation { constraint: i, constant, linear }
        })
        .collect();
    let norm_l = perturbation.iter().map(|a| a.constant * a.constant + a.linear.iter().map(|v| v * v).sum::<f64>()).sum::<f64>().sqrt();
    let after = (&j - &p).singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SingularWitness {
        z: z.to_vec(),
        active: active.to_vec(),
        perturbation,
        norm: norm_l,
        sigma_before: jacobian_sigma(gs, z, active)?,
        sigma_after: after,
        bound: std::f64::consts::SQRT_2 * s,
    })
}

/// Kurdyka-type bound d(6d − 3)^{n+r} on the exponent for systems without the CQC.
pub fn exponent_formula_bounds(n: usize, r: usize, d: u32) -> ExponentBound {
    let d = d as f64;
    ExponentBound {
        value: d * (6.0 * d - 3.0).powi((n + r) as i32),
        note: "explicit bound d(6d-3)^(n+r); the sharper d^O(n^2) bound is asymptotic with unknown constant".into(),
    }
}

/// G* = min of G over D̂ \ U: lattice scan with a boundary-cloud upper bound for E to discard U,
/// exact projections for the best candidates, a snap to ∂U along the normal and a compass polish.
pub fn g_star(sys: &SemialgSystem, proj: &Projector, sigma: &SigmaReport, u_radius: f64, opts: &LojaOptions) -> GStar {
    let gs = proj.constraints();
    let empty = |pts| GStar { value: f64::INFINITY, argmin: None, grid_points: pts, outside_u: 0, refined_candidates: 0 };
    if !u_radius.is_finite() {
        return empty(0);
    }
    let n = sys.n();
    let k = lattice_k(n, opts.grid_points);
    let grid = lattice_f64(&sys.dom, k);
    let mut cloud = sigma.boundary.clone();
    if n > 1 {
        let caster = Rays { proj, origin: sigma.interior_point.clone(), reach: 4.0 * sys.dom.diameter(), tau_act: opts.tau_act };
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
        let dirs: Vec<Vec<f64>> = (0..512 * n).map(|_| sample_direction(n, &mut rng)).collect();
        cloud.extend(dirs.par_iter().filter_map(|d| caster.hit(d)).collect::<Vec<_>>());
    }
    if cloud.is_empty() {
        return empty(grid.len());
    }
    let mut outside: Vec<(f64, &Vec<f64>)> = grid
        .par_iter()
        .filter(|y| !proj.feasible(y))
        .filter(|y| cloud.iter().map(|b| dist(b, y)).fold(f64::INFINITY, f64::min) >= u_radius)
        .map(|y| (eval_g_distance_f64(gs, y), y))
        .collect();
    let outside_u = outside.len();
    if outside.is_empty() {
        return GStar { outside_u, ..empty(grid.len()) };
    }
    outside.sort_by(|a, b| a.0.total_cmp(&b.0));
    let take = outside.len().min(64);
    let in_closure = |y: &[f64]| sys.dom.contains_f64(y) && !proj.feasible(y) && proj.project(y).dist >= u_radius * (1.0 - 1e-13);
    let cands: Vec<(f64, Vec<f64>)> = outside[..take]
        .par_iter()
        .flat_map(|(g, y)| {
            let p = proj.project(y);
            let mut out = vec![];
            if p.dist >= u_radius * (1.0 - 1e-12) {
                out.push((*g, (*y).clone()));
                let snapped: Vec<f64> = p.z.iter().zip(y.iter()).map(|(z, v)| z + u_radius * (v - z) / p.dist).collect();
                if in_closure(&snapped) {
                    out.push((eval_g_distance_f64(gs, &snapped), snapped));
                }
            }
            out
        })
        .collect();
    let refined = cands.len();
    let Some((mut best_v, mut best_y)) = cands.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)) else {
        return GStar { outside_u, ..empty(grid.len()) };
    };
    let mut step = sys.dom.a_f64() / k as f64;
    while step > 1e-12 {
        let mut moved = false;
        for i in 0..n {
            for sgn in [-1.0, 1.0] {
                let mut y = best_y.clone();
                y[i] += sgn * step;
                let v = eval_g_distance_f64(gs, &y);
                if v < best_v && in_closure(&y) {
                    (best_v, best_y, moved) = (v, y, true);
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    GStar { value: best_v, argmin: Some(best_y), grid_points: grid.len(), outside_u, refined_candidates: refined }
}

/// Exterior points: half pushed off the boundary along the outward normal by log-uniform offsets,
/// half uniform in D̂ \ S.
fn exterior_samples(sys: &SemialgSystem, proj: &Projector, sigma: &SigmaReport, opts: &LojaOptions) -> Vec<Vec<f64>> {
    let gs = proj.constraints();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xe7e7);
    let diam = sys.dom.diameter();
    let mut out = vec![];
    let want_near = if sigma.boundary.is_empty() { 0 } else { opts.samples / 2 };
    let mut tries = 0;
    while out.len() < want_near && tries < 20 * opts.samples {
        let b = &sigma.boundary[tries % sigma.boundary.len()];
        tries += 1;
        let act = active_set(gs, b, opts.tau_act);
        let mut nrm = vec![0.0; sys.n()];
        for &i in &act {
            nrm.iter_mut().zip(gs[i].grad(b)).for_each(|(a, v)| *a -= v);
        }
        let r = norm(&nrm);
        if r == 0.0 {
            continue;
        }
        let t = (1e-6f64.ln() + rng.gen::<f64>() * (diam.ln() - 1e-6f64.ln())).exp();
        let y: Vec<f64> = b.iter().zip(&nrm).map(|(p, v)| p + t * v / r).collect();
        if sys.dom.contains_f64(&y) && !proj.feasible(&y) {
            out.push(y);
        }
    }
    tries = 0;
    while out.len() < opts.samples && tries < 50 * opts.samples {
        tries += 1;
        let y = sample_simplex(&sys.dom, &mut rng);
        if !proj.feasible(&y) {
            out.push(y);
        }
    }
    out
}

/// The Łojasiewicz data of a scaled system under the CQC, with optional F samples.
pub fn loja_report(sys: &SemialgSystem, objective: Option<&Objective>, opts: &LojaOptions) -> Result<LojaReport> {
    if !sys.scaled {
        return Err(Error::InvalidInput("Lojasiewicz analysis needs a normalized system".into()));
    }
    let n = sys.n();
    let proj = Projector::new(sys, opts.cloud, opts.seed)?;
    let sigma = sigma_j(sys, &proj, opts.rays_per_dim, opts.tau_act, opts.seed)?;
    let sj = sigma.sigma;
    if !(sj > 0.0) {
        return Err(Error::CqcViolation(format!("sigma_J = {sj} on the sampled boundary")));
    }
    let c2 = hessian_bound_c2(sys)?;
    let u_radius = if c2 == 0.0 { f64::INFINITY } else { sj / (2.0 * c2) };
    let gstar = g_star(sys, &proj, &sigma, u_radius, opts);
    let diam = sys.dom.diameter();
    let c_eg = (2.0 * (n as f64).sqrt() / sj).max(diam / gstar.value);
    let cond = condition_bound(n, sys.r(), diam, sj, c2);
    let witness = match &sigma.argmin {
        Some(z) if !sigma.active_at_argmin.is_empty() => Some(eckart_young_witness(proj.constraints(), z, &sigma.active_at_argmin)?),
        _ => None,
    };

    let ff = objective.map(|o| (o.f.to_float(), to_f64(&o.fstar), to_f64(&o.norm_b_f), o.f.degree()));
    let pts = exterior_samples(sys, &proj, &sigma, opts);
    let samples: Vec<DistanceSample> = pts
        .par_iter()
        .map(|y| {
            let p = proj.project(y);
            DistanceSample {
                x: y.clone(),
                f: ff.as_ref().map(|(f, s, nb, _)| eval_f_distance_f64(f, *s, *nb, y)),
                g: eval_g_distance_f64(proj.constraints(), y),
                e: p.dist,
                active_set_at_projection: active_set(proj.constraints(), &p.z, opts.tau_act),
            }
        })
        .collect();
    let sup = samples.iter().filter(|s| s.g > 0.0).map(|s| s.e / s.g).fold(0.0, f64::max);
    let near: Vec<&DistanceSample> = samples.iter().filter(|s| s.e <= u_radius).collect();
    let near_bad = near.iter().filter(|s| s.e > 2.0 * (n as f64).sqrt() / sj * s.g + opts.tolerance).count();
    let fe_bad = ff.as_ref().map(|(_, _, _, d)| {
        let d2 = 2.0 * (*d as f64).powi(2);
        samples.iter().filter(|s| s.f.unwrap_or(0.0) > d2 * s.e + opts.tolerance).count()
    });
    let enough = samples.iter().filter(|s| s.g > 0.0).count() >= super::fit::MIN_SAMPLES;
    let empirical_eg = if enough { Some(empirical_loja_fit(&samples, LojaPair::Eg)?) } else { None };
    let empirical_fg = if enough && ff.is_some() { Some(empirical_loja_fit(&samples, LojaPair::Fg)?) } else { None };

    let sampling = serde_json::json!({
        "seed": opts.seed,
        "cloud_requested": opts.cloud,
        "cloud_feasible": proj.cloud().len(),
        "rays": sigma.rays,
        "boundary_points": sigma.boundary_points,
        "grid_points": gstar.grid_points,
        "samples_requested": opts.samples,
        "samples_obtained": samples.len(),
    });
    let mut notes = vec![
        "E is estimated by multistart projection; quantities depending on E are sampled estimates".to_string(),
        "norms of f and g_i are Bernstein norms on the simplex D".into(),
        format!("diam_D is the exact diameter of the simplex D ({})", if n == 1 { "a = 1 + s_hat for n = 1" } else { "sqrt(2)(n + s_hat)" }),
        "cond_bound uses c1 = max(2 sqrt(2n), diam sqrt(r)) with dist(g, Sing) replaced by sqrt(2) sigma_J".into(),
    ];
    if c2 > 0.0 && sys.g.iter().any(|g| g.degree() > 2) {
        notes.push("c2 bounds Hessian entries by Bernstein norms of second partials".into());
    }
    if !gstar.value.is_finite() {
        notes.push("D \\ U has no sampled point; the diam/G* term vanishes".into());
    }
    Ok(LojaReport {
        n,
        r: sys.r(),
        s_hat: fmt_rational(sys.dom.s_hat()),
        scale_factors: sys.scale_factors.iter().map(fmt_rational).collect(),
        sigma_j: sj,
        c2,
        u_radius,
        g_star: gstar.value,
        g_star_search: gstar,
        diam_d: diam,
        c_eg_bound: c_eg,
        cond_bound: cond,
        witness,
        empirical_eg,
        empirical_fg,
        checks: SampleChecks {
            samples: samples.len(),
            f_le_2d2_e_violations: fe_bad,
            near_boundary_checked: near.len(),
            near_boundary_violations: near_bad,
            sup_e_over_g: sup,
            sup_within_bound: sup <= c_eg + opts.tolerance,
        },
        exponent_bound: exponent_formula_bounds(n, sys.r().max(1), sys.degree().max(1)),
        assumptions: vec!["CQC".into()],
        options: opts.clone(),
        sampling,
        notes,
        sigma,
        samples,
    })
}

/// As [`loja_report`] without an objective.
pub fn loja_eg_constant(sys: &SemialgSystem, opts: &LojaOptions) -> Result<LojaReport> {
    loja_report(sys, None, opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct CertLojaConstant {
    /// (1/‖f‖_B)·max over the grid of Σ‖g_i‖_B·s_i(x), exact.
    pub c: String,
    #[serde(serialize_with = "ser_f64")]
    pub c_f64: f64,
    pub grid_points: usize,
    pub argmax: Option<Vec<String>>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub grid_spacing: Option<f64>,
}

/// Constant of F ≤ c·G read off a representation f − f* = s_0 + Σ s_i g_i, on a rational lattice of D̂.
pub fn cert_loja_constant(sys: &SemialgSystem, s: &[MonomialPoly], norm_b_f: &Q, grid_points: usize) -> Result<(Q, CertLojaConstant)> {
    if s.len() != sys.r() {
        return Err(Error::InvalidInput(format!("{} multipliers for {} constraints", s.len(), sys.r())));
    }
    let norms = sys.g.iter().map(|g| constraint_norm(g, &sys.dom)).collect::<Result<Vec<_>>>()?;
    let k = lattice_k(sys.n(), grid_points);
    let pts = lattice_q(&sys.dom, k);
    let vals = pts
        .par_iter()
        .map(|x| s.iter().zip(&norms).try_fold(Q::zero(), |acc, (si, nb)| Ok::<Q, Error>(acc + nb * si.eval(x)?)))
        .collect::<Result<Vec<Q>>>()?;
    let (arg, max) = vals.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).map(|(i, v)| (Some(i), v.clone())).unwrap_or((None, Q::zero()));
    let c = max.max(Q::zero()) / norm_b_f;
    let info = CertLojaConstant {
        c: fmt_rational(&c),
        c_f64: to_f64(&c),
        grid_points: pts.len(),
        argmax: arg.map(|i| pts[i].iter().map(fmt_rational).collect()),
        grid_spacing: Some(sys.dom.a_f64() / k as f64),
    };
    Ok((c, info))
}

/// F(x) ≤ c·G(x) at every lattice point, exactly; returns the number of violations.
pub fn check_f_le_cg(sys: &SemialgSystem, obj: &Objective, c: &Q, grid_points: usize) -> Result<(usize, usize)> {
    let pts = lattice_q(&sys.dom, lattice_k(sys.n(), grid_points));
    let bad = pts
        .par_iter()
        .map(|x| Ok(eval_f_distance(obj.f, &obj.fstar, &obj.norm_b_f, x)? > c * eval_g_distance(sys, x)?))
        .collect::<Result<Vec<bool>>>()?;
    Ok((bad.iter().filter(|b| **b).count(), pts.len()))
}
