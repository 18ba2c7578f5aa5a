use super::distance::Projector;
use crate::certify::SemialgSystem;
use crate::error::{Error, Result};
use crate::grid::sample_direction;
use crate::polyalg::{bnorm, mono_to_bernstein, FloatPoly, MonomialPoly};
use crate::rational::to_f64;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// I(z) = {i : |g_i(z)| ≤ tau_act}.
pub fn active_set(gs: &[FloatPoly], z: &[f64], tau_act: f64) -> Vec<usize> {
    (0..gs.len()).filter(|&i| gs[i].eval(z).abs() <= tau_act).collect()
}

/// n×|I| matrix whose columns are ∇g_i(z).
pub fn jacobian(gs: &[FloatPoly], z: &[f64], active: &[usize]) -> DMatrix<f64> {
    let cols: Vec<Vec<f64>> = active.iter().map(|&i| gs[i].grad(z)).collect();
    DMatrix::from_fn(z.len(), active.len(), |r, c| cols[c][r])
}

/// Smallest singular value of J(z); +∞ when nothing is active.
pub fn jacobian_sigma(gs: &[FloatPoly], z: &[f64], active: &[usize]) -> Result<f64> {
    if active.is_empty() {
        return Ok(f64::INFINITY);
    }
    if active.len() > z.len() {
        return Err(Error::CqcViolation(format!("{} active constraints in dimension {}", active.len(), z.len())));
    }
    let sv = jacobian(gs, z, active).singular_values();
    Ok(sv.iter().copied().fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaReport {
    #[serde(serialize_with = "crate::numfmt::ser_f64")]
    pub sigma: f64,
    pub argmin: Option<Vec<f64>>,
    pub active_at_argmin: Vec<usize>,
    pub interior_point: Vec<f64>,
    pub rays: usize,
    pub boundary_points: usize,
    pub refinement_evaluations: usize,
    /// Boundary points found by the rays; reused as a cloud for distance upper bounds.
    #[serde(skip)]
    pub boundary: Vec<Vec<f64>>,
}

/// Ray caster from an interior point of S.
pub(crate) struct Rays<'a> {
    pub proj: &'a Projector,
    pub origin: Vec<f64>,
    pub reach: f64,
    pub tau_act: f64,
}

impl Rays<'_> {
    /// First boundary crossing along origin + t·d, t ∈ (0, reach].
    pub fn hit(&self, d: &[f64]) -> Option<Vec<f64>> {
        let steps = 512;
        let h = self.reach / steps as f64;
        let at = |t: f64| self.origin.iter().zip(d).map(|(o, v)| o + t * v).collect::<Vec<f64>>();
        let mut prev = self.origin.clone();
        for k in 1..=steps {
            let p = at(k as f64 * h);
            if !self.proj.feasible(&p) {
                return Some(self.proj.bisect(&prev, &p));
            }
            prev = p;
        }
        None
    }

    pub fn sigma_at(&self, d: &[f64]) -> Option<(f64, Vec<f64>, Vec<usize>)> {
        let b = self.hit(d)?;
        let act = active_set(self.proj.constraints(), &b, self.tau_act);
        let s = jacobian_sigma(self.proj.constraints(), &b, &act).ok()?;
        Some((s, b, act))
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let r = crate::grid::norm(&v);
    v.into_iter().map(|x| x / r).collect()
}

/// Orthonormal basis of the complement of a unit vector d.
fn complement(d: &[f64]) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut basis: Vec<Vec<f64>> = vec![d.to_vec()];
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        if crate::grid::norm(&v) > 1e-8 {
            basis.push(unit(v));
        }
    }
    basis.split_off(1)
}

/// σ_J = inf over ∂S of σ_min(J(z)): 64·n rays from the most interior sample, then golden-section
/// refinement of the best rays along each orthogonal direction.
pub fn sigma_j(sys: &SemialgSystem, proj: &Projector, rays_per_dim: usize, tau_act: f64, seed: u64) -> Result<SigmaReport> {
    let gs = proj.constraints();
    let n = sys.n();
    let depth = |x: &[f64]| gs.iter().map(|g| g.eval(x)).fold(f64::INFINITY, f64::min);
    let origin = proj.cloud().iter().max_by(|a, b| depth(a).total_cmp(&depth(b))).cloned().expect("nonempty cloud");
    if gs.is_empty() {
        return Ok(SigmaReport { sigma: f64::INFINITY, argmin: None, active_at_argmin: vec![], interior_point: origin, rays: 0, boundary_points: 0, refinement_evaluations: 0, boundary: vec![] });
    }
    if !(depth(&origin) > 0.0) {
        return Err(Error::NoFeasiblePoint("S has no sampled interior point".into()));
    }
    let caster = Rays { proj, origin: origin.clone(), reach: 4.0 * sys.dom.diameter(), tau_act };
    let dirs: Vec<Vec<f64>> = if n == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..rays_per_dim * n).map(|_| sample_direction(n, &mut rng)).collect()
    };
    let mut hits: Vec<(f64, Vec<f64>, Vec<usize>, Vec<f64>)> = vec![];
    let mut boundary = vec![];
    for d in &dirs {
        if let Some(b) = caster.hit(d) {
            let act = active_set(gs, &b, tau_act);
            let s = jacobian_sigma(gs, &b, &act)?;
            boundary.push(b.clone());
            hits.push((s, b, act, d.clone()));
        }
    }
    if hits.is_empty() {
        return Ok(SigmaReport { sigma: f64::INFINITY, argmin: None, active_at_argmin: vec![], interior_point: origin, rays: dirs.len(), boundary_points: 0, refinement_evaluations: 0, boundary });
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = hits[0].clone();
    let mut evals = 0;
    if n > 1 {
        let width = 2.0 * std::f64::consts::PI / (dirs.len() as f64).powf(1.0 / (n - 1) as f64);
        let seeds: Vec<Vec<f64>> = hits.iter().take(3).map(|h| h.3.clone()).collect();
        for d0 in seeds {
            let mut d = d0;
            for _round in 0..2 {
                for e in complement(&d) {
                    let family = |t: f64| unit(d.iter().zip(&e).map(|(a, b)| a + t * b).collect());
                    let mut f = |t: f64| {
                        evals += 1;
                        caster.sigma_at(&family(t)).map(|v| v.0).unwrap_or(f64::INFINITY)
                    };
                    let t = golden_min(&mut f, -width, width, 40);
                    d = family(t);
                }
            }
            if let Some((s, b, act)) = caster.sigma_at(&d) {
                if s < best.0 {
                    best = (s, b, act, d);
                }
            }
        }
    }
    Ok(SigmaReport {
        sigma: best.0,
        argmin: Some(best.1),
        active_at_argmin: best.2,
        interior_point: origin,
        rays: dirs.len(),
        boundary_points: boundary.len(),
        refinement_evaluations: evals,
        boundary,
    })
}

/// Golden-section search for a minimum on [a, b]; returns the best abscissa seen.
pub(crate) fn golden_min(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let (mut best_t, mut best_v) = if fc <= fd { (c, fc) } else { (d, fd) };
    let f0 = f(0.0);
    if f0 <= best_v {
        best_t = 0.0;
        best_v = f0;
    }
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
            if fc < best_v {
                best_t = c;
                best_v = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
            if fd < best_v {
                best_t = d;
                best_v = fd;
            }
        }
    }
    best_t
}

/// Spectral norm of a symmetric row-major matrix.
pub(crate) fn sym_norm(n: usize, h: &[f64]) -> f64 {
    SymmetricEigen::new(DMatrix::from_row_slice(n, n, h)).eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// c₂ ≥ max over D̂ and i of ‖Hess g_i‖₂. Exact for degree ≤ 2; otherwise the spectral norm of the
/// matrix of Bernstein norms ‖∂_j∂_k g_i‖_B, which dominates |Hess g_i(x)| entrywise.
pub fn hessian_bound_c2(sys: &SemialgSystem) -> Result<f64> {
    let n = sys.n();
    let mut c2: f64 = 0.0;
    for g in &sys.g {
        let v = if g.degree() <= 2 {
            sym_norm(n, &g.to_float().hessian(&vec![0.0; n]))
        } else {
            let mut m = vec![0.0; n * n];
            for j in 0..n {
                for k in j..n {
                    let d: MonomialPoly = g.derivative(j).derivative(k);
                    let b = to_f64(&bnorm(&mono_to_bernstein(&d, d.degree(), &sys.dom)?));
                    m[j * n + k] = b;
                    m[k * n + j] = b;
                }
            }
            sym_norm(n, &m)
        };
        c2 = c2.max(v);
    }
    Ok(c2)
}
