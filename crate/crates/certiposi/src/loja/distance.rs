use crate::certify::SemialgSystem;
use crate::error::{Error, Result};
use crate::grid::{dist, sample_simplex};
use crate::numfmt::ser_opt_f64;
use crate::polyalg::{FloatPoly, MonomialPoly};
use crate::rational::Q;
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// F(x) = −min((f(x) − f*)/‖f‖_B, 0), exactly.
pub fn eval_f_distance(f: &MonomialPoly, fstar: &Q, norm_b_f: &Q, x: &[Q]) -> Result<Q> {
    let v = (f.eval(x)? - fstar) / norm_b_f;
    Ok(if v < Q::zero() { -v } else { Q::zero() })
}

pub fn eval_f_distance_f64(f: &FloatPoly, fstar: f64, norm_b_f: f64, x: &[f64]) -> f64 {
    (-(f.eval(x) - fstar) / norm_b_f).max(0.0)
}

/// G(x) = −min(g_1(x), …, g_r(x), 0) on a scaled system, exactly.
pub fn eval_g_distance(sys: &SemialgSystem, x: &[Q]) -> Result<Q> {
    let mut worst = Q::zero();
    for g in &sys.g {
        let v = g.eval(x)?;
        if v < worst {
            worst = v;
        }
    }
    Ok(-worst)
}

pub fn eval_g_distance_f64(gs: &[FloatPoly], x: &[f64]) -> f64 {
    gs.iter().map(|g| g.eval(x)).fold(0.0, f64::min).abs()
}

/// One point of a distance study.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceSample {
    pub x: Vec<f64>,
    #[serde(rename = "F", serialize_with = "ser_opt_f64")]
    pub f: Option<f64>,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub active_set_at_projection: Vec<usize>,
}

/// A closest point z of S to y.
#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    pub z: Vec<f64>,
    pub dist: f64,
    /// Distance to a point found feasible by bisection: a sampled upper bound for E.
    pub upper: f64,
    /// Whether z satisfies the KKT system to working precision.
    pub polished: bool,
}

/// Multistart projection onto S: bisection from the nearest feasible samples, then Newton on the
/// KKT system with an active-set update.
pub struct Projector {
    gs: Vec<FloatPoly>,
    cloud: Vec<Vec<f64>>,
    n: usize,
    starts: usize,
}

impl Projector {
    /// Draws `cloud_size` points of D̂ and keeps those in S.
    pub fn new(sys: &SemialgSystem, cloud_size: usize, seed: u64) -> Result<Self> {
        let gs: Vec<FloatPoly> = sys.g.iter().map(MonomialPoly::to_float).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cloud: Vec<Vec<f64>> = (0..cloud_size)
            .map(|_| sample_simplex(&sys.dom, &mut rng))
            .filter(|x| gs.iter().all(|g| g.eval(x) >= 0.0))
            .collect();
        if cloud.is_empty() {
            return Err(Error::NoFeasiblePoint(format!("no point of S among {cloud_size} samples of the simplex")));
        }
        Ok(Projector { gs, cloud, n: sys.n(), starts: 6 })
    }

    pub fn constraints(&self) -> &[FloatPoly] {
        &self.gs
    }

    pub fn cloud(&self) -> &[Vec<f64>] {
        &self.cloud
    }

    pub fn feasible(&self, x: &[f64]) -> bool {
        self.gs.iter().all(|g| g.eval(x) >= 0.0)
    }

    /// Last feasible point on the segment from a feasible `a` towards an infeasible `b`.
    pub fn bisect(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let at = |t: f64| a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect::<Vec<f64>>();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.feasible(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(lo)
    }

    pub fn project(&self, y: &[f64]) -> Projection {
        if self.feasible(y) {
            return Projection { z: y.to_vec(), dist: 0.0, upper: 0.0, polished: true };
        }
        let mut near: Vec<(f64, &Vec<f64>)> = self.cloud.iter().map(|c| (dist(c, y), c)).collect();
        let k = self.starts.min(near.len());
        near.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0));
        near.truncate(k);
        let mut best: Option<Projection> = None;
        let mut upper = f64::INFINITY;
        let mut boundary = vec![];
        for (_, c) in &near {
            let b = self.bisect(c, y);
            upper = upper.min(dist(&b, y));
            boundary.push(b);
        }
        for b in &boundary {
            let cand = match self.polish(y, b) {
                Some(z) if dist(&z, y) <= upper + 1e-9 => Projection { dist: dist(&z, y), z, upper, polished: true },
                _ => Projection { dist: dist(b, y), z: b.clone(), upper, polished: false },
            };
            let better = match &best {
                None => true,
                Some(p) => (cand.polished && !p.polished && cand.dist <= p.dist + 1e-9) || cand.dist < p.dist - 1e-12,
            };
            if better {
                best = Some(cand);
            }
        }
        let mut p = best.expect("at least one start");
        p.upper = upper;
        p
    }

    /// Newton on z − y − Σ_{i∈I} μ_i ∇g_i(z) = 0, g_I(z) = 0, dropping negative multipliers and
    /// adding violated constraints.
    fn polish(&self, y: &[f64], z0: &[f64]) -> Option<Vec<f64>> {
        let r = self.gs.len();
        let scale = 1.0 + y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut active: Vec<usize> = (0..r).filter(|&i| self.gs[i].eval(z0) <= 1e-6 * scale).collect();
        if active.is_empty() {
            active = vec![(0..r).min_by(|&a, &b| self.gs[a].eval(z0).total_cmp(&self.gs[b].eval(z0)))?];
        }
        let mut z = z0.to_vec();
        for _ in 0..2 * r + 4 {
            if active.len() > self.n {
                return None;
            }
            let (zn, mu) = self.newton(y, &z, &active)?;
            z = zn;
            if let Some((k, _)) = mu.iter().enumerate().filter(|(_, &m)| m < -1e-12).min_by(|a, b| a.1.total_cmp(b.1)) {
                active.remove(k);
                if active.is_empty() {
                    return None;
                }
                continue;
            }
            let viol = (0..r).filter(|i| !active.contains(i)).map(|i| (i, self.gs[i].eval(&z))).filter(|(_, v)| *v < -1e-12).min_by(|a, b| a.1.total_cmp(&b.1));
            match viol {
                Some((i, _)) => {
                    active.push(i);
                    active.sort_unstable();
                }
                None => return Some(z),
            }
        }
        None
    }

    fn newton(&self, y: &[f64], z0: &[f64], active: &[usize]) -> Option<(Vec<f64>, Vec<f64>)> {
        let (n, k) = (self.n, active.len());
        let jac = |z: &[f64]| DMatrix::from_fn(n, k, |row, col| self.gs[active[col]].grad(z)[row]);
        let mut z = DVector::from_column_slice(z0);
        let yv = DVector::from_column_slice(y);
        let j0 = jac(z.as_slice());
        let mut mu = j0.clone().svd(true, true).solve(&(&z - &yv), 1e-14).ok()?;
        let residual = |z: &DVector<f64>, mu: &DVector<f64>| -> DVector<f64> {
            let j = jac(z.as_slice());
            let top = z - &yv - &j * mu;
            let mut out = DVector::zeros(n + k);
            out.rows_mut(0, n).copy_from(&top);
            for (c, &i) in active.iter().enumerate() {
                out[n + c] = self.gs[i].eval(z.as_slice());
            }
            out
        };
        let mut res = residual(&z, &mu);
        for _ in 0..100 {
            let rn = res.norm();
            if rn < 1e-15 * (1.0 + z.norm()) {
                break;
            }
            let j = jac(z.as_slice());
            let mut m = DMatrix::zeros(n + k, n + k);
            let mut hsum = DMatrix::<f64>::identity(n, n);
            for (c, &i) in active.iter().enumerate() {
                let h = self.gs[i].hessian(z.as_slice());
                hsum -= DMatrix::from_row_slice(n, n, &h) * mu[c];
            }
            m.view_mut((0, 0), (n, n)).copy_from(&hsum);
            m.view_mut((0, n), (n, k)).copy_from(&(-&j));
            m.view_mut((n, 0), (k, n)).copy_from(&j.transpose());
            let step = m.lu().solve(&(-&res))?;
            let mut t = 1.0;
            loop {
                let zn = &z + step.rows(0, n) * t;
                let mn = &mu + step.rows(n, k) * t;
                let rnew = residual(&zn, &mn);
                if rnew.norm() < rn || t < 1e-4 {
                    z = zn;
                    mu = mn;
                    res = rnew;
                    break;
                }
                t *= 0.5;
            }
        }
        if !(res.norm() < 1e-9 * (1.0 + z.norm())) || z.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some((z.as_slice().to_vec(), mu.as_slice().to_vec()))
    }
}

/// E(x) = dist(x, S), estimated by [`Projector`].
pub fn eval_e_distance(sys: &SemialgSystem, x: &[f64], cloud_size: usize, seed: u64) -> Result<Projection> {
    sys.dom.check(x.len())?;
    Ok(Projector::new(sys, cloud_size, seed)?.project(x))
}
