//! Lattice grids and random samples of D̂.

use crate::polyalg::{Layout, SimplexDomain};
use crate::rational::{to_f64, Q};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Grid density: an explicit lattice resolution per edge, or a minimum total point count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points_per_dim: Option<u32>,
    pub total_points: usize,
}

impl GridSpec {
    pub fn total(total_points: usize) -> Self {
        GridSpec { points_per_dim: None, total_points }
    }

    /// Lattice resolution K: points are θ(β/K) for |β| ≤ K.
    pub fn resolution(&self, n: usize) -> u32 {
        match self.points_per_dim {
            Some(p) => p.max(2) - 1,
            None => lattice_k(n, self.total_points),
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::total(10_000)
    }
}

/// Smallest K with at least `target` lattice points.
pub fn lattice_k(n: usize, target: usize) -> u32 {
    let mut k = 1u32;
    while Layout::count(n, k) < target {
        k += 1;
    }
    k
}

pub fn lattice_q(dom: &SimplexDomain, k: u32) -> Vec<Vec<Q>> {
    let kq = Q::from_integer(k.into());
    Layout::new(dom.n(), k)
        .indices()
        .into_iter()
        .map(|b| dom.theta(&b.iter().map(|&bi| Q::from_integer(bi.into()) / &kq).collect::<Vec<_>>()))
        .collect()
}

pub fn lattice_f64(dom: &SimplexDomain, k: u32) -> Vec<Vec<f64>> {
    lattice_q(dom, k).iter().map(|x| x.iter().map(to_f64).collect()).collect()
}

/// Uniform point of D̂ (flat Dirichlet weights mapped through θ).
pub fn sample_simplex<R: Rng>(dom: &SimplexDomain, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..=dom.n()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let a = dom.a_f64();
    e[1..].iter().map(|w| a * w / total - 1.0).collect()
}

/// Uniform unit direction.
pub fn sample_direction<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
