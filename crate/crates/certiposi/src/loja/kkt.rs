use super::cqc::{active_set, jacobian};
use super::distance::Projector;
use crate::error::{Error, Result};
use crate::grid::{dist, norm};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Local first-order data at a projection z of an exterior point y.
#[derive(Clone, Debug, Serialize)]
pub struct KKTData {
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub active: Vec<usize>,
    /// Row-major n×|I|; column i is ∇g_i(z).
    pub jacobian: Vec<Vec<f64>>,
    pub gram: Vec<Vec<f64>>,
    pub lambda_vec: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_minus: Vec<f64>,
    pub gamma_plus: Vec<f64>,
    pub g_minus: Vec<f64>,
    pub g_plus: Vec<f64>,
    /// g_I(y) − γ: the second-order remainder.
    pub h: Vec<f64>,
    pub sigma_min: f64,
    pub distance: f64,
    pub residual: f64,
    pub checks: KKTChecks,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct KKTChecks {
    /// ‖y − z‖ ≤ ‖γ₋‖/σ_min.
    pub basic_inequality: bool,
    pub basic_slack: f64,
    /// ⟨γ₋, γ⟩_{N⁻¹} ≥ 0.
    pub gamma_minus_inner: f64,
    /// ⟨γ₊, γ⟩_{N⁻¹} ≤ 0.
    pub gamma_plus_inner: f64,
    /// ⟨γ₊, γ₋⟩_{N⁻¹} ≤ 0.
    pub gamma_cross_inner: f64,
    pub gamma_signs: bool,
    /// |‖g₋‖ − ‖γ₋‖| ≤ c₂‖y − z‖².
    pub small_diff: bool,
    pub small_diff_gap: f64,
    /// ‖h‖ ≤ c₂‖y − z‖².
    pub remainder: bool,
    pub multipliers_nonnegative: bool,
}

fn split(v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (v.iter().map(|x| x.min(0.0)).collect(), v.iter().map(|x| x.max(0.0)).collect())
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

/// Projects y, solves y − z = −Jλ, and evaluates every inequality of the local analysis at
/// tolerance `tol`.
pub fn kkt_certificate(proj: &Projector, y: &[f64], c2: f64, tau_act: f64, residual_tol: f64, tol: f64) -> Result<KKTData> {
    if proj.feasible(y) {
        return Err(Error::InvalidInput("kkt data needs a point outside S".into()));
    }
    let p = proj.project(y);
    let gs = proj.constraints();
    let z = p.z;
    let active = active_set(gs, &z, tau_act);
    if active.is_empty() {
        return Err(Error::Numerical("projection has no active constraint".into()));
    }
    if active.len() > y.len() {
        return Err(Error::CqcViolation(format!("{} active constraints at the projection", active.len())));
    }
    let j = jacobian(gs, &z, &active);
    let d = DVector::from_iterator(y.len(), y.iter().zip(&z).map(|(a, b)| a - b));
    let n_mat = j.transpose() * &j;
    let n_inv = n_mat.clone().try_inverse().ok_or_else(|| Error::CqcViolation("singular Gram matrix at the projection".into()))?;
    let lambda = -(&n_inv * j.transpose() * &d);
    let residual = (&d + &j * &lambda).norm();
    let dist_yz = dist(y, &z);
    if residual > residual_tol * (1.0 + dist_yz) {
        return Err(Error::Numerical(format!("KKT residual {residual:.3e} above tolerance; projection failed or CQC violated")));
    }
    let gamma = j.transpose() * &d;
    let (gm, gp) = split(gamma.as_slice());
    let g_i: Vec<f64> = active.iter().map(|&i| gs[i].eval(y)).collect();
    let (g_minus, g_plus) = split(&g_i);
    let h: Vec<f64> = g_i.iter().zip(gamma.iter()).map(|(a, b)| a - b).collect();
    let sigma = j.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    let ip = |a: &[f64], b: &[f64]| {
        let (a, b) = (DVector::from_column_slice(a), DVector::from_column_slice(b));
        a.dot(&(&n_inv * b))
    };
    let (gmi, gpi, gxi) = (ip(&gm, gamma.as_slice()), ip(&gp, gamma.as_slice()), ip(&gp, &gm));
    let basic_slack = norm(&gm) / sigma - dist_yz;
    let q = c2 * dist_yz * dist_yz;
    let gap = (norm(&g_minus) - norm(&gm)).abs();
    let checks = KKTChecks {
        basic_inequality: basic_slack >= -tol,
        basic_slack,
        gamma_minus_inner: gmi,
        gamma_plus_inner: gpi,
        gamma_cross_inner: gxi,
        gamma_signs: gmi >= -tol && gpi <= tol && gxi <= tol,
        small_diff: gap <= q + tol,
        small_diff_gap: gap,
        remainder: norm(&h) <= q + tol,
        multipliers_nonnegative: lambda.iter().all(|&l| l >= -tol),
    };
    Ok(KKTData {
        y: y.to_vec(),
        z,
        active,
        jacobian: rows(&j),
        gram: rows(&n_mat),
        lambda_vec: lambda.as_slice().to_vec(),
        gamma: gamma.as_slice().to_vec(),
        gamma_minus: gm,
        gamma_plus: gp,
        g_minus,
        g_plus,
        h,
        sigma_min: sigma,
        distance: dist_yz,
        residual,
        checks,
    })
}
