use crate::error::{Error, Result};
use crate::grid::{norm, sample_simplex};
use crate::polyalg::{bnorm, mono_to_bernstein, MonomialPoly, SimplexDomain};
use crate::rational::Q;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Constraints g_1,…,g_r ≥ 0 on D̂, with their scaling state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemialgSystem {
    pub g: Vec<MonomialPoly>,
    pub names: Vec<String>,
    pub dom: SimplexDomain,
    pub scaled: bool,
    pub ball_checked: bool,
    /// Divisors applied so far: g_i(scaled) = g_i(raw)/scale_factors[i].
    pub scale_factors: Vec<Q>,
}

impl SemialgSystem {
    pub fn new(dom: SimplexDomain, g: Vec<MonomialPoly>) -> Result<Self> {
        let names = (1..=g.len()).map(|i| format!("g{i}")).collect();
        Self::with_names(dom, g, names)
    }

    pub fn with_names(dom: SimplexDomain, g: Vec<MonomialPoly>, names: Vec<String>) -> Result<Self> {
        for gi in &g {
            dom.check(gi.n())?;
        }
        if names.len() != g.len() {
            return Err(Error::InvalidInput("one name per constraint".into()));
        }
        let r = g.len();
        Ok(SemialgSystem { g, names, dom, scaled: false, ball_checked: false, scale_factors: vec![Q::one(); r] })
    }

    pub fn n(&self) -> usize {
        self.dom.n()
    }

    pub fn r(&self) -> usize {
        self.g.len()
    }

    /// d(g): the largest constraint degree.
    pub fn degree(&self) -> u32 {
        self.g.iter().map(MonomialPoly::degree).max().unwrap_or(0)
    }

    /// Exact feasibility of a rational point.
    pub fn contains(&self, x: &[Q]) -> Result<bool> {
        for gi in &self.g {
            if gi.eval(x)? < Q::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_f64(&self, x: &[f64]) -> bool {
        self.g.iter().all(|gi| gi.to_float().eval(x) >= 0.0)
    }
}

/// ‖g‖_B at the native degree of g.
pub fn constraint_norm(g: &MonomialPoly, dom: &SimplexDomain) -> Result<Q> {
    Ok(bnorm(&mono_to_bernstein(g, g.degree(), dom)?))
}

/// Divides every g_i by ‖g_i‖_B; S is unchanged and the operation is idempotent.
pub fn normalize_system(raw: &SemialgSystem) -> Result<SemialgSystem> {
    let mut out = raw.clone();
    for (i, gi) in raw.g.iter().enumerate() {
        if gi.is_zero() {
            return Err(Error::ZeroConstraint(i + 1));
        }
        let nb = constraint_norm(gi, &raw.dom)?;
        out.g[i] = gi.scale(&(Q::one() / &nb));
        out.scale_factors[i] = &raw.scale_factors[i] * nb;
    }
    out.scaled = true;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallStatus {
    Contained,
    NotContained,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallCheck {
    pub status: BallStatus,
    pub max_norm: Option<f64>,
    pub feasible: usize,
    pub samples: usize,
    pub tolerance: f64,
}

/// Rejection-samples S inside D̂ and compares the largest sampled norm with 1.
pub fn check_ball_containment(sys: &SemialgSystem, samples: usize, seed: u64) -> BallCheck {
    let tolerance = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floats: Vec<_> = sys.g.iter().map(MonomialPoly::to_float).collect();
    let mut max_norm: Option<f64> = None;
    let mut feasible = 0;
    for _ in 0..samples {
        let x = sample_simplex(&sys.dom, &mut rng);
        if floats.iter().all(|g| g.eval(&x) >= 0.0) {
            feasible += 1;
            let r = norm(&x);
            max_norm = Some(max_norm.map_or(r, |m: f64| m.max(r)));
        }
    }
    let status = match max_norm {
        None => BallStatus::Unknown,
        Some(r) if r <= 1.0 + tolerance => BallStatus::Contained,
        Some(_) => BallStatus::NotContained,
    };
    BallCheck { status, max_norm, feasible, samples, tolerance }
}
