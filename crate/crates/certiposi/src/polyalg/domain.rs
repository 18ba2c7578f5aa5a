use crate::error::{Error, Result};
use crate::rational::{ceil_sqrt, fmt_rational, q, to_f64, Q};
use num_bigint::BigInt;
use num_traits::Signed;

/// The simplex D̂ = {x : 1 + x_i ≥ 0, ŝ − Σx_i ≥ 0} with rational ŝ ≥ √n, so D̂ contains the unit ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexDomain {
    n: usize,
    s_hat: Q,
}

impl SimplexDomain {
    pub fn new(n: usize, s_hat: Q) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !s_hat.is_positive() || &s_hat * &s_hat < q(n as i64) {
            return Err(Error::InvalidInput(format!("s_hat = {} violates s_hat^2 >= {n}", fmt_rational(&s_hat))));
        }
        Ok(SimplexDomain { n, s_hat })
    }

    /// ŝ = √n rounded up at 12 decimal digits (exact for perfect squares).
    pub fn default_for(n: usize) -> Self {
        let scale = num_traits::pow(BigInt::from(10u32), 12);
        let s = ceil_sqrt(&(BigInt::from(n) * &scale * &scale));
        SimplexDomain::new(n, Q::new(s, scale)).expect("rounded-up root satisfies s^2 >= n")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_hat(&self) -> &Q {
        &self.s_hat
    }

    /// n + ŝ, the edge scale of θ.
    pub fn a(&self) -> Q {
        q(self.n as i64) + &self.s_hat
    }

    pub fn a_f64(&self) -> f64 {
        to_f64(&self.a())
    }

    /// θ(y) = (n + ŝ)y − 1 maps the standard simplex onto D̂.
    pub fn theta(&self, y: &[Q]) -> Vec<Q> {
        let a = self.a();
        y.iter().map(|yi| &a * yi - q(1)).collect()
    }

    /// (b_0, b_1, …, b_n) with b_i = (1 + x_i)/a and b_0 = (ŝ − Σx)/a.
    pub fn barycentric(&self, x: &[Q]) -> Result<Vec<Q>> {
        self.check(x.len())?;
        let a = self.a();
        let mut b = Vec::with_capacity(self.n + 1);
        let sum: Q = x.iter().sum();
        b.push((&self.s_hat - sum) / &a);
        b.extend(x.iter().map(|xi| (xi + q(1)) / &a));
        Ok(b)
    }

    pub fn barycentric_f64(&self, x: &[f64]) -> Vec<f64> {
        let a = self.a_f64();
        let s = to_f64(&self.s_hat);
        let mut b = Vec::with_capacity(self.n + 1);
        b.push((s - x.iter().sum::<f64>()) / a);
        b.extend(x.iter().map(|xi| (xi + 1.0) / a));
        b
    }

    pub fn contains(&self, x: &[Q]) -> Result<bool> {
        Ok(self.barycentric(x)?.iter().all(|b| !b.is_negative()))
    }

    pub fn contains_f64(&self, x: &[f64]) -> bool {
        x.len() == self.n && self.barycentric_f64(x).iter().all(|&b| b >= 0.0)
    }

    /// Euclidean diameter: a for n = 1, √2·a otherwise.
    pub fn diameter(&self) -> f64 {
        let a = self.a_f64();
        if self.n == 1 {
            a
        } else {
            std::f64::consts::SQRT_2 * a
        }
    }

    pub(crate) fn check(&self, got: usize) -> Result<()> {
        if got != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got });
        }
        Ok(())
    }
}
