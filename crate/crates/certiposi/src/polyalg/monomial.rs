use super::index::MultiIndex;
use crate::error::{Error, Result};
use crate::rational::{to_f64, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse exact polynomial in the monomial basis. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Q>,
}

impl MonomialPoly {
    pub fn zero(n: usize) -> Self {
        MonomialPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Self::from_terms(n, [(MultiIndex::zeros(n), c)]).expect("constant term has dimension n")
    }

    /// x_i.
    pub fn var(n: usize, i: usize) -> Self {
        Self::from_terms(n, [(MultiIndex::unit(n, i), Q::one())]).expect("unit index has dimension n")
    }

    /// Sums duplicate exponents and drops zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Q)>) -> Result<Self> {
        let mut p = MonomialPoly::zero(n);
        for (e, c) in terms {
            if e.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.dim() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: MultiIndex, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max |α| over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &MultiIndex) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let d = self.degree() as usize;
        let pows: Vec<Vec<Q>> = x
            .iter()
            .map(|xi| {
                let mut v = Vec::with_capacity(d + 1);
                v.push(Q::one());
                for k in 1..=d {
                    let next = &v[k - 1] * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.entries().iter().enumerate() {
                if ei > 0 {
                    t *= &pows[i][ei as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Q) -> MonomialPoly {
        if c.is_zero() {
            return MonomialPoly::zero(self.n);
        }
        MonomialPoly { n: self.n, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> MonomialPoly {
        let mut out = MonomialPoly::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.entries()[i];
            if k > 0 {
                let mut v = e.entries().to_vec();
                v[i] -= 1;
                out.add_term(MultiIndex::new(v), c * Q::from_integer(k.into()));
            }
        }
        out
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.entries().to_vec(), to_f64(c))).collect(),
        }
    }

    fn check_dim(&self, other: &MonomialPoly) {
        assert_eq!(self.n, other.n, "polynomial dimensions differ");
    }
}

impl Add for &MonomialPoly {
    type Output = MonomialPoly;
    fn add(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MonomialPoly {
    type Output = MonomialPoly;
    fn sub(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MonomialPoly {
    type Output = MonomialPoly;
    fn mul(self, rhs: &MonomialPoly) -> MonomialPoly {
        self.check_dim(rhs);
        let mut out = MonomialPoly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MonomialPoly {
    type Output = MonomialPoly;
    fn neg(self) -> MonomialPoly {
        MonomialPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

/// Floating-point copy of a monomial polynomial with analytic derivatives.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>()).sum()
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for (e, c) in &self.terms {
            for j in 0..self.n {
                if e[j] == 0 {
                    continue;
                }
                let mut t = c * e[j] as f64;
                for (i, (&k, &xi)) in e.iter().zip(x).enumerate() {
                    let k = if i == j { k - 1 } else { k };
                    t *= xi.powi(k as i32);
                }
                g[j] += t;
            }
        }
        g
    }

    /// Row-major n×n Hessian.
    pub fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut h = vec![0.0; n * n];
        for (e, c) in &self.terms {
            for a in 0..n {
                for b in a..n {
                    let mut ex: Vec<i64> = e.iter().map(|&k| k as i64).collect();
                    let mut t = *c;
                    t *= ex[a] as f64;
                    ex[a] -= 1;
                    t *= ex[b] as f64;
                    ex[b] -= 1;
                    if t == 0.0 {
                        continue;
                    }
                    for (i, &k) in ex.iter().enumerate() {
                        t *= x[i].powi(k as i32);
                    }
                    h[a * n + b] += t;
                    if a != b {
                        h[b * n + a] += t;
                    }
                }
            }
        }
        h
    }
}
