use super::domain::SimplexDomain;
use super::index::{Layout, MultiIndex};
use super::monomial::MonomialPoly;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, factorials, qabs, to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Exact coefficients over the degree-m Bernstein basis of D̂,
/// B_{m,α} = C(m;α)·b_0^{m−|α|}·Π b_i^{α_i} in barycentric coordinates.
/// Stored densely in lexicographic order of α; the zero polynomial has no nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinPoly {
    dom: SimplexDomain,
    m: u32,
    coeffs: Vec<Q>,
}

impl BernsteinPoly {
    pub fn zero(dom: &SimplexDomain, m: u32) -> Self {
        let len = Layout::new(dom.n(), m).len();
        BernsteinPoly { dom: dom.clone(), m, coeffs: vec![Q::zero(); len] }
    }

    pub fn constant(dom: &SimplexDomain, m: u32, c: Q) -> Self {
        let len = Layout::new(dom.n(), m).len();
        BernsteinPoly { dom: dom.clone(), m, coeffs: vec![c; len] }
    }

    /// Sparse construction; unspecified coefficients are zero.
    pub fn from_coeffs(dom: &SimplexDomain, m: u32, coeffs: impl IntoIterator<Item = (MultiIndex, Q)>) -> Result<Self> {
        let layout = Layout::new(dom.n(), m);
        let mut out = Self::zero(dom, m);
        for (a, c) in coeffs {
            dom.check(a.dim())?;
            if a.order() > m {
                return Err(Error::InvalidInput(format!("index {a} exceeds degree {m}")));
            }
            out.coeffs[layout.rank(a.entries())] = c;
        }
        Ok(out)
    }

    pub(crate) fn from_dense(dom: &SimplexDomain, m: u32, coeffs: Vec<Q>) -> Self {
        debug_assert_eq!(coeffs.len(), Layout::new(dom.n(), m).len());
        BernsteinPoly { dom: dom.clone(), m, coeffs }
    }

    pub fn dom(&self) -> &SimplexDomain {
        &self.dom
    }

    pub fn n(&self) -> usize {
        self.dom.n()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    #[cfg(test)]
    pub(crate) fn dense(&self) -> &[Q] {
        &self.coeffs
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::new(self.n(), self.m)
    }

    pub fn coeff(&self, a: &MultiIndex) -> Q {
        if a.dim() != self.n() || a.order() > self.m {
            return Q::zero();
        }
        self.coeffs[self.layout().rank(a.entries())].clone()
    }

    /// Nonzero coefficients in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &Q)> + '_ {
        self.layout().indices().into_iter().zip(self.coeffs.iter()).filter(|(_, c)| !c.is_zero()).map(|(a, c)| (MultiIndex::new(a), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn min_coeff(&self) -> Q {
        self.coeffs.iter().min().cloned().unwrap_or_else(Q::zero)
    }

    pub fn max_coeff(&self) -> Q {
        self.coeffs.iter().max().cloned().unwrap_or_else(Q::zero)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        bernstein_eval(self, x)
    }

    pub fn to_monomial(&self) -> MonomialPoly {
        bernstein_to_mono(self)
    }

    pub fn evaluator(&self) -> FloatEvaluator {
        FloatEvaluator::new(self)
    }
}

/// Multinomials C(m; α) = m!/(α_1!⋯α_n!(m−|α|)!) in layout order.
pub(crate) fn multinomials(layout: &Layout) -> Vec<BigInt> {
    let fact = factorials(layout.m);
    layout
        .indices()
        .iter()
        .map(|a| {
            let rest = layout.m - a.iter().sum::<u32>();
            let den = a.iter().fold(fact[rest as usize].clone(), |acc, &k| acc * &fact[k as usize]);
            &fact[layout.m as usize] / den
        })
        .collect()
}

fn same_domain(a: &SimplexDomain, b: &SimplexDomain) -> Result<()> {
    if a != b {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

fn map_lines(v: &mut [Q], layout: &Layout, f: impl Fn(&[Q]) -> Vec<Q> + Sync) {
    let idx = layout.indices();
    for axis in 0..layout.n {
        let lines = layout.lines(axis, &idx);
        let results: Vec<Vec<Q>> = lines.par_iter().map(|line| f(&line.iter().map(|&r| v[r].clone()).collect::<Vec<_>>())).collect();
        for (line, res) in lines.iter().zip(results) {
            for (&r, val) in line.iter().zip(res) {
                v[r] = val;
            }
        }
    }
}

/// Coefficients of Σ u_k (x + c)^k.
fn taylor_shift(u: &[Q], c: &Q) -> Vec<Q> {
    let len = u.len();
    let mut r: Vec<Q> = vec![Q::zero(); len];
    for k in (0..len).rev() {
        for j in (1..len).rev() {
            let t = &r[j - 1] + c * &r[j];
            r[j] = t;
        }
        r[0] = c * &r[0] + &u[k];
    }
    r
}

/// Δ^j v_0 for j = 0..len.
fn forward_differences(v: &[Q]) -> Vec<Q> {
    let mut w = v.to_vec();
    let mut out = Vec::with_capacity(v.len());
    for j in 0..v.len() {
        out.push(w[0].clone());
        for k in 0..v.len() - j - 1 {
            w[k] = &w[k + 1] - &w[k];
        }
    }
    out
}

/// Inverse of `forward_differences`: v_j = Σ_k C(j,k) d_k.
fn from_forward_differences(d: &[Q]) -> Vec<Q> {
    let mut w = d.to_vec();
    let mut out = Vec::with_capacity(d.len());
    for j in 0..d.len() {
        out.push(w[0].clone());
        for k in 0..d.len() - j - 1 {
            w[k] = &w[k] + &w[k + 1];
        }
    }
    out
}

pub fn mono_to_bernstein(p: &MonomialPoly, m: u32, dom: &SimplexDomain) -> Result<BernsteinPoly> {
    dom.check(p.n())?;
    if m < p.degree() {
        return Err(Error::DegreeTooSmall { needed: p.degree(), got: m });
    }
    let layout = Layout::new(dom.n(), m);
    let mut v = vec![Q::zero(); layout.len()];
    for (e, c) in p.terms() {
        v[layout.rank(e.entries())] = c.clone();
    }
    // x_i = a·b_i − 1: shift by −1, then scale the b-power k by a^k.
    let a = dom.a();
    let a_pows: Vec<Q> = std::iter::successors(Some(Q::one()), |x| Some(x * &a)).take(m as usize + 1).collect();
    map_lines(&mut v, &layout, |line| {
        taylor_shift(line, &-Q::one()).into_iter().enumerate().map(|(j, c)| c * &a_pows[j]).collect()
    });
    for (c, mult) in v.iter_mut().zip(multinomials(&layout)) {
        *c /= Q::from_integer(mult);
    }
    map_lines(&mut v, &layout, from_forward_differences);
    Ok(BernsteinPoly::from_dense(dom, m, v))
}

pub fn bernstein_to_mono(b: &BernsteinPoly) -> MonomialPoly {
    let layout = b.layout();
    let mut v = b.coeffs.clone();
    map_lines(&mut v, &layout, forward_differences);
    for (c, mult) in v.iter_mut().zip(multinomials(&layout)) {
        *c *= Q::from_integer(mult);
    }
    // b_i = (1 + x_i)/a: scale the power k by a^{-k}, then shift by +1.
    let ainv = Q::one() / b.dom.a();
    let ainv_pows: Vec<Q> = std::iter::successors(Some(Q::one()), |x| Some(x * &ainv)).take(b.m as usize + 1).collect();
    map_lines(&mut v, &layout, |line| {
        let u: Vec<Q> = line.iter().enumerate().map(|(k, c)| c * &ainv_pows[k]).collect();
        taylor_shift(&u, &Q::one())
    });
    let terms = layout.indices().into_iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(a, c)| (MultiIndex::new(a), c));
    MonomialPoly::from_terms(b.n(), terms).expect("layout indices have dimension n")
}

pub fn bernstein_eval(b: &BernsteinPoly, x: &[Q]) -> Result<Q> {
    let bary = b.dom.barycentric(x)?;
    let d = common_denominator(&bary);
    let ints: Vec<BigInt> = bary.iter().map(|bi| bi.numer() * (&d / bi.denom())).collect();
    let m = b.m as usize;
    let pows: Vec<Vec<BigInt>> = ints
        .iter()
        .map(|bi| std::iter::successors(Some(BigInt::one()), |p| Some(p * bi)).take(m + 1).collect())
        .collect();
    let dc = common_denominator(&b.coeffs);
    let layout = b.layout();
    let mut acc = BigInt::zero();
    for ((a, c), mult) in layout.indices().iter().zip(&b.coeffs).zip(multinomials(&layout)) {
        if c.is_zero() {
            continue;
        }
        let rest = m - a.iter().sum::<u32>() as usize;
        let mut t = c.numer() * (&dc / c.denom()) * mult * &pows[0][rest];
        for (i, &ai) in a.iter().enumerate() {
            t *= &pows[i + 1][ai as usize];
        }
        acc += t;
    }
    Ok(Q::new(acc, dc * num_traits::pow(d, m)))
}

pub fn elevate(b: &BernsteinPoly, m2: u32) -> Result<BernsteinPoly> {
    if m2 < b.m {
        return Err(Error::DegreeTooSmall { needed: b.m, got: m2 });
    }
    if m2 == b.m {
        return Ok(b.clone());
    }
    Ok(Scaled::from_poly(b).elevate_to(m2).to_poly(&b.dom))
}

pub fn multiply(b1: &BernsteinPoly, b2: &BernsteinPoly) -> Result<BernsteinPoly> {
    same_domain(&b1.dom, &b2.dom)?;
    Ok(Scaled::from_poly(b1).mul(&Scaled::from_poly(b2)).to_poly(&b1.dom))
}

/// ‖b‖_{B,m}: the largest absolute coefficient.
pub fn bnorm(b: &BernsteinPoly) -> Q {
    b.coeffs.iter().map(qabs).max().unwrap_or_else(Q::zero)
}

pub fn linear_combine(terms: &[(Q, BernsteinPoly)], m: u32, dom: &SimplexDomain) -> Result<BernsteinPoly> {
    let mut out = BernsteinPoly::zero(dom, m);
    for (c, b) in terms {
        same_domain(dom, &b.dom)?;
        let e = elevate(b, m)?;
        for (o, v) in out.coeffs.iter_mut().zip(e.coeffs) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// Homogeneous integer form: num_α = den·C(m;α)·c_α. Products become plain convolutions
/// and one-step elevation becomes a sum over the n+1 predecessors.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub n: usize,
    pub m: u32,
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl Scaled {
    pub fn from_poly(b: &BernsteinPoly) -> Scaled {
        let den = common_denominator(&b.coeffs);
        let layout = b.layout();
        let num = b.coeffs.iter().zip(multinomials(&layout)).map(|(c, mult)| c.numer() * (&den / c.denom()) * mult).collect();
        Scaled { n: b.n(), m: b.m, num, den }
    }

    pub fn to_poly(&self, dom: &SimplexDomain) -> BernsteinPoly {
        let layout = Layout::new(self.n, self.m);
        let coeffs = self.num.par_iter().zip(multinomials(&layout).into_par_iter()).map(|(v, mult)| Q::new(v.clone(), &self.den * mult)).collect();
        BernsteinPoly::from_dense(dom, self.m, coeffs)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.num.iter().all(|v| !v.is_negative())
    }

    pub fn elevate_one(&self) -> Scaled {
        let old = Layout::new(self.n, self.m);
        let new = Layout::new(self.n, self.m + 1);
        let num = new
            .indices()
            .par_iter()
            .map(|g| {
                let mut acc = if g.iter().sum::<u32>() <= self.m { self.num[old.rank(g)].clone() } else { BigInt::zero() };
                let mut h = g.clone();
                for i in 0..self.n {
                    if g[i] > 0 {
                        h[i] -= 1;
                        acc += &self.num[old.rank(&h)];
                        h[i] += 1;
                    }
                }
                acc
            })
            .collect();
        Scaled { n: self.n, m: self.m + 1, num, den: self.den.clone() }
    }

    pub fn elevate_to(&self, m2: u32) -> Scaled {
        let mut cur = self.clone();
        while cur.m < m2 {
            cur = cur.elevate_one();
        }
        cur
    }

    pub fn mul(&self, other: &Scaled) -> Scaled {
        let (la, lb) = (Layout::new(self.n, self.m), Layout::new(self.n, other.m));
        let lc = Layout::new(self.n, self.m + other.m);
        let support: Vec<(Vec<u32>, &BigInt)> = la.indices().into_iter().zip(&self.num).filter(|(_, v)| !v.is_zero()).collect();
        let num = lc
            .indices()
            .par_iter()
            .map(|g| {
                let gsum: u32 = g.iter().sum();
                let mut acc = BigInt::zero();
                let mut h = vec![0u32; self.n];
                for (a, va) in &support {
                    if a.iter().zip(g).any(|(x, y)| x > y) || gsum - a.iter().sum::<u32>() > other.m {
                        continue;
                    }
                    for i in 0..self.n {
                        h[i] = g[i] - a[i];
                    }
                    let vb = &other.num[lb.rank(&h)];
                    if !vb.is_zero() {
                        acc += *va * vb;
                    }
                }
                acc
            })
            .collect();
        Scaled { n: self.n, m: lc.m, num, den: &self.den * &other.den }
    }
}

/// Fast floating-point evaluation at points of D̂ via log-weights of the basis.
pub struct FloatEvaluator {
    dom: SimplexDomain,
    m: u32,
    idx: Vec<Vec<u32>>,
    ln_mult: Vec<f64>,
    coef: Vec<f64>,
}

impl FloatEvaluator {
    pub fn new(b: &BernsteinPoly) -> Self {
        let layout = b.layout();
        let mut lnf = vec![0.0f64; b.m as usize + 1];
        for k in 1..=b.m as usize {
            lnf[k] = lnf[k - 1] + (k as f64).ln();
        }
        let idx = layout.indices();
        let ln_mult = idx
            .iter()
            .map(|a| {
                let rest = b.m - a.iter().sum::<u32>();
                lnf[b.m as usize] - lnf[rest as usize] - a.iter().map(|&k| lnf[k as usize]).sum::<f64>()
            })
            .collect();
        FloatEvaluator { dom: b.dom.clone(), m: b.m, idx, ln_mult, coef: b.coeffs.iter().map(to_f64).collect() }
    }

    /// Value at x ∈ D̂; barycentric coordinates are clamped at 0 against rounding.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let bary: Vec<f64> = self.dom.barycentric_f64(x).into_iter().map(|b| b.max(0.0)).collect();
        let lnb: Vec<f64> = bary.iter().map(|b| b.ln()).collect();
        let mut acc = 0.0;
        for ((a, lm), c) in self.idx.iter().zip(&self.ln_mult).zip(&self.coef) {
            if *c == 0.0 {
                continue;
            }
            let rest = self.m - a.iter().sum::<u32>();
            let mut l = *lm;
            let mut zero = false;
            for (k, lb) in std::iter::once(rest).chain(a.iter().copied()).zip(&lnb) {
                if k > 0 {
                    if lb.is_infinite() {
                        zero = true;
                        break;
                    }
                    l += k as f64 * lb;
                }
            }
            if !zero {
                acc += c * l.exp();
            }
        }
        acc
    }
}
