//! Wire formats: monomial term lists and Bernstein coefficient lists with rationals as strings.

use super::{BernsteinPoly, MonomialPoly, MultiIndex, SimplexDomain};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoeffJson {
    pub alpha: Vec<u32>,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BernsteinJson {
    pub n: usize,
    pub m: u32,
    pub s_hat: String,
    pub coeffs: Vec<CoeffJson>,
}

pub fn mono_to_json(p: &MonomialPoly) -> Vec<TermJson> {
    p.terms().map(|(e, c)| TermJson { exp: e.entries().to_vec(), coef: fmt_rational(c) }).collect()
}

pub fn mono_from_json(n: usize, terms: &[TermJson]) -> Result<MonomialPoly> {
    let parsed = terms
        .iter()
        .map(|t| {
            if t.exp.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.exp.len() });
            }
            Ok((MultiIndex::new(t.exp.clone()), parse_rational(&t.coef)?))
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialPoly::from_terms(n, parsed)
}

pub fn bernstein_to_json(b: &BernsteinPoly) -> BernsteinJson {
    BernsteinJson {
        n: b.n(),
        m: b.m(),
        s_hat: fmt_rational(b.dom().s_hat()),
        coeffs: b.iter().map(|(a, c)| CoeffJson { alpha: a.entries().to_vec(), c: fmt_rational(c) }).collect(),
    }
}

pub fn bernstein_from_json(j: &BernsteinJson) -> Result<BernsteinPoly> {
    let dom = SimplexDomain::new(j.n, parse_rational(&j.s_hat)?)?;
    let coeffs = j.coeffs.iter().map(|c| Ok((MultiIndex::new(c.alpha.clone()), parse_rational(&c.c)?))).collect::<Result<Vec<_>>>()?;
    BernsteinPoly::from_coeffs(&dom, j.m, coeffs)
}
