use super::system::{constraint_norm, SemialgSystem};
use crate::error::{Error, Result};
use crate::polyalg::json::{bernstein_from_json, bernstein_to_json, mono_from_json, mono_to_json, BernsteinJson, CoeffJson, TermJson};
use crate::polyalg::{bernstein_to_mono, BernsteinPoly, MonomialPoly, MultiIndex, SimplexDomain};
use crate::rational::{fmt_rational, parse_rational, Q};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// f = Σ_α p_α B_{m,α} + λ Σ s_i² g_i with p_α ≥ 0 and λ ≥ 0.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub dom: SimplexDomain,
    pub m: u32,
    pub p: BernsteinPoly,
    pub lambda: Q,
    pub s_list: Vec<BernsteinPoly>,
    pub g_scaled: Vec<MonomialPoly>,
    pub provenance: serde_json::Value,
}

/// Wire form. Kept loose so that the verifier can report a malformed field as a failed check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CertificateJson {
    pub n: usize,
    pub s_hat: String,
    pub m: u32,
    pub lambda: String,
    pub p_coeffs: Vec<CoeffJson>,
    pub s_list: Vec<BernsteinJson>,
    pub g_scaled: Vec<Vec<TermJson>>,
    #[serde(default)]
    pub provenance: serde_json::Value,
}

impl Certificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.dom.n(),
            s_hat: fmt_rational(self.dom.s_hat()),
            m: self.m,
            lambda: fmt_rational(&self.lambda),
            p_coeffs: self.p.iter().map(|(a, c)| CoeffJson { alpha: a.entries().to_vec(), c: fmt_rational(c) }).collect(),
            s_list: self.s_list.iter().map(bernstein_to_json).collect(),
            g_scaled: self.g_scaled.iter().map(mono_to_json).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Parsed {
    dom: SimplexDomain,
    p: BernsteinPoly,
    s: Vec<BernsteinPoly>,
    g: Vec<MonomialPoly>,
}

fn parse_parts(f: &MonomialPoly, c: &CertificateJson) -> Result<Parsed> {
    if f.n() != c.n {
        return Err(Error::DimensionMismatch { expected: f.n(), got: c.n });
    }
    let dom = SimplexDomain::new(c.n, parse_rational(&c.s_hat)?)?;
    let coeffs = c.p_coeffs.iter().map(|e| Ok((MultiIndex::new(e.alpha.clone()), parse_rational(&e.c)?))).collect::<Result<Vec<_>>>()?;
    let p = BernsteinPoly::from_coeffs(&dom, c.m, coeffs)?;
    let s = c.s_list.iter().map(bernstein_from_json).collect::<Result<Vec<_>>>()?;
    if s.iter().any(|si| si.dom() != &dom) {
        return Err(Error::DomainMismatch);
    }
    let g = c.g_scaled.iter().map(|t| mono_from_json(c.n, t)).collect::<Result<Vec<_>>>()?;
    if s.len() != g.len() {
        return Err(Error::InvalidInput(format!("{} multipliers for {} constraints", s.len(), g.len())));
    }
    Ok(Parsed { dom, p, s, g })
}

fn check(name: &str, res: std::result::Result<String, String>) -> CheckResult {
    match res {
        Ok(detail) => CheckResult { name: name.into(), passed: true, detail },
        Err(detail) => CheckResult { name: name.into(), passed: false, detail },
    }
}

/// Re-checks a certificate from its wire form alone. Nothing computed at construction is trusted.
pub fn verify_certificate(f: &MonomialPoly, cert: &CertificateJson) -> VerifyReport {
    verify_inner(f, cert, None)
}

/// As [`verify_certificate`], and also checks that each g_i is a positive multiple of the raw constraint.
pub fn verify_with_system(f: &MonomialPoly, cert: &CertificateJson, raw: &SemialgSystem) -> VerifyReport {
    verify_inner(f, cert, Some(raw))
}

fn verify_inner(f: &MonomialPoly, cert: &CertificateJson, raw: Option<&SemialgSystem>) -> VerifyReport {
    let parsed = parse_parts(f, cert);
    let mut checks = vec![check(
        "domain",
        match &parsed {
            Ok(p) => Ok(format!("n = {}, s_hat = {}, m = {}, r = {}", p.dom.n(), fmt_rational(p.dom.s_hat()), cert.m, p.g.len())),
            Err(e) => Err(e.to_string()),
        },
    )];

    checks.push(check("nonnegativity", {
        let mut out = Ok(format!("{} stored coefficients, all >= 0", cert.p_coeffs.len()));
        for e in &cert.p_coeffs {
            match parse_rational(&e.c) {
                Ok(v) if v.is_negative() => {
                    out = Err(format!("p{:?} = {} < 0", e.alpha, e.c));
                    break;
                }
                Ok(_) => {}
                Err(err) => {
                    out = Err(format!("p{:?}: {err}", e.alpha));
                    break;
                }
            }
        }
        out
    }));

    let lambda = parse_rational(&cert.lambda);
    checks.push(check(
        "lambda",
        match &lambda {
            Ok(l) if l.is_negative() => Err(format!("lambda = {} < 0", cert.lambda)),
            Ok(l) => Ok(format!("lambda = {}", fmt_rational(l))),
            Err(e) => Err(e.to_string()),
        },
    ));

    checks.push(check(
        "scaling",
        match &parsed {
            Err(_) => Err("not checked: certificate did not parse".into()),
            Ok(p) => scaling(p, raw),
        },
    ));

    checks.push(check(
        "identity",
        match (&parsed, &lambda) {
            (Ok(p), Ok(l)) => identity(f, p, l),
            _ => Err("not checked: certificate did not parse".into()),
        },
    ));
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { checks, passed }
}

fn scaling(p: &Parsed, raw: Option<&SemialgSystem>) -> std::result::Result<String, String> {
    for (i, g) in p.g.iter().enumerate() {
        if g.is_zero() {
            return Err(format!("g{} is zero", i + 1));
        }
        let nb = constraint_norm(g, &p.dom).map_err(|e| e.to_string())?;
        if !nb.is_one() {
            return Err(format!("‖g{}‖_B = {} != 1", i + 1, fmt_rational(&nb)));
        }
    }
    if let Some(raw) = raw {
        if raw.g.len() != p.g.len() {
            return Err(format!("certificate has {} constraints, system has {}", p.g.len(), raw.g.len()));
        }
        for (i, (g, h)) in p.g.iter().zip(&raw.g).enumerate() {
            let (e, c) = h.terms().next().ok_or_else(|| format!("system constraint {} is zero", i + 1))?;
            let ratio = g.coeff(e) / c;
            if !ratio.is_positive() || g != &h.scale(&ratio) {
                return Err(format!("g{} is not a positive multiple of the system constraint", i + 1));
            }
        }
        return Ok(format!("{} constraints have unit norm and match the system", p.g.len()));
    }
    Ok(format!("{} constraints have unit norm", p.g.len()))
}

fn identity(f: &MonomialPoly, p: &Parsed, lambda: &Q) -> std::result::Result<String, String> {
    let parts: Vec<MonomialPoly> = p
        .s
        .par_iter()
        .zip(&p.g)
        .map(|(s, g)| {
            let sm = bernstein_to_mono(s);
            &(&sm * &sm) * g
        })
        .collect();
    let mut rhs = bernstein_to_mono(&p.p);
    if !lambda.is_zero() {
        let sum = parts.iter().fold(MonomialPoly::zero(f.n()), |acc, t| &acc + t);
        rhs = &rhs + &sum.scale(lambda);
    }
    let diff = &rhs - f;
    if diff.is_zero() {
        Ok(format!("exact in the monomial basis ({} terms)", f.num_terms()))
    } else {
        Err(format!("{} monomial coefficients differ, e.g. at {}", diff.num_terms(), diff.terms().next().map(|(e, _)| e.to_string()).unwrap_or_default()))
    }
}
