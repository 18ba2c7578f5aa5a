//! Fixtures shared by the integration targets.
#![allow(dead_code)]

use certiposi::certify::*;
use certiposi::polyalg::*;
use certiposi::rational::{fmt_rational, parse_rational, q, Q};

pub fn unit_ball_constraint(n: usize) -> MonomialPoly {
    (0..n).fold(MonomialPoly::constant(n, q(1)), |acc, i| {
        let x = MonomialPoly::var(n, i);
        &acc - &(&x * &x)
    })
}

pub fn certify(n: usize, c: f64) -> (MonomialPoly, SemialgSystem, SemialgSystem, CertParams, Certificate) {
    let dom = SimplexDomain::default_for(n);
    let raw = SemialgSystem::new(dom.clone(), vec![unit_ball_constraint(n)]).unwrap();
    let sys = normalize_system(&raw).unwrap();
    let f = &MonomialPoly::constant(n, q(2)) + &MonomialPoly::var(n, 0);
    let nf = bnorm(&mono_to_bernstein(&f, 1, &dom).unwrap());
    let params = putinar_params(&(q(1) / &nf), 1.0, c, 1, &nf, &q(1)).unwrap();
    let cert = build_certificate(&f, &sys, &params, &CertifyOptions::default()).unwrap();
    (f, raw, sys, params, cert)
}

pub type Mutation = (&'static str, Box<dyn Fn(&mut CertificateJson)>);

pub fn bump(s: &str, by: Q) -> String {
    fmt_rational(&(parse_rational(s).unwrap() + by))
}

/// Each mutation is paired with the check that has to name it.
pub fn mutations(j: &CertificateJson) -> Vec<Mutation> {
    let k = j.p_coeffs.len();
    let positive: Vec<usize> = (0..k).filter(|&i| parse_rational(&j.p_coeffs[i].c).unwrap() > q(0)).collect();
    let mut out: Vec<Mutation> = vec![];
    for t in 0..5 {
        let i = positive[t * positive.len() / 5];
        out.push(("nonnegativity", Box::new(move |c| c.p_coeffs[i].c = fmt_rational(&-parse_rational(&c.p_coeffs[i].c).unwrap()))));
    }
    for t in 0..5 {
        let i = (t * 7919) % k;
        let by = Q::new(1.into(), (t as i64 + 1).into());
        out.push(("identity", Box::new(move |c| c.p_coeffs[i].c = bump(&c.p_coeffs[i].c, by.clone()))));
    }
    out.push(("lambda", Box::new(|c| c.lambda = fmt_rational(&-parse_rational(&c.lambda).unwrap()))));
    out.push(("identity", Box::new(|c| c.lambda = bump(&c.lambda, q(1)))));
    out.push(("identity", Box::new(|c| c.lambda = fmt_rational(&(parse_rational(&c.lambda).unwrap() * q(2))))));
    out.push((
        "identity",
        Box::new(|c| {
            let s = bump(&c.s_hat, q(1));
            c.s_hat = s.clone();
            c.s_list.iter_mut().for_each(|b| b.s_hat = s.clone());
        }),
    ));
    out.push(("domain", Box::new(|c| c.s_hat = "1/2".into())));
    out.push(("identity", Box::new(|c| c.s_list[0].coeffs[0].c = bump(&c.s_list[0].coeffs[0].c, Q::new(1.into(), 3.into())))));
    out.push(("identity", Box::new(|c| c.s_list[0].coeffs.pop().map(drop).unwrap_or(()))));
    out.push(("scaling", Box::new(|c| c.g_scaled[0].iter_mut().for_each(|t| t.coef = fmt_rational(&(parse_rational(&t.coef).unwrap() * q(2)))))));
    out.push((
        "scaling",
        Box::new(|c| {
            // Same unit norm, different constraint: (1 − x²)/2 → (x + 1)/2.
            c.g_scaled[0] = vec![
                certiposi::polyalg::json::TermJson { exp: vec![0], coef: "1/2".into() },
                certiposi::polyalg::json::TermJson { exp: vec![1], coef: "1/2".into() },
            ]
        }),
    ));
    out.push(("identity", Box::new(move |c| drop(c.p_coeffs.remove(k / 2)))));
    out
}
