use crate::error::{Error, Result};
use crate::rational::{ceil_int, ceil_sqrt, fmt_rational, from_f64, from_f64_decimal, q, qpow, to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// The parameter chain δ → λ → ν of the construction, all exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CertParams {
    pub eps: Q,
    pub loja_l: f64,
    pub loja_c: f64,
    pub delta: Q,
    pub lambda: Q,
    /// ν = sqrt_nu²; `None` when there are no constraints.
    pub sqrt_nu: Option<Q>,
    pub fstar: Q,
    pub norm_b_f: Q,
    pub r: usize,
}

#[derive(Serialize)]
pub struct CertParamsJson {
    pub eps: String,
    pub loja_l: f64,
    pub loja_c: f64,
    pub delta: String,
    pub lambda: String,
    pub nu: Option<String>,
    pub sqrt_nu: Option<String>,
    pub fstar: String,
    pub norm_b_f: String,
    pub r: usize,
}

impl CertParams {
    pub fn nu(&self) -> Option<Q> {
        self.sqrt_nu.as_ref().map(|s| s * s)
    }

    pub fn to_json(&self) -> CertParamsJson {
        CertParamsJson {
            eps: fmt_rational(&self.eps),
            loja_l: self.loja_l,
            loja_c: self.loja_c,
            delta: fmt_rational(&self.delta),
            lambda: fmt_rational(&self.lambda),
            nu: self.nu().as_ref().map(fmt_rational),
            sqrt_nu: self.sqrt_nu.as_ref().map(fmt_rational),
            fstar: fmt_rational(&self.fstar),
            norm_b_f: fmt_rational(&self.norm_b_f),
            r: self.r,
        }
    }
}

/// δ = ε^L/c (exact for integral L, rounded down otherwise), λ = 5‖f‖_B/δ (0 when r = 0), and
/// ν = (1/k)² for the least k with 1/k² ≤ min(δε/(20r), δ/(8r), f*/(4rλ)).
pub fn putinar_params(eps: &Q, loja_l: f64, loja_c: f64, r: usize, norm_b_f: &Q, fstar: &Q) -> Result<CertParams> {
    if !eps.is_positive() || eps > &q(1) {
        return Err(Error::InvalidInput(format!("eps = {} must lie in (0, 1]", fmt_rational(eps))));
    }
    if !(loja_l >= 1.0) || !loja_l.is_finite() {
        return Err(Error::InvalidInput(format!("Lojasiewicz exponent {loja_l} must be >= 1")));
    }
    if !(loja_c > 0.0) || !loja_c.is_finite() {
        return Err(Error::InvalidInput(format!("Lojasiewicz constant {loja_c} must be > 0")));
    }
    if !norm_b_f.is_positive() || !fstar.is_positive() {
        return Err(Error::InvalidInput("need ‖f‖_B > 0 and f* > 0".into()));
    }
    let delta = if loja_l.fract() == 0.0 && loja_l <= u32::MAX as f64 {
        qpow(eps, loja_l as u32) / from_f64_decimal(loja_c)?
    } else {
        let v = to_f64(eps).powf(loja_l) / loja_c;
        if !(v > 0.0) {
            return Err(Error::Numerical(format!("delta underflows for eps^L/c with L = {loja_l}")));
        }
        from_f64(v * (1.0 - 1e-12))?
    };
    let lambda = if r == 0 { Q::zero() } else { q(5) * norm_b_f / &delta };
    let sqrt_nu = if r == 0 {
        None
    } else {
        let rq = q(r as i64);
        let bound = [&delta * eps / (q(20) * &rq), &delta / (q(8) * &rq), fstar / (q(4) * &rq * &lambda)]
            .into_iter()
            .min()
            .expect("three candidates");
        let k = ceil_sqrt(&ceil_int(&(Q::one() / bound)));
        Some(Q::new(BigInt::one(), k))
    };
    Ok(CertParams { eps: eps.clone(), loja_l, loja_c, delta, lambda, sqrt_nu, fstar: fstar.clone(), norm_b_f: norm_b_f.clone(), r })
}

/// Checks the stated relations between the fields; used by tests and the CLI report.
pub fn params_consistent(p: &CertParams) -> bool {
    let lam_ok = p.r == 0 || p.lambda >= q(5) * &p.norm_b_f / &p.delta;
    let nu_ok = match p.nu() {
        None => p.r == 0,
        Some(nu) => {
            let r = q(p.r as i64);
            nu <= &p.delta / (q(8) * &r) && nu <= &p.fstar / (q(4) * &r * &p.lambda) && !nu.is_zero()
        }
    };
    lam_ok && nu_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn all_ones() {
        let p = putinar_params(&q(1), 1.0, 1.0, 1, &q(1), &q(1)).unwrap();
        assert_eq!(p.delta, q(1));
        assert_eq!(p.lambda, q(5));
        assert_eq!(p.nu(), Some(qf(1, 25)));
        assert!(params_consistent(&p));
    }

    #[test]
    fn doubling_c_halves_delta() {
        let a = putinar_params(&qf(1, 3), 2.0, 0.5, 2, &q(3), &q(1)).unwrap();
        let b = putinar_params(&qf(1, 3), 2.0, 1.0, 2, &q(3), &q(1)).unwrap();
        assert_eq!(a.delta, qf(2, 9));
        assert_eq!(b.delta, &a.delta / q(2));
        assert_eq!(b.lambda, &a.lambda * q(2));
        assert!(params_consistent(&a) && params_consistent(&b));
    }

    #[test]
    fn fractional_exponent_rounds_down() {
        let p = putinar_params(&qf(1, 2), 1.5, 1.0, 1, &q(2), &q(1)).unwrap();
        assert!(p.delta < from_f64(0.5f64.powf(1.5)).unwrap());
        assert!(to_f64(&p.delta) > 0.5f64.powf(1.5) * (1.0 - 1e-9));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(putinar_params(&q(0), 1.0, 1.0, 1, &q(1), &q(1)).is_err());
        assert!(putinar_params(&q(2), 1.0, 1.0, 1, &q(1), &q(1)).is_err());
        assert!(putinar_params(&q(1), 0.5, 1.0, 1, &q(1), &q(1)).is_err());
        assert!(putinar_params(&q(1), 1.0, 0.0, 1, &q(1), &q(1)).is_err());
        assert!(putinar_params(&q(1), 1.0, f64::NAN, 1, &q(1), &q(1)).is_err());
    }

    #[test]
    fn no_constraints_has_no_nu() {
        let p = putinar_params(&qf(1, 3), 1.0, 1.0, 0, &q(3), &q(1)).unwrap();
        assert_eq!(p.sqrt_nu, None);
        assert_eq!(p.lambda, q(0));
        assert!(params_consistent(&p));
    }
}
