//! Exact rational helpers shared by every module.

use crate::error::{Error, Result};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, integers, and finite decimal or scientific literals exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {t:?}")))?;
        let den: BigInt = b.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {t:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Q::new(num, den));
    }
    if let Ok(i) = t.parse::<BigInt>() {
        return Ok(Q::from_integer(i));
    }
    parse_decimal(t).ok_or_else(|| Error::Parse(format!("not a rational: {t:?}")))
}

fn parse_decimal(t: &str) -> Option<Q> {
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        Q::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Canonical `"p/q"` or integer string.
pub fn fmt_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_f64(x).ok_or_else(|| Error::InvalidInput(format!("non-finite value {x}")))
}

/// Exact rational of the shortest decimal that round-trips to `x`.
pub fn from_f64_decimal(x: f64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite value {x}")));
    }
    parse_rational(&format!("{x:e}"))
}

pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer k with k² ≥ a, for a ≥ 0.
pub fn ceil_sqrt(a: &BigInt) -> BigInt {
    if a.sign() != Sign::Plus {
        return BigInt::zero();
    }
    let s = a.sqrt();
    if &(&s * &s) == a {
        s
    } else {
        s + 1
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Factorials 0!..=m! as big integers.
pub fn factorials(m: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(BigInt::one());
    for i in 1..=m as u64 {
        let next = out.last().unwrap() * i;
        out.push(next);
    }
    out
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn qpow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

pub fn qabs(x: &Q) -> Q {
    x.abs()
}
