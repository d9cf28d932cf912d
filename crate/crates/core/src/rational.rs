//! Helpers for exact rationals: parsing, formatting, valuations, and
//! certified enclosures of rational powers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Parses `"a/b"` or `"a"` (decimal, optional sign) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Formats as `"a/b"`, or `"a"` for integers.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^e` for any integer exponent (base must be nonzero when `e < 0`).
pub fn pow_i(base: &BigRational, e: i64) -> BigRational {
    let mag = base.pow(e.unsigned_abs() as i32);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// `p^e` as an exact rational.
pub fn prime_power(p: u64, e: i64) -> BigRational {
    pow_i(&BigRational::from_integer(BigInt::from(p)), e)
}

/// Exponent of `p` in a nonzero integer, together with the cofactor.
pub fn split_int(n: &BigInt, p: u64) -> (u64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// Exponent of `p` in a nonzero rational (`None` for zero).
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (a, _) = split_int(x.numer(), p);
    let (b, _) = split_int(x.denom(), p);
    Some(a as i64 - b as i64)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

/// `x^alpha` when it is rational (`x ≥ 0`), otherwise `None`.
pub fn exact_pow(x: &BigRational, alpha: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return alpha.is_positive().then(BigRational::zero);
    }
    let q = alpha.denom().to_u32()?;
    let m = alpha.numer().to_i64()?;
    let num = exact_root(x.numer().magnitude(), q)?;
    let den = exact_root(x.denom().magnitude(), q)?;
    let root = BigRational::new(BigInt::from(num), BigInt::from(den));
    Some(pow_i(&root, m))
}

/// Certified enclosure `lo ≤ x^alpha ≤ hi` with `hi - lo ≤ 2^-bits · scale`,
/// for `x ≥ 0` and `alpha > 0` rational.
pub fn pow_enclosure(x: &BigRational, alpha: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative() && alpha.is_positive());
    if let Some(v) = exact_pow(x, alpha) {
        return (v.clone(), v);
    }
    let q = alpha.denom().to_u32().expect("exponent denominator too large");
    let m = alpha.numer().to_u32().expect("exponent numerator too large");
    // x^(m/q) = (a/b)^(1/q) with a/b = x^m; write it as (a b^(q-1))^(1/q) / b.
    let y = x.pow(m as i32);
    let a = y.numer().magnitude().clone();
    let b = y.denom().magnitude().clone();
    let radicand = a * b.pow(q - 1) << (bits as usize * q as usize);
    let r = radicand.nth_root(q);
    let scale = BigInt::from(b) << bits as usize;
    let lo = BigRational::new(BigInt::from_biguint(Sign::Plus, r.clone()), scale.clone());
    let hi = BigRational::new(BigInt::from_biguint(Sign::Plus, r + 1u32), scale);
    (lo, hi)
}

/// Serde adapter storing a rational as its `"a/b"` string.
pub mod serde_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/10").unwrap(), frac(3, 10));
        assert_eq!(parse_rational("-17").unwrap(), int(-17));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&frac(-3, 6)), "-1/2");
        assert_eq!(fmt_rational(&int(5)), "5");
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(12), 2), Some(2));
        assert_eq!(valuation(&frac(3, 10), 5), Some(-1));
        assert_eq!(valuation(&int(0), 5), None);
    }

    #[test]
    fn powers() {
        assert_eq!(exact_pow(&frac(1, 9), &frac(1, 2)), Some(frac(1, 3)));
        assert_eq!(exact_pow(&frac(1, 4), &frac(3, 2)), Some(frac(1, 8)));
        assert_eq!(exact_pow(&int(2), &frac(1, 2)), None);
        let (lo, hi) = pow_enclosure(&int(2), &frac(1, 2), 64);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(to_f64(&(hi - lo)) < 1e-18);
        let (lo, hi) = pow_enclosure(&frac(3, 4), &frac(3, 2), 80);
        let target = (0.75f64).powf(1.5);
        assert!(to_f64(&lo) <= target + 1e-15 && to_f64(&hi) >= target - 1e-15);
    }
}
