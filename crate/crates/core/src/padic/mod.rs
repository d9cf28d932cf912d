//! p-adic integers and scalars at fixed finite precision, exact p-adic
//! absolute values, convergent series, and Haar ball measures on Q_p.

mod int;
mod scalar;
mod series;

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rational, prime_power, valuation};
use crate::Prime;

pub use int::{PAdicInt, PAdicIntJson, Valuation};
pub use scalar::{PAdicScalar, ScalarValuation};
pub use series::{geometric_partial_sums, geometric_sum, series_tools, CauchyReport};

/// A nonnegative exact rational produced by absolute values and measures.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactAbs(BigRational);

impl ExactAbs {
    pub fn new(value: BigRational) -> Self {
        assert!(!value.is_negative(), "absolute values are nonnegative");
        ExactAbs(value)
    }

    pub fn zero() -> Self {
        ExactAbs(BigRational::zero())
    }

    /// `p^-e`.
    pub fn p_power(p: Prime, e: i64) -> Self {
        ExactAbs(prime_power(p.get(), -e))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, other: &ExactAbs) -> ExactAbs {
        ExactAbs(&self.0 * &other.0)
    }

    pub fn pow(&self, e: i32) -> ExactAbs {
        ExactAbs(self.0.pow(e))
    }

    /// The exponent `e` with `self = p^-e`, if `self` is a nonzero power of `p`.
    pub fn p_exponent(&self, p: Prime) -> Option<i64> {
        let v = valuation(&self.0, p.get())?;
        (prime_power(p.get(), v) == self.0).then_some(-v)
    }
}

impl fmt::Display for ExactAbs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl Serialize for ExactAbs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for ExactAbs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let v = crate::rational::parse_rational(&s).map_err(serde::de::Error::custom)?;
        if v.is_negative() {
            return Err(serde::de::Error::custom("negative absolute value"));
        }
        Ok(ExactAbs(v))
    }
}

/// `|x|_p = p^-l` where `p^l` is the exact power of `p` in `x`; `|0|_p = 0`.
pub fn abs_p(x: &BigRational, p: Prime) -> ExactAbs {
    match valuation(x, p.get()) {
        Some(l) => ExactAbs::p_power(p, l),
        None => ExactAbs::zero(),
    }
}

/// Haar measure of the ball `p^l Z_p`, which is `p^-l` (any integer `l`).
pub fn haar_measure(p: Prime, l: i64) -> ExactAbs {
    ExactAbs::p_power(p, l)
}

/// Measure of `a·E` given the measure `m` of `E`: `|a|_p · m`.
pub fn haar_scale(a: &PAdicScalar, m: &ExactAbs) -> ExactAbs {
    a.abs().mul(m)
}
