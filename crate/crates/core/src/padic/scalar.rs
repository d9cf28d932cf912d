use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::{ExactAbs, PAdicInt, Valuation};
use crate::rational::{prime_power, split_int};
use crate::{Error, Prime, Result};

/// Valuation of a scalar; zero scalars are only known to vanish up to their
/// absolute precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarValuation {
    Finite(i64),
    AtLeast(i64),
}

/// An element of Q_p in capped-relative form `p^e · u` with `u` a unit known
/// to some relative precision, or a zero known modulo `p^abs_precision`.
///
/// Precision is tracked per value: cancellation in a sum shrinks the unit's
/// precision instead of padding it with invented digits.
#[derive(Clone, PartialEq, Eq)]
pub enum PAdicScalar {
    Zero { p: Prime, abs_precision: i64 },
    Nonzero { exponent: i64, unit: PAdicInt },
}

impl fmt::Debug for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicScalar::Zero { p, abs_precision } => write!(f, "O({p}^{abs_precision})"),
            PAdicScalar::Nonzero { exponent, unit } => write!(f, "{}^{exponent}·({unit:?})", unit.p()),
        }
    }
}

impl PAdicScalar {
    /// `x` with `precision` digits of relative precision; zero is reported
    /// as vanishing modulo `p^precision`.
    pub fn from_rational(x: &BigRational, p: Prime, precision: u32) -> Self {
        if x.is_zero() {
            return PAdicScalar::Zero { p, abs_precision: precision as i64 };
        }
        let (a, num) = split_int(x.numer(), p.get());
        let (b, den) = split_int(x.denom(), p.get());
        let unit = PAdicInt::from_rational(&BigRational::new(num, den), p, precision)
            .expect("cofactor is prime to p");
        PAdicScalar::Nonzero { exponent: a as i64 - b as i64, unit }
    }

    pub fn from_i64(x: i64, p: Prime, precision: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(x)), p, precision)
    }

    /// Views a truncated p-adic integer as a scalar with the same absolute
    /// precision.
    pub fn from_padic_int(x: &PAdicInt) -> Self {
        match x.valuation() {
            Valuation::AtLeast(n) => PAdicScalar::Zero { p: x.p(), abs_precision: n as i64 },
            Valuation::Finite(v) => PAdicScalar::Nonzero {
                exponent: v as i64,
                unit: x.div_p_pow(v).expect("valuation below precision"),
            },
        }
    }

    /// `p^e` exactly to the given relative precision.
    pub fn p_power(p: Prime, e: i64, precision: u32) -> Self {
        PAdicScalar::Nonzero { exponent: e, unit: PAdicInt::one(p, precision) }
    }

    pub fn p(&self) -> Prime {
        match self {
            PAdicScalar::Zero { p, .. } => *p,
            PAdicScalar::Nonzero { unit, .. } => unit.p(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PAdicScalar::Zero { .. })
    }

    /// The scalar is known modulo `p^abs_precision`.
    pub fn abs_precision(&self) -> i64 {
        match self {
            PAdicScalar::Zero { abs_precision, .. } => *abs_precision,
            PAdicScalar::Nonzero { exponent, unit } => exponent + unit.precision() as i64,
        }
    }

    pub fn valuation(&self) -> ScalarValuation {
        match self {
            PAdicScalar::Zero { abs_precision, .. } => ScalarValuation::AtLeast(*abs_precision),
            PAdicScalar::Nonzero { exponent, .. } => ScalarValuation::Finite(*exponent),
        }
    }

    pub fn abs(&self) -> ExactAbs {
        match self {
            PAdicScalar::Zero { .. } => ExactAbs::zero(),
            PAdicScalar::Nonzero { exponent, unit } => ExactAbs::p_power(unit.p(), *exponent),
        }
    }

    /// The canonical rational representative `p^e · residue(u)`.
    pub fn to_rational(&self) -> BigRational {
        match self {
            PAdicScalar::Zero { .. } => BigRational::zero(),
            PAdicScalar::Nonzero { exponent, unit } => {
                unit.to_rational() * prime_power(unit.p().get(), *exponent)
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::PrecisionMismatch(format!("prime {} vs {}", self.p(), other.p())));
        }
        Ok(())
    }

    /// Truncates to absolute precision `cap` (no-op if already coarser).
    pub fn truncate(&self, cap: i64) -> Self {
        match self {
            PAdicScalar::Zero { p, abs_precision } => {
                PAdicScalar::Zero { p: *p, abs_precision: (*abs_precision).min(cap) }
            }
            PAdicScalar::Nonzero { exponent, unit } => {
                if *exponent >= cap {
                    PAdicScalar::Zero { p: unit.p(), abs_precision: cap }
                } else {
                    let rel = (cap - exponent).min(unit.precision() as i64) as u32;
                    PAdicScalar::Nonzero { exponent: *exponent, unit: unit.reduce(rel).unwrap() }
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            PAdicScalar::Zero { .. } => self.clone(),
            PAdicScalar::Nonzero { exponent, unit } => {
                PAdicScalar::Nonzero { exponent: *exponent, unit: unit.neg() }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p();
        let cap = self.abs_precision().min(other.abs_precision());
        let (x, y) = match (self, other) {
            (PAdicScalar::Zero { .. }, _) => return Ok(other.truncate(cap)),
            (_, PAdicScalar::Zero { .. }) => return Ok(self.truncate(cap)),
            (
                PAdicScalar::Nonzero { exponent: e1, .. },
                PAdicScalar::Nonzero { exponent: e2, .. },
            ) => {
                if e1 <= e2 {
                    (self, other)
                } else {
                    (other, self)
                }
            }
        };
        let (PAdicScalar::Nonzero { exponent: e, unit: u }, PAdicScalar::Nonzero { exponent: f, unit: v }) =
            (x, y)
        else {
            unreachable!()
        };
        if cap <= *e {
            return Ok(PAdicScalar::Zero { p, abs_precision: cap });
        }
        // p^e (u + p^(f-e) v), known modulo p^cap
        let rel = (cap - e) as u32;
        let shift = BigUint::from(p.get()).pow((f - e) as u32);
        let sum = u.to_bigint() + BigInt::from(shift) * v.to_bigint();
        let s = PAdicInt::from_bigint(&sum, p, rel);
        Ok(match s.valuation() {
            Valuation::AtLeast(_) => PAdicScalar::Zero { p, abs_precision: cap },
            Valuation::Finite(m) => PAdicScalar::Nonzero {
                exponent: e + m as i64,
                unit: s.div_p_pow(m).expect("valuation below precision"),
            },
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p();
        Ok(match (self, other) {
            (PAdicScalar::Zero { abs_precision: a, .. }, PAdicScalar::Zero { abs_precision: b, .. }) => {
                PAdicScalar::Zero { p, abs_precision: a + b }
            }
            (PAdicScalar::Zero { abs_precision: a, .. }, PAdicScalar::Nonzero { exponent, .. })
            | (PAdicScalar::Nonzero { exponent, .. }, PAdicScalar::Zero { abs_precision: a, .. }) => {
                PAdicScalar::Zero { p, abs_precision: a + exponent }
            }
            (
                PAdicScalar::Nonzero { exponent: e, unit: u },
                PAdicScalar::Nonzero { exponent: f, unit: v },
            ) => {
                let n = u.precision().min(v.precision());
                let w = u.reduce(n)?.checked_mul(&v.reduce(n)?)?;
                PAdicScalar::Nonzero { exponent: e + f, unit: w }
            }
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        match self {
            PAdicScalar::Zero { .. } => Err(Error::NotAUnit("zero".into())),
            PAdicScalar::Nonzero { exponent, unit } => {
                Ok(PAdicScalar::Nonzero { exponent: -exponent, unit: unit.inverse()? })
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    /// For `|x|_p ≤ 1`, the residue modulo `p^min(N, abs_precision)`.
    pub fn to_padic_int(&self, precision: u32) -> Result<PAdicInt> {
        let cap = (precision as i64).min(self.abs_precision());
        if cap < 1 {
            return Err(Error::PrecisionMismatch(format!("{self:?} has no digits in Z_p")));
        }
        let cap = cap as u32;
        match self {
            PAdicScalar::Zero { p, .. } => Ok(PAdicInt::zero(*p, cap)),
            PAdicScalar::Nonzero { exponent, unit } => {
                if *exponent < 0 {
                    return Err(Error::NotPAdicInteger {
                        value: format!("{self:?}"),
                        p: unit.p().get(),
                    });
                }
                Ok(PAdicInt::from_bigint(&unit.to_bigint(), unit.p(), cap).mul_p_pow(*exponent as u32))
            }
        }
    }

    /// The part `x' ∈ Z[1/p] ∩ [0, 1)` with `x - x' ∈ Z_p`, read off from
    /// the negative-exponent digits.
    pub fn fractional_part(&self) -> Result<BigRational> {
        match self {
            PAdicScalar::Zero { abs_precision, p } => {
                if *abs_precision < 0 {
                    return Err(Error::PrecisionMismatch(format!(
                        "zero known only modulo {p}^{abs_precision}"
                    )));
                }
                Ok(BigRational::zero())
            }
            PAdicScalar::Nonzero { exponent, unit } => {
                if *exponent >= 0 {
                    return Ok(BigRational::zero());
                }
                let k = (-exponent) as u32;
                if unit.precision() < k {
                    return Err(Error::PrecisionMismatch(format!(
                        "{} digits needed below the point, {} known",
                        k,
                        unit.precision()
                    )));
                }
                let pk = BigUint::from(unit.p().get()).pow(k);
                let num = unit.residue() % &pk;
                Ok(BigRational::new(BigInt::from(num), BigInt::from(pk)))
            }
        }
    }

    /// True when `self - other` vanishes to the available precision.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.checked_sub(other)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn exponent_and_unit() {
        let x = PAdicScalar::from_rational(&frac(3, 10), p(5), 4);
        assert_eq!(x.valuation(), ScalarValuation::Finite(-1));
        assert_eq!(x.abs().value(), &int(5));
        assert_eq!(x.abs_precision(), 3);
    }

    #[test]
    fn cancellation_shrinks_precision() {
        let x = PAdicScalar::from_i64(1, p(2), 6);
        let y = PAdicScalar::from_i64(9, p(2), 6);
        let d = y.checked_sub(&x).unwrap(); // 8 = 2^3
        assert_eq!(d.valuation(), ScalarValuation::Finite(3));
        assert_eq!(d.abs_precision(), 6);
        let z = x.checked_sub(&x).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.abs_precision(), 6);
    }

    #[test]
    fn field_operations_match_rationals() {
        let vals = [frac(1, 3), frac(-7, 4), frac(5, 2), int(12), frac(9, 8)];
        for a in &vals {
            for b in &vals {
                let x = PAdicScalar::from_rational(a, p(2), 12);
                let y = PAdicScalar::from_rational(b, p(2), 12);
                let prod = x.checked_mul(&y).unwrap();
                assert!(prod.agrees_with(&PAdicScalar::from_rational(&(a * b), p(2), 12)).unwrap());
                let sum = x.checked_add(&y).unwrap();
                assert!(sum.agrees_with(&PAdicScalar::from_rational(&(a + b), p(2), 12)).unwrap());
                let q = x.checked_div(&y).unwrap();
                assert!(q.agrees_with(&PAdicScalar::from_rational(&(a / b), p(2), 12)).unwrap());
            }
        }
    }

    #[test]
    fn fractional_parts() {
        let x = PAdicScalar::from_rational(&frac(5, 4), p(2), 6);
        assert_eq!(x.fractional_part().unwrap(), frac(1, 4));
        let y = PAdicScalar::from_rational(&frac(1, 3), p(2), 6);
        assert_eq!(y.fractional_part().unwrap(), int(0));
        let z = PAdicScalar::from_rational(&frac(1, 6), p(2), 6);
        // 1/6 = 1/2 · 1/3 and 1/3 ≡ 1 (mod 2)
        assert_eq!(z.fractional_part().unwrap(), frac(1, 2));
    }

    #[test]
    fn to_int_and_back() {
        let x = PAdicScalar::from_i64(12, p(2), 5);
        let i = x.to_padic_int(5).unwrap();
        assert_eq!(i.residue(), &BigUint::from(12u32));
        assert_eq!(PAdicScalar::from_padic_int(&i), x.truncate(5));
        assert!(PAdicScalar::from_rational(&frac(1, 2), p(2), 5).to_padic_int(5).is_err());
    }
}
