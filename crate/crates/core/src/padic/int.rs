use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ExactAbs;
use crate::{Error, Prime, Result};

/// Valuation of a truncated p-adic integer. A residue of zero only tells us
/// that the true valuation is at least the precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The certified lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// An element of Z_p known modulo p^N: a residue in `[0, p^N)`.
#[derive(Clone)]
pub struct PAdicInt {
    p: Prime,
    precision: u32,
    modulus: Arc<BigUint>,
    residue: BigUint,
}

impl PartialEq for PAdicInt {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.precision == other.precision && self.residue == other.residue
    }
}

impl Eq for PAdicInt {}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

fn modulus(p: Prime, precision: u32) -> BigUint {
    BigUint::from(p.get()).pow(precision)
}

fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    x.mod_floor(&m).magnitude().clone()
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    e.gcd.is_one().then(|| e.x.mod_floor(&m).magnitude().clone())
}

impl PAdicInt {
    pub fn new(p: Prime, precision: u32, residue: BigUint) -> Self {
        assert!(precision >= 1, "precision must be positive");
        let modulus = modulus(p, precision);
        let residue = residue % &modulus;
        PAdicInt { p, precision, modulus: Arc::new(modulus), residue }
    }

    pub fn from_bigint(x: &BigInt, p: Prime, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be positive");
        let modulus = modulus(p, precision);
        let residue = reduce_signed(x, &modulus);
        PAdicInt { p, precision, modulus: Arc::new(modulus), residue }
    }

    pub fn from_i64(x: i64, p: Prime, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(x), p, precision)
    }

    pub fn zero(p: Prime, precision: u32) -> Self {
        Self::from_i64(0, p, precision)
    }

    pub fn one(p: Prime, precision: u32) -> Self {
        Self::from_i64(1, p, precision)
    }

    /// Reduces `x = a/b` with `b` prime to `p`: the residue `r` solves
    /// `b·r ≡ a (mod p^N)`.
    pub fn from_rational(x: &BigRational, p: Prime, precision: u32) -> Result<Self> {
        let modulus = modulus(p, precision);
        let den = reduce_signed(x.denom(), &modulus);
        let inv = mod_inverse(&den, &modulus).ok_or_else(|| Error::NotPAdicInteger {
            value: crate::rational::fmt_rational(x),
            p: p.get(),
        })?;
        let num = reduce_signed(x.numer(), &modulus);
        let residue = (num * inv) % &modulus;
        Ok(PAdicInt { p, precision, modulus: Arc::new(modulus), residue })
    }

    /// Parses a rational literal `"a/b"` and reduces it.
    pub fn parse(s: &str, p: Prime, precision: u32) -> Result<Self> {
        Self::from_rational(&crate::rational::parse_rational(s)?, p, precision)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Residue as a signed integer in `[0, p^N)`.
    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.residue.clone())
    }

    /// Residue as an exact rational (the canonical representative).
    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.to_bigint())
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeast(self.precision);
        }
        let p = BigUint::from(self.p.get());
        let mut v = 0;
        let mut r = self.residue.clone();
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                return Valuation::Finite(v);
            }
            r = q;
            v += 1;
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// `|x|_p`, reported as 0 when the residue vanishes.
    pub fn abs(&self) -> ExactAbs {
        match self.valuation() {
            Valuation::Finite(v) => ExactAbs::p_power(self.p, v as i64),
            Valuation::AtLeast(_) => ExactAbs::zero(),
        }
    }

    /// Base-p digits, least significant first, exactly `N` of them.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.p.get());
        let mut r = self.residue.clone();
        (0..self.precision)
            .map(|_| {
                let (q, d) = r.div_rem(&p);
                r = q;
                d.iter_u64_digits().next().unwrap_or(0)
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.precision != other.precision {
            return Err(Error::PrecisionMismatch(format!(
                "{}^{} vs {}^{}",
                self.p, self.precision, other.p, other.precision
            )));
        }
        Ok(())
    }

    fn with_residue(&self, residue: BigUint) -> Self {
        PAdicInt { p: self.p, precision: self.precision, modulus: self.modulus.clone(), residue }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue((&self.residue + &other.residue) % &*self.modulus))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue((&self.residue + &*self.modulus - &other.residue) % &*self.modulus))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_residue((&self.residue * &other.residue) % &*self.modulus))
    }

    pub fn neg(&self) -> Self {
        if self.residue.is_zero() {
            return self.clone();
        }
        self.with_residue(&*self.modulus - &self.residue)
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        mod_inverse(&self.residue, &self.modulus)
            .map(|r| self.with_residue(r))
            .ok_or_else(|| Error::NotAUnit(self.to_string()))
    }

    pub fn pow(&self, e: u32) -> Self {
        self.with_residue(self.residue.modpow(&BigUint::from(e), &self.modulus))
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let k = reduce_signed(&BigInt::from(k), &self.modulus);
        self.with_residue((&self.residue * k) % &*self.modulus)
    }

    /// Multiplies by `p^k`, keeping the precision.
    pub fn mul_p_pow(&self, k: u32) -> Self {
        let pk = BigUint::from(self.p.get()).pow(k);
        self.with_residue((&self.residue * pk) % &*self.modulus)
    }

    /// Exact division by `p^k` when `valuation ≥ k`; the quotient is only
    /// known modulo `p^(N-k)`, so the precision drops accordingly.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k >= self.precision {
            return Err(Error::PrecisionMismatch(format!(
                "dividing by {}^{k} exhausts precision {}",
                self.p, self.precision
            )));
        }
        if self.valuation().lower_bound() < k {
            return Err(Error::NotAUnit(format!("{self} is not divisible by {}^{k}", self.p)));
        }
        let pk = BigUint::from(self.p.get()).pow(k);
        Ok(PAdicInt::new(self.p, self.precision - k, &self.residue / pk))
    }

    /// Image in Z/p^mZ for `m ≤ N`.
    pub fn reduce(&self, precision: u32) -> Result<Self> {
        if precision > self.precision || precision == 0 {
            return Err(Error::PrecisionMismatch(format!(
                "cannot reduce precision {} to {precision}",
                self.precision
            )));
        }
        Ok(PAdicInt::new(self.p, precision, self.residue.clone()))
    }

    /// Re-reads the canonical representative at a higher precision.
    pub fn lift(&self, precision: u32) -> Self {
        PAdicInt::new(self.p, precision, self.residue.clone())
    }

    /// True when `self ≡ other (mod p^m)`.
    pub fn congruent(&self, other: &Self, m: u32) -> bool {
        let pm = BigUint::from(self.p.get()).pow(m);
        &self.residue % &pm == &other.residue % &pm
    }

    pub fn is_negative_representative(&self) -> bool {
        // residues above half the modulus print more naturally as negatives
        BigInt::from(self.residue.clone()) * 2 > BigInt::from((*self.modulus).clone())
    }

    pub fn signed_representative(&self) -> BigInt {
        let r = self.to_bigint();
        if self.is_negative_representative() {
            r - BigInt::from((*self.modulus).clone())
        } else {
            r
        }
    }
}

/// JSON form: `{"p": 2, "N": 4, "residue": "11"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicIntJson {
    pub p: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub residue: String,
}

impl From<&PAdicInt> for PAdicIntJson {
    fn from(x: &PAdicInt) -> Self {
        PAdicIntJson { p: x.p.get(), precision: x.precision, residue: x.residue.to_string() }
    }
}

impl TryFrom<PAdicIntJson> for PAdicInt {
    type Error = Error;
    fn try_from(j: PAdicIntJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        if j.precision == 0 {
            return Err(Error::Parse("precision must be positive".into()));
        }
        let residue: BigUint =
            j.residue.parse().map_err(|_| Error::Parse(format!("bad residue {:?}", j.residue)))?;
        if residue >= modulus(p, j.precision) {
            return Err(Error::InvalidResidue(format!("{} not below {}^{}", residue, p, j.precision)));
        }
        Ok(PAdicInt::new(p, j.precision, residue))
    }
}

impl Serialize for PAdicInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PAdicIntJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PAdicInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PAdicIntJson::deserialize(d)?;
        PAdicInt::try_from(j).map_err(serde::de::Error::custom)
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
    fn from_rational_examples() {
        let x = PAdicInt::from_rational(&frac(1, 3), p(2), 4).unwrap();
        assert_eq!(x.residue(), &BigUint::from(11u32));
        let x = PAdicInt::from_rational(&int(7), p(3), 2).unwrap();
        assert_eq!(x.residue(), &BigUint::from(7u32));
        let x = PAdicInt::from_rational(&int(-1), p(2), 4).unwrap();
        assert_eq!(x.residue(), &BigUint::from(15u32));
        assert!(matches!(
            PAdicInt::from_rational(&frac(1, 6), p(3), 4),
            Err(Error::NotPAdicInteger { .. })
        ));
    }

    #[test]
    fn round_trip_error_is_below_precision() {
        for (a, b) in [(1, 3), (-5, 7), (22, 9), (1, 1)] {
            let x = frac(a, b);
            let r = PAdicInt::from_rational(&x, p(2), 6).unwrap();
            let diff = &x - r.to_rational();
            assert!(super::super::abs_p(&diff, p(2)).value() <= &frac(1, 64));
        }
    }

    #[test]
    fn ring_examples() {
        let a = PAdicInt::from_i64(11, p(2), 4);
        assert_eq!(a.inverse().unwrap(), PAdicInt::from_i64(3, p(2), 4));
        let z = PAdicInt::zero(p(2), 4);
        assert!(a.checked_mul(&z).unwrap().is_zero());
        assert!(matches!(PAdicInt::from_i64(2, p(2), 4).inverse(), Err(Error::NotAUnit(_))));
        let b = PAdicInt::from_i64(1, p(2), 5);
        assert!(matches!(a.checked_add(&b), Err(Error::PrecisionMismatch(_))));
        let c = PAdicInt::from_i64(1, p(3), 4);
        assert!(matches!(a.checked_mul(&c), Err(Error::PrecisionMismatch(_))));
    }

    #[test]
    fn valuation_saturates_at_zero() {
        assert_eq!(PAdicInt::zero(p(5), 3).valuation(), Valuation::AtLeast(3));
        assert_eq!(PAdicInt::from_i64(50, p(5), 3).valuation(), Valuation::Finite(2));
        assert_eq!(PAdicInt::from_i64(125, p(5), 3).valuation(), Valuation::AtLeast(3));
    }

    #[test]
    fn digits_and_division() {
        let x = PAdicInt::from_i64(13, p(3), 3); // 13 = 1 + 1·3 + 1·9
        assert_eq!(x.digits(), vec![1, 1, 1]);
        let y = PAdicInt::from_i64(18, p(3), 4);
        let q = y.div_p_pow(2).unwrap();
        assert_eq!(q.precision(), 2);
        assert_eq!(q.residue(), &BigUint::from(2u32));
        assert!(y.div_p_pow(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = PAdicInt::from_i64(11, p(2), 4);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":2,"N":4,"residue":"11"}"#);
        let back: PAdicInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<PAdicInt>(r#"{"p":4,"N":4,"residue":"1"}"#).is_err());
        assert!(serde_json::from_str::<PAdicInt>(r#"{"p":2,"N":4,"residue":"16"}"#).is_err());
    }
}
