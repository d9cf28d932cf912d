use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ZpFunction;
use crate::padic::PAdicInt;
use crate::rational::{fmt_rational, parse_rational, valuation};
use crate::{Error, Prime, Result};

/// A polynomial with coefficients in Z_p, constant term first.
///
/// Coefficients are stored exactly (rationals prime to `p` in the
/// denominator) so the polynomial can be evaluated at any working precision.
/// Polynomials built from truncated residues remember that precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpPoly {
    p: Prime,
    coeffs: Vec<BigRational>,
    known_precision: Option<u32>,
}

impl ZpPoly {
    pub fn new(p: Prime, coeffs: Vec<BigRational>) -> Result<Self> {
        for c in &coeffs {
            if valuation(c, p.get()).is_some_and(|v| v < 0) {
                return Err(Error::NotPAdicInteger { value: fmt_rational(c), p: p.get() });
            }
        }
        Ok(ZpPoly { p, coeffs, known_precision: None })
    }

    pub fn from_i64(p: Prime, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        ZpPoly { p, coeffs, known_precision: None }
    }

    /// Parses a comma-separated coefficient list, constant term first.
    pub fn parse(p: Prime, list: &str) -> Result<Self> {
        let coeffs = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        ZpPoly::new(p, coeffs)
    }

    /// Coefficients known only modulo `p^N`; their canonical representatives
    /// are used and results are only trusted to precision `N`.
    pub fn from_padic(coeffs: &[PAdicInt]) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::EmptySet)?;
        let (p, n) = (first.p(), first.precision());
        if coeffs.iter().any(|c| c.p() != p || c.precision() != n) {
            return Err(Error::PrecisionMismatch("coefficients disagree on p or N".into()));
        }
        Ok(ZpPoly { p, coeffs: coeffs.iter().map(PAdicInt::to_rational).collect(), known_precision: Some(n) })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Largest index with a nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Formal derivative `Σ k a_k x^(k-1)`.
    pub fn derivative(&self) -> ZpPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * BigRational::from_integer(BigInt::from(k)))
            .collect();
        ZpPoly { p: self.p, coeffs, known_precision: self.known_precision }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    fn reduced(&self, precision: u32) -> Vec<PAdicInt> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    PAdicInt::from_bigint(c.numer(), self.p, precision)
                } else {
                    PAdicInt::from_rational(c, self.p, precision).expect("checked at construction")
                }
            })
            .collect()
    }

    /// Horner evaluation modulo `p^N` at `x`'s precision.
    pub fn eval(&self, x: &PAdicInt) -> Result<PAdicInt> {
        self.eval_with_derivative(x).map(|(v, _)| v)
    }
}

impl ZpFunction for ZpPoly {
    fn prime(&self) -> Prime {
        self.p
    }

    fn known_precision(&self) -> Option<u32> {
        self.known_precision
    }

    fn eval_with_derivative(&self, x: &PAdicInt) -> Result<(PAdicInt, PAdicInt)> {
        if x.p() != self.p {
            return Err(Error::PrecisionMismatch(format!("prime {} vs {}", x.p(), self.p)));
        }
        if let Some(n) = self.known_precision {
            if x.precision() > n {
                return Err(Error::PrecisionMismatch(format!(
                    "coefficients known to precision {n}, evaluation asked for {}",
                    x.precision()
                )));
            }
        }
        let n = x.precision();
        let coeffs = self.reduced(n);
        let mut value = PAdicInt::zero(self.p, n);
        let mut deriv = PAdicInt::zero(self.p, n);
        for a in coeffs.iter().rev() {
            deriv = deriv.checked_mul(x)?.checked_add(&value)?;
            value = value.checked_mul(x)?.checked_add(a)?;
        }
        Ok((value, deriv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = ZpPoly::from_i64(p(2), &[-17, 0, 1]);
        let x = PAdicInt::from_i64(1, p(2), 6);
        let (v, d) = f.eval_with_derivative(&x).unwrap();
        assert_eq!(v, PAdicInt::from_i64(48, p(2), 6));
        assert_eq!(d, PAdicInt::from_i64(2, p(2), 6));
        let c = ZpPoly::from_i64(p(3), &[5]);
        let (_, d) = c.eval_with_derivative(&PAdicInt::from_i64(7, p(3), 4)).unwrap();
        assert!(d.is_zero());
        assert_eq!(c.derivative().degree(), None);
    }

    #[test]
    fn rational_coefficients() {
        let f = ZpPoly::new(p(2), vec![frac(1, 3), frac(2, 5)]).unwrap();
        let x = PAdicInt::from_i64(3, p(2), 8);
        let exact = f.eval_exact(&frac(3, 1));
        assert_eq!(f.eval(&x).unwrap(), PAdicInt::from_rational(&exact, p(2), 8).unwrap());
        assert!(ZpPoly::new(p(2), vec![frac(1, 2)]).is_err());
        assert_eq!(ZpPoly::parse(p(2), "-17, 0, 1").unwrap(), ZpPoly::from_i64(p(2), &[-17, 0, 1]));
    }

    #[test]
    fn truncated_coefficients_cap_precision() {
        let c = [PAdicInt::from_i64(-17, p(2), 5), PAdicInt::zero(p(2), 5), PAdicInt::one(p(2), 5)];
        let f = ZpPoly::from_padic(&c).unwrap();
        assert!(f.eval(&PAdicInt::from_i64(1, p(2), 5)).is_ok());
        assert!(matches!(
            f.eval(&PAdicInt::from_i64(1, p(2), 6)),
            Err(Error::PrecisionMismatch(_))
        ));
    }
}
