use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{ZpFunction, ZpPoly};
use crate::padic::{PAdicInt, PAdicScalar};
use crate::rational::{fmt_rational, prime_power, valuation};
use crate::{Error, Prime, Result};

type CoeffFn = dyn Fn(usize) -> BigRational + Send + Sync;
type WitnessFn = dyn Fn(u32) -> usize + Send + Sync;

/// A power series `Σ a_j x^j` over Z_p given by a coefficient generator and
/// a decay witness `J`: `|a_j|_p ≤ p^-m` for every `j ≥ J(m)`.
///
/// On Z_p the tail beyond `J(m)` contributes nothing modulo `p^m`, to the
/// series and to its derivative alike.
#[derive(Clone)]
pub struct ZpSeries {
    p: Prime,
    coeff: Arc<CoeffFn>,
    witness: Arc<WitnessFn>,
}

impl fmt::Debug for ZpSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZpSeries(p = {}, J(1) = {})", self.p, (self.witness)(1))
    }
}

impl ZpSeries {
    pub fn new(
        p: Prime,
        coeff: impl Fn(usize) -> BigRational + Send + Sync + 'static,
        witness: impl Fn(u32) -> usize + Send + Sync + 'static,
    ) -> Self {
        ZpSeries { p, coeff: Arc::new(coeff), witness: Arc::new(witness) }
    }

    /// A polynomial viewed as a finitely supported series.
    pub fn from_poly(f: &ZpPoly) -> Self {
        let coeffs = f.coeffs().to_vec();
        let len = coeffs.len();
        ZpSeries::new(f.prime(), move |j| coeffs.get(j).cloned().unwrap_or_else(BigRational::zero), move |_| len)
    }

    /// `Σ p^j x^j`.
    pub fn geometric(p: Prime) -> Self {
        ZpSeries::new(p, move |j| prime_power(p.get(), j as i64), |m| m as usize)
    }

    pub fn coefficient(&self, j: usize) -> BigRational {
        (self.coeff)(j)
    }

    pub fn witness(&self, m: u32) -> usize {
        (self.witness)(m)
    }

    /// Checks the witness on every index it makes a claim about up to
    /// precision `n`: monotone, coefficients p-integral before `J(n)`, and
    /// `v(a_j) ≥ m` on `J(m) ≤ j < J(n)`.
    pub fn validate(&self, n: u32) -> Result<()> {
        let js: Vec<usize> = (0..=n).map(|m| self.witness(m)).collect();
        if js.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::DecayWitnessInvalid("J is not monotone".into()));
        }
        let end = js[n as usize];
        for j in 0..end {
            let a = self.coefficient(j);
            let v = valuation(&a, self.p.get());
            if v.is_some_and(|v| v < 0) {
                return Err(Error::NotPAdicInteger { value: fmt_rational(&a), p: self.p.get() });
            }
            let claimed = js.iter().rposition(|&jm| jm <= j).unwrap_or(0) as i64;
            if let Some(v) = v {
                if v < claimed {
                    return Err(Error::DecayWitnessInvalid(format!(
                        "a_{j} = {} has valuation {v} but J({claimed}) = {} <= {j}",
                        fmt_rational(&a),
                        js[claimed as usize]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The truncation `Σ_{j < J(n)} a_j x^j` as a polynomial.
    pub fn truncate(&self, n: u32) -> Result<ZpPoly> {
        let end = self.witness(n);
        ZpPoly::new(self.p, (0..end).map(|j| self.coefficient(j)).collect())
    }
}

impl ZpFunction for ZpSeries {
    fn prime(&self) -> Prime {
        self.p
    }

    fn eval_with_derivative(&self, x: &PAdicInt) -> Result<(PAdicInt, PAdicInt)> {
        self.validate(x.precision())?;
        self.truncate(x.precision())?.eval_with_derivative(x)
    }
}

/// Evaluates a series at `x ∈ Z_p` to precision `n`.
pub fn series_eval(s: &ZpSeries, x: &PAdicInt, n: u32) -> Result<PAdicScalar> {
    let x = if x.precision() >= n {
        x.reduce(n)?
    } else {
        return Err(Error::PrecisionMismatch(format!(
            "point known to precision {}, {n} requested",
            x.precision()
        )));
    };
    let (value, _) = s.eval_with_derivative(&x)?;
    Ok(PAdicScalar::from_padic_int(&value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::geometric_sum;
    use crate::rational::int;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn geometric_series_matches_closed_form() {
        let s = ZpSeries::geometric(p(2));
        let x = PAdicInt::one(p(2), 5);
        let v = series_eval(&s, &x, 5).unwrap();
        assert_eq!(v.to_padic_int(5).unwrap(), PAdicInt::from_i64(31, p(2), 5));
        let g = geometric_sum(&PAdicScalar::from_i64(2, p(2), 5), 5).unwrap();
        assert!(v.agrees_with(&g).unwrap());
    }

    #[test]
    fn zero_and_polynomial_series() {
        let z = ZpSeries::new(p(3), |_| int(0), |_| 0);
        assert!(series_eval(&z, &PAdicInt::from_i64(5, p(3), 4), 4).unwrap().is_zero());
        let f = ZpPoly::from_i64(p(3), &[2, -1, 0, 4]);
        let s = ZpSeries::from_poly(&f);
        for a in 0..30 {
            let x = PAdicInt::from_i64(a, p(3), 4);
            assert_eq!(s.eval_with_derivative(&x).unwrap(), f.eval_with_derivative(&x).unwrap());
        }
    }

    #[test]
    fn bad_witness_is_rejected() {
        // a_j = 1 never decays, yet the witness claims J(m) = m
        let s = ZpSeries::new(p(2), |_| int(1), |m| m as usize);
        assert!(matches!(s.validate(4), Err(Error::DecayWitnessInvalid(_))));
        let s = ZpSeries::new(p(2), |j| prime_power(2, j as i64), |m| 10 - m as usize);
        assert!(matches!(s.validate(4), Err(Error::DecayWitnessInvalid(_))));
    }

    #[test]
    fn tail_does_not_matter() {
        // adding terms beyond J(n) leaves the value unchanged mod p^n
        let s = ZpSeries::geometric(p(3));
        let x = PAdicInt::from_i64(7, p(3), 6);
        let v = series_eval(&s, &x, 6).unwrap();
        let longer = ZpPoly::new(p(3), (0..40).map(|j| prime_power(3, j)).collect()).unwrap();
        let w = PAdicScalar::from_padic_int(&longer.eval(&x).unwrap());
        assert!(v.agrees_with(&w).unwrap());
    }
}
