use super::{ExactAbs, PAdicScalar};
use crate::{Error, Result};

/// `1/(1 - y)` to `precision` digits, for `|y|_p < 1`.
pub fn geometric_sum(y: &PAdicScalar, precision: u32) -> Result<PAdicScalar> {
    let p = y.p();
    if let PAdicScalar::Nonzero { exponent, .. } = y {
        if *exponent <= 0 {
            return Err(Error::DivergentSeries(y.abs().to_string()));
        }
    }
    let one = PAdicScalar::from_i64(1, p, precision);
    let denom = one.checked_sub(y)?;
    one.checked_div(&denom).map(|s| s.truncate(precision as i64))
}

/// Partial sums `Σ_{j≤n} y^j` for `n = 0..count`.
pub fn geometric_partial_sums(y: &PAdicScalar, count: usize, precision: u32) -> Result<Vec<PAdicScalar>> {
    let p = y.p();
    let mut power = PAdicScalar::from_i64(1, p, precision);
    let mut sum = PAdicScalar::Zero { p, abs_precision: precision as i64 };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        sum = sum.checked_add(&power)?.truncate(precision as i64);
        out.push(sum.clone());
        power = power.checked_mul(y)?.truncate(precision as i64);
    }
    Ok(out)
}

/// Result of [`series_tools`].
#[derive(Debug, Clone)]
pub struct CauchyReport {
    /// `c_l = Σ_{j≤l} a_j b_{l-j}` for every `l` up to `len(a) + len(b) - 2`.
    pub product: Vec<PAdicScalar>,
    pub sum_a: PAdicScalar,
    pub sum_b: PAdicScalar,
    pub sum_c: PAdicScalar,
    pub max_abs_a: ExactAbs,
    /// `|Σ a_j|_p ≤ max_j |a_j|_p`.
    pub sum_bound_holds: bool,
    /// `(Σ a)(Σ b) = Σ c` to the available precision.
    pub product_identity_holds: bool,
}

fn sum(xs: &[PAdicScalar], zero: &PAdicScalar) -> Result<PAdicScalar> {
    xs.iter().try_fold(zero.clone(), |acc, x| acc.checked_add(x))
}

/// Cauchy product of two finite sequences with the ultrametric sum bound and
/// the product identity checked.
pub fn series_tools(a: &[PAdicScalar], b: &[PAdicScalar]) -> Result<CauchyReport> {
    let p = match a.first().or(b.first()) {
        Some(x) => x.p(),
        None => return Err(Error::EmptySet),
    };
    let cap = a.iter().chain(b).map(PAdicScalar::abs_precision).max().unwrap_or(0);
    let zero = PAdicScalar::Zero { p, abs_precision: cap };
    let len = (a.len() + b.len()).saturating_sub(1);
    let mut product = Vec::with_capacity(len);
    for l in 0..len {
        let mut c = zero.clone();
        for j in l.saturating_sub(b.len() - 1)..=l.min(a.len() - 1) {
            c = c.checked_add(&a[j].checked_mul(&b[l - j])?)?;
        }
        product.push(c);
    }
    let sum_a = sum(a, &zero)?;
    let sum_b = sum(b, &zero)?;
    let sum_c = sum(&product, &zero)?;
    let max_abs_a = a.iter().map(PAdicScalar::abs).max().unwrap_or_else(ExactAbs::zero);
    let sum_bound_holds = sum_a.abs() <= max_abs_a;
    let product_identity_holds = sum_a.checked_mul(&sum_b)?.agrees_with(&sum_c)?;
    Ok(CauchyReport {
        product,
        sum_a,
        sum_b,
        sum_c,
        max_abs_a,
        sum_bound_holds,
        product_identity_holds,
    })
}
