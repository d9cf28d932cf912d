//! Products `X_A × X_B` under the max metric on a shared scale grid.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{ball_measure, Cylinder, ProductMeasure, ProductSpec};
use crate::rational::fmt_rational;
use crate::{Error, Result};

fn same_grid(a: &ProductSpec, b: &ProductSpec) -> Result<()> {
    if a.scales() != b.scales() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// The product with `max(d_A, d_B)`: again a Cantor product, with factor
/// sizes `n_j^A n_j^B` and the common scales.
pub fn product_join(a: &ProductSpec, b: &ProductSpec) -> Result<ProductSpec> {
    same_grid(a, b)?;
    let factors = a.factors().iter().zip(b.factors()).map(|(x, y)| x * y).collect();
    ProductSpec::new(factors, a.scales().clone())
}

/// The word of `(x, y)` in [`product_join`], digit `x_j n_j^B + y_j`.
pub fn product_point(a: &ProductSpec, b: &ProductSpec, x: &Cylinder, y: &Cylinder) -> Result<Cylinder> {
    same_grid(a, b)?;
    if x.depth() != y.depth() {
        return Err(Error::InvalidSpec("factor words must have equal length".into()));
    }
    let word = x.word.iter().zip(&y.word).enumerate().map(|(j, (&p, &q))| p * b.n(j + 1) + q).collect();
    Ok(Cylinder { word })
}

/// `diam(A × B) = max(diam A, diam B)`.
pub fn product_diam(a: &ProductSpec, b: &ProductSpec, x: &Cylinder, y: &Cylinder) -> Result<BigRational> {
    same_grid(a, b)?;
    Ok(x.diam(a).max(y.diam(b)).clone())
}

/// `Σ μ_A(A) μ_B(B)` over a product of antichains.
pub fn product_set_measure(mu_a: &ProductMeasure, mu_b: &ProductMeasure, a: &[Cylinder], b: &[Cylinder]) -> BigRational {
    let sa: BigRational = a.iter().map(|c| ball_measure(c, mu_a)).sum();
    let sb: BigRational = b.iter().map(|c| ball_measure(c, mu_b)).sum();
    if a.is_empty() || b.is_empty() {
        return BigRational::zero();
    }
    sa * sb
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// `μ_i(A_i) ≤ C_i h_i(diam A_i)` for every cylinder of each factor.
    pub factor_bounds_hold: bool,
    /// `μ(A × B) ≤ C_A C_B h_A h_B(diam(A × B))` for every cylinder pair.
    pub product_bound_holds: bool,
    /// Depths `(k_A, k_B)` of a violating pair.
    pub witness: Option<(usize, usize)>,
    /// Largest `μ(A × B) / (h_A h_B)(diam(A × B))`.
    pub worst_ratio: String,
}

/// Checks the product measure bound over all cylinder pairs. The largest
/// ball measure at each depth is a product of per-factor maxima, so the
/// check is exact without enumerating cylinders.
pub fn measure_bound_check(
    (a, mu_a, h_a, c_a): (&ProductSpec, &ProductMeasure, &[BigRational], &BigRational),
    (b, mu_b, h_b, c_b): (&ProductSpec, &ProductMeasure, &[BigRational], &BigRational),
) -> Result<BoundReport> {
    same_grid(a, b)?;
    let depth = a.depth();
    if h_a.len() != depth + 1 || h_b.len() != depth + 1 {
        return Err(Error::InvalidGauge(format!("gauges need {} values", depth + 1)));
    }
    let max_a: Vec<BigRational> = (0..=depth).map(|k| mu_a.max_ball(k)).collect();
    let max_b: Vec<BigRational> = (0..=depth).map(|k| mu_b.max_ball(k)).collect();
    let factor_bounds_hold =
        (0..=depth).all(|k| max_a[k] <= c_a * &h_a[k] && max_b[k] <= c_b * &h_b[k]);
    let mut witness = None;
    let mut worst = BigRational::zero();
    for ka in 0..=depth {
        for kb in 0..=depth {
            let k = ka.min(kb);
            let h = &h_a[k] * &h_b[k];
            let m = &max_a[ka] * &max_b[kb];
            if witness.is_none() && m > c_a * c_b * &h {
                witness = Some((ka, kb));
            }
            let ratio = m / h;
            if ratio > worst {
                worst = ratio;
            }
        }
    }
    Ok(BoundReport {
        factor_bounds_hold,
        product_bound_holds: witness.is_none(),
        witness,
        worst_ratio: fmt_rational(&worst),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::match_and_dist;
    use crate::radic::ScaleSeq;
    use crate::rational::{frac, int};

    fn binary(depth: usize) -> ProductSpec {
        ProductSpec::uniform(2, depth, &frac(1, 2)).unwrap()
    }

    #[test]
    fn diameters_match_max_metric() {
        let (a, b) = (binary(2), binary(2));
        let joined = product_join(&a, &b).unwrap();
        for ka in 0..=2 {
            for kb in 0..=2 {
                for ca in a.cylinders(ka) {
                    for cb in b.cylinders(kb) {
                        let pts: Vec<Cylinder> = a
                            .points()
                            .iter()
                            .filter(|x| ca.contains(x))
                            .flat_map(|x| {
                                b.points()
                                    .into_iter()
                                    .filter(|y| cb.contains(y))
                                    .map(|y| product_point(&a, &b, x, &y).unwrap())
                                    .collect::<Vec<_>>()
                            })
                            .collect();
                        let mut diam = BigRational::zero();
                        for x in &pts {
                            for y in &pts {
                                diam = diam.max(match_and_dist(&joined, x, y).unwrap().1);
                            }
                        }
                        // the finite model sees only depth-2 points, whose
                        // diameter is the ball diameter unless the ball is a point
                        let expected = product_diam(&a, &b, &ca, &cb).unwrap();
                        if ka < 2 || kb < 2 {
                            assert_eq!(diam, expected);
                        } else {
                            assert!(diam.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounds() {
        let s = binary(4);
        let u = ProductMeasure::uniform(&s);
        let h: Vec<BigRational> = s.scales().values().to_vec();
        let r = measure_bound_check((&s, &u, &h, &int(1)), (&s, &u, &h, &int(1))).unwrap();
        assert!(r.factor_bounds_hold && r.product_bound_holds);
        assert_eq!(r.worst_ratio, "1");
        let skew = ProductMeasure::new(&s, vec![vec![frac(1, 4), frac(3, 4)]; 4]).unwrap();
        let r = measure_bound_check((&s, &skew, &h, &int(1)), (&s, &u, &h, &int(1))).unwrap();
        assert!(!r.factor_bounds_hold && !r.product_bound_holds);
        assert!(r.witness.is_some());
        let other = ProductSpec::uniform(2, 4, &frac(1, 3)).unwrap();
        assert!(matches!(product_join(&s, &other), Err(Error::GridMismatch)));
        let deeper = ProductSpec::new(vec![2; 5], ScaleSeq::geometric(&frac(1, 2), 5).unwrap()).unwrap();
        assert!(matches!(product_join(&s, &deeper), Err(Error::GridMismatch)));
    }

    #[test]
    fn empty_product() {
        let s = binary(2);
        let u = ProductMeasure::uniform(&s);
        assert!(product_set_measure(&u, &u, &[], &[Cylinder::root()]).is_zero());
        assert_eq!(product_set_measure(&u, &u, &[Cylinder { word: vec![1] }], &[Cylinder::root()]), frac(1, 2));
    }
}
