//! The map `f(x) = Σ x_j / N_j` from `X` onto `[0, 1]`, for scales `t_l = 1/N_l`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Cylinder, ProductSpec};
use crate::{Error, Result};

fn require_reciprocal(spec: &ProductSpec) -> Result<()> {
    if spec.has_reciprocal_scales() {
        Ok(())
    } else {
        Err(Error::ScaleMismatch("the monotone map needs t_l = 1/N_l".into()))
    }
}

fn partial_sum(spec: &ProductSpec, word: &[u64]) -> BigRational {
    word.iter()
        .enumerate()
        .map(|(j, &d)| BigRational::new(BigInt::from(d), spec.cumulative(j + 1).clone()))
        .sum()
}

/// `f_k(x) = Σ_{j ≤ k} x_j N_j^{-1}` for the word of `x`.
pub fn monotone_point(spec: &ProductSpec, x: &Cylinder) -> Result<BigRational> {
    require_reciprocal(spec)?;
    Ok(partial_sum(spec, &x.word))
}

/// `f(B_k(x)) = [f_k(x), f_k(x) + N_k^{-1}]`.
pub fn monotone_interval(spec: &ProductSpec, b: &Cylinder) -> Result<(BigRational, BigRational)> {
    let lo = monotone_point(spec, b)?;
    let hi = &lo + BigRational::new(BigInt::from(1), spec.cumulative(b.depth()).clone());
    Ok((lo, hi))
}

/// True when every multiple `i / N_k`, `0 ≤ i < N_k`, is some `f_k(x)`.
pub fn monotone_image(spec: &ProductSpec, k: usize) -> Result<bool> {
    require_reciprocal(spec)?;
    let n = spec.cumulative(k).clone();
    let mut hit: Vec<BigInt> = spec
        .cylinders(k)
        .iter()
        .map(|c| (partial_sum(spec, &c.word) * BigRational::from_integer(n.clone())).to_integer())
        .collect();
    hit.sort();
    hit.dedup();
    Ok(hit.len() == spec.cylinders(k).len() && hit.iter().enumerate().all(|(i, v)| *v == BigInt::from(i)))
}

/// How the digits continue past the prefix: all `0`, or all `n_l − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tail {
    Zeros,
    Max,
}

/// An infinite point given by a finite prefix and a constant tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPoint {
    pub prefix: Vec<u64>,
    pub tail: Tail,
}

impl TailPoint {
    /// The tail at positions past the spec depth is kept symbolic.
    fn expand(&self, spec: &ProductSpec) -> Vec<u64> {
        let mut digits = self.prefix.clone();
        for j in self.prefix.len() + 1..=spec.depth() {
            digits.push(match self.tail {
                Tail::Zeros => 0,
                Tail::Max => spec.n(j) - 1,
            });
        }
        digits
    }

    pub fn value(&self, spec: &ProductSpec) -> Result<BigRational> {
        require_reciprocal(spec)?;
        let digits = self.expand(spec);
        let mut v = partial_sum(spec, &digits);
        if self.tail == Tail::Max {
            v += BigRational::new(BigInt::from(1), spec.cumulative(spec.depth()).clone());
        }
        Ok(v)
    }
}

fn check(spec: &ProductSpec, x: &TailPoint) -> Result<()> {
    Cylinder::new(spec, x.prefix.clone()).map(|_| ())
}

/// `f(x) = f(y)` for distinct `x`, `y`.
pub fn collides(spec: &ProductSpec, x: &TailPoint, y: &TailPoint) -> Result<bool> {
    check(spec, x)?;
    check(spec, y)?;
    let distinct = x.expand(spec) != y.expand(spec) || x.tail != y.tail;
    Ok(distinct && x.value(spec)? == y.value(spec)?)
}

/// The digit description of collisions: for some `k`, the points agree up
/// to `k`, `y_{k+1} = x_{k+1} + 1`, and afterwards `x_l = n_l − 1`, `y_l = 0`
/// (or the same with `x` and `y` exchanged).
pub fn collision_characterization(spec: &ProductSpec, x: &TailPoint, y: &TailPoint) -> Result<bool> {
    require_reciprocal(spec)?;
    check(spec, x)?;
    check(spec, y)?;
    let one_way = |a: &TailPoint, b: &TailPoint| {
        if a.tail != Tail::Max || b.tail != Tail::Zeros {
            return false;
        }
        let (da, db) = (a.expand(spec), b.expand(spec));
        let Some(k) = da.iter().zip(&db).position(|(p, q)| p != q) else {
            return false;
        };
        db[k] == da[k] + 1
            && (k + 1..spec.depth()).all(|l| da[l] == spec.n(l + 1) - 1 && db[l].is_zero())
    };
    Ok(one_way(x, y) || one_way(y, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::match_and_dist;
    use crate::rational::{frac, int};
    use num_traits::Signed;

    fn cyl(word: &[u64]) -> Cylinder {
        Cylinder { word: word.to_vec() }
    }

    #[test]
    fn examples() {
        let s = ProductSpec::reciprocal(vec![2, 2, 2]).unwrap();
        assert_eq!(monotone_point(&s, &cyl(&[1, 0, 1])).unwrap(), frac(5, 8));
        assert_eq!(monotone_interval(&s, &Cylinder::root()).unwrap(), (int(0), int(1)));
        let x = TailPoint { prefix: vec![0], tail: Tail::Max };
        let y = TailPoint { prefix: vec![1], tail: Tail::Zeros };
        assert!(collides(&s, &x, &y).unwrap());
        assert!(collision_characterization(&s, &x, &y).unwrap());
        let geometric = ProductSpec::uniform(2, 3, &frac(1, 3)).unwrap();
        assert!(matches!(monotone_point(&geometric, &cyl(&[1])), Err(Error::ScaleMismatch(_))));
    }

    fn tail_points(spec: &ProductSpec) -> Vec<TailPoint> {
        (0..=spec.depth())
            .flat_map(|k| spec.cylinders(k))
            .flat_map(|c| {
                [Tail::Zeros, Tail::Max].map(|tail| TailPoint { prefix: c.word.clone(), tail })
            })
            .collect()
    }

    #[test]
    fn collisions_match_characterization() {
        let s = ProductSpec::reciprocal(vec![3, 2, 4]).unwrap();
        let pts = tail_points(&s);
        let mut found = 0;
        for x in &pts {
            for y in &pts {
                let c = collides(&s, x, y).unwrap();
                assert_eq!(c, collision_characterization(&s, x, y).unwrap(), "{x:?} {y:?}");
                found += c as usize;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn lipschitz_order_and_grid() {
        let s = ProductSpec::reciprocal(vec![2, 3, 2, 3]).unwrap();
        let pts = s.points();
        for k in 0..=4 {
            assert!(monotone_image(&s, k).unwrap());
        }
        let mut modulus = vec![BigRational::zero(); 5];
        for x in &pts {
            for y in &pts {
                let fx = monotone_point(&s, x).unwrap();
                let fy = monotone_point(&s, y).unwrap();
                let (l, d) = match_and_dist(&s, x, y).unwrap();
                let gap = (&fx - &fy).abs();
                assert!(gap <= d);
                for m in modulus.iter_mut().take(l + 1) {
                    if gap > *m {
                        *m = gap.clone();
                    }
                }
                if x.word.iter().zip(&y.word).all(|(a, b)| a <= b) {
                    for k in 0..=4 {
                        assert!(partial_sum(&s, &x.word[..k]) <= partial_sum(&s, &y.word[..k]));
                    }
                }
            }
        }
        for (k, m) in modulus.iter().enumerate() {
            assert!(m <= s.t(k));
        }
    }
}
