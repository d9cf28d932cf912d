//! Vectors and square matrices over Q_p with the max-ultranorm.
//!
//! Entries are kept as exact rationals: the valuation of a determinant is
//! fragile under truncation mod p^N, so everything here is computed exactly
//! and [`PAdicScalar`] views are produced only on request.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::padic::{abs_p, ExactAbs, PAdicScalar};
use crate::rational::{fmt_rational, parse_rational, prime_power};
use crate::{Error, Exec, Prime, Result};

/// Largest dimension accepted by the determinant routines unless overridden.
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraVector {
    p: Prime,
    entries: Vec<BigRational>,
}

impl UltraVector {
    pub fn new(p: Prime, entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpec("vector must have dimension ≥ 1".into()));
        }
        Ok(UltraVector { p, entries })
    }

    pub fn from_i64(p: Prime, entries: &[i64]) -> Result<Self> {
        Self::new(p, entries.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn scalar(&self, i: usize, rel_precision: u32) -> PAdicScalar {
        PAdicScalar::from_rational(&self.entries[i], self.p, rel_precision)
    }

    pub fn scale(&self, t: &BigRational) -> UltraVector {
        UltraVector { p: self.p, entries: self.entries.iter().map(|x| x * t).collect() }
    }

    pub fn checked_add(&self, other: &UltraVector) -> Result<UltraVector> {
        if self.p != other.p || self.dim() != other.dim() {
            return Err(Error::InvalidSpec("vectors differ in prime or dimension".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(UltraVector { p: self.p, entries })
    }
}

/// `max_i |v_i|_p`.
pub fn ultranorm(v: &UltraVector) -> ExactAbs {
    v.entries.iter().map(|x| abs_p(x, v.p)).max().unwrap_or_else(ExactAbs::zero)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraMatrix {
    p: Prime,
    n: usize,
    entries: Vec<BigRational>,
}

impl UltraMatrix {
    pub fn new(p: Prime, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("matrix must be square and non-empty".into()));
        }
        Ok(UltraMatrix { p, n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(p: Prime, rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            p,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        Self::diagonal(p, &vec![BigRational::one(); n])
    }

    pub fn diagonal(p: Prime, d: &[BigRational]) -> Self {
        let n = d.len();
        let mut entries = vec![BigRational::zero(); n * n];
        for (i, x) in d.iter().enumerate() {
            entries[i * n + i] = x.clone();
        }
        UltraMatrix { p, n, entries }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> &BigRational {
        &self.entries[j * self.n + k]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn scalar(&self, j: usize, k: usize, rel_precision: u32) -> PAdicScalar {
        PAdicScalar::from_rational(self.get(j, k), self.p, rel_precision)
    }

    /// `(Tv)_j = Σ_k a_{jk} v_k`.
    pub fn apply(&self, v: &UltraVector) -> Result<UltraVector> {
        if v.p != self.p || v.dim() != self.n {
            return Err(Error::InvalidSpec("vector does not match matrix".into()));
        }
        let entries = (0..self.n)
            .map(|j| (0..self.n).map(|k| self.get(j, k) * &v.entries[k]).sum())
            .collect();
        Ok(UltraVector { p: self.p, entries })
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &UltraMatrix) -> Result<UltraMatrix> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::InvalidSpec("matrices differ in prime or dimension".into()));
        }
        let n = self.n;
        let entries = (0..n * n)
            .map(|i| (0..n).map(|m| self.get(i / n, m) * other.get(m, i % n)).sum())
            .collect();
        Ok(UltraMatrix { p: self.p, n, entries })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p.get(),
            "rows": self.rows().iter()
                .map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: MatrixJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = parsed
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(Prime::new(parsed.p)?, rows)
    }
}

#[derive(Deserialize)]
struct MatrixJson {
    p: u64,
    rows: Vec<Vec<String>>,
}

/// `max_{j,k} |a_{jk}|_p`.
pub fn op_norm(t: &UltraMatrix) -> ExactAbs {
    t.entries.iter().map(|x| abs_p(x, t.p)).max().unwrap_or_else(ExactAbs::zero)
}

/// Exact determinant: clear denominators, then Bareiss elimination over Z.
pub fn determinant(t: &UltraMatrix, max_dim: usize) -> Result<BigRational> {
    let n = t.n;
    if n > max_dim {
        return Err(Error::OverCap { size: n, cap: max_dim });
    }
    let mut scale = BigRational::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in t.entries.chunks(n) {
        let lcm = row.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        scale /= BigRational::from_integer(lcm.clone());
        m.push(row.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigRational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(BigRational::from_integer(sign * &m[n - 1][n - 1]) * scale)
}

/// `|det T|_p`; the bound `|det T|_p ≤ ‖T‖_op^n` is asserted.
pub fn det_abs(t: &UltraMatrix) -> Result<ExactAbs> {
    let d = abs_p(&determinant(t, DEFAULT_MAX_DIM)?, t.p);
    let bound = op_norm(t).pow(t.n as i32);
    assert!(d <= bound, "|det T|_p exceeds ‖T‖_op^n");
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invertibility {
    pub invertible_over_zp: bool,
    pub isometry: bool,
}

/// `T ∈ GL_n(Z_p)`: entries in Z_p and `|det T|_p = 1`; such `T` are exactly
/// the isometries of the ultranorm.
pub fn zp_invertibility(t: &UltraMatrix) -> Result<Invertibility> {
    let one = ExactAbs::p_power(t.p, 0);
    let integral = op_norm(t) <= one;
    let invertible = integral && det_abs(t)? == one;
    Ok(Invertibility { invertible_over_zp: invertible, isometry: invertible })
}

/// Looks for a vector with `‖Tv‖ ≠ ‖v‖` among the basis vectors and
/// `samples` random vectors with entries `d·p^-s`, `0 ≤ d < p`, `s ∈ {0,1,2}`.
pub fn isometry_counterexample(t: &UltraMatrix, samples: usize, seed: u64) -> Result<Option<UltraVector>> {
    let n = t.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = (0..n).map(|i| {
        let mut e = vec![BigRational::zero(); n];
        e[i] = BigRational::one();
        e
    });
    let p = t.p.get();
    let random: Vec<Vec<BigRational>> = (0..samples)
        .map(|_| {
            (0..n)
                .map(|_| BigRational::from_integer(rng.gen_range(0..p).into()) * prime_power(p, -rng.gen_range(0..3)))
                .collect()
        })
        .collect();
    for entries in basis.chain(random) {
        let v = UltraVector { p: t.p, entries };
        if ultranorm(&t.apply(&v)?) != ultranorm(&v) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Exhaustive version over all `(3p - 2)^n` vectors with entries in
/// `{d·p^-s : 0 ≤ d < p, s ∈ {0,1,2}}`.
pub fn isometry_exhaustive(t: &UltraMatrix, exec: Exec, cap: usize) -> Result<Option<UltraVector>> {
    let p = t.p.get();
    let mut values = vec![BigRational::zero()];
    for s in 0..3 {
        values.extend((1..p).map(|d| BigRational::from_integer(d.into()) * prime_power(p, -s)));
    }
    let total = values.len().checked_pow(t.n as u32).filter(|&c| c <= cap);
    let Some(total) = total else {
        return Err(Error::OverCap { size: usize::MAX, cap });
    };
    let vector = |mut idx: usize| {
        let entries = (0..t.n)
            .map(|_| {
                let x = values[idx % values.len()].clone();
                idx /= values.len();
                x
            })
            .collect();
        UltraVector { p: t.p, entries }
    };
    let found = exec.find_first(total, |i| {
        let v = vector(i);
        let tv = t.apply(&v).expect("dimensions match");
        (ultranorm(&tv) != ultranorm(&v)).then_some(v)
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn norms() {
        let v = UltraVector::from_i64(p(2), &[1, 2, 4]).unwrap();
        assert_eq!(ultranorm(&v), ExactAbs::p_power(p(2), 0));
        assert_eq!(ultranorm(&v.scale(&int(2))), ExactAbs::p_power(p(2), 1));
        assert!(ultranorm(&UltraVector::from_i64(p(2), &[0, 0]).unwrap()).is_zero());
        assert!(UltraVector::from_i64(p(2), &[]).is_err());

        let t = UltraMatrix::from_i64(p(2), &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(op_norm(&t), ExactAbs::p_power(p(2), 0));
        assert_eq!(op_norm(&UltraMatrix::identity(p(5), 3)), ExactAbs::p_power(p(5), 0));
        let d = UltraMatrix::diagonal(p(2), &[int(2), int(4)]);
        assert_eq!(op_norm(&d), ExactAbs::p_power(p(2), 1));
    }

    #[test]
    fn determinants() {
        let t = UltraMatrix::from_i64(p(2), &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(determinant(&t, 64).unwrap(), int(-2));
        assert_eq!(det_abs(&t).unwrap(), ExactAbs::p_power(p(2), 1));
        assert_eq!(det_abs(&UltraMatrix::identity(p(3), 4)).unwrap(), ExactAbs::p_power(p(3), 0));
        assert_eq!(det_abs(&UltraMatrix::diagonal(p(2), &[int(2), int(2)])).unwrap(), ExactAbs::p_power(p(2), 2));
        let r = UltraMatrix::new(p(3), vec![vec![frac(1, 3), int(1)], vec![int(0), frac(9, 2)]]).unwrap();
        assert_eq!(determinant(&r, 64).unwrap(), frac(3, 2));
        let sing = UltraMatrix::from_i64(p(3), &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]).unwrap();
        assert!(determinant(&sing, 64).unwrap().is_zero());
        assert!(matches!(determinant(&UltraMatrix::identity(p(2), 5), 4), Err(Error::OverCap { .. })));
    }

    #[test]
    fn invertibility() {
        let d = UltraMatrix::diagonal(p(2), &[int(1), int(3)]);
        assert_eq!(zp_invertibility(&d).unwrap(), Invertibility { invertible_over_zp: true, isometry: true });
        let t = UltraMatrix::from_i64(p(2), &[&[1, 2], &[3, 4]]).unwrap();
        assert!(!zp_invertibility(&t).unwrap().invertible_over_zp);
        assert!(isometry_counterexample(&t, 100, 1).unwrap().is_some());
        let perm = UltraMatrix::from_i64(p(3), &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]).unwrap();
        assert!(zp_invertibility(&perm).unwrap().isometry);
        assert_eq!(isometry_exhaustive(&perm, Exec::default(), 1 << 20).unwrap(), None);
        let half = UltraMatrix::new(p(3), vec![vec![frac(1, 3), int(0)], vec![int(0), int(3)]]).unwrap();
        assert!(!zp_invertibility(&half).unwrap().isometry);
    }

    #[test]
    fn json_round_trip() {
        let t = UltraMatrix::new(p(5), vec![vec![frac(1, 5), int(-2)], vec![int(0), frac(7, 3)]]).unwrap();
        let j = t.to_json();
        assert_eq!(j["rows"][0][0], "1/5");
        assert_eq!(UltraMatrix::from_json(&j).unwrap(), t);
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i128 {
        if m.len() == 1 {
            return m[0][0] as i128;
        }
        (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] as i128 * cofactor_det(&minor)
            })
            .sum()
    }

    fn matrix(pr: u64, n: usize) -> impl Strategy<Value = (Vec<Vec<i64>>, UltraMatrix)> {
        proptest::collection::vec(proptest::collection::vec(-30i64..=30, n), n).prop_map(move |rows| {
            let t = UltraMatrix::new(
                Prime::new(pr).unwrap(),
                rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            )
            .unwrap();
            (rows, t)
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor((rows, t) in (1usize..=5).prop_flat_map(|n| matrix(3, n))) {
            prop_assert_eq!(determinant(&t, 64).unwrap(), BigRational::from_integer(cofactor_det(&rows).into()));
        }

        #[test]
        fn norm_bounds(((_, a), (_, b)) in (1usize..=4).prop_flat_map(|n| (matrix(2, n), matrix(2, n))),
                       v in proptest::collection::vec(-50i64..=50, 4), s in -3i64..=3) {
            let n = a.dim();
            let v = UltraVector::new(a.p(), v[..n].iter().map(|&x| int(x) * prime_power(2, s)).collect()).unwrap();
            prop_assert!(ultranorm(&a.apply(&v).unwrap()) <= op_norm(&a).mul(&ultranorm(&v)));
            prop_assert!(op_norm(&a.compose(&b).unwrap()) <= op_norm(&a).mul(&op_norm(&b)));
            let t = int(12);
            prop_assert_eq!(ultranorm(&v.scale(&t)), abs_p(&t, a.p()).mul(&ultranorm(&v)));
            // equality at some basis vector
            let attained = (0..n).any(|i| {
                let mut e = vec![int(0); n];
                e[i] = int(1);
                let e = UltraVector::new(a.p(), e).unwrap();
                ultranorm(&a.apply(&e).unwrap()) == op_norm(&a)
            });
            prop_assert!(attained);
        }

        #[test]
        fn invertible_means_isometry((_, t) in (1usize..=2).prop_flat_map(|n| matrix(3, n))) {
            let inv = zp_invertibility(&t).unwrap();
            let witness = isometry_exhaustive(&t, Exec::Sequential, 1 << 16).unwrap();
            prop_assert_eq!(inv.isometry, witness.is_none());
        }
    }
}
