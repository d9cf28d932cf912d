//! Mixed-radix (r-adic) integers as truncated coherent sequences.
//!
//! A radix `r = (r_1, …, r_L)` with `R_l = r_1 ⋯ r_l` describes the inverse
//! system `Z/R_1Z ← Z/R_2Z ← …`; an element at depth `L` is a residue mod
//! `R_L`, whose reductions mod `R_l` form a coherent sequence.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::padic::Valuation;
use crate::prime::prime_factors;
use crate::rational::parse_rational;
use crate::{Error, Result};

/// The radices `r_1..r_L` and their running products `R_0 = 1, …, R_L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Radix {
    radices: Vec<u64>,
    cumulative: Vec<u64>,
    period: Option<usize>,
}

impl Radix {
    pub fn new(radices: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = radices.iter().find(|&&r| r < 2) {
            return Err(Error::InvalidRadix(format!("radix entries must be >= 2, got {bad}")));
        }
        let mut cumulative = Vec::with_capacity(radices.len() + 1);
        cumulative.push(1u64);
        for &r in &radices {
            let next = cumulative
                .last()
                .unwrap()
                .checked_mul(r)
                .ok_or_else(|| Error::InvalidRadix("R_L overflows 64 bits".into()))?;
            cumulative.push(next);
        }
        Ok(Radix { radices, cumulative, period: None })
    }

    /// The infinite sequence repeating `block`, truncated at `depth`.
    pub fn periodic(block: &[u64], depth: usize) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::InvalidRadix("empty period".into()));
        }
        let radices = block.iter().copied().cycle().take(depth).collect();
        let mut r = Radix::new(radices)?;
        r.period = Some(block.len());
        Ok(r)
    }

    /// `p`-adic radix `(p, p, …)` truncated at `depth`.
    pub fn constant(r: u64, depth: usize) -> Result<Self> {
        Radix::periodic(&[r], depth)
    }

    pub fn depth(&self) -> usize {
        self.radices.len()
    }

    /// `r_j` for `1 ≤ j ≤ L`.
    pub fn r(&self, j: usize) -> u64 {
        self.radices[j - 1]
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// `R_l` for `0 ≤ l ≤ L`.
    pub fn cumulative(&self, l: usize) -> u64 {
        self.cumulative[l]
    }

    pub fn modulus(&self) -> u64 {
        *self.cumulative.last().unwrap()
    }

    pub fn period(&self) -> Option<&[u64]> {
        self.period.map(|n| &self.radices[..n.min(self.radices.len())])
    }

    /// `R_n` for any `n`, continuing a periodic radix past its truncation.
    /// `None` beyond the known entries of a non-periodic radix, or on
    /// overflow.
    pub fn cumulative_extended(&self, n: usize) -> Option<u128> {
        if n <= self.depth() {
            return Some(self.cumulative[n] as u128);
        }
        let block = self.period()?;
        let mut acc = self.modulus() as u128;
        for j in self.depth()..n {
            acc = acc.checked_mul(block[j % block.len()] as u128)?;
        }
        Some(acc)
    }

    pub fn id(&self) -> String {
        self.radices.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse_id(id: &str) -> Result<Self> {
        let radices = id
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad radix id {id:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Radix::new(radices)
    }
}

/// Strictly decreasing scales `1 = t_0 > t_1 > … > t_L > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaleSeq {
    t: Vec<BigRational>,
}

impl ScaleSeq {
    pub fn new(t: Vec<BigRational>) -> Result<Self> {
        if t.first().map(|t0| !t0.is_one()).unwrap_or(true) {
            return Err(Error::InvalidScales("t_0 must be 1".into()));
        }
        if t.last().unwrap() <= &BigRational::zero() {
            return Err(Error::InvalidScales("scales must be positive".into()));
        }
        if t.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidScales("scales must strictly decrease".into()));
        }
        Ok(ScaleSeq { t })
    }

    /// The default scales `t_l = 1/R_l`.
    pub fn reciprocal(radix: &Radix) -> Self {
        ScaleSeq {
            t: (0..=radix.depth())
                .map(|l| BigRational::new(BigInt::one(), BigInt::from(radix.cumulative(l))))
                .collect(),
        }
    }

    /// `t_l = θ^l` for `0 < θ < 1`.
    pub fn geometric(theta: &BigRational, depth: usize) -> Result<Self> {
        if theta <= &BigRational::zero() || theta >= &BigRational::one() {
            return Err(Error::InvalidScales("ratio must lie in (0, 1)".into()));
        }
        Ok(ScaleSeq { t: (0..=depth).map(|l| theta.pow(l as i32)).collect() })
    }

    pub fn parse(values: &[String]) -> Result<Self> {
        ScaleSeq::new(values.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
    }

    pub fn depth(&self) -> usize {
        self.t.len() - 1
    }

    pub fn get(&self, l: usize) -> &BigRational {
        &self.t[l]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.t
    }

    /// Truncates to the first `depth + 1` scales.
    pub fn truncate(&self, depth: usize) -> Self {
        ScaleSeq { t: self.t[..=depth].to_vec() }
    }
}

fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// `l_r(a)`: the largest `l ≤ L` with `R_l | a`, saturated when `R_L | a`.
pub fn level(a: i128, radix: &Radix) -> Valuation {
    let l = (0..=radix.depth()).rev().find(|&l| reduce(a, radix.cumulative(l)) == 0).unwrap();
    if l == radix.depth() {
        Valuation::AtLeast(l as u32)
    } else {
        Valuation::Finite(l as u32)
    }
}

/// `(l_r(a), |a|_r)` with `|a|_r = t_{l_r(a)}` and `|a|_r = 0` when saturated.
pub fn lr_and_abs(a: i128, radix: &Radix, t: &ScaleSeq) -> (Valuation, BigRational) {
    let l = level(a, radix);
    let abs = match l {
        Valuation::Finite(l) => t.get(l as usize).clone(),
        Valuation::AtLeast(_) => BigRational::zero(),
    };
    (l, abs)
}

/// `d_r(a, b) = |a - b|_r`.
pub fn distance(a: i128, b: i128, radix: &Radix, t: &ScaleSeq) -> BigRational {
    lr_and_abs(a - b, radix, t).1
}

/// `q(a) = (a mod R_1, …, a mod R_L)`.
pub fn embed_q(a: i128, radix: &Radix) -> Vec<u64> {
    (1..=radix.depth()).map(|l| reduce(a, radix.cumulative(l))).collect()
}

/// True iff `x_{l+1} mod R_l = x_l` for all `l < L`.
pub fn coherence_check(x: &[u64], radix: &Radix) -> Result<bool> {
    if x.len() != radix.depth() {
        return Err(Error::InvalidResidue(format!(
            "sequence has {} entries, radix depth is {}",
            x.len(),
            radix.depth()
        )));
    }
    for (i, &xl) in x.iter().enumerate() {
        if xl >= radix.cumulative(i + 1) {
            return Err(Error::InvalidResidue(format!(
                "x_{} = {xl} not below R_{} = {}",
                i + 1,
                i + 1,
                radix.cumulative(i + 1)
            )));
        }
    }
    Ok(x.windows(2).enumerate().all(|(i, w)| w[1] % radix.cumulative(i + 1) == w[0]))
}

/// Distance between coherent sequences: `t_l` for the number `l` of leading
/// entries that agree, 0 if all agree.
pub fn sequence_distance(x: &[u64], y: &[u64], t: &ScaleSeq) -> BigRational {
    match x.iter().zip(y).position(|(a, b)| a != b) {
        Some(l) => t.get(l).clone(),
        None => BigRational::zero(),
    }
}

/// An r-adic integer known modulo `R_L`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadicInt {
    radix: Arc<Radix>,
    residue: u64,
}

impl fmt::Debug for RadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {} [r = {}]", self.residue, self.radix.modulus(), self.radix.id())
    }
}

impl RadicInt {
    pub fn new(radix: Arc<Radix>, residue: u64) -> Result<Self> {
        if residue >= radix.modulus() {
            return Err(Error::InvalidResidue(format!("{residue} not below R_L = {}", radix.modulus())));
        }
        Ok(RadicInt { radix, residue })
    }

    pub fn from_i128(a: i128, radix: Arc<Radix>) -> Self {
        let residue = reduce(a, radix.modulus());
        RadicInt { radix, residue }
    }

    /// Rebuilds an element from its coherent sequence.
    pub fn from_sequence(x: &[u64], radix: Arc<Radix>) -> Result<Self> {
        if !coherence_check(x, &radix)? {
            return Err(Error::InvalidResidue("sequence is not coherent".into()));
        }
        let residue = x.last().copied().unwrap_or(0);
        Ok(RadicInt { radix, residue })
    }

    pub fn radix(&self) -> &Arc<Radix> {
        &self.radix
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn sequence(&self) -> Vec<u64> {
        embed_q(self.residue as i128, &self.radix)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.radix.modulus() as u128;
        let residue = ((self.residue as u128 + other.residue as u128) % m) as u64;
        Ok(RadicInt { radix: self.radix.clone(), residue })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.radix.modulus() as u128;
        let residue = ((self.residue as u128 * other.residue as u128) % m) as u64;
        Ok(RadicInt { radix: self.radix.clone(), residue })
    }

    pub fn neg(&self) -> Self {
        let m = self.radix.modulus();
        RadicInt { radix: self.radix.clone(), residue: (m - self.residue) % m }
    }

    pub fn abs(&self, t: &ScaleSeq) -> BigRational {
        lr_and_abs(self.residue as i128, &self.radix, t).1
    }
}

/// Haar measure of `Y_n = R_n Z_r`, which is `1/R_n`.
pub fn haar_ball(n: usize, radix: &Radix) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(radix.cumulative(n)))
}

/// Witnesses `n(l)` for `r ≺ r′`: for each `l = 0..=L_r`, the least `n`
/// with `R_l | R′_n`.
///
/// The search stops at `search_depth`. A failure is reported as refuted when
/// `r′` is periodic and some prime of `R_l` never divides it, and as
/// exhausted otherwise.
pub fn preceq(r: &Radix, r2: &Radix, search_depth: usize) -> Result<Vec<usize>> {
    let mut witnesses = Vec::with_capacity(r.depth() + 1);
    let mut start = 0;
    for l in 0..=r.depth() {
        let target = r.cumulative(l) as u128;
        let found = (start..=search_depth)
            .map_while(|n| r2.cumulative_extended(n).map(|big| (n, big)))
            .find(|(_, big)| big % target == 0);
        match found {
            Some((n, _)) => {
                witnesses.push(n);
                start = n;
            }
            None => {
                if let Some(block) = r2.period() {
                    let block_primes: Vec<u64> =
                        block.iter().flat_map(|&b| prime_factors(b)).collect();
                    if let Some(q) = prime_factors(r.cumulative(l))
                        .into_iter()
                        .find(|q| !block_primes.contains(q))
                    {
                        return Err(Error::NotComparableRefuted { level: l, prime: q });
                    }
                }
                return Err(Error::NotComparableExhausted { level: l, bound: search_depth });
            }
        }
    }
    Ok(witnesses)
}

/// True when `r ≺ r′` and `r′ ≺ r` within the search depth.
pub fn equivalent(r: &Radix, r2: &Radix, search_depth: usize) -> bool {
    preceq(r, r2, search_depth).is_ok() && preceq(r2, r, search_depth).is_ok()
}

/// The projection `Y′ → Y` at finite depth: `x′ mod R_L`, defined when
/// `R_L | R′_{L′}`.
pub fn project(x2: &RadicInt, r: Arc<Radix>) -> Result<RadicInt> {
    let m2 = x2.radix().modulus();
    if m2 % r.modulus() != 0 {
        let witness = preceq(&r, x2.radix(), x2.radix().depth());
        return Err(witness.err().unwrap_or(Error::NotComparableExhausted {
            level: r.depth(),
            bound: x2.radix().depth(),
        }));
    }
    let residue = x2.residue() % r.modulus();
    Ok(RadicInt { radix: r, residue })
}

/// The projected coherent sequence `x_l = x′_{n(l)} mod R_l`, built level by
/// level from the witnesses.
pub fn project_sequence(x2: &RadicInt, r: &Radix, witnesses: &[usize]) -> Result<Vec<u64>> {
    let seq2 = x2.sequence();
    (1..=r.depth())
        .map(|l| {
            let n = witnesses[l];
            if n > seq2.len() {
                return Err(Error::NotComparableExhausted { level: l, bound: seq2.len() });
            }
            let x_n = if n == 0 { 0 } else { seq2[n - 1] };
            Ok(x_n % r.cumulative(l))
        })
        .collect()
}

/// JSON form of a radix with optional scales.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadixConfig {
    pub radix: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<String>>,
}

impl RadixConfig {
    pub fn build(&self) -> Result<(Radix, ScaleSeq)> {
        let radix = Radix::new(self.radix.clone())?;
        let scales = match &self.scales {
            Some(s) => {
                let t = ScaleSeq::parse(s)?;
                if t.depth() != radix.depth() {
                    return Err(Error::InvalidScales(format!(
                        "{} scales for radix depth {}",
                        t.depth() + 1,
                        radix.depth()
                    )));
                }
                t
            }
            None => ScaleSeq::reciprocal(&radix),
        };
        Ok((radix, scales))
    }
}

/// JSON form `{"radix_id": "2,3", "residue": "5"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicIntJson {
    pub radix_id: String,
    pub residue: String,
}

impl From<&RadicInt> for RadicIntJson {
    fn from(x: &RadicInt) -> Self {
        RadicIntJson { radix_id: x.radix.id(), residue: x.residue.to_string() }
    }
}

impl TryFrom<RadicIntJson> for RadicInt {
    type Error = Error;
    fn try_from(j: RadicIntJson) -> Result<Self> {
        let radix = Arc::new(Radix::parse_id(&j.radix_id)?);
        let residue =
            j.residue.parse().map_err(|_| Error::Parse(format!("bad residue {:?}", j.residue)))?;
        RadicInt::new(radix, residue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn scales(v: &[(i64, i64)]) -> ScaleSeq {
        ScaleSeq::new(v.iter().map(|&(a, b)| frac(a, b)).collect()).unwrap()
    }

    #[test]
    fn level_examples() {
        let r = Radix::new(vec![2, 3, 2]).unwrap();
        let t = scales(&[(1, 1), (1, 2), (1, 6), (1, 12)]);
        assert_eq!(lr_and_abs(6, &r, &t), (Valuation::Finite(2), frac(1, 6)));
        assert_eq!(lr_and_abs(0, &r, &t), (Valuation::AtLeast(3), int(0)));
        let r2 = Radix::new(vec![2, 2, 2]).unwrap();
        assert_eq!(level(12, &r2), Valuation::Finite(2));
    }

    #[test]
    fn embedding_examples() {
        let r = Radix::new(vec![2, 3]).unwrap();
        assert_eq!(embed_q(7, &r), vec![1, 1]);
        assert_eq!(embed_q(0, &r), vec![0, 0]);
        let t = scales(&[(1, 1), (1, 2), (1, 6)]);
        let d = sequence_distance(&embed_q(5, &r), &embed_q(7, &r), &t);
        assert_eq!(d, frac(1, 2));
        assert_eq!(d, distance(5, 7, &r, &t));
    }

    #[test]
    fn coherence_examples() {
        let r = Radix::new(vec![2, 3]).unwrap();
        assert!(coherence_check(&[1, 1], &r).unwrap());
        assert!(!coherence_check(&[1, 2], &r).unwrap());
        let r3 = Radix::new(vec![2, 2, 2]).unwrap();
        assert!(coherence_check(&[0, 0, 0], &r3).unwrap());
        assert!(matches!(coherence_check(&[2, 0], &r), Err(Error::InvalidResidue(_))));
        assert!(matches!(coherence_check(&[1], &r), Err(Error::InvalidResidue(_))));
    }

    #[test]
    fn arithmetic_examples() {
        let r = Arc::new(Radix::new(vec![2, 3]).unwrap());
        let a = RadicInt::from_i128(4, r.clone());
        let b = RadicInt::from_i128(5, r.clone());
        let s = a.checked_add(&b).unwrap();
        assert_eq!(s.residue(), 3);
        assert!(coherence_check(&s.sequence(), &r).unwrap());
        let one = RadicInt::from_i128(1, r.clone());
        assert_eq!(a.checked_mul(&one).unwrap(), a);
        let three = RadicInt::from_i128(3, r.clone());
        assert_eq!(three.checked_mul(&a).unwrap().sequence(), embed_q(12, &r));
        let other = RadicInt::from_i128(1, Arc::new(Radix::new(vec![2, 2]).unwrap()));
        assert_eq!(a.checked_add(&other), Err(Error::RadixMismatch));
    }

    #[test]
    fn haar_examples() {
        let r = Radix::new(vec![2, 3]).unwrap();
        assert_eq!(haar_ball(2, &r), frac(1, 6));
        assert_eq!(haar_ball(0, &r), int(1));
        assert_eq!(haar_ball(2, &Radix::new(vec![10, 10]).unwrap()), frac(1, 100));
    }

    #[test]
    fn preceq_examples() {
        let twos = Radix::constant(2, 8).unwrap();
        let fours = Radix::constant(4, 8).unwrap();
        assert!(equivalent(&twos, &fours, 16));
        let w = preceq(&twos, &fours, 16).unwrap();
        // 2^l | 4^n iff 2n >= l
        for (l, &n) in w.iter().enumerate() {
            assert_eq!(n, l.div_ceil(2));
        }
        let threes = Radix::constant(3, 8).unwrap();
        assert_eq!(preceq(&twos, &threes, 16), Err(Error::NotComparableRefuted { level: 1, prime: 2 }));
        let mixed = Radix::periodic(&[2, 3], 8).unwrap();
        let sixes = Radix::constant(6, 8).unwrap();
        assert!(equivalent(&mixed, &sixes, 16));
        // a non-periodic radix can only exhaust the search
        let plain = Radix::new(vec![3, 3, 3]).unwrap();
        assert!(matches!(preceq(&twos, &plain, 3), Err(Error::NotComparableExhausted { .. })));
    }

    #[test]
    fn projection_examples() {
        let r = Arc::new(Radix::constant(2, 6).unwrap());
        let r2 = Arc::new(Radix::constant(4, 3).unwrap());
        let w = preceq(&r, &r2, 3).unwrap();
        for a in -40i128..40 {
            let x2 = RadicInt::from_i128(a, r2.clone());
            let x = project(&x2, r.clone()).unwrap();
            assert_eq!(x, RadicInt::from_i128(a, r.clone()));
            let seq = project_sequence(&x2, &r, &w).unwrap();
            assert!(coherence_check(&seq, &r).unwrap());
            assert_eq!(seq, x.sequence());
        }
        let r3 = Arc::new(Radix::constant(3, 3).unwrap());
        assert!(project(&RadicInt::from_i128(1, r3), r.clone()).is_err());
    }

    #[test]
    fn projection_is_surjective_homomorphism() {
        let r = Arc::new(Radix::new(vec![2, 3]).unwrap());
        let r2 = Arc::new(Radix::constant(6, 2).unwrap());
        let mut hit = vec![false; 6];
        for a in 0..36 {
            let xa = RadicInt::from_i128(a, r2.clone());
            hit[project(&xa, r.clone()).unwrap().residue() as usize] = true;
            for b in 0..36 {
                let xb = RadicInt::from_i128(b, r2.clone());
                let lhs = project(&xa.checked_mul(&xb).unwrap(), r.clone()).unwrap();
                let rhs = project(&xa, r.clone()).unwrap().checked_mul(&project(&xb, r.clone()).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn scales_validate() {
        assert!(ScaleSeq::new(vec![int(1), frac(1, 2), frac(1, 2)]).is_err());
        assert!(ScaleSeq::new(vec![frac(1, 2)]).is_err());
        assert!(Radix::new(vec![2, 1]).is_err());
    }

    #[test]
    fn json_forms() {
        let x = RadicInt::from_i128(5, Arc::new(Radix::new(vec![2, 3]).unwrap()));
        let j = RadicIntJson::from(&x);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"radix_id":"2,3","residue":"5"}"#);
        assert_eq!(RadicInt::try_from(j).unwrap(), x);
        let cfg: RadixConfig = serde_json::from_str(r#"{"radix":[2,3],"scales":["1","1/2","1/6"]}"#).unwrap();
        let (r, t) = cfg.build().unwrap();
        assert_eq!(t, ScaleSeq::reciprocal(&r));
    }

    #[test]
    fn deeper_truncation_refines() {
        // answers at depth L agree with those at every smaller depth
        let deep = Radix::new(vec![2, 3, 2, 5]).unwrap();
        let t = ScaleSeq::reciprocal(&deep);
        for l in 1..deep.depth() {
            let shallow = Radix::new(deep.radices()[..l].to_vec()).unwrap();
            let ts = t.truncate(l);
            for a in -60i128..60 {
                let (vs, abs_s) = lr_and_abs(a, &shallow, &ts);
                let (vd, abs_d) = lr_and_abs(a, &deep, &t);
                match vs {
                    Valuation::Finite(v) => assert_eq!((vd, &abs_d), (Valuation::Finite(v), &abs_s)),
                    Valuation::AtLeast(v) => assert!(vd.lower_bound() >= v),
                }
            }
        }
    }

    fn lvl(a: i128, r: &Radix) -> u32 {
        level(a, r).lower_bound()
    }

    proptest! {
        #[test]
        fn level_inequalities(a in -10_000i128..10_000, b in -10_000i128..10_000, block in prop::collection::vec(2u64..5, 1..4)) {
            let r = Radix::periodic(&block, 6).unwrap();
            prop_assert!(lvl(a + b, &r) >= lvl(a, &r).min(lvl(b, &r)));
            prop_assert!(lvl(a * b, &r) >= lvl(a, &r).max(lvl(b, &r)));
        }

        #[test]
        fn metric_properties(a in -500i128..500, b in -500i128..500, c in -500i128..500) {
            let r = Radix::new(vec![2, 3, 2, 5]).unwrap();
            let t = ScaleSeq::reciprocal(&r);
            let dab = distance(a, b, &r, &t);
            let dbc = distance(b, c, &r, &t);
            prop_assert!(distance(a, c, &r, &t) <= dab.clone().max(dbc));
            prop_assert_eq!(distance(a + c, b + c, &r, &t), dab.clone());
            prop_assert_eq!(sequence_distance(&embed_q(a, &r), &embed_q(b, &r), &t), dab);
            let (x, y) = (RadicInt::from_i128(a, r.clone().into()), RadicInt::from_i128(b, r.clone().into()));
            prop_assert_eq!(x.checked_mul(&y).unwrap().sequence(), embed_q(a * b, &r));
            prop_assert_eq!(x.checked_add(&y).unwrap().sequence(), embed_q(a + b, &r));
        }
    }
}
