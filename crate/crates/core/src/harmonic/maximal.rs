//! The uncentered maximal function `M(ν)(x) = sup_{B ∋ x} ν(B) / μ(B)` on
//! finite trees (balls are cylinders) and on interval grids (balls are runs
//! of consecutive cells).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cantor::{ProductSpec, SpecJson};
use crate::rational::{fmt_rational, parse_rational, pow_enclosure, pow_i, to_f64};
use crate::{Error, Exec, Result};

/// Leaf weights `μ > 0` and `ν ≥ 0` on a finite Cantor product; leaves are
/// numbered lexicographically (first digit most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUltraTree {
    spec: ProductSpec,
    mu: Vec<BigRational>,
    nu: Vec<BigRational>,
}

#[derive(Deserialize)]
struct TreeJson {
    spec: SpecJson,
    mu: Vec<String>,
    nu: Vec<String>,
}

fn nonnegative(v: &[BigRational]) -> Result<()> {
    match v.iter().position(|x| x.is_negative()) {
        Some(i) => Err(Error::NotNonnegative(i)),
        None => Ok(()),
    }
}

impl FiniteUltraTree {
    pub fn new(spec: ProductSpec, mu: Vec<BigRational>, nu: Vec<BigRational>) -> Result<Self> {
        let leaves = spec.cumulative(spec.depth()).to_usize().unwrap_or(usize::MAX);
        if mu.len() != leaves || nu.len() != leaves {
            return Err(Error::InvalidSpec(format!("expected {leaves} leaf weights")));
        }
        if let Some(i) = mu.iter().position(|m| !m.is_positive()) {
            return Err(Error::DegenerateMeasure(format!("leaf {i} has μ-mass {}", fmt_rational(&mu[i]))));
        }
        nonnegative(&nu)?;
        Ok(FiniteUltraTree { spec, mu, nu })
    }

    /// Uniform `μ`.
    pub fn uniform(spec: ProductSpec, nu: Vec<BigRational>) -> Result<Self> {
        let n = spec.cumulative(spec.depth()).clone();
        let leaves = n.to_usize().unwrap_or(usize::MAX);
        let mu = vec![BigRational::new(BigInt::one(), n); leaves.min(nu.len())];
        Self::new(spec, mu, nu)
    }

    /// A random tree: depth `1..=max_depth`, factor sizes `2..=3`, scales
    /// `t_l = 1/N_l`, leaf weights with small numerators and denominators;
    /// about a third of the `ν` weights are zero.
    pub fn random(seed: u64, max_depth: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.gen_range(1..=max_depth);
        let factors: Vec<u64> = (0..depth).map(|_| rng.gen_range(2..=3)).collect();
        let spec = ProductSpec::reciprocal(factors).expect("valid factors");
        let leaves = spec.cumulative(depth).to_usize().unwrap();
        let mut weight = |zero_ok: bool| {
            if zero_ok && rng.gen_bool(1.0 / 3.0) {
                BigRational::zero()
            } else {
                BigRational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=7).into())
            }
        };
        let mu = (0..leaves).map(|_| weight(false)).collect();
        let nu = (0..leaves).map(|_| weight(true)).collect();
        FiniteUltraTree { spec, mu, nu }
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let t: TreeJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        Self::new(t.spec.build()?, parse(&t.mu)?, parse(&t.nu)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": self.spec.to_json(),
            "mu": self.mu.iter().map(fmt_rational).collect::<Vec<_>>(),
            "nu": self.nu.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    pub fn mu(&self) -> &[BigRational] {
        &self.mu
    }

    pub fn nu(&self) -> &[BigRational] {
        &self.nu
    }

    pub fn leaves(&self) -> usize {
        self.mu.len()
    }

    /// The same tree with `ν` replaced.
    pub fn with_nu(&self, nu: Vec<BigRational>) -> Result<Self> {
        Self::new(self.spec.clone(), self.mu.clone(), nu)
    }

    /// `ν = |f| μ`.
    pub fn with_density(&self, f: &[BigRational]) -> Result<Self> {
        if f.len() != self.leaves() {
            return Err(Error::InvalidSpec("density has the wrong length".into()));
        }
        self.with_nu(f.iter().zip(&self.mu).map(|(f, m)| f.abs() * m).collect())
    }

    /// Leaves per depth-`k` cylinder.
    fn block(&self, k: usize) -> usize {
        (self.spec.cumulative(self.spec.depth()) / self.spec.cumulative(k)).to_usize().unwrap()
    }

    fn level_sums(&self, w: &[BigRational]) -> Vec<Vec<BigRational>> {
        (0..=self.spec.depth())
            .map(|k| w.chunks(self.block(k)).map(|c| c.iter().sum()).collect())
            .collect()
    }
}

/// `M(ν)` at every leaf, exactly.
pub fn maximal_function(tree: &FiniteUltraTree, exec: Exec) -> Vec<BigRational> {
    let mu = tree.level_sums(&tree.mu);
    let nu = tree.level_sums(&tree.nu);
    let ratios: Vec<Vec<BigRational>> = mu.iter().zip(&nu).map(|(m, n)| n.iter().zip(m).map(|(n, m)| n / m).collect()).collect();
    let blocks: Vec<usize> = (0..=tree.spec.depth()).map(|k| tree.block(k)).collect();
    exec.map_range(tree.leaves(), |leaf| {
        (0..ratios.len()).map(|k| ratios[k][leaf / blocks[k]].clone()).max().unwrap()
    })
}

/// `μ{M > t}` against `C₁ ν(X) / t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakType {
    pub t: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Cells with weights `μ > 0`, `ν ≥ 0`; balls are all runs `[i, j]` of cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalModel {
    mu: Vec<BigRational>,
    nu: Vec<BigRational>,
}

impl IntervalModel {
    pub fn new(mu: Vec<BigRational>, nu: Vec<BigRational>) -> Result<Self> {
        if mu.is_empty() || mu.len() != nu.len() {
            return Err(Error::InvalidSpec("need equally many μ and ν cells".into()));
        }
        if let Some(i) = mu.iter().position(|m| !m.is_positive()) {
            return Err(Error::DegenerateMeasure(format!("cell {i} has μ-mass {}", fmt_rational(&mu[i]))));
        }
        nonnegative(&nu)?;
        Ok(IntervalModel { mu, nu })
    }

    pub fn mu(&self) -> &[BigRational] {
        &self.mu
    }

    pub fn nu(&self) -> &[BigRational] {
        &self.nu
    }

    /// `M(ν)` per cell over all runs containing it.
    pub fn maximal(&self) -> Vec<BigRational> {
        let n = self.mu.len();
        let mut m = vec![BigRational::zero(); n];
        for i in 0..n {
            let (mut sm, mut sn) = (BigRational::zero(), BigRational::zero());
            for j in i..n {
                sm += &self.mu[j];
                sn += &self.nu[j];
                let r = &sn / &sm;
                for x in m[i..=j].iter_mut() {
                    if r > *x {
                        *x = r.clone();
                    }
                }
            }
        }
        m
    }
}

/// Three unit cells, `ν = (0, 1, 0)`, `t = 2/5`: `M = (1/2, 1, 1/2)`, so
/// `μ{M > t} = 3` exceeds `ν(X)/t = 5/2` but not `2 ν(X)/t = 5`.
pub fn adversarial_interval_family() -> (IntervalModel, BigRational) {
    let one = BigRational::one();
    let model = IntervalModel::new(vec![one.clone(); 3], vec![BigRational::zero(), one, BigRational::zero()])
        .expect("valid weights");
    (model, BigRational::new(2.into(), 5.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakTypeModel {
    /// Trees, `C₁ = 1`.
    Ultrametric,
    /// Interval grids, `C₁ = 2`.
    Intervals,
}

impl WeakTypeModel {
    pub fn constant(self) -> u32 {
        match self {
            WeakTypeModel::Ultrametric => 1,
            WeakTypeModel::Intervals => 2,
        }
    }
}

fn weak_check(m: &[BigRational], mu: &[BigRational], nu_total: &BigRational, t: &BigRational, c1: u32) -> WeakType {
    let lhs: BigRational = m.iter().zip(mu).filter(|(m, _)| *m > t).map(|(_, w)| w.clone()).sum();
    let rhs = BigRational::from_integer(c1.into()) * nu_total / t;
    WeakType { t: fmt_rational(t), holds: lhs <= rhs, lhs: fmt_rational(&lhs), rhs: fmt_rational(&rhs) }
}

/// Checks `μ{M(ν) > t} ≤ C₁ t^{-1} ν(X)` for `t > 0`; `c1` overrides the
/// model's constant.
pub fn weak_type_verify(
    m: &[BigRational],
    mu: &[BigRational],
    nu: &[BigRational],
    t: &BigRational,
    c1: u32,
) -> Result<WeakType> {
    if !t.is_positive() {
        return Err(Error::InvalidSpec("t must be positive".into()));
    }
    Ok(weak_check(m, mu, &nu.iter().sum(), t, c1))
}

/// Checks the `C₁ = 1` inequality at every value `t` taken by `M`, and at
/// the left limits there (`μ{M ≥ v} ≤ ν(X)/v`), which together cover all
/// `t > 0`. Returns the first failure.
pub fn weak_type_audit_tree(tree: &FiniteUltraTree, exec: Exec) -> Option<WeakType> {
    let m = maximal_function(tree, exec);
    let total: BigRational = tree.nu.iter().sum();
    let mut values: Vec<BigRational> = m.iter().filter(|v| v.is_positive()).cloned().collect();
    values.sort();
    values.dedup();
    for v in &values {
        let at = weak_check(&m, &tree.mu, &total, v, 1);
        if !at.holds {
            return Some(at);
        }
        let lhs: BigRational = m.iter().zip(&tree.mu).filter(|(m, _)| *m >= v).map(|(_, w)| w.clone()).sum();
        let rhs = &total / v;
        if lhs > rhs {
            return Some(WeakType { t: format!("{}-", fmt_rational(v)), holds: false, lhs: fmt_rational(&lhs), rhs: fmt_rational(&rhs) });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionReport {
    pub lhs: String,
    pub rhs: String,
    /// Exact equality for integer `p`; relative `1e-12` otherwise.
    pub equal: bool,
    pub exact: bool,
}

/// `∫ g^p dμ` against `Σ λ(v_i)(v_{i+1}^p − v_i^p)` over the jumps
/// `0 = v_0 < v_1 < …` of `λ(t) = μ{g > t}`.
pub fn distribution_identity(g: &[BigRational], p: &BigRational, mu: &[BigRational]) -> Result<DistributionReport> {
    nonnegative(g)?;
    if !p.is_positive() {
        return Err(Error::ExponentOutOfRange(format!("p = {} must be positive", fmt_rational(p))));
    }
    if g.len() != mu.len() {
        return Err(Error::InvalidSpec("g and μ differ in length".into()));
    }
    let mut jumps: Vec<BigRational> = g.to_vec();
    jumps.push(BigRational::zero());
    jumps.sort();
    jumps.dedup();
    let lambda = |t: &BigRational| -> BigRational {
        g.iter().zip(mu).filter(|(g, _)| *g > t).map(|(_, m)| m.clone()).sum()
    };
    if p.is_integer() {
        let e = p.to_integer().to_i64().ok_or_else(|| Error::ExponentOutOfRange("p too large".into()))?;
        let lhs: BigRational = g.iter().zip(mu).map(|(g, m)| pow_i(g, e) * m).sum();
        let rhs: BigRational = jumps.windows(2).map(|w| lambda(&w[0]) * (pow_i(&w[1], e) - pow_i(&w[0], e))).sum();
        return Ok(DistributionReport { equal: lhs == rhs, lhs: fmt_rational(&lhs), rhs: fmt_rational(&rhs), exact: true });
    }
    let pf = to_f64(p);
    let pw = |x: &BigRational| to_f64(x).powf(pf);
    let lhs: f64 = g.iter().zip(mu).map(|(g, m)| pw(g) * to_f64(m)).sum();
    let rhs: f64 = jumps.windows(2).map(|w| to_f64(&lambda(&w[0])) * (pw(&w[1]) - pw(&w[0]))).sum();
    let equal = (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(DistributionReport { lhs: format!("{lhs:e}"), rhs: format!("{rhs:e}"), equal, exact: false })
}

/// `p C₁ (1 − a)^{-1} (p − 1)^{-1} a^{1 − p}` as a certified enclosure.
pub fn lp_constant(p: &BigRational, a: &BigRational, c1: u32, bits: u32) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let base = p * BigRational::from_integer(c1.into()) / ((&one - a) * (p - &one));
    let (lo, hi) = pow_enclosure(&(&one / a), &(p - &one), bits);
    (&base * lo, &base * hi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpReport {
    /// Enclosure of `∫ M(f)^p dμ`.
    pub lhs: (String, String),
    /// Enclosure of the constant times `∫ |f|^p dμ`.
    pub rhs: (String, String),
    pub constant: (String, String),
    /// Certified: the upper end of `lhs` is at most the lower end of `rhs`.
    pub holds: bool,
    /// The grid point `a = i/100` minimising the constant.
    pub best_a: String,
}

/// Verifies `∫ M(f)^p ≤ p C₁ (1 − a)^{-1} (p − 1)^{-1} a^{1−p} ∫ |f|^p` on a
/// tree with `C₁ = 1`.
pub fn lp_maximal_bound(
    tree: &FiniteUltraTree,
    f: &[BigRational],
    p: &BigRational,
    a: &BigRational,
    exec: Exec,
) -> Result<LpReport> {
    let one = BigRational::one();
    if p <= &one {
        return Err(Error::ExponentOutOfRange(format!("p = {} must exceed 1", fmt_rational(p))));
    }
    if !a.is_positive() || a >= &one {
        return Err(Error::ExponentOutOfRange(format!("a = {} must lie in (0, 1)", fmt_rational(a))));
    }
    const BITS: u32 = 80;
    let weighted = tree.with_density(f)?;
    let m = maximal_function(&weighted, exec);
    let integral = |values: &[BigRational]| -> (BigRational, BigRational) {
        let parts: Vec<(BigRational, BigRational)> = exec.map_slice(values, |v| {
            if v.is_zero() {
                (BigRational::zero(), BigRational::zero())
            } else {
                pow_enclosure(&v.abs(), p, BITS)
            }
        });
        parts.iter().zip(&tree.mu).fold((BigRational::zero(), BigRational::zero()), |(lo, hi), ((l, h), w)| {
            (lo + l * w, hi + h * w)
        })
    };
    let (lhs_lo, lhs_hi) = integral(&m);
    let (f_lo, f_hi) = integral(f);
    let (k_lo, k_hi) = lp_constant(p, a, 1, BITS);
    let (rhs_lo, rhs_hi) = (&k_lo * f_lo, &k_hi * f_hi);
    let pf = to_f64(p);
    let best = (1..100)
        .map(|i| (i, pf / ((1.0 - i as f64 / 100.0) * (pf - 1.0)) * (i as f64 / 100.0).powf(1.0 - pf)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
        .0;
    let s = |x: &BigRational| format!("{:.12e}", to_f64(x));
    Ok(LpReport {
        holds: lhs_hi <= rhs_lo,
        lhs: (s(&lhs_lo), s(&lhs_hi)),
        rhs: (s(&rhs_lo), s(&rhs_hi)),
        constant: (s(&k_lo), s(&k_hi)),
        best_a: fmt_rational(&BigRational::new(best.into(), 100.into())),
    })
}
