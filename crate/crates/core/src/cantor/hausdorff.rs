//! Hausdorff content by dynamic programming over the cylinder tree.
//!
//! In an ultrametric space every set of diameter `t` lies in a closed ball of
//! the same diameter, so optimal covers of a finite union of cylinders can be
//! taken to consist of cylinders. The cheapest cover of a node is either the
//! node itself or the cheapest covers of its children.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{check_antichain, Cylinder, ProductSpec};
use crate::radic::ScaleSeq;
use crate::rational::{exact_pow, fmt_rational, pow_enclosure, to_f64};
use crate::{Error, Exec, Result};

const ENCLOSURE_BITS: u32 = 96;

/// `ζ(B) = h(diam B)`, specified on the scale grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gauge {
    /// `h(t) = t^α`, `α > 0`.
    Power(BigRational),
    /// `h(t_0), …, h(t_L)`.
    Table(Vec<BigRational>),
}

impl Gauge {
    fn validate(&self, spec: &ProductSpec) -> Result<()> {
        match self {
            Gauge::Power(alpha) if !alpha.is_positive() => {
                Err(Error::InvalidGauge(format!("exponent {} must be positive", fmt_rational(alpha))))
            }
            Gauge::Power(_) => Ok(()),
            Gauge::Table(h) => {
                if h.len() != spec.depth() + 1 {
                    return Err(Error::InvalidGauge(format!("{} gauge values for depth {}", h.len(), spec.depth())));
                }
                if h.iter().any(|x| !x.is_positive()) {
                    return Err(Error::InvalidGauge("gauge values must be positive".into()));
                }
                if h.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::InvalidGauge("gauge must be monotone in the scale".into()));
                }
                Ok(())
            }
        }
    }

    fn exact_costs(&self, spec: &ProductSpec) -> Option<Vec<BigRational>> {
        match self {
            Gauge::Power(alpha) => spec.scales().values().iter().map(|t| exact_pow(t, alpha)).collect(),
            Gauge::Table(h) => Some(h.clone()),
        }
    }

    fn enclosed_costs(&self, spec: &ProductSpec) -> (Vec<BigRational>, Vec<BigRational>) {
        match self {
            Gauge::Power(alpha) => spec
                .scales()
                .values()
                .iter()
                .map(|t| pow_enclosure(t, alpha, ENCLOSURE_BITS))
                .unzip(),
            Gauge::Table(h) => (h.clone(), h.clone()),
        }
    }
}

/// Admissible cover diameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Unbounded,
    /// `diam < δ`.
    Below(BigRational),
    /// `diam ≤ δ`.
    AtMost(BigRational),
}

impl Threshold {
    fn admits(&self, t: &BigRational) -> bool {
        match self {
            Threshold::Unbounded => true,
            Threshold::Below(d) => t < d,
            Threshold::AtMost(d) => t <= d,
        }
    }

    fn admits_f64(&self, t: f64) -> bool {
        match self {
            Threshold::Unbounded => true,
            Threshold::Below(d) => t < to_f64(d),
            Threshold::AtMost(d) => t <= to_f64(d),
        }
    }
}

trait Cost: Clone + PartialOrd + Send + Sync {
    fn empty() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, n: u64) -> Self;
}

impl Cost for BigRational {
    fn empty() -> Self {
        Zero::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, n: u64) -> Self {
        self * BigRational::from_integer(n.into())
    }
}

impl Cost for f64 {
    fn empty() -> Self {
        0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, n: u64) -> Self {
        self * n as f64
    }
}

fn min_opt<C: Cost>(a: Option<C>, b: Option<C>) -> Option<C> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b < a { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

struct Dp<C> {
    zeta: Vec<Option<C>>,
    full: Vec<Option<C>>,
}

impl<C: Cost> Dp<C> {
    fn new(spec: &ProductSpec, zeta: Vec<Option<C>>) -> Self {
        let depth = spec.depth();
        let mut full = vec![None; depth + 1];
        full[depth] = zeta[depth].clone();
        for k in (0..depth).rev() {
            let split = full[k + 1].as_ref().map(|c| c.times(spec.n(k + 1)));
            full[k] = min_opt(zeta[k].clone(), split);
        }
        Dp { zeta, full }
    }

    /// Cheapest cover of the targets (sorted, all inside `node`).
    fn cost(&self, node: &Cylinder, targets: &[Cylinder], exec: Exec) -> Option<C> {
        let k = node.depth();
        if targets.len() == 1 && targets[0].depth() == k {
            return self.full[k].clone();
        }
        let groups = group_by_digit(targets, k);
        let children: Vec<Option<C>> = exec.map_slice(&groups, |&(d, range)| {
            self.cost(&node.child(d), &targets[range.0..range.1], Exec::Sequential)
        });
        let split = children
            .into_iter()
            .try_fold(C::empty(), |acc, c| c.map(|c| acc.plus(&c)));
        min_opt(self.zeta[k].clone(), split)
    }

    fn solve(&self, targets: &[Cylinder], exec: Exec) -> Option<C> {
        if targets.is_empty() {
            return Some(C::empty());
        }
        self.cost(&Cylinder::root(), targets, exec)
    }
}

fn group_by_digit(targets: &[Cylinder], k: usize) -> Vec<(u64, (usize, usize))> {
    let mut groups: Vec<(u64, (usize, usize))> = Vec::new();
    for (i, c) in targets.iter().enumerate() {
        let d = c.word[k];
        match groups.last_mut() {
            Some((last, range)) if *last == d => range.1 = i + 1,
            _ => groups.push((d, (i, i + 1))),
        }
    }
    groups
}

fn prepare(spec: &ProductSpec, target: &[Cylinder]) -> Result<Vec<Cylinder>> {
    for c in target {
        Cylinder::new(spec, c.word.clone())?;
    }
    check_antichain(target)?;
    let mut sorted = target.to_vec();
    sorted.sort();
    Ok(sorted)
}

fn no_cover(spec: &ProductSpec) -> Error {
    Error::DepthInsufficient { depth: spec.depth(), spread: "no admissible cover at this depth".into() }
}

/// Exact value, or a certified enclosure when `t_l^α` is irrational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Content {
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub lower: BigRational,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub upper: BigRational,
}

impl Content {
    pub fn exact(&self) -> Option<&BigRational> {
        (self.lower == self.upper).then_some(&self.lower)
    }
}

/// `inf Σ ζ(B_i)` over covers of the target by cylinders admitted by `delta`.
pub fn hausdorff_content(
    spec: &ProductSpec,
    target: &[Cylinder],
    gauge: &Gauge,
    delta: &Threshold,
    exec: Exec,
) -> Result<Content> {
    gauge.validate(spec)?;
    let target = prepare(spec, target)?;
    let admitted: Vec<bool> = spec.scales().values().iter().map(|t| delta.admits(t)).collect();
    let run = |costs: Vec<BigRational>| {
        let zeta = costs.into_iter().zip(&admitted).map(|(c, &ok)| ok.then_some(c)).collect();
        Dp::new(spec, zeta).solve(&target, exec).ok_or_else(|| no_cover(spec))
    };
    match gauge.exact_costs(spec) {
        Some(costs) => {
            let v = run(costs)?;
            Ok(Content { lower: v.clone(), upper: v })
        }
        None => {
            let (lo, hi) = gauge.enclosed_costs(spec);
            Ok(Content { lower: run(lo)?, upper: run(hi)? })
        }
    }
}

/// Floating-point content for `h(t) = t^α` with real `α`.
pub fn hausdorff_content_f64(spec: &ProductSpec, target: &[Cylinder], alpha: f64, delta: &Threshold) -> Result<f64> {
    let target = prepare(spec, target)?;
    let zeta = spec
        .scales()
        .values()
        .iter()
        .map(|t| {
            let t = to_f64(t);
            delta.admits_f64(t).then(|| t.powf(alpha))
        })
        .collect();
    Dp::new(spec, zeta).solve(&target, Exec::Sequential).ok_or_else(|| no_cover(spec))
}

/// `sup_δ H_δ` over the grid `δ ∈ {t_0, …, t_L}` (the depth-limited measure),
/// with `strict` selecting `diam < δ` over `diam ≤ δ`.
pub fn hausdorff_measure(
    spec: &ProductSpec,
    target: &[Cylinder],
    gauge: &Gauge,
    strict: bool,
    exec: Exec,
) -> Result<Content> {
    let mut best: Option<Content> = None;
    for t in spec.scales().values() {
        let delta = if strict { Threshold::Below(t.clone()) } else { Threshold::AtMost(t.clone()) };
        match hausdorff_content(spec, target, gauge, &delta, exec) {
            Ok(c) => {
                if best.as_ref().is_none_or(|b| c.lower > b.lower) {
                    best = Some(c);
                }
            }
            Err(Error::DepthInsufficient { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| no_cover(spec))
}

/// Bracketing interval `[lo, hi]` for the Hausdorff dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimension {
    pub lo: f64,
    pub hi: f64,
    pub depth: usize,
}

impl Dimension {
    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Bisects on `α` for the crossing `N_l t_l^α = 1` of the depth-`l` measure,
/// in logarithms.
fn crossing(log_n: f64, log_t: f64, tol: f64) -> (f64, f64) {
    let g = |alpha: f64| log_n + alpha * log_t;
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    while hi - lo > tol / 2.0 {
        let mid = (lo + hi) / 2.0;
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn estimate(spec: &ProductSpec, log_t: &[f64], tol: f64) -> Result<Dimension> {
    let depth = spec.depth();
    if depth == 0 {
        return Err(Error::DepthInsufficient { depth, spread: "no scales".into() });
    }
    let log_n: Vec<f64> = std::iter::once(0.0)
        .chain(spec.factors().iter().scan(0.0, |acc, &n| {
            *acc += (n as f64).ln();
            Some(*acc)
        }))
        .collect();
    let (lo, hi) = crossing(log_n[depth], log_t[depth], tol);
    if depth >= 2 {
        let (plo, phi) = crossing(log_n[depth - 1], log_t[depth - 1], tol);
        let spread = ((lo + hi) / 2.0 - (plo + phi) / 2.0).abs();
        if spread > tol {
            return Err(Error::DepthInsufficient { depth, spread: format!("{spread:.3e}") });
        }
    }
    Ok(Dimension { lo, hi, depth })
}

fn log_scales(spec: &ProductSpec) -> Vec<f64> {
    spec.scales()
        .values()
        .iter()
        .map(|t| {
            // ln(a/b) without overflowing f64 for deep specs
            let n = t.numer().to_f64().filter(|x| x.is_finite());
            let d = t.denom().to_f64().filter(|x| x.is_finite());
            match (n, d) {
                (Some(n), Some(d)) => n.ln() - d.ln(),
                _ => big_ln(t.numer()) - big_ln(t.denom()),
            }
        })
        .collect()
}

fn big_ln(x: &num_bigint::BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Dimension estimate; fails with `DepthInsufficient` when the depth-`L` and
/// depth-`(L-1)` crossings differ by more than `tol`.
pub fn dimension_estimate(spec: &ProductSpec, tol: f64) -> Result<Dimension> {
    estimate(spec, &log_scales(spec), tol)
}

/// Dimension of the snowflaked space `(X, d^a)`, for real `a > 0`.
pub fn snowflake_dimension(spec: &ProductSpec, a: f64, tol: f64) -> Result<Dimension> {
    if !(a > 0.0) {
        return Err(Error::InvalidGauge(format!("snowflake exponent {a} must be positive")));
    }
    let log_t: Vec<f64> = log_scales(spec).into_iter().map(|l| a * l).collect();
    estimate(spec, &log_t, tol)
}

/// Scales before and after a transform, with the gauge/H¹ comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaugeReport {
    pub scales: Vec<(String, String)>,
    /// Content of `X` for the gauge `h = σ` on the original scales.
    pub gauge_content: Content,
    /// `H¹` content of `X` under the transformed scales.
    pub transformed_content: Content,
    pub agree: bool,
}

/// Replaces each `t_l` by `σ(t_l)`; `σ` must fix 1 and keep the scales
/// strictly decreasing and positive.
pub fn gauge_transform(
    spec: &ProductSpec,
    sigma: impl Fn(&BigRational) -> BigRational,
) -> Result<(ProductSpec, GaugeReport)> {
    let new: Vec<BigRational> = spec.scales().values().iter().map(&sigma).collect();
    if !sigma(&BigRational::zero()).is_zero() {
        return Err(Error::InvalidGauge("σ(0) must be 0".into()));
    }
    let scales = ScaleSeq::new(new.clone()).map_err(|e| Error::InvalidGauge(e.to_string()))?;
    let transformed = ProductSpec::new(spec.factors().to_vec(), scales)?;
    let whole = [Cylinder::root()];
    let gauge_content = hausdorff_content(spec, &whole, &Gauge::Table(new.clone()), &Threshold::Unbounded, Exec::Sequential)?;
    let one = Gauge::Power(BigRational::from_integer(1.into()));
    let transformed_content = hausdorff_content(&transformed, &whole, &one, &Threshold::Unbounded, Exec::Sequential)?;
    let report = GaugeReport {
        scales: spec.scales().values().iter().zip(&new).map(|(a, b)| (fmt_rational(a), fmt_rational(b))).collect(),
        agree: gauge_content == transformed_content,
        gauge_content,
        transformed_content,
    };
    Ok((transformed, report))
}

/// The snowflake `d^a` when every `t_l^a` is rational.
pub fn snowflake(spec: &ProductSpec, a: &BigRational) -> Result<ProductSpec> {
    if !a.is_positive() {
        return Err(Error::InvalidGauge(format!("snowflake exponent {} must be positive", fmt_rational(a))));
    }
    let t: Option<Vec<BigRational>> = spec.scales().values().iter().map(|t| exact_pow(t, a)).collect();
    let t = t.ok_or_else(|| Error::InvalidGauge(format!("t^{} is irrational on this grid", fmt_rational(a))))?;
    ProductSpec::new(spec.factors().to_vec(), ScaleSeq::new(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::ProductMeasure;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn cyl(word: &[u64]) -> Cylinder {
        Cylinder { word: word.to_vec() }
    }

    fn power(a: i64, b: i64) -> Gauge {
        Gauge::Power(frac(a, b))
    }

    fn content(spec: &ProductSpec, target: &[Cylinder], g: &Gauge, d: &Threshold) -> BigRational {
        hausdorff_content(spec, target, g, d, Exec::default()).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn whole_space_and_balls() {
        let s = ProductSpec::uniform(2, 6, &frac(1, 2)).unwrap();
        let root = [Cylinder::root()];
        for l in 0..6 {
            assert_eq!(content(&s, &root, &power(1, 1), &Threshold::Below(s.t(l).clone())), int(1));
        }
        let r = ProductSpec::reciprocal(vec![3, 2, 5, 2]).unwrap();
        for k in 0..=4 {
            let b = r.cylinders(k).pop().unwrap();
            assert_eq!(content(&r, &[b.clone()], &power(1, 1), &Threshold::Unbounded), r.t(k).clone());
            let m = hausdorff_measure(&r, &[b.clone()], &power(1, 1), true, Exec::default()).unwrap();
            assert_eq!(m.exact().unwrap(), &ball_uniform(&r, &b));
        }
    }

    fn ball_uniform(spec: &ProductSpec, b: &Cylinder) -> BigRational {
        crate::cantor::ball_measure(b, &ProductMeasure::uniform(spec))
    }

    #[test]
    fn middle_thirds_content_is_one() {
        let s = ProductSpec::uniform(2, 8, &frac(1, 3)).unwrap();
        let alpha = 2f64.ln() / 3f64.ln();
        for l in 0..8 {
            let v = hausdorff_content_f64(&s, &[Cylinder::root()], alpha, &Threshold::Below(s.t(l).clone())).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn enclosure_brackets_float() {
        let s = ProductSpec::uniform(3, 5, &frac(1, 2)).unwrap();
        let target = [cyl(&[0, 1]), cyl(&[2])];
        let c = hausdorff_content(&s, &target, &power(2, 3), &Threshold::Unbounded, Exec::default()).unwrap();
        let f = hausdorff_content_f64(&s, &target, 2.0 / 3.0, &Threshold::Unbounded).unwrap();
        assert!(to_f64(&c.lower) <= f + 1e-12 && f <= to_f64(&c.upper) + 1e-12);
        assert!(to_f64(&(&c.upper - &c.lower)) < 1e-20);
    }

    #[test]
    fn errors() {
        let s = ProductSpec::uniform(2, 3, &frac(1, 2)).unwrap();
        let g = power(1, 1);
        assert!(matches!(
            hausdorff_content(&s, &[cyl(&[0]), cyl(&[0, 1])], &g, &Threshold::Unbounded, Exec::default()),
            Err(Error::OverlappingCylinders(_))
        ));
        assert!(matches!(
            hausdorff_content(&s, &[cyl(&[0])], &power(0, 1), &Threshold::Unbounded, Exec::default()),
            Err(Error::InvalidGauge(_))
        ));
        assert!(matches!(
            hausdorff_content(&s, &[cyl(&[0])], &g, &Threshold::Below(s.t(3).clone()), Exec::default()),
            Err(Error::DepthInsufficient { .. })
        ));
        assert!(hausdorff_content(&s, &[], &g, &Threshold::Unbounded, Exec::default()).unwrap().lower.is_zero());
    }

    #[test]
    fn dimensions() {
        let tol = 1e-9;
        let third = ProductSpec::uniform(2, 10, &frac(1, 3)).unwrap();
        let d = dimension_estimate(&third, tol).unwrap();
        assert!(d.contains(2f64.ln() / 3f64.ln()) && d.hi - d.lo <= tol);
        let half = ProductSpec::uniform(2, 10, &frac(1, 2)).unwrap();
        assert!(dimension_estimate(&half, tol).unwrap().contains(1.0));
        let snow = snowflake(&half, &int(2)).unwrap();
        assert!(dimension_estimate(&snow, tol).unwrap().contains(0.5));
        assert!(snowflake_dimension(&half, 2.0, tol).unwrap().contains(0.5));
        assert!(snowflake_dimension(&third, 0.5, tol).unwrap().contains(2.0 * 2f64.ln() / 3f64.ln()));
        let bumpy = ProductSpec::new(vec![2, 2, 2], ScaleSeq::parse(&["1".into(), "1/2".into(), "1/3".into(), "1/100".into()]).unwrap()).unwrap();
        assert!(matches!(dimension_estimate(&bumpy, 1e-3), Err(Error::DepthInsufficient { .. })));
        assert!(dimension_estimate(&ProductSpec::reciprocal(vec![2, 3, 5, 7]).unwrap(), tol).unwrap().contains(1.0));
    }

    #[test]
    fn transforms() {
        let half = ProductSpec::uniform(2, 6, &frac(1, 2)).unwrap();
        let root = [Cylinder::root()];
        let (sq, report) = gauge_transform(&half, |t| t * t).unwrap();
        assert!(report.agree);
        assert_eq!(content(&sq, &root, &power(1, 2), &Threshold::Unbounded), int(1));
        assert_eq!(content(&half, &root, &power(1, 1), &Threshold::Unbounded), int(1));
        let (same, _) = gauge_transform(&half, |t| t.clone()).unwrap();
        assert_eq!(same, half);
        assert!(matches!(gauge_transform(&half, |t| -t), Err(Error::InvalidGauge(_))));
        assert!(matches!(gauge_transform(&half, |_| int(1)), Err(Error::InvalidGauge(_))));

        let odd = ProductSpec::new(vec![3, 2, 2], ScaleSeq::parse(&["1".into(), "1/2".into(), "1/5".into(), "1/7".into()]).unwrap()).unwrap();
        let h: Vec<BigRational> = (0..=3).map(|l| BigRational::new(1.into(), odd.cumulative(l).clone())).collect();
        assert_eq!(content(&odd, &root, &Gauge::Table(h), &Threshold::Unbounded), int(1));
    }

    #[test]
    fn snowflake_scales_exponents() {
        // scales 4^-l: t^(1/2) and t^2 are both rational
        let s = ProductSpec::new(vec![3, 2, 3, 2], ScaleSeq::geometric(&frac(1, 4), 4).unwrap()).unwrap();
        let target = [cyl(&[0, 1]), cyl(&[2]), cyl(&[1, 0, 2, 1])];
        for (a, alpha) in [(frac(1, 2), frac(2, 1)), (int(2), frac(1, 4)), (frac(1, 2), frac(1, 1))] {
            let flaked = snowflake(&s, &a).unwrap();
            for l in 0..4 {
                let d = Threshold::Below(s.t(l).clone());
                let d_flaked = Threshold::Below(flaked.t(l).clone());
                assert_eq!(
                    content(&flaked, &target, &Gauge::Power(alpha.clone()), &d_flaked),
                    content(&s, &target, &Gauge::Power(&alpha * &a), &d)
                );
            }
        }
        assert!(matches!(snowflake(&s, &frac(1, 3)), Err(Error::InvalidGauge(_))));
    }

    fn antichain(digits: u64, depth: usize) -> impl Strategy<Value = Vec<Cylinder>> {
        proptest::collection::vec(proptest::collection::vec(0u64..digits, 0..=depth), 0..8).prop_map(|words| {
            let mut out: Vec<Cylinder> = Vec::new();
            for w in words {
                let c = Cylinder { word: w };
                if out.iter().all(|o| !o.contains(&c) && !c.contains(o)) {
                    out.push(c);
                }
            }
            out
        })
    }

    fn brute_force(spec: &ProductSpec, target: &[Cylinder], zeta: &[BigRational], allowed: &[bool]) -> Option<BigRational> {
        // covers of the set of depth-L points under the targets, by explicit
        // enumeration of antichains of admissible cylinders
        let points: Vec<Cylinder> = spec.points().into_iter().filter(|p| target.iter().any(|t| t.contains(p))).collect();
        let candidates: Vec<Cylinder> = (0..=spec.depth())
            .filter(|&k| allowed[k])
            .flat_map(|k| spec.cylinders(k))
            .filter(|c| points.iter().any(|p| c.contains(p)))
            .collect();
        if points.is_empty() {
            return Some(BigRational::zero());
        }
        let mut best: Option<BigRational> = None;
        for mask in 0u64..(1 << candidates.len()) {
            let chosen: Vec<&Cylinder> = (0..candidates.len()).filter(|i| mask >> i & 1 == 1).map(|i| &candidates[i]).collect();
            if points.iter().all(|p| chosen.iter().any(|c| c.contains(p))) {
                let cost: BigRational = chosen.iter().map(|c| zeta[c.depth()].clone()).sum();
                if best.as_ref().is_none_or(|b| &cost < b) {
                    best = Some(cost);
                }
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn dp_matches_brute_force(target in antichain(2, 3), level in 0usize..=3, strict in any::<bool>()) {
            let s = ProductSpec::new(vec![2, 2, 2], ScaleSeq::parse(&["1".into(), "2/3".into(), "1/5".into(), "1/7".into()]).unwrap()).unwrap();
            let alpha = frac(1, 1);
            let zeta: Vec<BigRational> = s.scales().values().to_vec();
            let delta = if strict { Threshold::Below(s.t(level).clone()) } else { Threshold::AtMost(s.t(level).clone()) };
            let allowed: Vec<bool> = s.scales().values().iter().map(|t| delta.admits(t)).collect();
            let dp = hausdorff_content(&s, &target, &Gauge::Power(alpha), &delta, Exec::Sequential).ok().map(|c| c.lower);
            prop_assert_eq!(dp, brute_force(&s, &target, &zeta, &allowed));
        }

        #[test]
        fn monotone_and_additive(a in antichain(3, 3), b in antichain(3, 3)) {
            let s = ProductSpec::new(vec![3, 3, 3, 3], ScaleSeq::geometric(&frac(1, 2), 4).unwrap()).unwrap();
            let g = power(3, 2);
            // separate the two families into different first digits
            let under = |d: u64, cs: Vec<Cylinder>| -> Vec<Cylinder> {
                cs.into_iter().map(|c| Cylinder { word: std::iter::once(d).chain(c.word).collect() }).collect()
            };
            let (left, right) = (under(0, a), under(2, b));
            let both: Vec<Cylinder> = left.iter().chain(&right).cloned().collect();
            let mut prev: Option<Content> = None;
            for l in (0..4).rev() {
                // diam < 1 keeps every admissible ball inside one first digit
                let d = Threshold::Below(s.t(l).clone());
                let cl = hausdorff_content(&s, &left, &g, &d, Exec::Sequential).unwrap();
                let cr = hausdorff_content(&s, &right, &g, &d, Exec::Sequential).unwrap();
                let cb = hausdorff_content(&s, &both, &g, &d, Exec::Sequential).unwrap();
                prop_assert!(cb.lower <= &cl.upper + &cr.upper);
                prop_assert_eq!(&cb.lower, &(&cl.lower + &cr.lower));
                if let Some(p) = &prev {
                    prop_assert!(cb.lower <= p.lower);
                }
                prev = Some(cb);
            }
        }
    }
}
