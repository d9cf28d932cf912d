//! Conditional expectation on finite partitions and the maximal function of
//! the martingale `f_j = E(f | P_j)` along a filtration.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cantor::ProductSpec;
use crate::rational::fmt_rational;
use crate::{Error, Result};

/// A partition of `{0, …, n−1}` into blocks, stored as a block label per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    label: Vec<usize>,
    blocks: usize,
}

impl Partition {
    pub fn new(blocks: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidSpec(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n || label[i] != usize::MAX {
                    return Err(Error::InvalidSpec(format!("point {i} is out of range or in two blocks")));
                }
                label[i] = b;
            }
        }
        if let Some(i) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidSpec(format!("point {i} is in no block")));
        }
        Ok(Partition { label, blocks: blocks.len() })
    }

    /// Consecutive runs of the given lengths.
    pub fn runs(lengths: &[usize]) -> Self {
        let label = lengths.iter().enumerate().flat_map(|(b, &l)| std::iter::repeat_n(b, l)).collect();
        Partition { label, blocks: lengths.len() }
    }

    pub fn trivial(n: usize) -> Self {
        Partition { label: vec![0; n], blocks: 1 }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { label: (0..n).collect(), blocks: n }
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.label[i]
    }

    /// Every block of `self` is a union of blocks of `finer`.
    pub fn is_refined_by(&self, finer: &Partition) -> bool {
        let mut parent = vec![usize::MAX; finer.blocks];
        finer.label.iter().zip(&self.label).all(|(&f, &c)| {
            let seen = parent[f];
            parent[f] = c;
            seen == usize::MAX || seen == c
        })
    }

    /// True when `g` is constant on every block.
    pub fn is_measurable(&self, g: &[BigRational]) -> bool {
        let mut value: Vec<Option<&BigRational>> = vec![None; self.blocks];
        self.label.iter().zip(g).all(|(&b, v)| match value[b] {
            Some(w) => w == v,
            None => {
                value[b] = Some(v);
                true
            }
        })
    }
}

/// `f_B(x) = μ(A)^{-1} ∫_A f dμ` for the block `A ∋ x`.
pub fn cond_expectation(f: &[BigRational], partition: &Partition, mu: &[BigRational]) -> Result<Vec<BigRational>> {
    if f.len() != partition.len() || mu.len() != partition.len() {
        return Err(Error::InvalidSpec("f, μ and the partition differ in size".into()));
    }
    let mut mass = vec![BigRational::zero(); partition.blocks];
    let mut integral = vec![BigRational::zero(); partition.blocks];
    for ((&b, f), m) in partition.label.iter().zip(f).zip(mu) {
        mass[b] += m;
        integral[b] += f * m;
    }
    if let Some(b) = mass.iter().position(|m| !m.is_positive()) {
        return Err(Error::DegeneratePartition(format!("block {b} has μ-mass {}", fmt_rational(&mass[b]))));
    }
    let avg: Vec<BigRational> = integral.iter().zip(&mass).map(|(i, m)| i / m).collect();
    Ok(partition.label.iter().map(|&b| avg[b].clone()).collect())
}

/// Partitions `P_1, …, P_n`, each refining the previous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    levels: Vec<Partition>,
}

impl Filtration {
    pub fn new(levels: Vec<Partition>) -> Result<Self> {
        if levels.windows(2).any(|w| w[0].len() != w[1].len() || !w[0].is_refined_by(&w[1])) {
            return Err(Error::InvalidSpec("each partition must refine the previous one".into()));
        }
        Ok(Filtration { levels })
    }

    /// `P_j` = the depth-`j` cylinders, `j = 1..=L`.
    pub fn cylinders(spec: &ProductSpec) -> Self {
        let n = spec.points().len();
        let levels = (1..=spec.depth())
            .map(|j| {
                let size = n / spec.cylinders(j).len();
                Partition::runs(&vec![size; n / size])
            })
            .collect();
        Filtration { levels }
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoobCheck {
    pub level: usize,
    /// `μ(A_l(t))`, `A_l(t) = {f_l^* > t}`.
    pub lhs: String,
    /// `t^{-1} ∫_{A_l(t)} |f| dμ`.
    pub middle: String,
    /// `t^{-1} ∫ |f| dμ`.
    pub rhs: String,
    /// `A_l(t)` is a union of `P_l` blocks.
    pub measurable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MartingaleReport {
    /// `f_j`, one vector per level.
    pub martingale: Vec<Vec<BigRational>>,
    /// `f_l^* = max_{j ≤ l} |f_j|`.
    pub maximal: Vec<Vec<BigRational>>,
    pub doob: Vec<DoobCheck>,
}

impl MartingaleReport {
    pub fn holds(&self) -> bool {
        self.doob.iter().all(|d| d.holds && d.measurable)
    }
}

/// Computes the martingale, its running maxima and checks
/// `μ(A_l(t)) ≤ t^{-1} ∫_{A_l(t)} |f| ≤ t^{-1} ∫ |f|` at every level.
pub fn martingale_maximal(
    f: &[BigRational],
    filtration: &Filtration,
    mu: &[BigRational],
    t: &BigRational,
) -> Result<MartingaleReport> {
    if !t.is_positive() {
        return Err(Error::InvalidSpec("t must be positive".into()));
    }
    let martingale: Vec<Vec<BigRational>> =
        filtration.levels.iter().map(|p| cond_expectation(f, p, mu)).collect::<Result<_>>()?;
    let mut maximal: Vec<Vec<BigRational>> = Vec::new();
    for fj in &martingale {
        let next = match maximal.last() {
            Some(prev) => prev.iter().zip(fj).map(|(m, v)| m.clone().max(v.abs())).collect(),
            None => fj.iter().map(|v| v.abs()).collect(),
        };
        maximal.push(next);
    }
    let total: BigRational = f.iter().zip(mu).map(|(f, m)| f.abs() * m).sum();
    let doob = maximal
        .iter()
        .enumerate()
        .map(|(l, star)| {
            let in_a: Vec<bool> = star.iter().map(|v| v > t).collect();
            let lhs: BigRational = mu.iter().zip(&in_a).filter(|(_, &a)| a).map(|(m, _)| m.clone()).sum();
            let inside: BigRational =
                f.iter().zip(mu).zip(&in_a).filter(|(_, &a)| a).map(|((f, m), _)| f.abs() * m).sum();
            let middle = inside / t;
            let rhs = &total / t;
            let indicator: Vec<BigRational> = in_a.iter().map(|&a| BigRational::from_integer((a as u8).into())).collect();
            DoobCheck {
                level: l + 1,
                holds: lhs <= middle && middle <= rhs,
                measurable: filtration.levels[l].is_measurable(&indicator),
                lhs: fmt_rational(&lhs),
                middle: fmt_rational(&middle),
                rhs: fmt_rational(&rhs),
            }
        })
        .collect();
    Ok(MartingaleReport { martingale, maximal, doob })
}
