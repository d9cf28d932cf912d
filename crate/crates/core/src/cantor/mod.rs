//! Finite-depth Cantor products `X = ∏ X_j`, `|X_j| = n_j`, with the
//! ultrametric `d(x, y) = t_{l(x, y)}` and product measures.

mod hausdorff;
mod monotone;
mod product;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::radic::{Radix, ScaleSeq};
use crate::rational::{fmt_rational, parse_rational};
use crate::{Error, Result};

pub use hausdorff::{
    dimension_estimate, hausdorff_content, hausdorff_content_f64, hausdorff_measure,
    snowflake, snowflake_dimension, gauge_transform, Content, Dimension, Gauge, GaugeReport, Threshold,
};
pub use monotone::{
    collides, collision_characterization, monotone_image, monotone_interval, monotone_point, Tail, TailPoint,
};
pub use product::{
    measure_bound_check, product_diam, product_join, product_point, product_set_measure, BoundReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    factors: Vec<u64>,
    scales: ScaleSeq,
    cumulative: Vec<BigInt>,
}

impl ProductSpec {
    pub fn new(factors: Vec<u64>, scales: ScaleSeq) -> Result<Self> {
        if let Some(&n) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidSpec(format!("factor size {n} < 2")));
        }
        if scales.depth() != factors.len() {
            return Err(Error::InvalidSpec(format!(
                "{} scales for depth {}",
                scales.depth() + 1,
                factors.len()
            )));
        }
        let mut cumulative = vec![BigInt::one()];
        for &n in &factors {
            let next = cumulative.last().unwrap() * n;
            cumulative.push(next);
        }
        Ok(ProductSpec { factors, scales, cumulative })
    }

    /// Scales `t_l = 1/N_l`.
    pub fn reciprocal(factors: Vec<u64>) -> Result<Self> {
        let radix = Radix::new(factors.clone()).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::new(factors, ScaleSeq::reciprocal(&radix))
    }

    /// `L` factors of size `n` with `t_l = θ^l`.
    pub fn uniform(n: u64, depth: usize, theta: &BigRational) -> Result<Self> {
        Self::new(vec![n; depth], ScaleSeq::geometric(theta, depth)?)
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    /// `n_j`, 1-based.
    pub fn n(&self, j: usize) -> u64 {
        self.factors[j - 1]
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn scales(&self) -> &ScaleSeq {
        &self.scales
    }

    pub fn t(&self, l: usize) -> &BigRational {
        self.scales.get(l)
    }

    /// `N_k = n_1 ⋯ n_k`.
    pub fn cumulative(&self, k: usize) -> &BigInt {
        &self.cumulative[k]
    }

    /// True when `t_l = 1/N_l` for every `l`.
    pub fn has_reciprocal_scales(&self) -> bool {
        (0..=self.depth()).all(|l| self.t(l) * BigRational::from_integer(self.cumulative(l).clone()) == BigRational::one())
    }

    /// All cylinders of depth `k`, in lexicographic order.
    pub fn cylinders(&self, k: usize) -> Vec<Cylinder> {
        let mut words = vec![vec![]];
        for j in 1..=k {
            words = words
                .into_iter()
                .flat_map(|w: Vec<u64>| {
                    (0..self.n(j)).map(move |d| {
                        let mut w = w.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        words.into_iter().map(|word| Cylinder { word }).collect()
    }

    pub fn points(&self) -> Vec<Cylinder> {
        self.cylinders(self.depth())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors,
            "scales": self.scales.values().iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: SpecJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        parsed.build()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalesJson {
    Table(Vec<String>),
    Geometric { geometric: String },
    Reciprocal {
        #[serde(rename = "reciprocal-N")]
        reciprocal: bool,
    },
}

/// `{"factors": [...], "scales": [...] | {"geometric": "1/3"} | {"reciprocal-N": true}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecJson {
    pub factors: Vec<u64>,
    pub scales: ScalesJson,
}

impl SpecJson {
    pub fn build(&self) -> Result<ProductSpec> {
        match &self.scales {
            ScalesJson::Table(t) => ProductSpec::new(self.factors.clone(), ScaleSeq::parse(t)?),
            ScalesJson::Geometric { geometric } => {
                let theta = parse_rational(geometric)?;
                ProductSpec::new(self.factors.clone(), ScaleSeq::geometric(&theta, self.factors.len())?)
            }
            ScalesJson::Reciprocal { reciprocal: true } => ProductSpec::reciprocal(self.factors.clone()),
            ScalesJson::Reciprocal { reciprocal: false } => {
                Err(Error::InvalidSpec("\"reciprocal-N\": false names no scales".into()))
            }
        }
    }
}

/// The closed ball `B_k(x)`, identified with the digit word `x_1 … x_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: Vec<u64>,
}

impl Cylinder {
    pub fn new(spec: &ProductSpec, word: Vec<u64>) -> Result<Self> {
        if word.len() > spec.depth() {
            return Err(Error::InvalidSpec(format!("word longer than depth {}", spec.depth())));
        }
        if let Some((j, &d)) = word.iter().enumerate().find(|&(j, &d)| d >= spec.n(j + 1)) {
            return Err(Error::InvalidSpec(format!("digit {d} out of range at position {}", j + 1)));
        }
        Ok(Cylinder { word })
    }

    pub fn root() -> Self {
        Cylinder { word: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn contains(&self, other: &Cylinder) -> bool {
        other.word.starts_with(&self.word)
    }

    pub fn child(&self, d: u64) -> Cylinder {
        let mut word = self.word.clone();
        word.push(d);
        Cylinder { word }
    }

    /// `diam B_k = t_k` (every factor branches).
    pub fn diam<'a>(&self, spec: &'a ProductSpec) -> &'a BigRational {
        spec.t(self.depth())
    }
}

/// `(l(x, y), d(x, y))` for points of full depth.
pub fn match_and_dist(spec: &ProductSpec, x: &Cylinder, y: &Cylinder) -> Result<(usize, BigRational)> {
    let depth = spec.depth();
    if x.depth() != depth || y.depth() != depth {
        return Err(Error::InvalidSpec(format!("points must have depth {depth}")));
    }
    let l = x.word.iter().zip(&y.word).take_while(|(a, b)| a == b).count();
    let d = if l == depth { BigRational::zero() } else { spec.t(l).clone() };
    Ok((l, d))
}

/// Independent weights `μ_j` on each factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMeasure {
    weights: Vec<Vec<BigRational>>,
}

impl ProductMeasure {
    pub fn new(spec: &ProductSpec, weights: Vec<Vec<BigRational>>) -> Result<Self> {
        if weights.len() != spec.depth() {
            return Err(Error::InvalidSpec("one weight vector per factor expected".into()));
        }
        for (j, w) in weights.iter().enumerate() {
            if w.len() as u64 != spec.n(j + 1) {
                return Err(Error::InvalidSpec(format!("factor {} has {} weights", j + 1, w.len())));
            }
            if w.iter().any(|x| x.is_negative()) {
                return Err(Error::InvalidSpec(format!("negative weight in factor {}", j + 1)));
            }
            if w.iter().sum::<BigRational>() != BigRational::one() {
                return Err(Error::InvalidSpec(format!("weights of factor {} do not sum to 1", j + 1)));
            }
        }
        Ok(ProductMeasure { weights })
    }

    pub fn uniform(spec: &ProductSpec) -> Self {
        let weights = spec
            .factors()
            .iter()
            .map(|&n| vec![BigRational::new(BigInt::one(), BigInt::from(n)); n as usize])
            .collect();
        ProductMeasure { weights }
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    /// `μ_j({d})`, 1-based `j`.
    pub fn weight(&self, j: usize, d: u64) -> &BigRational {
        &self.weights[j - 1][d as usize]
    }

    /// Largest `μ(B)` over cylinders of depth `k`.
    pub fn max_ball(&self, k: usize) -> BigRational {
        self.weights[..k].iter().map(|w| w.iter().max().unwrap().clone()).product()
    }
}

/// `μ(B_k(x)) = ∏_{j ≤ k} μ_j({x_j})`.
pub fn ball_measure(b: &Cylinder, mu: &ProductMeasure) -> BigRational {
    b.word.iter().enumerate().map(|(j, &d)| mu.weight(j + 1, d).clone()).product()
}

/// Rejects targets in which one cylinder contains another.
pub(crate) fn check_antichain(target: &[Cylinder]) -> Result<()> {
    let mut sorted: Vec<&Cylinder> = target.iter().collect();
    sorted.sort();
    // in lexicographic order a containing cylinder immediately precedes
    // some cylinder it contains
    for w in sorted.windows(2) {
        if w[0].contains(w[1]) {
            return Err(Error::OverlappingCylinders(format!("{:?} contains {:?}", w[0].word, w[1].word)));
        }
    }
    Ok(())
}
