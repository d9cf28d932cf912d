//! Audits of Cantor products at finite depth: 1-Lipschitz maps and
//! isometries given by digit maps, the `Z_r` ↔ product isometry, and the
//! doubling conditions for metrics and measures.
//!
//! Every verdict is relative to the depth of the spec. A refutation carries
//! a concrete witness; a confirmation carries the constant realised so far.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cantor::{ball_measure, match_and_dist, Cylinder, ProductMeasure, ProductSpec};
use crate::radic::{level, Radix};
use crate::padic::Valuation;
use crate::rational::fmt_rational;
use crate::{Error, Exec, Result};

/// `φ_k(x)` for `k = 1..=L`, evaluated on full-depth words.
#[derive(Clone)]
pub struct DigitMapFamily {
    f: Arc<dyn Fn(usize, &[u64]) -> u64 + Send + Sync>,
}

impl std::fmt::Debug for DigitMapFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("DigitMapFamily")
    }
}

impl DigitMapFamily {
    pub fn new(f: impl Fn(usize, &[u64]) -> u64 + Send + Sync + 'static) -> Self {
        DigitMapFamily { f: Arc::new(f) }
    }

    /// `φ_k(x) = π_k(x_k)` for per-level permutations `π_k`.
    pub fn permutations(perms: Vec<Vec<u64>>) -> Self {
        Self::new(move |k, x| perms[k - 1][x[k - 1] as usize])
    }

    pub fn apply(&self, spec: &ProductSpec, x: &[u64]) -> Result<Vec<u64>> {
        (1..=spec.depth())
            .map(|k| {
                let d = (self.f)(k, x);
                if d >= spec.n(k) {
                    Err(Error::InvalidSpec(format!("φ_{k} produced digit {d} ≥ {}", spec.n(k))))
                } else {
                    Ok(d)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub one_lipschitz: bool,
    pub isometry: bool,
    pub onto: bool,
    /// A pair violating the 1-Lipschitz bound, or else one whose distance
    /// shrinks.
    pub witness: Option<(Vec<u64>, Vec<u64>)>,
}

/// Exhaustive classification over all pairs of points, up to `cap` points.
pub fn classify_map(phi: &DigitMapFamily, spec: &ProductSpec, exec: Exec, cap: usize) -> Result<MapClass> {
    let points = spec.points();
    if points.len() > cap {
        return Err(Error::OverCap { size: points.len(), cap });
    }
    let images: Vec<Vec<u64>> = points.iter().map(|x| phi.apply(spec, &x.word)).collect::<Result<_>>()?;
    let image_cyl: Vec<Cylinder> = images.iter().map(|w| Cylinder { word: w.clone() }).collect();
    let check = |strict: bool| {
        exec.find_first(points.len(), |i| {
            (0..points.len()).find_map(|j| {
                let (_, d) = match_and_dist(spec, &points[i], &points[j]).ok()?;
                let (_, dphi) = match_and_dist(spec, &image_cyl[i], &image_cyl[j]).ok()?;
                let bad = if strict { dphi != d } else { dphi > d };
                bad.then(|| (points[i].word.clone(), points[j].word.clone()))
            })
        })
    };
    let lipschitz_witness = check(false);
    let one_lipschitz = lipschitz_witness.is_none();
    let isometry_witness = if one_lipschitz { check(true) } else { None };
    let distinct: HashSet<&Vec<u64>> = images.iter().collect();
    Ok(MapClass {
        one_lipschitz,
        isometry: one_lipschitz && isometry_witness.is_none(),
        onto: distinct.len() == points.len(),
        witness: lipschitz_witness.or(isometry_witness),
    })
}

/// `ψ(a) = (θ_1(a), …, θ_L(a))` with `θ_k(a) = (a div R_{k-1}) mod r_k`, from
/// `Z/R_L` onto `∏ Z/r_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicIsometry {
    radix: Radix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometryCertificate {
    pub radix: String,
    pub modulus: u64,
    /// `Σ_{k ≤ l} θ_k(a) R_{k-1} = a mod R_l` for every `a` and `l`: the
    /// length-`l` prefix of `ψ(a)` determines and is determined by `a mod R_l`,
    /// so `ψ` matches digits exactly as far as `R_l | a - b`.
    pub level_identity: bool,
    /// `ψ^{-1}(ψ(a)) = a` for every `a`.
    pub inverse_identity: bool,
    /// Every depth-`l` cylinder has exactly `R_L / R_l` preimages.
    pub haar_uniform: bool,
    /// Pairs compared directly (`level(a - b)` against the match length).
    pub pairs_checked: u64,
    pub pairs_exhaustive: bool,
    pub distance_preserved: bool,
}

impl IsometryCertificate {
    pub fn holds(&self) -> bool {
        self.level_identity && self.inverse_identity && self.haar_uniform && self.distance_preserved
    }
}

pub fn build_radic_isometry(radix: &Radix) -> RadicIsometry {
    RadicIsometry { radix: radix.clone() }
}

impl RadicIsometry {
    pub fn radix(&self) -> &Radix {
        &self.radix
    }

    pub fn product_spec(&self) -> ProductSpec {
        ProductSpec::reciprocal(self.radix.radices().to_vec()).expect("radices are ≥ 2")
    }

    pub fn psi(&self, a: u64) -> Vec<u64> {
        let mut q = a % self.radix.modulus();
        self.radix
            .radices()
            .iter()
            .map(|&r| {
                let d = q % r;
                q /= r;
                d
            })
            .collect()
    }

    pub fn inverse(&self, word: &[u64]) -> Result<u64> {
        if word.len() != self.radix.depth() || word.iter().zip(self.radix.radices()).any(|(d, r)| d >= r) {
            return Err(Error::InvalidResidue(format!("{word:?} is not a digit word for {}", self.radix.id())));
        }
        Ok(word.iter().enumerate().map(|(k, &d)| d * self.radix.cumulative(k)).sum())
    }

    /// Calls `f(a, ψ(a))` for `a = 0, 1, …, R_L − 1`, stepping the digits
    /// like an odometer.
    pub fn for_each_word(&self, mut f: impl FnMut(u64, &[u64])) {
        let radices = self.radix.radices();
        let mut digits = vec![0u64; radices.len()];
        for a in 0..self.radix.modulus() {
            f(a, &digits);
            for (d, &r) in digits.iter_mut().zip(radices) {
                *d += 1;
                if *d < r {
                    break;
                }
                *d = 0;
            }
        }
    }

    /// Structural certificate over all of `Z/R_L`, plus direct pair checks:
    /// all pairs when `R_L² ≤ pair_budget`, otherwise `pair_budget` sampled
    /// pairs.
    pub fn certify(&self, pair_budget: u64, seed: u64) -> IsometryCertificate {
        let depth = self.radix.depth();
        let modulus = self.radix.modulus();
        let cumulative: Vec<u64> = (0..=depth).map(|l| self.radix.cumulative(l)).collect();
        let mut level_identity = true;
        let mut inverse_identity = true;
        let mut counts: Vec<Vec<u64>> = (1..=depth).map(|l| vec![0; cumulative[l] as usize]).collect();
        // a mod R_l, kept by counting rather than division
        let mut residues = vec![0u64; depth + 1];
        self.for_each_word(|a, word| {
            let mut code = 0;
            for l in 1..=depth {
                code += word[l - 1] * cumulative[l - 1];
                level_identity &= code == residues[l];
                counts[l - 1][code as usize] += 1;
            }
            for (res, &m) in residues.iter_mut().zip(&cumulative) {
                *res += 1;
                if *res == m {
                    *res = 0;
                }
            }
            // the odometer word is ψ(a): digits in range with Σ d_k R_{k-1} = a
            inverse_identity &= self.inverse(word) == Ok(a);
        });
        let haar_uniform = (1..=depth).all(|l| counts[l - 1].iter().all(|&c| c == modulus / cumulative[l]));

        let exhaustive = (modulus as u128).pow(2) <= pair_budget as u128;
        let distance_ok = |a: u64, b: u64| {
            let l = match level(a as i128 - b as i128, &self.radix) {
                Valuation::Finite(l) => l as usize,
                Valuation::AtLeast(_) => depth,
            };
            let (mut qa, mut qb, mut matched) = (a, b, 0);
            for &r in self.radix.radices() {
                if qa % r != qb % r {
                    break;
                }
                matched += 1;
                qa /= r;
                qb /= r;
            }
            matched == l
        };
        let (pairs_checked, distance_preserved) = if exhaustive {
            let ok = (0..modulus).all(|a| (0..modulus).all(|b| distance_ok(a, b)));
            (modulus * modulus, ok)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ok = (0..pair_budget).all(|_| distance_ok(rng.gen_range(0..modulus), rng.gen_range(0..modulus)));
            (pair_budget, ok)
        };
        IsometryCertificate {
            radix: self.radix.id(),
            modulus,
            level_identity,
            inverse_identity,
            haar_uniform,
            pairs_checked,
            pairs_exhaustive: exhaustive,
            distance_preserved,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Refuted,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: String,
    pub level: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    pub verdict: Verdict,
    /// Constant realised up to the spec depth.
    pub constant: String,
    pub depth: usize,
    pub witness: Option<Witness>,
    /// Named auxiliary quantities.
    pub details: Vec<(String, String)>,
}

impl DoublingReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// `m(l) = min{j : t_j ≤ t_l / 2}` when it exists within depth.
fn half_level(spec: &ProductSpec, l: usize) -> Option<usize> {
    let half = spec.t(l) / BigRational::from_integer(2.into());
    (l..=spec.depth()).find(|&j| spec.t(j) <= &half)
}

/// Metric doubling at the spec depth. Reports the factor bound
/// `max_j n_j`, the scale census `max_l #{j > l : t_j ≥ t_l / 2}` and the
/// ball constant `max_l N_{m(l)} / N_l` (the number of radius-`t_l / 2`
/// balls needed to cover a radius-`t_l` ball); with a candidate `C`, any of
/// them exceeding `C` refutes.
pub fn doubling_metric(spec: &ProductSpec, candidate: Option<u64>) -> DoublingReport {
    let depth = spec.depth();
    let (factor_level, factor_bound) = (1..=depth).map(|j| (j, spec.n(j))).max_by_key(|&(j, n)| (n, std::cmp::Reverse(j))).unwrap_or((0, 1));
    let census = |l: usize| {
        let half = spec.t(l) / BigRational::from_integer(2.into());
        (l + 1..=depth).filter(|&j| spec.t(j) >= &half).count() as u64
    };
    let (census_level, census_max) =
        (0..=depth).map(|l| (l, census(l))).max_by_key(|&(l, c)| (c, std::cmp::Reverse(l))).unwrap_or((0, 0));
    let ball = |l: usize| half_level(spec, l).map(|m| spec.cumulative(m) / spec.cumulative(l));
    let (ball_level, ball_max) = (0..=depth)
        .filter_map(|l| ball(l).map(|b| (l, b)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, BigInt::one()));
    let witness = candidate.and_then(|c| {
        if factor_bound > c {
            Some(Witness { kind: "factor".into(), level: factor_level, detail: format!("n_{factor_level} = {factor_bound} > {c}") })
        } else if census_max > c {
            Some(Witness {
                kind: "scale-census".into(),
                level: census_level,
                detail: format!("{census_max} scales in [t_{census_level}/2, t_{census_level}) > {c}"),
            })
        } else if ball_max > BigInt::from(c) {
            Some(Witness {
                kind: "ball-count".into(),
                level: ball_level,
                detail: format!("{ball_max} half-radius balls cover B_{ball_level} > {c}"),
            })
        } else {
            None
        }
    });
    DoublingReport {
        verdict: if witness.is_some() { Verdict::Refuted } else { Verdict::Holds },
        constant: ball_max.to_string(),
        depth,
        witness,
        details: vec![
            ("factor-bound".into(), factor_bound.to_string()),
            ("scale-census".into(), census_max.to_string()),
            ("ball-constant".into(), ball_max.to_string()),
        ],
    }
}

fn min_weight(mu: &ProductMeasure) -> Option<(usize, u64, BigRational)> {
    mu.weights()
        .iter()
        .enumerate()
        .flat_map(|(j, w)| w.iter().enumerate().map(move |(x, v)| (j + 1, x as u64, v.clone())))
        .min_by(|a, b| a.2.cmp(&b.2).then(a.0.cmp(&b.0)))
}

/// Measure doubling `μ(B(x, 2r)) ≤ C μ(B(x, r))` at the spec depth. The
/// constant is `max_k ∏_{j(k) < i ≤ k} 1 / min μ_i`, `B_{j(k)}` being the
/// ball of radius `2 t_k` around a depth-`k` ball.
pub fn doubling_measure(spec: &ProductSpec, mu: &ProductMeasure, candidate: Option<u64>) -> DoublingReport {
    let depth = spec.depth();
    let metric = doubling_metric(spec, candidate);
    let Some((j0, x0, c)) = min_weight(mu) else {
        return DoublingReport { verdict: Verdict::Holds, constant: "1".into(), depth, witness: None, details: vec![] };
    };
    if c.is_zero() {
        return DoublingReport {
            verdict: Verdict::Degenerate,
            constant: "inf".into(),
            depth,
            witness: Some(Witness { kind: "zero-weight".into(), level: j0, detail: format!("μ_{j0}({{{x0}}}) = 0") }),
            details: vec![],
        };
    }
    let mins: Vec<BigRational> = mu.weights().iter().map(|w| w.iter().min().unwrap().clone()).collect();
    let two = BigRational::from_integer(2.into());
    let constant = (0..=depth)
        .map(|k| {
            let doubled = spec.t(k) * &two;
            let j = (0..=k).find(|&j| spec.t(j) <= &doubled).unwrap();
            (j + 1..=k).map(|i| BigRational::one() / &mins[i - 1]).product::<BigRational>()
        })
        .max()
        .unwrap();
    let weight_witness = candidate.and_then(|cand| {
        (c < BigRational::new(1.into(), cand.into())).then(|| Witness {
            kind: "weight".into(),
            level: j0,
            detail: format!("μ_{j0}({{{x0}}}) = {} < 1/{cand}", fmt_rational(&c)),
        })
    });
    let const_witness = candidate.and_then(|cand| {
        (constant > BigRational::from_integer(cand.into())).then(|| Witness {
            kind: "measure-ratio".into(),
            level: depth,
            detail: format!("doubling ratio {} > {cand}", fmt_rational(&constant)),
        })
    });
    let witness = weight_witness.or(metric.witness.clone()).or(const_witness);
    DoublingReport {
        verdict: if witness.is_some() { Verdict::Refuted } else { Verdict::Holds },
        constant: fmt_rational(&constant),
        depth,
        witness,
        details: vec![
            ("min-weight".into(), fmt_rational(&c)),
            ("metric-constant".into(), metric.constant),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C2Report {
    /// `max μ(closed ball) / μ(open ball)` over radii `t_k`; `None` when an
    /// open ball has measure zero.
    pub ratio: Option<String>,
    pub degenerate: Option<Witness>,
}

/// `C₂ = max_j max_x 1/μ_j({x})`: the closed ball of radius `t_{k-1}` is
/// `B_{k-1}(x)` and the open one `B_k(x)`.
pub fn ratio_c2(mu: &ProductMeasure) -> C2Report {
    match min_weight(mu) {
        None => C2Report { ratio: Some("1".into()), degenerate: None },
        Some((j, x, c)) if c.is_zero() => C2Report {
            ratio: None,
            degenerate: Some(Witness { kind: "zero-weight".into(), level: j, detail: format!("μ_{j}({{{x}}}) = 0") }),
        },
        Some((_, _, c)) => C2Report { ratio: Some(fmt_rational(&(BigRational::one() / c))), degenerate: None },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformityReport {
    pub uniform: bool,
    /// `h(t_k)`, the common ball mass at depth `k`, while it exists.
    pub profile: Vec<String>,
    pub witness: Option<(Vec<u64>, Vec<u64>)>,
}

/// Whether `μ(B_k(x))` is independent of `x` at every depth.
pub fn uniform_distribution_check(spec: &ProductSpec, mu: &ProductMeasure) -> UniformityReport {
    let mut profile = vec!["1".to_string()];
    let mut word_min = vec![];
    let mut word_max = vec![];
    for k in 1..=spec.depth() {
        let w = &mu.weights()[k - 1];
        let (imin, _) = w.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).unwrap();
        let (imax, _) = w.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).unwrap();
        word_min.push(imin as u64);
        word_max.push(imax as u64);
        let lo = ball_measure(&Cylinder { word: word_min.clone() }, mu);
        let hi = ball_measure(&Cylinder { word: word_max.clone() }, mu);
        if lo != hi {
            return UniformityReport { uniform: false, profile, witness: Some((word_min, word_max)) };
        }
        profile.push(fmt_rational(&lo));
    }
    UniformityReport { uniform: true, profile, witness: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistReport {
    pub pairs_checked: usize,
    /// `dist(x, A) = dist(y, A)` whenever `d(x, y) < dist(x, A)`.
    pub locally_constant: bool,
    /// `|dist(x, A) − dist(y, A)| ≤ d(x, y)`.
    pub lipschitz: bool,
    pub witness: Option<(Vec<u64>, Vec<u64>)>,
}

/// `dist(x, A)` for a union of cylinders: 0 inside, else `t_l` for the
/// longest match `l` with some cylinder.
pub fn dist_to_union(spec: &ProductSpec, x: &Cylinder, a: &[Cylinder]) -> Result<BigRational> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(a.iter()
        .map(|c| {
            let l = c.word.iter().zip(&x.word).take_while(|(p, q)| p == q).count();
            if l == c.depth() {
                BigRational::zero()
            } else {
                spec.t(l).clone()
            }
        })
        .min()
        .unwrap())
}

/// Checks local constancy and the Lipschitz bound for `dist(·, A)` on all
/// pairs when there are at most `samples` of them, otherwise on `samples`
/// random pairs.
pub fn dist_local_constancy(
    spec: &ProductSpec,
    a: &[Cylinder],
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<DistReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let depth = spec.depth();
    let total = spec.cumulative(depth).to_usize().filter(|&n| n.checked_mul(n).is_some_and(|p| p <= samples));
    let pairs: Vec<(Cylinder, Cylinder)> = match total {
        Some(_) => {
            let pts = spec.points();
            pts.iter().flat_map(|x| pts.iter().map(move |y| (x.clone(), y.clone()))).collect()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let point = |rng: &mut ChaCha8Rng| Cylinder {
                word: (1..=depth).map(|j| rng.gen_range(0..spec.n(j))).collect(),
            };
            (0..samples)
                .map(|i| {
                    let x = point(&mut rng);
                    // half the pairs share a random prefix so that close pairs occur
                    let y = if i % 2 == 0 {
                        let keep = rng.gen_range(0..=depth);
                        let mut y = point(&mut rng);
                        y.word[..keep].copy_from_slice(&x.word[..keep]);
                        y
                    } else {
                        point(&mut rng)
                    };
                    (x, y)
                })
                .collect()
        }
    };
    let bad = exec.map_slice(&pairs, |(x, y)| {
        let dx = dist_to_union(spec, x, a).expect("A is non-empty");
        let dy = dist_to_union(spec, y, a).expect("A is non-empty");
        let (_, d) = match_and_dist(spec, x, y).expect("full-depth points");
        let constancy = !(d < dx) || dx == dy;
        let lip = if dx >= dy { &dx - &dy <= d } else { &dy - &dx <= d };
        (constancy, lip)
    });
    let first_bad = bad.iter().position(|&(c, l)| !(c && l));
    Ok(DistReport {
        pairs_checked: pairs.len(),
        locally_constant: bad.iter().all(|b| b.0),
        lipschitz: bad.iter().all(|b| b.1),
        witness: first_bad.map(|i| (pairs[i].0.word.clone(), pairs[i].1.word.clone())),
    })
}
