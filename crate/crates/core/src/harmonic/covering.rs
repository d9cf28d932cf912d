//! The three covering arguments: intervals with multiplicity at most two,
//! maximal cylinders, and Vitali's greedy selection.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cantor::Cylinder;
use crate::rational::frac;

/// The closed interval `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_str")]
    pub a: BigRational,
    #[serde(with = "crate::rational::serde_str")]
    pub b: BigRational,
}

impl Interval {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        assert!(a <= b, "empty interval");
        Interval { a, b }
    }

    pub fn contains_point(&self, x: &BigRational) -> bool {
        &self.a <= x && x <= &self.b
    }

    fn contains(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

/// Indices (in input order) of a subfamily with the same union in which no
/// point lies in more than two intervals.
pub fn interval_reduce(family: &[Interval]) -> Vec<usize> {
    // drop intervals inside another one (the earliest of equal copies stays)
    let maximal: Vec<usize> = (0..family.len())
        .filter(|&i| {
            !(0..family.len()).any(|j| {
                j != i && family[j].contains(&family[i]) && (family[j] != family[i] || j < i)
            })
        })
        .collect();
    let mut order = maximal;
    order.sort_by(|&i, &j| family[i].a.cmp(&family[j].a).then(i.cmp(&j)));
    // left endpoints and right endpoints now both increase strictly
    let mut kept = Vec::new();
    let mut pos = 0;
    while pos < order.len() {
        let start = order[pos];
        kept.push(start);
        let mut reach = family[start].b.clone();
        pos += 1;
        loop {
            // among intervals starting inside the covered stretch, take the one reaching furthest
            let mut best: Option<usize> = None;
            let mut k = pos;
            while k < order.len() && family[order[k]].a <= reach {
                if best.is_none_or(|b| family[order[k]].b > family[order[b]].b) {
                    best = Some(k);
                }
                k += 1;
            }
            match best {
                Some(b) if family[order[b]].b > reach => {
                    kept.push(order[b]);
                    reach = family[order[b]].b.clone();
                    pos = b + 1;
                }
                _ => {
                    pos = k;
                    break;
                }
            }
        }
    }
    kept.sort();
    kept
}

/// Test points: every endpoint and every midpoint between consecutive ones.
fn probe_points(families: &[&[Interval]]) -> Vec<BigRational> {
    let mut ends: Vec<BigRational> =
        families.iter().flat_map(|f| f.iter().flat_map(|i| [i.a.clone(), i.b.clone()])).collect();
    ends.sort();
    ends.dedup();
    let mids: Vec<BigRational> = ends.windows(2).map(|w| (&w[0] + &w[1]) * frac(1, 2)).collect();
    ends.extend(mids);
    ends
}

/// Largest number of intervals through one point, checked on every
/// elementary piece cut out by the endpoints.
pub fn max_multiplicity(family: &[Interval]) -> usize {
    probe_points(&[family])
        .iter()
        .map(|x| family.iter().filter(|i| i.contains_point(x)).count())
        .max()
        .unwrap_or(0)
}

pub fn same_union(f: &[Interval], g: &[Interval]) -> bool {
    probe_points(&[f, g])
        .iter()
        .all(|x| f.iter().any(|i| i.contains_point(x)) == g.iter().any(|i| i.contains_point(x)))
}

/// Indices of the inclusion-maximal cylinders (first of equal copies).
/// Two cylinders are nested or disjoint, so the result is pairwise disjoint.
pub fn ultra_ball_reduce(family: &[Cylinder]) -> Vec<usize> {
    (0..family.len())
        .filter(|&i| !(0..family.len()).any(|j| j != i && family[j].contains(&family[i]) && (family[j] != family[i] || j < i)))
        .collect()
}

/// A closed ball `[center − radius, center + radius]` on the line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBall {
    #[serde(with = "crate::rational::serde_str")]
    pub center: BigRational,
    #[serde(with = "crate::rational::serde_str")]
    pub radius: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VitaliSelection {
    /// Selected indices, in selection order.
    pub selected: Vec<usize>,
    /// `(i, j)`: ball `i` lies in the 3× dilate of selected ball `j`, whose
    /// radius is at least that of ball `i`.
    pub assignment: Vec<(usize, usize)>,
    /// Whether every assignment was checked to hold.
    pub certified: bool,
}

fn vitali<B>(
    balls: &[B],
    radius: impl Fn(&B) -> BigRational,
    meets: impl Fn(&B, &B) -> bool,
    inside_dilate: impl Fn(&B, &B) -> bool,
) -> VitaliSelection {
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&i, &j| radius(&balls[j]).cmp(&radius(&balls[i])).then(i.cmp(&j)));
    let mut selected: Vec<usize> = Vec::new();
    let mut assignment = Vec::new();
    for &i in &order {
        match selected.iter().find(|&&j| meets(&balls[i], &balls[j])) {
            Some(&j) => assignment.push((i, j)),
            None => {
                selected.push(i);
                assignment.push((i, i));
            }
        }
    }
    assignment.sort();
    let certified = assignment
        .iter()
        .all(|&(i, j)| radius(&balls[j]) >= radius(&balls[i]) && inside_dilate(&balls[i], &balls[j]));
    let disjoint = selected
        .iter()
        .enumerate()
        .all(|(a, &i)| selected[a + 1..].iter().all(|&j| !meets(&balls[i], &balls[j])));
    VitaliSelection { selected, assignment, certified: certified && disjoint }
}

/// Greedy by non-increasing radius (ties by index).
pub fn vitali_select_line(balls: &[LineBall]) -> VitaliSelection {
    vitali(
        balls,
        |b| b.radius.clone(),
        |x, y| (&x.center - &y.center).abs() <= &x.radius + &y.radius,
        |x, y| (&x.center - &y.center).abs() + &x.radius <= &y.radius * frac(3, 1),
    )
}

/// Vitali selection for cylinders with radius `t_k`: a ball meeting a larger
/// one lies inside it, so the dilation is not even needed.
pub fn vitali_select_tree(spec: &crate::cantor::ProductSpec, balls: &[Cylinder]) -> VitaliSelection {
    vitali(
        balls,
        |c| spec.t(c.depth()).clone(),
        |x, y| x.contains(y) || y.contains(x),
        |x, y| y.contains(x),
    )
}
