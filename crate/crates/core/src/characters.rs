//! Characters with values in Q/Z ("turns"): cyclic groups, truncated Z_p
//! and Z_r, the exponential E_p on Q_p, and finite products.
//!
//! Every equality below is decided on exact turns. Complex numbers appear
//! only in the float cross-checks and CSV output.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::padic::{PAdicInt, PAdicScalar};
use crate::radic::{Radix, RadicInt};
use crate::rational::fmt_rational;
use crate::{Error, Exec, Prime, Result};

pub const DEFAULT_TABLE_CAP: u64 = 4096;

/// An element of Q/Z, kept as the representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TurnValue(BigRational);

impl TurnValue {
    pub fn new(q: BigRational) -> Self {
        let f = &q - q.floor();
        TurnValue(f)
    }

    pub fn zero() -> Self {
        TurnValue(BigRational::zero())
    }

    /// `num / den` mod 1.
    pub fn ratio(num: i128, den: u64) -> Self {
        assert!(den > 0);
        let r = num.rem_euclid(den as i128);
        TurnValue(BigRational::new(BigInt::from(r), BigInt::from(den)))
    }

    pub fn fraction(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.0)
    }

    /// `exp(2πi q)` as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.0.numer().to_f64().unwrap_or(0.0);
        let d = self.0.denom().to_f64().unwrap_or(1.0);
        unit_circle(n, d)
    }
}

impl fmt::Display for TurnValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

// Evaluates in the octant nearest the axes so that quarter turns come out
// exact.
fn unit_circle(num: f64, den: f64) -> (f64, f64) {
    let q = num / den;
    let angle = TAU * q;
    if (4.0 * num) % den == 0.0 {
        match ((4.0 * num / den) as i64).rem_euclid(4) {
            0 => return (1.0, 0.0),
            1 => return (0.0, 1.0),
            2 => return (-1.0, 0.0),
            _ => return (0.0, -1.0),
        }
    }
    let (s, c) = angle.sin_cos();
    (c, s)
}

/// `a ↦ j·a/n` on Z/nZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicCharacter {
    n: u64,
    j: u64,
}

impl CyclicCharacter {
    pub fn new(n: u64, j: i128) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("modulus must be positive".into()));
        }
        Ok(CyclicCharacter { n, j: j.rem_euclid(n as i128) as u64 })
    }

    pub fn trivial(n: u64) -> Self {
        CyclicCharacter { n, j: 0 }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.j
    }

    /// Numerator of the turn over `n`.
    pub fn numerator(&self, a: i128) -> u64 {
        ((self.j as i128 * a.rem_euclid(self.n as i128)) % self.n as i128) as u64
    }
}

pub fn cyclic_eval(chi: &CyclicCharacter, a: i128) -> TurnValue {
    TurnValue::ratio(chi.numerator(a) as i128, chi.n)
}

/// `E_p(x)`: the turn given by the negative-exponent digits of `x`.
pub fn ep_eval(x: &PAdicScalar) -> Result<TurnValue> {
    Ok(TurnValue::new(x.fractional_part()?))
}

/// `φ_y(x) = E_p(xy)` with `y = residue / p^k`, determined modulo Z_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicCharacter {
    p: Prime,
    k: u32,
    y: BigUint,
}

impl PadicCharacter {
    pub fn new(p: Prime, k: u32, y: BigUint) -> Self {
        let pk = BigUint::from(p.get()).pow(k);
        PadicCharacter { p, k, y: y % pk }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn residue(&self) -> &BigUint {
        &self.y
    }

    pub fn is_trivial(&self) -> bool {
        self.y.is_zero()
    }

    /// `y` as a rational in `p^{-k} Z ∩ [0, 1)`.
    pub fn parameter(&self) -> BigRational {
        BigRational::new(BigInt::from(self.y.clone()), BigInt::from(BigUint::from(self.p.get()).pow(self.k)))
    }

    /// The exponent `c` with `ker φ_y ∩ Z_p = p^c Z_p`, i.e. `|y|_p = p^c`
    /// (zero when `y ∈ Z_p`).
    pub fn kernel(&self) -> u32 {
        if self.y.is_zero() {
            return 0;
        }
        let p = BigUint::from(self.p.get());
        let mut v = 0;
        let mut y = self.y.clone();
        while (&y % &p).is_zero() {
            y /= &p;
            v += 1;
        }
        self.k - v
    }

    pub fn phi_y(&self, x: &PAdicScalar) -> Result<TurnValue> {
        if self.y.is_zero() {
            return Ok(TurnValue::zero());
        }
        if x.p() != self.p {
            return Err(Error::InvalidSpec(format!("character over Q_{} applied to Q_{}", self.p, x.p())));
        }
        let prec = match x {
            PAdicScalar::Nonzero { unit, .. } => unit.precision(),
            PAdicScalar::Zero { .. } => self.k.max(1),
        };
        let y = PAdicScalar::from_rational(&self.parameter(), self.p, prec.max(1));
        ep_eval(&x.checked_mul(&y)?)
    }

    /// On `Z_p`, the value depends on `x mod p^k` only.
    pub fn eval_int(&self, x: &PAdicInt) -> Result<TurnValue> {
        if x.p() != self.p {
            return Err(Error::InvalidSpec(format!("character over Z_{} applied to Z_{}", self.p, x.p())));
        }
        if x.precision() < self.k {
            return Err(Error::PrecisionMismatch(format!(
                "{} digits needed, {} known",
                self.k,
                x.precision()
            )));
        }
        let pk = BigUint::from(self.p.get()).pow(self.k);
        let num = (x.residue() * &self.y) % &pk;
        Ok(TurnValue::new(BigRational::new(BigInt::from(num), BigInt::from(pk))))
    }
}

/// All characters of Z_p trivial on `p^k Z_p`, one per residue of `y`.
pub fn zp_characters(p: Prime, k: u32, cap: u64) -> Result<Vec<PadicCharacter>> {
    let size = p.get().checked_pow(k).filter(|&s| s <= cap).ok_or(Error::OverCap {
        size: usize::MAX,
        cap: cap as usize,
    })?;
    Ok((0..size).map(|y| PadicCharacter::new(p, k, BigUint::from(y))).collect())
}

/// A character of Z_r trivial on `Y_n`, written as `ψ ∘ π_n` with ψ a
/// character of `Z / R_n Z`.
#[derive(Debug, Clone)]
pub struct RadicCharacter {
    pub n: usize,
    pub psi: CyclicCharacter,
}

impl RadicCharacter {
    pub fn eval(&self, x: &RadicInt) -> Result<TurnValue> {
        let rn = x.radix().cumulative(self.n);
        if rn != self.psi.modulus() {
            return Err(Error::InvalidSpec(format!("R_{} = {} but ψ has modulus {}", self.n, rn, self.psi.modulus())));
        }
        Ok(cyclic_eval(&self.psi, (x.residue() % rn) as i128))
    }
}

pub fn zr_characters(radix: &Radix, n: usize, cap: u64) -> Result<Vec<RadicCharacter>> {
    if n > radix.depth() {
        return Err(Error::InvalidSpec(format!("level {n} beyond radix depth {}", radix.depth())));
    }
    let rn = radix.cumulative(n);
    if rn > cap {
        return Err(Error::OverCap { size: rn as usize, cap: cap as usize });
    }
    Ok((0..rn)
        .map(|j| RadicCharacter { n, psi: CyclicCharacter { n: rn, j } })
        .collect())
}

/// The full table of `Z/nZ`: row `j`, column `a` holds `j·a/n`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    n: u64,
}

impl CharacterTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn character(&self, j: u64) -> CyclicCharacter {
        CyclicCharacter { n: self.n, j: j % self.n }
    }

    pub fn turn(&self, j: u64, a: u64) -> TurnValue {
        cyclic_eval(&self.character(j), a as i128)
    }

    pub fn rows(&self) -> Vec<Vec<TurnValue>> {
        (0..self.n).map(|j| (0..self.n).map(|a| self.turn(j, a)).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|j| (0..self.n).map(|a| self.turn(j, a).to_string()).collect())
            .collect();
        json!({ "n": self.n, "turns": rows })
    }

    /// One line per character, `re,im` pairs separated by commas.
    pub fn to_csv(&self) -> String {
        let circle = circle_table(self.n);
        let mut out = String::new();
        for j in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|a| {
                    let (re, im) = circle[((j * a) % self.n) as usize];
                    format!("{re:.17e},{im:.17e}")
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn character_table(n: u64, cap: u64) -> Result<CharacterTable> {
    if n == 0 {
        return Err(Error::InvalidSpec("modulus must be positive".into()));
    }
    if n > cap {
        return Err(Error::OverCap { size: n as usize, cap: cap as usize });
    }
    Ok(CharacterTable { n })
}

fn circle_table(n: u64) -> Vec<(f64, f64)> {
    (0..n).map(|k| unit_circle(k as f64, n as f64)).collect()
}

/// How `Σ_a e(d·a/n)` was decided: either every turn is 0 (the sum is
/// `n`), or the turns run over all `m`-th roots of unity, each hit equally
/// often, so the sum vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SumCertificate {
    Full,
    Vanishes { order: u64, multiplicity: u64 },
    Undecided,
}

impl SumCertificate {
    pub fn value(&self, n: u64) -> Option<BigRational> {
        match self {
            SumCertificate::Full => Some(BigRational::from_integer(BigInt::from(n))),
            SumCertificate::Vanishes { .. } => Some(BigRational::zero()),
            SumCertificate::Undecided => None,
        }
    }
}

/// Certifies `Σ_{a mod n} e(d·a/n)` by counting the exact turns.
pub fn character_sum(n: u64, d: u64) -> SumCertificate {
    let d = d % n;
    if d == 0 {
        return SumCertificate::Full;
    }
    let g = d.gcd(&n);
    let m = n / g;
    let mut counts = vec![0u64; m as usize];
    for a in 0..n {
        let num = (d as u128 * a as u128 % n as u128) as u64;
        // num/n reduces to (num/g)/m
        if num % g != 0 {
            return SumCertificate::Undecided;
        }
        counts[(num / g) as usize] += 1;
    }
    if m > 1 && counts.iter().all(|&c| c == g) {
        SumCertificate::Vanishes { order: m, multiplicity: g }
    } else {
        SumCertificate::Undecided
    }
}

/// `⟨χ_j, χ_{j'}⟩ = (1/n) Σ_a e((j - j')a/n)`, decided exactly.
pub fn inner_product_exact(n: u64, j: u64, jp: u64) -> Option<BigRational> {
    let d = (j + n - jp % n) % n;
    character_sum(n, d).value(n).map(|s| s / BigRational::from_integer(BigInt::from(n)))
}

/// The Gram matrix on exact turns. Entries depend on `j - j'` only, so each
/// difference is certified once.
pub fn gram_exact(n: u64, cap: u64, exec: Exec) -> Result<Vec<Vec<Option<BigRational>>>> {
    character_table(n, cap)?;
    let by_diff = exec.map_range(n as usize, |d| {
        character_sum(n, d as u64)
            .value(n)
            .map(|s| s / BigRational::from_integer(BigInt::from(n)))
    });
    Ok((0..n)
        .map(|j| (0..n).map(|jp| by_diff[((j + n - jp) % n) as usize].clone()).collect())
        .collect())
}

/// True when every exact Gram entry is decided and equals `δ_{jj'}`.
pub fn gram_exact_is_identity(n: u64, cap: u64, exec: Exec) -> Result<bool> {
    character_table(n, cap)?;
    let ok = exec.all(n as usize, |d| match character_sum(n, d as u64) {
        SumCertificate::Full => d == 0,
        SumCertificate::Vanishes { .. } => d != 0,
        SumCertificate::Undecided => false,
    });
    Ok(ok)
}

/// The float Gram matrix, every entry an honest `n`-term inner product.
pub fn gram_float(n: u64, cap: u64, exec: Exec) -> Result<Vec<Vec<(f64, f64)>>> {
    character_table(n, cap)?;
    let circle = circle_table(n);
    Ok(exec.map_range(n as usize, |j| {
        (0..n).map(|jp| float_inner(&circle, n, j as u64, jp)).collect()
    }))
}

fn float_inner(circle: &[(f64, f64)], n: u64, j: u64, jp: u64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    for a in 0..n {
        let (x, y) = circle[((j * a) % n) as usize];
        let (u, v) = circle[((jp * a) % n) as usize];
        // x·conj(u)
        re += x * u + y * v;
        im += y * u - x * v;
    }
    (re / n as f64, im / n as f64)
}

/// `max |G - I|` over the float Gram matrix.
pub fn gram_float_error(n: u64, cap: u64, exec: Exec) -> Result<f64> {
    let g = gram_float(n, cap, exec)?;
    Ok(g.iter()
        .enumerate()
        .flat_map(|(j, row)| {
            row.iter().enumerate().map(move |(jp, &(re, im))| {
                let target = if j == jp { 1.0 } else { 0.0 };
                (re - target).abs().max(im.abs())
            })
        })
        .fold(0.0, f64::max))
}

/// `max_d |⟨χ_0, χ_d⟩ - δ_{0d}|`: the first row of the float Gram matrix,
/// which fixes the rest by translation invariance.
pub fn gram_float_row_error(n: u64, cap: u64) -> Result<f64> {
    character_table(n, cap)?;
    let circle = circle_table(n);
    Ok((0..n)
        .map(|d| {
            let (re, im) = float_inner(&circle, n, d, 0);
            let target = if d == 0 { 1.0 } else { 0.0 };
            (re - target).abs().max(im.abs())
        })
        .fold(0.0, f64::max))
}

/// `∫ |χ_j - χ_{j'}|² dH = 2 - 2 Re⟨χ_j, χ_{j'}⟩`, exact.
pub fn l2_distance_sq_exact(n: u64, j: u64, jp: u64) -> Option<BigRational> {
    let ip = inner_product_exact(n, j, jp)?;
    Some(BigRational::from_integer(BigInt::from(2)) * (BigRational::one() - ip))
}

/// The same integral summed directly in floating point.
pub fn l2_distance_sq_float(n: u64, j: u64, jp: u64) -> f64 {
    let circle = circle_table(n);
    let s: f64 = (0..n)
        .map(|a| {
            let (x, y) = circle[((j * a) % n) as usize];
            let (u, v) = circle[((jp * a) % n) as usize];
            (x - u).powi(2) + (y - v).powi(2)
        })
        .sum();
    s / n as f64
}

/// A point where two characters of `Z/nZ` differ by more than 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub a: u64,
    /// `(j - j')a/n mod 1`, which lies strictly between 1/6 and 5/6.
    pub turn: TurnValue,
    pub distance: f64,
}

/// `|1 - e(θ)| > 1` exactly when `θ ∈ (1/6, 5/6)`; the witness is chosen
/// on exact turns, the distance is reported as a float.
pub fn separation_witness(n: u64, j: u64, jp: u64) -> Option<Separation> {
    let d = (j % n + n - jp % n) % n;
    (0..n).find_map(|a| {
        let num = d * a % n;
        (6 * num > n && 6 * num < 5 * n).then(|| {
            let (x, y) = unit_circle(num as f64, n as f64);
            Separation {
                a,
                turn: TurnValue::ratio(num as i128, n),
                distance: ((1.0 - x).powi(2) + y * y).sqrt(),
            }
        })
    })
}

/// `sup_a |χ_j(a) - χ_{j'}(a)|` in floating point.
pub fn sup_distance(n: u64, j: u64, jp: u64) -> f64 {
    let circle = circle_table(n);
    (0..n)
        .map(|a| {
            let (x, y) = circle[((j * a) % n) as usize];
            let (u, v) = circle[((jp * a) % n) as usize];
            ((x - u).powi(2) + (y - v).powi(2)).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Orthogonal characters span the level-`k` locally constant functions on
/// Z_p: the `p^k` characters have identity Gram matrix, hence rank `p^k`.
pub fn level_span_dimension(p: Prime, k: u32, cap: u64, exec: Exec) -> Result<u64> {
    let chars = zp_characters(p, k, cap)?;
    let n = chars.len() as u64;
    if gram_exact_is_identity(n, cap, exec)? {
        Ok(n)
    } else {
        Err(Error::InvalidSpec(format!("Gram matrix on Z/{n} not certified")))
    }
}

/// `x ↦ Σ_i φ_i(x_i)` on `Π Z/n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductCharacter {
    pub factors: Vec<CyclicCharacter>,
}

pub fn product_character(factors: Vec<CyclicCharacter>) -> ProductCharacter {
    ProductCharacter { factors }
}

impl ProductCharacter {
    pub fn moduli(&self) -> Vec<u64> {
        self.factors.iter().map(|c| c.modulus()).collect()
    }

    pub fn eval(&self, x: &[i128]) -> Result<TurnValue> {
        if x.len() != self.factors.len() {
            return Err(Error::InvalidSpec(format!(
                "point has {} coordinates, product has {} factors",
                x.len(),
                self.factors.len()
            )));
        }
        Ok(self
            .factors
            .iter()
            .zip(x)
            .fold(TurnValue::zero(), |acc, (c, &a)| acc.add(&cyclic_eval(c, a))))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|c| c.exponent() == 0)
    }
}

/// Points of `Π Z/n_i` in lexicographic order.
pub fn group_elements(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in moduli {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    pub order: u64,
    /// Maps `G → Q/Z` obeying the homomorphism law on all of `G × G`.
    pub homomorphisms: usize,
    pub products: usize,
    pub all_factor: bool,
}

/// Enumerates every candidate homomorphism of `Π Z/n_i` (generator images
/// in `(1/|G|)Z/Z`, extended additively), keeps those satisfying the law on
/// all pairs, and compares their tables with the product characters.
pub fn product_factorization_check(moduli: &[u64], cap: u64) -> Result<FactorizationReport> {
    if moduli.iter().any(|&n| n == 0) {
        return Err(Error::InvalidSpec("moduli must be positive".into()));
    }
    let order: u64 = moduli.iter().product();
    if order > cap {
        return Err(Error::OverCap { size: order as usize, cap: cap as usize });
    }
    let points = group_elements(moduli);
    let index = |x: &[u64]| x.iter().zip(moduli).fold(0u64, |acc, (&a, &n)| acc * n + a) as usize;
    let add = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).zip(moduli).map(|((a, b), n)| (a + b) % n).collect() };

    let mut homs = std::collections::BTreeSet::new();
    for images in group_elements(&vec![order; moduli.len()]) {
        // numerators over |G|; a generator of order n_i needs n_i·t_i ∈ Z
        let table: Vec<u64> = points
            .iter()
            .map(|x| x.iter().zip(&images).map(|(&a, &t)| a * t).sum::<u64>() % order)
            .collect();
        let law = points.iter().all(|x| {
            points.iter().all(|y| (table[index(x)] + table[index(y)]) % order == table[index(&add(x, y))])
        });
        if law {
            homs.insert(table);
        }
    }

    let mut products = std::collections::BTreeSet::new();
    for exps in group_elements(moduli) {
        let chi = product_character(
            exps.iter().zip(moduli).map(|(&j, &n)| CyclicCharacter { n, j }).collect(),
        );
        let table: Vec<u64> = points
            .iter()
            .map(|x| {
                let t = chi.eval(&x.iter().map(|&a| a as i128).collect::<Vec<_>>()).expect("arity");
                (t.fraction() * BigRational::from_integer(BigInt::from(order)))
                    .to_integer()
                    .to_u64()
                    .expect("turn denominators divide |G|")
            })
            .collect();
        products.insert(table);
    }
    Ok(FactorizationReport {
        order,
        homomorphisms: homs.len(),
        products: products.len(),
        all_factor: homs == products && homs.len() as u64 == order,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let chi = CyclicCharacter::new(4, 1).unwrap();
        assert_eq!(cyclic_eval(&chi, 1).fraction(), &frac(1, 4));
        assert_eq!(cyclic_eval(&chi, 1).to_complex(), (0.0, 1.0));
        let sign = CyclicCharacter::new(2, 1).unwrap();
        assert_eq!(cyclic_eval(&sign, 1).to_complex(), (-1.0, 0.0));
        for a in -5..5 {
            assert!(cyclic_eval(&CyclicCharacter::trivial(7), a).is_zero());
        }
        assert_eq!(CyclicCharacter::new(5, -1).unwrap().exponent(), 4);
    }

    #[test]
    fn ep_examples() {
        let x = PAdicScalar::from_rational(&frac(1, 2), p(2), 8);
        assert_eq!(ep_eval(&x).unwrap().fraction(), &frac(1, 2));
        let x = PAdicScalar::from_rational(&frac(5, 4), p(2), 8);
        assert_eq!(ep_eval(&x).unwrap().fraction(), &frac(1, 4));
        for n in [-7, 0, 3, 12] {
            assert!(ep_eval(&PAdicScalar::from_i64(n, p(3), 6)).unwrap().is_zero());
        }
        // 1/3 in Q_2 is a 2-adic integer
        assert!(ep_eval(&PAdicScalar::from_rational(&frac(1, 3), p(2), 8)).unwrap().is_zero());
    }

    #[test]
    fn kernel_of_half() {
        let chi = PadicCharacter::new(p(2), 1, BigUint::from(1u32));
        assert_eq!(chi.kernel(), 1);
        for r in 0..8i64 {
            let x = PAdicInt::from_i64(r, p(2), 3);
            assert_eq!(chi.eval_int(&x).unwrap().is_zero(), r % 2 == 0, "r = {r}");
            let xs = PAdicScalar::from_i64(r, p(2), 3);
            assert_eq!(chi.phi_y(&xs).unwrap(), chi.eval_int(&x).unwrap());
        }
    }

    #[test]
    fn integral_parameter_is_trivial() {
        // y = 3 ∈ Z_3 written with k = 2: residue 9·3 ≡ 0 mod 9
        let chi = PadicCharacter::new(p(3), 2, BigUint::from(27u32));
        assert!(chi.is_trivial());
        assert_eq!(chi.kernel(), 0);
        for r in 0..27 {
            assert!(chi.eval_int(&PAdicInt::from_i64(r, p(3), 3)).unwrap().is_zero());
        }
        let zero = PadicCharacter::new(p(5), 0, BigUint::zero());
        assert!(zero.phi_y(&PAdicScalar::from_rational(&frac(1, 25), p(5), 4)).unwrap().is_zero());
    }

    #[test]
    fn zp_character_count() {
        for (q, k) in [(2, 3), (3, 2), (5, 2), (7, 1)] {
            let chars = zp_characters(p(q), k, DEFAULT_TABLE_CAP).unwrap();
            let n = q.pow(k);
            assert_eq!(chars.len() as u64, n);
            let tables: std::collections::HashSet<Vec<TurnValue>> = chars
                .iter()
                .map(|c| (0..n as i64).map(|r| c.eval_int(&PAdicInt::from_i64(r, p(q), k)).unwrap()).collect())
                .collect();
            assert_eq!(tables.len() as u64, n);
            // trivial on p^k Z_p: x and x + p^k agree
            for c in &chars {
                for r in 0..n as i64 {
                    let x = PAdicInt::from_i64(r, p(q), k + 2);
                    let y = PAdicInt::from_i64(r + n as i64 * 5, p(q), k + 2);
                    assert_eq!(c.eval_int(&x).unwrap(), c.eval_int(&y).unwrap());
                }
            }
            assert_eq!(level_span_dimension(p(q), k, DEFAULT_TABLE_CAP, Exec::default()).unwrap(), n);
        }
        assert!(matches!(zp_characters(p(2), 13, DEFAULT_TABLE_CAP), Err(Error::OverCap { .. })));
    }

    #[test]
    fn zr_characters_factor_through_projection() {
        let radix = Arc::new(Radix::new(vec![2, 3, 2]).unwrap());
        let chars = zr_characters(&radix, 2, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(chars.len(), 6);
        for c in &chars {
            for a in 0..12u64 {
                let x = RadicInt::new(radix.clone(), a).unwrap();
                let y = RadicInt::new(radix.clone(), (a + 6) % 12).unwrap();
                assert_eq!(c.eval(&x).unwrap(), c.eval(&y).unwrap());
            }
        }
    }

    #[test]
    fn gram_examples() {
        let exec = Exec::default();
        let g = gram_exact(4, DEFAULT_TABLE_CAP, exec).unwrap();
        for j in 0..4 {
            for jp in 0..4 {
                let want = if j == jp { BigRational::one() } else { BigRational::zero() };
                assert_eq!(g[j][jp].as_ref(), Some(&want));
            }
        }
        let one = character_table(1, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(one.rows(), vec![vec![TurnValue::zero()]]);
        assert!(gram_float_error(12, DEFAULT_TABLE_CAP, exec).unwrap() < 1e-12);
        assert!(matches!(character_table(4097, DEFAULT_TABLE_CAP), Err(Error::OverCap { .. })));
    }

    #[test]
    fn distinct_characters_are_far_apart() {
        for n in 2..=16 {
            for j in 0..n {
                for jp in 0..n {
                    if j == jp {
                        continue;
                    }
                    assert_eq!(l2_distance_sq_exact(n, j, jp), Some(BigRational::from_integer(2.into())));
                    assert!((l2_distance_sq_float(n, j, jp) - 2.0).abs() < 1e-12);
                    let w = separation_witness(n, j, jp).unwrap();
                    assert!(w.distance > 1.0 + 1e-9);
                    assert!(sup_distance(n, j, jp) > 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn products_exhaust_characters() {
        let r = product_factorization_check(&[2, 3], 64).unwrap();
        assert_eq!(r, FactorizationReport { order: 6, homomorphisms: 6, products: 6, all_factor: true });
        let r = product_factorization_check(&[2, 2, 2], 64).unwrap();
        assert!(r.all_factor);
        let triv = product_character(vec![CyclicCharacter::trivial(2), CyclicCharacter::trivial(3)]);
        assert!(triv.eval(&[1, 2]).unwrap().is_zero());
        assert!(triv.is_trivial());
    }

    #[test]
    fn table_outputs() {
        let t = character_table(2, DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(t.to_json(), json!({"n": 2, "turns": [["0", "0"], ["0", "1/2"]]}));
        assert_eq!(t.to_csv().lines().count(), 2);
    }

    proptest! {
        #[test]
        fn cyclic_homomorphism(n in 1u64..200, j in 0i128..500, a in -1000i128..1000, b in -1000i128..1000) {
            let chi = CyclicCharacter::new(n, j).unwrap();
            prop_assert_eq!(cyclic_eval(&chi, a + b), cyclic_eval(&chi, a).add(&cyclic_eval(&chi, b)));
            let (re, im) = cyclic_eval(&chi, a).to_complex();
            prop_assert!(((re * re + im * im).sqrt() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ep_homomorphism(a in -500i64..500, b in -500i64..500, ea in 0u32..5, eb in 0u32..5) {
            let x = frac(a, 3i64.pow(ea));
            let y = frac(b, 3i64.pow(eb));
            let px = PAdicScalar::from_rational(&x, p(3), 12);
            let py = PAdicScalar::from_rational(&y, p(3), 12);
            let sum = PAdicScalar::from_rational(&(&x + &y), p(3), 12);
            prop_assert_eq!(ep_eval(&sum).unwrap(), ep_eval(&px).unwrap().add(&ep_eval(&py).unwrap()));
        }

        #[test]
        fn character_sums_certified(n in 1u64..300, d in 0u64..300) {
            let c = character_sum(n, d);
            prop_assert_ne!(&c, &SumCertificate::Undecided);
            prop_assert_eq!(c == SumCertificate::Full, d % n == 0);
        }
    }
}
