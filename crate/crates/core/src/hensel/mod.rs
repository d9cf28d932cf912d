//! Root finding over Z_p: Newton/Hensel lifting in both the unit-derivative
//! and the small-derivative form, the equivalent contraction fixed point,
//! and the local scaling law `|f(x) - f(y)|_p = p^-k |x - y|_p`.

mod poly;
mod series;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::padic::{ExactAbs, PAdicInt, Valuation};
use crate::{Error, Prime, Result};

pub use poly::ZpPoly;
pub use series::{series_eval, ZpSeries};

/// Something that can be evaluated together with its derivative on Z_p
/// modulo `p^N` for any `N`.
pub trait ZpFunction: Sync {
    fn prime(&self) -> Prime;

    /// `(f(x), f'(x))` modulo `p^N`, `N` being `x`'s precision.
    fn eval_with_derivative(&self, x: &PAdicInt) -> Result<(PAdicInt, PAdicInt)>;

    /// Precision to which the function itself is known (`None`: exactly).
    fn known_precision(&self) -> Option<u32> {
        None
    }
}

pub fn eval_and_derivative<F: ZpFunction + ?Sized>(f: &F, x: &PAdicInt) -> Result<(PAdicInt, PAdicInt)> {
    f.eval_with_derivative(x)
}

/// Iterates of a lift and the residuals `|f(x_j)|_p` at the working
/// precision (0 once `f(x_j)` vanishes there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftTrace {
    pub iterates: Vec<PAdicInt>,
    pub residuals: Vec<ExactAbs>,
    pub working_precision: u32,
}

impl LiftTrace {
    pub fn steps(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    /// `|f(x_j)|_p` as exponents `e` with `|f(x_j)|_p = p^-e`; `None` marks a
    /// residual that vanished at the working precision.
    pub fn residual_exponents(&self, p: Prime) -> Vec<Option<i64>> {
        self.residuals.iter().map(|r| r.p_exponent(p).map(|e| -e)).collect()
    }

    /// `|f(x_j)|_p ≤ C |f(x_{j-1})|_p^2` at every step.
    pub fn decay_holds(&self, factor: &ExactAbs) -> bool {
        self.residuals.windows(2).all(|w| w[1] <= factor.mul(&w[0].pow(2)))
    }

    /// `|f(x_j)|_p ≤ |f(x_{j-1})|_p^2`.
    pub fn quadratic_decay_holds(&self) -> bool {
        self.decay_holds(&ExactAbs::new(num_rational::BigRational::from_integer(1.into())))
    }
}

/// A lifted root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HenselRoot {
    pub root: PAdicInt,
    /// `k` with `|f'(x0)|_p = p^-k`.
    pub k: u32,
    pub trace: LiftTrace,
}

fn derivative_exponent<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<u32> {
    let x = x0.lift(n.max(1));
    let (_, d) = f.eval_with_derivative(&x)?;
    match d.valuation() {
        Valuation::Finite(k) => Ok(k),
        Valuation::AtLeast(_) => Err(Error::HenselPreconditionFailed(format!(
            "f'(x0) vanishes modulo {}^{n}",
            f.prime()
        ))),
    }
}

fn check_prime<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<()> {
    if f.prime() != x0.p() {
        return Err(Error::PrecisionMismatch(format!("prime {} vs {}", f.prime(), x0.p())));
    }
    if n == 0 {
        return Err(Error::PrecisionMismatch("target precision must be positive".into()));
    }
    Ok(())
}

fn check_known<F: ZpFunction + ?Sized>(f: &F, needed: u32) -> Result<()> {
    match f.known_precision() {
        Some(known) if known < needed => Err(Error::PrecisionMismatch(format!(
            "coefficients known to precision {known}; {needed} needed"
        ))),
        _ => Ok(()),
    }
}

/// Newton iteration `x_j = x_{j-1} - f'(x_{j-1})^-1 f(x_{j-1})` at working
/// precision `N + k`; stops once `f(x_j) ≡ 0 (mod p^(N+k))`, which pins the
/// root modulo `p^N`.
fn newton<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32, k: u32) -> Result<HenselRoot> {
    let w = n + k;
    check_known(f, w)?;
    let mut x = x0.lift(w);
    let mut iterates = vec![];
    let mut residuals = vec![];
    for _ in 0..=(n + k + 1) {
        let (fx, dfx) = f.eval_with_derivative(&x)?;
        iterates.push(x.clone());
        residuals.push(fx.abs());
        if fx.is_zero() {
            let trace = LiftTrace { iterates, residuals, working_precision: w };
            return Ok(HenselRoot { root: x.reduce(n)?, k, trace });
        }
        if dfx.valuation() != Valuation::Finite(k) {
            return Err(Error::HenselPreconditionFailed(format!(
                "|f'(x_j)|_p drifted away from p^-{k} at {x}"
            )));
        }
        let step = fx.div_p_pow(k)?.checked_mul(&dfx.div_p_pow(k)?.inverse()?)?;
        x = x.checked_sub(&step.lift(w))?;
    }
    Err(Error::HenselPreconditionFailed("iteration did not converge".into()))
}

/// Newton lifting for `f(x0) ≡ 0 (mod p)` and `|f'(x0)|_p = 1`. The root is
/// congruent to `x0` modulo `p` and the residuals decay quadratically.
pub fn hensel_v1<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<HenselRoot> {
    check_prime(f, x0, n)?;
    let x = x0.lift(n);
    let (fx, dfx) = f.eval_with_derivative(&x)?;
    if !dfx.is_unit() {
        return Err(Error::HenselPreconditionFailed(format!("|f'(x0)|_p = {} is not 1", dfx.abs())));
    }
    if fx.valuation().lower_bound() < 1 {
        return Err(Error::HenselPreconditionFailed(format!(
            "f(x0) is not divisible by {}",
            f.prime()
        )));
    }
    newton(f, x0, n, 0)
}

/// Newton lifting under `|f(x0)|_p < |f'(x0)|_p^2`. With `|f'(x0)|_p = p^-k`
/// the root satisfies `|root - x0|_p < p^-k` and each residual is bounded by
/// `p^(2k) |f(x_{j-1})|_p^2`.
pub fn hensel_v2<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<HenselRoot> {
    check_prime(f, x0, n)?;
    let k = derivative_exponent(f, x0, n)?;
    check_v2_precondition(f, x0, k)?;
    newton(f, x0, n, k)
}

fn check_v2_precondition<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, k: u32) -> Result<()> {
    // |f(x0)| < p^-2k  iff  p^(2k+1) | f(x0)
    let x = x0.lift(2 * k + 1);
    let (fx, _) = f.eval_with_derivative(&x)?;
    if fx.valuation().lower_bound() < 2 * k + 1 {
        return Err(Error::HenselPreconditionFailed(format!(
            "|f(x0)|_p = {} is not below |f'(x0)|_p^2 = {}",
            fx.abs(),
            ExactAbs::p_power(f.prime(), 2 * k as i64)
        )));
    }
    Ok(())
}

/// The v1 lift when `|f'(x0)|_p = 1`, the v2 lift otherwise.
pub fn solve<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<HenselRoot> {
    check_prime(f, x0, n)?;
    match derivative_exponent(f, x0, n)? {
        0 => hensel_v1(f, x0, n),
        _ => hensel_v2(f, x0, n),
    }
}

/// Outcome of [`contraction_solve`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionRoot {
    pub root: PAdicInt,
    /// Fixed point `y ∈ p^(k+1) Z_p` of `g(y) = y - f'(x0)^-1 f(x0 + y)`.
    pub fixed_point: PAdicInt,
    pub k: u32,
    pub iterations: usize,
    /// `|y_{i+2} - y_{i+1}|_p ≤ p^-1 |y_{i+1} - y_i|_p` held at every step.
    pub contraction_verified: bool,
}

/// Solves `f(x) = 0` near `x0` as the fixed point of
/// `g(y) = y - f'(x0)^-1 f(x0 + y)` on `p^(k+1) Z_p`, iterating from 0.
pub fn contraction_solve<F: ZpFunction + ?Sized>(f: &F, x0: &PAdicInt, n: u32) -> Result<ContractionRoot> {
    check_prime(f, x0, n)?;
    let p = f.prime();
    let k = derivative_exponent(f, x0, n)?;
    check_v2_precondition(f, x0, k)?;
    let w = n + k;
    check_known(f, w)?;
    let x0w = x0.lift(w);
    let (_, d0) = f.eval_with_derivative(&x0w)?;
    let unit_inv = d0.div_p_pow(k)?.inverse()?;
    let g = |y: &PAdicInt| -> Result<PAdicInt> {
        let (fx, _) = f.eval_with_derivative(&x0w.checked_add(&y.lift(w))?)?;
        y.checked_sub(&fx.div_p_pow(k)?.checked_mul(&unit_inv)?)
    };
    let mut y = PAdicInt::zero(p, n);
    let mut gaps: Vec<ExactAbs> = Vec::new();
    let mut contraction_verified = true;
    let p_inv = ExactAbs::p_power(p, 1);
    for i in 0..=(n as usize + 1) {
        let next = g(&y)?;
        if next.valuation().lower_bound() < k + 1 {
            return Err(Error::HenselPreconditionFailed(format!("g left p^{}Z_p", k + 1)));
        }
        let gap = next.checked_sub(&y)?.abs();
        if let Some(prev) = gaps.last() {
            contraction_verified &= gap <= p_inv.mul(prev);
        }
        if gap.is_zero() {
            let root = x0.lift(n).checked_add(&y)?;
            return Ok(ContractionRoot { root, fixed_point: y, k, iterations: i, contraction_verified });
        }
        gaps.push(gap);
        y = next;
    }
    Err(Error::HenselPreconditionFailed("contraction did not settle".into()))
}

/// Outcome of [`local_scaling_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingReport {
    pub k: u32,
    pub checked: usize,
    /// Sample pairs `(x, y)` where `|f(x) - f(y)|_p ≠ p^-k |x - y|_p`.
    pub violations: Vec<(PAdicInt, PAdicInt)>,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples pairs in `x0 + p^(k+1) Z_p` and checks the exact scaling law
/// modulo `p^N`.
pub fn local_scaling_check<F: ZpFunction + ?Sized>(
    f: &F,
    x0: &PAdicInt,
    k: u32,
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<ScalingReport> {
    check_prime(f, x0, n)?;
    let p = f.prime();
    let actual = derivative_exponent(f, x0, n + k)
        .map_err(|_| Error::KMismatch { expected: k, found: "0".into() })?;
    if actual != k {
        return Err(Error::KMismatch {
            expected: k,
            found: ExactAbs::p_power(p, actual as i64).to_string(),
        });
    }
    let w = n + k;
    check_known(f, w)?;
    let base = x0.lift(w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modulus = PAdicInt::zero(p, n).modulus().clone();
    let mut violations = Vec::new();
    let random_point = |rng: &mut ChaCha8Rng| -> Result<PAdicInt> {
        let digits: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p.get() as u32)).collect();
        let mut r = num_bigint::BigUint::zero();
        for d in digits.iter().rev() {
            r = r * p.get() + *d;
        }
        let offset = PAdicInt::new(p, w, r % &modulus).mul_p_pow(k + 1);
        base.checked_add(&offset)
    };
    for i in 0..samples {
        let x = random_point(&mut rng)?;
        // every few samples use a close pair to probe small distances
        let y = if i % 3 == 0 {
            let m = rng.gen_range(k + 1..w.max(k + 2));
            x.checked_add(&PAdicInt::from_i64(rng.gen_range(1..p.get() as i64), p, w).mul_p_pow(m))?
        } else {
            random_point(&mut rng)?
        };
        let diff = x.checked_sub(&y)?;
        let fdiff = f.eval_with_derivative(&x)?.0.checked_sub(&f.eval_with_derivative(&y)?.0)?;
        let ok = match diff.valuation() {
            Valuation::Finite(m) if m < n => fdiff.valuation() == Valuation::Finite(m + k),
            _ => fdiff.valuation().lower_bound() >= n + k,
        };
        if !ok {
            violations.push((x.reduce(n)?, y.reduce(n)?));
        }
    }
    Ok(ScalingReport { k, checked: samples, violations })
}
