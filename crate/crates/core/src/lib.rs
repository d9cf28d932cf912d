//! Exact arithmetic for p-adic and r-adic integers, Hensel lifting, and
//! finite-depth analysis on ultrametric Cantor products.
//!
//! Every quantity that the underlying inequalities talk about (absolute
//! values, measures, maximal functions, conditional expectations, character
//! values) is kept as an exact rational, so each inequality is checked
//! exactly rather than up to rounding. Floating point only appears where an
//! irrational value is unavoidable (dimension estimates, complex character
//! values) and is labelled as such.
//!
//! Batch audits take an [`Exec`] so callers can pick sequential or
//! rayon-backed evaluation; without the `parallel` feature both run
//! sequentially.

pub mod audit;
pub mod cantor;
pub mod characters;
mod error;
pub mod exec;
pub mod harmonic;
pub mod hensel;
pub mod linalg;
pub mod padic;
pub mod prime;
pub mod radic;
pub mod rational;

pub use error::{Error, Result};
pub use exec::Exec;
pub use prime::Prime;
