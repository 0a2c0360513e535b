//! Exact shifted convolutions of divisor functions, their predicted main
//! terms, and the verification suites tying the two together.
//!
//! The library computes sums of the form `sum over n <= x of d_k(n) d(n + h)`
//! exactly from sieved divisor tables, evaluates the corresponding
//! semi-analytic main terms built from Ramanujan sums and the logarithmic
//! weight `lambda_{h,d}`, and cross-checks the arithmetic constants
//! (singular series, their Euler-product factorizations) and the Voronoi
//! expansion of divisor sums in arithmetic progressions against brute force.
//!
//! Entry points by capability:
//!
//! - [`arith`]: factorization, Ramanujan/Kloosterman sums, Euler factors.
//! - [`sieve`]: smallest-prime-factor and d_k tables up to 1e8.
//! - [`correlate`]: exact correlation sums, progressions, pair correlations.
//! - [`mainterm`]: the log-weight main terms and the delta operator.
//! - [`singular`]: singular-series constants and their factorizations.
//! - [`pair`]: the pair-correlation main term.
//! - [`bessel`], [`transform`]: Y0/K0/J kernels and the spectral transforms.
//! - [`voronoi`]: the dual-expansion verifier for progression sums.
//! - [`scan`], [`verify`], [`report`]: experiment drivers and output.

pub mod arith;
pub mod bessel;
pub mod cache;
pub mod correlate;
pub mod error;
pub mod mainterm;
pub mod pair;
pub mod quad;
pub mod report;
pub mod scan;
pub mod sieve;
pub mod transform;
pub mod verify;
pub mod voronoi;
pub mod singular;
pub mod weight;

pub use error::{Error, Result};
