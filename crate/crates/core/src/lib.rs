//! Certified computation of the closure of `sigma_{-r}(N)`.
//!
//! For a real exponent `r > 1` the values `sigma_{-r}(n) = sum_{d | n} d^{-r}`
//! are dense in finitely many disjoint closed intervals inside `[1, zeta(r)]`.
//! This crate computes those intervals with outward-rounded enclosures,
//! decides which primes are `r`-mighty, locates the thresholds `r_p` and the
//! constant `eta`, and checks the component bounds.
//!
//! Module map:
//!
//! * [`primes`]: sieve, `pi(x)`, `p_m`.
//! * [`certified`]: enclosure arithmetic, `zeta(r)`, prime tail sums and products.
//! * [`sigma`]: the divisor function at integers and prime powers.
//! * [`mighty`]: mightiness verdicts, enumeration, thresholds, `eta`.
//! * [`closure`]: the backward-induction interval algorithm and its bounds.
//! * [`oracle`]: plain double-precision cross-checks.
//! * [`sweep`]: grids of closure reports over `r`.
//! * [`verify`]: named verification checks behind a common trait.

pub mod certified;
pub mod closure;
pub mod error;
pub mod mighty;
pub mod oracle;
pub mod primes;
pub mod sigma;
pub mod sweep;
pub mod verify;

pub use certified::{CertOrder, Enclosure, Precision};
pub use closure::{closure_report, ClosureInterval, ClosureReport, IntervalSet};
pub use error::{Error, Result};
pub use mighty::{enumerate_mighty, is_mighty, MightySummary, Verdict};
pub use primes::PrimeTable;
