//! Outward-rounded enclosure arithmetic and the certified series that every
//! comparison in the crate rests on: `zeta(r)`, the prime tail sum
//! `S_{1,m}(r)` and the tail product `u_m`.

mod enclosure;
mod series;

pub use enclosure::{Enclosure, DECIMAL_DIGITS};
pub use series::{
    prime_power_neg, tail_product, tail_product_euler, tail_sum, zeta_enclosure,
    zeta_enclosure_direct,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertOrder {
    Less,
    Greater,
    /// The enclosures intersect; the order is not decided.
    Overlapping,
}

/// `Less` iff `a.hi < b.lo`, `Greater` iff `a.lo > b.hi`.
pub fn compare(a: &Enclosure, b: &Enclosure) -> CertOrder {
    if a.hi() < b.lo() {
        CertOrder::Less
    } else if a.lo() > b.hi() {
        CertOrder::Greater
    } else {
        CertOrder::Overlapping
    }
}

pub const DEFAULT_BITS: u32 = 128;
pub const DEFAULT_TRUNCATION: u64 = 100_000;
pub const MAX_TRUNCATION: u64 = 10_000_000;
/// Number of precision doublings tried before a comparison is reported as
/// undecided.
pub const MAX_REFINEMENTS: u32 = 4;

/// Working precision in bits and the prime truncation bound `B` used by the
/// truncated tail sums and products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    bits: u32,
    truncation: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            bits: DEFAULT_BITS,
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

impl Precision {
    pub fn new(bits: u32, truncation: u64) -> Result<Self> {
        if bits < 53 {
            return Err(Error::InvalidArgument(format!(
                "precision must be at least 53 bits, got {bits}"
            )));
        }
        if truncation < 10 {
            return Err(Error::InvalidArgument(format!(
                "truncation bound must be at least 10, got {truncation}"
            )));
        }
        Ok(Self { bits, truncation })
    }

    pub fn with_bits(bits: u32) -> Result<Self> {
        Self::new(bits, DEFAULT_TRUNCATION)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// Doubles the bit count and the truncation bound (the latter capped at
    /// [`MAX_TRUNCATION`]).
    pub fn refined(&self) -> Self {
        Self {
            bits: self.bits.saturating_mul(2),
            truncation: self
                .truncation
                .saturating_mul(2)
                .min(MAX_TRUNCATION)
                .max(self.truncation),
        }
    }

    /// This precision followed by up to [`MAX_REFINEMENTS`] refinements.
    pub fn ladder(&self) -> impl Iterator<Item = Precision> {
        std::iter::successors(Some(*self), |p| Some(p.refined())).take(MAX_REFINEMENTS as usize + 1)
    }
}

/// Checks `r.lo > 1`, the convergence condition for every infinite series
/// and product here.
pub(crate) fn require_convergent(r: &Enclosure) -> Result<()> {
    if *r.lo() > 1 {
        Ok(())
    } else {
        Err(Error::DivergentInput(r.lo_decimal()))
    }
}
