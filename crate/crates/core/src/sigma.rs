//! The divisor function `sigma_{-r}` at integers, prime powers and the
//! prime-power limit `sigma_{-r}(p^inf) = 1 / (1 - p^{-r})`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::certified::{prime_power_neg, Enclosure};
use crate::error::{Error, Result};
use crate::primes;

/// `n` together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument(
                    "factors must be strictly increasing".into(),
                ));
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::InvalidArgument("exponents must be positive".into()));
            }
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| Error::InvalidArgument("factorization overflows u64".into()))?;
            n = n
                .checked_mul(pe)
                .ok_or_else(|| Error::InvalidArgument("factorization overflows u64".into()))?;
        }
        Ok(Self { n, factors })
    }
}

/// Trial division by sieved primes up to `sqrt(n)`.
pub fn factor(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let table = primes::covering(root.max(2));
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in table.primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInteger { n, factors })
}

fn require_positive(r: &Enclosure) -> Result<()> {
    if *r.lo() > 0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "exponent must be positive (got lower endpoint {})",
            r.lo_decimal()
        )))
    }
}

/// `1 + x + ... + x^alpha` by Horner's rule, `x = p^{-r}` given.
fn geometric(x: &Enclosure, alpha: u32, bits: u32) -> Enclosure {
    let one = Enclosure::from_int(1, bits);
    let mut acc = one.clone();
    for _ in 0..alpha {
        acc = &(&acc * x) + &one;
    }
    acc
}

/// `sigma_{-r}(p^alpha) = 1 + p^{-r} + ... + p^{-r alpha}`.
///
/// Finite sums converge for every `r > 0`, so that is all this checks.
pub fn sigma_prime_power(p: u64, alpha: u32, r: &Enclosure) -> Result<Enclosure> {
    require_positive(r)?;
    let bits = r.prec();
    if alpha == 0 {
        return Ok(Enclosure::from_int(1, bits));
    }
    Ok(geometric(&prime_power_neg(p, r, bits), alpha, bits))
}

/// `sigma_{-r}(p^inf) = 1 / (1 - p^{-r})`.
pub fn sigma_prime_inf(p: u64, r: &Enclosure) -> Result<Enclosure> {
    require_positive(r)?;
    if p < 2 {
        return Err(Error::InvalidArgument(format!("{p} is not a prime")));
    }
    let bits = r.prec();
    (&Enclosure::from_int(1, bits) - &prime_power_neg(p, r, bits)).recip()
}

/// `sigma_{-r}(n)` as the product of its prime-power parts.
pub fn sigma_n(n: &FactoredInteger, r: &Enclosure) -> Result<Enclosure> {
    require_positive(r)?;
    let mut acc = Enclosure::from_int(1, r.prec());
    for &(p, e) in n.factors() {
        acc = &acc * &sigma_prime_power(p, e, r)?;
    }
    Ok(acc)
}

/// Evaluates `sigma_{-r}` at many integers for one `r`, reusing `p^{-r}`.
pub struct SigmaEvaluator {
    r: Enclosure,
    powers: HashMap<u64, Enclosure>,
}

impl SigmaEvaluator {
    pub fn new(r: &Enclosure) -> Result<Self> {
        require_positive(r)?;
        Ok(Self {
            r: r.clone(),
            powers: HashMap::new(),
        })
    }

    pub fn r(&self) -> &Enclosure {
        &self.r
    }

    fn neg_power(&mut self, p: u64) -> &Enclosure {
        let r = &self.r;
        self.powers
            .entry(p)
            .or_insert_with(|| prime_power_neg(p, r, r.prec()))
    }

    pub fn prime_power(&mut self, p: u64, alpha: u32) -> Enclosure {
        let bits = self.r.prec();
        let x = self.neg_power(p).clone();
        geometric(&x, alpha, bits)
    }

    pub fn prime_inf(&mut self, p: u64) -> Enclosure {
        let bits = self.r.prec();
        let x = self.neg_power(p).clone();
        (&Enclosure::from_int(1, bits) - &x)
            .recip()
            .expect("p^{-r} < 1 for p >= 2, r > 0")
    }

    pub fn sigma(&mut self, n: &FactoredInteger) -> Enclosure {
        let mut acc = Enclosure::from_int(1, self.r.prec());
        for &(p, e) in n.factors() {
            acc = &acc * &self.prime_power(p, e);
        }
        acc
    }
}
