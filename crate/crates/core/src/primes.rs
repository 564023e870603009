//! Prime generation and counting.
//!
//! A [`PrimeTable`] is immutable once built. Code that does not know how far
//! it will need to look asks [`covering`] for a shared table; the shared table
//! is replaced (never mutated) by one with at least double the bound when a
//! caller outgrows it.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes over `[2, bound]`.
    pub fn sieve(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve bound must be at least 2, got {bound}"
            )));
        }
        let n = usize::try_from(bound)
            .map_err(|_| Error::InvalidArgument(format!("sieve bound {bound} too large")))?;
        // odd-only sieve: index i stands for 2i + 1
        let half = n / 2 + 1;
        let mut composite = vec![false; half];
        composite[0] = true;
        let mut i = 1;
        while (2 * i + 1) * (2 * i + 1) <= n {
            if !composite[i] {
                let p = 2 * i + 1;
                let mut j = p * p / 2;
                while j < half {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        let mut primes = Vec::with_capacity(estimate_count(bound));
        primes.push(2);
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|&(i, &c)| !c && 2 * i < n)
                .map(|(i, _)| (2 * i + 1) as u64),
        );
        Ok(Self { bound, primes })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p_m`, 1-indexed (`p_1 = 2`).
    pub fn nth_prime(&self, m: usize) -> Result<u64> {
        if m == 0 {
            return Err(Error::InvalidArgument("prime index is 1-based".into()));
        }
        self.primes
            .get(m - 1)
            .copied()
            .ok_or(Error::NeedsLargerSieve {
                required: nth_prime_upper_estimate(m),
            })
    }

    /// `pi(x)`: the number of primes `<= x`.
    pub fn prime_count(&self, x: f64) -> Result<usize> {
        if x.is_nan() {
            return Err(Error::InvalidArgument("x is NaN".into()));
        }
        if x > self.bound as f64 {
            return Err(Error::NeedsLargerSieve {
                required: x.ceil() as u64,
            });
        }
        if x < 2.0 {
            return Ok(0);
        }
        let floor = x.floor() as u64;
        Ok(self.primes.partition_point(|&p| p <= floor))
    }

    /// Integer version of [`prime_count`](Self::prime_count).
    pub fn count_le(&self, n: u64) -> Result<usize> {
        if n > self.bound {
            return Err(Error::NeedsLargerSieve { required: n });
        }
        Ok(self.primes.partition_point(|&p| p <= n))
    }

    /// 1-based index of `p`, or `None` when `p` is not a listed prime.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n > self.bound {
            return Err(Error::NeedsLargerSieve { required: n });
        }
        Ok(self.primes.binary_search(&n).is_ok())
    }

    /// Primes in `(lo, hi]`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p <= hi);
        &self.primes[a..b.max(a)]
    }
}

/// Rosser's bound `p_m < m (ln m + ln ln m)` for `m >= 6`.
pub fn nth_prime_upper_estimate(m: usize) -> u64 {
    if m < 6 {
        return 13;
    }
    let m = m as f64;
    (m * (m.ln() + m.ln().ln())).ceil() as u64 + 1
}

fn estimate_count(bound: u64) -> usize {
    let x = bound as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize + 8
    }
}

fn shared() -> &'static Mutex<Arc<PrimeTable>> {
    static SHARED: OnceLock<Mutex<Arc<PrimeTable>>> = OnceLock::new();
    SHARED.get_or_init(|| Mutex::new(Arc::new(PrimeTable::sieve(1 << 16).expect("static bound"))))
}

/// A shared table whose bound is at least `bound`. Growth doubles the
/// previous bound (or jumps straight to `bound` if that is larger) and
/// installs a freshly sieved table.
pub fn covering(bound: u64) -> Arc<PrimeTable> {
    let mut guard = shared().lock().unwrap_or_else(|e| e.into_inner());
    if guard.bound() < bound {
        let target = bound.max(guard.bound().saturating_mul(2));
        *guard = Arc::new(PrimeTable::sieve(target).expect("bound >= 2"));
    }
    Arc::clone(&guard)
}

/// A shared table holding at least `m` primes.
pub fn covering_index(m: usize) -> Arc<PrimeTable> {
    let table = covering(2);
    if table.len() >= m {
        return table;
    }
    covering(nth_prime_upper_estimate(m))
}
