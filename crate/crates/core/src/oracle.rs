//! Plain double-precision cross-checks, deliberately independent of the
//! enclosure code: a smallest-prime-factor sieve for `sigma_{-r}(n)`,
//! empirical gap detection, and an uncertified mightiness test.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::primes;

/// `sigma_{-r}(n)` for `n = 1..=n_max`, sorted by value (ties by `n`).
#[derive(Debug, Clone)]
pub struct ValueSample {
    pub r: f64,
    pub n_max: u64,
    pub values: Vec<(u64, f64)>,
}

impl ValueSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.first().map_or(f64::NAN, |v| v.1)
    }

    pub fn max(&self) -> f64 {
        self.values.last().map_or(f64::NAN, |v| v.1)
    }

    /// Writes `n,sigma` rows in sample order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,sigma")?;
        for (n, s) in &self.values {
            writeln!(out, "{n},{s:.17e}")?;
        }
        Ok(())
    }
}

/// Evaluates `sigma_{-r}(n)` multiplicatively from a smallest-prime-factor
/// table. Any `r > 0` is accepted, so `r = 1` gives `sigma(n)/n`.
pub fn sample_values(r: f64, n_max: u64) -> Result<ValueSample> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "exponent must be positive, got {r}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let n = usize::try_from(n_max)
        .map_err(|_| Error::InvalidArgument(format!("n_max = {n_max} is too large")))?;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    // sigma(n) = sigma(m) * (1 + p^-r + ... + p^-ar) where n = p^a m, p !| m
    let mut sigma = vec![1.0f64; n + 1];
    for i in 2..=n {
        let p = spf[i] as usize;
        let x = (p as f64).powf(-r);
        let mut rest = i / p;
        let mut geometric = 1.0 + x;
        let mut term = x;
        while rest.is_multiple_of(p) {
            rest /= p;
            term *= x;
            geometric += term;
        }
        sigma[i] = sigma[rest] * geometric;
    }
    let mut values: Vec<(u64, f64)> = (1..=n).map(|i| (i as u64, sigma[i])).collect();
    values.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    Ok(ValueSample { r, n_max, values })
}

/// Ten times the mean spacing of the sample over its range.
pub fn default_min_width(sample: &ValueSample) -> f64 {
    if sample.len() < 2 {
        return f64::INFINITY;
    }
    10.0 * (sample.max() - sample.min()) / (sample.len() - 1) as f64
}

/// Open intervals between consecutive sorted values that are wider than
/// `min_width`.
pub fn empirical_gaps(sample: &ValueSample, min_width: f64) -> Result<Vec<(f64, f64)>> {
    if min_width.is_nan() || min_width <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "min_width must be positive, got {min_width}"
        )));
    }
    Ok(sample
        .values
        .windows(2)
        .filter(|w| w[1].1 - w[0].1 > min_width)
        .map(|w| (w[0].1, w[1].1))
        .collect())
}

/// Uncertified `1 + p_m^{-r} > prod_{p_m < p <= bound} 1 / (1 - p^{-r})`.
pub fn brute_mighty(m: usize, r: f64, bound: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidArgument("prime index starts at 1".into()));
    }
    let p = primes::covering_index(m).nth_prime(m)?;
    if bound < p {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} is below p_m = {p}"
        )));
    }
    let table = primes::covering(bound);
    let log_product: f64 = table
        .range(p, bound)
        .iter()
        .map(|&q| -(-(q as f64).powf(-r)).ln_1p())
        .sum();
    Ok((p as f64).powf(-r).ln_1p() > log_product)
}
