use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Integer, Rational};

use super::{require_convergent, Enclosure, Precision};
use crate::error::{Error, Result};
use crate::primes;

/// Enclosure of `n^{-r}` for a positive integer `n`.
pub fn prime_power_neg(n: u64, r: &Enclosure, bits: u32) -> Enclosure {
    let ln_n = Enclosure::from_u64(n, bits)
        .ln()
        .expect("positive integer has a logarithm");
    (-&(r * &ln_n)).exp()
}

/// `ln p` for every prime `p <= bound`, computed once per `(bound, bits)`.
fn prime_logs(bound: u64, bits: u32) -> Arc<Vec<(u64, Enclosure)>> {
    type Cache = Mutex<HashMap<(u64, u32), Arc<Vec<(u64, Enclosure)>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(bound, bits))
    {
        return Arc::clone(hit);
    }
    let table = primes::covering(bound);
    let logs: Vec<(u64, Enclosure)> = table
        .range(1, bound)
        .iter()
        .map(|&p| (p, Enclosure::from_u64(p, bits).ln().expect("positive")))
        .collect();
    let logs = Arc::new(logs);
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((bound, bits), Arc::clone(&logs));
    logs
}

/// `ln p` for the primes in `(start, bound]`.
fn log_window(start: u64, bound: u64, bits: u32) -> Vec<Enclosure> {
    let logs = prime_logs(bound, bits);
    let from = logs.partition_point(|(p, _)| *p <= start);
    logs[from..].iter().map(|(_, l)| l.clone()).collect()
}

/// Evaluates a function that is non-increasing in `r` at both endpoints of
/// `r`, which avoids the dependency blow-up of plain interval evaluation.
fn decreasing_in_r(
    r: &Enclosure,
    f: impl Fn(&Enclosure) -> Result<Enclosure>,
) -> Result<Enclosure> {
    if r.is_point() {
        return f(r);
    }
    let at_lo = f(&r.lower_point())?;
    let at_hi = f(&r.upper_point())?;
    Enclosure::new(at_hi.lo().clone(), at_lo.hi().clone())
}

/// `B_{2k} / (2k)!` for `k = 1, 2, ...`, computed exactly once and cached.
fn bernoulli_coefficients(count: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() < count {
        let target = count.max(2 * guard.len());
        *guard = compute_bernoulli_coefficients(target);
    }
    guard[..count].to_vec()
}

/// Akiyama-Tanigawa over exact rationals.
fn compute_bernoulli_coefficients(count: usize) -> Vec<Rational> {
    let n = 2 * count;
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut bernoulli = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let diff = Rational::from(&a[j - 1] - &a[j]);
            a[j - 1] = diff * Integer::from(j);
        }
        bernoulli.push(a[0].clone());
    }
    let mut factorial = Integer::from(1);
    let mut out = Vec::with_capacity(count);
    for (k, b) in bernoulli.iter().enumerate().skip(1) {
        factorial *= k as u64;
        if k % 2 == 0 {
            out.push(Rational::from(b / &factorial));
        }
    }
    out
}

/// Euler-Maclaurin at a single exponent `s` with the remainder bound
/// `|R| <= 4 |(s)_{2M}| / (2 pi)^{2M} * X^{1-s-2M} / (s + 2M - 1)`,
/// `X = N + 1`.
fn zeta_euler_maclaurin(s: &Enclosure, bits: u32) -> Enclosure {
    let n_terms = u64::from(bits / 6 + 6);
    let corrections = n_terms as usize;
    let one = Enclosure::from_int(1, bits);

    let mut sum = one.clone();
    for n in 2..=n_terms {
        sum = &sum + &prime_power_neg(n, s, bits);
    }

    let x = Enclosure::from_u64(n_terms + 1, bits);
    let x_neg_s = prime_power_neg(n_terms + 1, s, bits);
    let s_minus_one = s - &one;
    sum = &sum
        + &(&x * &x_neg_s)
            .div(&s_minus_one)
            .expect("s > 1 keeps s - 1 away from zero");
    sum = &sum + &x_neg_s.div_u64(2).expect("nonzero");

    let coefficients = bernoulli_coefficients(corrections);
    let x_sq = x.square();
    let mut rising = s.clone();
    let mut x_pow = x_neg_s.div(&x).expect("X > 0");
    for (k, coeff) in coefficients.iter().enumerate() {
        let k = k as i64 + 1;
        let term = &(&Enclosure::from_rational(coeff, bits) * &rising) * &x_pow;
        sum = &sum + &term;
        if (k as usize) < corrections {
            let a = s + &Enclosure::from_int(2 * k - 1, bits);
            let b = s + &Enclosure::from_int(2 * k, bits);
            rising = &(&rising * &a) * &b;
            x_pow = x_pow.div(&x_sq).expect("X > 0");
        }
    }

    let two_m = 2 * corrections as i64;
    let last = s + &Enclosure::from_int(two_m - 1, bits);
    let rising_2m = &rising * &last;
    let two_pi_pow = Enclosure::pi(bits).mul_u64(2).powu(two_m as u32);
    let bound = (&rising_2m.mul_u64(4) * &x_pow)
        .div(&(&two_pi_pow * &last))
        .expect("positive denominator");
    sum.inflate(bound.hi())
}

/// Enclosure of `zeta(r)` by Euler-Maclaurin summation with a rigorous
/// remainder bound. The number of terms grows with `prec.bits()`.
pub fn zeta_enclosure(r: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(r)?;
    let bits = prec.bits().max(r.prec());
    decreasing_in_r(r, |s| Ok(zeta_euler_maclaurin(s, bits)))
}

/// Enclosure of `zeta(r)` as `sum_{n <= N} n^{-r}` plus the integral
/// comparison tail `[(N+1)^{1-r}/(r-1), N^{1-r}/(r-1)]`, `N = prec.truncation()`.
///
/// Slower and wider than [`zeta_enclosure`]; kept as an independent route.
pub fn zeta_enclosure_direct(r: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(r)?;
    let bits = prec.bits().max(r.prec());
    let n_max = prec.truncation();
    decreasing_in_r(r, |s| {
        let one = Enclosure::from_int(1, bits);
        let mut sum = one.clone();
        for n in 2..=n_max {
            sum = &sum + &prime_power_neg(n, s, bits);
        }
        let s_minus_one = s - &one;
        let upper = (&Enclosure::from_u64(n_max, bits) * &prime_power_neg(n_max, s, bits))
            .div(&s_minus_one)?;
        let lower = (&Enclosure::from_u64(n_max + 1, bits) * &prime_power_neg(n_max + 1, s, bits))
            .div(&s_minus_one)?;
        let tail = Enclosure::new(lower.lo().clone(), upper.hi().clone())?;
        Ok(&sum + &tail)
    })
}

fn prime_at(m: usize) -> Result<u64> {
    if m == 0 {
        return Ok(1);
    }
    primes::covering_index(m).nth_prime(m)
}

/// Upper bound for `sum_{p > B} p^{-r}` over primes, `B >= 17`.
///
/// Partial summation against `pi(x) <= 1.25506 x / ln x` (Rosser-Schoenfeld)
/// gives `sum_{p > B} p^{-r} <= r int_B^inf pi(x) x^{-r-1} dx
/// <= 1.25506 r B^{1-r} / ((r - 1) ln B)`.
fn prime_tail_bound(bound: u64, r: &Enclosure, bits: u32) -> Result<Enclosure> {
    debug_assert!(bound >= 17);
    let one = Enclosure::from_int(1, bits);
    let constant = Enclosure::from_ratio(125_506, 100_000, bits)?;
    let b = Enclosure::from_u64(bound, bits);
    let numerator = &(&constant * r) * &(&b * &prime_power_neg(bound, r, bits));
    numerator.div(&(&(r - &one) * &b.ln()?))
}

/// Enclosure of `S_{1,m}(r) = sum_{t > m} p_t^{-r}`: the primes in
/// `(p_m, B]` summed directly plus `[0, 1.25506 r B^{1-r}/((r-1) ln B)]`.
pub fn tail_sum(m: usize, r: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(r)?;
    let bits = prec.bits().max(r.prec());
    let start = prime_at(m)?;
    let bound = prec.truncation().max(start).max(17);
    let window = log_window(start, bound, bits);
    decreasing_in_r(r, |s| {
        let mut sum = Enclosure::from_int(0, bits);
        for ln_p in &window {
            sum = &sum + &(-&(s * ln_p)).exp();
        }
        let t = prime_tail_bound(bound, s, bits)?;
        let tail = Enclosure::new(rug::Float::new(bits), t.hi().clone())?;
        Ok(&sum + &tail)
    })
}

/// Enclosure of `u_m = prod_{t > m} 1/(1 - p_t^{-r})` from the primes in
/// `(p_m, B]` times a tail factor in `[1, exp(T / (1 - B^{-r}))]` with
/// `T` the prime tail bound above.
pub fn tail_product(m: usize, r: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(r)?;
    let bits = prec.bits().max(r.prec());
    let start = prime_at(m)?;
    let bound = prec.truncation().max(start).max(17);
    let window = log_window(start, bound, bits);
    decreasing_in_r(r, |s| {
        let one = Enclosure::from_int(1, bits);
        let mut product = one.clone();
        for ln_p in &window {
            let factor = (&one - &(-&(s * ln_p)).exp()).recip()?;
            product = &product * &factor;
        }
        let t = prime_tail_bound(bound, s, bits)?;
        let damp = &one - &prime_power_neg(bound, s, bits);
        let exponent = t.div(&damp)?;
        let tail = Enclosure::new(one.lo().clone(), exponent.exp().hi().clone())?;
        Ok(&product * &tail)
    })
}

/// Enclosure of `u_m` via the Euler product: `zeta(r) * prod_{t <= m} (1 - p_t^{-r})`.
/// As tight as the `zeta` enclosure; this is what the mightiness test uses.
pub fn tail_product_euler(m: usize, r: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(r)?;
    let bits = prec.bits().max(r.prec());
    let head: Vec<u64> = if m == 0 {
        Vec::new()
    } else {
        let table = primes::covering_index(m);
        if table.len() < m {
            return Err(Error::NeedsLargerSieve {
                required: primes::nth_prime_upper_estimate(m),
            });
        }
        table.primes()[..m].to_vec()
    };
    decreasing_in_r(r, |s| {
        let one = Enclosure::from_int(1, bits);
        let mut value = zeta_euler_maclaurin(s, bits);
        for &p in &head {
            value = &value * &(&one - &prime_power_neg(p, s, bits));
        }
        Ok(value)
    })
}
