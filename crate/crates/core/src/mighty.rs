//! Certified `r`-mightiness.
//!
//! `p_m` is `r`-mighty when `1 + p_m^{-r} > u_m`, where
//! `u_m = prod_{t > m} 1 / (1 - p_t^{-r})`. The right side is enclosed as
//! `zeta(r) * prod_{t <= m} (1 - p_t^{-r})`, so each verdict is a single
//! enclosure comparison.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::certified::{
    compare, prime_power_neg, require_convergent, tail_product_euler, zeta_enclosure, CertOrder,
    Enclosure, Precision,
};
use crate::error::{Error, Result};
use crate::primes;

/// First prime past Nagura's `n > 25`; every prime from here on is covered
/// by the enumeration stopping certificate.
pub const NAGURA_START: u64 = 29;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Mighty,
    NotMighty,
    Undecided,
}

impl Verdict {
    fn from_order(order: CertOrder) -> Self {
        match order {
            CertOrder::Greater => Verdict::Mighty,
            CertOrder::Less => Verdict::NotMighty,
            CertOrder::Overlapping => Verdict::Undecided,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Undecided
    }
}

/// A mightiness decision together with the two enclosures that certify it.
#[derive(Debug, Clone, Serialize)]
pub struct MightyVerdict {
    pub prime: u64,
    pub index: usize,
    pub verdict: Verdict,
    /// `1 + p^{-r}`
    pub lhs: Enclosure,
    /// `u_m`
    pub rhs: Enclosure,
    pub precision_used: Precision,
}

fn index_of_prime(p: u64) -> Result<usize> {
    let table = primes::covering(p.max(2));
    table
        .index_of(p)
        .ok_or_else(|| Error::InvalidArgument(format!("{p} is not prime")))
}

fn decide_once(p: u64, m: usize, r: &Enclosure, prec: Precision) -> Result<MightyVerdict> {
    let bits = prec.bits().max(r.prec());
    let lhs = &Enclosure::from_int(1, bits) + &prime_power_neg(p, r, bits);
    let rhs = tail_product_euler(m, r, prec)?;
    Ok(MightyVerdict {
        prime: p,
        index: m,
        verdict: Verdict::from_order(compare(&lhs, &rhs)),
        lhs,
        rhs,
        precision_used: prec,
    })
}

/// Decides whether `p` is `r`-mighty, refining precision up to
/// [`MAX_REFINEMENTS`](crate::certified::MAX_REFINEMENTS) times when the two
/// sides overlap. Still overlapping at the end gives `Verdict::Undecided`.
pub fn is_mighty(p: u64, r: &Enclosure, prec: Precision) -> Result<MightyVerdict> {
    require_convergent(r)?;
    let m = index_of_prime(p)?;
    decide_with_ladder(p, m, r, prec)
}

fn decide_with_ladder(p: u64, m: usize, r: &Enclosure, prec: Precision) -> Result<MightyVerdict> {
    let mut last = None;
    for step in prec.ladder() {
        let v = decide_once(p, m, r, step)?;
        if v.verdict.is_decided() {
            return Ok(v);
        }
        last = Some(v);
    }
    Ok(last.expect("ladder is non-empty"))
}

/// Walks the primes in order keeping `u_m` up to date by one multiplication
/// per prime.
pub struct MightyScanner {
    r: Enclosure,
    prec: Precision,
    bits: u32,
    table: std::sync::Arc<primes::PrimeTable>,
    m: usize,
    tail: Enclosure,
    one: Enclosure,
}

impl MightyScanner {
    pub fn new(r: &Enclosure, prec: Precision) -> Result<Self> {
        require_convergent(r)?;
        let bits = prec.bits().max(r.prec());
        Ok(Self {
            r: r.clone(),
            prec,
            bits,
            table: primes::covering(1 << 16),
            m: 0,
            tail: zeta_enclosure(r, prec)?,
            one: Enclosure::from_int(1, bits),
        })
    }

    /// Verdict for the next prime. Overlaps are retried through
    /// [`is_mighty`]'s refinement ladder.
    pub fn next_verdict(&mut self) -> Result<MightyVerdict> {
        if self.m >= self.table.len() {
            self.table = primes::covering(self.table.bound() * 2);
        }
        let p = self.table.primes()[self.m];
        self.m += 1;
        let x = prime_power_neg(p, &self.r, self.bits);
        self.tail = &self.tail * &(&self.one - &x);
        let lhs = &self.one + &x;
        let order = compare(&lhs, &self.tail);
        if order != CertOrder::Overlapping {
            return Ok(MightyVerdict {
                prime: p,
                index: self.m,
                verdict: Verdict::from_order(order),
                lhs,
                rhs: self.tail.clone(),
                precision_used: self.prec,
            });
        }
        decide_with_ladder(p, self.m, &self.r, self.prec)
    }

    /// Verdicts for every prime up to and including `bound`.
    pub fn scan_to(&mut self, bound: u64) -> Result<Vec<MightyVerdict>> {
        let mut out = Vec::new();
        loop {
            if self.m >= self.table.len() {
                self.table = primes::covering(self.table.bound() * 2);
            }
            if self.table.primes()[self.m] > bound {
                return Ok(out);
            }
            out.push(self.next_verdict()?);
        }
    }
}

/// Largest-prime, count and completeness summary of an enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct MightySummary {
    pub r: Enclosure,
    pub mighty_primes: Vec<u64>,
    /// `P_r`, zero when nothing is mighty.
    pub largest: u64,
    /// `N_r`
    pub count: usize,
    /// `L_r`, the index of `P_r` (zero when nothing is mighty).
    pub largest_index: usize,
    pub enumeration_complete: bool,
    /// Every prime up to here was decided individually.
    pub scan_bound: u64,
}

/// Certifies that no prime `Q >= 29` is `r`-mighty.
///
/// Nagura puts a prime in every `(x, 6x/5)` with `x > 25`, so
/// `S_{1,m}(r) >= c Q^{-r}` with `c = rho / (1 - rho)`, `rho = (5/6)^r`.
/// Since `1 - prod (1 - x_t) >= 1 - exp(-S_{1,m}) >= 1 - exp(-c Q^{-r})` and
/// `ln(1 + Q^{-r}) <= Q^{-r}`, the condition `c > 1` (i.e. `rho > 1/2`)
/// makes `1 - prod (1 - x_t) > 1/(Q^r + 1)` for every such `Q`.
pub fn nagura_certificate(r: &Enclosure, bits: u32) -> bool {
    let bits = bits.max(r.prec());
    let ratio = Enclosure::from_ratio(5, 6, bits).expect("nonzero denominator");
    let rho = (r * &ratio.ln().expect("positive")).exp();
    let half = Enclosure::from_ratio(1, 2, bits).expect("nonzero denominator");
    compare(&rho, &half) == CertOrder::Greater
}

/// `max(ceil((r / ln r)^{20/9}), 29)`, the scan length used when the
/// stopping certificate is unavailable.
pub fn default_scan_cap(r: &Enclosure) -> u64 {
    let x = r.hi_f64();
    let heuristic = (x / x.ln()).powf(20.0 / 9.0).ceil();
    if heuristic.is_finite() && heuristic > NAGURA_START as f64 {
        heuristic as u64
    } else {
        NAGURA_START
    }
}

/// Lists the `r`-mighty primes. When [`nagura_certificate`] holds, primes
/// below 29 are decided one by one and the list is certified complete;
/// otherwise primes up to `scan_cap` are decided and the summary is flagged
/// incomplete.
pub fn enumerate_mighty(
    r: &Enclosure,
    prec: Precision,
    scan_cap: Option<u64>,
) -> Result<MightySummary> {
    require_convergent(r)?;
    let complete = nagura_certificate(r, prec.bits());
    let limit = if complete {
        NAGURA_START - 1
    } else {
        scan_cap.unwrap_or_else(|| default_scan_cap(r))
    };
    let mut scanner = MightyScanner::new(r, prec)?;
    let verdicts = scanner.scan_to(limit)?;
    let mut mighty = Vec::new();
    let mut largest_index = 0;
    for v in &verdicts {
        match v.verdict {
            Verdict::Mighty => {
                mighty.push(v.prime);
                largest_index = v.index;
            }
            Verdict::NotMighty => {}
            Verdict::Undecided => {
                return Err(Error::proximity(
                    Some(v.prime),
                    format!(
                        "cannot decide whether {} is r-mighty at r = {} (1 + p^-r = {}, u_m = {})",
                        v.prime, r, v.lhs, v.rhs
                    ),
                ))
            }
        }
    }
    Ok(MightySummary {
        r: r.clone(),
        largest: mighty.last().copied().unwrap_or(0),
        count: mighty.len(),
        mighty_primes: mighty,
        largest_index,
        enumeration_complete: complete,
        scan_bound: verdicts.last().map_or(0, |v| v.prime),
    })
}

/// Sign of a certified quantity, refined through a precision ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Negative,
    Positive,
    Unknown,
}

/// Generic certified bisection for a predicate that is `Negative` left of a
/// single crossing and `Positive` right of it. When the midpoint cannot be
/// decided, probes a quarter-tolerance either side of it.
fn bisect(
    mut lo: Float,
    mut hi: Float,
    tol: f64,
    sign_at: &dyn Fn(&Float) -> Result<Sign>,
    what: &str,
) -> Result<Enclosure> {
    let bits = lo.prec().max(hi.prec());
    let tol_f = Float::with_val(bits, tol);
    for _ in 0..MAX_BISECTION_STEPS {
        let width = Float::with_val(bits, &hi - &lo);
        if width <= tol_f {
            return Enclosure::new(lo, hi);
        }
        let mid = Float::with_val(bits + 1, &lo + &hi) / 2u32;
        match sign_at(&mid)? {
            Sign::Negative => lo = mid,
            Sign::Positive => hi = mid,
            Sign::Unknown => {
                let delta = Float::with_val(bits, &tol_f / 4u32);
                let left = Float::with_val(bits + 8, &mid - &delta);
                let right = Float::with_val(bits + 8, &mid + &delta);
                if sign_at(&left)? == Sign::Negative && sign_at(&right)? == Sign::Positive {
                    lo = left;
                    hi = right;
                } else {
                    return Err(Error::proximity(
                        None,
                        format!("{what}: undecidable midpoint {mid}"),
                    ));
                }
            }
        }
    }
    let width = Float::with_val(bits, &hi - &lo);
    if width <= tol_f {
        Enclosure::new(lo, hi)
    } else {
        Err(Error::BracketFailure(format!(
            "{what}: tolerance {tol} not reached in {MAX_BISECTION_STEPS} steps"
        )))
    }
}

/// Encloses `r_p = inf { s > 1 : p is s-mighty }` to width `<= tol`.
///
/// Mightiness is monotone in `s`, so bisection on the verdict is valid. The
/// initial bracket `[1 + 2^-20, 8]` is widened upward by doubling.
pub fn threshold(p: u64, tol: f64, prec: Precision) -> Result<Enclosure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let m = index_of_prime(p)?;
    let bits = prec.bits();
    let sign_at = |s: &Float| -> Result<Sign> {
        let v = decide_with_ladder(p, m, &Enclosure::point(s.clone()), prec)?;
        Ok(match v.verdict {
            Verdict::Mighty => Sign::Positive,
            Verdict::NotMighty => Sign::Negative,
            Verdict::Undecided => Sign::Unknown,
        })
    };
    let lo = Float::with_val(bits, 1) + Float::with_val(bits, Float::i_exp(1, -20));
    if sign_at(&lo)? != Sign::Negative {
        return Err(Error::BracketFailure(format!(
            "{p} is not certified non-mighty at the lower end 1 + 2^-20"
        )));
    }
    let mut hi = Float::with_val(bits, 8);
    let mut doublings = 0;
    while sign_at(&hi)? != Sign::Positive {
        doublings += 1;
        if doublings > 16 {
            return Err(Error::BracketFailure(format!(
                "{p} is not certified mighty at s = {hi}"
            )));
        }
        hi *= 2u32;
    }
    bisect(lo, hi, tol, &sign_at, &format!("threshold r_{p}"))
}

/// `(2^s / (2^s - 1)) * ((3^s + 1) / (3^s - 1)) - zeta(s)`; positive exactly
/// when 3 is `s`-mighty.
pub fn eta_balance(s: &Enclosure, prec: Precision) -> Result<Enclosure> {
    require_convergent(s)?;
    let bits = prec.bits().max(s.prec());
    let one = Enclosure::from_int(1, bits);
    let two_s = Enclosure::from_int(2, bits).pow(s)?;
    let three_s = Enclosure::from_int(3, bits).pow(s)?;
    let left = two_s.div(&(&two_s - &one))?;
    let right = (&three_s + &one).div(&(&three_s - &one))?;
    Ok(&(&left * &right) - &zeta_enclosure(s, prec)?)
}

/// Encloses `eta`, the root of [`eta_balance`] in `[1.5, 2]`, to width `<= tol`.
pub fn eta(tol: f64, prec: Precision) -> Result<Enclosure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let bits = prec.bits();
    let sign_at = |s: &Float| -> Result<Sign> {
        let point = Enclosure::point(s.clone());
        for step in prec.ladder() {
            let f = eta_balance(&point, step)?;
            if *f.hi() < 0 {
                return Ok(Sign::Negative);
            }
            if *f.lo() > 0 {
                return Ok(Sign::Positive);
            }
        }
        Ok(Sign::Unknown)
    };
    let lo = Float::with_val(bits, 1.5);
    let hi = Float::with_val(bits, 2);
    if sign_at(&lo)? != Sign::Negative || sign_at(&hi)? != Sign::Positive {
        return Err(Error::UndecidedSign {
            lo: "1.5".into(),
            hi: "2".into(),
        });
    }
    bisect(lo.clone(), hi.clone(), tol, &sign_at, "eta").map_err(|e| match e {
        Error::ThresholdProximity { .. } => Error::UndecidedSign {
            lo: lo.to_string(),
            hi: hi.to_string(),
        },
        other => other,
    })
}
