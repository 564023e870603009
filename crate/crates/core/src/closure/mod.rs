//! The closure of `sigma_{-r}(N)` as a finite union of disjoint closed
//! intervals, by backward induction over the primes `p_{L_r}, ..., p_1`.
//!
//! Start from `[1, u_{L_r}]` (the closure over integers with no prime factor
//! `<= P_r`). For each earlier prime `p`, every interval `I = [a, b]` is
//! replaced by the union of `sigma(p^i) I` over `i = 0, 1, ..., inf`, which
//! is `sigma(p^0) I, ..., sigma(p^{t-1}) I` and `[a sigma(p^t), b sigma(p^inf)]`
//! where `t` is the least exponent with `sigma(p^{t+1}) / sigma(p^t) <= b / a`.
//! Overlapping intervals are then merged.

mod endpoint;

pub use endpoint::{relate, Endpoint, Evaluator, Factor, Relation};

use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::certified::{compare, prime_power_neg, zeta_enclosure, CertOrder, Enclosure, Precision};
use crate::error::{Error, Result};
use crate::mighty::{enumerate_mighty, MightySummary};
use crate::primes;

/// One closed component `[a, b]` with its endpoint expressions.
#[derive(Debug, Clone)]
pub struct ClosureInterval {
    pub a: Enclosure,
    pub b: Enclosure,
    pub a_expr: Endpoint,
    pub b_expr: Endpoint,
}

impl ClosureInterval {
    fn evaluate(a_expr: Endpoint, b_expr: Endpoint, ev: &mut Evaluator) -> Result<Self> {
        Ok(Self {
            a: ev.eval(&a_expr)?,
            b: ev.eval(&b_expr)?,
            a_expr,
            b_expr,
        })
    }

    /// `sigma(p^i) * [a, b]`, or `[a sigma(p^i), b sigma(p^inf)]` when `limit`.
    fn scaled(&self, p: u64, i: u32, limit: bool, ev: &mut Evaluator) -> Result<Self> {
        let a_expr = self.a_expr.times(Factor::Power { p, exp: i });
        let b_expr = if limit {
            self.b_expr.times(Factor::Limit(p))
        } else {
            self.b_expr.times(Factor::Power { p, exp: i })
        };
        Self::evaluate(a_expr, b_expr, ev)
    }

    /// Enclosure of `b / a`.
    pub fn ratio(&self) -> Result<Enclosure> {
        self.b.div(&self.a)
    }
}

/// Intervals sorted by left endpoint.
#[derive(Debug, Clone)]
pub struct IntervalSet {
    pub intervals: Vec<ClosureInterval>,
    /// False when some merge decision could not be certified; the set is
    /// then a superset of the true closure and counts become ranges.
    pub certified_disjoint: bool,
    /// Number of merges made without a certified overlap.
    pub undecided_merges: usize,
}

impl IntervalSet {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Bounded gaps `(b_i, a_{i+1})` between consecutive components.
    pub fn gaps(&self) -> Vec<(Enclosure, Enclosure)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].b.clone(), w[1].a.clone()))
            .collect()
    }
}

/// `ceil(log target / log base)` by integer powers: the least `k` with
/// `base^k >= target`.
pub fn ceil_log_ratio(target: u64, base: u64) -> u32 {
    assert!(base >= 2, "base must be at least 2");
    let mut k = 0;
    let mut power: u128 = 1;
    while power < u128::from(target) {
        power *= u128::from(base);
        k += 1;
    }
    k
}

/// `prod_{i=1}^{L_r} ceil(log p_{L_r+1} / log p_i)`, saturating at `u64::MAX`.
pub fn product_upper_bound(summary: &MightySummary) -> Result<u64> {
    let l = summary.largest_index;
    let table = primes::covering_index(l + 1);
    let next = table.nth_prime(l + 1)?;
    let mut product: u64 = 1;
    for &p in &table.primes()[..l] {
        product = product.saturating_mul(u64::from(ceil_log_ratio(next, p)));
    }
    Ok(product)
}

/// `[1, u_{L_r}]`, which is `[1, zeta(r)]` when nothing is mighty.
pub fn base_interval(
    summary: &MightySummary,
    r: &Enclosure,
    prec: Precision,
) -> Result<IntervalSet> {
    if !summary.enumeration_complete {
        return Err(Error::IncompleteEnumeration {
            scan_bound: summary.scan_bound,
        });
    }
    let mut ev = Evaluator::new(r, prec)?;
    let interval = ClosureInterval::evaluate(
        Endpoint::one(),
        Endpoint::tail(summary.largest_index),
        &mut ev,
    )?;
    Ok(IntervalSet {
        intervals: vec![interval],
        certified_disjoint: true,
        undecided_merges: 0,
    })
}

/// Least `t >= 0` with `sigma(p^{t+1}) / sigma(p^t) <= ratio`, using
/// `sigma(p^{t+1}) / sigma(p^t) = 1 + 1 / (p^r + p^{2r} + ... + p^{(t+1)r})`.
///
/// `cap` is the largest admissible answer; running past it is an internal
/// error. An overlap between the step ratio and `ratio` is reported as
/// threshold proximity.
pub fn min_exponent(p: u64, r: &Enclosure, ratio: &Enclosure, cap: u32) -> Result<u32> {
    if *ratio.lo() <= 1 {
        return Err(Error::InvalidArgument(format!(
            "endpoint ratio must exceed 1, got {ratio}"
        )));
    }
    let bits = r.prec().max(ratio.prec());
    let one = Enclosure::from_int(1, bits);
    let x = prime_power_neg(p, r, bits);
    let p_r = x.recip()?;
    let mut power = one.clone();
    let mut denominator = Enclosure::from_int(0, bits);
    for t in 0..=cap {
        power = &power * &p_r;
        denominator = &denominator + &power;
        let step = &one + &denominator.recip()?;
        match compare(&step, ratio) {
            CertOrder::Less => return Ok(t),
            CertOrder::Greater => {}
            CertOrder::Overlapping => {
                return Err(Error::proximity(
                    Some(p),
                    format!(
                        "sigma({p}^{})/sigma({p}^{t}) = {step} vs ratio {ratio}",
                        t + 1
                    ),
                ))
            }
        }
    }
    Err(Error::Internal(format!(
        "least exponent for p = {p} exceeds the cap {cap} (ratio {ratio})"
    )))
}

/// Replaces each interval by its orbit under multiplication by
/// `sigma(p^i)`, `i = 0..inf`, then merges.
pub fn expand_prime(
    set: &IntervalSet,
    p: u64,
    cap: u32,
    ev: &mut Evaluator,
) -> Result<IntervalSet> {
    let mut raw = Vec::new();
    for interval in &set.intervals {
        let t = least_exponent_refined(interval, p, cap, ev)?;
        for i in 0..t {
            raw.push(interval.scaled(p, i, false, ev)?);
        }
        raw.push(interval.scaled(p, t, true, ev)?);
    }
    merge(
        IntervalSet {
            intervals: raw,
            certified_disjoint: set.certified_disjoint,
            undecided_merges: set.undecided_merges,
        },
        ev,
    )
}

fn least_exponent_refined(
    interval: &ClosureInterval,
    p: u64,
    cap: u32,
    ev: &Evaluator,
) -> Result<u32> {
    match min_exponent(p, ev.r(), &interval.ratio()?, cap) {
        Err(Error::ThresholdProximity { .. }) => {}
        other => return other,
    }
    let mut finer = ev.refined()?;
    let mut last = None;
    for _ in 0..crate::certified::MAX_REFINEMENTS {
        let a = finer.eval(&interval.a_expr)?;
        let b = finer.eval(&interval.b_expr)?;
        match min_exponent(p, finer.r(), &b.div(&a)?, cap) {
            Err(e @ Error::ThresholdProximity { .. }) => {
                last = Some(e);
                finer = finer.refined()?;
            }
            other => return other,
        }
    }
    Err(last.expect("at least one refinement"))
}

/// Sorts by left endpoint and coalesces intervals that overlap or touch.
/// A pair whose order stays undecided after refinement is merged anyway and
/// recorded in `undecided_merges`.
pub fn merge(set: IntervalSet, ev: &Evaluator) -> Result<IntervalSet> {
    let mut intervals = set.intervals;
    intervals.sort_by(|x, y| {
        x.a.lo()
            .partial_cmp(y.a.lo())
            .unwrap_or(Ordering::Equal)
            .then_with(|| x.a.hi().partial_cmp(y.a.hi()).unwrap_or(Ordering::Equal))
    });
    let mut certified_disjoint = set.certified_disjoint;
    let mut undecided = set.undecided_merges;
    let mut out: Vec<ClosureInterval> = Vec::with_capacity(intervals.len());
    for next in intervals {
        let Some(current) = out.last_mut() else {
            out.push(next);
            continue;
        };
        match relate(&current.b_expr, &current.b, &next.a_expr, &next.a, ev)? {
            Relation::Less => {
                out.push(next);
                continue;
            }
            Relation::Equal | Relation::Greater => {}
            Relation::Undecided => {
                certified_disjoint = false;
                undecided += 1;
            }
        }
        match relate(&current.a_expr, &current.a, &next.a_expr, &next.a, ev)? {
            Relation::Less | Relation::Equal => {}
            Relation::Greater => {
                current.a = next.a.clone();
                current.a_expr = next.a_expr.clone();
            }
            Relation::Undecided => {
                current.a = current.a.min(&next.a);
                current.a_expr = Endpoint::Min(
                    Box::new(current.a_expr.clone()),
                    Box::new(next.a_expr.clone()),
                );
            }
        }
        match relate(&current.b_expr, &current.b, &next.b_expr, &next.b, ev)? {
            Relation::Greater | Relation::Equal => {}
            Relation::Less => {
                current.b = next.b;
                current.b_expr = next.b_expr;
            }
            Relation::Undecided => {
                current.b = current.b.max(&next.b);
                current.b_expr =
                    Endpoint::Max(Box::new(current.b_expr.clone()), Box::new(next.b_expr));
            }
        }
    }
    Ok(IntervalSet {
        intervals: out,
        certified_disjoint,
        undecided_merges: undecided,
    })
}

/// Runs the backward induction for an already enumerated summary.
pub fn closure_intervals(summary: &MightySummary, prec: Precision) -> Result<IntervalSet> {
    let r = &summary.r;
    let mut set = base_interval(summary, r, prec)?;
    let l = summary.largest_index;
    if l == 0 {
        return Ok(set);
    }
    let table = primes::covering_index(l + 1);
    let next = table.nth_prime(l + 1)?;
    let mut ev = Evaluator::new(r, prec)?;
    for k in (1..=l).rev() {
        let p = table.nth_prime(k)?;
        set = expand_prime(&set, p, ceil_log_ratio(next, p), &mut ev)?;
    }
    Ok(set)
}

/// The gaps `(u_m, 1 + p_m^{-r})` forced by each mighty `p_m`.
pub fn gaps_from_mighty(
    summary: &MightySummary,
    prec: Precision,
) -> Result<Vec<(Enclosure, Enclosure)>> {
    if !summary.enumeration_complete {
        return Err(Error::IncompleteEnumeration {
            scan_bound: summary.scan_bound,
        });
    }
    let mut ev = Evaluator::new(&summary.r, prec)?;
    let table = primes::covering(summary.largest.max(2));
    summary
        .mighty_primes
        .iter()
        .map(|&p| {
            let m = table.index_of(p).expect("mighty primes are listed");
            Ok((
                ev.factor(&Factor::Tail(m))?,
                ev.factor(&Factor::Power { p, exp: 1 })?,
            ))
        })
        .collect()
}

/// Everything computed for one exponent `r`.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub r: Enclosure,
    pub precision: Precision,
    pub summary: MightySummary,
    pub intervals: IntervalSet,
    pub components_min: usize,
    pub components_max: usize,
    /// `N_r + 1`
    pub lower_bound: usize,
    pub product_bound: u64,
    /// Bounded gaps between consecutive components.
    pub gaps: Vec<(Enclosure, Enclosure)>,
    /// `(u_m, 1 + p_m^{-r})` for each mighty `p_m`.
    pub mighty_gaps: Vec<(Enclosure, Enclosure)>,
}

impl ClosureReport {
    pub fn is_exact(&self) -> bool {
        self.components_min == self.components_max
    }

    pub fn count(&self) -> Option<usize> {
        self.is_exact().then_some(self.components_min)
    }
}

/// Enumerates the mighty primes, runs the backward induction and fills in
/// counts, bounds and gaps. Structural invariants are re-checked on the way
/// out; a violation is an internal error.
pub fn closure_report(r: &Enclosure, prec: Precision) -> Result<ClosureReport> {
    let summary = enumerate_mighty(r, prec, None)?;
    closure_report_for(summary, prec)
}

pub fn closure_report_for(summary: MightySummary, prec: Precision) -> Result<ClosureReport> {
    if !summary.enumeration_complete {
        return Err(Error::IncompleteEnumeration {
            scan_bound: summary.scan_bound,
        });
    }
    let intervals = closure_intervals(&summary, prec)?;
    let components_min = intervals.len();
    let components_max = components_min + intervals.undecided_merges;
    let lower_bound = summary.count + 1;
    let product_bound = product_upper_bound(&summary)?;
    let gaps = intervals.gaps();
    let mighty_gaps = gaps_from_mighty(&summary, prec)?;
    let report = ClosureReport {
        r: summary.r.clone(),
        precision: prec,
        summary,
        intervals,
        components_min,
        components_max,
        lower_bound,
        product_bound,
        gaps,
        mighty_gaps,
    };
    check_report(&report)?;
    Ok(report)
}

fn check_report(report: &ClosureReport) -> Result<()> {
    let first = report
        .intervals
        .intervals
        .first()
        .ok_or_else(|| Error::Internal("empty closure".into()))?;
    if first.a_expr != Endpoint::one() {
        return Err(Error::Internal(format!(
            "closure starts at {} instead of 1",
            first.a_expr
        )));
    }
    let last = report.intervals.intervals.last().expect("non-empty");
    let zeta = zeta_enclosure(&report.r, report.precision)?;
    if !last.b.overlaps(&zeta) {
        return Err(Error::Internal(format!(
            "closure ends at {} which misses zeta(r) = {zeta}",
            last.b
        )));
    }
    for iv in &report.intervals.intervals {
        if compare(&iv.a, &iv.b) == CertOrder::Greater {
            return Err(Error::Internal(format!(
                "inverted interval [{}, {}]",
                iv.a, iv.b
            )));
        }
    }
    if report.intervals.certified_disjoint {
        if report.lower_bound > report.components_min {
            return Err(Error::Internal(format!(
                "{} components but {} mighty primes",
                report.components_min, report.summary.count
            )));
        }
        if report.components_max as u64 > report.product_bound {
            return Err(Error::Internal(format!(
                "{} components exceed the product bound {}",
                report.components_max, report.product_bound
            )));
        }
    }
    Ok(())
}

impl Serialize for ClosureInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ClosureInterval", 4)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("a_expr", &self.a_expr.to_string())?;
        s.serialize_field("b_expr", &self.b_expr.to_string())?;
        s.end()
    }
}

impl Serialize for ClosureReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ClosureReport", 15)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("precision_bits", &self.precision.bits())?;
        s.serialize_field("mighty_primes", &self.summary.mighty_primes)?;
        s.serialize_field("largest_mighty", &self.summary.largest)?;
        s.serialize_field("count_mighty", &self.summary.count)?;
        s.serialize_field("enumeration_complete", &self.summary.enumeration_complete)?;
        s.serialize_field("intervals", &self.intervals.intervals)?;
        s.serialize_field("certified_disjoint", &self.intervals.certified_disjoint)?;
        s.serialize_field("components_min", &self.components_min)?;
        s.serialize_field("components_max", &self.components_max)?;
        s.serialize_field("lower_bound", &self.lower_bound)?;
        s.serialize_field("product_bound", &self.product_bound)?;
        s.serialize_field("gaps", &self.gaps)?;
        s.serialize_field("mighty_gaps", &self.mighty_gaps)?;
        s.end()
    }
}

/// Which case of the "never four components" argument a report falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NotFourCase {
    /// No mighty primes: a single interval.
    NoMighty { count: usize },
    /// Largest mighty prime is 3 (`L_r = 2`): at most three components.
    LargestIsThree { count: usize },
    /// Three or more mighty primes: at least five components.
    ThreeOrMore { count: usize },
    /// Any other configuration; only `count != 4` is asserted.
    Other { count: usize },
}

impl NotFourCase {
    pub fn count(&self) -> usize {
        match *self {
            NotFourCase::NoMighty { count }
            | NotFourCase::LargestIsThree { count }
            | NotFourCase::ThreeOrMore { count }
            | NotFourCase::Other { count } => count,
        }
    }
}

/// Classifies an exact-count report and checks it against the case bound
/// and against `count != 4`.
pub fn classify_not_four(report: &ClosureReport) -> Result<NotFourCase> {
    let Some(count) = report.count() else {
        return Err(Error::proximity(
            None,
            format!(
                "component count is only known to lie in [{}, {}]",
                report.components_min, report.components_max
            ),
        ));
    };
    let summary = &report.summary;
    let case = if summary.count == 0 {
        NotFourCase::NoMighty { count }
    } else if summary.largest_index == 2 {
        NotFourCase::LargestIsThree { count }
    } else if summary.count >= 3 {
        NotFourCase::ThreeOrMore { count }
    } else {
        NotFourCase::Other { count }
    };
    let consistent = match case {
        NotFourCase::NoMighty { count } => count == 1,
        NotFourCase::LargestIsThree { count } => count <= 3,
        NotFourCase::ThreeOrMore { count } => count >= 5,
        NotFourCase::Other { .. } => true,
    };
    if !consistent || count == 4 {
        return Err(Error::AssertionFailure(format!(
            "{case:?} at r = {} violates the case bound or equals 4",
            report.r
        )));
    }
    Ok(case)
}
