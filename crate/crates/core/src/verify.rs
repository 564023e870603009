//! Named verification checks behind a common trait, looked up by name.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rust_decimal::Decimal;

use crate::certified::{compare, tail_product_euler, tail_sum, CertOrder, Enclosure, Precision};
use crate::closure::{classify_not_four, closure_report};
use crate::error::{Error, Result};
use crate::mighty::{is_mighty, MightyScanner, Verdict, NAGURA_START};
use crate::oracle;
use crate::primes;
use crate::sigma::{factor, SigmaEvaluator};
use crate::sweep;

/// Inputs shared by all checks; each check reads the fields it needs.
#[derive(Debug, Clone)]
pub struct CheckParams {
    pub prec: Precision,
    /// Exponents as exact decimal strings.
    pub r: Vec<String>,
    pub from: Decimal,
    pub to: Decimal,
    pub step: Decimal,
    pub threads: usize,
    pub n_max: u64,
    pub p_max: u64,
    pub cases: usize,
    pub seed: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            prec: Precision::default(),
            r: Vec::new(),
            from: Decimal::new(190, 2),
            to: Decimal::new(300, 2),
            step: Decimal::new(1, 2),
            threads: 1,
            n_max: 100_000,
            p_max: 10_000,
            cases: 200,
            seed: 0x5eed,
        }
    }
}

impl CheckParams {
    fn exponents(&self, default: &[&str]) -> Vec<String> {
        if self.r.is_empty() {
            default.iter().map(|s| s.to_string()).collect()
        } else {
            self.r.clone()
        }
    }
}

/// Result of one check: overall verdict plus human-readable detail lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            lines: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// `Err` means the check could not be carried out (e.g. an undecidable
    /// comparison); a completed check that found a violation returns
    /// `Ok` with `passed == false`.
    fn run(&self, params: &CheckParams) -> Result<CheckOutcome>;
}

pub struct CheckRegistry {
    checks: BTreeMap<&'static str, Box<dyn Check>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(NoFour));
        registry.register(Box::new(Bounds));
        registry.register(Box::new(OracleContainment));
        registry.register(Box::new(Sandwich));
        registry.register(Box::new(MainLower));
        registry.register(Box::new(ThreeNotMighty));
        registry
    }
}

impl CheckRegistry {
    pub fn empty() -> Self {
        Self {
            checks: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.insert(check.name(), check);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.keys().copied()
    }

    pub fn run(&self, name: &str, params: &CheckParams) -> Result<CheckOutcome> {
        let check = self.get(name).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown check {name:?}; available: {}",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        check.run(params)
    }
}

fn parse_r(s: &str, prec: Precision) -> Result<Enclosure> {
    Enclosure::from_decimal(s, prec.bits())
}

/// No grid point has exactly four components, and no count range
/// straddles four.
pub struct NoFour;

impl Check for NoFour {
    fn name(&self) -> &'static str {
        "no-four"
    }

    fn description(&self) -> &'static str {
        "component count is never 4 on a decimal grid of exponents"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        let points = sweep::grid(params.from, params.to, params.step)?;
        let rows = sweep::sweep(&points, params.prec, params.threads)?;
        let mut out = CheckOutcome::new(self.name());
        for row in &rows {
            let ok = row.exact_count() != Some(4) && !row.straddles_four();
            if !ok {
                out.record(
                    false,
                    format!(
                        "r = {}: components in [{}, {}]",
                        row.r, row.components_min, row.components_max
                    ),
                );
            }
        }
        for r in [&points[0], points.last().expect("non-empty grid")] {
            let report = closure_report(
                &sweep::decimal_enclosure(*r, params.prec.bits())?,
                params.prec,
            )?;
            match classify_not_four(&report) {
                Ok(case) => out.record(true, format!("r = {r}: {case:?}")),
                Err(Error::AssertionFailure(msg)) => out.record(false, msg),
                Err(e) => return Err(e),
            }
        }
        out.record(
            out.passed,
            format!(
                "{} grid points from {} to {} step {}",
                rows.len(),
                params.from,
                params.to,
                params.step
            ),
        );
        Ok(out)
    }
}

/// `N_r + 1 <= components_min <= components_max <= product bound` on a grid.
pub struct Bounds;

impl Check for Bounds {
    fn name(&self) -> &'static str {
        "bounds"
    }

    fn description(&self) -> &'static str {
        "component counts lie between N_r + 1 and the product bound"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        let points = sweep::grid(params.from, params.to, params.step)?;
        let rows = sweep::sweep(&points, params.prec, params.threads)?;
        let mut out = CheckOutcome::new(self.name());
        for row in &rows {
            if !row.bounds_hold() {
                out.record(
                    false,
                    format!(
                        "r = {}: {} <= [{}, {}] <= {} fails",
                        row.r,
                        row.lower_bound,
                        row.components_min,
                        row.components_max,
                        row.product_bound
                    ),
                );
            }
        }
        out.record(out.passed, format!("{} grid points checked", rows.len()));
        Ok(out)
    }
}

/// Every `sigma_{-r}(n)`, `n <= n_max`, meets a reported interval and avoids
/// every gap interior; each gap `(u_m, 1 + p_m^{-r})` holds an empirical gap.
pub struct OracleContainment;

impl Check for OracleContainment {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn description(&self) -> &'static str {
        "sampled divisor-function values fall in the reported intervals"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        let mut out = CheckOutcome::new(self.name());
        for r_text in params.exponents(&["2.0", "2.3", "3.0"]) {
            let r = parse_r(&r_text, params.prec)?;
            let report = closure_report(&r, params.prec)?;
            let intervals = &report.intervals.intervals;
            let mut eval = SigmaEvaluator::new(&r.with_prec(params.prec.bits()))?;
            let mut outside = 0usize;
            let mut in_gap = 0usize;
            let mut first_bad = None;
            for n in 1..=params.n_max {
                let v = eval.sigma(&factor(n)?);
                let hit = intervals
                    .iter()
                    .any(|iv| v.hi() >= iv.a.lo() && v.lo() <= iv.b.hi());
                let gap = report
                    .gaps
                    .iter()
                    .any(|(b, a)| v.lo() > b.hi() && v.hi() < a.lo());
                outside += usize::from(!hit);
                in_gap += usize::from(gap);
                if (!hit || gap) && first_bad.is_none() {
                    first_bad = Some(n);
                }
            }
            out.record(
                outside == 0 && in_gap == 0,
                format!(
                    "r = {r_text}: {} values, {} components, {outside} outside, {in_gap} in gaps{}",
                    params.n_max,
                    intervals.len(),
                    first_bad.map_or(String::new(), |n| format!(" (first n = {n})"))
                ),
            );

            let r_f64: f64 = r_text
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("not a number: {r_text}")))?;
            let sample = oracle::sample_values(r_f64, params.n_max)?;
            let narrowest = report
                .mighty_gaps
                .iter()
                .map(|(u, s)| s.lo_f64() - u.hi_f64())
                .fold(f64::INFINITY, f64::min);
            let min_width = if narrowest.is_finite() && narrowest > 0.0 {
                narrowest / 2.0
            } else {
                oracle::default_min_width(&sample)
            };
            let empirical = oracle::empirical_gaps(&sample, min_width)?;
            for ((u, s), &p) in report.mighty_gaps.iter().zip(&report.summary.mighty_primes) {
                let slack = 1e-12;
                let found = empirical
                    .iter()
                    .any(|&(x, y)| x <= u.hi_f64() + slack && y >= s.lo_f64() - slack);
                out.record(
                    found,
                    format!(
                        "r = {r_text}: gap (u_m, 1 + {p}^-r) = ({:.10}, {:.10}) {} an empirical gap",
                        u.mid_f64(),
                        s.mid_f64(),
                        if found { "contains" } else { "lacks" }
                    ),
                );
            }
        }
        Ok(out)
    }
}

/// Prime-sum truncation for the sandwich check; the tail past it is bounded
/// analytically, so this only trades enclosure width for speed.
pub const SANDWICH_TRUNCATION: u64 = 20_000;

/// Random `(m, r)` never certify a violation of
/// `S - S^2/2 <= 1 - 1/u_m <= S`, `S = sum_{t > m} p_t^{-r}`.
pub struct Sandwich;

impl Check for Sandwich {
    fn name(&self) -> &'static str {
        "sandwich"
    }

    fn description(&self) -> &'static str {
        "S - S^2/2 <= 1 - 1/u_m <= S for random m <= 20, r in [1.5, 4]"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        let mut rng = StdRng::seed_from_u64(params.seed);
        let mut out = CheckOutcome::new(self.name());
        let bits = params.prec.bits();
        let prec = Precision::new(bits, params.prec.truncation().min(SANDWICH_TRUNCATION))?;
        let mut violations = 0usize;
        let mut certified_low = 0usize;
        let mut certified_high = 0usize;
        for _ in 0..params.cases {
            let m = rng.gen_range(0..=20usize);
            let r_ten_thousandths = rng.gen_range(15_000..=40_000i64);
            let r = Enclosure::from_ratio(r_ten_thousandths, 10_000, bits)?;
            let s = tail_sum(m, &r, prec)?;
            let u = tail_product_euler(m, &r, prec)?;
            let one = Enclosure::from_int(1, bits);
            let middle = &one - &u.recip()?;
            let lower = &s - &s.square().div_u64(2)?;
            let low = compare(&lower, &middle);
            let high = compare(&middle, &s);
            certified_low += usize::from(low == CertOrder::Less);
            certified_high += usize::from(high == CertOrder::Less);
            if low == CertOrder::Greater || high == CertOrder::Greater {
                violations += 1;
                out.record(
                    false,
                    format!("m = {m}, r = {r}: S = {s}, 1 - 1/u_m = {middle}"),
                );
            }
        }
        out.record(
            violations == 0,
            format!(
                "{} cases (seed {}), {violations} certified violations; \
                 lower inequality certified in {certified_low}, upper in {certified_high}",
                params.cases, params.seed
            ),
        );
        Ok(out)
    }
}

/// Every prime below `r` is `r`-mighty.
pub struct MainLower;

impl Check for MainLower {
    fn name(&self) -> &'static str {
        "mainlower"
    }

    fn description(&self) -> &'static str {
        "every prime Q < r is r-mighty"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        let mut out = CheckOutcome::new(self.name());
        for r_text in params.exponents(&["2.5", "3.0", "3.5"]) {
            let r = parse_r(&r_text, params.prec)?;
            let table = primes::covering((r.hi_f64().ceil() as u64).max(2));
            let candidates: Vec<u64> = table
                .primes()
                .iter()
                .copied()
                .filter(|&q| compare(&Enclosure::from_u64(q, r.prec()), &r) == CertOrder::Less)
                .collect();
            if candidates.is_empty() {
                out.record(true, format!("r = {r_text}: no primes below r"));
            }
            for q in candidates {
                let v = is_mighty(q, &r, params.prec)?;
                out.record(
                    v.verdict == Verdict::Mighty,
                    format!(
                        "r = {r_text}: {q} is {:?} (1 + q^-r = {}, u_m = {})",
                        v.verdict, v.lhs, v.rhs
                    ),
                );
            }
        }
        Ok(out)
    }
}

/// Every prime in `[29, p_max]` is certified not 3-mighty.
pub struct ThreeNotMighty;

impl Check for ThreeNotMighty {
    fn name(&self) -> &'static str {
        "threenotf"
    }

    fn description(&self) -> &'static str {
        "no prime in [29, pmax] is 3-mighty"
    }

    fn run(&self, params: &CheckParams) -> Result<CheckOutcome> {
        if params.p_max < NAGURA_START {
            return Err(Error::InvalidArgument(format!(
                "pmax must be at least {NAGURA_START}, got {}",
                params.p_max
            )));
        }
        let r = Enclosure::from_int(3, params.prec.bits());
        let mut scanner = MightyScanner::new(&r, params.prec)?;
        let verdicts = scanner.scan_to(params.p_max)?;
        let mut out = CheckOutcome::new(self.name());
        let mut checked = 0usize;
        for v in verdicts.iter().filter(|v| v.prime >= NAGURA_START) {
            checked += 1;
            if v.verdict != Verdict::NotMighty {
                out.record(false, format!("{} is {:?} at r = 3", v.prime, v.verdict));
            }
        }
        out.record(
            out.passed,
            format!(
                "{checked} primes in [{NAGURA_START}, {}] checked at r = 3",
                params.p_max
            ),
        );
        Ok(out)
    }
}
