//! Closure reports over an exact decimal grid of exponents.

use std::io::{self, Write};

use rayon::prelude::*;
use rust_decimal::Decimal;
use serde::Serialize;

use crate::certified::{Enclosure, Precision};
use crate::closure::{closure_report, ClosureReport};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "r,count_mighty,components_min,components_max,lower_bound,product_bound,enumeration_complete";

/// The counts of one [`ClosureReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub r: Decimal,
    pub count_mighty: usize,
    pub components_min: usize,
    pub components_max: usize,
    pub lower_bound: usize,
    pub product_bound: u64,
    pub enumeration_complete: bool,
}

impl SweepRow {
    pub fn from_report(r: Decimal, report: &ClosureReport) -> Self {
        Self {
            r,
            count_mighty: report.summary.count,
            components_min: report.components_min,
            components_max: report.components_max,
            lower_bound: report.lower_bound,
            product_bound: report.product_bound,
            enumeration_complete: report.summary.enumeration_complete,
        }
    }

    pub fn exact_count(&self) -> Option<usize> {
        (self.components_min == self.components_max).then_some(self.components_min)
    }

    /// A count range that contains 4 but is not pinned down.
    pub fn straddles_four(&self) -> bool {
        self.components_min != self.components_max
            && self.components_min <= 4
            && 4 <= self.components_max
    }

    /// `lower_bound <= components_min <= components_max <= product_bound`.
    pub fn bounds_hold(&self) -> bool {
        self.lower_bound <= self.components_min
            && self.components_min <= self.components_max
            && self.components_max as u64 <= self.product_bound
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.r,
            self.count_mighty,
            self.components_min,
            self.components_max,
            self.lower_bound,
            self.product_bound,
            self.enumeration_complete
        )
    }
}

/// `from, from + step, ...` up to and including `to`, in exact decimal
/// arithmetic.
pub fn grid(from: Decimal, to: Decimal, step: Decimal) -> Result<Vec<Decimal>> {
    if from <= Decimal::ONE {
        return Err(Error::InvalidArgument(format!(
            "sweep must start above 1, got {from}"
        )));
    }
    if step <= Decimal::ZERO {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    if to < from {
        return Err(Error::InvalidArgument(format!("empty range {from}..{to}")));
    }
    let mut points = Vec::new();
    let mut k = Decimal::ZERO;
    loop {
        let r = from + k * step;
        if r > to {
            break;
        }
        points.push(r.normalize());
        k += Decimal::ONE;
    }
    Ok(points)
}

pub fn decimal_enclosure(r: Decimal, bits: u32) -> Result<Enclosure> {
    Enclosure::from_decimal(&r.to_string(), bits)
}

pub fn sweep_row(r: Decimal, prec: Precision) -> Result<SweepRow> {
    let report = closure_report(&decimal_enclosure(r, prec.bits())?, prec)?;
    Ok(SweepRow::from_report(r, &report))
}

/// One row per grid point, in grid order whatever the thread count. The
/// first failing point (in grid order) is returned as the error.
pub fn sweep(points: &[Decimal], prec: Precision, threads: usize) -> Result<Vec<SweepRow>> {
    let run =
        || -> Vec<Result<SweepRow>> { points.par_iter().map(|&r| sweep_row(r, prec)).collect() };
    let rows = if threads <= 1 {
        points.iter().map(|&r| sweep_row(r, prec)).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run)
    };
    rows.into_iter().collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}
