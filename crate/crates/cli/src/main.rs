use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rust_decimal::Decimal;
use serde::Serialize;

use sigma_closure::certified::DEFAULT_TRUNCATION;
use sigma_closure::closure::{closure_report_for, ClosureReport};
use sigma_closure::mighty::{self, enumerate_mighty};
use sigma_closure::oracle;
use sigma_closure::sweep;
use sigma_closure::verify::{CheckParams, CheckRegistry};
use sigma_closure::{Enclosure, Error, Precision};

#[derive(Parser)]
#[command(
    name = "sigma-closure",
    version,
    about = "Certified closure of sigma_{-r}(N)"
)]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "SIGMA_PREC_BITS", default_value_t = 128)]
    prec_bits: u32,

    /// Largest prime to scan when the enumeration cannot be certified complete.
    #[arg(long, global = true)]
    scan_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enclose eta, the largest r with a connected closure.
    Eta {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Enclose the threshold r_p above which p is r-mighty.
    Threshold {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// List the r-mighty primes.
    Mighty {
        #[arg(long)]
        r: String,
    },
    /// Compute the closure intervals at one exponent.
    Closure {
        #[arg(long)]
        r: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Component counts over a decimal grid, as CSV.
    Sweep {
        #[arg(long)]
        from: Decimal,
        #[arg(long)]
        to: Decimal,
        #[arg(long)]
        step: Decimal,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Run a named verification check.
    Verify {
        #[arg(long)]
        check: String,
        /// Exponent(s); repeat the flag for several.
        #[arg(long)]
        r: Vec<String>,
        #[arg(long)]
        nmax: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        from: Option<Decimal>,
        #[arg(long)]
        to: Option<Decimal>,
        #[arg(long)]
        step: Option<Decimal>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Double-precision values sigma_{-r}(n), n <= nmax, sorted, as CSV.
    Sample {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        nmax: u64,
        /// Print the empirical gaps wider than this instead of the values.
        #[arg(long)]
        gaps: Option<f64>,
    },
}

const EXIT_INVALID: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_INCOMPLETE: u8 = 4;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::DivergentInput(_) => EXIT_INVALID,
        Error::ThresholdProximity { .. }
        | Error::UndecidedSign { .. }
        | Error::BracketFailure(_)
        | Error::IndeterminateDivision => EXIT_UNDECIDED,
        Error::IncompleteEnumeration { .. } => EXIT_INCOMPLETE,
        Error::AssertionFailure(_) | Error::Internal(_) | Error::NeedsLargerSieve { .. } => {
            EXIT_VERIFICATION
        }
    }
}

enum Failure {
    Engine(Error),
    Verification(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization: {e}")))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct ToleranceReport<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    value: &'a Enclosure,
    tol: f64,
    precision_bits: u32,
}

fn closure_text(report: &ClosureReport) -> String {
    let mut s = String::new();
    let summary = &report.summary;
    s.push_str(&format!(
        "r = [{}, {}]\n",
        report.r.lo_decimal(),
        report.r.hi_decimal()
    ));
    s.push_str(&format!(
        "mighty primes: {:?} (N_r = {}, complete = {})\n",
        summary.mighty_primes, summary.count, summary.enumeration_complete
    ));
    match report.count() {
        Some(c) => s.push_str(&format!("components: {c}\n")),
        None => s.push_str(&format!(
            "components: between {} and {}\n",
            report.components_min, report.components_max
        )),
    }
    s.push_str(&format!(
        "bounds: {} <= C_r <= {}\n",
        report.lower_bound, report.product_bound
    ));
    for (i, iv) in report.intervals.intervals.iter().enumerate() {
        s.push_str(&format!(
            "{:>3}  [{}, {}]  = [{}, {}]\n",
            i + 1,
            iv.a.lo_decimal(),
            iv.b.hi_decimal(),
            iv.a_expr,
            iv.b_expr
        ));
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let prec = Precision::new(cli.prec_bits, DEFAULT_TRUNCATION)?;
    let parse_r = |r: &str| Enclosure::from_decimal(r, prec.bits());
    match cli.command {
        Command::Eta { tol } => {
            let value = mighty::eta(tol, prec)?;
            print_json(&ToleranceReport {
                p: None,
                value: &value,
                tol,
                precision_bits: prec.bits(),
            })
        }
        Command::Threshold { p, tol } => {
            let value = mighty::threshold(p, tol, prec)?;
            print_json(&ToleranceReport {
                p: Some(p),
                value: &value,
                tol,
                precision_bits: prec.bits(),
            })
        }
        Command::Mighty { r } => {
            let summary = enumerate_mighty(&parse_r(&r)?, prec, cli.scan_cap)?;
            print_json(&summary)
        }
        Command::Closure { r, format } => {
            let summary = enumerate_mighty(&parse_r(&r)?, prec, cli.scan_cap)?;
            let report = closure_report_for(summary, prec)?;
            match format {
                Format::Json => print_json(&report),
                Format::Text => {
                    print!("{}", closure_text(&report));
                    Ok(())
                }
                Format::Csv => Err(Error::InvalidArgument(
                    "closure supports --format json or text".into(),
                )
                .into()),
            }
        }
        Command::Sweep {
            from,
            to,
            step,
            parallel,
        } => {
            let points = sweep::grid(from, to, step)?;
            let rows = sweep::sweep(&points, prec, parallel)?;
            sweep::write_csv(&rows, io::stdout().lock())?;
            let bad: Vec<String> = rows
                .iter()
                .filter(|row| row.straddles_four() || row.exact_count() == Some(4))
                .map(|row| row.r.to_string())
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "component count 4 not excluded at r = {}",
                    bad.join(", ")
                )))
            }
        }
        Command::Verify {
            check,
            r,
            nmax,
            pmax,
            cases,
            seed,
            from,
            to,
            step,
            parallel,
        } => {
            let defaults = CheckParams::default();
            let params = CheckParams {
                prec,
                r,
                from: from.unwrap_or(defaults.from),
                to: to.unwrap_or(defaults.to),
                step: step.unwrap_or(defaults.step),
                threads: parallel,
                n_max: nmax.unwrap_or(defaults.n_max),
                p_max: pmax.unwrap_or(defaults.p_max),
                cases: cases.unwrap_or(defaults.cases),
                seed: seed.unwrap_or(defaults.seed),
            };
            let outcome = CheckRegistry::default().run(&check, &params)?;
            let mut out = io::stdout().lock();
            for line in &outcome.lines {
                writeln!(out, "{line}")?;
            }
            writeln!(
                out,
                "{}: {}",
                outcome.name,
                if outcome.passed { "PASS" } else { "FAIL" }
            )?;
            if outcome.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "check {} failed",
                    outcome.name
                )))
            }
        }
        Command::Sample { r, nmax, gaps } => {
            let sample = oracle::sample_values(r, nmax)?;
            let mut out = io::BufWriter::new(io::stdout().lock());
            match gaps {
                None => sample.write_csv(&mut out)?,
                Some(width) => {
                    writeln!(out, "lo,hi")?;
                    for (lo, hi) in oracle::empirical_gaps(&sample, width)? {
                        writeln!(out, "{lo:.17e},{hi:.17e}")?;
                    }
                }
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}
