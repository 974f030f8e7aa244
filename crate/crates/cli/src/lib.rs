//! The `patcorr` command line. [`run`] parses arguments, executes one
//! subcommand and returns the text to print together with the exit status.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use patcorr::classify::{
    census, saturation_violation, twist, CensusFilter, CensusOptions, CensusReport,
    SaturationViolation,
};
use patcorr::oracle::{empirical_gamma, empirical_gamma_r, Estimate};
use patcorr::suites::{run_suite, Suite, SuiteOptions, SuiteReport};
use patcorr::{Correlations, Decision, Error, PatternSet, PeriodicFactor, Rational, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;

const MAX_SAMPLES: u64 = 1 << 32;

#[derive(Parser, Debug)]
#[command(
    name = "patcorr",
    version,
    about = "Correlations of base-k pattern-counting sequences"
)]
pub struct Cli {
    /// Output mode.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Base k.
    #[arg(short = 'k', long = "base", default_value_t = 2)]
    pub base: u8,
    /// Comma-separated patterns, e.g. "11,101"; "" is the empty set.
    #[arg(short = 'A', long = "set")]
    pub set: String,
}

impl SetArgs {
    fn parse(&self) -> patcorr::Result<PatternSet> {
        PatternSet::parse(&self.set, self.base)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether γ(m) = 0 for every m >= 1.
    Decide {
        #[command(flatten)]
        set: SetArgs,
        /// Work at this length instead of the longest pattern length.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Exact γ(m) for m = 1..=M.
    Gamma {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long = "m-max", default_value_t = 8)]
        m_max: u64,
    },
    /// Exhaustive binary census.
    Census {
        #[arg(short = 'k', long = "base", default_value_t = 2)]
        base: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        length: u8,
        /// Only sets of patterns beginning and ending with 1.
        #[arg(long = "self-invariant")]
        self_invariant: bool,
        /// Write the noncorrelated sets to this file, one per line.
        #[arg(long)]
        list: Option<PathBuf>,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Check the saturation condition.
    Saturation {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Split a(n) into a self-invariant part times a periodic factor.
    Decompose {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Multiply a(n) by a periodic sign sequence.
    Twist {
        #[command(flatten)]
        set: SetArgs,
        /// Comma-separated ±1 values, e.g. "+1,-1".
        #[arg(short = 'p', long = "signs", allow_hyphen_values = true)]
        signs: String,
    },
    /// Finite average (1/N) Σ a(n)a(n+m).
    Estimate {
        #[command(flatten)]
        set: SetArgs,
        #[arg(short = 'm', long = "shift")]
        m: u64,
        #[arg(short = 'N', long = "samples", default_value_t = 1 << 20)]
        samples: u64,
        /// Restrict to n ≡ r mod k^ℓ and rescale by k^ℓ.
        #[arg(long)]
        residue: Option<usize>,
    },
    /// Run a named invariant suite.
    Verify {
        #[arg(long, value_parser = ["theorem-a", "theorem-c", "saturated-props", "kernel-props"])]
        suite: String,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Random instances for the property suites.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaValue {
    pub m: u64,
    pub gamma: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationRecord {
    pub saturated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<SaturationViolation>,
}

/// One structured record per invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Record {
    Decide {
        base: u8,
        set: String,
        length: usize,
        #[serde(flatten)]
        decision: Decision,
    },
    Gamma {
        base: u8,
        set: String,
        values: Vec<GammaValue>,
    },
    Census(CensusReport),
    Saturation {
        base: u8,
        set: String,
        #[serde(flatten)]
        result: SaturationRecord,
    },
    Decompose {
        base: u8,
        set: String,
        invariant: String,
        factor: String,
    },
    Twist {
        base: u8,
        set: String,
        signs: String,
        twisted: String,
    },
    Estimate {
        base: u8,
        set: String,
        #[serde(flatten)]
        estimate: Estimate,
    },
    Verify(SuiteReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn failure(code: u8, message: impl Into<String>) -> Self {
        Output {
            code,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output::failure(code, text)
            };
        }
    };
    match execute(&cli.command) {
        Ok(record) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string(&record).expect("records serialize");
                    s.push('\n');
                    s
                }
                Format::Human => human(&record),
            };
            let code = match &record {
                Record::Verify(r) if !r.passed => EXIT_INTERNAL,
                _ => EXIT_OK,
            };
            Output {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Output::failure(exit_code(&e), format!("error: {e}\n")),
    }
}

/// Executes a parsed command.
pub fn execute(command: &Command) -> patcorr::Result<Record> {
    match command {
        Command::Decide { set, length } => {
            let a = set.parse()?;
            let len = length.unwrap_or_else(|| a.length());
            let decision = patcorr::decider::decide_at_length(&a, len)?;
            Ok(Record::Decide {
                base: a.base(),
                set: a.to_string(),
                length: len,
                decision,
            })
        }
        Command::Gamma { set, m_max } => {
            let a = set.parse()?;
            let mut c = Correlations::for_set(&a);
            let values = (1..=*m_max)
                .map(|m| {
                    Ok(GammaValue {
                        m,
                        gamma: c.gamma(m)?,
                    })
                })
                .collect::<patcorr::Result<_>>()?;
            Ok(Record::Gamma {
                base: a.base(),
                set: a.to_string(),
                values,
            })
        }
        Command::Census {
            base,
            length,
            self_invariant,
            list,
            workers,
        } => {
            if *workers == 0 {
                return Err(Error::InvalidArgument(
                    "--workers must be at least 1".into(),
                ));
            }
            let filter = if *self_invariant {
                CensusFilter::SelfInvariant
            } else {
                CensusFilter::All
            };
            let mut report = census(
                *base,
                &CensusOptions {
                    length: *length as usize,
                    filter,
                    emit_list: list.is_some(),
                    workers: *workers,
                },
            )?;
            if let Some(path) = list {
                let sets = report.noncorrelated_sets.take().unwrap_or_default();
                write_list(path, &report, &sets)?;
            }
            Ok(Record::Census(report))
        }
        Command::Saturation { set } => {
            let a = set.parse()?;
            let violation = saturation_violation(&a)?;
            Ok(Record::Saturation {
                base: a.base(),
                set: a.to_string(),
                result: SaturationRecord {
                    saturated: violation.is_none(),
                    violation,
                },
            })
        }
        Command::Decompose { set } => {
            let a = set.parse()?;
            let d = a.invariant_decomposition();
            Ok(Record::Decompose {
                base: a.base(),
                set: a.to_string(),
                invariant: d.invariant.to_string(),
                factor: d.factor.to_string(),
            })
        }
        Command::Twist { set, signs } => {
            let a = set.parse()?;
            let p = PeriodicFactor::parse(signs, a.base())?;
            let t = twist(&a, &p)?;
            Ok(Record::Twist {
                base: a.base(),
                set: a.to_string(),
                signs: p.to_string(),
                twisted: t.to_string(),
            })
        }
        Command::Estimate {
            set,
            m,
            samples,
            residue,
        } => {
            if *samples > MAX_SAMPLES {
                return Err(Error::InvalidArgument(format!(
                    "-N must be at most {MAX_SAMPLES}"
                )));
            }
            let a = set.parse()?;
            let estimate = match residue {
                Some(r) => empirical_gamma_r(&a, *r, *m, *samples)?,
                None => empirical_gamma(&a, *m, *samples)?,
            };
            Ok(Record::Estimate {
                base: a.base(),
                set: a.to_string(),
                estimate,
            })
        }
        Command::Verify {
            suite,
            workers,
            instances,
            seed,
        } => {
            let suite = Suite::from_name(suite)?;
            let opts = SuiteOptions {
                workers: (*workers).max(1),
                instances: *instances,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(Record::Verify(run_suite(suite, &opts, &mut rng)?))
        }
    }
}

fn write_list(path: &PathBuf, report: &CensusReport, sets: &[String]) -> patcorr::Result<()> {
    let mut text = format!(
        "# noncorrelated binary pattern sets, length {}, filter {}\n",
        report.length,
        filter_name(report.filter)
    );
    for s in sets {
        let line = if s.is_empty() { "{}" } else { s.as_str() };
        text.push_str(line);
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// Reads a list file: one pattern set per line, `#` starts a comment, `{}`
/// is the empty set.
pub fn read_list(text: &str, base: u8) -> patcorr::Result<Vec<PatternSet>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| PatternSet::parse(if l == "{}" { "" } else { l }, base))
        .collect()
}

fn filter_name(f: CensusFilter) -> &'static str {
    match f {
        CensusFilter::All => "all",
        CensusFilter::SelfInvariant => "self-invariant",
    }
}

fn show_set(s: &str) -> &str {
    if s.is_empty() {
        "{}"
    } else {
        s
    }
}

/// Human-readable rendering.
pub fn human(record: &Record) -> String {
    let mut out = String::new();
    match record {
        Record::Decide {
            decision, length, ..
        } => {
            let verdict = match decision.verdict {
                Verdict::Noncorrelated => "noncorrelated",
                Verdict::Correlated => "correlated",
            };
            let _ = writeln!(out, "verdict: {verdict}");
            if let (Some(m), Some(g)) = (decision.witness_m, &decision.gamma_witness) {
                let _ = writeln!(out, "witness: m = {m}, gamma(m) = {g}");
            }
            let _ = writeln!(
                out,
                "length: {length}\nelements: {}\nexpansions: {}",
                decision.elements_created, decision.expansions
            );
        }
        Record::Gamma { values, .. } => {
            for v in values {
                let _ = writeln!(out, "{}: {}", v.m, v.gamma);
            }
        }
        Record::Census(r) => {
            let _ = writeln!(
                out,
                "length {} ({}): {} noncorrelated of {} candidates",
                r.length,
                filter_name(r.filter),
                r.noncorrelated,
                r.candidates
            );
            for s in &r.by_exact_length {
                let _ = writeln!(
                    out,
                    "  exact length {}: {} noncorrelated, {} saturated, {} candidates",
                    s.length, s.noncorrelated, s.saturated, s.candidates
                );
            }
            let _ = writeln!(
                out,
                "witnesses verified: {}\nmax stored: {} (bound {})",
                r.witnesses_verified, r.max_elements_stored, r.capacity_bound
            );
            if !r.saturation_mismatches.is_empty() {
                let _ = writeln!(
                    out,
                    "saturation mismatches: {}",
                    r.saturation_mismatches.join("; ")
                );
            }
            let _ = writeln!(
                out,
                "time: {:.2}s wall, {:.2}s noncorrelated, {:.2}s correlated",
                r.timing.wall_secs, r.timing.noncorrelated_secs, r.timing.correlated_secs
            );
        }
        Record::Saturation { result, .. } => {
            let _ = writeln!(out, "saturated: {}", result.saturated);
            if let Some(v) = &result.violation {
                let _ = writeln!(
                    out,
                    "violation: u = {}, i0 = {}, i1 = {}, size = {}",
                    show_set(&v.u),
                    v.i0,
                    v.i1,
                    v.size
                );
            }
        }
        Record::Decompose {
            invariant, factor, ..
        } => {
            let _ = writeln!(out, "invariant: {}\nfactor: {factor}", show_set(invariant));
        }
        Record::Twist { twisted, .. } => {
            let _ = writeln!(out, "{}", show_set(twisted));
        }
        Record::Estimate { estimate, .. } => {
            let _ = writeln!(
                out,
                "estimate: {:.6} (m = {}, N = {})",
                estimate.value, estimate.shift, estimate.samples
            );
        }
        Record::Verify(r) => {
            let status = if r.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{}: {status} ({} cases)", r.suite.name(), r.cases);
            if let Some(f) = &r.failure {
                let _ = writeln!(out, "failure: {f}");
            }
        }
    }
    out
}
