//! Command-line driver: `check`, `search`, `selftest` and `bench`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::arith::{Natural, OddPrime};
use crate::bench::run_bench;
use crate::filters::{
    evaluate, Candidate, CandidateRecord, Certificate, FilterId, Pipeline, Verdict, DEFAULT_MODULI,
    DEFAULT_PIPELINE,
};
use crate::search::{oracle_check, run_search, JsonLinesSink, SearchConfig, SearchError, SearchSink, Tuple};
use crate::selftest::{run_selftest, Fault, IdentityOps};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Finished, no oracle solutions.
    Completed = 0,
    /// Bad flags or config, or an output file could not be written.
    Usage = 1,
    /// The oracle confirmed a solution.
    SolutionFound = 2,
    /// A certificate failed its re-check or a self-test failed.
    InternalFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fermat-refute",
    version,
    about = "Certified refutation of candidate solutions to x^p + y^p = z^p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one candidate against the filter pipeline and the oracle.
    Check(CheckArgs),
    /// Sweep a range of candidates.
    Search(SearchArgs),
    /// Run the built-in verification suites.
    Selftest(SelftestArgs),
    /// Time each filter and the oracle over a range.
    Bench(RangeArgs),
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Comma-separated filter ids, applied in order.
    #[arg(long, value_delimiter = ',')]
    pub pipeline: Vec<FilterId>,
    /// Comma-separated moduli for the MODULAR filter.
    #[arg(long, value_delimiter = ',')]
    pub moduli: Vec<Natural>,
    /// Permit T1_EXTERNAL, whose certificates rest on an external theorem.
    #[arg(long)]
    pub allow_external: bool,
}

impl PipelineArgs {
    fn filters(&self) -> Vec<FilterId> {
        if self.pipeline.is_empty() {
            DEFAULT_PIPELINE.to_vec()
        } else {
            self.pipeline.clone()
        }
    }

    fn moduli(&self) -> Vec<Natural> {
        if self.moduli.is_empty() {
            DEFAULT_MODULI.iter().copied().map(Natural::from).collect()
        } else {
            self.moduli.clone()
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub x: Natural,
    pub y: Natural,
    pub z: Natural,
    pub p: Natural,
    /// Accept exponents that are not odd primes (filters are skipped).
    #[arg(long)]
    pub generalized: bool,
    /// Print one JSON record instead of prose.
    #[arg(long)]
    pub json_lines: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Shorthand for equal x, y and z bounds.
    #[arg(long)]
    pub max: Option<Natural>,
    #[arg(long)]
    pub x_max: Option<Natural>,
    #[arg(long)]
    pub y_max: Option<Natural>,
    #[arg(long)]
    pub z_min: Option<Natural>,
    #[arg(long)]
    pub z_max: Option<Natural>,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<Natural>,
    /// Only pairs with gcd(x, y) = 1.
    #[arg(long)]
    pub coprime_only: bool,
    /// Enumerate both (x, y) and (y, x).
    #[arg(long)]
    pub all_orders: bool,
    /// Only x, y < z.
    #[arg(long)]
    pub legs_below_z: bool,
    /// Accept exponents that are not odd primes.
    #[arg(long)]
    pub generalized: bool,
    /// Re-verify every certificate while sweeping.
    #[arg(long)]
    pub recheck: bool,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

impl RangeArgs {
    pub fn to_config(&self) -> Result<SearchConfig, String> {
        let bound = |value: &Option<Natural>, flag: &str| -> Result<Option<u64>, String> {
            value
                .as_ref()
                .or(self.max.as_ref())
                .map(|v| v.to_u64().ok_or_else(|| format!("--{flag} {v} exceeds the supported range")))
                .transpose()
        };
        let missing = |flag: &str| format!("--{flag} or --max is required");
        let x_max = bound(&self.x_max, "x-max")?.ok_or_else(|| missing("x-max"))?;
        let y_max = bound(&self.y_max, "y-max")?.ok_or_else(|| missing("y-max"))?;
        let z_max = bound(&self.z_max, "z-max")?.ok_or_else(|| missing("z-max"))?;
        let z_min = match &self.z_min {
            Some(v) => v.to_u64().ok_or_else(|| format!("--z-min {v} exceeds the supported range"))?,
            None => 1,
        };
        Ok(SearchConfig {
            x_max,
            y_max,
            z_min,
            z_max,
            p_set: self.p.clone(),
            pipeline: self.pipeline.filters(),
            modular_moduli: self.pipeline.moduli(),
            coprime_only: self.coprime_only,
            canonical_xy: !self.all_orders,
            legs_below_z: self.legs_below_z,
            generalized: self.generalized,
            allow_external: self.pipeline.allow_external,
            recheck_certificates: self.recheck,
            worker_count: 1,
        })
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub range: RangeArgs,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write certificates here as JSON lines.
    #[arg(long)]
    pub certificates: Option<PathBuf>,
    /// Write the JSON report here, and a CSV table beside it.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Swap in a corrupted identity operation to confirm the suite notices.
    #[arg(long, hide = true)]
    pub inject_fault: Option<Fault>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Completed };
        }
    };
    let result = match cli.command {
        Command::Check(args) => cmd_check(&args, out),
        Command::Search(args) => cmd_search(&args, out),
        Command::Selftest(args) => cmd_selftest(&args, out),
        Command::Bench(args) => cmd_bench(&args, out),
    };
    match result {
        Ok(status) => status,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            ExitStatus::Usage
        }
    }
}

type CmdResult = Result<ExitStatus, String>;

fn io_err(e: io::Error) -> String {
    e.to_string()
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum CheckVerdict {
    Refuted,
    Inconclusive,
    /// The exponent is outside the filters' domain.
    Unfiltered,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    candidate: CandidateRecord,
    verdict: CheckVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a Certificate>,
    /// Absent when a filter already refuted the candidate.
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_solution: Option<bool>,
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let (x, y, z, p) = (&args.x, &args.y, &args.z, &args.p);
    if x.is_zero() || y.is_zero() || z.is_zero() || p.is_zero() {
        return Err("x, y, z and p must be positive".into());
    }
    let verdict = match OddPrime::new(p.clone()) {
        Ok(prime) => {
            let pipeline =
                Pipeline::new(args.pipeline.filters(), args.pipeline.moduli(), args.pipeline.allow_external)
                    .map_err(|e| e.to_string())?;
            let candidate =
                Candidate::new(x.clone(), y.clone(), z.clone(), prime).map_err(|e| e.to_string())?;
            Some(evaluate(&candidate, &pipeline))
        }
        Err(_) if args.generalized => None,
        Err(_) => return Err(format!("p = {p} is not an odd prime (pass --generalized to allow it)")),
    };

    let certificate = verdict.as_ref().and_then(Verdict::certificate);
    let oracle = match certificate {
        Some(_) => None,
        None => {
            let e = p.to_u32().ok_or_else(|| format!("p = {p} is too large for the oracle"))?;
            Some(oracle_check(x, y, z, e))
        }
    };

    if args.json_lines {
        let record = CheckRecord {
            candidate: CandidateRecord { x: x.clone(), y: y.clone(), z: z.clone(), p: p.clone() },
            verdict: match &verdict {
                Some(Verdict::Refuted(_)) => CheckVerdict::Refuted,
                Some(Verdict::Inconclusive) => CheckVerdict::Inconclusive,
                None => CheckVerdict::Unfiltered,
            },
            certificate,
            oracle_solution: oracle,
        };
        let line = serde_json::to_string(&record).map_err(|e| e.to_string())?;
        writeln!(out, "{line}").map_err(io_err)?;
    } else {
        let oracle_text = |solution: bool| if solution { "SOLUTION" } else { "not a solution" };
        match (&verdict, oracle) {
            (Some(Verdict::Refuted(cert)), _) => writeln!(out, "Refuted by {}: {cert}", cert.filter_id()),
            (Some(Verdict::Inconclusive), Some(s)) => {
                writeln!(out, "Inconclusive by filters; oracle: {}", oracle_text(s))
            }
            (_, Some(s)) => writeln!(out, "Filters skipped (p not an odd prime); oracle: {}", oracle_text(s)),
            (_, None) => unreachable!("the oracle runs whenever no certificate exists"),
        }
        .map_err(io_err)?;
    }
    Ok(if oracle == Some(true) { ExitStatus::SolutionFound } else { ExitStatus::Completed })
}

/// Writes certificates to an optional JSON-lines file and keeps solutions.
struct CliSink {
    certificates: Option<JsonLinesSink<File>>,
    solutions: Vec<Tuple>,
}

impl SearchSink for CliSink {
    fn wants_certificates(&self) -> bool {
        self.certificates.is_some()
    }

    fn certificate(&mut self, record: &crate::filters::CertificateRecord) -> io::Result<()> {
        match &mut self.certificates {
            Some(sink) => sink.certificate(record),
            None => Ok(()),
        }
    }

    fn solution(&mut self, tuple: &Tuple) -> io::Result<()> {
        self.solutions.push(tuple.clone());
        Ok(())
    }

    fn finish(&mut self) -> io::Result<()> {
        match &mut self.certificates {
            Some(sink) => sink.finish(),
            None => Ok(()),
        }
    }
}

/// The CSV table lives beside the JSON report with a `.csv` extension.
pub fn csv_path_for(report: &Path) -> PathBuf {
    report.with_extension("csv")
}

fn cmd_search(args: &SearchArgs, out: &mut dyn Write) -> CmdResult {
    let mut cfg = args.range.to_config()?;
    cfg.worker_count = match args.workers {
        Some(0) => return Err("--workers must be at least 1".into()),
        Some(k) => k,
        None => std::thread::available_parallelism().map_or(1, usize::from),
    };
    let certificates = match &args.certificates {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Some(JsonLinesSink::new(file))
        }
        None => None,
    };
    let mut sink = CliSink { certificates, solutions: Vec::new() };
    let report = match run_search(&cfg, Some(&mut sink)) {
        Ok(report) => report,
        Err(SearchError::Sink { source, partial }) => {
            return Err(format!(
                "writing certificates failed after {} candidates: {source}",
                partial.counts.total_candidates
            ))
        }
        Err(e) => return Err(e.to_string()),
    };

    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
        let csv = csv_path_for(path);
        std::fs::write(&csv, report.to_csv()).map_err(|e| format!("{}: {e}", csv.display()))?;
    }

    let c = &report.counts;
    let summary = (|| -> io::Result<()> {
        writeln!(out, "config: {}", report.config.to_cli_args().join(" "))?;
        writeln!(
            out,
            "candidates: {}  refuted: {}  survivors: {}  oracle solutions: {}  recheck failures: {}",
            c.total_candidates,
            c.total_refuted(),
            c.survivors_to_oracle,
            c.oracle_solutions_found,
            c.recheck_failures
        )?;
        for (id, n) in &c.refuted_by_filter {
            writeln!(out, "  {id:<14} {n}")?;
        }
        for t in &sink.solutions {
            writeln!(out, "solution: {}^{p} + {}^{p} = {}^{p}", t.x, t.y, t.z, p = t.p)?;
        }
        writeln!(out, "workers: {}  wall time: {:.3} s", cfg.worker_count, report.wall_time.as_secs_f64())
    })();
    summary.map_err(io_err)?;

    Ok(if c.recheck_failures > 0 {
        ExitStatus::InternalFailure
    } else if c.oracle_solutions_found > 0 {
        ExitStatus::SolutionFound
    } else {
        ExitStatus::Completed
    })
}

fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> CmdResult {
    let ops = args.inject_fault.map_or_else(IdentityOps::default, IdentityOps::with_fault);
    let report = run_selftest(&ops);
    write!(out, "{report}").map_err(io_err)?;
    Ok(if report.all_passed() { ExitStatus::Completed } else { ExitStatus::InternalFailure })
}

fn cmd_bench(args: &RangeArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = args.to_config()?;
    let report = run_bench(&cfg).map_err(|e| e.to_string())?;
    write!(out, "{report}").map_err(io_err)?;
    Ok(ExitStatus::Completed)
}
