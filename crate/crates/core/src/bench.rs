//! Timing of the individual filters and the oracle over a candidate range.
//!
//! Timings are machine-dependent and only reported. Candidate and refutation
//! counts are deterministic.

use std::fmt;
use std::time::{Duration, Instant};

use crate::arith::OddPrime;
use crate::filters::{evaluate, Candidate, Pipeline};
use crate::search::{enumerate_candidates, oracle_check, SearchConfig, SearchError};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// Filter id, or `ORACLE`.
    pub name: String,
    pub evaluations: u64,
    /// Candidates this filter refutes on its own; `None` for the oracle.
    pub refuted: Option<u64>,
    pub mean_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub candidates: u64,
    pub rows: Vec<BenchRow>,
    /// Candidates left for the oracle after the full pipeline.
    pub survivors: u64,
    pub pipeline_time: Duration,
    pub oracle_only_time: Duration,
}

impl BenchReport {
    /// Throughput of pipeline-then-oracle relative to the oracle alone;
    /// above 1 means the filters pay for themselves.
    pub fn throughput_ratio(&self) -> f64 {
        let pipeline = self.pipeline_time.as_secs_f64();
        if pipeline == 0.0 {
            return f64::INFINITY;
        }
        self.oracle_only_time.as_secs_f64() / pipeline
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14} {:>12} {:>12} {:>12}", "stage", "evaluations", "refuted", "mean_ns")?;
        for row in &self.rows {
            let refuted = row.refuted.map_or_else(|| "-".to_owned(), |n| n.to_string());
            writeln!(f, "{:<14} {:>12} {:>12} {:>12.1}", row.name, row.evaluations, refuted, row.mean_ns)?;
        }
        writeln!(f, "candidates: {}  survivors: {}", self.candidates, self.survivors)?;
        writeln!(
            f,
            "pipeline+oracle: {:.3} ms  oracle only: {:.3} ms  throughput ratio: {:.2}",
            self.pipeline_time.as_secs_f64() * 1e3,
            self.oracle_only_time.as_secs_f64() * 1e3,
            self.throughput_ratio()
        )
    }
}

fn mean_ns(elapsed: Duration, n: u64) -> f64 {
    elapsed.as_nanos() as f64 / n as f64
}

/// Times every pipeline filter and the oracle over the candidates of `cfg`.
///
/// Fails on an invalid config, on exponents outside the odd primes, and on
/// a range with no candidates.
pub fn run_bench(cfg: &SearchConfig) -> Result<BenchReport, SearchError> {
    let pipeline = Pipeline::new(cfg.pipeline.clone(), cfg.modular_moduli.clone(), cfg.allow_external)?;
    let mut candidates = Vec::new();
    for t in enumerate_candidates(cfg)? {
        let p = OddPrime::new(t.p.clone())
            .map_err(|_| SearchError::Config(format!("bench needs odd prime exponents, got {}", t.p)))?;
        candidates.push(Candidate::new(t.x, t.y, t.z, p)?);
    }
    if candidates.is_empty() {
        return Err(SearchError::Config("range contains no candidates".into()));
    }
    let total = candidates.len() as u64;
    let exponent = |c: &Candidate| c.p().exponent().expect("validated exponent fits u32");

    let mut rows = Vec::with_capacity(pipeline.filters().len() + 1);
    for &id in pipeline.filters() {
        let started = Instant::now();
        let refuted = candidates.iter().filter(|c| pipeline.apply(id, c).is_refuted()).count() as u64;
        rows.push(BenchRow {
            name: id.to_string(),
            evaluations: total,
            refuted: Some(refuted),
            mean_ns: mean_ns(started.elapsed(), total),
        });
    }

    let started = Instant::now();
    for c in &candidates {
        std::hint::black_box(oracle_check(c.x(), c.y(), c.z(), exponent(c)));
    }
    let oracle_only_time = started.elapsed();
    rows.push(BenchRow {
        name: "ORACLE".into(),
        evaluations: total,
        refuted: None,
        mean_ns: mean_ns(oracle_only_time, total),
    });

    let started = Instant::now();
    let mut survivors = 0u64;
    for c in &candidates {
        if !evaluate(c, &pipeline).is_refuted() {
            survivors += 1;
            std::hint::black_box(oracle_check(c.x(), c.y(), c.z(), exponent(c)));
        }
    }
    let pipeline_time = started.elapsed();

    Ok(BenchReport { candidates: total, rows, survivors, pipeline_time, oracle_only_time })
}
