//! Exhaustive sweeps: enumeration, filtering, exact oracle fallback and
//! deterministic aggregation across worker threads.
//!
//! The candidate space is cut into shards, one per `(p, z)` pair, in
//! p-major then z order. Workers claim shards from a shared counter; their
//! outputs are released to the sink strictly in shard order, so both the
//! report and the certificate stream are independent of `worker_count`.

mod config;
mod report;
mod sink;

use std::collections::BTreeMap;
use std::io;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Natural};
use crate::filters::{recheck::recheck, Candidate, CertificateRecord, FilterError, Verdict};

pub use config::SearchConfig;
use config::{Exponent, Plan};
pub use report::{merge_reports, Counts, SearchReport};
pub use sink::{JsonLinesSink, SearchSink};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    Config(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("reports come from different search configs")]
    ConfigMismatch,
    #[error("reports overlap at z = {z}")]
    OverlappingShards { z: u64 },
    #[error("certificate sink failed: {source}")]
    Sink {
        source: io::Error,
        /// Counts up to the failure, marked incomplete.
        partial: Box<SearchReport>,
    },
}

/// A tuple `(x, y, z, p)` with any exponent `p >= 1`; candidates proper
/// have `p` an odd prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tuple {
    pub x: Natural,
    pub y: Natural,
    pub z: Natural,
    pub p: Natural,
}

/// Exact test of `x^p + y^p = z^p`.
///
/// Size comparisons decide most non-solutions before any power is formed:
/// a leg at least `z` already makes the left side too large, and the bit
/// length of each side is confined to a window of width `p`.
pub fn oracle_check(x: &Natural, y: &Natural, z: &Natural, p: u32) -> bool {
    if p == 0 {
        // 1 + 1 != 1
        return false;
    }
    if x.is_zero() || y.is_zero() {
        return x.pow(p) + y.pow(p) == z.pow(p);
    }
    if x >= z || y >= z {
        return false;
    }
    let p64 = u64::from(p);
    // 2^((b-1)p) <= n^p < 2^(bp) for an n with b bits.
    let (bx, by, bz) = (x.bits(), y.bits(), z.bits());
    let lhs_hi = bx.max(by) * p64 + 1;
    let lhs_lo = (bx.max(by) - 1) * p64 + 1;
    let rhs_hi = bz * p64;
    let rhs_lo = (bz - 1) * p64 + 1;
    if lhs_hi < rhs_lo || rhs_hi < lhs_lo {
        return false;
    }
    x.pow(p) + y.pow(p) == z.pow(p)
}

/// Every tuple the config enumerates, in shard order.
pub fn enumerate_candidates(cfg: &SearchConfig) -> Result<impl Iterator<Item = Tuple> + '_, SearchError> {
    let plan = cfg.validate()?;
    let shards = shards(cfg, &plan);
    Ok(shards.into_iter().flat_map(move |shard| {
        let p = Natural::from(shard.exponent.value());
        pairs(cfg, shard.z).map(move |(x, y)| Tuple {
            x: x.into(),
            y: y.into(),
            z: shard.z.into(),
            p: p.clone(),
        })
    }))
}

#[derive(Clone)]
struct Shard {
    exponent: Exponent,
    z: u64,
}

fn shards(cfg: &SearchConfig, plan: &Plan) -> Vec<Shard> {
    plan.exponents
        .iter()
        .flat_map(|e| (cfg.z_min..=cfg.z_max).map(move |z| Shard { exponent: e.clone(), z }))
        .collect()
}

fn pairs(cfg: &SearchConfig, z: u64) -> impl Iterator<Item = (u64, u64)> {
    let (xm, ym) = cfg.leg_limits(z);
    let canonical = cfg.canonical_xy;
    let coprime = cfg.coprime_only;
    (1..=xm)
        .flat_map(move |x| (if canonical { x } else { 1 }..=ym).map(move |y| (x, y)))
        .filter(move |&(x, y)| !coprime || num_integer::gcd(x, y) == 1)
}

struct ShardOutput {
    counts: Counts,
    records: Vec<CertificateRecord>,
    solutions: Vec<Tuple>,
}

fn run_shard(cfg: &SearchConfig, plan: &Plan, shard: &Shard, collect: bool) -> ShardOutput {
    let mut out = ShardOutput {
        counts: Counts::for_pipeline(plan.pipeline.filters()),
        records: Vec::new(),
        solutions: Vec::new(),
    };
    let z = Natural::from(shard.z);
    let p = shard.exponent.value();
    for (x, y) in pairs(cfg, shard.z) {
        let (x, y) = (Natural::from(x), Natural::from(y));
        out.counts.total_candidates += 1;
        if let Exponent::Prime(prime, _) = &shard.exponent {
            let candidate = Candidate::new(x.clone(), y.clone(), z.clone(), prime.clone())
                .expect("enumerated components are positive");
            if let Verdict::Refuted(cert) = crate::filters::evaluate(&candidate, &plan.pipeline) {
                *out.counts.refuted_by_filter.entry(cert.filter_id()).or_insert(0) += 1;
                if cfg.recheck_certificates && recheck(&candidate, &cert).is_err() {
                    out.counts.recheck_failures += 1;
                }
                if collect {
                    out.records.push(CertificateRecord::new(&candidate, cert));
                }
                continue;
            }
        }
        out.counts.survivors_to_oracle += 1;
        out.counts.oracle_evaluations += 1;
        if oracle_check(&x, &y, &z, p) {
            out.counts.oracle_solutions_found += 1;
            out.solutions.push(Tuple { x, y, z: z.clone(), p: Natural::from(p) });
        }
    }
    out
}

/// Sweeps every candidate of `cfg` on `cfg.worker_count` threads.
///
/// Certificates (and oracle solutions) are handed to `sink` in shard order.
/// On a sink failure the sweep stops and the error carries the partial
/// report, marked incomplete.
pub fn run_search(
    cfg: &SearchConfig,
    mut sink: Option<&mut dyn SearchSink>,
) -> Result<SearchReport, SearchError> {
    let started = Instant::now();
    let plan = cfg.validate()?;
    let shards = shards(cfg, &plan);
    let collect = sink.as_ref().is_some_and(|s| s.wants_certificates());
    let workers = cfg.worker_count.min(shards.len()).max(1);

    let mut report = SearchReport::empty(cfg.clone());
    report.covered_z = vec![[cfg.z_min, cfg.z_max]];

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let mut failure: Option<io::Error> = None;

    thread::scope(|scope| {
        let (tx, rx) = mpsc::sync_channel::<(usize, ShardOutput)>(workers * 4);
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, abort, plan, shards) = (&next, &abort, &plan, &shards);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(shard) = shards.get(i) else { break };
                if tx.send((i, run_shard(cfg, plan, shard, collect))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut released = 0usize;
        for (i, output) in rx.iter() {
            pending.insert(i, output);
            while let Some(output) = pending.remove(&released) {
                released += 1;
                report.counts.absorb(&output.counts);
                if let Some(sink) = sink.as_deref_mut() {
                    if let Err(e) = deliver(sink, &output) {
                        failure = Some(e);
                        abort.store(true, Ordering::Relaxed);
                        break;
                    }
                }
            }
            if failure.is_some() {
                break;
            }
        }
        // Dropping the receiver unblocks any worker still sending.
    });

    if failure.is_none() {
        if let Some(sink) = sink {
            failure = sink.finish().err();
        }
    }
    report.wall_time = started.elapsed();
    match failure {
        None => Ok(report),
        Some(source) => {
            report.complete = false;
            Err(SearchError::Sink { source, partial: Box::new(report) })
        }
    }
}

fn deliver(sink: &mut dyn SearchSink, output: &ShardOutput) -> io::Result<()> {
    for record in &output.records {
        sink.certificate(record)?;
    }
    for tuple in &output.solutions {
        sink.solution(tuple)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::FilterId;

    fn n(v: u64) -> Natural {
        Natural::from_u64(v)
    }

    #[test]
    fn oracle_examples() {
        assert!(!oracle_check(&n(6), &n(5), &n(7), 3));
        assert!(oracle_check(&n(3), &n(4), &n(7), 1));
        assert!(oracle_check(&n(3), &n(4), &n(5), 2));
        assert!(oracle_check(&n(5), &n(12), &n(13), 2));
        assert!(!oracle_check(&n(5), &n(12), &n(14), 2));
        assert!(!oracle_check(&n(1), &n(1), &n(1), 3));
    }

    #[test]
    fn oracle_size_window_agrees_with_exact_evaluation() {
        for p in 1..=7u32 {
            for z in 1..=40u64 {
                for x in 1..=40u64 {
                    for y in 1..=40u64 {
                        let exact = n(x).pow(p) + n(y).pow(p) == n(z).pow(p);
                        assert_eq!(oracle_check(&n(x), &n(y), &n(z), p), exact, "{x} {y} {z} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let mut cfg = SearchConfig::cube(2, &[3]);
        let all: Vec<Tuple> = enumerate_candidates(&cfg).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.len() as u64, cfg.expected_candidate_count());
        cfg.coprime_only = true;
        let coprime: Vec<Tuple> = enumerate_candidates(&cfg).unwrap().collect();
        assert!(!coprime.iter().any(|t| t.x == 2 && t.y == 2));
        assert_eq!(coprime.len(), 4);
        cfg.p_set.clear();
        assert!(matches!(enumerate_candidates(&cfg), Err(SearchError::Config(_))));
    }

    #[test]
    fn conservation_across_config_shapes() {
        for (canonical, coprime, below) in [
            (true, false, false),
            (false, false, false),
            (true, true, false),
            (false, true, true),
            (true, false, true),
        ] {
            let mut cfg = SearchConfig::cube(17, &[3, 5]);
            cfg.x_max = 13;
            cfg.z_min = 4;
            cfg.canonical_xy = canonical;
            cfg.coprime_only = coprime;
            cfg.legs_below_z = below;
            let enumerated = enumerate_candidates(&cfg).unwrap().count() as u64;
            let report = run_search(&cfg, None).unwrap();
            assert_eq!(enumerated, cfg.expected_candidate_count());
            assert_eq!(report.counts.total_candidates, enumerated);
            assert!(report.is_conserved());
            assert_eq!(report.counts.oracle_evaluations, report.counts.survivors_to_oracle);
        }
    }

    #[test]
    fn t4_only_counts_prime_z() {
        let mut cfg = SearchConfig::cube(10, &[3]);
        cfg.pipeline = vec![FilterId::T4];
        let report = run_search(&cfg, None).unwrap();
        let pairs_per_z = 55;
        assert_eq!(report.counts.refuted_by_filter[&FilterId::T4], 4 * pairs_per_z);
        assert_eq!(report.counts.oracle_solutions_found, 0);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut cfg = SearchConfig::cube(25, &[3, 5]);
        let mut streams = Vec::new();
        let mut reports = Vec::new();
        for workers in [1, 3, 8] {
            cfg.worker_count = workers;
            let mut lines = Vec::new();
            let mut sink = |r: &CertificateRecord| {
                lines.push(serde_json::to_string(r).unwrap());
                Ok(())
            };
            reports.push(run_search(&cfg, Some(&mut sink)).unwrap());
            streams.push(lines);
        }
        assert!(reports.windows(2).all(|w| w[0].to_json() == w[1].to_json()));
        assert!(streams.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(streams[0].len() as u64, reports[0].counts.total_refuted());
    }

    #[test]
    fn sink_failure_returns_partial_report() {
        let mut cfg = SearchConfig::cube(20, &[3]);
        cfg.worker_count = 4;
        let mut seen = 0;
        let mut sink = |_: &CertificateRecord| {
            seen += 1;
            if seen > 100 {
                Err(io::Error::other("disk full"))
            } else {
                Ok(())
            }
        };
        match run_search(&cfg, Some(&mut sink)) {
            Err(SearchError::Sink { partial, .. }) => {
                assert!(!partial.complete);
                assert!(partial.to_json().contains("\"complete\": false"));
                assert!(partial.counts.total_candidates < cfg.expected_candidate_count());
            }
            other => panic!("expected sink failure, got {other:?}"),
        }
    }

    #[test]
    fn generalized_mode_finds_linear_solutions() {
        let mut cfg = SearchConfig::cube(30, &[1]);
        cfg.generalized = true;
        let mut found = Vec::new();
        struct Collect<'a>(&'a mut Vec<Tuple>);
        impl SearchSink for Collect<'_> {
            fn certificate(&mut self, _: &CertificateRecord) -> io::Result<()> {
                panic!("filters must not run for p = 1");
            }
            fn solution(&mut self, t: &Tuple) -> io::Result<()> {
                self.0.push(t.clone());
                Ok(())
            }
        }
        let report = run_search(&cfg, Some(&mut Collect(&mut found))).unwrap();
        let expected: Vec<(u64, u64)> =
            (1..=30u64).flat_map(|x| (x..=30).map(move |y| (x, y))).filter(|&(x, y)| x + y <= 30).collect();
        assert_eq!(report.counts.oracle_solutions_found, expected.len() as u64);
        assert_eq!(report.counts.total_refuted(), 0);
        for t in &found {
            assert_eq!(&t.x + &t.y, t.z);
        }
        assert_eq!(found.len(), expected.len());
    }
}
