use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{SearchConfig, SearchError};
use crate::filters::FilterId;

/// Counters accumulated by a sweep; merging is fieldwise addition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub total_candidates: u64,
    pub refuted_by_filter: BTreeMap<FilterId, u64>,
    pub survivors_to_oracle: u64,
    /// Incremented inside the oracle call path; equals `survivors_to_oracle`
    /// whenever refuted candidates are never sent to the oracle.
    pub oracle_evaluations: u64,
    pub oracle_solutions_found: u64,
    pub recheck_failures: u64,
}

impl Counts {
    pub(crate) fn for_pipeline(filters: &[FilterId]) -> Self {
        Counts { refuted_by_filter: filters.iter().map(|&id| (id, 0)).collect(), ..Counts::default() }
    }

    pub(crate) fn absorb(&mut self, other: &Counts) {
        self.total_candidates += other.total_candidates;
        for (&id, &n) in &other.refuted_by_filter {
            *self.refuted_by_filter.entry(id).or_insert(0) += n;
        }
        self.survivors_to_oracle += other.survivors_to_oracle;
        self.oracle_evaluations += other.oracle_evaluations;
        self.oracle_solutions_found += other.oracle_solutions_found;
        self.recheck_failures += other.recheck_failures;
    }

    pub fn total_refuted(&self) -> u64 {
        self.refuted_by_filter.values().sum()
    }
}

/// Result of a sweep over some set of z values.
///
/// `wall_time` is not part of the serialized document, which is therefore a
/// pure function of the config.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// Disjoint, sorted, coalesced inclusive z ranges this report covers.
    pub covered_z: Vec<[u64; 2]>,
    #[serde(flatten)]
    pub counts: Counts,
    /// False when the sweep aborted early.
    pub complete: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchReport {
    /// The merge identity for reports of `config`.
    pub fn empty(config: SearchConfig) -> Self {
        SearchReport {
            counts: Counts::for_pipeline(&config.pipeline),
            config,
            covered_z: Vec::new(),
            complete: true,
            wall_time: Duration::ZERO,
        }
    }

    /// Pretty JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat table: one row per filter with its refutation count.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("filter_id,refuted\n");
        for (id, n) in &self.counts.refuted_by_filter {
            let _ = writeln!(out, "{id},{n}");
        }
        out
    }

    /// Equality of everything but wall time.
    pub fn same_outcome(&self, other: &SearchReport) -> bool {
        self.config == other.config
            && self.covered_z == other.covered_z
            && self.counts == other.counts
            && self.complete == other.complete
    }

    /// Checks `total = refuted + survivors`.
    pub fn is_conserved(&self) -> bool {
        self.counts.total_candidates == self.counts.total_refuted() + self.counts.survivors_to_oracle
    }
}

fn without_z_bounds(cfg: &SearchConfig) -> SearchConfig {
    SearchConfig { z_min: 0, z_max: 0, ..cfg.clone() }
}

/// Combines reports of disjoint z ranges of the same sweep. Counts add,
/// wall time is the maximum, and the z bounds of the result span the union.
pub fn merge_reports(a: &SearchReport, b: &SearchReport) -> Result<SearchReport, SearchError> {
    if without_z_bounds(&a.config) != without_z_bounds(&b.config) {
        return Err(SearchError::ConfigMismatch);
    }
    let mut spans: Vec<[u64; 2]> = a.covered_z.iter().chain(&b.covered_z).copied().collect();
    spans.sort_unstable();
    let mut covered: Vec<[u64; 2]> = Vec::with_capacity(spans.len());
    for span in spans {
        match covered.last_mut() {
            Some(last) if span[0] <= last[1] => {
                return Err(SearchError::OverlappingShards { z: span[0] });
            }
            Some(last) if span[0] == last[1] + 1 => last[1] = span[1],
            _ => covered.push(span),
        }
    }
    let mut config = a.config.clone();
    match (covered.first(), covered.last()) {
        (Some(first), Some(last)) => {
            config.z_min = first[0];
            config.z_max = last[1];
        }
        _ => {
            config.z_min = a.config.z_min.min(b.config.z_min);
            config.z_max = a.config.z_max.max(b.config.z_max);
        }
    }
    let mut counts = a.counts.clone();
    counts.absorb(&b.counts);
    Ok(SearchReport {
        config,
        covered_z: covered,
        counts,
        complete: a.complete && b.complete,
        wall_time: a.wall_time.max(b.wall_time),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(z: [u64; 2], total: u64) -> SearchReport {
        let mut cfg = SearchConfig::cube(10, &[3]);
        cfg.z_min = z[0];
        cfg.z_max = z[1];
        let mut r = SearchReport::empty(cfg);
        r.covered_z = vec![z];
        r.counts.total_candidates = total;
        r.counts.survivors_to_oracle = total;
        r
    }

    #[test]
    fn merge_identity_and_commutativity() {
        let r = report([1, 5], 10);
        let e = SearchReport::empty(r.config.clone());
        assert!(merge_reports(&r, &e).unwrap().same_outcome(&r));
        assert!(merge_reports(&e, &r).unwrap().same_outcome(&r));
        let s = report([6, 10], 7);
        let ab = merge_reports(&r, &s).unwrap();
        let ba = merge_reports(&s, &r).unwrap();
        assert!(ab.same_outcome(&ba));
        assert_eq!(ab.covered_z, vec![[1, 10]]);
        assert_eq!(ab.config.z_min, 1);
        assert_eq!(ab.config.z_max, 10);
        assert_eq!(ab.counts.total_candidates, 17);
    }

    #[test]
    fn merge_is_associative_with_gaps() {
        let a = report([1, 2], 1);
        let b = report([5, 6], 2);
        let c = report([3, 4], 4);
        let left = merge_reports(&merge_reports(&a, &b).unwrap(), &c).unwrap();
        let right = merge_reports(&a, &merge_reports(&b, &c).unwrap()).unwrap();
        assert!(left.same_outcome(&right));
        assert_eq!(left.covered_z, vec![[1, 6]]);
        let ab = merge_reports(&a, &b).unwrap();
        assert_eq!(ab.covered_z, vec![[1, 2], [5, 6]]);
    }

    #[test]
    fn merge_rejects_overlap_and_mismatch() {
        let a = report([1, 5], 1);
        let b = report([5, 8], 1);
        assert!(matches!(merge_reports(&a, &b), Err(SearchError::OverlappingShards { z: 5 })));
        let mut c = report([6, 8], 1);
        c.config.coprime_only = true;
        assert!(matches!(merge_reports(&a, &c), Err(SearchError::ConfigMismatch)));
    }

    #[test]
    fn wall_time_is_max_and_not_serialized() {
        let mut a = report([1, 2], 1);
        let mut b = report([3, 4], 1);
        a.wall_time = Duration::from_millis(5);
        b.wall_time = Duration::from_millis(9);
        let m = merge_reports(&a, &b).unwrap();
        assert_eq!(m.wall_time, Duration::from_millis(9));
        assert!(!m.to_json().contains("wall"));
    }

    #[test]
    fn csv_lists_every_pipeline_filter() {
        let r = report([1, 2], 0);
        let csv = r.to_csv();
        assert!(csv.starts_with("filter_id,refuted\n"));
        assert_eq!(csv.lines().count(), 1 + r.config.pipeline.len());
        assert!(csv.contains("BASIC_BOUNDS,0"));
    }
}
