use std::collections::BTreeSet;

use super::{
    filter_basic_bounds, filter_modular, filter_t1_external, filter_t2, filter_t2_mirrored, filter_t3,
    filter_t4, filter_t5, filter_t6, Candidate, FilterError, FilterId, Verdict,
};
use crate::arith::Natural;

/// Cheapest predicates first.
pub const DEFAULT_PIPELINE: [FilterId; 7] = [
    FilterId::BasicBounds,
    FilterId::T6,
    FilterId::T4,
    FilterId::T3,
    FilterId::T5,
    FilterId::T2,
    FilterId::Modular,
];

pub const DEFAULT_MODULI: [u64; 3] = [9, 25, 49];

/// A validated, ordered list of filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pipeline {
    filters: Vec<FilterId>,
    moduli: Vec<Natural>,
}

impl Pipeline {
    /// `allow_external` must be set for a pipeline containing `T1_EXTERNAL`.
    /// `moduli` is required (and validated) only when `MODULAR` is present.
    pub fn new(
        filters: Vec<FilterId>,
        moduli: Vec<Natural>,
        allow_external: bool,
    ) -> Result<Self, FilterError> {
        if filters.is_empty() {
            return Err(FilterError::EmptyPipeline);
        }
        let mut seen = BTreeSet::new();
        for &id in &filters {
            if !seen.insert(id) {
                return Err(FilterError::DuplicateFilter(id));
            }
        }
        if seen.contains(&FilterId::T1External) && !allow_external {
            return Err(FilterError::ExternalNotAcknowledged);
        }
        if seen.contains(&FilterId::Modular) {
            if moduli.is_empty() {
                return Err(FilterError::NoModuli);
            }
            if let Some(m) = moduli.iter().find(|m| **m < 2) {
                return Err(FilterError::ModulusTooSmall(m.clone()));
            }
        }
        Ok(Pipeline { filters, moduli })
    }

    pub fn filters(&self) -> &[FilterId] {
        &self.filters
    }

    pub fn moduli(&self) -> &[Natural] {
        &self.moduli
    }

    /// Runs one stage of the pipeline. T2 is applied in both orientations
    /// and MODULAR over every configured modulus.
    pub fn apply(&self, id: FilterId, c: &Candidate) -> Verdict {
        match id {
            FilterId::BasicBounds => filter_basic_bounds(c),
            FilterId::T2 => match filter_t2(c) {
                Verdict::Inconclusive => filter_t2_mirrored(c),
                refuted => refuted,
            },
            FilterId::T3 => filter_t3(c),
            FilterId::T4 => filter_t4(c),
            FilterId::T5 => filter_t5(c),
            FilterId::T6 => filter_t6(c),
            FilterId::Modular => self
                .moduli
                .iter()
                .map(|m| filter_modular(c, m).expect("moduli validated at construction"))
                .find(Verdict::is_refuted)
                .unwrap_or(Verdict::Inconclusive),
            FilterId::T1External => filter_t1_external(c),
        }
    }
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            filters: DEFAULT_PIPELINE.to_vec(),
            moduli: DEFAULT_MODULI.iter().copied().map(Natural::from).collect(),
        }
    }
}

/// Parses a comma-separated list of filter ids.
pub fn parse_filter_list(list: &str) -> Result<Vec<FilterId>, FilterError> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// First refutation in pipeline order, or `Inconclusive`.
pub fn evaluate(c: &Candidate, pipeline: &Pipeline) -> Verdict {
    pipeline
        .filters
        .iter()
        .map(|&id| pipeline.apply(id, c))
        .find(Verdict::is_refuted)
        .unwrap_or(Verdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(x: u64, y: u64, z: u64, p: u64) -> Candidate {
        Candidate::from_u64(x, y, z, p).unwrap()
    }

    fn pipe(ids: &[FilterId]) -> Pipeline {
        Pipeline::new(ids.to_vec(), vec![Natural::from(9u64)], false).unwrap()
    }

    #[test]
    fn ordering_examples() {
        use FilterId::*;
        let v = evaluate(&cand(2, 3, 4, 3), &pipe(&[T4, T3]));
        assert_eq!(v.certificate().unwrap().filter_id(), T3);
        let v = evaluate(&cand(2, 3, 4, 3), &pipe(&[T3, T4]));
        assert_eq!(v.certificate().unwrap().filter_id(), T3);
        let v = evaluate(&cand(6, 10, 14, 3), &pipe(&[BasicBounds, T6, T4, T3, T5, T2]));
        assert_eq!(v, Verdict::Inconclusive);
        // With T4 first and z prime, T4 wins.
        let v = evaluate(&cand(2, 3, 5, 3), &pipe(&[T4, T3]));
        assert_eq!(v.certificate().unwrap().filter_id(), T4);
    }

    #[test]
    fn validation() {
        use FilterId::*;
        assert_eq!(Pipeline::new(vec![], vec![], false), Err(FilterError::EmptyPipeline));
        assert_eq!(Pipeline::new(vec![T3, T4, T3], vec![], false), Err(FilterError::DuplicateFilter(T3)));
        assert_eq!(Pipeline::new(vec![T1External], vec![], false), Err(FilterError::ExternalNotAcknowledged));
        assert!(Pipeline::new(vec![T1External], vec![], true).is_ok());
        assert_eq!(Pipeline::new(vec![Modular], vec![], false), Err(FilterError::NoModuli));
        assert_eq!(
            Pipeline::new(vec![Modular], vec![Natural::ONE], false),
            Err(FilterError::ModulusTooSmall(Natural::ONE))
        );
        assert!(matches!(parse_filter_list("T3,T9"), Err(FilterError::UnknownFilter(_))));
        assert_eq!(parse_filter_list("t4, t3").unwrap(), vec![T4, T3]);
    }

    #[test]
    fn t2_stage_is_symmetric() {
        let p = pipe(&[FilterId::T2]);
        assert!(evaluate(&cand(4, 9, 11, 3), &p).is_refuted());
        assert!(evaluate(&cand(9, 4, 11, 3), &p).is_refuted());
    }

    #[test]
    fn default_pipeline_shape() {
        let p = Pipeline::default();
        assert_eq!(p.filters(), &DEFAULT_PIPELINE);
        assert_eq!(p.moduli().len(), 3);
        assert!(evaluate(&cand(6, 5, 7, 3), &p).is_refuted());
    }
}
