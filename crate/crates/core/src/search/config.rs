use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::arith::{Natural, OddPrime};
use crate::filters::{FilterId, Pipeline, DEFAULT_MODULI, DEFAULT_PIPELINE};

/// Everything that determines the outcome of a sweep.
///
/// `worker_count` only affects scheduling and is not serialized: reports
/// from runs that differ only in worker count are identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub x_max: u64,
    pub y_max: u64,
    pub z_min: u64,
    pub z_max: u64,
    pub p_set: Vec<Natural>,
    pub pipeline: Vec<FilterId>,
    pub modular_moduli: Vec<Natural>,
    /// Only pairs with `gcd(x, y) = 1`.
    pub coprime_only: bool,
    /// Only pairs with `x <= y`.
    pub canonical_xy: bool,
    /// Only `x, y < z`.
    #[serde(default)]
    pub legs_below_z: bool,
    /// Allows exponents outside the odd primes; such tuples skip the filters.
    #[serde(default)]
    pub generalized: bool,
    /// Required for a pipeline containing `T1_EXTERNAL`.
    #[serde(default)]
    pub allow_external: bool,
    /// Re-verify every certificate independently while sweeping.
    #[serde(default)]
    pub recheck_certificates: bool,
    #[serde(skip, default = "default_workers")]
    pub worker_count: usize,
}

fn default_workers() -> usize {
    1
}

impl SearchConfig {
    /// `1 <= x, y, z <= max` with the default pipeline and moduli.
    pub fn cube(max: u64, p_set: &[u64]) -> Self {
        SearchConfig {
            x_max: max,
            y_max: max,
            z_min: 1,
            z_max: max,
            p_set: p_set.iter().copied().map(Natural::from).collect(),
            pipeline: DEFAULT_PIPELINE.to_vec(),
            modular_moduli: DEFAULT_MODULI.iter().copied().map(Natural::from).collect(),
            coprime_only: false,
            canonical_xy: true,
            legs_below_z: false,
            generalized: false,
            allow_external: false,
            recheck_certificates: false,
            worker_count: 1,
        }
    }

    pub(crate) fn validate(&self) -> Result<Plan, SearchError> {
        let invalid = |msg: String| Err(SearchError::Config(msg));
        if self.p_set.is_empty() {
            return invalid("p_set is empty".into());
        }
        if self.x_max == 0 || self.y_max == 0 || self.z_max == 0 {
            return invalid("x_max, y_max and z_max must be at least 1".into());
        }
        if self.z_min == 0 || self.z_min > self.z_max {
            return invalid(format!("invalid z range [{}, {}]", self.z_min, self.z_max));
        }
        if self.worker_count == 0 {
            return invalid("worker_count must be at least 1".into());
        }
        let mut seen = BTreeSet::new();
        let mut exponents = Vec::with_capacity(self.p_set.len());
        for p in &self.p_set {
            if !seen.insert(p) {
                return invalid(format!("exponent {p} listed twice"));
            }
            let Some(e) = p.to_u32().filter(|&e| e >= 1) else {
                return invalid(format!("exponent {p} outside 1..=2^32-1"));
            };
            match OddPrime::new(p.clone()) {
                Ok(prime) => exponents.push(Exponent::Prime(prime, e)),
                Err(_) if self.generalized => exponents.push(Exponent::General(e)),
                Err(_) => {
                    return invalid(format!(
                        "exponent {p} is not an odd prime (generalized mode not enabled)"
                    ))
                }
            }
        }
        let pipeline =
            Pipeline::new(self.pipeline.clone(), self.modular_moduli.clone(), self.allow_external)?;
        Ok(Plan { pipeline, exponents })
    }

    /// Effective `(x_max, y_max)` for a given `z`.
    pub(crate) fn leg_limits(&self, z: u64) -> (u64, u64) {
        if self.legs_below_z {
            let cap = z.saturating_sub(1);
            (self.x_max.min(cap), self.y_max.min(cap))
        } else {
            (self.x_max, self.y_max)
        }
    }

    /// Number of candidates the config enumerates, computed without
    /// enumerating: closed form for pair counts, and a direct gcd count
    /// when `coprime_only` is set.
    pub fn expected_candidate_count(&self) -> u64 {
        let per_z: u64 = (self.z_min..=self.z_max)
            .map(|z| {
                let (xm, ym) = self.leg_limits(z);
                if self.coprime_only {
                    coprime_pairs(xm, ym, self.canonical_xy)
                } else {
                    pair_count(xm, ym, self.canonical_xy)
                }
            })
            .sum();
        per_z * self.p_set.len() as u64
    }

    /// Command-line arguments for `search` that reproduce this config.
    pub fn to_cli_args(&self) -> Vec<String> {
        let join = |items: Vec<String>| items.join(",");
        let mut args = vec![
            "--x-max".to_owned(),
            self.x_max.to_string(),
            "--y-max".to_owned(),
            self.y_max.to_string(),
            "--z-min".to_owned(),
            self.z_min.to_string(),
            "--z-max".to_owned(),
            self.z_max.to_string(),
            "--p".to_owned(),
            join(self.p_set.iter().map(ToString::to_string).collect()),
            "--pipeline".to_owned(),
            join(self.pipeline.iter().map(ToString::to_string).collect()),
            "--moduli".to_owned(),
            join(self.modular_moduli.iter().map(ToString::to_string).collect()),
        ];
        for (on, flag) in [
            (self.coprime_only, "--coprime-only"),
            (!self.canonical_xy, "--all-orders"),
            (self.legs_below_z, "--legs-below-z"),
            (self.generalized, "--generalized"),
            (self.allow_external, "--allow-external"),
            (self.recheck_certificates, "--recheck"),
        ] {
            if on {
                args.push(flag.to_owned());
            }
        }
        args
    }
}

fn pair_count(xm: u64, ym: u64, canonical: bool) -> u64 {
    if !canonical {
        return xm * ym;
    }
    // sum over x in 1..=min(xm, ym) of (ym - x + 1)
    let xs = xm.min(ym);
    xs * (ym + 1) - xs * (xs + 1) / 2
}

fn coprime_pairs(xm: u64, ym: u64, canonical: bool) -> u64 {
    let mut count = 0;
    for x in 1..=xm {
        let start = if canonical { x } else { 1 };
        for y in start..=ym {
            if num_integer::gcd(x, y) == 1 {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone)]
pub(crate) enum Exponent {
    Prime(OddPrime, u32),
    General(u32),
}

impl Exponent {
    pub(crate) fn value(&self) -> u32 {
        match self {
            Exponent::Prime(_, e) | Exponent::General(e) => *e,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub pipeline: Pipeline,
    pub exponents: Vec<Exponent>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_count_matches_enumeration() {
        for xm in 0..12 {
            for ym in 0..12 {
                for canonical in [false, true] {
                    let brute = (1..=xm)
                        .flat_map(|x| (1..=ym).map(move |y| (x, y)))
                        .filter(|&(x, y)| !canonical || x <= y)
                        .count() as u64;
                    assert_eq!(pair_count(xm, ym, canonical), brute, "{xm} {ym} {canonical}");
                }
            }
        }
    }

    #[test]
    fn validation_errors() {
        let mut cfg = SearchConfig::cube(10, &[3]);
        assert!(cfg.validate().is_ok());
        cfg.p_set.clear();
        assert!(matches!(cfg.validate(), Err(SearchError::Config(_))));
        let cfg = SearchConfig::cube(10, &[3, 3]);
        assert!(cfg.validate().is_err());
        let cfg = SearchConfig::cube(10, &[4]);
        assert!(cfg.validate().is_err());
        let mut cfg = SearchConfig::cube(10, &[1, 2, 3]);
        cfg.generalized = true;
        let plan = cfg.validate().unwrap();
        assert!(matches!(plan.exponents[0], Exponent::General(1)));
        assert!(matches!(plan.exponents[2], Exponent::Prime(_, 3)));
        let cfg = SearchConfig::cube(0, &[3]);
        assert!(cfg.validate().is_err());
        let mut cfg = SearchConfig::cube(10, &[3]);
        cfg.z_min = 11;
        assert!(cfg.validate().is_err());
        let mut cfg = SearchConfig::cube(10, &[3]);
        cfg.pipeline.push(FilterId::T3);
        assert!(matches!(cfg.validate(), Err(SearchError::Filter(_))));
    }

    #[test]
    fn serialized_config_omits_workers() {
        let mut cfg = SearchConfig::cube(5, &[3]);
        cfg.worker_count = 8;
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(!json.contains("worker"));
        let back: SearchConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.worker_count, 1);
        cfg.worker_count = 1;
        assert_eq!(back, cfg);
    }
}
