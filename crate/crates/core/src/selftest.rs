//! Built-in verification suite behind `fermat-refute selftest`.
//!
//! The identity operations are reached through [`IdentityOps`] so that a
//! deliberately broken implementation ([`Fault`]) can be swapped in to show
//! that the suite notices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::Natural;
use crate::filters::{euclid_step_check, evaluate, recheck::recheck, Candidate, FilterId, Pipeline, Verdict};
use crate::identities::{self, IdentityError, ReductionWitness};
use crate::search::oracle_check;

pub type AltSumFn = fn(&Natural, &Natural, u32) -> Result<Natural, IdentityError>;
pub type DiscriminantFn = fn(&Natural, &Natural, &Natural, u32) -> BigInt;
pub type ReduceFn = fn(&Natural, &Natural, &Natural, u32) -> Result<ReductionWitness, IdentityError>;
pub type CoprimeFn = fn(&Natural, &Natural, &Natural) -> bool;

/// The identity operations under test.
#[derive(Clone, Copy)]
pub struct IdentityOps {
    pub alt_factor_sum: AltSumFn,
    pub diff_factor_sum: AltSumFn,
    pub binomial_gap_expansion: AltSumFn,
    pub discriminant: DiscriminantFn,
    pub theorem1_reduce: ReduceFn,
    pub pairwise_coprime: CoprimeFn,
}

impl Default for IdentityOps {
    fn default() -> Self {
        IdentityOps {
            alt_factor_sum: identities::alt_factor_sum,
            diff_factor_sum: identities::diff_factor_sum,
            binomial_gap_expansion: identities::binomial_gap_expansion,
            discriminant: identities::discriminant,
            theorem1_reduce: identities::theorem1_reduce,
            pairwise_coprime: identities::pairwise_coprime,
        }
    }
}

/// Single-point corruptions of the identity operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Alternating sum stops one term early.
    AltSumLimit,
    /// Alternating sum starts with a negative term.
    AltSumSign,
    /// Difference sum runs one term past the end.
    DiffSumLimit,
    /// Binomial gap includes the j = p term.
    BinomialGapLimit,
    /// Discriminant adds 4(xy)^p instead of subtracting it.
    DiscriminantSign,
    /// Reduction reports c + 1.
    ReduceOffByOne,
    /// Pairwise coprimality skips gcd(x, z).
    CoprimeSkipsPair,
}

impl Fault {
    pub const ALL: [Fault; 7] = [
        Fault::AltSumLimit,
        Fault::AltSumSign,
        Fault::DiffSumLimit,
        Fault::BinomialGapLimit,
        Fault::DiscriminantSign,
        Fault::ReduceOffByOne,
        Fault::CoprimeSkipsPair,
    ];
}

impl IdentityOps {
    pub fn with_fault(fault: Fault) -> Self {
        let mut ops = IdentityOps::default();
        match fault {
            Fault::AltSumLimit => ops.alt_factor_sum = mutants::alt_sum_short,
            Fault::AltSumSign => ops.alt_factor_sum = mutants::alt_sum_negated,
            Fault::DiffSumLimit => ops.diff_factor_sum = mutants::diff_sum_long,
            Fault::BinomialGapLimit => ops.binomial_gap_expansion = mutants::binomial_gap_inclusive,
            Fault::DiscriminantSign => ops.discriminant = mutants::discriminant_plus,
            Fault::ReduceOffByOne => ops.theorem1_reduce = mutants::reduce_c_plus_one,
            Fault::CoprimeSkipsPair => ops.pairwise_coprime = mutants::coprime_two_pairs,
        }
        ops
    }
}

mod mutants {
    use super::*;

    fn signed_sum(
        x: &Natural,
        y: &Natural,
        terms: u32,
        n: u32,
        negate: bool,
    ) -> Result<Natural, IdentityError> {
        let (x, y) = (x.to_bigint(), y.to_bigint());
        let mut total = BigInt::zero();
        for i in 0..terms {
            let term = x.pow(i) * y.pow(n.saturating_sub(1 + i));
            if (i % 2 == 0) != negate {
                total += term;
            } else {
                total -= term;
            }
        }
        Natural::from_bigint(&total)
            .filter(|t| !t.is_zero())
            .ok_or_else(|| IdentityError::Inconsistent(format!("sum evaluated to {total}")))
    }

    pub fn alt_sum_short(x: &Natural, y: &Natural, n: u32) -> Result<Natural, IdentityError> {
        signed_sum(x, y, n.saturating_sub(1), n, false)
    }

    pub fn alt_sum_negated(x: &Natural, y: &Natural, n: u32) -> Result<Natural, IdentityError> {
        signed_sum(x, y, n, n, true)
    }

    pub fn diff_sum_long(z: &Natural, y: &Natural, n: u32) -> Result<Natural, IdentityError> {
        let (z, y) = (z.to_bigint(), y.to_bigint());
        let total: BigInt = (0..=n).map(|i| z.pow(i) * y.pow(n.saturating_sub(1 + i))).sum();
        Ok(Natural::from_bigint(&total).expect("positive"))
    }

    pub fn binomial_gap_inclusive(y: &Natural, a: &Natural, p: u32) -> Result<Natural, IdentityError> {
        let exact = identities::binomial_gap_expansion(y, a, p)?;
        Ok(exact + y.pow(p))
    }

    pub fn discriminant_plus(x: &Natural, y: &Natural, z: &Natural, p: u32) -> BigInt {
        let zp = z.pow(p).to_bigint();
        &zp * &zp + BigInt::from(4) * (x * y).pow(p).to_bigint()
    }

    pub fn reduce_c_plus_one(
        x: &Natural,
        y: &Natural,
        z: &Natural,
        p: u32,
    ) -> Result<ReductionWitness, IdentityError> {
        let mut w = identities::theorem1_reduce(x, y, z, p)?;
        w.c = w.c + 1;
        Ok(w)
    }

    pub fn coprime_two_pairs(x: &Natural, y: &Natural, z: &Natural) -> bool {
        x.gcd(y).is_one() && y.gcd(z).is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, passed: 0, failed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    /// 0 when every suite passes, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            3
        }
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.failed == 0 { "ok" } else { "FAILED" };
            writeln!(f, "{:<14} {:>8} passed {:>6} failed  {status}", s.name, s.passed, s.failed)?;
            for msg in &s.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

fn big_pow(base: u64, e: u32) -> BigInt {
    let b = BigInt::from(base);
    (0..e).fold(BigInt::one(), |acc, _| acc * &b)
}

fn n(v: u64) -> Natural {
    Natural::from_u64(v)
}

const IDENTITY_SAMPLES: usize = 300;

fn identity_suite(ops: &IdentityOps) -> SuiteResult {
    let mut suite = SuiteResult::new("identities");
    let mut rng = StdRng::seed_from_u64(0x5eed_f00d);
    let draws = (0..IDENTITY_SAMPLES)
        .map(|_| {
            (
                rng.gen_range(1..=1_000_000u64),
                rng.gen_range(1..=1_000_000u64),
                2 * rng.gen_range(0..=10u32) + 1,
            )
        })
        // Include the smallest exponent and unit arguments.
        .chain([(1, 1, 1), (1, 1, 3), (2, 3, 3), (3, 4, 5)]);
    for (x, y, k) in draws {
        let alt = (ops.alt_factor_sum)(&n(x), &n(y), k);
        let expected = big_pow(x, k) + big_pow(y, k);
        suite.record(alt.as_ref().is_ok_and(|s| BigInt::from(x + y) * s.to_bigint() == expected), || {
            format!("alt_factor_sum({x}, {y}, {k}) = {alt:?}")
        });

        let z = x + y;
        let diff = (ops.diff_factor_sum)(&n(z), &n(y), k);
        let expected = big_pow(z, k) - big_pow(y, k);
        suite.record(diff.as_ref().is_ok_and(|s| BigInt::from(x) * s.to_bigint() == expected), || {
            format!("diff_factor_sum({z}, {y}, {k}) = {diff:?}")
        });

        let gap = (ops.binomial_gap_expansion)(&n(y), &n(x), k);
        let expected = big_pow(x + y, k) - big_pow(y, k) - big_pow(x, k);
        suite.record(gap.as_ref().is_ok_and(|g| g.to_bigint() == expected), || {
            format!("binomial_gap_expansion({y}, {x}, {k}) = {gap:?}")
        });
    }
    suite
}

/// Primitive Pythagorean triples with hypotenuse at most `limit`, from
/// Euclid's parametrization.
pub fn primitive_pythagorean_triples(limit: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    let mut m = 2u64;
    while m * m < limit * 2 {
        for k in 1..m {
            if (m - k) % 2 == 1 && num_integer::gcd(m, k) == 1 {
                let (a, b, c) = (m * m - k * k, 2 * m * k, m * m + k * k);
                if c <= limit {
                    out.push((a.min(b), a.max(b), c));
                }
            }
        }
        m += 1;
    }
    out.sort_unstable();
    out
}

fn check_reduction(ops: &IdentityOps, suite: &mut SuiteResult, x: u64, y: u64, z: u64, p: u32) {
    let diff = big_pow(x, p) - big_pow(y, p);
    let d = (ops.discriminant)(&n(x), &n(y), &n(z), p);
    suite.record(d == &diff * &diff, || format!("discriminant({x}, {y}, {z}, {p}) = {d}"));
    suite.record((ops.pairwise_coprime)(&n(x), &n(y), &n(z)), || {
        format!("pairwise_coprime({x}, {y}, {z}) = false")
    });
    let w = (ops.theorem1_reduce)(&n(x), &n(y), &n(z), p);
    let ok = w.as_ref().is_ok_and(|w| {
        let (a, b, c) = (w.a.to_bigint(), w.b.to_bigint(), w.c.to_bigint());
        a == BigInt::from(z * z)
            && b == BigInt::from(x * y)
            && c == num_traits::Signed::abs(&diff)
            && a.pow(p) - BigInt::from(4) * b.pow(p) == &c * &c
            && num_integer::Integer::gcd(&a, &b).is_one()
    });
    suite.record(ok, || format!("theorem1_reduce({x}, {y}, {z}, {p}) = {w:?}"));
}

fn reduction_suite(ops: &IdentityOps) -> SuiteResult {
    let mut suite = SuiteResult::new("reduction");
    for x in 1..=60u64 {
        for y in x + 1..=60 {
            if num_integer::gcd(x, y) == 1 {
                check_reduction(ops, &mut suite, x, y, x + y, 1);
            }
        }
    }
    for (x, y, z) in primitive_pythagorean_triples(300) {
        check_reduction(ops, &mut suite, x, y, z, 2);
    }
    // Negative controls.
    for (x, y, z) in [(2, 4, 5), (3, 5, 9), (6, 10, 14), (4, 9, 6)] {
        suite.record(!(ops.pairwise_coprime)(&n(x), &n(y), &n(z)), || {
            format!("pairwise_coprime({x}, {y}, {z}) = true")
        });
    }
    let d = (ops.discriminant)(&n(1), &n(1), &n(1), 3);
    suite.record(d == BigInt::from(-3), || format!("discriminant(1, 1, 1, 3) = {d}"));
    suite
}

fn euclid_suite() -> SuiteResult {
    let mut suite = SuiteResult::new("euclid-step");
    for z in 1..=150u64 {
        for x in 1..2 * z {
            for y in 1..2 * z {
                let s = x + y;
                if z < s && s < 2 * z {
                    let r = euclid_step_check(&n(x), &n(y), &n(z));
                    suite.record(r == Ok(true), || format!("euclid_step_check({x}, {y}, {z}) = {r:?}"));
                }
            }
        }
    }
    suite
}

fn certificate_suite() -> SuiteResult {
    let mut suite = SuiteResult::new("certificates");
    let filters: Vec<FilterId> = FilterId::ALL.into_iter().filter(|&id| id != FilterId::T1External).collect();
    let pipeline = Pipeline::new(filters, vec![n(9), n(25), n(49)], false).expect("valid");
    for p in [3u64, 5, 7] {
        for z in 1..=40u64 {
            for x in 1..=40u64 {
                for y in x..=40u64 {
                    let c = Candidate::from_u64(x, y, z, p).expect("valid candidate");
                    for &id in pipeline.filters() {
                        if let Verdict::Refuted(cert) = pipeline.apply(id, &c) {
                            let checked = recheck(&c, &cert);
                            suite.record(checked.is_ok(), || format!("{checked:?}"));
                            let sound = !oracle_check(c.x(), c.y(), c.z(), p as u32);
                            suite.record(sound, || format!("{id} refuted a solution {c:?}"));
                        }
                    }
                    let v = evaluate(&c, &pipeline);
                    let symmetric = evaluate(&c.swapped(), &pipeline).is_refuted() == v.is_refuted();
                    suite.record(symmetric, || format!("pipeline verdict not symmetric for {c:?}"));
                }
            }
        }
    }
    suite
}

/// Runs every suite against `ops`.
pub fn run_selftest(ops: &IdentityOps) -> SelftestReport {
    SelftestReport {
        suites: vec![identity_suite(ops), reduction_suite(ops), euclid_suite(), certificate_suite()],
    }
}
