//! Independent verification of refutation certificates.
//!
//! Nothing here calls into the filters or the [`Natural`] fast paths: every
//! claim is recomputed from the candidate with plain `num-bigint`
//! arithmetic, so a bug in a filter cannot vouch for itself.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{
    BoundViolation, Candidate, CandidateRecord, Certificate, CertificateRecord, GcdClause, UnitGap,
    EXTERNAL_ASSUMPTION,
};
use crate::arith::{is_prime, Natural};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "certificate {filter} does not hold for ({}, {}, {}, {}): {reason}",
    candidate.x, candidate.y, candidate.z, candidate.p
)]
pub struct RecheckError {
    pub filter: &'static str,
    pub candidate: Box<CandidateRecord>,
    pub reason: String,
}

impl RecheckError {
    fn new(certificate: &Certificate, candidate: CandidateRecord, reason: String) -> Self {
        RecheckError { filter: certificate.filter_id().as_str(), candidate: Box::new(candidate), reason }
    }
}

struct Parts {
    x: BigUint,
    y: BigUint,
    z: BigUint,
    p: BigUint,
}

fn big(n: &Natural) -> BigUint {
    n.to_biguint()
}

/// Verifies that `certificate` is a valid refutation of `candidate`.
pub fn recheck(candidate: &Candidate, certificate: &Certificate) -> Result<(), RecheckError> {
    let parts = Parts {
        x: big(candidate.x()),
        y: big(candidate.y()),
        z: big(candidate.z()),
        p: big(candidate.p().value()),
    };
    check(&parts, certificate).map_err(|reason| {
        let record = CandidateRecord {
            x: candidate.x().clone(),
            y: candidate.y().clone(),
            z: candidate.z().clone(),
            p: candidate.p().value().clone(),
        };
        RecheckError::new(certificate, record, reason)
    })
}

/// Verifies a serialized record, including its external flag.
pub fn recheck_record(record: &CertificateRecord) -> Result<(), RecheckError> {
    let fail = |reason: String| RecheckError::new(&record.certificate, record.candidate.clone(), reason);
    let candidate = record.to_candidate().map_err(|e| fail(format!("invalid candidate: {e}")))?;
    if record.external_assumption != record.certificate.is_external() {
        return Err(fail("external_assumption flag does not match the filter".into()));
    }
    recheck(&candidate, &record.certificate)
}

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn field(name: &str, claimed: &Natural, actual: &BigUint) -> Result<(), String> {
    ensure(big(claimed) == *actual, || format!("{name} is {claimed}, recomputed {actual}"))
}

fn check(c: &Parts, certificate: &Certificate) -> Result<(), String> {
    match certificate {
        Certificate::BasicBounds { violated, lhs, rhs } => {
            let s = &c.x + &c.y;
            let (l, r) = match violated {
                BoundViolation::XAtLeastZ => (c.x.clone(), c.z.clone()),
                BoundViolation::YAtLeastZ => (c.y.clone(), c.z.clone()),
                BoundViolation::SumAtMostZ => (s, c.z.clone()),
                BoundViolation::SumAtLeastTwiceZ => (s, &c.z * 2u32),
            };
            field("lhs", lhs, &l)?;
            field("rhs", rhs, &r)?;
            let holds = match violated {
                BoundViolation::SumAtMostZ => l <= r,
                _ => l >= r,
            };
            ensure(holds, || format!("{violated:?} does not hold: {l} vs {r}"))
        }
        Certificate::T2 { d, dividend, quotient, gcd_xy, mirrored } => {
            let (leg, other) = if *mirrored { (&c.y, &c.x) } else { (&c.x, &c.y) };
            ensure(c.z > *other, || "no positive gap".into())?;
            let gap = &c.z - other;
            field("d", d, &gap)?;
            ensure(gap >= BigUint::from(2u32), || format!("gap {gap} < 2"))?;
            field("dividend", dividend, leg)?;
            ensure(&big(quotient) * &gap == *leg, || format!("{gap} * {quotient} != {leg}"))?;
            let g = c.x.gcd(&c.y);
            field("gcd_xy", gcd_xy, &g)?;
            ensure(g.is_one(), || format!("gcd(x, y) = {g}"))
        }
        Certificate::T3 { clause, left, right, gcd } => {
            let (l, r) = match clause {
                GcdClause::SumWithZ => (&c.x + &c.y, c.z.clone()),
                GcdClause::ZMinusYWithX => {
                    ensure(c.z > c.y, || "z <= y".into())?;
                    (&c.z - &c.y, c.x.clone())
                }
                GcdClause::ZMinusXWithY => {
                    ensure(c.z > c.x, || "z <= x".into())?;
                    (&c.z - &c.x, c.y.clone())
                }
            };
            field("left", left, &l)?;
            field("right", right, &r)?;
            let g = l.gcd(&r);
            field("gcd", gcd, &g)?;
            ensure(g.is_one(), || format!("gcd = {g}"))
        }
        Certificate::T4 { z } => {
            field("z", z, &c.z)?;
            ensure(is_prime_independent(&c.z), || format!("{} is not prime", c.z))
        }
        Certificate::T5 { g, s, lower, upper, r } => {
            let gxy = c.x.gcd(&c.y);
            field("g", g, &gxy)?;
            ensure(gxy.is_one(), || format!("gcd(x, y) = {gxy}"))?;
            let sum = &c.x + &c.y;
            field("s", s, &sum)?;
            let lo = &c.z + 2u32;
            field("lower", lower, &lo)?;
            let hi = (&c.z - 1u32) * 2u32;
            field("upper", upper, &hi)?;
            ensure(sum < lo || sum > hi, || format!("{sum} lies in [{lo}, {hi}]"))?;
            match r {
                Some(r) => {
                    ensure(sum > c.z, || "r present but s <= z".into())?;
                    field("r", r, &(&sum - &c.z))
                }
                None => ensure(sum <= c.z, || "r missing although s > z".into()),
            }
        }
        Certificate::T6 { gap } => {
            let leg = match gap {
                UnitGap::ZMinusY => &c.y,
                UnitGap::ZMinusX => &c.x,
            };
            ensure(c.z == leg + 1u32, || format!("z - leg != 1 for {gap:?}"))
        }
        Certificate::Modular { modulus, lhs_residue, rhs_residue } => {
            let m = big(modulus);
            ensure(m >= BigUint::from(2u32), || format!("modulus {m} < 2"))?;
            let lhs = (c.x.modpow(&c.p, &m) + c.y.modpow(&c.p, &m)) % &m;
            let rhs = c.z.modpow(&c.p, &m);
            field("lhs_residue", lhs_residue, &lhs)?;
            field("rhs_residue", rhs_residue, &rhs)?;
            ensure(lhs != rhs, || "residues agree".into())
        }
        Certificate::T1External { gcd_xy, p, assumption } => {
            field("p", p, &c.p)?;
            ensure(c.p != BigUint::from(3u32) && c.p != BigUint::from(5u32), || {
                "p in {3, 5} is excluded".into()
            })?;
            let g = c.x.gcd(&c.y);
            field("gcd_xy", gcd_xy, &g)?;
            ensure(g.is_one(), || format!("gcd(x, y) = {g}"))?;
            ensure(assumption == EXTERNAL_ASSUMPTION, || "unrecognized assumption".into())
        }
    }
}

/// Trial division up to 2^40; beyond that, fall back to the library test.
fn is_prime_independent(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(v) if v < (1 << 40) => {
            if v < 2 {
                return false;
            }
            let mut d = 2u64;
            while d * d <= v {
                if v % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        }
        _ => n > &BigUint::zero() && is_prime(&Natural::from_biguint(n.clone())),
    }
}
