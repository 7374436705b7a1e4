//! Necessary-condition filters for `x^p + y^p = z^p` with `p` an odd prime.
//!
//! Each filter either refutes a candidate with a [`Certificate`] that can be
//! re-verified from the candidate alone (see [`recheck`]), or returns
//! [`Verdict::Inconclusive`]. A filter whose hypothesis fails on a candidate
//! (for example `gcd(x, y) != 1` for T5) is inconclusive, never refuting.

mod certificate;
mod pipeline;
pub mod recheck;

use thiserror::Error;

use crate::arith::{is_prime, ArithError, Natural, OddPrime};

pub use certificate::{
    BoundViolation, CandidateRecord, Certificate, CertificateRecord, FilterId, GcdClause, UnitGap, Verdict,
    EXTERNAL_ASSUMPTION,
};
pub use pipeline::{evaluate, parse_filter_list, Pipeline, DEFAULT_MODULI, DEFAULT_PIPELINE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("candidate components must be positive")]
    NonPositive,
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(Natural),
    #[error("unknown filter id {0:?}")]
    UnknownFilter(String),
    #[error("pipeline is empty")]
    EmptyPipeline,
    #[error("filter {0} listed more than once")]
    DuplicateFilter(FilterId),
    #[error("T1_EXTERNAL rests on an external theorem and must be enabled explicitly")]
    ExternalNotAcknowledged,
    #[error("MODULAR filter needs at least one modulus")]
    NoModuli,
    #[error("requires z < x + y < 2z")]
    OutsideEuclidRange,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A tuple `(x, y, z, p)` with positive `x, y, z` and `p` an odd prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    x: Natural,
    y: Natural,
    z: Natural,
    p: OddPrime,
}

impl Candidate {
    pub fn new(x: Natural, y: Natural, z: Natural, p: OddPrime) -> Result<Self, FilterError> {
        if x.is_zero() || y.is_zero() || z.is_zero() {
            return Err(FilterError::NonPositive);
        }
        Ok(Candidate { x, y, z, p })
    }

    pub fn from_u64(x: u64, y: u64, z: u64, p: u64) -> Result<Self, FilterError> {
        Candidate::new(x.into(), y.into(), z.into(), OddPrime::try_from(p)?)
    }

    pub fn x(&self) -> &Natural {
        &self.x
    }

    pub fn y(&self) -> &Natural {
        &self.y
    }

    pub fn z(&self) -> &Natural {
        &self.z
    }

    pub fn p(&self) -> &OddPrime {
        &self.p
    }

    /// The same candidate with `x` and `y` exchanged.
    pub fn swapped(&self) -> Candidate {
        Candidate { x: self.y.clone(), y: self.x.clone(), z: self.z.clone(), p: self.p.clone() }
    }
}

/// Refutes when any of `x < z`, `y < z`, `z < x + y < 2z` fails.
pub fn filter_basic_bounds(c: &Candidate) -> Verdict {
    let (x, y, z) = (&c.x, &c.y, &c.z);
    let refute = |violated, lhs: &Natural, rhs: &Natural| {
        Verdict::Refuted(Certificate::BasicBounds { violated, lhs: lhs.clone(), rhs: rhs.clone() })
    };
    if x >= z {
        return refute(BoundViolation::XAtLeastZ, x, z);
    }
    if y >= z {
        return refute(BoundViolation::YAtLeastZ, y, z);
    }
    let s = x + y;
    if s <= *z {
        return refute(BoundViolation::SumAtMostZ, &s, z);
    }
    let twice_z = z + z;
    if s >= twice_z {
        return refute(BoundViolation::SumAtLeastTwiceZ, &s, &twice_z);
    }
    Verdict::Inconclusive
}

/// Refutes when `gcd(x, y) = 1`, `z - y >= 2` and `(z - y) | x`.
///
/// Only the stated orientation is tested; [`filter_t2_mirrored`] tests the
/// relabelled one and the pipeline runs both.
pub fn filter_t2(c: &Candidate) -> Verdict {
    t2_oriented(&c.x, &c.y, &c.z, false)
}

/// T2 with the roles of `x` and `y` exchanged: `(z - x) | y`.
pub fn filter_t2_mirrored(c: &Candidate) -> Verdict {
    t2_oriented(&c.y, &c.x, &c.z, true)
}

fn t2_oriented(leg: &Natural, other: &Natural, z: &Natural, mirrored: bool) -> Verdict {
    let Some(d) = z.checked_sub(other) else {
        return Verdict::Inconclusive;
    };
    if d < 2 || !d.divides(leg) {
        return Verdict::Inconclusive;
    }
    let g = leg.gcd(other);
    if !g.is_one() {
        return Verdict::Inconclusive;
    }
    Verdict::Refuted(Certificate::T2 { quotient: leg / &d, dividend: leg.clone(), d, gcd_xy: g, mirrored })
}

/// Refutes when `gcd(x+y, z)`, `gcd(z-y, x)` (if `z > y`) or `gcd(z-x, y)`
/// (if `z > x`) equals 1, checked in that order.
pub fn filter_t3(c: &Candidate) -> Verdict {
    let (x, y, z) = (&c.x, &c.y, &c.z);
    let coprime = |clause, left: Natural, right: &Natural| {
        let g = left.gcd(right);
        g.is_one().then(|| Verdict::Refuted(Certificate::T3 { clause, left, right: right.clone(), gcd: g }))
    };
    if let Some(v) = coprime(GcdClause::SumWithZ, x + y, z) {
        return v;
    }
    if let Some(d) = z.checked_sub(y).filter(|d| !d.is_zero()) {
        if let Some(v) = coprime(GcdClause::ZMinusYWithX, d, x) {
            return v;
        }
    }
    if let Some(d) = z.checked_sub(x).filter(|d| !d.is_zero()) {
        if let Some(v) = coprime(GcdClause::ZMinusXWithY, d, y) {
            return v;
        }
    }
    Verdict::Inconclusive
}

/// Refutes when `z` is prime (2 included).
pub fn filter_t4(c: &Candidate) -> Verdict {
    if is_prime(&c.z) {
        Verdict::Refuted(Certificate::T4 { z: c.z.clone() })
    } else {
        Verdict::Inconclusive
    }
}

/// Refutes when `gcd(x, y) = 1` and `x + y` falls outside `[z + 2, 2(z - 1)]`.
pub fn filter_t5(c: &Candidate) -> Verdict {
    let g = c.x.gcd(&c.y);
    if !g.is_one() {
        return Verdict::Inconclusive;
    }
    let s = &c.x + &c.y;
    let lower = &c.z + 2;
    let upper = (&c.z - 1) * 2;
    if s >= lower && s <= upper {
        return Verdict::Inconclusive;
    }
    let r = s.checked_sub(&c.z).filter(|r| !r.is_zero());
    Verdict::Refuted(Certificate::T5 { g, s, lower, upper, r })
}

/// Refutes when `z - y = 1` or `z - x = 1`.
pub fn filter_t6(c: &Candidate) -> Verdict {
    let unit = |a: &Natural| c.z.checked_sub(a).is_some_and(|d| d.is_one());
    if unit(&c.y) {
        Verdict::Refuted(Certificate::T6 { gap: UnitGap::ZMinusY })
    } else if unit(&c.x) {
        Verdict::Refuted(Certificate::T6 { gap: UnitGap::ZMinusX })
    } else {
        Verdict::Inconclusive
    }
}

/// Refutes when `x^p + y^p` and `z^p` differ modulo `m`.
pub fn filter_modular(c: &Candidate, m: &Natural) -> Result<Verdict, FilterError> {
    let (lhs, rhs) = congruence_residues(&c.x, &c.y, &c.z, c.p.value(), m)?;
    Ok(if lhs == rhs {
        Verdict::Inconclusive
    } else {
        Verdict::Refuted(Certificate::Modular { modulus: m.clone(), lhs_residue: lhs, rhs_residue: rhs })
    })
}

/// `((x^p + y^p) mod m, z^p mod m)` for any exponent, used by
/// [`filter_modular`] and directly in generalized mode.
pub fn congruence_residues(
    x: &Natural,
    y: &Natural,
    z: &Natural,
    p: &Natural,
    m: &Natural,
) -> Result<(Natural, Natural), FilterError> {
    if *m < 2 {
        return Err(FilterError::ModulusTooSmall(m.clone()));
    }
    let lhs = (x.modpow(p, m) + y.modpow(p, m)) % m;
    Ok((lhs, z.modpow(p, m)))
}

/// Conditional refutation: when `p` is not 3 or 5 and `gcd(x, y) = 1`, a
/// solution would yield coprime `a, b, c` with `a^p - 4b^p = c^2`, which the
/// cited external theorem rules out. Certificates are flagged external.
pub fn filter_t1_external(c: &Candidate) -> Verdict {
    let p = c.p.value();
    if *p == 3 || *p == 5 {
        return Verdict::Inconclusive;
    }
    let g = c.x.gcd(&c.y);
    if !g.is_one() {
        return Verdict::Inconclusive;
    }
    Verdict::Refuted(Certificate::T1External {
        gcd_xy: g,
        p: p.clone(),
        assumption: EXTERNAL_ASSUMPTION.to_owned(),
    })
}

/// Whether `gcd(x + y, z) = gcd(z, x + y - z)` holds; requires `z < x + y < 2z`.
pub fn euclid_step_check(x: &Natural, y: &Natural, z: &Natural) -> Result<bool, FilterError> {
    let s = x + y;
    if s <= *z || s >= z + z {
        return Err(FilterError::OutsideEuclidRange);
    }
    let r = &s - z;
    Ok(s.gcd(z) == z.gcd(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(x: u64, y: u64, z: u64, p: u64) -> Candidate {
        Candidate::from_u64(x, y, z, p).unwrap()
    }

    fn n(v: u64) -> Natural {
        Natural::from_u64(v)
    }

    fn violated(v: Verdict) -> BoundViolation {
        match v {
            Verdict::Refuted(Certificate::BasicBounds { violated, .. }) => violated,
            other => panic!("expected bounds refutation, got {other:?}"),
        }
    }

    #[test]
    fn candidate_validation() {
        assert_eq!(Candidate::from_u64(0, 1, 2, 3), Err(FilterError::NonPositive));
        assert!(matches!(
            Candidate::from_u64(1, 1, 2, 4),
            Err(FilterError::Arith(ArithError::NotOddPrime(_)))
        ));
    }

    #[test]
    fn basic_bounds_examples() {
        assert_eq!(violated(filter_basic_bounds(&cand(1, 1, 5, 3))), BoundViolation::SumAtMostZ);
        assert_eq!(violated(filter_basic_bounds(&cand(9, 9, 9, 3))), BoundViolation::XAtLeastZ);
        assert_eq!(violated(filter_basic_bounds(&cand(3, 9, 9, 3))), BoundViolation::YAtLeastZ);
        assert_eq!(filter_basic_bounds(&cand(6, 5, 7, 3)), Verdict::Inconclusive);
        // x + y >= 2z cannot occur without x >= z or y >= z, but the check is
        // still reachable through the certificate path on its own.
        assert!(filter_basic_bounds(&cand(7, 7, 7, 3)).is_refuted());
    }

    #[test]
    fn t2_examples() {
        let v = filter_t2(&cand(4, 9, 11, 3));
        assert_eq!(
            v,
            Verdict::Refuted(Certificate::T2 {
                d: n(2),
                dividend: n(4),
                quotient: n(2),
                gcd_xy: n(1),
                mirrored: false,
            })
        );
        assert_eq!(filter_t2(&cand(4, 9, 10, 3)), Verdict::Inconclusive);
        assert_eq!(filter_t2(&cand(5, 9, 11, 3)), Verdict::Inconclusive);
        // gcd(x, y) != 1: hypothesis fails.
        assert_eq!(filter_t2(&cand(4, 6, 8, 3)), Verdict::Inconclusive);
        // z <= y: no gap.
        assert_eq!(filter_t2(&cand(4, 9, 9, 3)), Verdict::Inconclusive);
        // Mirrored orientation picks up (9, 4, 11).
        assert!(filter_t2(&cand(9, 4, 11, 3)) == Verdict::Inconclusive);
        assert!(matches!(
            filter_t2_mirrored(&cand(9, 4, 11, 3)),
            Verdict::Refuted(Certificate::T2 { mirrored: true, .. })
        ));
    }

    #[test]
    fn t3_examples() {
        assert_eq!(
            filter_t3(&cand(2, 3, 4, 3)),
            Verdict::Refuted(Certificate::T3 {
                clause: GcdClause::SumWithZ,
                left: n(5),
                right: n(4),
                gcd: n(1),
            })
        );
        assert_eq!(
            filter_t3(&cand(3, 5, 6, 3)),
            Verdict::Refuted(Certificate::T3 {
                clause: GcdClause::ZMinusYWithX,
                left: n(1),
                right: n(3),
                gcd: n(1),
            })
        );
        assert_eq!(filter_t3(&cand(6, 10, 14, 3)), Verdict::Inconclusive);
        // z <= y skips the second clause; (4, 6, 6): gcd(10,6)=2, z-x=2, gcd(2,6)=2.
        assert_eq!(filter_t3(&cand(4, 6, 6, 3)), Verdict::Inconclusive);
    }

    #[test]
    fn t4_examples() {
        assert_eq!(filter_t4(&cand(3, 4, 7, 3)), Verdict::Refuted(Certificate::T4 { z: n(7) }));
        assert_eq!(filter_t4(&cand(1, 1, 2, 3)), Verdict::Refuted(Certificate::T4 { z: n(2) }));
        assert_eq!(filter_t4(&cand(7, 9, 15, 3)), Verdict::Inconclusive);
        assert_eq!(filter_t4(&cand(7, 9, 1, 3)), Verdict::Inconclusive);
    }

    #[test]
    fn t5_examples() {
        assert_eq!(
            filter_t5(&cand(10, 3, 12, 3)),
            Verdict::Refuted(Certificate::T5 {
                g: n(1),
                s: n(13),
                lower: n(14),
                upper: n(22),
                r: Some(n(1)),
            })
        );
        assert_eq!(filter_t5(&cand(4, 6, 7, 3)), Verdict::Inconclusive);
        assert_eq!(filter_t5(&cand(7, 8, 13, 3)), Verdict::Inconclusive);
        // Upper bound: 11 + 12 = 23 > 2 * 11 = 22 with z = 12.
        assert!(filter_t5(&cand(11, 12, 12, 3)).is_refuted());
        // s <= z leaves r empty.
        assert!(matches!(filter_t5(&cand(1, 2, 9, 3)), Verdict::Refuted(Certificate::T5 { r: None, .. })));
    }

    #[test]
    fn t6_examples() {
        assert_eq!(filter_t6(&cand(4, 8, 9, 3)), Verdict::Refuted(Certificate::T6 { gap: UnitGap::ZMinusY }));
        assert_eq!(filter_t6(&cand(8, 4, 9, 3)), Verdict::Refuted(Certificate::T6 { gap: UnitGap::ZMinusX }));
        assert_eq!(filter_t6(&cand(5, 7, 9, 3)), Verdict::Inconclusive);
        assert_eq!(filter_t6(&cand(9, 9, 9, 3)), Verdict::Inconclusive);
    }

    #[test]
    fn modular_examples() {
        assert_eq!(
            filter_modular(&cand(6, 5, 7, 3), &n(9)).unwrap(),
            Verdict::Refuted(Certificate::Modular { modulus: n(9), lhs_residue: n(8), rhs_residue: n(1) })
        );
        assert_eq!(filter_modular(&cand(6, 5, 7, 3), &n(1)), Err(FilterError::ModulusTooSmall(n(1))));
        // Genuine equalities with p = 1 satisfy every congruence.
        for m in 2..200 {
            let (l, r) = congruence_residues(&n(3), &n(4), &n(7), &n(1), &n(m)).unwrap();
            assert_eq!(l, r, "m = {m}");
        }
    }

    #[test]
    fn t1_external_gating() {
        assert_eq!(filter_t1_external(&cand(6, 10, 14, 7)), Verdict::Inconclusive);
        assert_eq!(filter_t1_external(&cand(7, 8, 13, 3)), Verdict::Inconclusive);
        assert_eq!(filter_t1_external(&cand(7, 8, 13, 5)), Verdict::Inconclusive);
        let v = filter_t1_external(&cand(7, 8, 13, 7));
        assert!(v.certificate().unwrap().is_external());
    }

    #[test]
    fn euclid_step_examples() {
        assert_eq!(euclid_step_check(&n(7), &n(8), &n(13)), Ok(true));
        assert_eq!(euclid_step_check(&n(6), &n(10), &n(14)), Ok(true));
        assert_eq!(euclid_step_check(&n(5), &n(7), &n(9)), Ok(true));
        assert_eq!(euclid_step_check(&n(1), &n(1), &n(5)), Err(FilterError::OutsideEuclidRange));
        assert_eq!(euclid_step_check(&n(5), &n(5), &n(5)), Err(FilterError::OutsideEuclidRange));
    }

    #[test]
    fn euclid_step_small_sweep() {
        for z in 1..=120u64 {
            for x in 1..2 * z {
                for y in 1..2 * z {
                    if z < x + y && x + y < 2 * z {
                        assert_eq!(euclid_step_check(&n(x), &n(y), &n(z)), Ok(true));
                    }
                }
            }
        }
    }
}
