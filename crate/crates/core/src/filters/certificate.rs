use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Candidate, FilterError};
use crate::arith::{Natural, OddPrime};

/// Identifier of a refutation filter, as it appears on the wire and on the
/// command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FilterId {
    #[serde(rename = "BASIC_BOUNDS")]
    BasicBounds,
    T2,
    T3,
    T4,
    T5,
    T6,
    #[serde(rename = "MODULAR")]
    Modular,
    #[serde(rename = "T1_EXTERNAL")]
    T1External,
}

impl FilterId {
    pub const ALL: [FilterId; 8] = [
        FilterId::BasicBounds,
        FilterId::T2,
        FilterId::T3,
        FilterId::T4,
        FilterId::T5,
        FilterId::T6,
        FilterId::Modular,
        FilterId::T1External,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FilterId::BasicBounds => "BASIC_BOUNDS",
            FilterId::T2 => "T2",
            FilterId::T3 => "T3",
            FilterId::T4 => "T4",
            FilterId::T5 => "T5",
            FilterId::T6 => "T6",
            FilterId::Modular => "MODULAR",
            FilterId::T1External => "T1_EXTERNAL",
        }
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FilterId {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        FilterId::ALL
            .into_iter()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| FilterError::UnknownFilter(s.trim().to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundViolation {
    /// `x >= z`
    XAtLeastZ,
    /// `y >= z`
    YAtLeastZ,
    /// `x + y <= z`
    SumAtMostZ,
    /// `x + y >= 2z`
    SumAtLeastTwiceZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GcdClause {
    /// gcd(x + y, z)
    SumWithZ,
    /// gcd(z - y, x)
    ZMinusYWithX,
    /// gcd(z - x, y)
    ZMinusXWithY,
}

impl GcdClause {
    fn label(self) -> &'static str {
        match self {
            GcdClause::SumWithZ => "gcd(x+y,z)",
            GcdClause::ZMinusYWithX => "gcd(z-y,x)",
            GcdClause::ZMinusXWithY => "gcd(z-x,y)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitGap {
    /// z - y = 1
    ZMinusY,
    /// z - x = 1
    ZMinusX,
}

/// Text carried by every external-theorem certificate.
pub const EXTERNAL_ASSUMPTION: &str =
    "assumes the Bennett-Skinner theorem: no coprime a, b, c with a^p - 4b^p = c^2 for primes p >= 7";

/// Witness data for a refutation. Serialized adjacently tagged as
/// `{"filter_id": ..., "witness": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "filter_id", content = "witness")]
pub enum Certificate {
    /// `lhs` and `rhs` are the two sides of the violated strict inequality
    /// a solution would need.
    #[serde(rename = "BASIC_BOUNDS")]
    BasicBounds {
        violated: BoundViolation,
        lhs: Natural,
        rhs: Natural,
    },
    /// `d = z - y` divides `x` with `gcd(x, y) = 1` and `d >= 2`. When
    /// `mirrored`, the roles of `x` and `y` are exchanged (`d = z - x` divides `y`).
    T2 {
        d: Natural,
        dividend: Natural,
        quotient: Natural,
        gcd_xy: Natural,
        mirrored: bool,
    },
    /// `gcd(left, right) = 1` for the named clause.
    T3 {
        clause: GcdClause,
        left: Natural,
        right: Natural,
        gcd: Natural,
    },
    /// `z` is prime (2 included).
    T4 {
        z: Natural,
    },
    /// `gcd(x, y) = 1` and `s = x + y` lies outside `[lower, upper]`.
    T5 {
        g: Natural,
        s: Natural,
        lower: Natural,
        upper: Natural,
        r: Option<Natural>,
    },
    T6 {
        gap: UnitGap,
    },
    /// `(x^p + y^p) mod m != z^p mod m`.
    #[serde(rename = "MODULAR")]
    Modular {
        modulus: Natural,
        lhs_residue: Natural,
        rhs_residue: Natural,
    },
    /// Conditional refutation resting on a cited nonexistence theorem.
    #[serde(rename = "T1_EXTERNAL")]
    T1External {
        gcd_xy: Natural,
        p: Natural,
        assumption: String,
    },
}

impl Certificate {
    pub fn filter_id(&self) -> FilterId {
        match self {
            Certificate::BasicBounds { .. } => FilterId::BasicBounds,
            Certificate::T2 { .. } => FilterId::T2,
            Certificate::T3 { .. } => FilterId::T3,
            Certificate::T4 { .. } => FilterId::T4,
            Certificate::T5 { .. } => FilterId::T5,
            Certificate::T6 { .. } => FilterId::T6,
            Certificate::Modular { .. } => FilterId::Modular,
            Certificate::T1External { .. } => FilterId::T1External,
        }
    }

    pub fn is_external(&self) -> bool {
        matches!(self, Certificate::T1External { .. })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::BasicBounds { violated, lhs, rhs } => {
                let rel = match violated {
                    BoundViolation::XAtLeastZ => "x >= z",
                    BoundViolation::YAtLeastZ => "y >= z",
                    BoundViolation::SumAtMostZ => "x+y <= z",
                    BoundViolation::SumAtLeastTwiceZ => "x+y >= 2z",
                };
                let op = if matches!(violated, BoundViolation::SumAtMostZ) { "<=" } else { ">=" };
                write!(f, "{rel} ({lhs} {op} {rhs})")
            }
            Certificate::T2 { d, dividend, quotient, mirrored, .. } => {
                let (gap, leg) = if *mirrored { ("z-x", "y") } else { ("z-y", "x") };
                write!(f, "{gap}={d} divides {leg}={dividend} ({dividend}={d}*{quotient}), gcd(x,y)=1")
            }
            Certificate::T3 { clause, left, right, gcd } => {
                write!(f, "{}=gcd({left},{right})={gcd}", clause.label())
            }
            Certificate::T4 { z } => write!(f, "z={z} is prime"),
            Certificate::T5 { s, lower, upper, .. } => {
                write!(f, "gcd(x,y)=1 and x+y={s} outside [{lower}, {upper}]")
            }
            Certificate::T6 { gap } => match gap {
                UnitGap::ZMinusY => f.write_str("z-y=1"),
                UnitGap::ZMinusX => f.write_str("z-x=1"),
            },
            Certificate::Modular { modulus, lhs_residue, rhs_residue } => {
                write!(f, "x^p+y^p = {lhs_residue} != {rhs_residue} = z^p (mod {modulus})")
            }
            Certificate::T1External { p, assumption, .. } => {
                write!(f, "gcd(x,y)=1 and p={p} not in {{3,5}}; {assumption}")
            }
        }
    }
}

/// Outcome of applying a filter to a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Refuted(Certificate),
    Inconclusive,
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Refuted(c) => Some(c),
            Verdict::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub x: Natural,
    pub y: Natural,
    pub z: Natural,
    pub p: Natural,
}

/// One line of a certificate stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub candidate: CandidateRecord,
    #[serde(flatten)]
    pub certificate: Certificate,
    pub external_assumption: bool,
}

impl CertificateRecord {
    pub fn new(candidate: &Candidate, certificate: Certificate) -> Self {
        CertificateRecord {
            candidate: CandidateRecord {
                x: candidate.x().clone(),
                y: candidate.y().clone(),
                z: candidate.z().clone(),
                p: candidate.p().value().clone(),
            },
            external_assumption: certificate.is_external(),
            certificate,
        }
    }

    /// Rebuilds the candidate this record claims to refute.
    pub fn to_candidate(&self) -> Result<Candidate, FilterError> {
        let c = &self.candidate;
        let p = OddPrime::new(c.p.clone())?;
        Candidate::new(c.x.clone(), c.y.clone(), c.z.clone(), p)
    }
}
