//! Exact evaluations of the algebraic identities behind the refutation
//! filters: the odd-exponent sum and difference factorizations, the binomial
//! gap, and the reduction of a solution to a square discriminant.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binomial, perfect_square_root, Natural};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("exponent {0} must be odd")]
    EvenExponent(u32),
    #[error("exponent must be at least {min}, got {got}")]
    ExponentTooSmall { min: u32, got: u32 },
    #[error("arguments must be positive")]
    ZeroArgument,
    #[error("requires z > y, got z = {z}, y = {y}")]
    NotDecreasing { z: Natural, y: Natural },
    #[error("({x}, {y}, {z}) is not a solution for exponent {p}")]
    NotASolution { x: Natural, y: Natural, z: Natural, p: u32 },
    #[error("gcd(x, y) = {0}, expected 1")]
    NotCoprime(Natural),
    #[error("x = y cannot occur in a coprime solution")]
    EqualLegs,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// The triple `(a, b, c) = (z^2, xy, sqrt(z^2p - 4(xy)^p))` built from a
/// coprime solution, satisfying `a^p - 4 b^p = c^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub a: Natural,
    pub b: Natural,
    pub c: Natural,
}

impl ReductionWitness {
    /// Checks `a^p - 4 b^p = c^2` exactly.
    pub fn satisfies(&self, p: u32) -> bool {
        let lhs = self.a.pow(p).to_bigint() - BigInt::from(4) * self.b.pow(p).to_bigint();
        lhs == (&self.c * &self.c).to_bigint()
    }
}

/// `sum_{i=0}^{n-1} (-1)^i x^i y^(n-1-i)`, the cofactor of `x + y` in
/// `x^n + y^n` for odd `n`.
pub fn alt_factor_sum(x: &Natural, y: &Natural, n: u32) -> Result<Natural, IdentityError> {
    if x.is_zero() || y.is_zero() {
        return Err(IdentityError::ZeroArgument);
    }
    if n % 2 == 0 {
        return Err(IdentityError::EvenExponent(n));
    }
    let (x, y) = (x.to_bigint(), y.to_bigint());
    let mut total = BigInt::zero();
    // term_i = x^i y^(n-1-i), built from x^i and y^(n-1-i) separately so no
    // division is needed.
    let y_powers = powers(&y, n);
    let mut x_pow = BigInt::one();
    for i in 0..n {
        let term = &x_pow * &y_powers[(n - 1 - i) as usize];
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        x_pow *= &x;
    }
    positive(total, "alternating sum")
}

/// `sum_{i=0}^{n-1} z^i y^(n-1-i)`, the cofactor of `z - y` in `z^n - y^n`.
pub fn diff_factor_sum(z: &Natural, y: &Natural, n: u32) -> Result<Natural, IdentityError> {
    if y.is_zero() {
        return Err(IdentityError::ZeroArgument);
    }
    if z <= y {
        return Err(IdentityError::NotDecreasing { z: z.clone(), y: y.clone() });
    }
    if n == 0 {
        return Err(IdentityError::ExponentTooSmall { min: 1, got: n });
    }
    let y_powers = powers(&y.to_bigint(), n);
    let z = z.to_bigint();
    let mut z_pow = BigInt::one();
    let mut total = BigInt::zero();
    for i in 0..n {
        total += &z_pow * &y_powers[(n - 1 - i) as usize];
        z_pow *= &z;
    }
    positive(total, "difference sum")
}

/// `sum_{j=1}^{p-1} C(p, j) y^j a^(p-j)`, i.e. `(y + a)^p - y^p - a^p`.
/// The sum is empty (zero) for `p = 1`, where the identity still holds.
pub fn binomial_gap_expansion(y: &Natural, a: &Natural, p: u32) -> Result<Natural, IdentityError> {
    if y.is_zero() || a.is_zero() {
        return Err(IdentityError::ZeroArgument);
    }
    if p < 1 {
        return Err(IdentityError::ExponentTooSmall { min: 1, got: p });
    }
    let p_nat = Natural::from(p);
    let mut total = Natural::ZERO;
    for j in 1..p {
        let c = binomial(&p_nat, &Natural::from(j)).expect("j < p");
        total = total + c * y.pow(j) * a.pow(p - j);
    }
    Ok(total)
}

/// `z^(2p) - 4 (xy)^p` as an exact signed integer.
pub fn discriminant(x: &Natural, y: &Natural, z: &Natural, p: u32) -> BigInt {
    let z_term = z.pow(p).to_bigint();
    let xy_term = (x * y).pow(p).to_bigint();
    &z_term * &z_term - BigInt::from(4) * xy_term
}

/// Builds the [`ReductionWitness`] `(z^2, xy, c)` from a coprime solution of
/// `x^p + y^p = z^p`. Any exponent `p >= 1` is accepted.
pub fn theorem1_reduce(
    x: &Natural,
    y: &Natural,
    z: &Natural,
    p: u32,
) -> Result<ReductionWitness, IdentityError> {
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return Err(IdentityError::ZeroArgument);
    }
    if p == 0 {
        return Err(IdentityError::ExponentTooSmall { min: 1, got: p });
    }
    if x.pow(p) + y.pow(p) != z.pow(p) {
        return Err(IdentityError::NotASolution { x: x.clone(), y: y.clone(), z: z.clone(), p });
    }
    let g = x.gcd(y);
    if !g.is_one() {
        return Err(IdentityError::NotCoprime(g));
    }
    if x == y {
        return Err(IdentityError::EqualLegs);
    }
    let d = discriminant(x, y, z, p);
    let d = Natural::from_bigint(&d)
        .ok_or_else(|| IdentityError::Inconsistent(format!("negative discriminant {d}")))?;
    let c = perfect_square_root(&d).ok_or_else(|| {
        IdentityError::Inconsistent(format!("discriminant {d} of a solution is not a square"))
    })?;
    let witness = ReductionWitness { a: z * z, b: x * y, c };
    if !witness.a.gcd(&witness.b).is_one() {
        return Err(IdentityError::Inconsistent(format!(
            "gcd({}, {}) != 1 for a coprime solution",
            witness.a, witness.b
        )));
    }
    Ok(witness)
}

pub fn pairwise_coprime(x: &Natural, y: &Natural, z: &Natural) -> bool {
    x.gcd(y).is_one() && y.gcd(z).is_one() && x.gcd(z).is_one()
}

fn powers(base: &BigInt, n: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = BigInt::one();
    for _ in 0..n {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

fn positive(total: BigInt, what: &str) -> Result<Natural, IdentityError> {
    if !total.is_positive() {
        return Err(IdentityError::Inconsistent(format!("{what} evaluated to {total}")));
    }
    Ok(Natural::from_bigint(&total).expect("positive"))
}
