//! Exact integer primitives shared by every other module.

mod natural;
mod prime;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

pub use natural::Natural;
pub use prime::{is_prime, odd_primes_up_to, OddPrime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("binomial({n}, {k}) requested with k > n")]
    BinomialOutOfRange { n: Natural, k: Natural },
    #[error("0^0 is undefined")]
    ZeroToZero,
    #[error("exponent {0} is too large to evaluate")]
    ExponentTooLarge(Natural),
    #[error("{0} is not an odd prime")]
    NotOddPrime(Natural),
    #[error("invalid natural number literal {0:?}")]
    Parse(String),
}

/// Greatest common divisor; `gcd(a, 0) = a`, and `gcd(0, 0)` is an error.
pub fn gcd(a: &Natural, b: &Natural) -> Result<Natural, ArithError> {
    if a.is_zero() && b.is_zero() {
        return Err(ArithError::GcdOfZeros);
    }
    Ok(a.gcd(b))
}

/// `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn perfect_square_root(n: &Natural) -> Option<Natural> {
    let r = n.isqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: &Natural, k: &Natural) -> Result<Natural, ArithError> {
    let n_minus_k =
        n.checked_sub(k).ok_or_else(|| ArithError::BinomialOutOfRange { n: n.clone(), k: k.clone() })?;
    let k = k.min(&n_minus_k);
    let steps = k.to_u64().ok_or_else(|| ArithError::ExponentTooLarge(k.clone()))?;
    let n = n.to_biguint();
    let mut acc = BigUint::one();
    // acc = C(n, i) after step i; each division is exact.
    for i in 0..steps {
        acc = acc * (&n - i) / (i + 1);
    }
    Ok(Natural::from_biguint(acc))
}

/// Exact `base^exp`; `0^0` is an error.
pub fn pow(base: &Natural, exp: &Natural) -> Result<Natural, ArithError> {
    if exp.is_zero() {
        return if base.is_zero() { Err(ArithError::ZeroToZero) } else { Ok(Natural::ONE) };
    }
    if base.is_zero() || base.is_one() {
        return Ok(base.clone());
    }
    let e = exp.to_u32().ok_or_else(|| ArithError::ExponentTooLarge(exp.clone()))?;
    Ok(base.pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u64) -> Natural {
        Natural::from_u64(v)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&n(12), &n(18)).unwrap(), n(6));
        assert_eq!(gcd(&n(35), &n(64)).unwrap(), n(1));
        assert_eq!(gcd(&n(17), &n(0)).unwrap(), n(17));
        assert_eq!(gcd(&n(0), &n(17)).unwrap(), n(17));
        for v in 1..50 {
            assert_eq!(gcd(&n(v), &n(v)).unwrap(), n(v));
        }
        assert_eq!(gcd(&n(0), &n(0)), Err(ArithError::GcdOfZeros));
    }

    #[test]
    fn perfect_square_examples() {
        assert_eq!(perfect_square_root(&n(49)), Some(n(7)));
        assert_eq!(perfect_square_root(&n(48)), None);
        assert_eq!(perfect_square_root(&n(14161)), Some(n(119)));
        assert_eq!(perfect_square_root(&n(0)), Some(n(0)));
        assert_eq!(perfect_square_root(&n(1)), Some(n(1)));
        let big: Natural = "340282366920938463463374607431768211456".parse().unwrap(); // 2^128
        assert_eq!(perfect_square_root(&big), Some("18446744073709551616".parse().unwrap()));
        assert_eq!(perfect_square_root(&(&big + 1)), None);
        assert_eq!(perfect_square_root(&(&big - 1)), None);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(&n(5), &n(2)).unwrap(), n(10));
        assert_eq!(binomial(&n(7), &n(3)).unwrap(), n(35));
        for v in 0..20 {
            assert_eq!(binomial(&n(v), &n(0)).unwrap(), n(1));
            assert_eq!(binomial(&n(v), &n(v)).unwrap(), n(1));
        }
        assert!(matches!(binomial(&n(3), &n(4)), Err(ArithError::BinomialOutOfRange { .. })));
        assert_eq!(binomial(&n(100), &n(50)).unwrap().to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn pow_examples() {
        assert_eq!(pow(&n(2), &n(10)).unwrap(), n(1024));
        assert_eq!(pow(&n(7), &n(3)).unwrap(), n(343));
        for v in 0..20 {
            assert_eq!(pow(&n(v), &n(1)).unwrap(), n(v));
        }
        assert_eq!(pow(&n(0), &n(0)), Err(ArithError::ZeroToZero));
        assert_eq!(pow(&n(0), &n(5)).unwrap(), n(0));
        assert_eq!(pow(&n(5), &n(0)).unwrap(), n(1));
        let huge_exp: Natural = "99999999999".parse().unwrap();
        assert_eq!(pow(&n(1), &huge_exp).unwrap(), n(1));
        assert!(matches!(pow(&n(2), &huge_exp), Err(ArithError::ExponentTooLarge(_))));
        assert_eq!(pow(&n(2), &n(100)).unwrap().to_string(), "1267650600228229401496703205376");
    }

    fn arb_natural() -> impl Strategy<Value = Natural> {
        prop_oneof![
            any::<u64>().prop_map(Natural::from_u64),
            proptest::collection::vec(any::<u32>(), 1..6)
                .prop_map(|digits| Natural::from_biguint(BigUint::new(digits))),
        ]
    }

    proptest! {
        #[test]
        fn euclidean_step(a in arb_natural(), b in arb_natural()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(gcd(&a, &b).unwrap(), gcd(&b, &(&a % &b)).unwrap());
        }

        #[test]
        fn gcd_matches_num_integer(a in arb_natural(), b in arb_natural()) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let expected = num_integer::Integer::gcd(&a.to_biguint(), &b.to_biguint());
            prop_assert_eq!(gcd(&a, &b).unwrap().to_biguint(), expected);
        }

        #[test]
        fn square_root_of_square(r in arb_natural()) {
            prop_assert_eq!(perfect_square_root(&(&r * &r)), Some(r));
        }

        #[test]
        fn square_root_iff_floor_root_squares(v in arb_natural()) {
            // Independent floor root from num-bigint.
            let floor = v.to_biguint().sqrt();
            let is_square = &floor * &floor == v.to_biguint();
            prop_assert_eq!(perfect_square_root(&v).is_some(), is_square);
            prop_assert_eq!(v.isqrt().to_biguint(), floor);
        }

        #[test]
        fn pascal_rule(nv in 2u64..300, k_frac in 0.0f64..1.0) {
            let k = 1 + ((nv - 2) as f64 * k_frac) as u64;
            let lhs = binomial(&n(nv), &n(k)).unwrap();
            let rhs = binomial(&n(nv - 1), &n(k - 1)).unwrap() + binomial(&n(nv - 1), &n(k)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn arithmetic_matches_biguint(a in arb_natural(), b in arb_natural()) {
            let (ba, bb) = (a.to_biguint(), b.to_biguint());
            prop_assert_eq!((&a + &b).to_biguint(), &ba + &bb);
            prop_assert_eq!((&a * &b).to_biguint(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_biguint(), &ba / &bb);
                prop_assert_eq!((&a % &b).to_biguint(), &ba % &bb);
            }
            prop_assert_eq!(a.checked_sub(&b).map(|d| d.to_biguint()), (ba >= bb).then(|| &ba - &bb));
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }
    }
}
