use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::natural::{modpow_u64, mulmod_u64};
use super::{ArithError, Natural};

const TRIAL_DIVISION_LIMIT: u64 = 1 << 32;

// Strong-pseudoprime bases that are deterministic for every n < 3.3e24
// (Sorenson & Webster). The first twelve already cover all of u64.
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// 3,317,044,064,679,887,385,961,981: smallest strong pseudoprime to all of
/// [`WITNESSES`].
const WITNESS_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Exact primality.
///
/// * `n < 2^32`: trial division by 2, 3 and numbers of the form 6k ± 1.
/// * `2^32 <= n < 3.3e24`: strong-pseudoprime test with a witness set that
///   is proven deterministic over that range.
/// * larger: the same witnesses plus a strong Lucas test (Baillie–PSW).
///   No counterexample to Baillie–PSW is known; nothing the search harness
///   enumerates reaches this branch.
pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(v) if v < TRIAL_DIVISION_LIMIT => is_prime_trial(v),
        Some(v) => WITNESSES[..12].iter().all(|&a| strong_probable_prime_u64(v, a)),
        None => is_prime_big(&n.to_biguint()),
    }
}

fn is_prime_trial(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = modpow_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_big(n: &BigUint) -> bool {
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let passes = |a: u64| {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    if !WITNESSES.iter().all(|&a| passes(a)) {
        return false;
    }
    if n.to_u128().is_some_and(|v| v < WITNESS_BOUND) {
        return true;
    }
    strong_lucas_probable_prime(n)
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().expect("mod_floor is non-negative");
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1u32;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
/// `n` must be odd and not a perfect square for the D search to terminate;
/// perfect squares are rejected up front.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 if d.abs() != n_int => return false,
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    let q = (BigInt::one() - &d) / 4i32;
    let reduce = |v: BigInt| v.mod_floor(&n_int);
    let half = |v: BigInt| {
        let v = if v.is_odd() { v + &n_int } else { v };
        (v / 2i32).mod_floor(&n_int)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Left-to-right binary ladder for U_k, V_k, Q^k.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = reduce(q.clone());
    let p = BigInt::one();
    for i in (0..k.bits() - 1).rev() {
        u = reduce(&u * &v);
        v = reduce(&v * &v - 2 * &qk);
        qk = reduce(&qk * &qk);
        if k.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&d * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - 2 * &qk);
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk);
    }
    false
}

/// Every prime `p` with `3 <= p <= limit`, ascending (sieve of Eratosthenes).
pub fn odd_primes_up_to(limit: u64) -> Vec<OddPrime> {
    if limit < 3 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("sieve limit exceeds address space");
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (3..=limit).filter(|&n| !composite[n]).map(|n| OddPrime(Natural::from_u64(n as u64))).collect()
}

/// A prime `>= 3`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddPrime(Natural);

impl OddPrime {
    pub fn new(value: Natural) -> Result<Self, ArithError> {
        if value >= 3 && is_prime(&value) {
            Ok(OddPrime(value))
        } else {
            Err(ArithError::NotOddPrime(value))
        }
    }

    pub fn value(&self) -> &Natural {
        &self.0
    }

    /// The prime as a `u32` exponent, when it fits.
    pub fn exponent(&self) -> Option<u32> {
        self.0.to_u32()
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = ArithError;

    fn try_from(v: u64) -> Result<Self, Self::Error> {
        OddPrime::new(Natural::from_u64(v))
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for OddPrime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OddPrime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = Natural::deserialize(deserializer)?;
        OddPrime::new(n).map_err(serde::de::Error::custom)
    }
}
