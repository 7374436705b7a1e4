use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Rem, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// An exact non-negative integer of unbounded size.
///
/// Values that fit in a `u64` are kept inline and every operation on two
/// inline values stays inline until it overflows, at which point it falls
/// back to [`BigUint`]. The representation is canonical: a value is stored
/// as `Big` only if it exceeds `u64::MAX`, so derived equality, ordering and
/// hashing are all value-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(Repr);

// Variant order matters for the derived `Ord`: every `Big` is larger than
// every `Small`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Small(u64),
    Big(BigUint),
}

impl Natural {
    pub const ZERO: Natural = Natural(Repr::Small(0));
    pub const ONE: Natural = Natural(Repr::Small(1));

    pub const fn from_u64(v: u64) -> Self {
        Natural(Repr::Small(v))
    }

    pub fn from_biguint(v: BigUint) -> Self {
        match v.to_u64() {
            Some(s) => Natural(Repr::Small(s)),
            None => Natural(Repr::Big(v)),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(s) => BigUint::from(*s),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.to_biguint())
    }

    /// Converts a non-negative [`BigInt`]; `None` for negative inputs.
    pub fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_biguint().map(Natural::from_biguint)
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(s) => Some(*s),
            Repr::Big(_) => None,
        }
    }

    pub fn to_u32(&self) -> Option<u32> {
        self.to_u64().and_then(|v| u32::try_from(v).ok())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    pub fn is_even(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s % 2 == 0,
            Repr::Big(b) => b.is_even(),
        }
    }

    /// Number of significant bits; zero has zero bits.
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(s) => u64::from(64 - s.leading_zeros()),
            Repr::Big(b) => b.bits(),
        }
    }

    pub fn checked_sub(&self, rhs: &Natural) -> Option<Natural> {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => a.checked_sub(*b).map(Natural::from_u64),
            _ => {
                if self < rhs {
                    None
                } else {
                    Some(Natural::from_biguint(self.to_biguint() - rhs.to_biguint()))
                }
            }
        }
    }

    pub fn abs_diff(&self, rhs: &Natural) -> Natural {
        if self >= rhs {
            self - rhs
        } else {
            rhs - self
        }
    }

    /// Greatest common divisor with `gcd(0, 0) = 0`. See [`super::gcd`] for
    /// the checked variant.
    pub fn gcd(&self, rhs: &Natural) -> Natural {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Natural::from_u64(binary_gcd(*a, *b)),
            _ => Natural::from_biguint(self.to_biguint().gcd(&rhs.to_biguint())),
        }
    }

    /// `self | rhs`. Zero divides only zero.
    pub fn divides(&self, rhs: &Natural) -> bool {
        if self.is_zero() {
            return rhs.is_zero();
        }
        (rhs % self).is_zero()
    }

    pub fn pow(&self, exp: u32) -> Natural {
        if let Repr::Small(s) = self.0 {
            if let Some(v) = s.checked_pow(exp) {
                return Natural::from_u64(v);
            }
        }
        Natural::from_biguint(self.to_biguint().pow(exp))
    }

    /// `self^exp mod modulus`. Panics if `modulus` is zero.
    pub fn modpow(&self, exp: &Natural, modulus: &Natural) -> Natural {
        assert!(!modulus.is_zero(), "modpow with zero modulus");
        match (&self.0, &exp.0, &modulus.0) {
            (Repr::Small(b), Repr::Small(e), Repr::Small(m)) => Natural::from_u64(modpow_u64(*b, *e, *m)),
            _ => Natural::from_biguint(self.to_biguint().modpow(&exp.to_biguint(), &modulus.to_biguint())),
        }
    }

    /// Floor of the square root, computed with integer Newton iteration.
    pub fn isqrt(&self) -> Natural {
        match &self.0 {
            Repr::Small(s) => Natural::from_u64(isqrt_u64(*s)),
            Repr::Big(b) => Natural::from_biguint(isqrt_big(b)),
        }
    }
}

fn binary_gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

pub(crate) fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn modpow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod_u64(result, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    result
}

fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    // Start above the root: 2^ceil(bits/2) > sqrt(n).
    let bits = 64 - n.leading_zeros();
    let mut x = 1u64 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn isqrt_big(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let bits = n.bits();
    let mut x = BigUint::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

impl Default for Natural {
    fn default() -> Self {
        Natural::ZERO
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural::from_u64(v)
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural::from_u64(u64::from(v))
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural::from_biguint(v)
    }
}

impl PartialEq<u64> for Natural {
    fn eq(&self, other: &u64) -> bool {
        matches!(self.0, Repr::Small(s) if s == *other)
    }
}

impl PartialOrd<u64> for Natural {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(match self.0 {
            Repr::Small(s) => s.cmp(other),
            Repr::Big(_) => Ordering::Greater,
        })
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(s) => fmt::Display::fmt(s, f),
            Repr::Big(b) => fmt::Display::fmt(b, f),
        }
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Natural {
    type Err = ArithError;

    /// Parses an unsigned decimal literal of any length.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ArithError::Parse(s.to_owned()));
        }
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Natural::from_u64(v));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Natural::from_biguint)
            .ok_or_else(|| ArithError::Parse(s.to_owned()))
    }
}

// Naturals travel as decimal strings so that no consumer silently truncates
// them to a float or a fixed-width integer.
impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NaturalVisitor;

        impl Visitor<'_> for NaturalVisitor {
            type Value = Natural;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative decimal integer (string or number)")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Natural, E> {
                Ok(Natural::from_u64(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Natural, E> {
                u64::try_from(v)
                    .map(Natural::from_u64)
                    .map_err(|_| E::custom("negative value for a natural number"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Natural, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(NaturalVisitor)
    }
}

impl Add<&Natural> for &Natural {
    type Output = Natural;

    fn add(self, rhs: &Natural) -> Natural {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(v) = a.checked_add(*b) {
                return Natural::from_u64(v);
            }
        }
        Natural::from_biguint(self.to_biguint() + rhs.to_biguint())
    }
}

impl Sub<&Natural> for &Natural {
    type Output = Natural;

    /// Panics on underflow, like the primitive unsigned types.
    fn sub(self, rhs: &Natural) -> Natural {
        self.checked_sub(rhs).unwrap_or_else(|| panic!("natural subtraction underflow: {self} - {rhs}"))
    }
}

impl Mul<&Natural> for &Natural {
    type Output = Natural;

    fn mul(self, rhs: &Natural) -> Natural {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(v) = a.checked_mul(*b) {
                return Natural::from_u64(v);
            }
        }
        Natural::from_biguint(self.to_biguint() * rhs.to_biguint())
    }
}

impl Div<&Natural> for &Natural {
    type Output = Natural;

    fn div(self, rhs: &Natural) -> Natural {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Natural::from_u64(a / b),
            _ => Natural::from_biguint(self.to_biguint() / rhs.to_biguint()),
        }
    }
}

impl Rem<&Natural> for &Natural {
    type Output = Natural;

    fn rem(self, rhs: &Natural) -> Natural {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Natural::from_u64(a % b),
            _ => Natural::from_biguint(self.to_biguint() % rhs.to_biguint()),
        }
    }
}

macro_rules! forward_owned_binop {
    ($($imp:ident $method:ident),*) => {$(
        impl $imp<Natural> for Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&Natural> for Natural {
            type Output = Natural;
            fn $method(self, rhs: &Natural) -> Natural {
                (&self).$method(rhs)
            }
        }
        impl $imp<Natural> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                self.$method(&rhs)
            }
        }
        impl $imp<u64> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: u64) -> Natural {
                self.$method(&Natural::from_u64(rhs))
            }
        }
        impl $imp<u64> for Natural {
            type Output = Natural;
            fn $method(self, rhs: u64) -> Natural {
                (&self).$method(&Natural::from_u64(rhs))
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div, Rem rem);
