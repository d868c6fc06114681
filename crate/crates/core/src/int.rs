//! Arbitrary-precision signed integers with a machine-word fast path.
//!
//! Collection in a pc presentation performs an enormous number of small
//! integer operations; boxing every exponent as a heap bignum would dominate
//! the runtime of the long class-8 computations. `Int` therefore keeps values
//! in an `i64` while they fit and transparently promotes to a heap-allocated
//! `BigInt` on overflow. Semantically it is an unbounded integer throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Int::Small(v) => *v > 0,
            Int::Big(b) => b.is_positive(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => match v.cmp(&0) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_usize(&self) -> Option<usize> {
        match self {
            Int::Small(v) => usize::try_from(*v).ok(),
            Int::Big(_) => None,
        }
    }

    /// Euclidean division: quotient `q` with `self = q*d + r`, `0 <= r < |d|`.
    pub fn div_rem_euclid(&self, d: &Int) -> (Int, Int) {
        assert!(!d.is_zero(), "division by zero");
        match (self, d) {
            (Int::Small(a), Int::Small(b)) => {
                // i64::MIN / -1 is the only overflowing case
                if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                    return (Int::Small(q), Int::Small(r));
                }
                let (q, r) = big_div_rem_euclid(&BigInt::from(*a), &BigInt::from(*b));
                (Int::from_big(q), Int::from_big(r))
            }
            _ => {
                let (q, r) = big_div_rem_euclid(&self.to_big(), &d.to_big());
                (Int::from_big(q), Int::from_big(r))
            }
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                // gcd(i64::MIN, i64::MIN) overflows the small path
                if *a == i64::MIN || *b == i64::MIN {
                    Int::from_big(self.to_big().gcd(&other.to_big()))
                } else {
                    Int::Small(a.unsigned_abs().gcd(&b.unsigned_abs()) as i64)
                }
            }
            _ => Int::from_big(self.to_big().gcd(&other.to_big())),
        }
    }

    /// Extended gcd: `(g, s, t)` with `g = s*self + t*other`, `g >= 0`.
    pub fn extended_gcd(&self, other: &Int) -> (Int, Int, Int) {
        let e = self.to_big().extended_gcd(&other.to_big());
        if e.gcd.is_negative() {
            (
                Int::from_big(-e.gcd),
                Int::from_big(-e.x),
                Int::from_big(-e.y),
            )
        } else {
            (Int::from_big(e.gcd), Int::from_big(e.x), Int::from_big(e.y))
        }
    }

    /// Binomial coefficient C(n, 2) = n(n-1)/2, defined for any integer n.
    pub fn binom2(n: i64) -> Int {
        let n = Int::Small(n);
        let prod = &n * &(&n - &Int::ONE);
        let (q, r) = prod.div_rem_euclid(&Int::Small(2));
        debug_assert!(r.is_zero());
        q
    }
}

fn big_div_rem_euclid(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let (mut q, mut r) = a.div_rem(b);
    if r.is_negative() {
        if b.is_positive() {
            q -= 1;
            r += b;
        } else {
            q += 1;
            r -= b;
        }
    }
    (q, r)
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Int {
        Int::Small(v as i64)
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl Default for Int {
    fn default() -> Int {
        Int::ZERO
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_add(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_big(BigInt::from(*a) + BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_sub(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_big(BigInt::from(*a) - BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_big(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => Int::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(v)),
            },
            Int::Big(b) => Int::from_big(-*b),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        -self.clone()
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Int {
            type Output = Int;
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Int> for Int {
            type Output = Int;
            fn $method(self, rhs: &Int) -> Int {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                *self = Int::Small(v);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                *self = Int::Small(v);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Int> for Int {
    fn mul_assign(&mut self, rhs: &Int) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Int, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        Ok(Int::from_big(s.parse::<BigInt>()?))
    }
}

// Serialized as a decimal string so that canonical JSON is lossless and
// identical regardless of magnitude.
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Int, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Int {
        Int::Small(v)
    }

    #[test]
    fn promotes_on_overflow() {
        let big = &int(i64::MAX) + &int(1);
        assert!(matches!(big, Int::Big(_)));
        let back = &big - &int(1);
        assert_eq!(back, int(i64::MAX));
        assert!(matches!(back, Int::Small(_)));
    }

    #[test]
    fn euclidean_division_signs() {
        let (q, r) = int(-7).div_rem_euclid(&int(3));
        assert_eq!((q, r), (int(-3), int(2)));
        let (q, r) = int(7).div_rem_euclid(&int(-3));
        assert_eq!((q, r), (int(-2), int(1)));
        let (q, r) = int(-7).div_rem_euclid(&int(-3));
        assert_eq!((q, r), (int(3), int(2)));
    }

    #[test]
    fn extended_gcd_identity() {
        let (g, s, t) = int(240).extended_gcd(&int(46));
        assert_eq!(g, int(2));
        assert_eq!(&(&s * &int(240)) + &(&t * &int(46)), g);
    }

    #[test]
    fn binom2_values() {
        let want = [(1, 0), (2, 1), (3, 3), (4, 6), (5, 10), (6, 15)];
        for (n, c) in want {
            assert_eq!(Int::binom2(n), int(c));
        }
        assert_eq!(Int::binom2(-2), int(3));
    }

    #[test]
    fn serde_round_trip_via_string() {
        let v = "123456789012345678901234567890".parse::<Int>().unwrap();
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, "\"123456789012345678901234567890\"");
        let back: Int = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn big_small_comparisons() {
        let big = &int(i64::MAX) + &int(5);
        assert!(big > int(i64::MAX));
        assert!(int(0) < int(1));
        assert_eq!(big.signum(), 1);
        assert_eq!((-big.clone()).signum(), -1);
    }
}
