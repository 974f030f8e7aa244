//! Exact rationals with an `i64` fast path.
//!
//! Values are kept in lowest terms with a positive denominator. A value is
//! stored inline while numerator and denominator fit in `i64` and is promoted
//! to a big rational on overflow; results that fit again are demoted, so the
//! representation of a given number is unique and `==` is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn small_ok(r: &Ratio<i64>) -> bool {
    *r.numer() != i64::MIN && *r.denom() != i64::MIN
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational::from_small(Ratio::from_integer(n))
    }

    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational::from_big(BigRational::new(numer.into(), denom.into()))
    }

    fn from_small(r: Ratio<i64>) -> Self {
        if small_ok(&r) {
            Rational(Repr::Small(r))
        } else {
            Rational(Repr::Big(BigRational::new(
                (*r.numer()).into(),
                (*r.denom()).into(),
            )))
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => Rational::from_small(r.abs()),
            Repr::Big(r) => Rational::from_big(r.abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => Rational::from_small(r.recip()),
            Repr::Big(r) => Rational::from_big(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Whether the value is stored inline.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(_))
    }

    /// `self -= factor * other`, the elimination kernel.
    pub fn sub_mul_assign(&mut self, factor: &Rational, other: &Rational) {
        let prod = factor * other;
        *self = &*self - &prod;
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $big:tt) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;

            fn $method(self, rhs: &'a Rational) -> Rational {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Rational::from_small(r);
                    }
                }
                Rational::from_big(self.to_big() $big rhs.to_big())
            }
        }

        impl $trait for Rational {
            type Output = Rational;

            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Rational::from_small(r);
            }
        }
        Rational::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div for Rational {
    type Output = Rational;

    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match &self.0 {
            // small_ok excludes i64::MIN, so negation cannot overflow
            Repr::Small(r) => Rational(Repr::Small(-*r)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        -&self
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                let l = *a.numer() as i128 * *b.denom() as i128;
                let r = *b.numer() as i128 * *a.denom() as i128;
                l.cmp(&r)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| &acc + x)
    }
}

/// `p/q`, or `p` for integers.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(p, q)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(Rational::new(-1, 3).to_string(), "-1/3");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
        assert_eq!(Rational::new(2, -4).to_string(), "-1/2");
        assert_eq!("-1/3".parse::<Rational>().unwrap(), Rational::new(-1, 3));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from_integer(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert!(!sum.is_small());
        let back = &sum - &big;
        assert!(back.is_small());
        assert_eq!(back, big);
        let tiny = Rational::new(1, i64::MAX);
        let prod = &tiny * &tiny;
        assert!(!prod.is_small());
        assert_eq!(&prod * &big, tiny);
    }

    #[test]
    fn min_is_never_inline() {
        let m = Rational::from_integer(i64::MIN);
        assert!(!m.is_small());
        assert_eq!((-&m).to_string(), "9223372036854775808");
    }

    #[test]
    fn serde_uses_strings() {
        let r = Rational::new(-1, 3);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-1/3\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    fn arb() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(p, q)| Rational::new(p, q))
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in arb(), b in arb()) {
            let (x, y) = (a.to_big(), b.to_big());
            prop_assert_eq!(&a + &b, Rational::from(&x + &y));
            prop_assert_eq!(&a - &b, Rational::from(&x - &y));
            prop_assert_eq!(&a * &b, Rational::from(&x * &y));
            if !b.is_zero() {
                prop_assert_eq!(&a / &b, Rational::from(&x / &y));
            }
            prop_assert_eq!(a.cmp(&b), x.cmp(&y));
        }
    }
}
