use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational over 64-bit components, always stored reduced with a
/// positive denominator. Arithmetic goes through 128-bit intermediates and
/// aborts if a reduced result leaves the 64-bit range; there is no rounding
/// fallback anywhere in this crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Rational, Error> {
        if den == 0 {
            return Err(Error::ZeroDenominator { num });
        }
        Ok(reduce(num as i128, den as i128))
    }

    pub fn from_integer(value: i64) -> Rational {
        Rational { num: value, den: 1 }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_integer().then_some(self.num)
    }

    /// True when `self` is a nonnegative integer multiple of `k`.
    pub fn is_multiple_of(&self, k: i64) -> bool {
        match self.as_integer() {
            Some(v) => v >= 0 && k != 0 && v % k == 0,
            None => false,
        }
    }
}

fn reduce(num: i128, den: i128) -> Rational {
    debug_assert!(den != 0);
    let sign = if den < 0 { -1 } else { 1 };
    let g = num.gcd(&den);
    let (num, den) = if g == 0 {
        (0, 1)
    } else {
        (sign * num / g, sign * den / g)
    };
    let num = i64::try_from(num).expect("exact rational overflow: numerator exceeds 64 bits");
    let den = i64::try_from(den).expect("exact rational overflow: denominator exceeds 64 bits");
    Rational { num, den }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        reduce(num, self.den as i128 * rhs.den as i128)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        reduce(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "exact rational division by zero");
        reduce(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> std::cmp::Ordering {
        // Denominators are positive, so cross multiplication preserves order.
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Rational {
        Rational::from_integer(value)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational, Error> {
        let malformed = || Error::MalformedRational {
            text: s.to_string(),
        };
        let s = s.trim();
        match s.split_once('/') {
            None => {
                let num = s.parse::<i64>().map_err(|_| malformed())?;
                Ok(Rational::from_integer(num))
            }
            Some((p, q)) => {
                let num = p.trim().parse::<i64>().map_err(|_| malformed())?;
                let den = q.trim().parse::<i64>().map_err(|_| malformed())?;
                if den == 0 {
                    return Err(Error::ZeroDenominator { num });
                }
                Ok(Rational::new(num, den).expect("nonzero denominator"))
            }
        }
    }
}

// Integers travel as JSON numbers, proper fractions as "p/q" strings.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.den == 1 {
            serializer.serialize_i64(self.num)
        } else {
            serializer.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        struct RationalVisitor;

        impl<'de> Visitor<'de> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                i64::try_from(v)
                    .map(Rational::from_integer)
                    .map_err(|_| E::custom("integer entry exceeds 64 bits"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!(
                    "entry {v} is a float; exact entries must be integers or \"p/q\" strings"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(|e| E::custom(format!("{e}")))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}
