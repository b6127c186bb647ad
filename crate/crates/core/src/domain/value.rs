use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::time::{Duration, MINUTES_PER_HOUR};

/// Whole currency units. Never fractional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn new(units: i64) -> Self {
        Money(units)
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    /// Price of `span` at `self` per hour, rounded half away from zero to
    /// whole units. Exact whenever the span is a whole number of hours.
    pub fn for_span(self, span: Duration) -> Money {
        let num = self.0 as i128 * span.minutes() as i128;
        let den = MINUTES_PER_HOUR as i128;
        let rounded = if num >= 0 {
            (num + den / 2) / den
        } else {
            (num - den / 2) / den
        };
        Money(i64::try_from(rounded).expect("money overflow"))
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        Money(self.0 * rhs)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

/// Exact rational competence score, e.g. the `15.75` note of a technician.
///
/// Serialized as a string: a finite decimal when the value has one
/// (`"15.75"`), otherwise `"p/q"`. Deserialization also accepts JSON numbers
/// and comma decimals (`"15,75"`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Competence(Ratio<i64>);

impl Competence {
    pub fn new(value: Ratio<i64>) -> Self {
        Competence(value)
    }

    pub fn from_integer(n: i64) -> Self {
        Competence(Ratio::from_integer(n))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Multiplies by a positive rational factor.
    pub fn scaled(&self, factor: Ratio<i64>) -> Competence {
        Competence(self.0 * factor)
    }
}

impl fmt::Display for Competence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match finite_decimal(&self.0) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

fn finite_decimal(r: &Ratio<i64>) -> Option<String> {
    let mut den = *r.denom();
    let mut scale = 0u32;
    // denominators of the form 2^a 5^b terminate
    while den % 2 == 0 || den % 5 == 0 {
        if den % 10 == 0 {
            den /= 10;
        } else if den % 2 == 0 {
            den /= 2;
        } else {
            den /= 5;
        }
        scale += 1;
    }
    if den != 1 {
        return None;
    }
    let big = Ratio::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let scaled = big * BigInt::from(10).pow(scale);
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer();
    if scale == 0 {
        return Some(digits.to_string());
    }
    let neg = digits.is_negative();
    let mut s = digits.abs().to_string();
    while s.len() <= scale as usize {
        s.insert(0, '0');
    }
    s.insert(s.len() - scale as usize, '.');
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    Some(if neg { format!("-{trimmed}") } else { trimmed.to_string() })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid competence value {0:?}")]
pub struct ParseCompetenceError(pub String);

impl FromStr for Competence {
    type Err = ParseCompetenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCompetenceError(s.to_string());
        let text = s.trim().replace(',', ".");
        if let Some((p, q)) = text.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| err())?;
            let q: i64 = q.trim().parse().map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            return Ok(Competence(Ratio::new(p, q)));
        }
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.as_str()),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        if frac_part.len() > 12 {
            return Err(err());
        }
        let scale = 10i64.pow(frac_part.len() as u32);
        let int: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| err())? };
        let frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err())? };
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(err)?;
        let value = Ratio::new(if neg { -numer } else { numer }, scale);
        Ok(Competence(value))
    }
}

impl Serialize for Competence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Competence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s,
            Raw::Number(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Competence {
    fn zero() -> Self {
        Competence(Ratio::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for Competence {
    type Output = Competence;
    fn add(self, rhs: Competence) -> Competence {
        Competence(self.0 + rhs.0)
    }
}
