//! Quantities linear in the fractional order: `a + b·β` with rational `a`, `b`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `a + b·β`. Ordering is lexicographic on `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinExp {
    pub a: Rational64,
    pub b: Rational64,
}

impl LinExp {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        LinExp { a, b }
    }

    pub fn ints(a: i64, b: i64) -> Self {
        LinExp::new(Rational64::from_integer(a), Rational64::from_integer(b))
    }

    pub fn constant(a: Rational64) -> Self {
        LinExp::new(a, Rational64::zero())
    }

    pub fn zero() -> Self {
        LinExp::ints(0, 0)
    }

    pub fn one() -> Self {
        LinExp::ints(1, 0)
    }

    /// The order `β` itself.
    pub fn beta() -> Self {
        LinExp::ints(0, 1)
    }

    pub fn value(&self, beta: f64) -> f64 {
        ratio_f64(&self.a) + ratio_f64(&self.b) * beta
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_zero()
    }

    /// `Some(n)` when the expression is the integer constant `n`.
    pub fn as_integer(&self) -> Option<i64> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// Strictly positive for every β in (0, 1]. Linear, so checking the
    /// endpoints suffices (β → 0⁺ needs `a > 0`, or `a = 0` with `b > 0`).
    pub fn is_positive_on_unit(&self) -> bool {
        let at_zero = self.a.is_positive() || (self.a.is_zero() && self.b.is_positive());
        at_zero && (self.a + self.b).is_positive()
    }

    /// Non-negative for every β in (0, 1].
    pub fn is_nonnegative_on_unit(&self) -> bool {
        !self.a.is_negative() && !(self.a + self.b).is_negative()
    }

    /// Replaces β by a rational value.
    pub fn substitute(&self, beta: Rational64) -> LinExp {
        LinExp::constant(self.a + self.b * beta)
    }

    pub fn add_const(&self, c: i64) -> LinExp {
        LinExp::new(self.a + c, self.b)
    }
}

pub(crate) fn ratio_f64(r: &Rational64) -> f64 {
    if r.is_integer() {
        r.to_integer() as f64
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for LinExp {
    type Output = LinExp;
    fn add(self, o: LinExp) -> LinExp {
        LinExp::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LinExp {
    type Output = LinExp;
    fn sub(self, o: LinExp) -> LinExp {
        LinExp::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for LinExp {
    type Output = LinExp;
    fn neg(self) -> LinExp {
        LinExp::new(-self.a, -self.b)
    }
}

impl From<i64> for LinExp {
    fn from(a: i64) -> Self {
        LinExp::ints(a, 0)
    }
}

impl fmt::Display for LinExp {
    /// Canonical form `a+b*B` (or `a-b*B`), both parts always present.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*B", self.a, -self.b)
        } else {
            write!(f, "{}+{}*B", self.a, self.b)
        }
    }
}

impl FromStr for LinExp {
    type Err = Error;

    /// Accepts the canonical `a+b*B` form as well as bare rationals and
    /// shorthands such as `B`, `2*B`, `1+B`, `3/2-B`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty exponent".into()));
        }
        let bad = || Error::Parse(format!("cannot read exponent '{s}'"));
        let mut a = Rational64::zero();
        let mut b = Rational64::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let piece = &body[..end];
            rest = &body[end..];
            if piece.is_empty() {
                return Err(bad());
            }
            if let Some(coef) = piece.strip_suffix('B') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() { Rational64::one() } else { parse_rational64(coef).map_err(|_| bad())? };
                b += c * sign;
            } else {
                a += parse_rational64(piece).map_err(|_| bad())? * sign;
            }
        }
        Ok(LinExp::new(a, b))
    }
}

pub(crate) fn parse_rational64(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational: '{s}'")))
}

fn rational_str(r: &Rational64) -> String {
    r.to_string()
}

#[derive(Serialize, Deserialize)]
struct LinExpRepr {
    #[serde(default = "zero_str")]
    a: RatText,
    #[serde(default = "zero_str")]
    b: RatText,
}

fn zero_str() -> RatText {
    RatText::Text("0".into())
}

/// Rationals are written as `"p/q"` strings; plain JSON integers are accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatText {
    Int(i64),
    Text(String),
}

impl RatText {
    fn to_rational(&self) -> Result<Rational64> {
        match self {
            RatText::Int(i) => Ok(Rational64::from_integer(*i)),
            RatText::Text(s) => parse_rational64(s),
        }
    }
}

impl Serialize for LinExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinExpRepr { a: RatText::Text(rational_str(&self.a)), b: RatText::Text(rational_str(&self.b)) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LinExpRepr::deserialize(d)?;
        let a = r.a.to_rational().map_err(serde::de::Error::custom)?;
        let b = r.b.to_rational().map_err(serde::de::Error::custom)?;
        Ok(LinExp::new(a, b))
    }
}
