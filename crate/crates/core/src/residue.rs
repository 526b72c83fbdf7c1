//! Exact rationals and residues in Q/Z.
//!
//! Every phase in the crate (conformal weights, charges, bicharacter values)
//! is carried as a [`Residue`]; complex exponentials are only formed at the
//! boundary where numerical matrices are built.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = num_rational::Rational64;

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// Serde adapter for `Rational` fields as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| {
                parse_rational(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .collect()
    }
}

/// An element of Q/Z, stored as its representative in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(Rational);

impl Residue {
    pub const ZERO: Residue = Residue(Rational::new_raw(0, 1));

    pub fn new(r: Rational) -> Self {
        let f = r - r.floor();
        Residue(f)
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(Rational::new(p, q))
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Order of the residue in Q/Z, i.e. its reduced denominator.
    pub fn order(&self) -> i64 {
        *self.0.denom()
    }

    /// `exp(2 pi i r)`.
    pub fn phase(&self) -> Complex64 {
        let x = 2.0 * std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        Complex64::new(x.cos(), x.sin())
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Nearest residue `m / n` to a real phase `x` (in units of full turns),
    /// together with the distance on the circle.
    pub fn snap(x: f64, n: u64) -> (Residue, f64) {
        let n = n.max(1) as i64;
        let scaled = x * n as f64;
        let m = scaled.round();
        let dist = ((scaled - m) / n as f64).abs();
        (Residue::from_ratio((m as i64).mod_floor(&n), n), dist)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl FromStr for Residue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Residue::new).ok_or_else(|| format!("bad residue {s:?}"))
    }
}

impl Serialize for Residue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Residue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Rational> for Residue {
    fn from(r: Rational) -> Self {
        Residue::new(r)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        Residue::new(self.0 + rhs.0)
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        Residue::new(self.0 - rhs.0)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new(-self.0)
    }
}

impl Mul<i64> for Residue {
    type Output = Residue;
    fn mul(self, n: i64) -> Residue {
        Residue::new(self.0 * Rational::from_integer(n))
    }
}

impl std::iter::Sum for Residue {
    fn sum<I: Iterator<Item = Residue>>(iter: I) -> Residue {
        iter.fold(Residue::ZERO, |a, b| a + b)
    }
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}
