//! Exact rational scalars, vectors and extended grades.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not an exact rational: {0:?}")]
    BadRational(String),
    #[error("not a grade (rational, \"inf\" or \"-inf\"): {0:?}")]
    BadGrade(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a decimal without exponent (`"0.25"`).
pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let t = s.trim();
    if let Ok(v) = Q::from_str(t) {
        return Ok(v);
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let num = BigInt::from_str(&digits).map_err(|_| ParseError::BadRational(s.into()))?;
            let den = BigInt::from(10u32).pow(frac.len() as u32);
            let v = Q::new(num, den);
            return Ok(if neg { -v } else { v });
        }
    }
    Err(ParseError::BadRational(s.into()))
}

pub fn fmt_q(v: &Q) -> String {
    v.to_string()
}

pub fn lcm_of_denominators<'a>(vals: impl IntoIterator<Item = &'a Q>) -> BigInt {
    vals.into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde adapter for a single rational written as a string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = RawScalar::deserialize(d)?;
        raw.to_q().map_err(D::Error::custom)
    }
}

/// Accepts either a JSON string or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RawScalar {
    Str(String),
    Int(i64),
}

impl RawScalar {
    pub(crate) fn to_q(&self) -> Result<Q, ParseError> {
        match self {
            RawScalar::Str(s) => parse_q(s),
            RawScalar::Int(i) => Ok(q(*i)),
        }
    }

    pub(crate) fn to_grade(&self) -> Result<Grade, ParseError> {
        match self {
            RawScalar::Str(s) => Grade::from_str(s),
            RawScalar::Int(i) => Ok(Grade::Finite(q(*i))),
        }
    }
}

/// A point of ℚⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVec(pub Vec<Q>);

impl QVec {
    pub fn new(coords: Vec<Q>) -> Self {
        QVec(coords)
    }

    pub fn zeros(n: usize) -> Self {
        QVec(vec![Q::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        QVec(v.iter().map(|&x| q(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Q::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &QVec) -> Q {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Q) -> QVec {
        QVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// The unique primitive integral vector on the ray through `self`.
    /// Zero maps to zero.
    pub fn primitive(&self) -> QVec {
        if self.is_zero() {
            return self.clone();
        }
        let l = lcm_of_denominators(&self.0);
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * Q::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        QVec(ints.into_iter().map(|x| Q::from_integer(x / &g)).collect())
    }

    pub fn parse(items: &[&str]) -> Result<QVec, ParseError> {
        items.iter().map(|s| parse_q(s)).collect::<Result<_, _>>().map(QVec)
    }

    /// Parses `"1/2,3,-1"`.
    pub fn parse_csv(s: &str) -> Result<QVec, ParseError> {
        if s.trim().is_empty() {
            return Ok(QVec(Vec::new()));
        }
        s.split(',').map(parse_q).collect::<Result<_, _>>().map(QVec)
    }
}

impl Deref for QVec {
    type Target = [Q];
    fn deref(&self) -> &[Q] {
        &self.0
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(fmt_q))
    }
}

impl<'de> Deserialize<'de> for QVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<RawScalar>::deserialize(d)?;
        raw.iter()
            .map(RawScalar::to_q)
            .collect::<Result<Vec<_>, _>>()
            .map(QVec)
            .map_err(D::Error::custom)
    }
}

/// A rational grade extended by ±∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Grade {
    NegInf,
    Finite(Q),
    PosInf,
}

impl Grade {
    pub fn int(n: i64) -> Grade {
        Grade::Finite(q(n))
    }

    pub fn ratio(n: i64, d: i64) -> Grade {
        Grade::Finite(qr(n, d))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Grade::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Grade::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Translation by a finite amount; infinities are fixed.
    pub fn offset(&self, c: &Q) -> Grade {
        match self {
            Grade::Finite(v) => Grade::Finite(v + c),
            other => other.clone(),
        }
    }

    /// `self - other`, `None` for `∞ - ∞` of equal sign.
    pub fn checked_sub(&self, other: &Grade) -> Option<Grade> {
        use Grade::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a - b)),
            (PosInf, PosInf) | (NegInf, NegInf) => None,
            (PosInf, _) | (_, NegInf) => Some(PosInf),
            (NegInf, _) | (_, PosInf) => Some(NegInf),
        }
    }

    /// `self + other`, `None` for `∞ + (−∞)`.
    pub fn checked_add(&self, other: &Grade) -> Option<Grade> {
        use Grade::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Grade::NegInf => 0,
            Grade::Finite(_) => 1,
            Grade::PosInf => 2,
        }
    }
}

impl From<Q> for Grade {
    fn from(v: Q) -> Self {
        Grade::Finite(v)
    }
}

impl Ord for Grade {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Grade::Finite(a), Grade::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Grade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::NegInf => write!(f, "-inf"),
            Grade::PosInf => write!(f, "inf"),
            Grade::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Grade {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(Grade::PosInf),
            "-inf" | "-∞" => Ok(Grade::NegInf),
            t => parse_q(t)
                .map(Grade::Finite)
                .map_err(|_| ParseError::BadGrade(s.into())),
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Grade {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawScalar::deserialize(d)?
            .to_grade()
            .map_err(D::Error::custom)
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}
