//! Exact linear algebra over ℚ and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{QVec, Q};

/// Coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FieldTag {
    #[default]
    Rational,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("unknown field {0:?} (expected q, f2, f<p> with p prime)")]
    Unknown(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {coef} has a denominator divisible by {p}")]
    NotReducible { coef: String, p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldTag {
    pub fn prime(p: u64) -> Result<FieldTag, FieldError> {
        if is_prime(p) {
            Ok(FieldTag::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Rational => 0,
            FieldTag::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "q"),
            FieldTag::Prime(p) => write!(f, "f{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, FieldError> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rational" || t == "qq" {
            return Ok(FieldTag::Rational);
        }
        let digits = t
            .strip_prefix('f')
            .ok_or_else(|| FieldError::Unknown(s.into()))?;
        let p: u64 = digits.parse().map_err(|_| FieldError::Unknown(s.into()))?;
        FieldTag::prime(p)
    }
}

impl Serialize for FieldTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn reduce_mod(v: &Q, p: u64) -> Result<u64, FieldError> {
    let pb = BigInt::from(p);
    let den = v.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(FieldError::NotReducible {
            coef: v.to_string(),
            p,
        });
    }
    let num = v.numer().mod_floor(&pb).to_u64().unwrap_or(0);
    let den = den.to_u64().unwrap_or(1);
    Ok(mul_mod(num, inv_mod(den, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Canonical representative of `v` in the field: `v` itself over ℚ, the
/// residue in `{0, …, p−1}` over F_p.
pub fn field_reduce(v: &Q, field: FieldTag) -> Result<Q, FieldError> {
    match field {
        FieldTag::Rational => Ok(v.clone()),
        FieldTag::Prime(p) => Ok(Q::from_integer(BigInt::from(reduce_mod(v, p)?))),
    }
}

/// `a / b` for canonical representatives, `b` nonzero.
pub fn field_div(a: &Q, b: &Q, field: FieldTag) -> Q {
    match field {
        FieldTag::Rational => a / b,
        FieldTag::Prime(p) => {
            let a = reduce_mod(a, p).expect("canonical residue");
            let b = reduce_mod(b, p).expect("canonical residue");
            Q::from_integer(BigInt::from(mul_mod(a, inv_mod(b, p), p)))
        }
    }
}

/// Rank of a matrix given by rows, over the chosen field.
pub fn rank(rows: &[Vec<Q>], field: FieldTag) -> Result<usize, FieldError> {
    match field {
        FieldTag::Rational => Ok(rank_q(rows)),
        FieldTag::Prime(p) => {
            let m = rows
                .iter()
                .map(|r| r.iter().map(|x| reduce_mod(x, p)).collect())
                .collect::<Result<Vec<Vec<u64>>, _>>()?;
            Ok(rank_fp(m, p))
        }
    }
}

fn rank_fp(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..ncols {
                    let sub = mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_vecs(vs: &[QVec]) -> usize {
    rank_q(&vs.iter().map(|v| v.0.clone()).collect::<Vec<_>>())
}

/// Basis of `{x ∈ ℚⁿ : ⟨r, x⟩ = 0 for every row r}`.
pub fn nullspace(rows: &[QVec], n: usize) -> Vec<QVec> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    if m.is_empty() {
        return (0..n).map(|i| QVec::unit(n, i)).collect();
    }
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            QVec(v).primitive()
        })
        .collect()
}

/// Maximal linearly independent subset, keeping the earliest vectors.
pub fn independent_subset(vs: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for v in vs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if rank_vecs(&trial) == trial.len() {
            out = trial;
        }
    }
    out
}

/// Coordinates of `v` in the (independent) family `basis`, if `v` lies in its span.
pub fn coordinates(basis: &[QVec], v: &QVec) -> Option<Vec<Q>> {
    let k = basis.len();
    let n = v.dim();
    // augmented system: sum_j c_j basis_j = v
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Q::zero(); k];
    for (row, &pc) in m.iter().zip(&pivots) {
        c[pc] = row[k].clone();
    }
    Some(c)
}

pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let sub = &f * &m[c][j];
                    m[i][j] -= sub;
                }
            }
        }
    }
    d
}

pub fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}
