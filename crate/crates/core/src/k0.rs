//! Finitely supported integer formal sums `Σ n_a e_a` over rational grades:
//! the group ring ℤ[ℚ] in which K₀ classes live.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::{serde_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct K0Class {
    terms: BTreeMap<Q, i64>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    #[serde(with = "serde_q")]
    grade: Q,
    coef: i64,
}

impl K0Class {
    pub fn zero() -> K0Class {
        K0Class::default()
    }

    /// The basis element `e_a`.
    pub fn basis(a: Q) -> K0Class {
        let mut k = K0Class::zero();
        k.add_term(a, 1);
        k
    }

    pub fn add_term(&mut self, a: Q, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn coefficient(&self, a: &Q) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, i64)> {
        self.terms.iter().map(|(a, n)| (a, *n))
    }

    /// Image under the augmentation ℤ[ℚ] → ℤ, `e_a ↦ 1`.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl Add for &K0Class {
    type Output = K0Class;
    fn add(self, rhs: &K0Class) -> K0Class {
        let mut out = self.clone();
        for (a, n) in rhs.terms() {
            out.add_term(a.clone(), n);
        }
        out
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        K0Class {
            terms: self.terms.iter().map(|(a, n)| (a.clone(), -n)).collect(),
        }
    }
}

impl Sub for &K0Class {
    type Output = K0Class;
    fn sub(self, rhs: &K0Class) -> K0Class {
        self + &(-rhs)
    }
}

/// Group-ring product, `e_a · e_b = e_{a+b}`.
impl Mul for &K0Class {
    type Output = K0Class;
    fn mul(self, rhs: &K0Class) -> K0Class {
        let mut out = K0Class::zero();
        for (a, n) in self.terms() {
            for (b, m) in rhs.terms() {
                out.add_term(a + b, n * m);
            }
        }
        out
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, n)) in self.terms().enumerate() {
            let sign = if n < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = n.abs();
            if mag == 1 {
                write!(f, "{sign}e_{a}")?;
            } else {
                write!(f, "{sign}{mag}e_{a}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for K0Class {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(a, n)| Term {
            grade: a.clone(),
            coef: *n,
        }))
    }
}

impl<'de> Deserialize<'de> for K0Class {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut k = K0Class::zero();
        for t in terms {
            k.add_term(t.grade, t.coef);
        }
        Ok(k)
    }
}
