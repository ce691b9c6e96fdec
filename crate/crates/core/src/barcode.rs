//! Decorated barcodes: the desk-scale model of one-dimensional persistence
//! modules, with shifts, Tamarkin torsion, derived Day convolution,
//! almostization, the quotient by constant objects, and K₀.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::k0::K0Class;
use crate::rational::{Grade, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarcodeError {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("unsupported bar shape {0}: only [a,b), [a,∞) and (−∞,∞) are allowed here")]
    UnsupportedShape(String),
    #[error("unsupported decoration on {0}: only left-closed right-open bars have a finite presentation")]
    UnsupportedDecoration(String),
    #[error("bar {0} must sit in homological degree 0")]
    NonzeroDegree(String),
    #[error("torsion parameter must be a finite nonnegative grade, got {0}")]
    BadTorsionParameter(String),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
}

/// An interval of ℝ with open/closed decorations at each end.
///
/// Field order gives the canonical sort order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    left: Grade,
    right: Grade,
    left_closed: bool,
    right_closed: bool,
}

impl Interval {
    pub fn new(
        left: Grade,
        right: Grade,
        left_closed: bool,
        right_closed: bool,
    ) -> Result<Interval, BarcodeError> {
        let iv = Interval {
            left,
            right,
            left_closed,
            right_closed,
        };
        let bad = |why: &str| Err(BarcodeError::InvalidInterval(format!("{iv}: {why}")));
        if iv.left == Grade::PosInf || iv.right == Grade::NegInf {
            return bad("endpoint at the wrong infinity");
        }
        if (!iv.left.is_finite() && iv.left_closed) || (!iv.right.is_finite() && iv.right_closed) {
            return bad("infinite endpoints are open");
        }
        match iv.left.cmp(&iv.right) {
            std::cmp::Ordering::Less => Ok(iv),
            std::cmp::Ordering::Equal if iv.left_closed && iv.right_closed => Ok(iv),
            std::cmp::Ordering::Equal => bad("a degenerate interval must be a closed singleton"),
            std::cmp::Ordering::Greater => bad("left endpoint exceeds right endpoint"),
        }
    }

    /// `[a, b)`.
    pub fn closed_open(a: Q, b: Q) -> Result<Interval, BarcodeError> {
        Interval::new(Grade::Finite(a), Grade::Finite(b), true, false)
    }

    /// `[a, ∞)`.
    pub fn ray(a: Q) -> Interval {
        Interval::new(Grade::Finite(a), Grade::PosInf, true, false).expect("valid ray")
    }

    /// `(−∞, ∞)`.
    pub fn line() -> Interval {
        Interval::new(Grade::NegInf, Grade::PosInf, false, false).expect("valid line")
    }

    /// `[a, a]`.
    pub fn singleton(a: Q) -> Interval {
        Interval::new(Grade::Finite(a.clone()), Grade::Finite(a), true, true).expect("valid point")
    }

    pub fn left(&self) -> &Grade {
        &self.left
    }

    pub fn right(&self) -> &Grade {
        &self.right
    }

    pub fn left_closed(&self) -> bool {
        self.left_closed
    }

    pub fn right_closed(&self) -> bool {
        self.right_closed
    }

    pub fn contains(&self, t: &Q) -> bool {
        let t = Grade::Finite(t.clone());
        let above = if self.left_closed { self.left <= t } else { self.left < t };
        let below = if self.right_closed { t <= self.right } else { t < self.right };
        above && below
    }

    pub fn is_singleton(&self) -> bool {
        self.left == self.right
    }

    pub fn is_line(&self) -> bool {
        self.left == Grade::NegInf && self.right == Grade::PosInf
    }

    /// `right − left`, `+∞` for unbounded intervals.
    pub fn length(&self) -> Grade {
        self.right
            .checked_sub(&self.left)
            .unwrap_or(Grade::PosInf)
    }

    /// The interval translated by `c` (each point `t` moves to `t + c`).
    pub fn translate(&self, c: &Q) -> Interval {
        Interval {
            left: self.left.offset(c),
            right: self.right.offset(c),
            ..self.clone()
        }
    }

    /// Shape within the presentable calculus, if any.
    pub fn shape(&self) -> Option<Shape> {
        if self.is_line() {
            return Some(Shape::Line);
        }
        if !self.left_closed || self.right_closed {
            return None;
        }
        let birth = self.left.finite()?.clone();
        match &self.right {
            Grade::PosInf => Some(Shape::Ray { birth }),
            Grade::Finite(d) => Some(Shape::Finite {
                birth,
                death: d.clone(),
            }),
            Grade::NegInf => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.left_closed { '[' } else { '(' };
        let r = if self.right_closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", self.left, self.right)
    }
}

/// Bar shapes realized by finitely presented modules (plus the constant line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Finite { birth: Q, death: Q },
    Ray { birth: Q },
    Line,
}

impl Shape {
    pub fn interval(&self) -> Interval {
        match self {
            Shape::Finite { birth, death } => {
                Interval::closed_open(birth.clone(), death.clone()).expect("birth < death")
            }
            Shape::Ray { birth } => Interval::ray(birth.clone()),
            Shape::Line => Interval::line(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub interval: Interval,
    pub degree: i64,
    pub multiplicity: u64,
}

impl Bar {
    pub fn new(interval: Interval, degree: i64, multiplicity: u64) -> Bar {
        Bar {
            interval,
            degree,
            multiplicity,
        }
    }
}

/// A finite multiset of bars in canonical order with aggregated multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.bars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", b.interval)?;
            if b.degree != 0 {
                write!(f, " deg {}", b.degree)?;
            }
            if b.multiplicity != 1 {
                write!(f, " ×{}", b.multiplicity)?;
            }
        }
        write!(f, "}}")
    }
}

impl FromIterator<Bar> for Barcode {
    fn from_iter<I: IntoIterator<Item = Bar>>(iter: I) -> Barcode {
        let mut agg: BTreeMap<(Interval, i64), u64> = BTreeMap::new();
        for b in iter {
            if b.multiplicity > 0 {
                *agg.entry((b.interval, b.degree)).or_insert(0) += b.multiplicity;
            }
        }
        Barcode {
            bars: agg
                .into_iter()
                .map(|((interval, degree), multiplicity)| Bar {
                    interval,
                    degree,
                    multiplicity,
                })
                .collect(),
        }
    }
}

impl Barcode {
    pub fn empty() -> Barcode {
        Barcode::default()
    }

    pub fn new(bars: impl IntoIterator<Item = Bar>) -> Barcode {
        bars.into_iter().collect()
    }

    /// Degree-0, multiplicity-1 bars.
    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Barcode {
        intervals.into_iter().map(|iv| Bar::new(iv, 0, 1)).collect()
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.bars.iter().map(|b| b.multiplicity).sum()
    }

    pub fn direct_sum(&self, other: &Barcode) -> Barcode {
        self.bars.iter().chain(&other.bars).cloned().collect()
    }

    /// Homological shift `[k]`: every degree lowered by `k`.
    pub fn degree_shift(&self, k: i64) -> Barcode {
        self.bars
            .iter()
            .map(|b| Bar::new(b.interval.clone(), b.degree - k, b.multiplicity))
            .collect()
    }

    /// Bars with multiplicity expanded, as `(interval, degree)`.
    pub fn expanded(&self) -> Vec<(Interval, i64)> {
        self.bars
            .iter()
            .flat_map(|b| {
                std::iter::repeat_n((b.interval.clone(), b.degree), b.multiplicity as usize)
            })
            .collect()
    }

    /// Dimension of each homological degree at grade `a`.
    pub fn eval_at(&self, a: &Q) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for b in self.bars.iter().filter(|b| b.interval.contains(a)) {
            *out.entry(b.degree).or_insert(0) += b.multiplicity;
        }
        out
    }

    /// `T_c`: `T_c(M)(a) = M(a + c)`, so every interval moves by `−c`.
    pub fn shift(&self, c: &Q) -> Barcode {
        let neg = -c;
        self.bars
            .iter()
            .map(|b| Bar::new(b.interval.translate(&neg), b.degree, b.multiplicity))
            .collect()
    }

    /// Whether `τ_c : M → T_c M` vanishes. On an interval module the component
    /// at `t` is nonzero iff both `t` and `t + c` lie in the interval.
    pub fn is_c_torsion(&self, c: &Q) -> Result<bool, BarcodeError> {
        if c.is_negative() {
            return Err(BarcodeError::BadTorsionParameter(c.to_string()));
        }
        Ok(self.bars.iter().all(|b| interval_is_c_torsion(&b.interval, c)))
    }

    /// Derived Day convolution, bilinear over bars.
    pub fn convolve(&self, other: &Barcode) -> Result<Barcode, BarcodeError> {
        let mut out = Vec::new();
        for x in &self.bars {
            let sx = shape_of(&x.interval)?;
            for y in &other.bars {
                let sy = shape_of(&y.interval)?;
                let deg = x.degree + y.degree;
                let mult = x.multiplicity * y.multiplicity;
                for (shape, extra) in convolve_shapes(&sx, &sy) {
                    out.push(Bar::new(shape.interval(), deg + extra, mult));
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Sum of singletons, i.e. annihilated by every `t^ε`, `ε > 0`.
    pub fn is_almost_zero(&self) -> bool {
        self.bars.iter().all(|b| b.interval.is_singleton())
    }

    /// Canonical representative of the almost-isomorphism class: each bar is
    /// replaced by the left-closed right-open interval with the same interior
    /// and singletons are dropped.
    pub fn almostize(&self) -> Barcode {
        self.bars
            .iter()
            .filter(|b| !b.interval.is_singleton())
            .map(|b| {
                let iv = &b.interval;
                let left_closed = iv.left.is_finite();
                let normal = Interval::new(iv.left.clone(), iv.right.clone(), left_closed, false)
                    .expect("nonempty interior");
                Bar::new(normal, b.degree, b.multiplicity)
            })
            .collect()
    }

    pub fn almost_iso(&self, other: &Barcode) -> bool {
        self.almostize() == other.almostize()
    }

    /// Verdier quotient by the constant (local) objects: drops full-line bars.
    pub fn quotient_by_locals(&self) -> Barcode {
        self.bars
            .iter()
            .filter(|b| !b.interval.is_line())
            .cloned()
            .collect()
    }

    /// `Σ (−1)^deg · mult · (e_birth − e_death)`, with `e_∞ = 0`.
    pub fn k0_class(&self) -> Result<K0Class, BarcodeError> {
        let mut k = K0Class::zero();
        for b in &self.bars {
            let sign = if b.degree.rem_euclid(2) == 0 { 1 } else { -1 };
            let n = sign * b.multiplicity as i64;
            match shape_of(&b.interval)? {
                Shape::Finite { birth, death } => {
                    k.add_term(birth, n);
                    k.add_term(death, -n);
                }
                Shape::Ray { birth } => k.add_term(birth, n),
                Shape::Line => {
                    return Err(BarcodeError::UnsupportedShape(b.interval.to_string()));
                }
            }
        }
        Ok(k)
    }

    /// Degree-0 part of morphisms in the torsion-free quotient,
    /// `colim_c Hom(X, T_c Y)`, read off once every endpoint comparison has
    /// settled.
    pub fn torsionfree_hom_dim(&self, other: &Barcode) -> Result<u64, BarcodeError> {
        let xs = degree_zero_shapes(self)?;
        let ys = degree_zero_shapes(other)?;
        let finite: Vec<Q> = xs
            .iter()
            .chain(&ys)
            .flat_map(|(s, _)| match s {
                Shape::Finite { birth, death } => vec![birth.clone(), death.clone()],
                Shape::Ray { birth } => vec![birth.clone()],
                Shape::Line => vec![],
            })
            .collect();
        let spread = match (finite.iter().min(), finite.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => Q::zero(),
        };
        let c = &spread + Q::from_integer(1.into());
        let at = |c: &Q| -> u64 {
            let shifted = Barcode::new(
                ys.iter()
                    .map(|(s, m)| Bar::new(s.interval(), 0, *m)),
            )
            .shift(c);
            hom_dim_degree_zero(self, &shifted)
        };
        let v = at(&c);
        debug_assert_eq!(v, at(&(&c + Q::from_integer(1.into()))));
        Ok(v)
    }
}

pub(crate) fn interval_is_c_torsion(iv: &Interval, c: &Q) -> bool {
    match iv.length() {
        Grade::Finite(len) => {
            if c < &len {
                false
            } else if c > &len {
                true
            } else {
                !(iv.left_closed && iv.right_closed)
            }
        }
        _ => false,
    }
}

fn shape_of(iv: &Interval) -> Result<Shape, BarcodeError> {
    iv.shape()
        .ok_or_else(|| BarcodeError::UnsupportedShape(iv.to_string()))
}

fn degree_zero_shapes(b: &Barcode) -> Result<Vec<(Shape, u64)>, BarcodeError> {
    b.bars
        .iter()
        .map(|bar| {
            if bar.degree != 0 {
                return Err(BarcodeError::NonzeroDegree(bar.interval.to_string()));
            }
            match shape_of(&bar.interval)? {
                Shape::Line => Err(BarcodeError::UnsupportedShape(bar.interval.to_string())),
                s => Ok((s, bar.multiplicity)),
            }
        })
        .collect()
}

/// `Hom([a,b), [c,d)) ≠ 0` iff `c ≤ a < d ≤ b` (ends may be infinite).
pub fn interval_hom_nonzero(x: &Interval, y: &Interval) -> bool {
    y.left <= x.left && x.left < y.right && y.right <= x.right
}

fn hom_dim_degree_zero(x: &Barcode, y: &Barcode) -> u64 {
    let mut n = 0;
    for a in &x.bars {
        for b in &y.bars {
            if interval_hom_nonzero(&a.interval, &b.interval) {
                n += a.multiplicity * b.multiplicity;
            }
        }
    }
    n
}

/// Derived convolution of two shapes, as `(shape, extra homological degree)`.
fn convolve_shapes(x: &Shape, y: &Shape) -> Vec<(Shape, i64)> {
    use Shape::*;
    match (x, y) {
        (Finite { birth: a, death: b }, Finite { birth: c, death: d }) => {
            let l1 = b - a;
            let l2 = d - c;
            let start = a + c;
            let (lo, hi) = if l1 <= l2 { (l1.clone(), l2.clone()) } else { (l2.clone(), l1.clone()) };
            vec![
                (
                    Finite {
                        birth: start.clone(),
                        death: &start + &lo,
                    },
                    0,
                ),
                (
                    Finite {
                        birth: &start + &hi,
                        death: &start + &l1 + &l2,
                    },
                    1,
                ),
            ]
        }
        (Ray { birth: a }, other) | (other, Ray { birth: a }) => vec![(translate_shape(other, a), 0)],
        (Line, Line) => vec![(Line, 0)],
        (Line, Finite { .. }) | (Finite { .. }, Line) => vec![],
    }
}

fn translate_shape(s: &Shape, by: &Q) -> Shape {
    match s {
        Shape::Finite { birth, death } => Shape::Finite {
            birth: birth + by,
            death: death + by,
        },
        Shape::Ray { birth } => Shape::Ray { birth: birth + by },
        Shape::Line => Shape::Line,
    }
}

#[derive(Serialize, Deserialize)]
struct BarJson {
    birth: Grade,
    death: Grade,
    #[serde(default = "default_true")]
    birth_closed: bool,
    #[serde(default)]
    death_closed: bool,
    #[serde(default)]
    degree: i64,
    #[serde(default = "default_one")]
    multiplicity: u64,
}

fn default_true() -> bool {
    true
}

fn default_one() -> u64 {
    1
}

#[derive(Serialize, Deserialize)]
struct BarcodeJson {
    bars: Vec<BarJson>,
}

impl Serialize for Barcode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BarcodeJson {
            bars: self
                .bars
                .iter()
                .map(|b| BarJson {
                    birth: b.interval.left.clone(),
                    death: b.interval.right.clone(),
                    birth_closed: b.interval.left_closed,
                    death_closed: b.interval.right_closed,
                    degree: b.degree,
                    multiplicity: b.multiplicity,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Barcode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BarcodeJson::deserialize(d)?;
        let mut bars = Vec::new();
        for b in raw.bars {
            if b.multiplicity == 0 {
                return Err(D::Error::custom(BarcodeError::ZeroMultiplicity));
            }
            // infinite endpoints are always open, whatever the flags say
            let lc = b.birth_closed && b.birth.is_finite();
            let rc = b.death_closed && b.death.is_finite();
            let iv = Interval::new(b.birth, b.death, lc, rc).map_err(D::Error::custom)?;
            bars.push(Bar::new(iv, b.degree, b.multiplicity));
        }
        Ok(bars.into_iter().collect())
    }
}
