//! Novikov toric charts `Spec k[σ^∨]` and their gluing data, checked purely
//! at the level of cones and monoids.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cutoff::OpenPolyhedron;
use crate::geometry::{separating_vector, Cone, Fan, GeometryError};
use crate::rational::{lcm_of_denominators, QVec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("cone {0} is not proper")]
    ImproperCone(String),
    #[error("cones are not adjacent in a common fan: {0}")]
    NotAdjacent(String),
    #[error("{0} is not in the dual cone")]
    NotInDualCone(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gluing identity failed: {0}")]
    IdentityFailed(String),
    #[error("ladder level does not fit in 64 bits")]
    LevelOverflow,
    #[error("unknown grading group {0:?} (expected \"Q\" or \"1/k\")")]
    BadGrading(String),
}

/// Grading group of a chart: all of ℚⁿ, or the lattice `(1/k)ℤⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GradingGroup {
    #[default]
    Rational,
    Lattice(u64),
}

impl GradingGroup {
    pub fn contains(&self, q: &QVec) -> bool {
        match self {
            GradingGroup::Rational => true,
            GradingGroup::Lattice(k) => {
                let k = Q::from_integer(BigInt::from(*k));
                q.iter().all(|x| (x * &k).is_integer())
            }
        }
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingGroup::Rational => write!(f, "Q"),
            GradingGroup::Lattice(k) => write!(f, "1/{k}"),
        }
    }
}

impl FromStr for GradingGroup {
    type Err = ToricError;
    fn from_str(s: &str) -> Result<Self, ToricError> {
        let bad = || ToricError::BadGrading(s.to_string());
        match s.trim() {
            "Q" | "q" => Ok(GradingGroup::Rational),
            t => {
                let k = t.strip_prefix("1/").ok_or_else(bad)?;
                match k.parse::<u64>() {
                    Ok(k) if k >= 1 => Ok(GradingGroup::Lattice(k)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for GradingGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GradingGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// The affine chart `U_σ = Spec k[σ^∨ ∩ G]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub cone: Cone,
    pub dual: Cone,
    pub grading: GradingGroup,
}

pub fn chart_of_cone(s: &Cone, grading: GradingGroup) -> Result<Chart, ToricError> {
    if !s.is_proper() {
        return Err(ToricError::ImproperCone(s.to_string()));
    }
    let dual = s.dual();
    debug_assert!(dual.is_full_dimensional());
    Ok(Chart {
        cone: s.clone(),
        dual,
        grading,
    })
}

impl Chart {
    /// Whether `t^q` is a monomial of the chart: `q ∈ σ^∨ ∩ G`.
    pub fn contains_monomial(&self, q: &QVec) -> bool {
        self.dual.contains(q) && self.grading.contains(q)
    }
}

/// Gluing datum `U_{σ1} ⊃ {t^m ≠ 0} ≅ U_τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub source: Cone,
    pub target: Cone,
    pub m: QVec,
    pub overlap: Cone,
}

fn check_dims(a: &Cone, b: &Cone) -> Result<(), ToricError> {
    if a.ambient_dim() == b.ambient_dim() {
        Ok(())
    } else {
        Err(ToricError::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        })
    }
}

fn adjacency(e: GeometryError) -> ToricError {
    ToricError::NotAdjacent(e.to_string())
}

/// `σ^∨ + ℝ≥0·(−m)`, the monoid after inverting `t^m`.
fn localize(dual: &Cone, m: &QVec) -> Cone {
    dual.sum(&Cone::from_generators(m.dim(), &[-m]).expect("dimensions agree"))
        .expect("dimensions agree")
}

pub fn transition_data(c1: &Chart, c2: &Chart) -> Result<Transition, ToricError> {
    check_dims(&c1.cone, &c2.cone)?;
    let tau = c1.cone.intersect(&c2.cone).map_err(adjacency)?;
    let m = separating_vector(&c1.cone, &c2.cone).map_err(adjacency)?;
    let overlap = tau.dual();
    if !localize(&c1.dual, &m).set_eq(&overlap) {
        return Err(ToricError::IdentityFailed(format!(
            "τ^∨ ≠ σ1^∨ + ray(−m) for m = {m}"
        )));
    }
    let both = c1.dual.sum(&c2.dual).expect("dimensions agree");
    if !both.set_eq(&overlap) {
        return Err(ToricError::IdentityFailed("τ^∨ ≠ σ1^∨ + σ2^∨".into()));
    }
    Ok(Transition {
        source: c1.cone.clone(),
        target: c2.cone.clone(),
        m,
        overlap,
    })
}

/// Outcome of the triple-overlap comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub ok: bool,
    /// `(σ1∩σ2∩σ3)^∨` reached along `1→2→3`.
    pub route_123: bool,
    /// `(σ1∩σ2∩σ3)^∨` reached along `1→3→2`.
    pub route_132: bool,
    /// Every inverted monomial is a unit of the triple overlap.
    pub monomials_are_units: bool,
    /// `m_{ji} = −m_{ij}` for all three pairs.
    pub inverse_consistent: bool,
}

/// Compares both iterated localizations of chart 1 onto the triple overlap.
pub fn cocycle_check(c1: &Chart, c2: &Chart, c3: &Chart) -> Result<CocycleReport, ToricError> {
    check_dims(&c1.cone, &c2.cone)?;
    check_dims(&c1.cone, &c3.cone)?;
    let triple = c1
        .cone
        .intersect(&c2.cone)
        .and_then(|t| t.intersect(&c3.cone))
        .map_err(adjacency)?;
    let triple_dual = triple.dual();
    let is_unit = |m: &QVec| triple_dual.contains(m) && triple_dual.contains(&-m);

    let route = |a: &Chart, b: &Chart, c: &Chart| -> Result<(bool, Vec<QVec>), ToricError> {
        let first = transition_data(a, b)?;
        let tau = a.cone.intersect(&b.cone).map_err(adjacency)?;
        let m2 = separating_vector(&tau, &c.cone).map_err(adjacency)?;
        let reached = localize(&first.overlap, &m2);
        Ok((reached.set_eq(&triple_dual), vec![first.m, m2]))
    };
    let (route_123, ms_a) = route(c1, c2, c3)?;
    let (route_132, ms_b) = route(c1, c3, c2)?;
    let monomials_are_units = ms_a.iter().chain(&ms_b).all(is_unit);

    let pairs = [(c1, c2), (c1, c3), (c2, c3)];
    let mut inverse_consistent = true;
    for (a, b) in pairs {
        let ab = transition_data(a, b)?.m;
        let ba = transition_data(b, a)?.m;
        inverse_consistent &= ab == -&ba;
    }
    Ok(CocycleReport {
        ok: route_123 && route_132 && monomials_are_units && inverse_consistent,
        route_123,
        route_132,
        monomials_are_units,
        inverse_consistent,
    })
}

/// The idempotent boundary ideal `k[int σ^∨] ⊂ k[σ^∨]` of a chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostContent {
    pub chart: Chart,
    pub interior_ideal_cone: OpenPolyhedron,
}

impl AlmostContent {
    pub fn new(chart: Chart) -> Result<AlmostContent, ToricError> {
        let interior_ideal_cone = OpenPolyhedron::cone_interior(&chart.dual);
        let a = AlmostContent {
            chart,
            interior_ideal_cone,
        };
        if !boundary_idempotent_check(&a) {
            return Err(ToricError::IdentityFailed("int σ^∨ + int σ^∨ ≠ int σ^∨".into()));
        }
        Ok(a)
    }
}

/// `int(σ^∨) + int(σ^∨) = int(σ^∨)`, decided by exact Minkowski summation.
pub fn boundary_idempotent_check(a: &AlmostContent) -> bool {
    let i = &a.interior_ideal_cone;
    i.minkowski_sum(i).is_ok_and(|s| s.set_eq(i))
}

/// Least `k` with `q ∈ (1/k)ℤⁿ`; membership of `q` in `σ^∨ ∩ (1/k')ℤⁿ` is
/// asserted for the first few multiples `k'` of `k`.
pub fn root_ladder_level(c: &Chart, q: &QVec) -> Result<u64, ToricError> {
    if q.dim() != c.cone.ambient_dim() {
        return Err(ToricError::DimensionMismatch {
            expected: c.cone.ambient_dim(),
            found: q.dim(),
        });
    }
    if !c.dual.contains(q) {
        return Err(ToricError::NotInDualCone(q.to_string()));
    }
    let k = lcm_of_denominators(q.iter())
        .to_u64()
        .ok_or(ToricError::LevelOverflow)?;
    for mult in 1..=4u64 {
        let level = GradingGroup::Lattice(k * mult);
        assert!(level.contains(q) && c.dual.contains(q));
    }
    Ok(k)
}

/// Charts, transitions between maximal cones, cocycle verdicts on triples of
/// maximal cones, and boundary idempotency for every cone of a fan.
#[derive(Debug, Clone, Serialize)]
pub struct Atlas {
    pub charts: Vec<AtlasChart>,
    pub transitions: Vec<AtlasTransition>,
    pub cocycles: Vec<AtlasCocycle>,
    pub boundary: Vec<AtlasBoundary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasChart {
    pub id: String,
    pub cone: Cone,
    pub dual: Cone,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasTransition {
    pub source: String,
    pub target: String,
    pub m: QVec,
    pub overlap: Cone,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasCocycle {
    pub charts: [String; 3],
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasBoundary {
    pub id: String,
    pub idempotent: bool,
}

pub fn atlas(fan: &Fan, grading: GradingGroup) -> Result<Atlas, ToricError> {
    let maxes = fan.maximal_indices();
    let chart = |i: usize| chart_of_cone(fan.cone(i), grading);
    let id = |i: usize| fan.cones()[i].id.clone();
    let mut charts = Vec::new();
    for &i in &maxes {
        let c = chart(i)?;
        charts.push(AtlasChart {
            id: id(i),
            cone: c.cone,
            dual: c.dual,
        });
    }
    let mut transitions = Vec::new();
    for &i in &maxes {
        for &j in &maxes {
            if i != j {
                let t = transition_data(&chart(i)?, &chart(j)?)?;
                transitions.push(AtlasTransition {
                    source: id(i),
                    target: id(j),
                    m: t.m,
                    overlap: t.overlap,
                });
            }
        }
    }
    let mut cocycles = Vec::new();
    for (a, &i) in maxes.iter().enumerate() {
        for (b, &j) in maxes.iter().enumerate().skip(a + 1) {
            for &k in maxes.iter().skip(b + 1) {
                let r = cocycle_check(&chart(i)?, &chart(j)?, &chart(k)?)?;
                cocycles.push(AtlasCocycle {
                    charts: [id(i), id(j), id(k)],
                    ok: r.ok,
                });
            }
        }
    }
    let boundary = (0..fan.cones().len())
        .map(|i| {
            let c = chart(i)?;
            let idempotent = AlmostContent::new(c).is_ok();
            Ok(AtlasBoundary {
                id: id(i),
                idempotent,
            })
        })
        .collect::<Result<_, ToricError>>()?;
    Ok(Atlas {
        charts,
        transitions,
        cocycles,
        boundary,
    })
}

/// Whether `m` is zero (the trivial transition of a chart to itself).
pub fn is_trivial(t: &Transition) -> bool {
    t.m.iter().all(Zero::is_zero)
}
