//! Combinatorics of the microlocal cut-off: open polyhedra in the
//! γ-topology, Δ-polytopes of fans with their Minkowski identities, stalks of
//! the star complex, and convolution of indicator sheaves.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fm::{Rel, Row, System};
use crate::geometry::{Cone, Fan};
use crate::linalg::{coordinates, det, rank, FieldError, FieldTag};
use crate::rational::{serde_q, Grade, QVec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutoffError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {0} is not in the set")]
    PointNotInSet(String),
    #[error("set is not γ-open")]
    NotGammaOpen,
    #[error("cone has empty interior")]
    EmptyInterior,
    #[error("input polyhedron is empty")]
    EmptyInput,
    #[error("fan is not complete")]
    IncompleteFan,
    #[error("no offset given for ray {0}")]
    MissingOffset(String),
    #[error("offset for ray {0} must be a rational or +inf")]
    BadOffset(String),
    #[error("no cone with id {0}")]
    UnknownCone(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A strict half-space `⟨normal, u⟩ + offset > 0`, i.e. `⟨normal, u⟩ > −offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: QVec,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: QVec, offset: Q) -> Halfspace {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, u: &QVec) -> bool {
        (self.normal.dot(u) + &self.offset).is_positive()
    }

    fn row(&self) -> Row {
        Row::new(self.normal.0.clone(), self.offset.clone(), Rel::Gt)
    }

    /// The closed complement `⟨normal, u⟩ + offset ≤ 0`.
    fn complement_row(&self) -> Row {
        Row::new(
            self.normal.iter().map(|x| -x).collect(),
            -&self.offset,
            Rel::Ge,
        )
    }

    /// Positive rescaling making the normal primitive integral.
    fn normalized(&self) -> Halfspace {
        let p = self.normal.primitive();
        let idx = self.normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let scale = &p[idx] / &self.normal[idx];
        Halfspace::new(p, &self.offset * scale)
    }
}

/// A finite intersection of strict half-spaces, kept in canonical form:
/// irredundant, primitive normals, sorted. The empty set has a dedicated form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenPolyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    empty: bool,
}

impl fmt::Display for OpenPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "∅");
        }
        if self.halfspaces.is_empty() {
            return write!(f, "ℚ^{}", self.dim);
        }
        for (i, h) in self.halfspaces.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "⟨{},u⟩>{}", h.normal, -&h.offset)?;
        }
        Ok(())
    }
}

fn system_of(dim: usize, rows: impl IntoIterator<Item = Row>) -> System {
    let mut s = System::new(dim);
    for r in rows {
        s.push(r);
    }
    s
}

impl OpenPolyhedron {
    /// Builds the canonical form of `∩ halfspaces` (zero normals are allowed
    /// and act as `true` or `false`).
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<OpenPolyhedron, CutoffError> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.dim() != dim) {
            return Err(CutoffError::DimensionMismatch {
                expected: dim,
                found: h.normal.dim(),
            });
        }
        let empty = OpenPolyhedron::empty(dim);
        let mut hs: Vec<Halfspace> = Vec::new();
        for h in halfspaces {
            if h.normal.is_zero() {
                if !h.offset.is_positive() {
                    return Ok(empty);
                }
                continue;
            }
            hs.push(h.normalized());
        }
        hs.sort();
        hs.dedup();
        if !system_of(dim, hs.iter().map(Halfspace::row)).is_feasible() {
            return Ok(empty);
        }
        // drop constraints implied by the others, one at a time
        let mut i = 0;
        while i < hs.len() {
            let rows = hs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| h.row())
                .chain(std::iter::once(hs[i].complement_row()));
            if system_of(dim, rows).is_feasible() {
                i += 1;
            } else {
                hs.remove(i);
            }
        }
        Ok(OpenPolyhedron {
            dim,
            halfspaces: hs,
            empty: false,
        })
    }

    pub fn empty(dim: usize) -> OpenPolyhedron {
        OpenPolyhedron {
            dim,
            halfspaces: Vec::new(),
            empty: true,
        }
    }

    pub fn whole_space(dim: usize) -> OpenPolyhedron {
        OpenPolyhedron {
            dim,
            halfspaces: Vec::new(),
            empty: false,
        }
    }

    /// Interior of a cone (empty unless it is full-dimensional).
    pub fn cone_interior(c: &Cone) -> OpenPolyhedron {
        if !c.is_full_dimensional() {
            return OpenPolyhedron::empty(c.ambient_dim());
        }
        let hs = c
            .facet_normals()
            .iter()
            .map(|n| Halfspace::new(n.clone(), Q::zero()))
            .collect();
        OpenPolyhedron::new(c.ambient_dim(), hs).expect("dimensions agree")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn contains(&self, u: &QVec) -> bool {
        !self.empty && self.halfspaces.iter().all(|h| h.contains(u))
    }

    fn rows(&self) -> Vec<Row> {
        self.halfspaces.iter().map(Halfspace::row).collect()
    }

    /// Exact inclusion: `P ∧ ¬q` is empty for every constraint `q` of `other`.
    pub fn is_subset(&self, other: &OpenPolyhedron) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        other.halfspaces.iter().all(|q| {
            let rows = self.rows().into_iter().chain(std::iter::once(q.complement_row()));
            !system_of(self.dim, rows).is_feasible()
        })
    }

    pub fn set_eq(&self, other: &OpenPolyhedron) -> bool {
        self.dim == other.dim && self.is_subset(other) && other.is_subset(self)
    }

    pub fn translate(&self, v: &QVec) -> OpenPolyhedron {
        if self.empty {
            return self.clone();
        }
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset - h.normal.dot(v)))
            .collect();
        OpenPolyhedron::new(self.dim, hs).expect("dimensions agree")
    }

    /// `self + c` for a closed cone `c`, by projecting `y = x + Σ λ_k g_k`.
    /// For open `self` this equals `self + relint(c)`.
    pub fn minkowski_with_cone(&self, c: &Cone) -> Result<OpenPolyhedron, CutoffError> {
        self.check_dim(c.ambient_dim())?;
        if self.empty {
            return Err(CutoffError::EmptyInput);
        }
        let n = self.dim;
        let gens = c.generators();
        let nv = n + gens.len();
        let mut sys = System::new(nv);
        for h in &self.halfspaces {
            // ⟨h, y − Σ λ_k g_k⟩ + offset > 0
            let mut coef = h.normal.0.clone();
            coef.extend(gens.iter().map(|g| -h.normal.dot(g)));
            sys.push(Row::new(coef, h.offset.clone(), Rel::Gt));
        }
        for k in 0..gens.len() {
            let mut coef = vec![Q::zero(); nv];
            coef[n + k] = Q::one();
            sys.push(Row::new(coef, Q::zero(), Rel::Ge));
        }
        from_projection(n, sys.project(n))
    }

    /// Minkowski sum of two open polyhedra (empty if either is).
    pub fn minkowski_sum(&self, other: &OpenPolyhedron) -> Result<OpenPolyhedron, CutoffError> {
        self.check_dim(other.dim)?;
        if self.empty || other.empty {
            return Ok(OpenPolyhedron::empty(self.dim));
        }
        // variables (z, y): z − y ∈ self, y ∈ other
        let n = self.dim;
        let mut sys = System::new(2 * n);
        for h in &self.halfspaces {
            let mut coef = h.normal.0.clone();
            coef.extend(h.normal.iter().map(|x| -x));
            sys.push(Row::new(coef, h.offset.clone(), Rel::Gt));
        }
        for h in &other.halfspaces {
            let mut coef = vec![Q::zero(); n];
            coef.extend(h.normal.iter().cloned());
            sys.push(Row::new(coef, h.offset.clone(), Rel::Gt));
        }
        from_projection(n, sys.project(n))
    }

    fn check_dim(&self, found: usize) -> Result<(), CutoffError> {
        if found == self.dim {
            Ok(())
        } else {
            Err(CutoffError::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }
}

fn from_projection(n: usize, s: System) -> Result<OpenPolyhedron, CutoffError> {
    if s.infeasible {
        return Ok(OpenPolyhedron::empty(n));
    }
    let mut hs = Vec::new();
    for r in s.rows {
        let h = Halfspace::new(QVec(r.coef), r.constant);
        match r.rel {
            Rel::Gt => hs.push(h),
            // a projected open set is open; closed rows can only be implied
            Rel::Ge | Rel::Eq => unreachable!("projection of strict system keeps rows strict"),
        }
    }
    OpenPolyhedron::new(n, hs)
}

/// `U + γ = U`: every constraint normal of the irredundant form lies in `γ^∨`.
pub fn is_gamma_open(u: &OpenPolyhedron, gamma: &Cone) -> Result<bool, CutoffError> {
    u.check_dim(gamma.ambient_dim())?;
    Ok(u.halfspaces
        .iter()
        .all(|h| gamma.generators().iter().all(|g| !h.normal.dot(g).is_negative())))
}

/// `U + θ^∨ = U`.
pub fn is_theta_dual_open(u: &OpenPolyhedron, theta: &Cone) -> Result<bool, CutoffError> {
    is_gamma_open(u, &theta.dual())
}

/// A vector `a` with `x ∈ int(γ) − a ⊆ U`, both memberships checked exactly.
///
/// With slacks `s_i = ⟨n_i, x⟩ + o_i > 0` and `e` the sum of the generators
/// of `γ`, take `d = εe` for `ε = min(1, min_{⟨n_i,e⟩>0} s_i / 2⟨n_i,e⟩)` and
/// `a = d − x`.
pub fn gamma_basis_witness(
    u: &OpenPolyhedron,
    x: &QVec,
    gamma: &Cone,
) -> Result<QVec, CutoffError> {
    u.check_dim(gamma.ambient_dim())?;
    u.check_dim(x.dim())?;
    if !gamma.is_full_dimensional() {
        return Err(CutoffError::EmptyInterior);
    }
    if !u.contains(x) {
        return Err(CutoffError::PointNotInSet(x.to_string()));
    }
    if !is_gamma_open(u, gamma)? {
        return Err(CutoffError::NotGammaOpen);
    }
    let e = gamma.relint_point();
    let two = Q::from_integer(2.into());
    let mut eps = Q::one();
    for h in u.halfspaces() {
        let ne = h.normal.dot(&e);
        if ne.is_positive() {
            let s = h.normal.dot(x) + &h.offset;
            eps = eps.min(s / (&two * ne));
        }
    }
    let d = e.scale(&eps);
    let a = &d - x;
    let basic = OpenPolyhedron::cone_interior(gamma).translate(&-&a);
    assert!(
        basic.contains(x) && basic.is_subset(u),
        "γ-basis witness failed its own check"
    );
    Ok(a)
}

/// `Δ_Θ(d) = ∩_ρ {m : ⟨m, u_ρ⟩ > −d_ρ}` over rays with finite offset.
pub fn delta_polytope(
    theta: &Fan,
    offsets: &BTreeMap<String, Grade>,
) -> Result<OpenPolyhedron, CutoffError> {
    let mut hs = Vec::new();
    for i in theta.ray_indices() {
        let id = &theta.cones()[i].id;
        match offsets.get(id) {
            None => return Err(CutoffError::MissingOffset(id.clone())),
            Some(Grade::Finite(d)) => hs.push(Halfspace::new(theta.ray_generator(i), d.clone())),
            Some(Grade::PosInf) => {}
            Some(Grade::NegInf) => return Err(CutoffError::BadOffset(id.clone())),
        }
    }
    OpenPolyhedron::new(theta.ambient_dim(), hs)
}

/// `d(θ)`: offsets kept on the rays of `θ`, `+∞` elsewhere.
pub fn restrict_offsets(
    theta: &Fan,
    cone: usize,
    offsets: &BTreeMap<String, Grade>,
) -> BTreeMap<String, Grade> {
    theta
        .ray_indices()
        .into_iter()
        .map(|i| {
            let id = theta.cones()[i].id.clone();
            let v = if theta.is_face_of(i, cone) {
                offsets.get(&id).cloned().unwrap_or(Grade::PosInf)
            } else {
                Grade::PosInf
            };
            (id, v)
        })
        .collect()
}

/// The drop-constraint rule: keep exactly the constraints whose normals are
/// rays of `θ`, each at its tight offset `−inf_{m∈U} ⟨u_ρ, m⟩`.
///
/// The irredundant form of `U` may omit a ray constraint that only touches
/// `U` in a lower-dimensional face; its offset is then recovered by
/// projection. The result equals `U + int θ^∨` whenever the support function
/// of `U` is linear on `θ` (the face of `cl U` cut out by `θ` is nonempty).
pub fn drop_constraints(u: &OpenPolyhedron, theta: &Cone) -> Result<OpenPolyhedron, CutoffError> {
    u.check_dim(theta.ambient_dim())?;
    if u.is_empty() {
        return Err(CutoffError::EmptyInput);
    }
    let hs = theta
        .rays()
        .iter()
        .filter_map(|r| support_infimum(u, r).map(|h| Halfspace::new(r.clone(), -h)))
        .collect();
    OpenPolyhedron::new(u.ambient_dim(), hs)
}

/// `inf_{m∈U} ⟨n, m⟩` for a nonempty `U`, or `None` when unbounded below.
fn support_infimum(u: &OpenPolyhedron, n: &QVec) -> Option<Q> {
    if let Some(h) = u.halfspaces.iter().find(|h| &h.normal == n) {
        return Some(-h.offset.clone());
    }
    // variables (z, m): z = ⟨n, m⟩, m ∈ U; project onto z
    let dim = u.dim;
    let mut sys = System::new(dim + 1);
    let mut coef = vec![Q::one()];
    coef.extend(n.iter().map(|x| -x));
    sys.push(Row::new(coef, Q::zero(), Rel::Eq));
    for h in &u.halfspaces {
        let mut coef = vec![Q::zero()];
        coef.extend(h.normal.iter().cloned());
        sys.push(Row::new(coef, h.offset.clone(), Rel::Gt));
    }
    sys.project(1)
        .rows
        .iter()
        .filter(|r| r.coef[0].is_positive())
        .map(|r| -&r.constant / &r.coef[0])
        .max()
}

/// Cohomology ranks of the stalk at `point` of `lim_{σ∈Σ^op} 1_σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StalkReport {
    pub point: QVec,
    pub betti: BTreeMap<i64, usize>,
}

impl StalkReport {
    pub fn total_rank(&self) -> usize {
        self.betti.values().sum()
    }
}

/// Incidence `[σ : τ]` for a facet `τ` of `σ`: the sign of `det(w, B_τ)` in
/// the coordinates of `B_σ`, with `w` a ray of `σ` outside `τ`.
fn incidence(sigma: &Cone, tau: &Cone) -> i64 {
    let bs = sigma.oriented_basis();
    let w = sigma
        .rays()
        .iter()
        .find(|r| !tau.contains(r))
        .expect("a facet misses some ray");
    let cols: Vec<Vec<Q>> = std::iter::once(w.clone())
        .chain(tau.oriented_basis())
        .map(|v| coordinates(&bs, &v).expect("face lies in the span"))
        .collect();
    let d = det(cols);
    if d.is_positive() {
        1
    } else {
        assert!(d.is_negative(), "facet basis must be independent");
        -1
    }
}

/// The cellular cochain complex `C^p = ⊕_{σ ∋ n, dim σ = N−p} k` with
/// incidence-sign differentials, and its cohomology over `field`.
pub fn star_stalk_homology(
    fan: &Fan,
    n: &QVec,
    field: FieldTag,
) -> Result<StalkReport, CutoffError> {
    let dim = fan.ambient_dim();
    if n.dim() != dim {
        return Err(CutoffError::DimensionMismatch {
            expected: dim,
            found: n.dim(),
        });
    }
    if dim == 0 || !fan.is_complete() {
        return Err(CutoffError::IncompleteFan);
    }
    let star = fan.star(n);
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
    for &i in &star {
        by_degree[dim - fan.cone(i).dimension()].push(i);
    }
    // d^p : C^p → C^{p+1}, as a matrix with rows indexed by C^{p+1}
    let differential = |p: usize| -> Vec<Vec<Q>> {
        by_degree[p + 1]
            .iter()
            .map(|&t| {
                by_degree[p]
                    .iter()
                    .map(|&s| {
                        if fan.is_face_of(t, s) {
                            Q::from_integer(incidence(fan.cone(s), fan.cone(t)).into())
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let ds: Vec<Vec<Vec<Q>>> = (0..dim).map(differential).collect();
    for p in 0..dim.saturating_sub(1) {
        let (d0, d1) = (&ds[p], &ds[p + 1]);
        for row in d1 {
            for c in 0..by_degree[p].len() {
                let v: Q = row.iter().zip(d0).map(|(a, r)| a * &r[c]).sum();
                assert!(v.is_zero(), "d∘d ≠ 0 in the star complex");
            }
        }
    }
    let ranks: Vec<usize> = ds
        .iter()
        .map(|m| rank(m, field))
        .collect::<Result<_, _>>()?;
    let mut betti = BTreeMap::new();
    for (p, cells) in by_degree.iter().enumerate() {
        let out = if p < dim { ranks[p] } else { 0 };
        let inc = if p > 0 { ranks[p - 1] } else { 0 };
        let b = cells.len() - out - inc;
        if b > 0 {
            betti.insert(p as i64, b);
        }
    }
    Ok(StalkReport {
        point: n.clone(),
        betti,
    })
}

/// One point per stratum: a relative-interior point of every cone, plus a
/// second generic interior point of every maximal cone.
pub fn strata_points(fan: &Fan) -> Vec<QVec> {
    let mut pts: Vec<QVec> = fan.cones().iter().map(|c| c.cone.relint_point()).collect();
    for i in fan.maximal_indices() {
        let c = fan.cone(i);
        let p = c
            .generators()
            .iter()
            .enumerate()
            .fold(QVec::zeros(fan.ambient_dim()), |acc, (k, g)| {
                &acc + &g.scale(&Q::from_integer((k as i64 + 2).into()))
            });
        pts.push(p);
    }
    pts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitCheck {
    pub ok: bool,
    pub strata_checked: usize,
}

/// Total stalk rank 1 at every stratum of a complete fan.
pub fn convolution_unit_check(fan: &Fan, field: FieldTag) -> Result<UnitCheck, CutoffError> {
    let pts = strata_points(fan);
    let mut ok = true;
    for p in &pts {
        ok &= star_stalk_homology(fan, p, field)?.total_rank() == 1;
    }
    Ok(UnitCheck {
        ok,
        strata_checked: pts.len(),
    })
}

/// The shifted indicator sheaf `1_U[shift]` of an open convex polyhedron.
/// The zero sheaf is normalised to shift 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSheaf {
    pub support: OpenPolyhedron,
    pub shift: i64,
}

impl IndicatorSheaf {
    pub fn new(support: OpenPolyhedron, shift: i64) -> IndicatorSheaf {
        let shift = if support.is_empty() { 0 } else { shift };
        IndicatorSheaf { support, shift }
    }

    /// `1_A[s] ⋆ 1_B[t] = 1_{A+B}[s + t − n]`: each stalk is the compactly
    /// supported cohomology of an open convex fibre, concentrated in degree `n`.
    pub fn convolve(&self, other: &IndicatorSheaf) -> Result<IndicatorSheaf, CutoffError> {
        let support = self.support.minkowski_sum(&other.support)?;
        let n = self.support.ambient_dim() as i64;
        Ok(IndicatorSheaf::new(support, self.shift + other.shift - n))
    }
}

/// `1_A ⋆ 1_B = 1_{A+B}[−n]`, returned as `(A + B, −n)`; an empty input gives
/// the zero sheaf.
pub fn indicator_convolve(
    a: &OpenPolyhedron,
    b: &OpenPolyhedron,
) -> Result<IndicatorSheaf, CutoffError> {
    IndicatorSheaf::new(a.clone(), 0).convolve(&IndicatorSheaf::new(b.clone(), 0))
}

#[derive(Serialize, Deserialize)]
struct OpenPolyhedronJson {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    #[serde(default)]
    empty: bool,
}

impl Serialize for OpenPolyhedron {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OpenPolyhedronJson {
            dim: self.dim,
            halfspaces: self.halfspaces.clone(),
            empty: self.empty,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpenPolyhedron {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = OpenPolyhedronJson::deserialize(d)?;
        if raw.empty {
            return Ok(OpenPolyhedron::empty(raw.dim));
        }
        OpenPolyhedron::new(raw.dim, raw.halfspaces).map_err(D::Error::custom)
    }
}
