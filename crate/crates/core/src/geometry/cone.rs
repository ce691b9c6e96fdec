use std::fmt;

use num_traits::{Signed, Zero};

use crate::fm::{Rel, Row, System};
use crate::linalg::{coordinates, independent_subset, nullspace, rank_vecs};
use crate::rational::{QVec, Q};

use super::GeometryError;

/// A finitely generated rational convex cone, kept in both representations.
///
/// The H-representation is irredundant: `facets` are the inner facet normals
/// (projected into the linear span of the cone and made primitive integral),
/// `equalities` a basis of the orthogonal complement of that span.
/// `generators` lists the primitive extreme rays of the pointed part followed
/// by `±` a basis of the lineality space.
#[derive(Debug, Clone)]
pub struct Cone {
    dim: usize,
    generators: Vec<QVec>,
    facets: Vec<QVec>,
    equalities: Vec<QVec>,
    lineality: Vec<QVec>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.set_eq(other)
    }
}

impl Eq for Cone {}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}⊂ℚ^{}", self.dim)
    }
}

fn dedup_primitive(vs: impl IntoIterator<Item = QVec>) -> Vec<QVec> {
    let mut out: Vec<QVec> = vs
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.primitive())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Orthogonal projection of `h` onto the orthogonal complement of `span(basis)`.
fn project_away(h: &QVec, basis: &[QVec]) -> QVec {
    if basis.is_empty() {
        return h.clone();
    }
    // solve Gram * c = B^T h
    let k = basis.len();
    let gram: Vec<QVec> = (0..k)
        .map(|i| QVec((0..k).map(|j| basis[i].dot(&basis[j])).collect()))
        .collect();
    let rhs = QVec(basis.iter().map(|b| b.dot(h)).collect());
    // columns of gram (symmetric) as basis vectors in ℚᵏ
    let c = coordinates(&gram, &rhs).expect("gram matrix of a basis is invertible");
    basis
        .iter()
        .zip(&c)
        .fold(h.clone(), |acc, (b, x)| &acc - &b.scale(x))
}

impl Cone {
    /// Cone generated by the given vectors (V-representation).
    pub fn from_generators(dim: usize, gens: &[QVec]) -> Result<Cone, GeometryError> {
        if let Some(g) = gens.iter().find(|g| g.dim() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        let gens = dedup_primitive(gens.iter().cloned());
        Ok(Self::build(dim, gens))
    }

    /// Cone `{x : ⟨h, x⟩ ≥ 0 for h in ineqs, ⟨e, x⟩ = 0 for e in eqs}`.
    pub fn from_constraints(
        dim: usize,
        ineqs: &[QVec],
        eqs: &[QVec],
    ) -> Result<Cone, GeometryError> {
        let mut dual_gens: Vec<QVec> = ineqs.to_vec();
        for e in eqs {
            dual_gens.push(e.clone());
            dual_gens.push(-e);
        }
        let dual = Cone::from_generators(dim, &dual_gens)?;
        Ok(dual.dual())
    }

    pub fn zero(dim: usize) -> Cone {
        Self::build(dim, Vec::new())
    }

    pub fn whole_space(dim: usize) -> Cone {
        let gens: Vec<QVec> = (0..dim)
            .flat_map(|i| {
                let e = QVec::unit(dim, i);
                [e.clone(), -&e]
            })
            .collect();
        Self::build(dim, dedup_primitive(gens))
    }

    /// The nonnegative orthant of ℚⁿ.
    pub fn orthant(dim: usize) -> Cone {
        Self::build(dim, (0..dim).map(|i| QVec::unit(dim, i)).collect())
    }

    fn build(dim: usize, gens: Vec<QVec>) -> Cone {
        let equalities = nullspace(&gens, dim);
        let span_dim = dim - equalities.len();

        // Fourier–Motzkin: x = Σ λ_i g_i, λ ≥ 0, project out λ
        let k = gens.len();
        let mut sys = System::new(dim + k);
        for j in 0..dim {
            let mut coef = vec![Q::zero(); dim + k];
            coef[j] = Q::from_integer(1.into());
            for (i, g) in gens.iter().enumerate() {
                coef[dim + i] = -g[j].clone();
            }
            sys.push(Row::new(coef, Q::zero(), Rel::Eq));
        }
        for i in 0..k {
            let mut coef = vec![Q::zero(); dim + k];
            coef[dim + i] = Q::from_integer(1.into());
            sys.push(Row::new(coef, Q::zero(), Rel::Ge));
        }
        let proj = sys.project(dim);

        // keep inequalities cutting out facets: tight generators span a hyperplane of the span
        let mut facets = Vec::new();
        for row in proj.rows.iter().filter(|r| r.rel == Rel::Ge) {
            let h = project_away(&QVec(row.coef.clone()), &equalities);
            if h.is_zero() {
                continue;
            }
            let tight: Vec<QVec> = gens.iter().filter(|g| h.dot(g).is_zero()).cloned().collect();
            if tight.len() == gens.len() {
                continue;
            }
            if rank_vecs(&tight) + 1 == span_dim {
                facets.push(h.primitive());
            }
        }
        facets.sort();
        facets.dedup();

        let mut lin_rows = facets.clone();
        lin_rows.extend(equalities.iter().cloned());
        let lineality = nullspace(&lin_rows, dim);

        let mut generators = Vec::new();
        let mut rank_rows = equalities.clone();
        rank_rows.extend(lineality.iter().cloned());
        for g in &gens {
            let p = project_away(g, &lineality);
            if p.is_zero() {
                continue;
            }
            let mut tight = rank_rows.clone();
            tight.extend(facets.iter().filter(|h| h.dot(g).is_zero()).cloned());
            if rank_vecs(&tight) + 1 == dim {
                generators.push(p.primitive());
            }
        }
        generators.sort();
        generators.dedup();
        for l in &lineality {
            generators.push(l.clone());
            generators.push(-l);
        }

        Cone {
            dim,
            generators,
            facets,
            equalities,
            lineality,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    /// Primitive extreme rays of the pointed part (excludes the lineality basis).
    pub fn rays(&self) -> &[QVec] {
        &self.generators[..self.generators.len() - 2 * self.lineality.len()]
    }

    pub fn facet_normals(&self) -> &[QVec] {
        &self.facets
    }

    pub fn equalities(&self) -> &[QVec] {
        &self.equalities
    }

    pub fn lineality(&self) -> &[QVec] {
        &self.lineality
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    /// H-representation membership.
    pub fn contains(&self, x: &QVec) -> bool {
        self.equalities.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|h| !h.dot(x).is_negative())
    }

    /// V-representation membership: LP feasibility of `x = Σ λ_i g_i`, `λ ≥ 0`.
    pub fn contains_by_generators(&self, x: &QVec) -> bool {
        let k = self.generators.len();
        let mut sys = System::new(k);
        for j in 0..self.dim {
            let coef: Vec<Q> = self.generators.iter().map(|g| g[j].clone()).collect();
            sys.push(Row::new(coef, -x[j].clone(), Rel::Eq));
        }
        for i in 0..k {
            let mut coef = vec![Q::zero(); k];
            coef[i] = Q::from_integer(1.into());
            sys.push(Row::new(coef, Q::zero(), Rel::Ge));
        }
        sys.is_feasible()
    }

    /// Membership in the relative interior.
    pub fn contains_relint(&self, x: &QVec) -> bool {
        self.equalities.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|h| h.dot(x).is_positive())
    }

    /// Membership in the topological interior (empty unless full-dimensional).
    pub fn contains_interior(&self, x: &QVec) -> bool {
        self.is_full_dimensional() && self.contains_relint(x)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Set equality, decided by mutual generator containment.
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.dim == other.dim && self.contains_cone(other) && other.contains_cone(self)
    }

    /// Sum of generators; lies in the relative interior.
    pub fn relint_point(&self) -> QVec {
        self.generators
            .iter()
            .fold(QVec::zeros(self.dim), |acc, g| &acc + g)
    }

    /// The polar dual `{v : ⟨v, w⟩ ≥ 0 for all w in the cone}`.
    pub fn dual(&self) -> Cone {
        let mut gens = self.facets.clone();
        for e in &self.equalities {
            gens.push(e.clone());
            gens.push(-e);
        }
        Self::build(self.dim, dedup_primitive(gens))
    }

    pub fn negate(&self) -> Cone {
        let gens: Vec<QVec> = self.generators.iter().map(|g| -g).collect();
        Self::build(self.dim, dedup_primitive(gens))
    }

    /// `c ∩ (−c) = {0}`, read off the lineality space.
    pub fn is_proper(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Properness via the dual: the dual is full-dimensional, certified by an
    /// explicit interior point (the sum of the dual's generators).
    pub fn is_proper_via_dual(&self) -> bool {
        let d = self.dual();
        let p = d.relint_point();
        d.contains_interior(&p)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        Cone::from_constraints(self.dim, &ineqs, &eqs)
    }

    /// Minkowski sum of cones.
    pub fn sum(&self, other: &Cone) -> Result<Cone, GeometryError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Cone::from_generators(self.dim, &gens)
    }

    /// `self ∩ {x : ⟨m, x⟩ = 0}`.
    pub fn slice(&self, m: &QVec) -> Cone {
        let mut eqs = self.equalities.clone();
        eqs.push(m.clone());
        Cone::from_constraints(self.dim, &self.facets, &eqs).expect("dimensions agree")
    }

    /// The face cut out by the supporting normal `h` (which must be ≥ 0 on the cone).
    pub fn face_for(&self, h: &QVec) -> Cone {
        let tight: Vec<QVec> = self
            .generators
            .iter()
            .filter(|g| h.dot(g).is_zero())
            .cloned()
            .collect();
        Self::build(self.dim, dedup_primitive(tight))
    }

    /// All faces, from the minimal face (the lineality space, `{0}` for proper
    /// cones) up to the cone itself, sorted by dimension then generators.
    pub fn faces(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = vec![self.clone()];
        let mut frontier = vec![self.clone()];
        while let Some(c) = frontier.pop() {
            for h in &c.facets {
                let f = c.face_for(h);
                if !out.iter().any(|o| o.set_eq(&f)) {
                    out.push(f.clone());
                    frontier.push(f);
                }
            }
        }
        out.sort_by(|a, b| {
            a.dimension()
                .cmp(&b.dimension())
                .then_with(|| a.generators.cmp(&b.generators))
        });
        out
    }

    /// True when `other` is a face of `self`.
    pub fn has_face(&self, other: &Cone) -> bool {
        self.faces().iter().any(|f| f.set_eq(other))
    }

    /// Facets (codimension-one faces) as cones.
    pub fn facet_faces(&self) -> Vec<Cone> {
        self.facets.iter().map(|h| self.face_for(h)).collect()
    }

    /// Independent spanning subset of the rays, in lexicographic order.
    pub fn oriented_basis(&self) -> Vec<QVec> {
        independent_subset(&self.generators)
    }
}
