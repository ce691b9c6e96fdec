use std::collections::{BTreeSet, VecDeque};

use crate::rational::QVec;

use super::{Cone, GeometryError};

/// A member of a fan, with a stable identifier.
#[derive(Debug, Clone)]
pub struct FanCone {
    pub id: String,
    pub cone: Cone,
}

/// A validated fan: proper cones closed under faces, meeting along common faces.
#[derive(Debug, Clone)]
pub struct Fan {
    dim: usize,
    cones: Vec<FanCone>,
    /// `(i, j)` whenever cone `i` is a face of cone `j` (reflexive pairs included).
    face_of: BTreeSet<(usize, usize)>,
}

/// Checks both fan axioms and builds the face lattice.
///
/// Set-equal duplicates are merged (the first id wins).
pub fn validate_fan(dim: usize, cones: Vec<FanCone>) -> Result<Fan, GeometryError> {
    let mut members: Vec<FanCone> = Vec::new();
    for fc in cones {
        if fc.cone.ambient_dim() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: fc.cone.ambient_dim(),
            });
        }
        if !members.iter().any(|m| m.cone.set_eq(&fc.cone)) {
            members.push(fc);
        }
    }
    for m in &members {
        if !m.cone.is_proper() {
            return Err(GeometryError::ImproperCone { id: m.id.clone() });
        }
    }
    let faces: Vec<Vec<Cone>> = members.iter().map(|m| m.cone.faces()).collect();
    for (m, fs) in members.iter().zip(&faces) {
        for f in fs {
            if !members.iter().any(|o| o.cone.set_eq(f)) {
                return Err(GeometryError::MissingFace {
                    cone: m.id.clone(),
                    face: f.to_string(),
                });
            }
        }
    }
    let is_face = |f: &Cone, of: usize| faces[of].iter().any(|g| g.set_eq(f));
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let meet = members[i].cone.intersect(&members[j].cone)?;
            if !is_face(&meet, i) || !is_face(&meet, j) {
                return Err(GeometryError::BadIntersection {
                    first: members[i].id.clone(),
                    second: members[j].id.clone(),
                    intersection: meet.to_string(),
                });
            }
        }
    }
    let mut face_of = BTreeSet::new();
    for (j, fs) in faces.iter().enumerate() {
        for f in fs {
            if let Some(i) = members.iter().position(|m| m.cone.set_eq(f)) {
                face_of.insert((i, j));
            }
        }
    }
    Ok(Fan {
        dim,
        cones: members,
        face_of,
    })
}

impl Fan {
    /// Fan generated by the given cones together with all of their faces.
    /// Cones are named by their rays: `"0"`, `"r0"`, `"r0+r2"`, ...
    pub fn from_maximal(dim: usize, maximal: &[Cone]) -> Result<Fan, GeometryError> {
        let mut all: Vec<Cone> = Vec::new();
        for c in maximal {
            for f in c.faces() {
                if !all.iter().any(|a| a.set_eq(&f)) {
                    all.push(f);
                }
            }
        }
        if all.is_empty() {
            all.push(Cone::zero(dim));
        }
        let mut rays: Vec<QVec> = all
            .iter()
            .filter(|c| c.dimension() == 1)
            .map(|c| c.rays()[0].clone())
            .collect();
        rays.sort();
        all.sort_by(|a, b| {
            a.dimension()
                .cmp(&b.dimension())
                .then_with(|| a.generators().cmp(b.generators()))
        });
        let named = all
            .into_iter()
            .map(|c| {
                let ids: Vec<String> = rays
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| c.rays().contains(r))
                    .map(|(i, _)| format!("r{i}"))
                    .collect();
                let id = if ids.is_empty() {
                    "0".to_string()
                } else {
                    ids.join("+")
                };
                FanCone { id, cone: c }
            })
            .collect();
        validate_fan(dim, named)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i].cone
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.cones.iter().position(|c| c.id == id)
    }

    pub fn by_id(&self, id: &str) -> Option<&Cone> {
        self.index_of(id).map(|i| self.cone(i))
    }

    pub fn is_face_of(&self, i: usize, j: usize) -> bool {
        self.face_of.contains(&(i, j))
    }

    pub fn face_relation(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.face_of.iter().copied()
    }

    /// Indices of the one-dimensional cones, in lexicographic order of their primitive generators.
    pub fn ray_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.cones.len())
            .filter(|&i| self.cones[i].cone.dimension() == 1)
            .collect();
        idx.sort_by_key(|&a| self.ray_generator(a));
        idx
    }

    /// Primitive integral generator `u_ρ` of a one-dimensional member.
    pub fn ray_generator(&self, i: usize) -> QVec {
        self.cones[i].cone.rays()[0].clone()
    }

    pub fn maximal_indices(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                !(0..self.cones.len()).any(|j| j != i && self.face_of.contains(&(i, j)))
            })
            .collect()
    }

    /// Membership in the support `|Σ|`.
    pub fn support_contains(&self, n: &QVec) -> bool {
        self.cones.iter().any(|c| c.cone.contains(n))
    }

    /// Indices of cones containing `n` (the closed star of its carrier cone).
    pub fn star(&self, n: &QVec) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| self.cones[i].cone.contains(n))
            .collect()
    }

    /// Decides `|Σ| = ℚⁿ` combinatorially: maximal cones are full-dimensional,
    /// every facet of a maximal cone lies in exactly two maximal cones, and the
    /// maximal cones are connected through shared facets.
    pub fn is_complete(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        let maxes = self.maximal_indices();
        if maxes
            .iter()
            .any(|&i| !self.cone(i).is_full_dimensional())
        {
            return false;
        }
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); maxes.len()];
        for (a, &i) in maxes.iter().enumerate() {
            for facet in self.cone(i).facet_faces() {
                let sharing: Vec<usize> = maxes
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| self.cone(j).contains_cone(&facet) && self.cone(j).has_face(&facet))
                    .map(|(b, _)| b)
                    .collect();
                if sharing.len() != 2 {
                    return false;
                }
                for b in sharing {
                    if b != a {
                        adjacency[a].push(b);
                    }
                }
            }
        }
        let mut seen = vec![false; maxes.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &adjacency[a] {
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All subfans: subsets closed under taking faces, each containing `{0}`.
    pub fn subfans(&self) -> Vec<Vec<usize>> {
        let n = self.cones.len();
        assert!(n < 20, "subfan enumeration is exponential");
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let closed = (0..n).filter(|&j| mask & (1 << j) != 0).all(|j| {
                (0..n)
                    .filter(|&i| self.face_of.contains(&(i, j)))
                    .all(|i| mask & (1 << i) != 0)
            });
            if closed {
                out.push((0..n).filter(|&j| mask & (1 << j) != 0).collect());
            }
        }
        out
    }
}

/// A vector `m` in the relative interior of `σ1^∨ ∩ (−σ2^∨)` with
/// `σ1 ∩ H_m = σ1 ∩ σ2 = σ2 ∩ H_{−m}`.
///
/// The choice is canonical: the primitive integral multiple of the sum of
/// the primitive extreme rays of the pointed part of `σ1^∨ ∩ (−σ2^∨)`
/// (orthogonal to its lineality space); `0` when that part is trivial.
pub fn separating_vector(s1: &Cone, s2: &Cone) -> Result<QVec, GeometryError> {
    let tau = s1.intersect(s2)?;
    if !s1.has_face(&tau) || !s2.has_face(&tau) {
        return Err(GeometryError::NotSeparable {
            reason: format!("{tau} is not a common face"),
        });
    }
    let k = s1.dual().intersect(&s2.dual().negate())?;
    let mut eqs = k.equalities().to_vec();
    eqs.extend(k.lineality().iter().cloned());
    let pointed = Cone::from_constraints(k.ambient_dim(), k.facet_normals(), &eqs)?;
    let m = pointed
        .rays()
        .iter()
        .fold(QVec::zeros(k.ambient_dim()), |acc, r| &acc + r)
        .primitive();
    let ok = k.contains_relint(&m)
        && s1.slice(&m).set_eq(&tau)
        && s2.slice(&-&m).set_eq(&tau);
    if !ok {
        return Err(GeometryError::NotSeparable {
            reason: format!("no hyperplane separates along {tau}"),
        });
    }
    Ok(m)
}
