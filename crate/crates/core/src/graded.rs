//! Finitely presented ℚⁿ-graded modules over the polynomial Novikov ring
//! `Λ_γ = k[γ ∩ ℚⁿ]`, and the one-dimensional Rees bridge to barcodes.

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::barcode::{Bar, Barcode, BarcodeError, Interval, Shape};
use crate::geometry::Cone;
use crate::k0::K0Class;
use crate::linalg::{field_div, field_reduce, rank, FieldError, FieldTag};
use crate::rational::{QVec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grading cone has empty interior")]
    EmptyInterior,
    #[error("relation {relation} has {found} coefficients for {expected} generators")]
    CoefficientCount {
        relation: usize,
        expected: usize,
        found: usize,
    },
    #[error("relation {relation} is not homogeneous: nonzero coefficient on generator {generator} outside the grading cone")]
    Inhomogeneous { relation: usize, generator: usize },
    #[error("presentation is not one-dimensional over ℝ≥0")]
    NotOneDimensional,
    #[error("presentations of different grading cones")]
    GammaMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Barcode(#[from] BarcodeError),
}

/// A homogeneous relation `Σ c_i t^{degree − deg g_i} g_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: QVec,
    #[serde(with = "coeff_strings")]
    pub coeffs: Vec<Q>,
}

/// `⟨generators | relations⟩` over `k[γ ∩ ℚⁿ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationND {
    gamma: Cone,
    generators: Vec<QVec>,
    relations: Vec<Relation>,
}

impl PresentationND {
    pub fn new(
        gamma: Cone,
        generators: Vec<QVec>,
        relations: Vec<Relation>,
    ) -> Result<PresentationND, GradedError> {
        let n = gamma.ambient_dim();
        if !gamma.is_full_dimensional() {
            return Err(GradedError::EmptyInterior);
        }
        let check = |v: &QVec| {
            if v.dim() == n {
                Ok(())
            } else {
                Err(GradedError::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                })
            }
        };
        generators.iter().try_for_each(check)?;
        for (ri, r) in relations.iter().enumerate() {
            check(&r.degree)?;
            if r.coeffs.len() != generators.len() {
                return Err(GradedError::CoefficientCount {
                    relation: ri,
                    expected: generators.len(),
                    found: r.coeffs.len(),
                });
            }
            for (gi, (c, g)) in r.coeffs.iter().zip(&generators).enumerate() {
                if !c.is_zero() && !gamma.contains(&(&r.degree - g)) {
                    return Err(GradedError::Inhomogeneous {
                        relation: ri,
                        generator: gi,
                    });
                }
            }
        }
        Ok(PresentationND {
            gamma,
            generators,
            relations,
        })
    }

    /// The free module `Λ_γ` on one generator in degree 0.
    pub fn free(gamma: Cone) -> Result<PresentationND, GradedError> {
        let n = gamma.ambient_dim();
        PresentationND::new(gamma, vec![QVec::zeros(n)], Vec::new())
    }

    pub fn gamma(&self) -> &Cone {
        &self.gamma
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn ambient_dim(&self) -> usize {
        self.gamma.ambient_dim()
    }

    /// `dim_k M_a`: active generators minus the rank of the active relations.
    pub fn eval_at(&self, a: &QVec, field: FieldTag) -> Result<usize, GradedError> {
        if a.dim() != self.ambient_dim() {
            return Err(GradedError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: a.dim(),
            });
        }
        let active: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.gamma.contains(&(a - &self.generators[i])))
            .collect();
        let rows: Vec<Vec<Q>> = self
            .relations
            .iter()
            .filter(|r| self.gamma.contains(&(a - &r.degree)))
            .map(|r| active.iter().map(|&i| r.coeffs[i].clone()).collect())
            .collect();
        Ok(active.len() - rank(&rows, field)?)
    }

    /// `T_b`: all degrees move by `−b`, so `T_b(M)_a = M_{a+b}`.
    pub fn shift(&self, b: &QVec) -> Result<PresentationND, GradedError> {
        if b.dim() != self.ambient_dim() {
            return Err(GradedError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: b.dim(),
            });
        }
        Ok(PresentationND {
            gamma: self.gamma.clone(),
            generators: self.generators.iter().map(|g| g - b).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    degree: &r.degree - b,
                    coeffs: r.coeffs.clone(),
                })
                .collect(),
        })
    }

    /// `H₀` of the tensor product: `(F/R) ⊗ (G/S) = (F⊗G) / (R⊗G + F⊗S)`.
    pub fn h0_tensor(&self, other: &PresentationND) -> Result<PresentationND, GradedError> {
        if !self.gamma.set_eq(&other.gamma) {
            return Err(GradedError::GammaMismatch);
        }
        let (m, n) = (self.generators.len(), other.generators.len());
        let idx = |i: usize, j: usize| i * n + j;
        let mut generators = Vec::with_capacity(m * n);
        for g in &self.generators {
            for h in &other.generators {
                generators.push(g + h);
            }
        }
        let mut relations = Vec::new();
        for r in &self.relations {
            for (j, h) in other.generators.iter().enumerate() {
                let mut coeffs = vec![Q::zero(); m * n];
                for (i, c) in r.coeffs.iter().enumerate() {
                    coeffs[idx(i, j)] = c.clone();
                }
                relations.push(Relation {
                    degree: &r.degree + h,
                    coeffs,
                });
            }
        }
        for s in &other.relations {
            for (i, g) in self.generators.iter().enumerate() {
                let mut coeffs = vec![Q::zero(); m * n];
                for (j, c) in s.coeffs.iter().enumerate() {
                    coeffs[idx(i, j)] = c.clone();
                }
                relations.push(Relation {
                    degree: g + &s.degree,
                    coeffs,
                });
            }
        }
        PresentationND::new(self.gamma.clone(), generators, relations)
    }

    fn require_one_dimensional(&self) -> Result<(), GradedError> {
        if self.ambient_dim() == 1 && self.gamma.set_eq(&Cone::orthant(1)) {
            Ok(())
        } else {
            Err(GradedError::NotOneDimensional)
        }
    }

    /// Barcode by column reduction of the presentation matrix.
    ///
    /// Rows (generators) are ordered by (degree, index), columns (relations)
    /// by (degree, index); the pivot of a column is its youngest generator.
    pub fn barcode(&self, field: FieldTag) -> Result<Barcode, GradedError> {
        self.require_one_dimensional()?;
        let deg = |v: &QVec| v[0].clone();
        let mut rows: Vec<usize> = (0..self.generators.len()).collect();
        rows.sort_by(|&i, &j| deg(&self.generators[i]).cmp(&deg(&self.generators[j])).then(i.cmp(&j)));
        let mut cols: Vec<usize> = (0..self.relations.len()).collect();
        cols.sort_by(|&i, &j| {
            deg(&self.relations[i].degree)
                .cmp(&deg(&self.relations[j].degree))
                .then(i.cmp(&j))
        });
        // matrix[c][r]: coefficient of the r-th oldest generator in column c
        let mut matrix: Vec<Vec<Q>> = cols
            .iter()
            .map(|&c| {
                rows.iter()
                    .map(|&r| field_reduce(&self.relations[c].coeffs[r], field))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let pivot = |col: &[Q]| col.iter().rposition(|x| !x.is_zero());
        let mut owner: Vec<Option<usize>> = vec![None; rows.len()];
        let mut bars = Vec::new();
        for c in 0..matrix.len() {
            while let Some(p) = pivot(&matrix[c]) {
                let Some(k) = owner[p] else { break };
                let f = field_div(&matrix[c][p], &matrix[k][p], field);
                let (done, cur) = matrix.split_at_mut(c);
                for (x, y) in cur[0].iter_mut().zip(&done[k]) {
                    *x = field_reduce(&(&*x - &f * y), field)?;
                }
            }
            if let Some(p) = pivot(&matrix[c]) {
                owner[p] = Some(c);
                let birth = deg(&self.generators[rows[p]]);
                let death = deg(&self.relations[cols[c]].degree);
                if birth < death {
                    bars.push(Bar::new(Shape::Finite { birth, death }.interval(), 0, 1));
                }
            }
        }
        for (p, o) in owner.iter().enumerate() {
            if o.is_none() {
                let birth = deg(&self.generators[rows[p]]);
                bars.push(Bar::new(Interval::ray(birth), 0, 1));
            }
        }
        Ok(Barcode::new(bars))
    }

    /// Rees presentation of a barcode of `[a,b)` / `[a,∞)` bars in degree 0.
    pub fn from_barcode(b: &Barcode) -> Result<PresentationND, GradedError> {
        let mut generators = Vec::new();
        let mut deaths = Vec::new();
        for bar in b.bars() {
            if bar.degree != 0 {
                return Err(BarcodeError::NonzeroDegree(bar.interval.to_string()).into());
            }
            let shape = match bar.interval.shape() {
                Some(s @ (Shape::Finite { .. } | Shape::Ray { .. })) => s,
                _ => return Err(BarcodeError::UnsupportedDecoration(bar.interval.to_string()).into()),
            };
            for _ in 0..bar.multiplicity {
                match &shape {
                    Shape::Finite { birth, death } => {
                        generators.push(QVec::new(vec![birth.clone()]));
                        deaths.push(Some(death.clone()));
                    }
                    Shape::Ray { birth } => {
                        generators.push(QVec::new(vec![birth.clone()]));
                        deaths.push(None);
                    }
                    Shape::Line => unreachable!("filtered above"),
                }
            }
        }
        let n = generators.len();
        let relations = deaths
            .iter()
            .enumerate()
            .filter_map(|(i, d)| {
                d.as_ref().map(|d| {
                    let mut coeffs = vec![Q::zero(); n];
                    coeffs[i] = Q::from_integer(1.into());
                    Relation {
                        degree: QVec::new(vec![d.clone()]),
                        coeffs,
                    }
                })
            })
            .collect();
        PresentationND::new(Cone::orthant(1), generators, relations)
    }

    /// `Σ_gens e_{deg g} − Σ_rels e_{deg r}`, the Euler characteristic of the
    /// presentation complex. It is the class of the module when the relations
    /// are linearly independent (the complex is then a free resolution).
    pub fn k0_class(&self) -> Result<K0Class, GradedError> {
        self.require_one_dimensional()?;
        let mut k = K0Class::zero();
        for g in &self.generators {
            k.add_term(g[0].clone(), 1);
        }
        for r in &self.relations {
            k.add_term(r.degree[0].clone(), -1);
        }
        Ok(k)
    }
}

/// A grade given either as a vector or, in dimension one, as a bare scalar.
#[derive(Deserialize)]
#[serde(untagged)]
enum GradeInput {
    Vec(QVec),
    Scalar(crate::rational::RawScalar),
}

impl GradeInput {
    fn into_qvec<E: serde::de::Error>(self) -> Result<QVec, E> {
        match self {
            GradeInput::Vec(v) => Ok(v),
            GradeInput::Scalar(s) => s.to_q().map(|x| QVec::new(vec![x])).map_err(E::custom),
        }
    }
}

#[derive(Deserialize)]
struct RelationInput {
    degree: GradeInput,
    #[serde(with = "coeff_strings")]
    coeffs: Vec<Q>,
}

#[derive(Deserialize)]
struct PresentationInput {
    gamma: Cone,
    generators: Vec<GradeInput>,
    #[serde(default)]
    relations: Vec<RelationInput>,
}

#[derive(Serialize)]
struct PresentationOutput<'a> {
    gamma: &'a Cone,
    generators: &'a [QVec],
    relations: &'a [Relation],
}

impl Serialize for PresentationND {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PresentationOutput {
            gamma: &self.gamma,
            generators: &self.generators,
            relations: &self.relations,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PresentationND {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PresentationInput::deserialize(d)?;
        let generators = raw
            .generators
            .into_iter()
            .map(GradeInput::into_qvec)
            .collect::<Result<_, _>>()?;
        let relations = raw
            .relations
            .into_iter()
            .map(|r| {
                Ok(Relation {
                    degree: r.degree.into_qvec()?,
                    coeffs: r.coeffs,
                })
            })
            .collect::<Result<_, D::Error>>()?;
        PresentationND::new(raw.gamma, generators, relations).map_err(D::Error::custom)
    }
}

mod coeff_strings {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{fmt_q, RawScalar, Q};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<RawScalar>::deserialize(d)?
            .iter()
            .map(|x| x.to_q().map_err(D::Error::custom))
            .collect()
    }
}
