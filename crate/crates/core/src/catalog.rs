//! Named examples: fans, barcodes, presentations, short exact triples and
//! geometric towers used by the tests and the command line.

use num_traits::Pow;

use crate::barcode::{Bar, Barcode, Interval};
use crate::geometry::{validate_fan, Cone, Fan, FanCone};
use crate::graded::{PresentationND, Relation};
use crate::rational::{q, qr, Grade, QVec, Q};

pub const FAN_NAMES: &[&str] = &[
    "p1",
    "p2",
    "p3",
    "p1xp1",
    "hirzebruch-1",
    "hirzebruch-2",
    "quadrant",
    "halffan",
];

/// Complete catalog fans in dimension two or less, the scope of the gluing checks.
pub const COMPLETE_PLANAR_FANS: &[&str] = &["p1", "p2", "p1xp1", "hirzebruch-1", "hirzebruch-2"];

fn cone(dim: usize, gens: &[&[i64]]) -> Cone {
    let gens: Vec<QVec> = gens.iter().map(|g| QVec::from_ints(g)).collect();
    Cone::from_generators(dim, &gens).expect("catalog cone")
}

fn from_maximal(dim: usize, maximal: &[&[&[i64]]]) -> Fan {
    let cones: Vec<Cone> = maximal.iter().map(|g| cone(dim, g)).collect();
    Fan::from_maximal(dim, &cones).expect("catalog fan is valid")
}

/// The Hirzebruch fan `F_a` with rays `e1, e2, −e1 + a·e2, −e2`.
pub fn hirzebruch(a: i64) -> Fan {
    from_maximal(
        2,
        &[
            &[&[1, 0], &[0, 1]],
            &[&[0, 1], &[-1, a]],
            &[&[-1, a], &[0, -1]],
            &[&[0, -1], &[1, 0]],
        ],
    )
}

pub fn fan(name: &str) -> Option<Fan> {
    Some(match name {
        "p1" => validate_fan(
            1,
            vec![
                FanCone {
                    id: "0".into(),
                    cone: Cone::zero(1),
                },
                FanCone {
                    id: "le".into(),
                    cone: cone(1, &[&[-1]]),
                },
                FanCone {
                    id: "ge".into(),
                    cone: cone(1, &[&[1]]),
                },
            ],
        )
        .expect("ℙ¹ fan"),
        "p2" => from_maximal(
            2,
            &[
                &[&[1, 0], &[0, 1]],
                &[&[0, 1], &[-1, -1]],
                &[&[1, 0], &[-1, -1]],
            ],
        ),
        "p3" => from_maximal(
            3,
            &[
                &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
                &[&[1, 0, 0], &[0, 1, 0], &[-1, -1, -1]],
                &[&[1, 0, 0], &[0, 0, 1], &[-1, -1, -1]],
                &[&[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
            ],
        ),
        "p1xp1" => from_maximal(
            2,
            &[
                &[&[1, 0], &[0, 1]],
                &[&[0, 1], &[-1, 0]],
                &[&[-1, 0], &[0, -1]],
                &[&[0, -1], &[1, 0]],
            ],
        ),
        "hirzebruch-1" => hirzebruch(1),
        "hirzebruch-2" => hirzebruch(2),
        "quadrant" => from_maximal(2, &[&[&[1, 0], &[0, 1]]]),
        "halffan" => from_maximal(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]]]),
        _ => return None,
    })
}

pub const BARCODE_NAMES: &[&str] = &["interval02", "free", "mixed", "decorated", "with-line"];

pub fn barcode(name: &str) -> Option<Barcode> {
    let co = |a: Q, b: Q| Interval::closed_open(a, b).expect("catalog interval");
    Some(match name {
        "interval02" => Barcode::from_intervals([co(q(0), q(2))]),
        "free" => Barcode::from_intervals([Interval::ray(q(0))]),
        "mixed" => Barcode::new([
            Bar::new(co(q(0), q(1)), 0, 2),
            Bar::new(co(qr(1, 2), q(3)), 0, 1),
            Bar::new(Interval::ray(q(1)), 0, 1),
        ]),
        "decorated" => Barcode::from_intervals([
            Interval::new(Grade::int(0), Grade::int(1), true, true).expect("closed"),
            Interval::singleton(q(2)),
            Interval::new(Grade::int(3), Grade::int(4), false, false).expect("open"),
        ]),
        "with-line" => Barcode::from_intervals([Interval::line(), co(q(0), q(1))]),
        _ => return None,
    })
}

pub const PRESENTATION_NAMES: &[&str] = &["free", "interval01", "cancel", "quadrant-point"];

fn rel(degree: QVec, coeffs: &[i64]) -> Relation {
    Relation {
        degree,
        coeffs: coeffs.iter().map(|&c| q(c)).collect(),
    }
}

pub fn presentation(name: &str) -> Option<PresentationND> {
    let v = |x: i64| QVec::from_ints(&[x]);
    let p = match name {
        "free" => PresentationND::free(Cone::orthant(1)),
        "interval01" => PresentationND::new(Cone::orthant(1), vec![v(0)], vec![rel(v(1), &[1])]),
        "cancel" => PresentationND::new(
            Cone::orthant(1),
            vec![v(0), v(1)],
            vec![rel(v(1), &[1, -1])],
        ),
        "quadrant-point" => PresentationND::new(
            Cone::orthant(2),
            vec![QVec::zeros(2)],
            vec![
                rel(QVec::from_ints(&[1, 0]), &[1]),
                rel(QVec::from_ints(&[0, 1]), &[1]),
            ],
        ),
        _ => return None,
    };
    Some(p.expect("catalog presentation"))
}

/// A short exact sequence `0 → sub → total → quotient → 0` of 1-D modules.
#[derive(Debug, Clone)]
pub struct ExactTriple {
    pub name: &'static str,
    pub sub: PresentationND,
    pub total: PresentationND,
    pub quotient: PresentationND,
}

pub fn exact_triples() -> Vec<ExactTriple> {
    let pres = |ivs: &[Interval]| {
        PresentationND::from_barcode(&Barcode::from_intervals(ivs.iter().cloned()))
            .expect("presentable")
    };
    let co = |a: i64, b: i64| Interval::closed_open(q(a), q(b)).expect("interval");
    let ray = |a: i64| Interval::ray(q(a));
    vec![
        ExactTriple {
            name: "interval-truncation",
            sub: pres(&[co(1, 2)]),
            total: pres(&[co(0, 2)]),
            quotient: pres(&[co(0, 1)]),
        },
        ExactTriple {
            name: "free-cofiber",
            sub: pres(&[ray(1)]),
            total: pres(&[ray(0)]),
            quotient: pres(&[co(0, 1)]),
        },
        ExactTriple {
            name: "ray-truncation",
            sub: pres(&[ray(2)]),
            total: pres(&[ray(0)]),
            quotient: pres(&[co(0, 2)]),
        },
        ExactTriple {
            name: "direct-sum",
            sub: pres(&[co(0, 3)]),
            total: pres(&[co(0, 3), ray(1)]),
            quotient: pres(&[ray(1)]),
        },
        ExactTriple {
            name: "extension",
            sub: pres(&[co(2, 5)]),
            total: pres(&[co(0, 5), co(1, 2)]),
            quotient: pres(&[co(0, 2), co(1, 2)]),
        },
    ]
}

/// How the terms of a geometric tower of single bars are connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerKind {
    /// `X_n = [0, L_n)` with surjections, `L_n ↓ L_∞`.
    Quotient,
    /// `X_n = [s_n, 1)` with injections, `s_n ↓ s_∞`.
    Inclusion,
}

/// A tower whose moving endpoint is `limit + scale·ratioⁿ`.
#[derive(Debug, Clone)]
pub struct Tower {
    pub kind: TowerKind,
    pub limit: Q,
    pub scale: Q,
    pub ratio: Q,
}

impl Tower {
    pub fn endpoint(&self, n: u32) -> Q {
        &self.limit + &self.scale * Pow::pow(&self.ratio, n)
    }

    pub fn term(&self, n: u32) -> Barcode {
        let e = self.endpoint(n);
        let iv = match self.kind {
            TowerKind::Quotient => Interval::closed_open(q(0), e),
            TowerKind::Inclusion => Interval::closed_open(e, q(1)),
        };
        Barcode::from_intervals([iv.expect("tower term")])
    }

    /// `cofib(f_n)` for `f_n : X_n → X_{n+1}`: the kernel `[L_{n+1}, L_n)` in
    /// degree 1, or the cokernel `[s_{n+1}, s_n)` in degree 0.
    pub fn step_cofiber(&self, n: u32) -> Barcode {
        let (lo, hi) = (self.endpoint(n + 1), self.endpoint(n));
        let iv = Interval::closed_open(lo, hi).expect("strictly monotone tower");
        let degree = match self.kind {
            TowerKind::Quotient => 1,
            TowerKind::Inclusion => 0,
        };
        Barcode::new([Bar::new(iv, degree, 1)])
    }

    /// `colim X_n`: `[0, L_∞]` or `(s_∞, 1)`.
    pub fn colimit(&self) -> Barcode {
        let iv = match self.kind {
            TowerKind::Quotient => {
                Interval::new(Grade::int(0), Grade::Finite(self.limit.clone()), true, true)
            }
            TowerKind::Inclusion => {
                Interval::new(Grade::Finite(self.limit.clone()), Grade::int(1), false, false)
            }
        };
        Barcode::from_intervals([iv.expect("tower colimit")])
    }

    /// `cofib(i_N)` for `i_N : X_N → colim`: `(L_∞, L_N)` in degree 1 or
    /// `(s_∞, s_N)` in degree 0.
    pub fn colimit_cofiber(&self, n: u32) -> Barcode {
        let iv = Interval::new(
            Grade::Finite(self.limit.clone()),
            Grade::Finite(self.endpoint(n)),
            false,
            false,
        )
        .expect("tower cofiber");
        let degree = match self.kind {
            TowerKind::Quotient => 1,
            TowerKind::Inclusion => 0,
        };
        Barcode::new([Bar::new(iv, degree, 1)])
    }

    /// `Σ_{k≥N} (length of cofib f_k) = scale·ratio^N`, in closed form.
    pub fn tail_sum(&self, n: u32) -> Q {
        &self.scale * Pow::pow(&self.ratio, n)
    }

    /// Partial sum `Σ_{N≤k<M}` of the step lengths.
    pub fn partial_sum(&self, from: u32, to: u32) -> Q {
        (from..to).fold(Q::from_integer(0.into()), |acc, k| {
            acc + (self.endpoint(k) - self.endpoint(k + 1))
        })
    }
}

pub fn towers() -> Vec<Tower> {
    let t = |kind, limit, scale, ratio| Tower {
        kind,
        limit,
        scale,
        ratio,
    };
    vec![
        t(TowerKind::Quotient, q(1), q(1), qr(1, 2)),
        t(TowerKind::Quotient, q(0), q(3), qr(1, 3)),
        t(TowerKind::Quotient, q(2), qr(5, 2), qr(2, 3)),
        t(TowerKind::Inclusion, q(0), qr(1, 2), qr(1, 2)),
        t(TowerKind::Inclusion, q(-3), q(2), qr(3, 4)),
    ]
}
