//! Interleaving distance `d_int(X,Y) = inf{a+b : X, Y are (a,b)-isomorphic}`
//! on barcodes, with explicit certificates, plus the classical bottleneck
//! distance for comparison.
//!
//! Inputs are first replaced by their almost-normal forms, so decorations
//! never affect a distance. Bars must then be `[a,b)`, `[a,∞)` or full lines;
//! morphisms only connect bars of equal homological degree.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barcode::{interval_hom_nonzero, Barcode, BarcodeError, Interval, Shape};
use crate::rational::{serde_q, Grade, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterleavingError {
    #[error(transparent)]
    Barcode(#[from] BarcodeError),
    #[error("certificate parameters must be nonnegative, got a = {a}, b = {b}")]
    NegativeParameter { a: String, b: String },
    #[error("certificate entry {from}→{to} is out of range")]
    IndexOutOfRange { from: usize, to: usize },
}

/// One coefficient of a morphism between bar-indexed direct sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub from: usize,
    pub to: usize,
    #[serde(with = "serde_q")]
    pub coef: Q,
}

/// `α : X → T_a Y` and `β : Y → T_b X`, given on the expanded bars of the
/// almost-normal forms of `X` and `Y` (canonical order, multiplicities
/// unrolled).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavingCertificate {
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(with = "serde_q")]
    pub b: Q,
    pub forward: Vec<Entry>,
    pub backward: Vec<Entry>,
}

/// A bar of the almost-normal form, as used by the matching machinery.
#[derive(Debug, Clone)]
struct Item {
    shape: Shape,
    degree: i64,
}

impl Item {
    fn length(&self) -> Option<Q> {
        match &self.shape {
            Shape::Finite { birth, death } => Some(death - birth),
            _ => None,
        }
    }

    fn interval(&self) -> Interval {
        self.shape.interval()
    }
}

fn items(b: &Barcode) -> Result<Vec<Item>, BarcodeError> {
    b.almostize()
        .expanded()
        .into_iter()
        .map(|(iv, degree)| {
            iv.shape()
                .map(|shape| Item { shape, degree })
                .ok_or_else(|| BarcodeError::UnsupportedShape(iv.to_string()))
        })
        .collect()
}

/// The expanded bars of the almost-normal form that certificates index into.
pub fn certificate_bars(b: &Barcode) -> Result<Vec<(Interval, i64)>, BarcodeError> {
    Ok(items(b)?.into_iter().map(|i| (i.interval(), i.degree)).collect())
}

/// Costs of matching `x` with `y`: the least `(a, b)` for which both
/// `X → T_a Y` and `Y → T_b X` can be nonzero (`None` if never).
fn pair_cost(x: &Item, y: &Item) -> Option<(Q, Q)> {
    if x.degree != y.degree {
        return None;
    }
    let zero = Q::zero();
    let pos = |v: Q| if v.is_negative() { Q::zero() } else { v };
    match (&x.shape, &y.shape) {
        (
            Shape::Finite {
                birth: x1,
                death: x2,
            },
            Shape::Finite {
                birth: y1,
                death: y2,
            },
        ) => {
            let a = pos((y1 - x1).max(y2 - x2));
            let b = pos((x1 - y1).max(x2 - y2));
            Some((a, b))
        }
        (Shape::Ray { birth: x1 }, Shape::Ray { birth: y1 }) => {
            Some((pos(y1 - x1), pos(x1 - y1)))
        }
        (Shape::Line, Shape::Line) => Some((zero.clone(), zero)),
        _ => None,
    }
}

/// Kuhn's augmenting-path bipartite matching; `adj[l]` lists right vertices.
fn perfect_matching(adj: &[Vec<usize>], nright: usize) -> Option<Vec<usize>> {
    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_r: &mut [Option<usize>],
    ) -> bool {
        for &r in &adj[l] {
            if !seen[r] {
                seen[r] = true;
                if match_r[r].is_none_or(|l2| augment(l2, adj, seen, match_r)) {
                    match_r[r] = Some(l);
                    return true;
                }
            }
        }
        false
    }
    if adj.len() != nright {
        return None;
    }
    let mut match_r = vec![None; nright];
    for l in 0..adj.len() {
        let mut seen = vec![false; nright];
        if !augment(l, adj, &mut seen, &mut match_r) {
            return None;
        }
    }
    let mut match_l = vec![0; adj.len()];
    for (r, l) in match_r.iter().enumerate() {
        match_l[l.expect("perfect")] = r;
    }
    Some(match_l)
}

/// Finds a partial matching using only `allowed` pairs in which every
/// unmatched bar is `killable`. Returns the matched pairs.
fn partial_matching(
    nx: usize,
    ny: usize,
    allowed: impl Fn(usize, usize) -> bool,
    killable_x: impl Fn(usize) -> bool,
    killable_y: impl Fn(usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    // left: X bars then diagonal copies of Y; right: Y bars then diagonal copies of X
    let n = nx + ny;
    let mut adj = vec![Vec::new(); n];
    for (i, row) in adj.iter_mut().enumerate().take(nx) {
        for j in 0..ny {
            if allowed(i, j) {
                row.push(j);
            }
        }
        if killable_x(i) {
            row.push(ny + i);
        }
    }
    for j in 0..ny {
        let row = &mut adj[nx + j];
        if killable_y(j) {
            row.push(j);
        }
        row.extend(ny..ny + nx);
    }
    let m = perfect_matching(&adj, n)?;
    Some(
        (0..nx)
            .filter(|&i| m[i] < ny)
            .map(|i| (i, m[i]))
            .collect(),
    )
}

fn sorted_candidates(vals: impl IntoIterator<Item = Q>) -> Vec<Q> {
    let mut v: Vec<Q> = std::iter::once(Q::zero()).chain(vals).collect();
    v.sort();
    v.dedup();
    v
}

/// Optimal `(a, b, matching)` with `a + b = d_int`, or `None` when infinite.
fn optimal_interleaving(xs: &[Item], ys: &[Item]) -> Option<(Q, Q, Vec<(usize, usize)>)> {
    let costs: Vec<Vec<Option<(Q, Q)>>> = xs
        .iter()
        .map(|x| ys.iter().map(|y| pair_cost(x, y)).collect())
        .collect();
    let flat = || costs.iter().flatten().flatten();
    let a_cands = sorted_candidates(flat().map(|(a, _)| a.clone()));
    let b_cands = sorted_candidates(flat().map(|(_, b)| b.clone()));
    let l_cands = sorted_candidates(xs.iter().chain(ys).filter_map(Item::length));
    let killable = |item: &Item, l: &Q| item.length().is_some_and(|len| &len <= l);

    let mut best: Option<(Q, Q, Q, Vec<(usize, usize)>)> = None;
    for a in &a_cands {
        for b in &b_cands {
            let ab = a + b;
            if best.as_ref().is_some_and(|(d, ..)| &ab >= d) {
                continue;
            }
            let allowed = |i: usize, j: usize| {
                costs[i][j]
                    .as_ref()
                    .is_some_and(|(ca, cb)| ca <= a && cb <= b)
            };
            // the smallest kill threshold admitting a matching decides (a, b)
            for l in &l_cands {
                let value = if l > &ab { l.clone() } else { ab.clone() };
                if best.as_ref().is_some_and(|(d, ..)| &value >= d) {
                    break;
                }
                if let Some(m) = partial_matching(
                    xs.len(),
                    ys.len(),
                    allowed,
                    |i| killable(&xs[i], l),
                    |j| killable(&ys[j], l),
                ) {
                    // spend any slack on a so that a + b equals the distance
                    let a_eff = a + (&value - &ab);
                    best = Some((value, a_eff, b.clone(), m));
                    break;
                }
            }
        }
    }
    best.map(|(_, a, b, m)| (a, b, m))
}

/// `d_int(X, Y)`; `+∞` when no interleaving exists.
pub fn interleaving_distance(x: &Barcode, y: &Barcode) -> Result<Grade, BarcodeError> {
    let (xs, ys) = (items(x)?, items(y)?);
    Ok(match optimal_interleaving(&xs, &ys) {
        Some((a, b, _)) => Grade::Finite(a + b),
        None => Grade::PosInf,
    })
}

/// `d_int(X, 0)`: the longest bar (`+∞` if any bar is infinite).
pub fn distance_to_zero(x: &Barcode) -> Result<Grade, BarcodeError> {
    let xs = items(x)?;
    let mut d = Q::zero();
    for i in &xs {
        match i.length() {
            Some(len) => d = d.max(len),
            None => return Ok(Grade::PosInf),
        }
    }
    Ok(Grade::Finite(d))
}

/// An optimal certificate, or `None` when the distance is infinite.
///
/// On the supported shapes the infimum is always attained, so the certificate
/// satisfies `a + b = d_int(X, Y)` exactly.
pub fn optimal_certificate(
    x: &Barcode,
    y: &Barcode,
) -> Result<Option<InterleavingCertificate>, BarcodeError> {
    let (xs, ys) = (items(x)?, items(y)?);
    let Some((a, b, m)) = optimal_interleaving(&xs, &ys) else {
        return Ok(None);
    };
    Ok(Some(certificate_from_matching(&xs, &ys, a, b, &m)))
}

fn certificate_from_matching(
    xs: &[Item],
    ys: &[Item],
    a: Q,
    b: Q,
    m: &[(usize, usize)],
) -> InterleavingCertificate {
    let one = Q::from_integer(1.into());
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for &(i, j) in m {
        let xi = xs[i].interval();
        let yj = ys[j].interval();
        // when a basis map vanishes both bars die within a + b anyway
        if interval_hom_nonzero(&xi, &yj.translate(&-&a))
            && interval_hom_nonzero(&yj, &xi.translate(&-&b))
        {
            forward.push(Entry {
                from: i,
                to: j,
                coef: one.clone(),
            });
            backward.push(Entry {
                from: j,
                to: i,
                coef: one.clone(),
            });
        }
    }
    InterleavingCertificate {
        a,
        b,
        forward,
        backward,
    }
}

/// Checks `T_a(β)∘α = τ_{a+b}(X)` and `T_b(α)∘β = τ_{a+b}(Y)` exactly.
///
/// Returns `Ok(false)` also when an entry sits on a pair of bars with no
/// nonzero morphism (the data then does not define a morphism).
pub fn verify_interleaving(
    x: &Barcode,
    y: &Barcode,
    cert: &InterleavingCertificate,
) -> Result<bool, InterleavingError> {
    if cert.a.is_negative() || cert.b.is_negative() {
        return Err(InterleavingError::NegativeParameter {
            a: cert.a.to_string(),
            b: cert.b.to_string(),
        });
    }
    let xs: Vec<(Interval, i64)> = certificate_bars(x)?;
    let ys: Vec<(Interval, i64)> = certificate_bars(y)?;
    let alpha = dense(&cert.forward, xs.len(), ys.len())?;
    let beta = dense(&cert.backward, ys.len(), xs.len())?;
    Ok(is_morphism(&alpha, &xs, &ys, &cert.a)
        && is_morphism(&beta, &ys, &xs, &cert.b)
        && composite_is_tau(&alpha, &beta, &xs, &ys, &cert.a, &cert.b)
        && composite_is_tau(&beta, &alpha, &ys, &xs, &cert.b, &cert.a))
}

fn dense(entries: &[Entry], n: usize, m: usize) -> Result<Vec<Vec<Q>>, InterleavingError> {
    let mut out = vec![vec![Q::zero(); m]; n];
    for e in entries {
        if e.from >= n || e.to >= m {
            return Err(InterleavingError::IndexOutOfRange {
                from: e.from,
                to: e.to,
            });
        }
        out[e.from][e.to] += &e.coef;
    }
    Ok(out)
}

/// Each nonzero coefficient must sit on a pair admitting a degree-0 map
/// `S_i → T_c R_j`.
fn is_morphism(mat: &[Vec<Q>], src: &[(Interval, i64)], dst: &[(Interval, i64)], c: &Q) -> bool {
    mat.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| {
            v.is_zero()
                || (src[i].1 == dst[j].1
                    && interval_hom_nonzero(&src[i].0, &dst[j].0.translate(&-c)))
        })
    })
}

fn meets(ivs: &[&Interval]) -> bool {
    // all intervals are half-open [l, r) here
    let l = ivs.iter().map(|i| i.left()).max().expect("nonempty");
    let r = ivs.iter().map(|i| i.right()).min().expect("nonempty");
    l < r
}

/// `T_c(g)∘f = τ_{c+e}` on the source, with `f : S → T_c R`, `g : R → T_e S`.
fn composite_is_tau(
    f: &[Vec<Q>],
    g: &[Vec<Q>],
    src: &[(Interval, i64)],
    mid: &[(Interval, i64)],
    c: &Q,
    e: &Q,
) -> bool {
    let total = c + e;
    for (i, (si, di)) in src.iter().enumerate() {
        for (k, (sk, dk)) in src.iter().enumerate() {
            let target = sk.translate(&-&total);
            if di != dk || !interval_hom_nonzero(si, &target) {
                continue;
            }
            let mut coef = Q::zero();
            for (j, (mj, _)) in mid.iter().enumerate() {
                if f[i][j].is_zero() || g[j][k].is_zero() {
                    continue;
                }
                if meets(&[si, &mj.translate(&-c), &target]) {
                    coef += &f[i][j] * &g[j][k];
                }
            }
            let tau = if i == k { Q::from_integer(1.into()) } else { Q::zero() };
            if coef != tau {
                return false;
            }
        }
    }
    true
}

/// Classical bottleneck distance: matched bars cost the larger endpoint
/// displacement, unmatched bars half their length.
pub fn bottleneck_distance(x: &Barcode, y: &Barcode) -> Result<Grade, BarcodeError> {
    let (xs, ys) = (items(x)?, items(y)?);
    let two = Q::from_integer(2.into());
    let cost: Vec<Vec<Option<Q>>> = xs
        .iter()
        .map(|xi| {
            ys.iter()
                .map(|yj| pair_cost(xi, yj).map(|(a, b)| a.max(b)))
                .collect()
        })
        .collect();
    let half = |i: &Item| i.length().map(|l| l / &two);
    let cands = sorted_candidates(
        cost.iter()
            .flatten()
            .flatten()
            .cloned()
            .chain(xs.iter().chain(&ys).filter_map(half)),
    );
    for t in &cands {
        let ok = partial_matching(
            xs.len(),
            ys.len(),
            |i, j| cost[i][j].as_ref().is_some_and(|c| c <= t),
            |i| half(&xs[i]).is_some_and(|h| &h <= t),
            |j| half(&ys[j]).is_some_and(|h| &h <= t),
        );
        if ok.is_some() {
            return Ok(Grade::Finite(t.clone()));
        }
    }
    Ok(Grade::PosInf)
}
