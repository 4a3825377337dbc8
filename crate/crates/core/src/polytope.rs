//! Lattice polytopes in ambient rank at most 4: hulls, Minkowski sums,
//! polar duals and the dual nef-partition.
//!
//! Facets are found by brute force over rank-sized point subsets with exact
//! rational solves, which is cheap at this size.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::FanData;
use crate::linalg::{self, fmt_rat, rat, Int, Rat};

pub const MAX_RANK: usize = 4;

/// A facet inequality `<normal, x> >= -offset` with primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    pub rank: usize,
    /// Sorted vertex set.
    pub vertices: Vec<Vec<i64>>,
    /// Dimension of the affine hull.
    pub affine_dim: usize,
    /// Facets; only populated when the polytope is full-dimensional.
    pub facets: Vec<Facet>,
}

fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

fn to_i64(v: &[Rat]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.is_integer()
                .then(|| i64::try_from(x.to_integer()).ok())
                .flatten()
        })
        .collect()
}

fn int_to_i64(v: &[Int]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x).expect("small coordinate"))
        .collect()
}

/// Facets `(a, b)` with `a . x >= b` of a full-dimensional point set.
fn facets_full(points: &[Vec<Rat>], n: usize) -> Vec<(Vec<Rat>, Rat)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for subset in linalg::combinations(points.len(), n) {
        let rows: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&i| {
                let mut r = points[i].clone();
                r.push(rat(1, 1));
                r
            })
            .collect();
        let null = linalg::nullspace(&rows, n + 1);
        if null.len() != 1 {
            continue;
        }
        let h = &null[0];
        if h[..n].iter().all(Zero::is_zero) {
            continue;
        }
        let vals: Vec<Rat> = points
            .iter()
            .map(|p| linalg::dot_rat(&h[..n], p) + &h[n])
            .collect();
        let sign = if vals.iter().all(|v| !v.is_negative()) {
            rat(1, 1)
        } else if vals.iter().all(|v| !v.is_positive()) {
            rat(-1, 1)
        } else {
            continue;
        };
        let oriented: Vec<Rat> = h.iter().map(|x| x * &sign).collect();
        let key = linalg::primitive_integer(&oriented);
        if seen.insert(key) {
            let a = oriented[..n].to_vec();
            let b = -oriented[n].clone();
            out.push((a, b));
        }
    }
    out
}

/// Vertices among `points` (in a full-dimensional configuration).
fn vertices_full(points: &[Vec<Rat>], facets: &[(Vec<Rat>, Rat)], n: usize) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            let tight: Vec<Vec<Rat>> = facets
                .iter()
                .filter(|(a, b)| linalg::dot_rat(a, &points[i]) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            linalg::rank(&tight) == n
        })
        .collect()
}

/// Indices of the vertices of `conv(points)` and the affine dimension.
fn hull_indices(points: &[Vec<Rat>]) -> (Vec<usize>, usize, Vec<(Vec<Rat>, Rat)>) {
    let n = points[0].len();
    let base = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut m = diffs.clone();
    let k = linalg::rank(&m);
    if k == 0 {
        return (vec![0], 0, Vec::new());
    }
    if k == n {
        let facets = facets_full(points, n);
        return (vertices_full(points, &facets, n), n, facets);
    }
    // project onto coordinates of the affine hull
    linalg::rref(&mut m);
    let basis: Vec<Vec<Rat>> = m.into_iter().take(k).collect();
    let local: Vec<Vec<Rat>> = std::iter::once(vec![Rat::zero(); k])
        .chain(
            diffs
                .iter()
                .map(|d| linalg::coordinates_in_span(&basis, d).expect("in affine hull")),
        )
        .collect();
    let facets = facets_full(&local, k);
    (vertices_full(&local, &facets, k), k, Vec::new())
}

/// The convex hull with its exact vertex set.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<LatticePolytope> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("convex hull of an empty point set".into()))?;
    let n = first.len();
    if n > MAX_RANK {
        return Err(Error::DimensionTooLarge(n));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let uniq: Vec<Vec<i64>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rats: Vec<Vec<Rat>> = uniq.iter().map(|p| to_rat(p)).collect();
    let (idx, affine_dim, facets) = hull_indices(&rats);
    let mut vertices: Vec<Vec<i64>> = idx.iter().map(|&i| uniq[i].clone()).collect();
    vertices.sort();
    let mut facets: Vec<Facet> = facets
        .into_iter()
        .map(|(a, _)| {
            let normal = int_to_i64(&linalg::primitive_integer(&a));
            // the facet contains a lattice vertex, so the offset is integral
            let min = vertices
                .iter()
                .map(|u| normal.iter().zip(u).map(|(x, y)| x * y).sum::<i64>())
                .min()
                .expect("nonempty vertex set");
            Facet {
                normal,
                offset: -min,
            }
        })
        .collect();
    facets.sort();
    Ok(LatticePolytope {
        rank: n,
        vertices,
        affine_dim,
        facets,
    })
}

impl LatticePolytope {
    pub fn point(p: Vec<i64>) -> Self {
        Self {
            rank: p.len(),
            vertices: vec![p],
            affine_dim: 0,
            facets: Vec::new(),
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.rank
    }

    /// True iff `x` lies in the polytope.
    pub fn contains(&self, x: &[Rat]) -> bool {
        if self.is_full_dimensional() {
            return self.facets.iter().all(|f| {
                let v: Rat = f.normal.iter().zip(x).map(|(&a, y)| rat(a, 1) * y).sum();
                v >= rat(-f.offset, 1)
            });
        }
        let mut pts: Vec<Vec<Rat>> = self.vertices.iter().map(|v| to_rat(v)).collect();
        if pts.iter().any(|v| v.as_slice() == x) {
            return true;
        }
        pts.push(x.to_vec());
        let (idx, dim, _) = hull_indices(&pts);
        dim == self.affine_dim && !idx.contains(&(pts.len() - 1))
    }

    pub fn contains_lattice_point(&self, x: &[i64]) -> bool {
        self.contains(&to_rat(x))
    }

    /// True iff the origin is in the interior (full-dimensional, every
    /// facet offset positive).
    pub fn origin_interior(&self) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|f| f.offset > 0)
    }
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.rank != q.rank {
        return Err(Error::DimensionMismatch {
            expected: p.rank,
            got: q.rank,
        });
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for u in &p.vertices {
        for v in &q.vertices {
            pts.push(u.iter().zip(v).map(|(a, b)| a + b).collect());
        }
    }
    convex_hull(&pts)
}

/// Vertices of `{y : <y, x> >= -1 for all x in p}`, one per facet of `p`.
pub fn polar_dual_vertices(p: &LatticePolytope) -> Result<Vec<Vec<Rat>>> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let mut out: Vec<Vec<Rat>> = p
        .facets
        .iter()
        .map(|f| f.normal.iter().map(|&m| rat(m, f.offset)).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// The polar dual as a lattice polytope; fails with `NotReflexive` when a
/// dual vertex is not integral.
pub fn polar_dual(p: &LatticePolytope) -> Result<LatticePolytope> {
    let verts = polar_dual_vertices(p)?;
    let ints: Vec<Vec<i64>> = verts
        .iter()
        .map(|v| {
            to_i64(v).ok_or_else(|| {
                Error::NotReflexive(format!(
                    "polar dual vertex ({}) is not a lattice point",
                    v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
                ))
            })
        })
        .collect::<Result<_>>()?;
    convex_hull(&ints)
}

pub fn is_reflexive(p: &LatticePolytope) -> bool {
    match polar_dual(p) {
        Ok(d) => polar_dual(&d).is_ok_and(|dd| dd == *p),
        Err(_) => false,
    }
}

/// `{m : <m, rho> >= -a_rho}` for the divisor `sum a_rho D_rho`.
pub fn section_polytope(f: &FanData, a: &[i64]) -> Result<LatticePolytope> {
    let n = f.dim;
    if a.len() != f.p() {
        return Err(Error::DimensionMismatch {
            expected: f.p(),
            got: a.len(),
        });
    }
    let rows: Vec<Vec<Rat>> = f.rays.iter().map(|r| to_rat(r)).collect();
    let mut verts = BTreeSet::new();
    for subset in linalg::combinations(f.p(), n) {
        let sub: Vec<Vec<Rat>> = subset.iter().map(|&k| rows[k].clone()).collect();
        if linalg::rank(&sub) < n {
            continue;
        }
        let rhs: Vec<Rat> = subset.iter().map(|&k| rat(-a[k], 1)).collect();
        let Some(m) = linalg::solve(&sub, &rhs) else {
            continue;
        };
        if rows
            .iter()
            .zip(a)
            .all(|(r, &ak)| linalg::dot_rat(r, &m) >= rat(-ak, 1))
        {
            let v = to_i64(&m).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "section polytope vertex ({}) is not a lattice point",
                    m.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
                ))
            })?;
            verts.insert(v);
        }
    }
    if verts.is_empty() {
        return Err(Error::InvalidInput(
            "section polytope is empty or unbounded".into(),
        ));
    }
    convex_hull(&verts.into_iter().collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualNefPartition {
    /// nabla_k = conv({0} and the rays of block k).
    pub nabla: Vec<LatticePolytope>,
    pub nabla_sum: LatticePolytope,
    pub nabla_dual: LatticePolytope,
    /// Section polytopes of E_k.
    pub deltas: Vec<LatticePolytope>,
}

pub fn dual_nef_partition(f: &FanData) -> Result<DualNefPartition> {
    let n = f.dim;
    let mut nabla = Vec::new();
    let mut deltas = Vec::new();
    let mut first = 0;
    for &size in &f.block_sizes {
        let mut pts = vec![vec![0; n]];
        pts.extend(f.rays[first..first + size].iter().cloned());
        nabla.push(convex_hull(&pts)?);
        let a: Vec<i64> = (0..f.p())
            .map(|k| i64::from(k >= first && k < first + size))
            .collect();
        deltas.push(section_polytope(f, &a)?);
        first += size;
    }
    let mut sum = LatticePolytope::point(vec![0; n]);
    for p in &nabla {
        sum = minkowski_sum(&sum, p)?;
    }
    if !sum.origin_interior() {
        return Err(Error::NotReflexive(
            "origin is not interior to the Minkowski sum".into(),
        ));
    }
    let dual = polar_dual(&sum)?;
    if polar_dual(&dual)? != sum {
        return Err(Error::NotReflexive(
            "double dual differs from the Minkowski sum".into(),
        ));
    }
    let union: Vec<Vec<i64>> = deltas.iter().flat_map(|d| d.vertices.clone()).collect();
    let hull = convex_hull(&union)?;
    if hull.vertices != dual.vertices {
        return Err(Error::NotReflexive(format!(
            "dual of the Minkowski sum has vertices {:?}, hull of the section polytopes has {:?}",
            dual.vertices, hull.vertices
        )));
    }
    Ok(DualNefPartition {
        nabla,
        nabla_sum: sum,
        nabla_dual: dual,
        deltas,
    })
}
