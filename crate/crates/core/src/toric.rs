//! Primitive collections, Mori and Kähler cones, the Stanley-Reisner ideal
//! and the relation lattice L_ext.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::FanData;
use crate::linalg::{self, fmt_rat, int, rat, rat_from_int, Int, IntMatrix, LatticeVector, Rat};
use crate::polyhedral;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveCollection {
    /// The rays of the collection.
    pub rays: Vec<usize>,
    /// Relation over the rays (I-order).
    pub l: LatticeVector,
    /// Lift to J.
    pub l_ext: LatticeVector,
    /// Rays of the smallest cone containing the sum of the collection.
    pub sigma: Vec<usize>,
    /// Positive coefficients on `sigma`.
    pub coeffs: Vec<Int>,
    /// c_{i,0} per block.
    pub c0: Vec<Int>,
}

/// The matrix A with columns the rays (n x p).
pub fn a_matrix(f: &FanData) -> IntMatrix {
    let cols: Vec<Vec<Int>> = f
        .rays
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    IntMatrix::from_columns(&cols)
}

/// The points nu_{i,j} in J-order, each of length n + r.
pub fn nu_points(f: &FanData) -> Vec<Vec<i64>> {
    let (n, r) = (f.dim, f.r());
    f.j_rays()
        .into_iter()
        .zip(f.j_blocks())
        .map(|(ray, block)| {
            let mut v = vec![0; n + r];
            if let Some(k) = ray {
                v[..n].copy_from_slice(&f.rays[k]);
            }
            v[n + block] = 1;
            v
        })
        .collect()
}

/// A_ext with columns nu_{i,j} ((n+r) x (p+r)).
pub fn a_ext_matrix(f: &FanData) -> IntMatrix {
    let cols: Vec<Vec<Int>> = nu_points(f)
        .into_iter()
        .map(|c| c.into_iter().map(int).collect())
        .collect();
    IntMatrix::from_columns(&cols)
}

/// L_ext = ker A_ext with a fixed basis; lattice points are addressed by
/// their integer coordinates in that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub basis: Vec<LatticeVector>,
}

impl RelationLattice {
    pub fn new(f: &FanData) -> Result<Self> {
        Ok(Self {
            basis: linalg::kernel_basis(&a_ext_matrix(f))?,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn rat_basis(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|b| b.0.iter().map(rat_from_int).collect())
            .collect()
    }

    /// Rational coordinates of `v` in the basis, if `v` lies in the span.
    pub fn coords_rat(&self, v: &LatticeVector) -> Option<Vec<Rat>> {
        let target: Vec<Rat> = v.0.iter().map(rat_from_int).collect();
        linalg::coordinates_in_span(&self.rat_basis(), &target)
    }

    /// Integer coordinates of a lattice vector.
    pub fn coords(&self, v: &LatticeVector) -> Option<Vec<Int>> {
        let c = self.coords_rat(v)?;
        c.iter()
            .all(Rat::is_integer)
            .then(|| c.into_iter().map(|x| x.to_integer()).collect())
    }

    pub fn point(&self, lambda: &[Int]) -> LatticeVector {
        let len = self.basis.first().map_or(0, LatticeVector::len);
        let mut out = LatticeVector::zeros(len);
        for (b, c) in self.basis.iter().zip(lambda) {
            out = out.add(&b.scale(c));
        }
        out
    }

    /// The functional `l -> w . l` in dual coordinates.
    pub fn dual_coords(&self, w: &[Rat]) -> Vec<Rat> {
        self.basis
            .iter()
            .map(|b| b.0.iter().zip(w).map(|(x, y)| rat_from_int(x) * y).sum())
            .collect()
    }
}

/// Minimal non-faces with their relation data. Fails with `NotNef` when a
/// block has negative degree on some relation.
pub fn primitive_collections(f: &FanData) -> Result<Vec<PrimitiveCollection>> {
    let p = f.p();
    let a_ext = a_ext_matrix(f);
    let mut out = Vec::new();
    for size in 2..=p {
        for subset in linalg::combinations(p, size) {
            if f.is_face(&subset) {
                continue;
            }
            let minimal = (0..size).all(|skip| {
                let sub: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != skip)
                    .map(|(_, &k)| k)
                    .collect();
                f.is_face(&sub)
            });
            if !minimal {
                continue;
            }
            out.push(relation_of(f, &a_ext, subset)?);
        }
    }
    Ok(out)
}

fn relation_of(f: &FanData, a_ext: &IntMatrix, rays: Vec<usize>) -> Result<PrimitiveCollection> {
    let mut sum = vec![Rat::zero(); f.dim];
    for &k in &rays {
        for (s, &x) in sum.iter_mut().zip(&f.rays[k]) {
            *s += rat(x, 1);
        }
    }
    let located = f
        .locate(&sum)
        .ok_or_else(|| Error::NotComplete(format!("sum of rays {rays:?} lies in no cone")))?;
    let mut l = vec![Int::zero(); f.p()];
    for &k in &rays {
        l[k] = Int::one();
    }
    let mut sigma = Vec::new();
    let mut coeffs = Vec::new();
    for (k, c) in located {
        assert!(c.is_integer(), "smooth cone gives integral coefficients");
        assert!(!rays.contains(&k), "collection meets the cone of its sum");
        l[k] = -c.to_integer();
        sigma.push(k);
        coeffs.push(c.to_integer());
    }
    let mut c0 = vec![Int::zero(); f.r()];
    for (k, x) in l.iter().enumerate() {
        c0[f.block_of(k)] += x;
    }
    for (i, c) in c0.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::NotNef {
                block: i,
                collection: rays.iter().map(|&k| f.input_index[k]).collect(),
                degree: c.to_string(),
            });
        }
    }
    let mut l_ext = f.lift_to_j(&l);
    for (i, c) in c0.iter().enumerate() {
        l_ext[f.j_of_block(i)] = -c;
    }
    assert!(
        a_ext.mul_vec(&l_ext).iter().all(Zero::is_zero),
        "lifted relation lies in ker A_ext"
    );
    Ok(PrimitiveCollection {
        rays,
        l: LatticeVector(l),
        l_ext: LatticeVector(l_ext),
        sigma,
        coeffs,
        c0,
    })
}

/// Generators of NE(X): pairs `(l, l_ext)`.
pub fn mori_cone_generators(f: &FanData) -> Result<Vec<(LatticeVector, LatticeVector)>> {
    Ok(primitive_collections(f)?
        .into_iter()
        .map(|pc| (pc.l, pc.l_ext))
        .collect())
}

/// Square-free monomials a_P, as sorted ray sets.
pub fn stanley_reisner_ideal(f: &FanData) -> Result<Vec<Vec<usize>>> {
    Ok(primitive_collections(f)?
        .into_iter()
        .map(|pc| pc.rays)
        .collect())
}

/// A polyhedral cone `{y : g . y >= 0}` given by primitive integer rows,
/// with its extreme rays when pointed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeDescription {
    #[serde(serialize_with = "ser_int_rows")]
    pub inequalities: Vec<Vec<Int>>,
    #[serde(serialize_with = "ser_int_rows")]
    pub rays: Vec<Vec<Int>>,
}

pub fn ser_int_rows<S: serde::Serializer>(
    rows: &[Vec<Int>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        let v: Vec<String> = r.iter().map(ToString::to_string).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

impl ConeDescription {
    pub fn dim(&self) -> usize {
        self.inequalities
            .first()
            .or(self.rays.first())
            .map_or(0, Vec::len)
    }

    pub fn contains(&self, y: &[Rat]) -> bool {
        self.inequalities
            .iter()
            .all(|g| !dot_int_rat(g, y).is_negative())
    }

    pub fn contains_in_interior(&self, y: &[Rat]) -> bool {
        self.inequalities
            .iter()
            .all(|g| dot_int_rat(g, y).is_positive())
    }

    pub fn ray_sum(&self) -> Vec<Rat> {
        let mut s = vec![Rat::zero(); self.dim()];
        for r in &self.rays {
            for (a, x) in s.iter_mut().zip(r) {
                *a += rat_from_int(x);
            }
        }
        s
    }
}

pub fn dot_int_rat(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| rat_from_int(x) * y).sum()
}

/// Primitive integer rows, deduplicated and sorted.
pub fn normalize_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| linalg::primitive_integer(r))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Cone `{y : g . y >= 0}` with rays. `None` rays when not pointed.
pub fn cone_from_rows(rows: &[Vec<Rat>], nvars: usize) -> ConeDescription {
    let ineq = normalize_rows(rows);
    let rays =
        polyhedral::cone_extreme_rays(&polyhedral::to_rat_rows(&ineq), nvars).unwrap_or_default();
    ConeDescription {
        inequalities: ineq,
        rays,
    }
}

/// The Kähler cone in dual coordinates of the L_ext basis.
pub fn kahler_cone(f: &FanData, lattice: &RelationLattice) -> Result<ConeDescription> {
    let rows: Vec<Vec<Rat>> = primitive_collections(f)?
        .iter()
        .map(|pc| {
            lattice
                .coords_rat(&pc.l_ext)
                .expect("relation lies in L_ext")
        })
        .collect();
    let cone = cone_from_rows(&rows, lattice.rank());
    if cone.rays.is_empty() || !cone.contains_in_interior(&cone.ray_sum()) {
        return Err(Error::EmptyInterior(format!(
            "Kähler cone of {} has no interior point",
            f.name
        )));
    }
    Ok(cone)
}

/// NE(X) inside L_ext, in lattice coordinates: `{lambda : y_s . lambda >= 0}`
/// over the Kähler rays.
pub fn mori_cone(kahler: &ConeDescription) -> ConeDescription {
    let rows = polyhedral::to_rat_rows(&kahler.rays);
    cone_from_rows(&rows, kahler.dim())
}

pub fn in_mori_cone(kahler: &ConeDescription, lambda: &[Int]) -> bool {
    let l: Vec<Rat> = lambda.iter().map(rat_from_int).collect();
    kahler
        .rays
        .iter()
        .all(|y| !dot_int_rat(y, &l).is_negative())
}

/// Weight over J from a weight over rays.
pub fn weight_from_rays(f: &FanData, w: &[Rat]) -> Result<Vec<Rat>> {
    if w.len() != f.p() {
        return Err(Error::DimensionMismatch {
            expected: f.p(),
            got: w.len(),
        });
    }
    Ok(f.lift_to_j(w))
}

/// Checks `w . l_ext(P) > 0` for every primitive collection.
pub fn check_ample(f: &FanData, w: &[Rat]) -> Result<()> {
    for pc in primitive_collections(f)? {
        let v: Rat = pc
            .l_ext
            .0
            .iter()
            .zip(w)
            .map(|(a, b)| rat_from_int(a) * b)
            .sum();
        if !v.is_positive() {
            return Err(Error::WeightNotAmple(format!(
                "weight pairs to {} with the relation of rays {:?}",
                fmt_rat(&v),
                pc.rays
                    .iter()
                    .map(|&k| f.input_index[k])
                    .collect::<Vec<_>>()
            )));
        }
    }
    Ok(())
}

/// Sum of the Kähler extreme rays, lifted to a weight over J vanishing at
/// the `(i,0)` slots.
pub fn default_weight(f: &FanData, lattice: &RelationLattice) -> Result<Vec<Rat>> {
    let kahler = kahler_cone(f, lattice)?;
    lift_dual(f, lattice, &kahler.ray_sum())
}

/// A weight `w` over J with `w_{i,0} = 0` and `w . b_t = y_t`.
pub fn lift_dual(f: &FanData, lattice: &RelationLattice, y: &[Rat]) -> Result<Vec<Rat>> {
    let a: Vec<Vec<Rat>> = lattice
        .basis
        .iter()
        .map(|b| f.restrict_to_i(&b.0).iter().map(rat_from_int).collect())
        .collect();
    let w = linalg::solve(&a, y)
        .ok_or_else(|| Error::InvalidInput("dual vector cannot be lifted".into()))?;
    Ok(f.lift_to_j(&w))
}

/// The weight to use: the user's (over rays, input order already applied)
/// or the default, checked for ampleness.
pub fn resolve_weight(
    f: &FanData,
    lattice: &RelationLattice,
    user: Option<&[Rat]>,
) -> Result<Vec<Rat>> {
    let w = match user.or(f.ample_weight.as_deref()) {
        Some(w) => weight_from_rays(f, w)?,
        None => default_weight(f, lattice)?,
    };
    check_ample(f, &w)?;
    Ok(w)
}

pub fn weight_degree(w: &[Rat], l: &LatticeVector) -> Rat {
    l.0.iter().zip(w).map(|(a, b)| rat_from_int(a) * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    #[test]
    fn primitive_relations_of_corpus() {
        let p1 = primitive_collections(&corpus::p1()).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].l_ext, lv(&[-2, 1, 1]));
        assert_eq!(p1[0].c0, vec![int(2)]);
        assert!(p1[0].sigma.is_empty());

        let p2 = primitive_collections(&corpus::p2()).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].l_ext, lv(&[-3, 1, 1, 1]));

        let q = primitive_collections(&corpus::p1xp1_r2()).unwrap();
        let ext: Vec<_> = q.iter().map(|pc| pc.l_ext.clone()).collect();
        assert_eq!(
            ext,
            vec![lv(&[-2, 1, 1, 0, 0, 0]), lv(&[0, 0, 0, -2, 1, 1])]
        );
    }

    #[test]
    fn f1_relations() {
        let f = corpus::f1();
        let pcs = primitive_collections(&f).unwrap();
        let ext: Vec<_> = pcs.iter().map(|pc| pc.l_ext.clone()).collect();
        assert_eq!(ext, vec![lv(&[-1, 1, -1, 1, 0]), lv(&[-2, 0, 1, 0, 1])]);
        assert_eq!(pcs[0].sigma, vec![1]);
    }

    #[test]
    fn mori_generators_over_rays() {
        let g = mori_cone_generators(&corpus::p2()).unwrap();
        assert_eq!(g[0].0, lv(&[1, 1, 1]));
        let g = mori_cone_generators(&corpus::p1()).unwrap();
        assert_eq!(g[0].0, lv(&[1, 1]));
        assert_eq!(mori_cone_generators(&corpus::p1xp1()).unwrap().len(), 2);
    }

    #[test]
    fn sr_ideals() {
        assert_eq!(
            stanley_reisner_ideal(&corpus::p2()).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            stanley_reisner_ideal(&corpus::p1xp1_r2()).unwrap(),
            vec![vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn kahler_cones() {
        for (f, nrays) in [
            (corpus::p1(), 1),
            (corpus::p2(), 1),
            (corpus::p1xp1(), 2),
            (corpus::f1(), 2),
        ] {
            let lat = RelationLattice::new(&f).unwrap();
            let k = kahler_cone(&f, &lat).unwrap();
            assert_eq!(k.rays.len(), nrays, "{}", f.name);
            let w = default_weight(&f, &lat).unwrap();
            check_ample(&f, &w).unwrap();
        }
    }

    #[test]
    fn non_ample_weight_is_rejected() {
        let f = corpus::p1();
        let w = weight_from_rays(&f, &[rat(1, 1), rat(-1, 1)]).unwrap();
        assert!(matches!(check_ample(&f, &w), Err(Error::WeightNotAmple(_))));
    }
}
