//! The fractional GKZ system M(A_ext, beta) and its indicial theory.

use num::{One, Signed, Zero};

use crate::cohomology::{CohClass, CohomologyRing};
use crate::error::{Error, Result};
use crate::fan::FanData;
use crate::linalg::{
    self, fmt_rat, rat, rat_from_int, IntMatrix, LatticeVector, Rat, RationalVector,
};
use crate::poly::Poly;
use crate::toric::{self, ConeDescription, PrimitiveCollection, RelationLattice};

pub type ExponentVector = RationalVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxOperator {
    pub l: LatticeVector,
    pub plus: LatticeVector,
    pub minus: LatticeVector,
}

impl BoxOperator {
    pub fn degree(&self) -> usize {
        let s = |v: &LatticeVector| {
            v.0.iter()
                .map(|x| usize::try_from(x).unwrap())
                .sum::<usize>()
        };
        s(&self.plus).max(s(&self.minus))
    }
}

/// `sum_J A_ext[row][J] x_J d_J - beta_row`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerOperator {
    pub row: usize,
    pub coeffs: Vec<i64>,
    pub beta: Rat,
}

#[derive(Clone, Debug)]
pub struct GkzSystem {
    pub fan: FanData,
    pub a: IntMatrix,
    pub a_ext: IntMatrix,
    pub beta: Vec<Rat>,
    pub lattice: RelationLattice,
    /// The point configuration: nu_{i,j} in J-order.
    pub points: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub collections: Vec<PrimitiveCollection>,
}

pub fn build_system(f: &FanData) -> Result<GkzSystem> {
    let a = toric::a_matrix(f);
    let a_ext = toric::a_ext_matrix(f);
    let lattice = RelationLattice::new(f)?;
    let mut beta = vec![Rat::zero(); f.dim];
    beta.extend(std::iter::repeat_n(rat(-1, 2), f.r()));
    for b in &lattice.basis {
        assert!(a_ext.mul_vec(&b.0).iter().all(Zero::is_zero));
    }
    Ok(GkzSystem {
        fan: f.clone(),
        a,
        a_ext,
        beta,
        lattice,
        points: toric::nu_points(f),
        labels: f.j_labels(),
        collections: toric::primitive_collections(f)?,
    })
}

impl GkzSystem {
    pub fn j_len(&self) -> usize {
        self.a_ext.cols()
    }

    pub fn in_kernel(&self, l: &LatticeVector) -> bool {
        l.len() == self.j_len() && self.a_ext.mul_vec(&l.0).iter().all(Zero::is_zero)
    }

    fn require_kernel(&self, l: &LatticeVector) -> Result<()> {
        if self.in_kernel(l) {
            Ok(())
        } else {
            Err(Error::NotInKernel(
                l.0.iter().map(ToString::to_string).collect(),
            ))
        }
    }

    /// alpha_{i,0} = -1/2, all other entries 0.
    pub fn canonical_alpha(&self) -> ExponentVector {
        let mut alpha = vec![Rat::zero(); self.j_len()];
        for i in 0..self.fan.r() {
            alpha[self.fan.j_of_block(i)] = rat(-1, 2);
        }
        assert_eq!(
            self.a_ext.mul_rat_vec(&alpha),
            self.beta,
            "A_ext alpha = beta"
        );
        RationalVector(alpha)
    }

    pub fn box_operator(&self, l: &LatticeVector) -> Result<BoxOperator> {
        self.require_kernel(l)?;
        let (plus, minus) = linalg::split_positive_negative(l);
        Ok(BoxOperator {
            l: l.clone(),
            plus,
            minus,
        })
    }

    /// Box operators of the primitive-collection relations.
    pub fn box_operators(&self) -> Vec<BoxOperator> {
        self.collections
            .iter()
            .map(|pc| self.box_operator(&pc.l_ext).expect("relation in kernel"))
            .collect()
    }

    pub fn euler_operators(&self) -> Vec<EulerOperator> {
        (0..self.a_ext.rows())
            .map(|row| EulerOperator {
                row,
                coeffs: self
                    .a_ext
                    .row(row)
                    .iter()
                    .map(|x| i64::try_from(x).unwrap())
                    .collect(),
                beta: self.beta[row].clone(),
            })
            .collect()
    }
}

/// `prod_{J : l+_J > 0} alpha_J (alpha_J - 1) ... (alpha_J - l+_J + 1)`.
pub fn indicial_polynomial(sys: &GkzSystem, l: &LatticeVector) -> Result<Poly> {
    sys.require_kernel(l)?;
    let nv = sys.j_len();
    let (plus, _) = linalg::split_positive_negative(l);
    let mut p = Poly::one(nv);
    for (j, e) in plus.0.iter().enumerate() {
        let e = i64::try_from(e).unwrap();
        for k in 0..e {
            p = p.mul(&Poly::var(nv, j).sub(&Poly::constant(nv, rat(k, 1))));
        }
    }
    Ok(p)
}

/// Linear factors `alpha_J = k` of the indicial generator of `l`.
fn indicial_roots(l: &LatticeVector) -> Vec<(usize, i64)> {
    let (plus, _) = linalg::split_positive_negative(l);
    let mut out = Vec::new();
    for (j, e) in plus.0.iter().enumerate() {
        for k in 0..i64::try_from(e).unwrap() {
            out.push((j, k));
        }
    }
    out
}

/// Zero locus of the indicial generators of the primitive relations lying
/// in the dual of `tau`, together with A_ext alpha = beta.
pub fn indicial_ideal_zero_locus(
    sys: &GkzSystem,
    tau: &ConeDescription,
) -> Result<Vec<ExponentVector>> {
    let gens: Vec<Vec<(usize, i64)>> = sys
        .collections
        .iter()
        .filter(|pc| {
            let lam = sys
                .lattice
                .coords_rat(&pc.l_ext)
                .expect("relation in L_ext");
            tau.rays
                .iter()
                .all(|y| !toric::dot_int_rat(y, &lam).is_negative())
        })
        .map(|pc| indicial_roots(&pc.l_ext))
        .collect();
    let nv = sys.j_len();
    let base: Vec<Vec<Rat>> = sys.a_ext.to_rational_rows();
    let mut points: Vec<Vec<Rat>> = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut rows = base.clone();
        let mut rhs = sys.beta.clone();
        for (g, &c) in gens.iter().zip(&choice) {
            let (j, k) = g[c];
            let mut row = vec![Rat::zero(); nv];
            row[j] = Rat::one();
            rows.push(row);
            rhs.push(rat(k, 1));
        }
        if let Some(x) = linalg::solve(&rows, &rhs) {
            let rank = linalg::rank(&rows);
            if rank < nv {
                return Err(Error::UnexpectedLocus(format!(
                    "component of dimension {} through {:?}",
                    nv - rank,
                    x.iter().map(fmt_rat).collect::<Vec<_>>()
                )));
            }
            if !points.contains(&x) {
                points.push(x);
            }
        }
        // advance the mixed-radix choice counter
        let mut t = 0;
        while t < gens.len() {
            choice[t] += 1;
            if choice[t] < gens[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
        if t == gens.len() {
            break;
        }
    }
    match points.len() {
        0 => Err(Error::UnexpectedLocus("empty zero locus".into())),
        1 => Ok(points.into_iter().map(RationalVector).collect()),
        k => Err(Error::UnexpectedLocus(format!(
            "{k} isolated points: {:?}",
            points
                .iter()
                .map(|p| p.iter().map(fmt_rat).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        ))),
    }
}

/// Checks that alpha_J -> D_J + alpha_J maps the indicial generators and the
/// Euler forms to relations that hold in the cohomology ring.
pub fn indicial_ring_surjection_check(sys: &GkzSystem, ring: &CohomologyRing) -> bool {
    let alpha = sys.canonical_alpha();
    let d = j_classes(&sys.fan, ring);
    for pc in &sys.collections {
        let mut prod = ring.one();
        for (j, k) in indicial_roots(&pc.l_ext) {
            let factor = d[j].add(&ring.scalar(&(&alpha.0[j] - rat(k, 1))));
            prod = ring.mul(&prod, &factor);
        }
        if !prod.is_zero() {
            return false;
        }
    }
    for row in 0..sys.a_ext.rows() {
        let mut form = ring.zero();
        let mut offset = -sys.beta[row].clone();
        for j in 0..sys.j_len() {
            let c = rat_from_int(sys.a_ext.get(row, j));
            if c.is_zero() {
                continue;
            }
            form = form.add(&d[j].scale(&c));
            offset += &c * &alpha.0[j];
        }
        if !form.is_zero() || !offset.is_zero() {
            return false;
        }
    }
    true
}

/// Classes D_J over J, with D_{i,0} = -sum_j D_{i,j}.
pub fn j_classes(f: &FanData, ring: &CohomologyRing) -> Vec<CohClass> {
    let rays = f.j_rays();
    let blocks = f.j_blocks();
    rays.iter()
        .zip(&blocks)
        .map(|(ray, &b)| match ray {
            Some(k) => ring.ray_class(*k).clone(),
            None => {
                let mut s = ring.zero();
                for (r2, &b2) in rays.iter().zip(&blocks) {
                    if let (Some(k2), true) = (r2, b2 == b) {
                        s = s.sub(ring.ray_class(*k2));
                    }
                }
                s
            }
        })
        .collect()
}
