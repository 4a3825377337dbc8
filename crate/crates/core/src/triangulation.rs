//! Point configurations of A_ext, regular subdivisions, the maximal
//! triangulation and secondary cones.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkz::GkzSystem;
use crate::linalg::{self, fmt_rat, rat, Int, LatticeVector, Rat};
use crate::toric::{self, ConeDescription};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointConfiguration {
    /// nu_{i,j} in J-order; these are the columns of A_ext.
    pub points: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

impl PointConfiguration {
    pub fn from_system(sys: &GkzSystem) -> Self {
        Self {
            points: sys.points.clone(),
            labels: sys.labels.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    fn rat_point(&self, k: usize) -> Vec<Rat> {
        self.points[k].iter().map(|&x| rat(x, 1)).collect()
    }

    fn det(&self, simplex: &[usize]) -> Int {
        let rows: Vec<Vec<Int>> = simplex
            .iter()
            .map(|&k| self.points[k].iter().map(|&x| Int::from(x)).collect())
            .collect();
        linalg::det_int_rows(&rows)
    }

    /// Coefficients of `nu_k` in the basis given by `simplex`.
    fn coefficients(&self, simplex: &[usize], k: usize) -> Option<Vec<Rat>> {
        let basis: Vec<Vec<Rat>> = simplex.iter().map(|&s| self.rat_point(s)).collect();
        linalg::coordinates_in_span(&basis, &self.rat_point(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangulation {
    /// Sorted simplices of sorted point indices.
    pub simplices: Vec<Vec<usize>>,
    /// A height function inducing it, when known.
    #[serde(serialize_with = "ser_rats")]
    pub witness: Option<Vec<Rat>>,
}

fn ser_rats<S: serde::Serializer>(
    w: &Option<Vec<Rat>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(v) => s.collect_seq(v.iter().map(fmt_rat)),
        None => s.serialize_none(),
    }
}

impl Triangulation {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Subdivision {
    Triangulation(Triangulation),
    /// Some cell is not a simplex.
    Cells(Vec<Vec<usize>>),
}

/// Simplices `sigma(1) + {nu_{1,0}, ..., nu_{r,0}}` over the maximal cones.
pub fn maximal_triangulation(sys: &GkzSystem) -> Result<Triangulation> {
    let f = &sys.fan;
    let pc = PointConfiguration::from_system(sys);
    let mut simplices = Vec::new();
    for cone in &f.max_cones {
        let mut s: Vec<usize> = cone.iter().map(|&k| f.j_of_ray(k)).collect();
        s.extend((0..f.r()).map(|i| f.j_of_block(i)));
        s.sort_unstable();
        let det = pc.det(&s);
        if det.abs() != Int::from(1) {
            return Err(Error::NotUnimodular {
                simplex: s,
                det: det.to_string(),
            });
        }
        simplices.push(s);
    }
    simplices.sort();
    for s in &simplices {
        assert!(
            (0..f.r()).all(|i| s.contains(&f.j_of_block(i))),
            "nu_(i,0) in every simplex"
        );
    }
    Ok(Triangulation {
        simplices,
        witness: None,
    })
}

/// Sum of `|det|` over the simplices.
pub fn normalized_volume(pc: &PointConfiguration, t: &Triangulation) -> Result<Int> {
    let mut total = Int::zero();
    for s in &t.simplices {
        let d = pc.det(s);
        if d.is_zero() {
            return Err(Error::DegenerateSimplex(s.clone()));
        }
        total += d.abs();
    }
    Ok(total)
}

/// Lower-hull subdivision of the lifted cone `Cone{(nu, omega_nu)}`.
pub fn regular_subdivision(pc: &PointConfiguration, omega: &[Rat]) -> Subdivision {
    let n = pc.dim();
    let pts: Vec<Vec<Rat>> = (0..pc.len()).map(|k| pc.rat_point(k)).collect();
    let mut cells = BTreeSet::new();
    for subset in linalg::combinations(pc.len(), n) {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&k| pts[k].clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&k| omega[k].clone()).collect();
        if linalg::rank(&rows) < n {
            continue;
        }
        let Some(h) = linalg::solve(&rows, &rhs) else {
            continue;
        };
        let gaps: Vec<Rat> = pts
            .iter()
            .zip(omega)
            .map(|(p, w)| w - linalg::dot_rat(&h, p))
            .collect();
        if gaps.iter().any(Signed::is_negative) {
            continue;
        }
        let cell: Vec<usize> = (0..pc.len()).filter(|&k| gaps[k].is_zero()).collect();
        cells.insert(cell);
    }
    let cells: Vec<Vec<usize>> = cells.into_iter().collect();
    if cells.iter().all(|c| c.len() == n) {
        Subdivision::Triangulation(Triangulation {
            simplices: cells,
            witness: Some(omega.to_vec()),
        })
    } else {
        Subdivision::Cells(cells)
    }
}

/// Normalized volume through a triangulation induced by seeded random
/// heights, independent of the fan structure.
pub fn normalized_volume_generic(pc: &PointConfiguration, seed: u64) -> Result<Int> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let omega: Vec<Rat> = (0..pc.len())
            .map(|_| rat(rng.random_range(0..10_000), 1))
            .collect();
        if let Subdivision::Triangulation(t) = regular_subdivision(pc, &omega) {
            return normalized_volume(pc, &t);
        }
    }
    Err(Error::InvalidInput("no generic height found".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondaryCone {
    /// In dual coordinates of the L_ext basis.
    pub cone: ConeDescription,
    /// Number of wall (flip) conditions.
    pub walls: usize,
    /// Number of non-vertex conditions; zero means that clause is vacuous.
    pub non_vertex_conditions: usize,
}

/// The inequalities `x . g >= 0` of the secondary cone with `g` in L_ext
/// (one per interior wall and per unused point), in lattice coordinates.
pub fn secondary_cone(
    sys: &GkzSystem,
    pc: &PointConfiguration,
    t: &Triangulation,
) -> Result<SecondaryCone> {
    let n = pc.dim();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let relation = |simplex: &[usize], extra: usize| -> Result<Vec<Rat>> {
        let c = pc
            .coefficients(simplex, extra)
            .ok_or_else(|| Error::DegenerateSimplex(simplex.to_vec()))?;
        let mut g = vec![Rat::zero(); pc.len()];
        g[extra] = rat(1, 1);
        for (&s, cs) in simplex.iter().zip(&c) {
            g[s] -= cs;
        }
        Ok(g)
    };
    let to_lambda = |g: &[Rat]| -> Vec<Rat> {
        let ints = linalg::primitive_integer(g);
        sys.lattice
            .coords_rat(&LatticeVector(ints))
            .expect("circuit relation lies in L_ext")
    };
    let mut walls = 0;
    for (a, s1) in t.simplices.iter().enumerate() {
        for s2 in &t.simplices[a + 1..] {
            let common: Vec<usize> = s1.iter().filter(|k| s2.contains(k)).copied().collect();
            if common.len() != n - 1 {
                continue;
            }
            let b = *s2
                .iter()
                .find(|k| !common.contains(k))
                .expect("one new point");
            rows.push(to_lambda(&relation(s1, b)?));
            walls += 1;
        }
    }
    let used = t.vertices();
    let mut non_vertex = 0;
    for k in (0..pc.len()).filter(|k| !used.contains(k)) {
        let host = t
            .simplices
            .iter()
            .find(|s| {
                pc.coefficients(s, k)
                    .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
            })
            .ok_or_else(|| Error::NotRegular(format!("point {} is not covered", pc.labels[k])))?;
        rows.push(to_lambda(&relation(host, k)?));
        non_vertex += 1;
    }
    let rank = sys.lattice.rank();
    if !crate::polyhedral::strictly_feasible(&rows, rank) {
        return Err(Error::NotRegular(
            "secondary cone has empty interior".into(),
        ));
    }
    Ok(SecondaryCone {
        cone: toric::cone_from_rows(&rows, rank),
        walls,
        non_vertex_conditions: non_vertex,
    })
}

/// Whether `omega` induces the maximal triangulation.
pub fn induces_maximal(sys: &GkzSystem, omega: &[Rat]) -> Result<bool> {
    let tmax = maximal_triangulation(sys)?;
    let pc = PointConfiguration::from_system(sys);
    Ok(match regular_subdivision(&pc, omega) {
        Subdivision::Triangulation(t) => t.simplices == tmax.simplices,
        Subdivision::Cells(_) => false,
    })
}

/// Probes directions of a rank 1 or 2 dual space and collects the
/// full-dimensional cones reported by `probe`, refining until the cones
/// cover every direction or the refinement budget runs out.
pub fn sweep_fan<F>(rank: usize, probe: F) -> Result<(Vec<ConeDescription>, bool)>
where
    F: Fn(&[Rat]) -> Result<Option<ConeDescription>>,
{
    let mut cones: Vec<ConeDescription> = Vec::new();
    let add = |cones: &mut Vec<ConeDescription>, c: ConeDescription| {
        if !cones.contains(&c) {
            cones.push(c);
        }
    };
    match rank {
        1 => {
            for s in [1, -1] {
                if let Some(c) = probe(&[rat(s, 1)])? {
                    add(&mut cones, c);
                }
            }
        }
        2 => {
            for k in [4i64, 12, 36] {
                for a in -k..=k {
                    for b in -k..=k {
                        if a.abs().max(b.abs()) != k {
                            continue;
                        }
                        let y = [rat(a, 1), rat(b, 1)];
                        if cones.iter().any(|c| c.contains_in_interior(&y)) {
                            continue;
                        }
                        if let Some(c) = probe(&y)? {
                            add(&mut cones, c);
                        }
                    }
                }
                if covers_plane(&cones) {
                    break;
                }
            }
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "fan enumeration supports rank <= 2, got {rank}"
            )))
        }
    }
    cones.sort_by(|a, b| a.rays.cmp(&b.rays));
    let complete = match rank {
        1 => cones.len() == 2,
        _ => covers_plane(&cones),
    };
    Ok((cones, complete))
}

/// In rank 2, a family of pointed 2-dimensional cones covers the plane iff
/// each boundary ray is shared by exactly two cones.
fn covers_plane(cones: &[ConeDescription]) -> bool {
    if cones.is_empty() || cones.iter().any(|c| c.rays.len() != 2) {
        return false;
    }
    let mut rays: Vec<&Vec<Int>> = cones.iter().flat_map(|c| c.rays.iter()).collect();
    rays.sort();
    let uniq: BTreeSet<&Vec<Int>> = rays.iter().copied().collect();
    uniq.iter()
        .all(|r| rays.iter().filter(|x| *x == r).count() == 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct FanCell {
    pub triangulation: Triangulation,
    pub cone: ConeDescription,
}

/// The secondary fan modulo lineality, for rank(L_ext) <= 2.
pub fn secondary_fan(sys: &GkzSystem) -> Result<(Vec<FanCell>, bool)> {
    let pc = PointConfiguration::from_system(sys);
    let probe = |y: &[Rat]| -> Result<Option<(Triangulation, ConeDescription)>> {
        let omega = toric::lift_dual(&sys.fan, &sys.lattice, y)?;
        match regular_subdivision(&pc, &omega) {
            Subdivision::Triangulation(t) => {
                let c = secondary_cone(sys, &pc, &t)?.cone;
                Ok(c.contains_in_interior(y).then_some((t, c)))
            }
            Subdivision::Cells(_) => Ok(None),
        }
    };
    let (cones, complete) = sweep_fan(sys.lattice.rank(), |y| Ok(probe(y)?.map(|x| x.1)))?;
    let mut cells = Vec::new();
    for c in cones {
        let y = c.ray_sum();
        let (t, cone) = probe(&y)?.expect("interior point of a probed cone");
        cells.push(FanCell {
            triangulation: t,
            cone,
        });
    }
    Ok((cells, complete))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gkz::build_system;

    #[test]
    fn maximal_triangulations() {
        let sys = build_system(&corpus::p1()).unwrap();
        let t = maximal_triangulation(&sys).unwrap();
        assert_eq!(t.simplices, vec![vec![0, 1], vec![0, 2]]);
        let sys = build_system(&corpus::p2()).unwrap();
        let t = maximal_triangulation(&sys).unwrap();
        assert_eq!(t.simplices.len(), 3);
        assert!(t.simplices.iter().all(|s| s.len() == 3 && s.contains(&0)));
        let sys = build_system(&corpus::p1xp1_r2()).unwrap();
        let t = maximal_triangulation(&sys).unwrap();
        assert_eq!(t.simplices.len(), 4);
        assert!(t
            .simplices
            .iter()
            .all(|s| s.len() == 4 && s.contains(&0) && s.contains(&3)));
    }

    #[test]
    fn volumes_match_euler_characteristic() {
        for (f, chi) in [
            (corpus::p1(), 2),
            (corpus::p2(), 3),
            (corpus::p1xp1(), 4),
            (corpus::p1xp1_r2(), 4),
            (corpus::f1(), 4),
        ] {
            let sys = build_system(&f).unwrap();
            let pc = PointConfiguration::from_system(&sys);
            let t = maximal_triangulation(&sys).unwrap();
            assert_eq!(
                normalized_volume(&pc, &t).unwrap(),
                Int::from(chi),
                "{}",
                f.name
            );
            assert_eq!(
                normalized_volume_generic(&pc, 7).unwrap(),
                Int::from(chi),
                "{}",
                f.name
            );
        }
    }

    #[test]
    fn degenerate_simplex_is_reported() {
        let sys = build_system(&corpus::p1()).unwrap();
        let pc = PointConfiguration::from_system(&sys);
        let t = Triangulation {
            simplices: vec![vec![1, 1]],
            witness: None,
        };
        assert_eq!(
            normalized_volume(&pc, &t),
            Err(Error::DegenerateSimplex(vec![1, 1]))
        );
    }

    #[test]
    fn p1_subdivisions() {
        let sys = build_system(&corpus::p1()).unwrap();
        let pc = PointConfiguration::from_system(&sys);
        let tmax = maximal_triangulation(&sys).unwrap();
        match regular_subdivision(&pc, &[rat(0, 1), rat(1, 1), rat(1, 1)]) {
            Subdivision::Triangulation(t) => assert_eq!(t.simplices, tmax.simplices),
            Subdivision::Cells(c) => panic!("{c:?}"),
        }
        match regular_subdivision(&pc, &[rat(1, 1), rat(0, 1), rat(0, 1)]) {
            Subdivision::Triangulation(t) => assert_eq!(t.simplices, vec![vec![1, 2]]),
            Subdivision::Cells(c) => panic!("{c:?}"),
        }
        assert_eq!(
            regular_subdivision(&pc, &vec![rat(0, 1); 3]),
            Subdivision::Cells(vec![vec![0, 1, 2]])
        );
    }

    #[test]
    fn secondary_cone_of_maximal_triangulation_is_kahler() {
        for f in corpus::all() {
            let sys = build_system(&f).unwrap();
            let pc = PointConfiguration::from_system(&sys);
            let t = maximal_triangulation(&sys).unwrap();
            let sc = secondary_cone(&sys, &pc, &t).unwrap();
            let k = toric::kahler_cone(&f, &sys.lattice).unwrap();
            for ray in &k.rays {
                let y: Vec<Rat> = ray.iter().map(crate::linalg::rat_from_int).collect();
                assert!(sc.cone.contains(&y), "{}", f.name);
            }
            assert_eq!(sc.non_vertex_conditions, 0);
            assert_eq!(sc.cone.rays, k.rays, "{}", f.name);
        }
    }

    #[test]
    fn p1_secondary_fan() {
        let sys = build_system(&corpus::p1()).unwrap();
        let (cells, complete) = secondary_fan(&sys).unwrap();
        assert!(complete);
        assert_eq!(cells.len(), 2);
        let other = cells
            .iter()
            .find(|c| c.triangulation.simplices.len() == 1)
            .unwrap();
        let pc = PointConfiguration::from_system(&sys);
        let sc = secondary_cone(&sys, &pc, &other.triangulation).unwrap();
        assert_eq!(sc.non_vertex_conditions, 1);
        let k = toric::kahler_cone(&sys.fan, &sys.lattice).unwrap();
        let neg: Vec<Vec<Int>> = k
            .rays
            .iter()
            .map(|r| r.iter().map(|x| -x.clone()).collect())
            .collect();
        assert_eq!(sc.cone.rays, neg);
    }

    #[test]
    fn rank_two_secondary_fans_are_complete() {
        for f in [corpus::p1xp1_r2(), corpus::f1()] {
            let sys = build_system(&f).unwrap();
            let (cells, complete) = secondary_fan(&sys).unwrap();
            assert!(complete, "{}", f.name);
            let tmax = maximal_triangulation(&sys).unwrap();
            assert!(cells
                .iter()
                .any(|c| c.triangulation.simplices == tmax.simplices));
        }
    }

    #[test]
    fn interior_ample_weights_induce_maximal() {
        for f in corpus::all() {
            let sys = build_system(&f).unwrap();
            let k = toric::kahler_cone(&f, &sys.lattice).unwrap();
            for coeffs in [[1i64, 1], [1, 3], [5, 2]] {
                let mut y = vec![Rat::zero(); sys.lattice.rank()];
                for (ray, c) in k.rays.iter().zip(coeffs.iter().cycle()) {
                    for (a, x) in y.iter_mut().zip(ray) {
                        *a += crate::linalg::rat_from_int(x) * rat(*c, 1);
                    }
                }
                let w = toric::lift_dual(&f, &sys.lattice, &y).unwrap();
                assert!(induces_maximal(&sys, &w).unwrap(), "{}", f.name);
            }
        }
    }
}
