//! Fans with a nef-partition and their validation.
//!
//! Rays are stored grouped by nef-partition block, so the ray index of
//! `rho_{i,j}` equals its position in the I-ordering. The J-ordering inserts
//! the extra index `(i,0)` in front of every block.

use std::collections::{BTreeMap, BTreeSet};

use num::integer::Integer;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, fmt_rat, int, rat, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    pub name: String,
    /// Lattice rank n.
    pub dim: usize,
    /// Rays in I-order.
    pub rays: Vec<Vec<i64>>,
    /// Block sizes n_1..n_r.
    pub block_sizes: Vec<usize>,
    /// Maximal cones as sorted ray-index lists, sorted.
    pub max_cones: Vec<Vec<usize>>,
    /// For each ray, its index in the user's input.
    pub input_index: Vec<usize>,
    /// Optional ample weight over rays, in I-order.
    pub ample_weight: Option<Vec<Rat>>,
}

impl FanData {
    /// Builds a fan from input-ordered data. `blocks` must partition the rays.
    pub fn new(
        name: &str,
        dim: usize,
        rays: &[Vec<i64>],
        max_cones: &[Vec<usize>],
        blocks: &[Vec<usize>],
        ample_weight: Option<&[Rat]>,
    ) -> Result<Self> {
        let mut seen = vec![false; rays.len()];
        let mut order = Vec::with_capacity(rays.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidInput("empty nef-partition block".into()));
            }
            for &k in block {
                if k >= rays.len() {
                    return Err(Error::InvalidInput(format!("ray index {k} out of range")));
                }
                if seen[k] {
                    return Err(Error::InvalidInput(format!(
                        "ray {k} appears in two blocks"
                    )));
                }
                seen[k] = true;
                order.push(k);
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("ray {k} is in no block")));
        }
        for r in rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
        }
        let mut position = vec![0; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut cones: Vec<Vec<usize>> = max_cones
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c
                    .iter()
                    .map(|&k| {
                        if k >= rays.len() {
                            Err(Error::InvalidInput(format!(
                                "cone ray index {k} out of range"
                            )))
                        } else {
                            Ok(position[k])
                        }
                    })
                    .collect::<Result<_>>()?;
                v.sort_unstable();
                v.dedup();
                Ok(v)
            })
            .collect::<Result<_>>()?;
        cones.sort();
        let weight = match ample_weight {
            Some(w) => {
                if w.len() != rays.len() {
                    return Err(Error::DimensionMismatch {
                        expected: rays.len(),
                        got: w.len(),
                    });
                }
                Some(order.iter().map(|&k| w[k].clone()).collect())
            }
            None => None,
        };
        Ok(Self {
            name: name.to_string(),
            dim,
            rays: order.iter().map(|&k| rays[k].clone()).collect(),
            block_sizes: blocks.iter().map(Vec::len).collect(),
            max_cones: cones,
            input_index: order,
            ample_weight: weight,
        })
    }

    /// Number of nef-partition blocks r.
    pub fn r(&self) -> usize {
        self.block_sizes.len()
    }

    /// Number of rays p.
    pub fn p(&self) -> usize {
        self.rays.len()
    }

    /// |J| = p + r.
    pub fn j_len(&self) -> usize {
        self.p() + self.r()
    }

    pub fn block_of(&self, ray: usize) -> usize {
        let mut acc = 0;
        for (i, &n) in self.block_sizes.iter().enumerate() {
            acc += n;
            if ray < acc {
                return i;
            }
        }
        panic!("ray {ray} out of range")
    }

    /// J-position of the ray `ray`.
    pub fn j_of_ray(&self, ray: usize) -> usize {
        ray + self.block_of(ray) + 1
    }

    /// J-position of `(i,0)` for 0-based block `i`.
    pub fn j_of_block(&self, block: usize) -> usize {
        self.block_sizes[..block].iter().sum::<usize>() + block
    }

    /// For each J-position: `Some(ray)` or `None` for an `(i,0)` slot.
    pub fn j_rays(&self) -> Vec<Option<usize>> {
        let mut out = Vec::with_capacity(self.j_len());
        let mut ray = 0;
        for &n in &self.block_sizes {
            out.push(None);
            for _ in 0..n {
                out.push(Some(ray));
                ray += 1;
            }
        }
        out
    }

    /// Block of every J-position.
    pub fn j_blocks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.j_len());
        for (i, &n) in self.block_sizes.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, n + 1));
        }
        out
    }

    /// Labels `(i,j)` (1-based block, 0..n_i) of the J-positions.
    pub fn j_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.j_len());
        for (i, &n) in self.block_sizes.iter().enumerate() {
            for j in 0..=n {
                out.push((i + 1, j));
            }
        }
        out
    }

    pub fn j_labels(&self) -> Vec<String> {
        self.j_pairs()
            .into_iter()
            .map(|(i, j)| pair_label("x", i, j))
            .collect()
    }

    /// Cohomology generator labels `a_{i,j}` for the rays.
    pub fn ray_labels(&self) -> Vec<String> {
        self.j_pairs()
            .into_iter()
            .filter(|&(_, j)| j > 0)
            .map(|(i, j)| pair_label("a", i, j))
            .collect()
    }

    /// Lifts a vector over rays to J (zero at the `(i,0)` slots).
    pub fn lift_to_j<T: Clone + Zero>(&self, v: &[T]) -> Vec<T> {
        self.j_rays()
            .into_iter()
            .map(|s| s.map_or_else(T::zero, |k| v[k].clone()))
            .collect()
    }

    /// Restricts a J-vector to the rays.
    pub fn restrict_to_i<T: Clone>(&self, v: &[T]) -> Vec<T> {
        self.j_rays()
            .into_iter()
            .zip(v)
            .filter(|(s, _)| s.is_some())
            .map(|(_, x)| x.clone())
            .collect()
    }

    pub fn is_face(&self, rays: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| rays.iter().all(|r| c.contains(r)))
    }

    pub fn ray_matrix(&self, cone: &[usize]) -> Vec<Vec<Int>> {
        cone.iter()
            .map(|&k| self.rays[k].iter().map(|&x| int(x)).collect())
            .collect()
    }

    /// Coefficients of `v` in terms of the rays of a maximal cone.
    pub fn cone_coordinates(&self, cone: &[usize], v: &[Rat]) -> Option<Vec<Rat>> {
        let basis: Vec<Vec<Rat>> = cone
            .iter()
            .map(|&k| self.rays[k].iter().map(|&x| rat(x, 1)).collect())
            .collect();
        linalg::coordinates_in_span(&basis, v)
    }

    /// The smallest cone containing `v`: its rays and the (positive) coefficients.
    pub fn locate(&self, v: &[Rat]) -> Option<Vec<(usize, Rat)>> {
        for cone in &self.max_cones {
            if let Some(c) = self.cone_coordinates(cone, v) {
                if c.iter().all(|x| !x.is_negative()) {
                    return Some(
                        cone.iter()
                            .zip(c)
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(&k, x)| (k, x))
                            .collect(),
                    );
                }
            }
        }
        None
    }
}

pub fn pair_label(prefix: &str, i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{prefix}{i}{j}")
    } else {
        format!("{prefix}{i}_{j}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub primitive: bool,
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    pub partition_exact: bool,
    pub walls_checked: usize,
    pub directions_sampled: usize,
}

const SAMPLE_SEED: u64 = 0x6b7a_6672_6163;
const SAMPLES: usize = 64;

/// Checks primitivity, smoothness, completeness and the block partition.
pub fn validate_fan(f: &FanData) -> Result<ValidationReport> {
    let n = f.dim;
    for (k, r) in f.rays.iter().enumerate() {
        let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::RayNotPrimitive {
                ray: f.input_index[k],
                coords: r.clone(),
            });
        }
    }
    let used: BTreeSet<usize> = f.max_cones.iter().flatten().copied().collect();
    if let Some(k) = (0..f.p()).find(|k| !used.contains(k)) {
        return Err(Error::NotComplete(format!(
            "ray {} is not a ray of any maximal cone",
            f.input_index[k]
        )));
    }
    for cone in &f.max_cones {
        let input: Vec<usize> = cone.iter().map(|&k| f.input_index[k]).collect();
        if cone.len() != n {
            return Err(Error::NotSmooth {
                cone: input,
                det: format!("cone has {} rays, expected {n}", cone.len()),
            });
        }
        let det = linalg::det_int_rows(&f.ray_matrix(cone));
        if det.abs() != int(1) {
            return Err(Error::NotSmooth {
                cone: input,
                det: det.abs().to_string(),
            });
        }
    }

    // every wall must be shared by exactly two cones lying on opposite sides
    let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in f.max_cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let wall: Vec<usize> = cone
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != skip)
                .map(|(_, &k)| k)
                .collect();
            walls.entry(wall).or_default().push(ci);
        }
    }
    for (wall, cones) in &walls {
        let input: Vec<usize> = wall.iter().map(|&k| f.input_index[k]).collect();
        if cones.len() != 2 {
            return Err(Error::NotComplete(format!(
                "wall spanned by rays {input:?} lies in {} maximal cone(s), expected 2",
                cones.len()
            )));
        }
        let rows: Vec<Vec<Rat>> = wall
            .iter()
            .map(|&k| f.rays[k].iter().map(|&x| rat(x, 1)).collect())
            .collect();
        let normal = if rows.is_empty() {
            vec![rat(1, 1)]
        } else {
            linalg::nullspace(&rows, n).remove(0)
        };
        let side = |ci: usize| -> Rat {
            let other = f.max_cones[ci].iter().find(|k| !wall.contains(k)).unwrap();
            let v: Vec<Rat> = f.rays[*other].iter().map(|&x| rat(x, 1)).collect();
            linalg::dot_rat(&normal, &v)
        };
        let (s0, s1) = (side(cones[0]), side(cones[1]));
        if !(s0.is_positive() && s1.is_negative() || s0.is_negative() && s1.is_positive()) {
            return Err(Error::NotComplete(format!(
                "cones meeting along rays {input:?} lie on the same side of the wall"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..SAMPLES {
        let dir: Vec<i64> = (0..n).map(|_| rng.random_range(-997..=997)).collect();
        if dir.iter().all(|&x| x == 0) {
            continue;
        }
        let v: Vec<Rat> = dir.iter().map(|&x| rat(x, 1)).collect();
        let mut containing = Vec::new();
        for cone in &f.max_cones {
            let c = f.cone_coordinates(cone, &v).expect("smooth cone spans");
            if c.iter().all(|x| !x.is_negative()) {
                let interior = c.iter().all(|x| x.is_positive());
                containing.push((cone.clone(), interior));
            }
        }
        if containing.is_empty() {
            return Err(Error::NotComplete(format!(
                "direction {dir:?} lies in no maximal cone"
            )));
        }
        if containing.iter().filter(|(_, int)| *int).count() > 1 {
            let cones: Vec<Vec<usize>> = containing
                .iter()
                .map(|(c, _)| c.iter().map(|&k| f.input_index[k]).collect())
                .collect();
            return Err(Error::NotComplete(format!(
                "direction {dir:?} lies in the interior of several cones {cones:?}"
            )));
        }
    }

    Ok(ValidationReport {
        primitive: true,
        simplicial: true,
        smooth: true,
        complete: true,
        partition_exact: f.block_sizes.iter().sum::<usize>() == f.p(),
        walls_checked: walls.len(),
        directions_sampled: SAMPLES,
    })
}

/// Pretty form of a rational coefficient list.
pub fn fmt_rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_fans_validate() {
        for f in corpus::all() {
            let rep = validate_fan(&f).unwrap();
            assert!(rep.complete && rep.smooth, "{}", f.name);
        }
    }

    #[test]
    fn non_smooth_cone_is_rejected() {
        let f = FanData::new(
            "bad",
            2,
            &[vec![1, 0], vec![1, 2], vec![-1, -1]],
            &[vec![0, 1], vec![1, 2], vec![2, 0]],
            &[vec![0, 1, 2]],
            None,
        )
        .unwrap();
        assert!(matches!(validate_fan(&f), Err(Error::NotSmooth { .. })));
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = FanData::new(
            "p2-minus",
            2,
            &[vec![1, 0], vec![0, 1], vec![-1, -1]],
            &[vec![0, 1], vec![1, 2]],
            &[vec![0, 1, 2]],
            None,
        )
        .unwrap();
        assert!(matches!(validate_fan(&f), Err(Error::NotComplete(_))));
    }

    #[test]
    fn non_primitive_ray_is_named() {
        let f = FanData::new(
            "p1-bad",
            1,
            &[vec![2], vec![-1]],
            &[vec![0], vec![1]],
            &[vec![0, 1]],
            None,
        )
        .unwrap();
        assert_eq!(
            validate_fan(&f),
            Err(Error::RayNotPrimitive {
                ray: 0,
                coords: vec![2]
            })
        );
    }

    #[test]
    fn block_reordering() {
        let f = FanData::new(
            "p1xp1",
            2,
            &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            &[vec![0, 2], vec![1, 3]],
            None,
        )
        .unwrap();
        assert_eq!(
            f.rays,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]
        );
        assert_eq!(f.input_index, vec![0, 2, 1, 3]);
        assert_eq!(f.j_of_ray(2), 4);
        assert_eq!(f.j_of_block(1), 3);
        assert_eq!(f.j_labels(), vec!["x10", "x11", "x12", "x20", "x21", "x22"]);
    }
}
