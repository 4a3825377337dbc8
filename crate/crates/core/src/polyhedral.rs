//! Small exact polyhedral routines: Fourier-Motzkin elimination, lattice
//! point enumeration in bounded polyhedra, strict feasibility and extreme
//! rays of pointed cones.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, int, rat_from_int, Int, Rat};

/// `a . x >= b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub a: Vec<Rat>,
    pub b: Rat,
}

impl Halfspace {
    pub fn new(a: Vec<Rat>, b: Rat) -> Self {
        Self { a, b }
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        linalg::dot_rat(&self.a, x) >= self.b
    }

    /// Scale so the first nonzero coefficient (or `b`) has absolute value 1.
    fn normalized(&self) -> Self {
        let lead = self
            .a
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(|| {
                if self.b.is_zero() {
                    Rat::one()
                } else {
                    self.b.abs()
                }
            });
        let s = lead.abs();
        Self {
            a: self.a.iter().map(|x| x / &s).collect(),
            b: &self.b / &s,
        }
    }
}

/// Default enumeration cap, overridable through `GKZFRAC_MAX_TERMS`.
pub fn max_terms() -> usize {
    std::env::var("GKZFRAC_MAX_TERMS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000)
}

/// Eliminates variable `var` (its coefficient becomes zero everywhere).
pub fn eliminate(system: &[Halfspace], var: usize) -> Vec<Halfspace> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = BTreeSet::new();
    for h in system {
        let c = &h.a[var];
        if c.is_positive() {
            pos.push(h);
        } else if c.is_negative() {
            neg.push(h);
        } else {
            out.insert(h.normalized());
        }
    }
    for p in &pos {
        for q in &neg {
            let cp = p.a[var].clone();
            let cq = -q.a[var].clone();
            let a: Vec<Rat> =
                p.a.iter()
                    .zip(&q.a)
                    .map(|(x, y)| x * &cq + y * &cp)
                    .collect();
            let b = &p.b * &cq + &q.b * &cp;
            out.insert(Halfspace::new(a, b).normalized());
        }
    }
    out.into_iter().collect()
}

/// Interval `[lo, hi]` for variable 0 implied by a system that only
/// involves variable 0. `None` when infeasible.
fn interval(system: &[Halfspace]) -> Option<(Option<Rat>, Option<Rat>)> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for h in system {
        let c = &h.a[0];
        if c.is_zero() {
            if h.b.is_positive() {
                return None;
            }
            continue;
        }
        let v = &h.b / c;
        if c.is_positive() {
            lo = Some(match lo {
                Some(l) if l >= v => l,
                _ => v,
            });
        } else {
            hi = Some(match hi {
                Some(u) if u <= v => u,
                _ => v,
            });
        }
    }
    Some((lo, hi))
}

/// Bounds on the first variable of the system (all others projected away).
pub fn first_variable_bounds(
    system: &[Halfspace],
    nvars: usize,
) -> Option<(Option<Rat>, Option<Rat>)> {
    let mut sys = system.to_vec();
    for v in (1..nvars).rev() {
        sys = eliminate(&sys, v);
    }
    interval(&sys)
}

fn substitute_first(system: &[Halfspace], value: &Rat) -> Vec<Halfspace> {
    system
        .iter()
        .map(|h| Halfspace::new(h.a[1..].to_vec(), &h.b - &h.a[0] * value))
        .collect()
}

/// All integer points of the bounded polyhedron `system`, in lexicographic
/// order. Fails with `Unbounded` when a coordinate has no finite bound and
/// with `TooManyTerms` past `cap` points.
pub fn enumerate_lattice_points(
    system: &[Halfspace],
    nvars: usize,
    cap: usize,
) -> Result<Vec<Vec<Int>>> {
    let mut out = Vec::new();
    if nvars == 0 {
        if system.iter().all(|h| !h.b.is_positive()) {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    let mut prefix = Vec::with_capacity(nvars);
    enumerate_rec(system, nvars, cap, &mut prefix, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    system: &[Halfspace],
    nvars: usize,
    cap: usize,
    prefix: &mut Vec<Int>,
    out: &mut Vec<Vec<Int>>,
) -> Result<()> {
    let Some((lo, hi)) = first_variable_bounds(system, nvars) else {
        return Ok(());
    };
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Unbounded);
    };
    let mut x = lo.ceil().to_integer();
    let end = hi.floor().to_integer();
    while x <= end {
        let xv = rat_from_int(&x);
        prefix.push(x.clone());
        if nvars == 1 {
            if system.iter().all(|h| &h.a[0] * &xv >= h.b) {
                if out.len() >= cap {
                    return Err(Error::TooManyTerms(cap));
                }
                out.push(prefix.clone());
            }
        } else {
            let sub = substitute_first(system, &xv);
            enumerate_rec(&sub, nvars - 1, cap, prefix, out)?;
        }
        prefix.pop();
        x += 1;
    }
    Ok(())
}

/// True iff `{y : rows . y >= 1}` is nonempty, i.e. the cone
/// `{y : rows . y >= 0}` has interior points where every row is positive.
pub fn strictly_feasible(rows: &[Vec<Rat>], nvars: usize) -> bool {
    let mut sys: Vec<Halfspace> = rows
        .iter()
        .map(|r| Halfspace::new(r.clone(), Rat::one()))
        .collect();
    for v in (0..nvars).rev() {
        sys = eliminate(&sys, v);
    }
    sys.iter().all(|h| !h.b.is_positive())
}

/// Extreme rays of the pointed cone `{y : rows . y >= 0}` as primitive
/// integer vectors, sorted. Returns `None` when the cone is not pointed.
pub fn cone_extreme_rays(rows: &[Vec<Rat>], nvars: usize) -> Option<Vec<Vec<Int>>> {
    if linalg::rank(rows) < nvars {
        return None;
    }
    let mut rays = BTreeSet::new();
    for subset in linalg::combinations(rows.len(), nvars - 1) {
        let sub: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let dirs: Vec<Vec<Rat>> = if sub.is_empty() {
            // only reachable for nvars == 1: the whole line
            vec![vec![Rat::one()]]
        } else {
            let null = linalg::nullspace(&sub, nvars);
            if null.len() != 1 {
                continue;
            }
            null
        };
        for d in dirs {
            for sign in [1i64, -1] {
                let v: Vec<Rat> = d.iter().map(|x| x * Rat::from_integer(int(sign))).collect();
                if rows.iter().all(|r| !linalg::dot_rat(r, &v).is_negative()) {
                    rays.insert(linalg::primitive_integer(&v));
                }
            }
        }
    }
    Some(rays.into_iter().collect())
}

pub fn to_rat_rows(rows: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(rat_from_int).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn h(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(a.iter().map(|&x| rat(x, 1)).collect(), rat(b, 1))
    }

    #[test]
    fn triangle_points() {
        // x >= 0, y >= 0, x + y <= 2
        let sys = vec![h(&[1, 0], 0), h(&[0, 1], 0), h(&[-1, -1], -2)];
        let pts = enumerate_lattice_points(&sys, 2, 100).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![int(0), int(0)]);
    }

    #[test]
    fn unbounded_is_reported() {
        let sys = vec![h(&[1, 0], 0), h(&[0, 1], 0)];
        assert_eq!(
            enumerate_lattice_points(&sys, 2, 100),
            Err(Error::Unbounded)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let sys = vec![h(&[1], 0), h(&[-1], -50)];
        assert_eq!(
            enumerate_lattice_points(&sys, 1, 10),
            Err(Error::TooManyTerms(10))
        );
    }

    #[test]
    fn quadrant_rays() {
        let rows = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
        let rays = cone_extreme_rays(&rows, 2).unwrap();
        assert_eq!(rays, vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert!(strictly_feasible(&rows, 2));
    }

    #[test]
    fn half_line_rays() {
        let rows = vec![vec![rat(3, 1)]];
        assert_eq!(cone_extreme_rays(&rows, 1).unwrap(), vec![vec![int(1)]]);
    }

    #[test]
    fn opposite_rows_have_no_interior() {
        let rows = vec![vec![rat(1, 1)], vec![rat(-1, 1)]];
        assert!(!strictly_feasible(&rows, 1));
    }
}
