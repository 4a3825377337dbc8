//! The rational cohomology ring of a smooth complete toric variety,
//! presented as Q[a_k] modulo Stanley-Reisner monomials and linear forms.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::fan::FanData;
use crate::linalg::{self, rat, Rat};
use crate::toric;

/// Exponent vector over the rays.
pub type Monomial = Vec<u32>;

/// A class as coordinates over the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohClass(pub Vec<Rat>);

impl CohClass {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rat::zero(); dim])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyRing {
    /// Number of generators (rays).
    pub nvars: usize,
    /// Complex dimension n.
    pub top_degree: usize,
    pub basis: Vec<Monomial>,
    pub degrees: Vec<usize>,
    pub labels: Vec<String>,
    pub stanley_reisner: Vec<Vec<usize>>,
    /// Normal forms of every monomial of degree <= n.
    normal_forms: BTreeMap<Monomial, CohClass>,
    table: Vec<Vec<CohClass>>,
    generators: Vec<CohClass>,
    /// Integral of the top basis element.
    top_integral: Rat,
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(var: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if var + 1 == cur.len() {
            cur[var] = left;
            out.push(cur.clone());
            cur[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(var + 1, left - e, cur, out);
        }
        cur[var] = 0;
    }
    if nvars == 0 {
        return if degree == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

fn support(m: &Monomial) -> Vec<usize> {
    m.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, _)| k)
        .collect()
}

fn is_squarefree(m: &Monomial) -> bool {
    m.iter().all(|&e| e <= 1)
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn monomial_label(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[k].clone()),
            _ => parts.push(format!("{}^{e}", names[k])),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl CohomologyRing {
    pub fn new(f: &FanData) -> Result<Self> {
        let p = f.p();
        let n = f.dim;
        let sr = toric::stanley_reisner_ideal(f)?;
        let names = f.ray_labels();

        // per degree: (basis monomials, normal forms in local coordinates)
        let mut per_degree: Vec<(Vec<Monomial>, BTreeMap<Monomial, Vec<Rat>>)> = Vec::new();
        for k in 0..=(n + 1) as u32 {
            let monos = monomials_of_degree(p, k);
            let mut cols: Vec<Monomial> = monos
                .iter()
                .filter(|m| !is_squarefree(m))
                .cloned()
                .collect();
            let mut sq: Vec<Monomial> =
                monos.iter().filter(|m| is_squarefree(m)).cloned().collect();
            sq.sort_by_key(support);
            cols.extend(sq.into_iter().rev());
            let index: BTreeMap<&Monomial, usize> =
                cols.iter().enumerate().map(|(c, m)| (m, c)).collect();

            let mut rows: Vec<Vec<Rat>> = Vec::new();
            for set in &sr {
                if set.len() as u32 > k {
                    continue;
                }
                let mut base = vec![0; p];
                for &v in set {
                    base[v] = 1;
                }
                for m in monomials_of_degree(p, k - set.len() as u32) {
                    let mut row = vec![Rat::zero(); cols.len()];
                    row[index[&mul_monomials(&base, &m)]] = Rat::one();
                    rows.push(row);
                }
            }
            if k >= 1 {
                for s in 0..n {
                    for m in monomials_of_degree(p, k - 1) {
                        let mut row = vec![Rat::zero(); cols.len()];
                        for (v, ray) in f.rays.iter().enumerate() {
                            if ray[s] == 0 {
                                continue;
                            }
                            let mut mm = m.clone();
                            mm[v] += 1;
                            row[index[&mm]] += rat(ray[s], 1);
                        }
                        rows.push(row);
                    }
                }
            }
            let pivots = if rows.is_empty() {
                Vec::new()
            } else {
                linalg::rref(&mut rows)
            };
            let free: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
            assert!(
                free.iter().all(|&c| is_squarefree(&cols[c])),
                "quotient in degree {k} is spanned by square-free monomials"
            );
            // basis in ascending lex order
            let mut basis_cols = free.clone();
            basis_cols.sort_by_key(|&c| support(&cols[c]));
            let local: BTreeMap<usize, usize> = basis_cols
                .iter()
                .enumerate()
                .map(|(t, &c)| (c, t))
                .collect();
            let mut forms = BTreeMap::new();
            for (c, m) in cols.iter().enumerate() {
                let mut v = vec![Rat::zero(); basis_cols.len()];
                if let Some(&t) = local.get(&c) {
                    v[t] = Rat::one();
                } else {
                    let r = pivots.iter().position(|&pc| pc == c).expect("pivot column");
                    for (&fc, &t) in &local {
                        v[t] = -rows[r][fc].clone();
                    }
                }
                forms.insert(m.clone(), v);
            }
            per_degree.push((basis_cols.iter().map(|&c| cols[c].clone()).collect(), forms));
        }
        assert!(per_degree[n + 1].0.is_empty(), "degree n+1 vanishes");

        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        let mut offsets = Vec::new();
        for (k, (b, _)) in per_degree.iter().enumerate().take(n + 1) {
            offsets.push(basis.len());
            for m in b {
                basis.push(m.clone());
                degrees.push(k);
            }
        }
        let dim = basis.len();
        let mut normal_forms = BTreeMap::new();
        for (k, (_, forms)) in per_degree.iter().enumerate().take(n + 1) {
            for (m, local) in forms {
                let mut v = vec![Rat::zero(); dim];
                for (t, x) in local.iter().enumerate() {
                    v[offsets[k] + t] = x.clone();
                }
                normal_forms.insert(m.clone(), CohClass(v));
            }
        }
        let table: Vec<Vec<CohClass>> = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let m = mul_monomials(a, b);
                        normal_forms
                            .get(&m)
                            .cloned()
                            .unwrap_or_else(|| CohClass::zero(dim))
                    })
                    .collect()
            })
            .collect();
        let generators: Vec<CohClass> = (0..p)
            .map(|k| {
                let mut m = vec![0; p];
                m[k] = 1;
                normal_forms[&m].clone()
            })
            .collect();

        assert_eq!(per_degree[n].0.len(), 1, "top degree is one-dimensional");
        let top = dim - 1;
        let mut top_integral: Option<Rat> = None;
        for cone in &f.max_cones {
            let mut m = vec![0; p];
            for &k in cone {
                m[k] = 1;
            }
            let c = normal_forms[&m].0[top].clone();
            assert!(!c.is_zero(), "cone class is nonzero");
            let v = c.recip();
            match &top_integral {
                None => top_integral = Some(v),
                Some(t) => assert_eq!(t, &v, "point class is independent of the cone"),
            }
        }

        let labels = basis.iter().map(|m| monomial_label(m, &names)).collect();
        Ok(Self {
            nvars: p,
            top_degree: n,
            basis,
            degrees,
            labels,
            stanley_reisner: sr,
            normal_forms,
            table,
            generators,
            top_integral: top_integral.expect("at least one maximal cone"),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(&self) -> CohClass {
        CohClass::zero(self.dim())
    }

    pub fn one(&self) -> CohClass {
        self.normal_forms[&vec![0; self.nvars]].clone()
    }

    pub fn scalar(&self, q: &Rat) -> CohClass {
        self.one().scale(q)
    }

    /// Class D_k of the k-th ray.
    pub fn ray_class(&self, k: usize) -> &CohClass {
        &self.generators[k]
    }

    /// Class of a monomial in the generators.
    pub fn monomial_class(&self, m: &Monomial) -> CohClass {
        let deg: u32 = m.iter().sum();
        if deg as usize > self.top_degree {
            return self.zero();
        }
        self.normal_forms[m].clone()
    }

    pub fn mul(&self, a: &CohClass, b: &CohClass) -> CohClass {
        let dim = self.dim();
        let mut out = vec![Rat::zero(); dim];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, t) in out.iter_mut().zip(&self.table[i][j].0) {
                    if !t.is_zero() {
                        *o += &xy * t;
                    }
                }
            }
        }
        CohClass(out)
    }

    pub fn pow(&self, a: &CohClass, e: u32) -> CohClass {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    /// Inverse of `q + d` for a nilpotent class `d` and nonzero rational `q`.
    pub fn inverse_shifted(&self, d: &CohClass, q: &Rat) -> CohClass {
        assert!(!q.is_zero(), "shift must be nonzero");
        let mut out = self.zero();
        let mut power = self.one();
        let mut denom = q.clone();
        for k in 0..=self.top_degree {
            let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
            out = out.add(&power.scale(&(sign / &denom)));
            power = self.mul(&power, d);
            denom *= q;
        }
        out
    }

    /// Component of `a` in a given degree.
    pub fn degree_part(&self, a: &CohClass, degree: usize) -> CohClass {
        CohClass(
            a.0.iter()
                .zip(&self.degrees)
                .map(|(x, &d)| if d == degree { x.clone() } else { Rat::zero() })
                .collect(),
        )
    }

    /// Integral over X; the class of a point integrates to 1.
    pub fn integrate(&self, a: &CohClass) -> Rat {
        &a.0[self.dim() - 1] * &self.top_integral
    }

    /// The H^0 coordinate.
    pub fn constant_term(&self, a: &CohClass) -> Rat {
        a.0[0].clone()
    }

    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.top_degree + 1];
        for &d in &self.degrees {
            out[d] += 1;
        }
        out
    }

    pub fn summary(&self) -> RingSummary {
        RingSummary {
            dimension: self.dim(),
            betti: self.dims_by_degree(),
            basis: self.labels.clone(),
            stanley_reisner: self.stanley_reisner.clone(),
            top_integral: linalg::fmt_rat(&self.top_integral),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingSummary {
    pub dimension: usize,
    pub betti: Vec<usize>,
    pub basis: Vec<String>,
    pub stanley_reisner: Vec<Vec<usize>>,
    pub top_integral: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn p1_ring() {
        let ring = CohomologyRing::new(&corpus::p1()).unwrap();
        assert_eq!(ring.dim(), 2);
        assert_eq!(ring.labels, vec!["1", "a11"]);
        assert_eq!(ring.ray_class(0), ring.ray_class(1));
        let d = ring.ray_class(0);
        assert!(ring.mul(d, d).is_zero());
        assert_eq!(ring.integrate(d), rat(1, 1));
    }

    #[test]
    fn p2_ring() {
        let ring = CohomologyRing::new(&corpus::p2()).unwrap();
        assert_eq!(ring.dims_by_degree(), vec![1, 1, 1]);
        let h = ring.ray_class(0).clone();
        let h2 = ring.mul(&h, &h);
        assert!(!h2.is_zero());
        assert!(ring.mul(&h2, &h).is_zero());
        assert_eq!(ring.integrate(&h2), rat(1, 1));
    }

    #[test]
    fn p1xp1_ring() {
        let ring = CohomologyRing::new(&corpus::p1xp1_r2()).unwrap();
        assert_eq!(ring.dims_by_degree(), vec![1, 2, 1]);
        let h1 = ring.ray_class(0).clone();
        let h2 = ring.ray_class(2).clone();
        assert!(ring.mul(&h1, &h1).is_zero());
        assert!(ring.mul(&h2, &h2).is_zero());
        assert_eq!(ring.integrate(&ring.mul(&h1, &h2)), rat(1, 1));
    }

    #[test]
    fn f1_ring_intersections() {
        let f = corpus::f1();
        let ring = CohomologyRing::new(&f).unwrap();
        assert_eq!(ring.dim(), 4);
        // ray (0,1) is the exceptional curve
        let e = ring.ray_class(1).clone();
        assert_eq!(ring.integrate(&ring.mul(&e, &e)), rat(-1, 1));
        let fib = ring.ray_class(0).clone();
        assert_eq!(ring.integrate(&ring.mul(&fib, &fib)), rat(0, 1));
        assert_eq!(ring.integrate(&ring.mul(&fib, &e)), rat(1, 1));
        let s = ring.ray_class(3).clone();
        assert_eq!(ring.integrate(&ring.mul(&s, &s)), rat(1, 1));
    }

    #[test]
    fn nilpotent_inverse() {
        let ring = CohomologyRing::new(&corpus::p2()).unwrap();
        let h = ring.ray_class(0).clone();
        let q = rat(3, 1);
        let inv = ring.inverse_shifted(&h, &q);
        let prod = ring.mul(&inv, &ring.scalar(&q).add(&h));
        assert_eq!(prod, ring.one());
    }
}
