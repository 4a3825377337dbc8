//! Truncated series with logarithms.
//!
//! A term is keyed by `(l, m)`: `l` is the exponent offset from the base
//! exponent `alpha` (a lattice vector over J) and `m` the multidegree of
//! `prod (log x_J)^{m_J}`. Truncation keeps `w . l <= order`.

pub mod bseries;
pub mod coefficients;
pub mod ops;
pub mod oracle;

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::cohomology::CohClass;
use crate::error::Result;
use crate::gkz::GkzSystem;
use crate::linalg::{fmt_rat, rat, rat_from_int, Int, LatticeVector, Rat};
use crate::par::Execution;
use crate::polyhedral::{self, Halfspace};
use crate::toric::{self, ConeDescription};

pub use bseries::{b_series, pair_with_dual, vanishing_check_outside_mori};
pub use coefficients::{
    binomial_sqrt_coefficients, gamma_series, normalized_period_series, period_coefficient_c,
};
pub use ops::{apply_operator, Applied, Operator};
pub use oracle::residue_oracle;

/// Coefficient domains: exact rationals or cohomology classes.
pub trait Coefficient: Clone + PartialEq + Send + Sync {
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, k: &Rat) -> Self;
    fn to_json(&self, labels: &[String]) -> Value;
}

impl Coefficient for Rat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, k: &Rat) -> Self {
        self * k
    }

    fn to_json(&self, _labels: &[String]) -> Value {
        Value::String(fmt_rat(self))
    }
}

impl Coefficient for CohClass {
    fn is_zero(&self) -> bool {
        CohClass::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn times(&self, k: &Rat) -> Self {
        self.scale(k)
    }

    fn to_json(&self, labels: &[String]) -> Value {
        let mut map = serde_json::Map::new();
        for (x, name) in self.0.iter().zip(labels) {
            if !Zero::is_zero(x) {
                map.insert(name.clone(), Value::String(fmt_rat(x)));
            }
        }
        Value::Object(map)
    }
}

pub type Key = (Vec<i64>, Vec<u32>);

#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<C> {
    pub alpha: Vec<Rat>,
    pub weight: Vec<Rat>,
    pub order: i64,
    pub terms: BTreeMap<Key, C>,
}

impl<C: Coefficient> LogSeries<C> {
    pub fn new(alpha: Vec<Rat>, weight: Vec<Rat>, order: i64) -> Self {
        Self {
            alpha,
            weight,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn empty_like<D: Coefficient>(&self) -> LogSeries<D> {
        LogSeries::new(self.alpha.clone(), self.weight.clone(), self.order)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient at `key`, dropping the term if it cancels.
    pub fn accumulate(&mut self, key: Key, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            Some(old) => {
                let v = old.plus(&c);
                if !v.is_zero() {
                    self.terms.insert(key, v);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn get(&self, l: &[i64], m: &[u32]) -> Option<&C> {
        self.terms.get(&(l.to_vec(), m.to_vec()))
    }

    pub fn scaled(&self, k: &Rat) -> Self {
        let mut out = self.empty_like();
        for (key, c) in &self.terms {
            out.accumulate(key.clone(), c.times(k));
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.accumulate(key.clone(), c.times(&rat(-1, 1)));
        }
        out
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.keys().all(|(_, m)| m.iter().all(|&e| e == 0))
    }

    pub fn max_log_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, m)| m.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Weighted degree `w . l` of an exponent offset.
    pub fn degree_of(&self, l: &[i64]) -> Rat {
        l.iter()
            .zip(&self.weight)
            .map(|(&a, w)| rat(a, 1) * w)
            .sum()
    }

    pub fn to_json(&self, coeff_labels: &[String]) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((l, m), c)| json!({"l": l, "logdeg": m, "coeff": c.to_json(coeff_labels)}))
            .collect();
        json!({
            "alpha": self.alpha.iter().map(fmt_rat).collect::<Vec<_>>(),
            "weight": self.weight.iter().map(fmt_rat).collect::<Vec<_>>(),
            "order": self.order,
            "terms": terms,
        })
    }
}

/// Truncation parameters shared by all series constructions.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesConfig {
    /// Ample weight over J.
    pub weight: Vec<Rat>,
    pub order: i64,
    pub exec: Execution,
}

impl SeriesConfig {
    pub fn new(weight: Vec<Rat>, order: i64) -> Self {
        Self {
            weight,
            order,
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}

/// Where lattice points are enumerated.
#[derive(Clone, Debug)]
pub enum Region<'a> {
    /// `l_{i,j} >= 0` for all j >= 1.
    Effective,
    /// NE(X), described through the Kähler cone rays.
    Mori(&'a ConeDescription),
}

/// Lattice points of L_ext in `region` with `w . l <= order`.
pub fn enumerate_region(
    sys: &GkzSystem,
    cfg: &SeriesConfig,
    region: Region<'_>,
) -> Result<Vec<LatticeVector>> {
    toric::check_ample(&sys.fan, &cfg.weight)?;
    let k = sys.lattice.rank();
    let basis = &sys.lattice.basis;
    let mut system = Vec::new();
    match region {
        Region::Effective => {
            for (j, ray) in sys.fan.j_rays().into_iter().enumerate() {
                if ray.is_some() {
                    let a: Vec<Rat> = basis.iter().map(|b| rat_from_int(&b.0[j])).collect();
                    system.push(Halfspace::new(a, Rat::zero()));
                }
            }
        }
        Region::Mori(kahler) => {
            for y in &kahler.rays {
                system.push(Halfspace::new(
                    y.iter().map(rat_from_int).collect(),
                    Rat::zero(),
                ));
            }
        }
    }
    let y = sys.lattice.dual_coords(&cfg.weight);
    system.push(Halfspace::new(
        y.iter().map(|v| -v).collect(),
        -rat(cfg.order, 1),
    ));
    let lambdas = polyhedral::enumerate_lattice_points(&system, k, polyhedral::max_terms())?;
    let mut points: Vec<LatticeVector> = lambdas.iter().map(|lam| sys.lattice.point(lam)).collect();
    points.sort_by(|a, b| {
        let da = toric::weight_degree(&cfg.weight, a);
        let db = toric::weight_degree(&cfg.weight, b);
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    Ok(points)
}

pub fn key_of(l: &LatticeVector, j_len: usize) -> Key {
    (l.to_i64(), vec![0; j_len])
}

/// Whether `l` is entrywise non-negative off the `(i,0)` slots.
pub fn in_effective_region(sys: &GkzSystem, l: &LatticeVector) -> bool {
    sys.fan
        .j_rays()
        .iter()
        .zip(&l.0)
        .all(|(ray, x)| ray.is_none() || !x.is_negative())
}

/// The sign `(-1)^{sum_i l_{i,0}}`.
pub fn phi_sign(sys: &GkzSystem, l: &[i64]) -> Rat {
    let s: i64 = (0..sys.fan.r()).map(|i| l[sys.fan.j_of_block(i)]).sum();
    if s.rem_euclid(2) == 0 {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

/// Rewrites the normalized period `sum C_l x^l` through the quotient-torus
/// sign map and the base exponent: `x^alpha sum (-1)^{sum l_{i,0}} C_l x^l`.
pub fn apply_phi(sys: &GkzSystem, s: &LogSeries<Rat>, alpha: &[Rat]) -> LogSeries<Rat> {
    let mut out = LogSeries::new(alpha.to_vec(), s.weight.clone(), s.order);
    for ((l, m), c) in &s.terms {
        out.accumulate((l.clone(), m.clone()), c * phi_sign(sys, l));
    }
    out
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}
