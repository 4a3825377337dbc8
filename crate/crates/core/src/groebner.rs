//! Gröbner bases of the toric ideal I_A by Buchberger's algorithm
//! specialized to binomials.
//!
//! The ideal is homogeneous for total degree (every point of A has block
//! coordinates summing to one), so a weight followed by a lexicographic
//! tie-break is a term order on each graded piece regardless of signs.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkz::GkzSystem;
use crate::linalg::{fmt_rat, rat, LatticeVector, Rat};
use crate::toric::{self, ConeDescription};

pub const ITERATION_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub enum TermOrder {
    /// Weight, then lexicographic in J-order.
    Weight(Vec<Rat>),
    /// Graded reverse lexicographic with the given variable smallest.
    GrevlexLast(usize),
}

impl TermOrder {
    pub fn cmp(&self, a: &[i64], b: &[i64]) -> Ordering {
        match self {
            TermOrder::Weight(w) => {
                let wa: Rat = a.iter().zip(w).map(|(&x, y)| rat(x, 1) * y).sum();
                let wb: Rat = b.iter().zip(w).map(|(&x, y)| rat(x, 1) * y).sum();
                wa.cmp(&wb).then_with(|| a.cmp(b))
            }
            TermOrder::GrevlexLast(last) => {
                let da: i64 = a.iter().sum();
                let db: i64 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    let order =
                        std::iter::once(*last).chain((0..a.len()).rev().filter(|k| k != last));
                    for k in order {
                        match a[k].cmp(&b[k]) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// `y^lead - y^tail` with `lead > tail`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    pub lead: Vec<i64>,
    pub tail: Vec<i64>,
}

impl Binomial {
    pub fn new(a: Vec<i64>, b: Vec<i64>, order: &TermOrder) -> Option<Self> {
        match order.cmp(&a, &b) {
            Ordering::Greater => Some(Self { lead: a, tail: b }),
            Ordering::Less => Some(Self { lead: b, tail: a }),
            Ordering::Equal => None,
        }
    }

    pub fn from_relation(l: &LatticeVector, order: &TermOrder) -> Option<Self> {
        let v = l.to_i64();
        let plus = v.iter().map(|&x| x.max(0)).collect();
        let minus = v.iter().map(|&x| (-x).max(0)).collect();
        Self::new(plus, minus, order)
    }

    pub fn difference(&self) -> Vec<i64> {
        self.lead
            .iter()
            .zip(&self.tail)
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        format!(
            "{} - {}",
            monomial(&self.lead, names),
            monomial(&self.tail, names)
        )
    }
}

pub fn monomial(e: &[i64], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(&x, _)| x > 0)
        .map(|(&x, n)| {
            if x == 1 {
                n.clone()
            } else {
                format!("{n}^{x}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Normal form of a monomial: rewrite `lead -> tail` while possible.
pub fn normal_form(m: &[i64], basis: &[Binomial]) -> Vec<i64> {
    let mut m = m.to_vec();
    while let Some(g) = basis.iter().find(|g| divides(&g.lead, &m)) {
        for ((x, t), l) in m.iter_mut().zip(&g.tail).zip(&g.lead) {
            *x += t - l;
        }
    }
    m
}

fn reduce(a: &[i64], b: &[i64], basis: &[Binomial], order: &TermOrder) -> Option<Binomial> {
    Binomial::new(normal_form(a, basis), normal_form(b, basis), order)
}

fn s_pair(g: &Binomial, h: &Binomial) -> Option<(Vec<i64>, Vec<i64>)> {
    if g.lead.iter().zip(&h.lead).all(|(a, b)| *a == 0 || *b == 0) {
        // coprime leading terms reduce to zero
        return None;
    }
    let lcm: Vec<i64> = g.lead.iter().zip(&h.lead).map(|(a, b)| *a.max(b)).collect();
    let a = lcm
        .iter()
        .zip(&g.lead)
        .zip(&g.tail)
        .map(|((m, u), v)| m - u + v)
        .collect();
    let b = lcm
        .iter()
        .zip(&h.lead)
        .zip(&h.tail)
        .map(|((m, u), v)| m - u + v)
        .collect();
    Some((a, b))
}

/// A Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Binomial], order: &TermOrder) -> Result<Vec<Binomial>> {
    let mut basis: Vec<Binomial> = Vec::new();
    for g in gens {
        if let Some(b) = Binomial::new(g.lead.clone(), g.tail.clone(), order) {
            basis.push(b);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (0..i).map(move |j| (j, i)))
        .collect();
    let mut steps = 0;
    while let Some((i, j)) = pairs.pop() {
        steps += 1;
        if steps > ITERATION_CAP {
            return Err(Error::NonTermination(ITERATION_CAP));
        }
        let Some((a, b)) = s_pair(&basis[i], &basis[j]) else {
            continue;
        };
        if let Some(r) = reduce(&a, &b, &basis, order) {
            let k = basis.len();
            basis.push(r);
            pairs.extend((0..k).map(|t| (t, k)));
        }
    }
    Ok(basis)
}

/// The reduced Gröbner basis, sorted.
pub fn reduce_basis(basis: &[Binomial], order: &TermOrder) -> Vec<Binomial> {
    let mut minimal: Vec<Binomial> = Vec::new();
    let mut sorted = basis.to_vec();
    sorted.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    sorted.dedup_by(|a, b| a.lead == b.lead);
    for g in &sorted {
        if !minimal.iter().any(|h| divides(&h.lead, &g.lead)) {
            minimal.retain(|h| !divides(&g.lead, &h.lead));
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<Binomial> = minimal
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let others: Vec<Binomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, h)| h.clone())
                .collect();
            Binomial {
                lead: g.lead.clone(),
                tail: normal_form(&g.tail, &others),
            }
        })
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialIdeal {
    pub generators: Vec<Binomial>,
    #[serde(serialize_with = "ser_weight")]
    pub weight: Vec<Rat>,
}

fn ser_weight<S: serde::Serializer>(w: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.iter().map(fmt_rat))
}

impl BinomialIdeal {
    /// Sorted leading monomials.
    pub fn leading_terms(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.generators.iter().map(|g| g.lead.clone()).collect();
        out.sort();
        out
    }
}

/// Reduced Gröbner basis of I_A for the weight `omega` over J.
///
/// Starts from the lattice-basis ideal and saturates by one variable at a
/// time (reverse lexicographic order with that variable last, then divide
/// it out).
pub fn toric_groebner_basis(sys: &GkzSystem, omega: &[Rat]) -> Result<BinomialIdeal> {
    let nv = sys.j_len();
    let mut gens: Vec<Binomial> = Vec::new();
    for b in &sys.lattice.basis {
        gens.extend(Binomial::from_relation(b, &TermOrder::GrevlexLast(0)));
    }
    for v in 0..nv {
        let order = TermOrder::GrevlexLast(v);
        let gb = reduce_basis(&buchberger(&gens, &order)?, &order);
        gens = gb
            .into_iter()
            .filter_map(|mut g| {
                let k = g.lead[v].min(g.tail[v]);
                g.lead[v] -= k;
                g.tail[v] -= k;
                Binomial::new(g.lead, g.tail, &order)
            })
            .collect();
    }
    let order = TermOrder::Weight(omega.to_vec());
    let generators = reduce_basis(&buchberger(&gens, &order)?, &order);
    for g in &generators {
        assert!(
            sys.in_kernel(&LatticeVector::from_i64(&g.difference())),
            "generator exponent difference lies in L_ext"
        );
    }
    Ok(BinomialIdeal {
        generators,
        weight: omega.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroebnerCorrespondence {
    /// Binomials of the primitive relations, ordered by the weight.
    pub primitive_binomials: Vec<Binomial>,
    /// Leading side is the collection side for every relation.
    pub leading_is_collection: bool,
    /// Every S-pair reduces to zero modulo the primitive binomials.
    pub s_pairs_reduce: bool,
    /// The primitive binomials are exactly the reduced basis of I_A.
    pub equals_reduced_basis: bool,
    /// Leading-term ideal equals the Stanley-Reisner ideal.
    pub lt_is_stanley_reisner: bool,
}

impl GroebnerCorrespondence {
    pub fn holds(&self) -> bool {
        self.leading_is_collection
            && self.s_pairs_reduce
            && self.equals_reduced_basis
            && self.lt_is_stanley_reisner
    }
}

pub fn minimal_gb_is_primitive_collections(
    sys: &GkzSystem,
    omega: &[Rat],
) -> Result<GroebnerCorrespondence> {
    let order = TermOrder::Weight(omega.to_vec());
    let f = &sys.fan;
    let mut prims = Vec::new();
    let mut leading_is_collection = true;
    for pc in &sys.collections {
        let (plus, minus) = crate::linalg::split_positive_negative(&pc.l_ext);
        let b = Binomial::new(plus.to_i64(), minus.to_i64(), &order).ok_or_else(|| {
            Error::WeightNotAmple("weight does not separate a primitive binomial".into())
        })?;
        leading_is_collection &= b.lead == plus.to_i64();
        prims.push(b);
    }
    prims.sort();
    let mut s_pairs_reduce = true;
    for (i, g) in prims.iter().enumerate() {
        for h in &prims[..i] {
            if let Some((a, b)) = s_pair(g, h) {
                s_pairs_reduce &= reduce(&a, &b, &prims, &order).is_none();
            }
        }
    }
    let gb = toric_groebner_basis(sys, omega)?;
    let sr: BTreeSet<Vec<i64>> = toric::stanley_reisner_ideal(f)?
        .iter()
        .map(|rays| {
            let mut e = vec![0; sys.j_len()];
            for &k in rays {
                e[f.j_of_ray(k)] = 1;
            }
            e
        })
        .collect();
    let lts: BTreeSet<Vec<i64>> = gb.leading_terms().into_iter().collect();
    Ok(GroebnerCorrespondence {
        equals_reduced_basis: reduce_basis(&prims, &order) == gb.generators,
        primitive_binomials: prims,
        leading_is_collection,
        s_pairs_reduce,
        lt_is_stanley_reisner: lts == sr,
    })
}

/// Whether two weights have the same leading-term ideal.
pub fn lt_equivalent(sys: &GkzSystem, w1: &[Rat], w2: &[Rat]) -> Result<bool> {
    Ok(toric_groebner_basis(sys, w1)?.leading_terms()
        == toric_groebner_basis(sys, w2)?.leading_terms())
}

/// The Gröbner cone of the reduced basis for `omega`, in dual coordinates
/// of the L_ext basis.
pub fn groebner_cone(sys: &GkzSystem, omega: &[Rat]) -> Result<ConeDescription> {
    let gb = toric_groebner_basis(sys, omega)?;
    let rows: Vec<Vec<Rat>> = gb
        .generators
        .iter()
        .map(|g| {
            sys.lattice
                .coords_rat(&LatticeVector::from_i64(&g.difference()))
                .expect("difference lies in L_ext")
        })
        .collect();
    Ok(toric::cone_from_rows(&rows, sys.lattice.rank()))
}
