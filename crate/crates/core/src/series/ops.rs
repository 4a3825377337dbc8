//! Differential operators acting on truncated log-series.

use std::collections::BTreeSet;

use super::{Coefficient, Key, LogSeries};
use crate::gkz::{BoxOperator, EulerOperator};
use crate::linalg::{rat, Rat};

#[derive(Clone, Debug)]
pub enum Operator {
    Box(BoxOperator),
    Euler(EulerOperator),
}

/// Result of applying an operator to a truncated series.
///
/// `reliable` holds the coefficients whose value does not depend on terms
/// beyond the truncation; for a solution it must be empty. `checked` counts
/// the reliable keys that were produced before cancellation.
#[derive(Clone, Debug)]
pub struct Applied<C> {
    pub reliable: LogSeries<C>,
    pub checked: usize,
    pub unreliable: usize,
}

impl<C: Coefficient> Applied<C> {
    pub fn annihilated(&self) -> bool {
        self.reliable.is_empty()
    }
}

/// `d/dx_J` of a single term `c x^{alpha + l} prod log(x)^m`.
fn derivative<C: Coefficient>(alpha: &[Rat], j: usize, terms: Vec<(Key, C)>) -> Vec<(Key, C)> {
    let mut out = Vec::with_capacity(terms.len() * 2);
    for ((l, m), c) in terms {
        let mut l2 = l.clone();
        l2[j] -= 1;
        let e = &alpha[j] + rat(l[j], 1);
        if !num::Zero::is_zero(&e) {
            out.push(((l2.clone(), m.clone()), c.times(&e)));
        }
        if m[j] > 0 {
            let mut m2 = m.clone();
            m2[j] -= 1;
            out.push(((l2, m2), c.times(&rat(i64::from(m[j]), 1))));
        }
    }
    out
}

fn apply_monomial<C: Coefficient>(alpha: &[Rat], pow: &[i64], key: &Key, c: &C) -> Vec<(Key, C)> {
    let mut terms = vec![(key.clone(), c.clone())];
    for (j, &e) in pow.iter().enumerate() {
        for _ in 0..e {
            terms = derivative(alpha, j, terms);
        }
    }
    terms
}

fn degree(w: &[Rat], v: &[i64]) -> Rat {
    v.iter().zip(w).map(|(&a, x)| rat(a, 1) * x).sum()
}

pub fn apply_operator<C: Coefficient>(op: &Operator, s: &LogSeries<C>) -> Applied<C> {
    let mut out: LogSeries<C> = s.empty_like();
    let mut reliable_keys = BTreeSet::new();
    let mut unreliable_keys = BTreeSet::new();
    let bound = rat(s.order, 1);
    match op {
        Operator::Box(b) => {
            let plus = b.plus.to_i64();
            let minus = b.minus.to_i64();
            let ok = |kappa: &[i64]| {
                let up: Vec<i64> = kappa.iter().zip(&plus).map(|(a, b)| a + b).collect();
                let dn: Vec<i64> = kappa.iter().zip(&minus).map(|(a, b)| a + b).collect();
                degree(&s.weight, &up) <= bound && degree(&s.weight, &dn) <= bound
            };
            for (key, c) in &s.terms {
                for (sign, pow) in [(rat(1, 1), &plus), (rat(-1, 1), &minus)] {
                    for (k2, c2) in apply_monomial(&s.alpha, pow, key, c) {
                        if ok(&k2.0) {
                            reliable_keys.insert(k2.clone());
                            out.accumulate(k2, c2.times(&sign));
                        } else {
                            unreliable_keys.insert(k2);
                        }
                    }
                }
            }
        }
        Operator::Euler(e) => {
            for (key, c) in &s.terms {
                let (l, m) = key;
                let mut total = -e.beta.clone();
                for (j, &a) in e.coeffs.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    total += rat(a, 1) * (&s.alpha[j] + rat(l[j], 1));
                    if m[j] > 0 {
                        let mut m2 = m.clone();
                        m2[j] -= 1;
                        let k2 = (l.clone(), m2);
                        reliable_keys.insert(k2.clone());
                        out.accumulate(k2, c.times(&rat(a * i64::from(m[j]), 1)));
                    }
                }
                reliable_keys.insert(key.clone());
                out.accumulate(key.clone(), c.times(&total));
            }
        }
    }
    Applied {
        reliable: out,
        checked: reliable_keys.len(),
        unreliable: unreliable_keys.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::CohomologyRing;
    use crate::corpus;
    use crate::gkz::build_system;
    use crate::linalg::LatticeVector;
    use crate::series::{b_series, gamma_series, SeriesConfig};
    use crate::toric;

    #[test]
    fn gamma_series_is_annihilated() {
        for f in corpus::all() {
            let sys = build_system(&f).unwrap();
            let w = toric::default_weight(&f, &sys.lattice).unwrap();
            let g = gamma_series(&sys, &sys.canonical_alpha(), &SeriesConfig::new(w, 6)).unwrap();
            for b in sys.box_operators() {
                let r = apply_operator(&Operator::Box(b), &g);
                assert!(r.annihilated(), "{}", f.name);
                assert!(r.checked > 0);
            }
            for e in sys.euler_operators() {
                assert!(
                    apply_operator(&Operator::Euler(e), &g).annihilated(),
                    "{}",
                    f.name
                );
            }
        }
    }

    #[test]
    fn b_series_is_annihilated() {
        for f in corpus::all() {
            let sys = build_system(&f).unwrap();
            let ring = CohomologyRing::new(&f).unwrap();
            let w = toric::default_weight(&f, &sys.lattice).unwrap();
            let b = b_series(&sys, &ring, &SeriesConfig::new(w, 4)).unwrap();
            for op in sys.box_operators() {
                assert!(
                    apply_operator(&Operator::Box(op), &b).annihilated(),
                    "{}",
                    f.name
                );
            }
            for e in sys.euler_operators() {
                assert!(
                    apply_operator(&Operator::Euler(e), &b).annihilated(),
                    "{}",
                    f.name
                );
            }
        }
    }

    #[test]
    fn wrong_exponent_is_detected() {
        let sys = build_system(&corpus::p1()).unwrap();
        let w = toric::default_weight(&sys.fan, &sys.lattice).unwrap();
        let alpha = crate::linalg::RationalVector(vec![rat(-1, 3), rat(0, 1), rat(0, 1)]);
        let g = gamma_series(&sys, &alpha, &SeriesConfig::new(w, 6)).unwrap();
        let e = sys.euler_operators();
        assert!(!apply_operator(&Operator::Euler(e[1].clone()), &g).annihilated());
        let b = sys
            .box_operator(&LatticeVector::from_i64(&[-2, 1, 1]))
            .unwrap();
        let w = toric::default_weight(&sys.fan, &sys.lattice).unwrap();
        let mut broken =
            gamma_series(&sys, &sys.canonical_alpha(), &SeriesConfig::new(w, 6)).unwrap();
        broken.accumulate((vec![-2, 1, 1], vec![0; 3]), rat(1, 1));
        assert!(!apply_operator(&Operator::Box(b), &broken).annihilated());
    }
}
