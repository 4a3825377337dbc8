//! The cohomology-valued B-series in product-form normalization.
//!
//! The coefficient of `x^{l+alpha}` is the ratio
//! `prod_J Gamma(1 + alpha_J + D_J) / Gamma(1 + l_J + alpha_J + D_J)`,
//! a polynomial in the nilpotent classes D_J times inverses of
//! `(D_J + q)` for nonzero rationals q. This differs from the transcendental
//! normalization by an l-independent invertible factor, so the span of the
//! pairings is the same.

use num::{One, Zero};

use super::{enumerate_region, Coefficient, LogSeries, Region, SeriesConfig};
use crate::cohomology::{CohClass, CohomologyRing};
use crate::error::{Error, Result};
use crate::gkz::{j_classes, GkzSystem};
use crate::linalg::{rat, LatticeVector, Rat};
use crate::par;
use crate::toric::{self, ConeDescription};

/// `Gamma(D + a + 1) / Gamma(D + a + c + 1)` in the ring.
pub fn shifted_ratio(ring: &CohomologyRing, d: &CohClass, a: &Rat, c: i64) -> CohClass {
    let mut out = ring.one();
    if c <= 0 {
        for k in 0..-c {
            let factor = d.add(&ring.scalar(&(a - rat(k, 1))));
            out = ring.mul(&out, &factor);
        }
    } else {
        for k in 1..=c {
            out = ring.mul(&out, &ring.inverse_shifted(d, &(a + rat(k, 1))));
        }
    }
    out
}

/// The product-form coefficient for the lattice vector `l`.
pub fn o_coefficient(ring: &CohomologyRing, d: &[CohClass], alpha: &[Rat], l: &[i64]) -> CohClass {
    let mut out = ring.one();
    for ((dj, a), &c) in d.iter().zip(alpha).zip(l) {
        if c == 0 {
            continue;
        }
        out = ring.mul(&out, &shifted_ratio(ring, dj, a, c));
        if out.is_zero() {
            break;
        }
    }
    out
}

/// All `(m, D^m / m!)` with `|m| <= n` and nonzero class.
pub fn log_expansion(ring: &CohomologyRing, d: &[CohClass]) -> Vec<(Vec<u32>, CohClass)> {
    let nj = d.len();
    let mut out = Vec::new();
    let mut m = vec![0u32; nj];
    fn rec(
        ring: &CohomologyRing,
        d: &[CohClass],
        pos: usize,
        left: u32,
        m: &mut Vec<u32>,
        acc: CohClass,
        fact: Rat,
        out: &mut Vec<(Vec<u32>, CohClass)>,
    ) {
        if acc.is_zero() {
            return;
        }
        if pos == d.len() {
            out.push((m.clone(), acc.scale(&fact.recip())));
            return;
        }
        let mut cur = acc;
        let mut f = fact;
        for e in 0..=left {
            if e > 0 {
                cur = ring.mul(&cur, &d[pos]);
                f *= rat(e as i64, 1);
                if cur.is_zero() {
                    break;
                }
            }
            m[pos] = e;
            rec(ring, d, pos + 1, left - e, m, cur.clone(), f.clone(), out);
        }
        m[pos] = 0;
    }
    rec(
        ring,
        d,
        0,
        ring.top_degree as u32,
        &mut m,
        ring.one(),
        Rat::one(),
        &mut out,
    );
    out
}

/// `sum_{l in NE, w.l <= d} O_l x^{l+alpha} exp(sum_J log x_J D_J)`.
pub fn b_series(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    cfg: &SeriesConfig,
) -> Result<LogSeries<CohClass>> {
    let kahler = toric::kahler_cone(&sys.fan, &sys.lattice)?;
    let points = enumerate_region(sys, cfg, Region::Mori(&kahler))?;
    let alpha = sys.canonical_alpha();
    let d = j_classes(&sys.fan, ring);
    let logs = log_expansion(ring, &d);
    let coeffs = par::map(cfg.exec, &points, |l| {
        o_coefficient(ring, &d, &alpha.0, &l.to_i64())
    });
    let mut s = LogSeries::new(alpha.0.clone(), cfg.weight.clone(), cfg.order);
    for (l, o) in points.iter().zip(coeffs) {
        if o.is_zero() {
            continue;
        }
        let key_l = l.to_i64();
        for (m, dm) in &logs {
            s.accumulate((key_l.clone(), m.clone()), ring.mul(&o, dm));
        }
    }
    Ok(s)
}

/// Applies a linear functional (coordinates over the ring basis).
pub fn pair_with_dual(b: &LogSeries<CohClass>, h: &[Rat]) -> LogSeries<Rat> {
    let mut out: LogSeries<Rat> = b.empty_like();
    for (key, c) in &b.terms {
        let v: Rat = c.0.iter().zip(h).map(|(x, y)| x * y).sum();
        out.accumulate(key.clone(), v);
    }
    out
}

/// The dual-basis functional of the `k`-th basis element.
pub fn dual_functional(ring: &CohomologyRing, k: usize) -> Vec<Rat> {
    (0..ring.dim())
        .map(|t| if t == k { Rat::one() } else { Rat::zero() })
        .collect()
}

/// All pairings `<B, h_k>` over the dual basis.
pub fn pairings(
    b: &LogSeries<CohClass>,
    ring: &CohomologyRing,
    exec: par::Execution,
) -> Vec<LogSeries<Rat>> {
    let ks: Vec<usize> = (0..ring.dim()).collect();
    par::map(exec, &ks, |&k| pair_with_dual(b, &dual_functional(ring, k)))
}

/// True iff the coefficient of `l` vanishes; `l` must lie outside NE(X).
pub fn vanishing_check_outside_mori(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    kahler: &ConeDescription,
    l: &LatticeVector,
) -> Result<bool> {
    let lambda = sys
        .lattice
        .coords(l)
        .ok_or_else(|| Error::NotInKernel(l.0.iter().map(ToString::to_string).collect()))?;
    if toric::in_mori_cone(kahler, &lambda) {
        return Err(Error::InMoriCone(l.to_i64()));
    }
    let d = j_classes(&sys.fan, ring);
    let o = o_coefficient(ring, &d, &sys.canonical_alpha().0, &l.to_i64());
    Ok(Coefficient::is_zero(&o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gkz::build_system;

    #[test]
    fn constant_parts_match_gamma_coefficients() {
        let sys = build_system(&corpus::p2()).unwrap();
        let ring = CohomologyRing::new(&sys.fan).unwrap();
        let d = j_classes(&sys.fan, &ring);
        let alpha = sys.canonical_alpha();
        let o = o_coefficient(&ring, &d, &alpha.0, &[-3, 1, 1, 1]);
        assert_eq!(ring.constant_term(&o), rat(-15, 8));
        let o = o_coefficient(&ring, &d, &alpha.0, &[0, 0, 0, 0]);
        assert_eq!(o, ring.one());
    }

    #[test]
    fn p1_first_coefficient() {
        let sys = build_system(&corpus::p1()).unwrap();
        let ring = CohomologyRing::new(&sys.fan).unwrap();
        let d = j_classes(&sys.fan, &ring);
        let o = o_coefficient(&ring, &d, &sys.canonical_alpha().0, &[-2, 1, 1]);
        assert_eq!(ring.constant_term(&o), rat(3, 4));
    }

    #[test]
    fn vanishing_outside_mori() {
        for (f, l) in [
            (corpus::p2(), vec![3, -1, -1, -1]),
            (corpus::p1(), vec![2, -1, -1]),
            (corpus::p1xp1_r2(), vec![-2, 1, 1, 2, -1, -1]),
        ] {
            let sys = build_system(&f).unwrap();
            let ring = CohomologyRing::new(&f).unwrap();
            let k = toric::kahler_cone(&f, &sys.lattice).unwrap();
            assert!(
                vanishing_check_outside_mori(&sys, &ring, &k, &LatticeVector::from_i64(&l))
                    .unwrap()
            );
        }
        let f = corpus::p1();
        let sys = build_system(&f).unwrap();
        let ring = CohomologyRing::new(&f).unwrap();
        let k = toric::kahler_cone(&f, &sys.lattice).unwrap();
        assert_eq!(
            vanishing_check_outside_mori(&sys, &ring, &k, &LatticeVector::from_i64(&[-2, 1, 1])),
            Err(Error::InMoriCone(vec![-2, 1, 1]))
        );
    }

    #[test]
    fn h0_pairing_is_log_free() {
        let sys = build_system(&corpus::p1()).unwrap();
        let ring = CohomologyRing::new(&sys.fan).unwrap();
        let w = toric::default_weight(&sys.fan, &sys.lattice).unwrap();
        let b = b_series(&sys, &ring, &SeriesConfig::new(w, 4)).unwrap();
        let ps = pairings(&b, &ring, par::Execution::Sequential);
        assert!(ps[0].is_log_free());
        assert_eq!(ps[0].get(&[-2, 1, 1], &[0, 0, 0]), Some(&rat(3, 4)));
        assert_eq!(ps[0].get(&[-4, 2, 2], &[0, 0, 0]), Some(&rat(105, 64)));
        assert_eq!(ps[1].max_log_degree(), 1);
        let zero = pair_with_dual(&b, &[Rat::zero(), Rat::zero()]);
        assert!(zero.is_empty());
    }
}
