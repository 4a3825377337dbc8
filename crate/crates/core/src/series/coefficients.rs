//! Exact coefficients: binomial square-root coefficients, C_l, and the
//! Gamma-ratio coefficients of the Gamma-series in product form.

use num::{One, Zero};

use super::{enumerate_region, in_effective_region, key_of, LogSeries, Region, SeriesConfig};
use crate::error::{Error, Result};
use crate::gkz::{ExponentVector, GkzSystem};
use crate::linalg::{rat, LatticeVector, Rat};
use crate::par;

/// `r_k = binom(-1/2, k)` for `k = 0..=k_max`.
pub fn binomial_sqrt_coefficients(k_max: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut r = Rat::one();
    for k in 0..=k_max {
        out.push(r.clone());
        r = r * (rat(-1, 2) - rat(k as i64, 1)) / rat(k as i64 + 1, 1);
    }
    out
}

fn factorial(n: u64) -> Rat {
    (1..=n).fold(Rat::one(), |acc, k| acc * rat(k as i64, 1))
}

/// `C_l = prod_i r_{-l_{i,0}} (-1)^{l_{i,0}} (-l_{i,0})! / prod_j l_{i,j}!`.
pub fn period_coefficient_c(sys: &GkzSystem, l: &LatticeVector) -> Result<Rat> {
    if !sys.in_kernel(l) {
        return Err(Error::NotInKernel(
            l.0.iter().map(ToString::to_string).collect(),
        ));
    }
    if !in_effective_region(sys, l) {
        return Err(Error::NotInRegion(l.to_i64()));
    }
    let lv = l.to_i64();
    let f = &sys.fan;
    let max_c = (0..f.r()).map(|i| -lv[f.j_of_block(i)]).max().unwrap_or(0);
    let r = binomial_sqrt_coefficients(max_c.max(0) as usize);
    let mut c = Rat::one();
    for (j, ray) in f.j_rays().into_iter().enumerate() {
        if ray.is_some() {
            c /= factorial(lv[j] as u64);
        } else {
            let k = -lv[j];
            let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
            c *= &r[k as usize] * sign * factorial(k as u64);
        }
    }
    Ok(c)
}

/// `Gamma(a + 1) / Gamma(a + c + 1)`, zero at poles of the denominator.
pub fn gamma_ratio(a: &Rat, c: i64) -> Rat {
    let mut out = Rat::one();
    if c <= 0 {
        for k in 0..-c {
            out *= a - rat(k, 1);
        }
    } else {
        for k in 1..=c {
            let d = a + rat(k, 1);
            if d.is_zero() {
                // 1/Gamma at a non-positive integer
                return Rat::zero();
            }
            out /= d;
        }
    }
    out
}

/// Coefficient of `x^{l + alpha}` in the Gamma-series, normalized so the
/// `l = 0` term is 1.
pub fn gamma_coefficient(alpha: &[Rat], l: &[i64]) -> Rat {
    alpha
        .iter()
        .zip(l)
        .map(|(a, &c)| gamma_ratio(a, c))
        .product()
}

/// The Gamma-series `sum_l coeff(l) x^{l + alpha}` over the effective region.
pub fn gamma_series(
    sys: &GkzSystem,
    alpha: &ExponentVector,
    cfg: &SeriesConfig,
) -> Result<LogSeries<Rat>> {
    let points = enumerate_region(sys, cfg, Region::Effective)?;
    let coeffs = par::map(cfg.exec, &points, |l| {
        gamma_coefficient(&alpha.0, &l.to_i64())
    });
    let mut s = LogSeries::new(alpha.0.clone(), cfg.weight.clone(), cfg.order);
    for (l, c) in points.iter().zip(coeffs) {
        s.accumulate(key_of(l, sys.j_len()), c);
    }
    Ok(s)
}

/// `sum_{l in effective region} C_l x^l`; the constant prefactor is dropped.
pub fn normalized_period_series(sys: &GkzSystem, cfg: &SeriesConfig) -> Result<LogSeries<Rat>> {
    let points = enumerate_region(sys, cfg, Region::Effective)?;
    let coeffs = par::try_map(cfg.exec, &points, |l| period_coefficient_c(sys, l))?;
    let mut s = LogSeries::new(
        vec![Rat::zero(); sys.j_len()],
        cfg.weight.clone(),
        cfg.order,
    );
    for (l, c) in points.iter().zip(coeffs) {
        s.accumulate(key_of(l, sys.j_len()), c);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gkz::build_system;
    use crate::series::apply_phi;
    use crate::toric;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(v)
    }

    #[test]
    fn sqrt_coefficients() {
        let r = binomial_sqrt_coefficients(4);
        assert_eq!(r[0], rat(1, 1));
        assert_eq!(r[1], rat(-1, 2));
        assert_eq!(r[2], rat(3, 8));
        assert_eq!(r[3], rat(-5, 16));
        assert_eq!(r[4], rat(35, 128));
    }

    #[test]
    fn c_values() {
        let sys = build_system(&corpus::p1()).unwrap();
        assert_eq!(
            period_coefficient_c(&sys, &lv(&[-2, 1, 1])).unwrap(),
            rat(3, 4)
        );
        assert_eq!(
            period_coefficient_c(&sys, &lv(&[0, 0, 0])).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            period_coefficient_c(&sys, &lv(&[-4, 2, 2])).unwrap(),
            rat(105, 64)
        );
        assert_eq!(
            period_coefficient_c(&sys, &lv(&[2, -1, -1])),
            Err(Error::NotInRegion(vec![2, -1, -1]))
        );
        let sys = build_system(&corpus::p2()).unwrap();
        assert_eq!(
            period_coefficient_c(&sys, &lv(&[-3, 1, 1, 1])).unwrap(),
            rat(15, 8)
        );
    }

    #[test]
    fn gamma_coefficients() {
        let sys = build_system(&corpus::p2()).unwrap();
        let a = sys.canonical_alpha();
        assert_eq!(gamma_coefficient(&a.0, &[-3, 1, 1, 1]), rat(-15, 8));
        assert_eq!(gamma_coefficient(&a.0, &[0, 0, 0, 0]), rat(1, 1));
        assert_eq!(gamma_coefficient(&a.0, &[3, -1, -1, -1]), rat(0, 1));
    }

    #[test]
    fn phi_turns_period_into_gamma_series() {
        for f in corpus::all() {
            let sys = build_system(&f).unwrap();
            let w = toric::default_weight(&f, &sys.lattice).unwrap();
            let cfg = SeriesConfig::new(w, 6);
            let alpha = sys.canonical_alpha();
            let g = gamma_series(&sys, &alpha, &cfg).unwrap();
            let p = normalized_period_series(&sys, &cfg).unwrap();
            assert_eq!(apply_phi(&sys, &p, &alpha.0), g, "{}", f.name);
        }
    }

    #[test]
    fn p1xp1_product_coefficient() {
        let sys = build_system(&corpus::p1xp1_r2()).unwrap();
        let w = toric::default_weight(&sys.fan, &sys.lattice).unwrap();
        let p = normalized_period_series(&sys, &SeriesConfig::new(w, 2)).unwrap();
        assert_eq!(p.get(&[-2, 1, 1, -2, 1, 1], &[0; 6]), Some(&rat(9, 16)));
    }
}
