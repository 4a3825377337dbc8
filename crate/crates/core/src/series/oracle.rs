//! Independent evaluation of C_l by expanding the square roots term by term.
//!
//! For each block the factor `r_k (-sum_j x_{i,j} t^{rho_{i,j}})^k` is
//! multiplied out explicitly, the torus-constant part of the product over
//! blocks is kept, and the coefficient of `x^l` is read off.

use std::collections::BTreeMap;

use num::{One, Zero};

use super::coefficients::binomial_sqrt_coefficients;
use super::in_effective_region;
use crate::error::{Error, Result};
use crate::gkz::GkzSystem;
use crate::linalg::{LatticeVector, Rat};
use crate::polyhedral;

/// (x exponent over rays, t exponent over the lattice)
type Term = (Vec<u32>, Vec<i64>);

pub fn residue_oracle(sys: &GkzSystem, l: &LatticeVector) -> Result<Rat> {
    residue_oracle_capped(sys, l, polyhedral::max_terms())
}

pub fn residue_oracle_capped(sys: &GkzSystem, l: &LatticeVector, cap: usize) -> Result<Rat> {
    let f = &sys.fan;
    let lv = l.to_i64();
    if lv.len() != sys.j_len() {
        return Err(Error::DimensionMismatch {
            expected: sys.j_len(),
            got: lv.len(),
        });
    }
    if !in_effective_region(sys, l) || (0..f.r()).any(|i| lv[f.j_of_block(i)] > 0) {
        return Err(Error::NotInRegion(lv));
    }
    let target: Vec<u32> = f.restrict_to_i(&lv).iter().map(|&x| x as u32).collect();
    let n = f.dim;
    let p = f.p();

    let mut poly: BTreeMap<Term, Rat> = BTreeMap::new();
    poly.insert((vec![0; p], vec![0; n]), Rat::one());
    let mut prefactor = Rat::one();
    let mut first_ray = 0;
    for (i, &ni) in f.block_sizes.iter().enumerate() {
        let k = -lv[f.j_of_block(i)];
        let r = binomial_sqrt_coefficients(k as usize);
        prefactor *= &r[k as usize];
        for _ in 0..k {
            let mut next: BTreeMap<Term, Rat> = BTreeMap::new();
            for ((xe, te), c) in &poly {
                for ray in first_ray..first_ray + ni {
                    if xe[ray] + 1 > target[ray] {
                        continue;
                    }
                    let mut x2 = xe.clone();
                    x2[ray] += 1;
                    let t2: Vec<i64> = te.iter().zip(&f.rays[ray]).map(|(a, b)| a + b).collect();
                    let e = next.entry((x2, t2)).or_insert_with(Rat::zero);
                    *e -= c;
                }
            }
            next.retain(|_, c| !c.is_zero());
            if next.len() > cap {
                return Err(Error::TruncationTooLarge {
                    needed: next.len(),
                    cap,
                });
            }
            poly = next;
        }
        first_ray += ni;
    }
    let c = poly
        .get(&(target, vec![0; n]))
        .cloned()
        .unwrap_or_else(Rat::zero);
    Ok(c * prefactor)
}
