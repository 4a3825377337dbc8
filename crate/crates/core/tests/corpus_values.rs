//! Frozen values on the bundled fans, each checked against an independent
//! computation in this file.

use gkzfrac::cohomology::CohomologyRing;
use gkzfrac::corpus;
use gkzfrac::degeneracy;
use gkzfrac::gkz::build_system;
use gkzfrac::linalg::{rat, LatticeVector, Rat};
use gkzfrac::series::{self, SeriesConfig};
use gkzfrac::toric;
use gkzfrac::triangulation::{self, PointConfiguration};
use num::{BigInt, One};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// (4k)! / (16^k (2k)! (k!)^2)
fn p1_closed_form(k: u64) -> Rat {
    let num = factorial(4 * k);
    let den = BigInt::from(16u32).pow(k as u32) * factorial(2 * k) * factorial(k) * factorial(k);
    Rat::new(num, den)
}

fn coefficient(s: &series::LogSeries<Rat>, l: &[i64]) -> Option<Rat> {
    s.terms
        .iter()
        .find(|((key, _), _)| key.as_slice() == l)
        .map(|(_, c)| c.clone())
}

#[test]
fn p1_period_matches_closed_form() {
    let f = corpus::p1();
    let sys = build_system(&f).unwrap();
    let cfg = SeriesConfig::new(toric::default_weight(&f, &sys.lattice).unwrap(), 8);
    let s = series::normalized_period_series(&sys, &cfg).unwrap();
    assert_eq!(s.len(), 9);
    for k in 0..=8i64 {
        let l = [-2 * k, k, k];
        assert_eq!(
            coefficient(&s, &l),
            Some(p1_closed_form(k as u64)),
            "k = {k}"
        );
    }
    assert_eq!(p1_closed_form(2), rat(105, 64));
}

#[test]
fn p1xp1_two_block_period_factorizes() {
    let f = corpus::p1xp1_r2();
    let sys = build_system(&f).unwrap();
    let cfg = SeriesConfig::new(toric::default_weight(&f, &sys.lattice).unwrap(), 6);
    let s = series::normalized_period_series(&sys, &cfg).unwrap();
    let single = |k: i64| p1_closed_form(k as u64);
    for a in 0..=3i64 {
        for b in 0..=3i64 {
            let l = vec![-2 * a, a, a, -2 * b, b, b];
            assert_eq!(coefficient(&s, &l), Some(single(a) * single(b)), "{l:?}");
        }
    }
    assert_eq!(coefficient(&s, &[-2, 1, 1, -2, 1, 1]), Some(rat(9, 16)));
}

#[test]
fn p2_chart_coefficients() {
    // The z^k coefficient is (-1)^k (3k)! r_{3k} / (k!)^3 with r_j the Taylor
    // coefficients of (1+u)^{-1/2}; the signs combine to make it positive.
    let f = corpus::p2();
    let sys = build_system(&f).unwrap();
    let cfg = SeriesConfig::new(toric::default_weight(&f, &sys.lattice).unwrap(), 4);
    let chart = &degeneracy::subdivide_kahler_cone(&sys).unwrap()[0];
    assert_eq!(chart.basis, vec![vec![-3, 1, 1, 1]]);
    assert_eq!(chart.signs, vec![-1]);
    let p = degeneracy::period_in_chart(&sys, chart, &cfg).unwrap();
    let r = series::binomial_sqrt_coefficients(12);
    for k in 0..=4u64 {
        let expected = Rat::from_integer(factorial(3 * k)) * &r[3 * k as usize]
            / Rat::from_integer(factorial(k).pow(3));
        let got = p.get(&[k as i64], &[0]).cloned();
        let expected = if k % 2 == 1 { -expected } else { expected };
        assert_eq!(got, Some(expected.clone()), "k = {k}");
        assert_eq!(
            degeneracy::oracle_chart_coefficient(&sys, chart, &[k as i64]).unwrap(),
            expected
        );
    }
    assert_eq!(p.get(&[1], &[0]).cloned(), Some(rat(15, 8)));
}

#[test]
fn volumes_are_euler_numbers() {
    let expected = [
        ("P1", 2),
        ("P2", 3),
        ("P1xP1", 4),
        ("P1xP1-r2", 4),
        ("F1", 4),
    ];
    for (f, (name, chi)) in corpus::all().iter().zip(expected) {
        assert_eq!(f.name, name);
        let sys = build_system(f).unwrap();
        let pc = PointConfiguration::from_system(&sys);
        let t = triangulation::maximal_triangulation(&sys).unwrap();
        assert_eq!(
            triangulation::normalized_volume(&pc, &t).unwrap(),
            chi.into()
        );
        assert_eq!(
            triangulation::normalized_volume_generic(&pc, 7).unwrap(),
            chi.into()
        );
        assert_eq!(CohomologyRing::new(f).unwrap().dim(), chi as usize);
        assert_eq!(f.max_cones.len(), chi as usize);
    }
}

#[test]
fn certificates_stratify_logs_by_degree() {
    for f in corpus::all() {
        let sys = build_system(&f).unwrap();
        let ring = CohomologyRing::new(&f).unwrap();
        let cfg = SeriesConfig::new(toric::default_weight(&f, &sys.lattice).unwrap(), 4);
        for chart in degeneracy::subdivide_kahler_cone(&sys).unwrap() {
            let r = degeneracy::certificate_report(&sys, &ring, &chart, &cfg).unwrap();
            assert!(r.passed(), "{}: {:?}", f.name, r.clauses);
            assert_eq!(r.log_free_rank, 1);
            let mut logs = r.log_degrees.clone();
            logs.sort_unstable();
            let mut degs: Vec<u32> = r.basis_degrees.iter().map(|&d| d as u32).collect();
            degs.sort_unstable();
            assert_eq!(logs, degs, "{}", f.name);
        }
    }
}

#[test]
fn relation_vectors_and_c0() {
    let expected: [&[(&[i64], &[i64])]; 3] = [
        &[(&[-2, 1, 1], &[2])],
        &[(&[-3, 1, 1, 1], &[3])],
        &[
            (&[-2, 1, 1, 0, 0, 0], &[2, 0]),
            (&[0, 0, 0, -2, 1, 1], &[0, 2]),
        ],
    ];
    let fans = [corpus::p1(), corpus::p2(), corpus::p1xp1_r2()];
    for (f, want) in fans.iter().zip(expected) {
        let sys = build_system(f).unwrap();
        let mut got: Vec<(Vec<i64>, Vec<i64>)> = sys
            .collections
            .iter()
            .map(|pc| {
                (
                    pc.l_ext.to_i64(),
                    pc.c0.iter().map(|c| i64::try_from(c).unwrap()).collect(),
                )
            })
            .collect();
        got.sort();
        let mut want: Vec<(Vec<i64>, Vec<i64>)> =
            want.iter().map(|(l, c)| (l.to_vec(), c.to_vec())).collect();
        want.sort();
        assert_eq!(got, want, "{}", f.name);
        for (l, _) in &got {
            assert!(sys.in_kernel(&LatticeVector::from_i64(l)));
        }
    }
}
