use gkzfrac::cohomology::{CohClass, CohomologyRing};
use gkzfrac::corpus;
use gkzfrac::gkz::build_system;
use gkzfrac::linalg::{self, fmt_rat, parse_rat, rat, Int, IntMatrix, LatticeVector};
use gkzfrac::par::{self, Execution};
use gkzfrac::polytope::{convex_hull, minkowski_sum};
use gkzfrac::series::{self, apply_operator, bseries, LogSeries, Operator};
use gkzfrac::toric;
use num::Signed;
use proptest::prelude::*;

fn fans() -> Vec<gkzfrac::fan::FanData> {
    corpus::all()
}

fn lattice_point(
    f: &gkzfrac::fan::FanData,
    lam: &[i64],
) -> (gkzfrac::gkz::GkzSystem, LatticeVector) {
    let sys = build_system(f).unwrap();
    let k = sys.lattice.rank();
    let li: Vec<Int> = lam.iter().take(k).map(|&x| Int::from(x)).collect();
    let l = sys.lattice.point(&li);
    (sys, l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_format_round_trips(p in -10_000i64..10_000, q in 1i64..500) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)), Some(r));
    }

    #[test]
    fn kernel_basis_is_saturated_kernel(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 5), 1..4)) {
        let m = IntMatrix::from_rows(&rows);
        prop_assume!(linalg::rank(&m.to_rational_rows()) == rows.len());
        let k = linalg::kernel_basis(&m).unwrap();
        prop_assert_eq!(k.len(), 5 - rows.len());
        for v in &k {
            prop_assert!(m.mul_vec(&v.0).iter().all(|x| x == &Int::from(0)));
        }
        prop_assert!(linalg::is_saturated(&k));
    }

    #[test]
    fn hermite_transform_is_unimodular(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..4)) {
        let m = IntMatrix::from_rows(&rows);
        let (h, u) = linalg::hermite_with_transform(&m);
        prop_assert_eq!(m.mul(&u), h);
        prop_assert_eq!(u.determinant().abs(), Int::from(1));
    }

    #[test]
    fn parallel_map_matches_sequential(v in prop::collection::vec(-1000i64..1000, 0..200)) {
        let f = |x: &i64| x * x - 3 * x;
        prop_assert_eq!(par::map(Execution::Parallel, &v, f), par::map(Execution::Sequential, &v, f));
    }

    #[test]
    fn minkowski_sum_is_commutative(
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..5),
        b in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..5),
    ) {
        let p = convex_hull(&a).unwrap();
        let q = convex_hull(&b).unwrap();
        prop_assert_eq!(minkowski_sum(&p, &q).unwrap(), minkowski_sum(&q, &p).unwrap());
        for x in &a {
            prop_assert!(p.contains_lattice_point(x));
        }
    }

    #[test]
    fn period_coefficients_match_residue_oracle(fi in 0usize..5, lam in prop::collection::vec(0i64..=3, 2)) {
        let (sys, l) = lattice_point(&fans()[fi], &lam);
        prop_assume!(series::in_effective_region(&sys, &l));
        prop_assert_eq!(
            series::period_coefficient_c(&sys, &l).unwrap(),
            series::residue_oracle(&sys, &l).unwrap()
        );
    }

    #[test]
    fn euler_operators_kill_single_monomials(fi in 0usize..5, lam in prop::collection::vec(-5i64..=5, 2)) {
        let (sys, l) = lattice_point(&fans()[fi], &lam);
        let alpha = sys.canonical_alpha();
        let w = toric::default_weight(&sys.fan, &sys.lattice).unwrap();
        let mut s: LogSeries<gkzfrac::linalg::Rat> = LogSeries::new(alpha.0, w, 100);
        s.accumulate(series::key_of(&l, sys.j_len()), rat(1, 1));
        for e in sys.euler_operators() {
            prop_assert!(apply_operator(&Operator::Euler(e), &s).annihilated());
        }
    }

    #[test]
    fn indicial_polynomial_degree_is_positive_part(fi in 0usize..5, lam in prop::collection::vec(-4i64..=4, 2)) {
        let (sys, l) = lattice_point(&fans()[fi], &lam);
        let p = gkzfrac::gkz::indicial_polynomial(&sys, &l).unwrap();
        let (plus, _) = linalg::split_positive_negative(&l);
        let deg: u32 = plus.0.iter().map(|x| u32::try_from(x).unwrap()).sum();
        prop_assert_eq!(p.total_degree(), deg);
    }

    #[test]
    fn b_coefficients_vanish_outside_mori(fi in 0usize..5, lam in prop::collection::vec(-3i64..=3, 2)) {
        let f = &fans()[fi];
        let (sys, l) = lattice_point(f, &lam);
        let ring = CohomologyRing::new(f).unwrap();
        let kahler = toric::kahler_cone(f, &sys.lattice).unwrap();
        let coords = sys.lattice.coords(&l).unwrap();
        prop_assume!(!toric::in_mori_cone(&kahler, &coords));
        prop_assert!(bseries::vanishing_check_outside_mori(&sys, &ring, &kahler, &l).unwrap());
    }

    #[test]
    fn ring_product_is_commutative_and_associative(
        fi in 0usize..5,
        a in prop::collection::vec(-5i64..=5, 4),
        b in prop::collection::vec(-5i64..=5, 4),
        c in prop::collection::vec(-5i64..=5, 4),
    ) {
        let ring = CohomologyRing::new(&fans()[fi]).unwrap();
        let class = |v: &[i64]| CohClass((0..ring.dim()).map(|i| rat(v[i % v.len()], 1)).collect());
        let (x, y, z) = (class(&a), class(&b), class(&c));
        prop_assert_eq!(ring.mul(&x, &y), ring.mul(&y, &x));
        prop_assert_eq!(ring.mul(&ring.mul(&x, &y), &z), ring.mul(&x, &ring.mul(&y, &z)));
    }

    #[test]
    fn ray_order_does_not_change_the_period(seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let spec = corpus::spec(corpus::F1);
        let mut perm: Vec<usize> = (0..spec.rays.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut shuffled = spec.clone();
        shuffled.rays = perm.iter().map(|&k| spec.rays[k].clone()).collect();
        shuffled.max_cones = spec.max_cones.iter().map(|c| c.iter().map(|&k| inv[k]).collect()).collect();
        shuffled.nef_partition = spec.nef_partition.iter().map(|b| b.iter().map(|&k| inv[k]).collect()).collect();
        let coeffs = |s: &gkzfrac::io::InputSpec| {
            let f = s.to_fan().unwrap();
            let sys = build_system(&f).unwrap();
            let cfg = series::SeriesConfig::new(toric::default_weight(&f, &sys.lattice).unwrap(), 3);
            let mut v: Vec<_> = series::normalized_period_series(&sys, &cfg).unwrap().terms.into_values().collect();
            v.sort();
            v
        };
        prop_assert_eq!(coeffs(&spec), coeffs(&shuffled));
    }
}
