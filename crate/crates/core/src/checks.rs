//! The invariant suite run by `check-all`. Every check has a stable id; the
//! README maps ids to the properties they cover.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::CohomologyRing;
use crate::degeneracy;
use crate::error::{Error, Result};
use crate::fan::FanData;
use crate::gkz::{self, build_system, GkzSystem};
use crate::groebner;
use crate::linalg::{self, fmt_rat, rat, rat_from_int, Int, LatticeVector, Rat};
use crate::par::Execution;
use crate::polytope;
use crate::series::{
    self, apply_operator, bseries, enumerate_region, Applied, Coefficient, LogSeries, Operator,
    Region, SeriesConfig,
};
use crate::toric::{self, ConeDescription};
use crate::triangulation::{self, PointConfiguration};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

pub struct Context {
    pub sys: GkzSystem,
    pub ring: CohomologyRing,
    pub kahler: ConeDescription,
    pub cfg: SeriesConfig,
}

impl Context {
    pub fn new(f: &FanData, order: i64, weight: Option<&[Rat]>, exec: Execution) -> Result<Self> {
        let sys = build_system(f)?;
        let ring = CohomologyRing::new(f)?;
        let kahler = toric::kahler_cone(f, &sys.lattice)?;
        let w = toric::resolve_weight(f, &sys.lattice, weight)?;
        Ok(Self {
            sys,
            ring,
            kahler,
            cfg: SeriesConfig::new(w, order).with_exec(exec),
        })
    }
}

type Check = fn(&Context) -> Result<(bool, String)>;

pub const CHECKS: &[(&str, Check)] = &[
    ("linalg.kernel", kernel_check),
    ("linalg.hnf", hnf_check),
    ("polytope.double_dual", double_dual_check),
    ("polytope.minkowski", minkowski_check),
    ("polytope.nef_duality", nef_duality_check),
    ("toric.relations", relations_check),
    ("toric.c0", c0_check),
    ("toric.ring", ring_check),
    ("toric.ample", ample_check),
    ("gkz.euler_monomials", euler_monomial_check),
    ("gkz.indicial_degree", indicial_degree_check),
    ("gkz.zero_locus", zero_locus_check),
    ("gkz.ring_surjection", surjection_check),
    ("series.oracle", oracle_check),
    ("series.annihilation", annihilation_check),
    ("series.support", support_check),
    ("series.mori_samples", mori_samples_check),
    ("series.rank", rank_check),
    ("fans.maximal_triangulation", maximal_triangulation_check),
    ("fans.volume", volume_check),
    ("fans.interior_weights", interior_weights_check),
    ("fans.secondary_cone", secondary_cone_check),
    ("fans.groebner", groebner_check),
    ("degeneracy.charts", charts_check),
    ("degeneracy.certificate", certificate_check),
];

pub fn run_all(ctx: &Context) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(id, check)| {
            let (passed, detail) = check(ctx).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckResult {
                id: (*id).to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

pub fn run_one(ctx: &Context, id: &str) -> Option<CheckResult> {
    CHECKS
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(name, check)| {
            let (passed, detail) = check(ctx).unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckResult {
                id: (*name).to_string(),
                passed,
                detail,
            }
        })
}

/// All kernel vectors of A_ext with entries in `[-bound, bound]`, found by
/// running the free coordinates over the box and solving for the rest.
pub fn small_kernel_vectors(sys: &GkzSystem, bound: i64) -> Vec<LatticeVector> {
    let a = sys.a_ext.to_rational_rows();
    let nv = sys.j_len();
    let mut m = a.clone();
    let pivots = linalg::rref(&mut m);
    let free: Vec<usize> = (0..nv).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    let mut vals = vec![-bound; free.len()];
    loop {
        let mut v = vec![Rat::zero(); nv];
        for (&c, &x) in free.iter().zip(&vals) {
            v[c] = rat(x, 1);
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let s: Rat = free.iter().map(|&c| &m[r][c] * &v[c]).sum();
            v[pc] = -s;
        }
        if v.iter().all(|x| x.is_integer() && x.abs() <= rat(bound, 1)) {
            out.push(LatticeVector(v.iter().map(Rat::to_integer).collect()));
        }
        let mut t = 0;
        while t < vals.len() {
            vals[t] += 1;
            if vals[t] <= bound {
                break;
            }
            vals[t] = -bound;
            t += 1;
        }
        if t == vals.len() {
            break;
        }
    }
    out
}

fn kernel_check(ctx: &Context) -> Result<(bool, String)> {
    let sys = &ctx.sys;
    let annihilated = sys.lattice.basis.iter().all(|b| sys.in_kernel(b));
    let vs = small_kernel_vectors(sys, 5);
    let in_span = vs.iter().all(|v| sys.lattice.coords(v).is_some());
    Ok((
        annihilated && in_span && linalg::is_saturated(&sys.lattice.basis),
        format!(
            "{} box vectors in [-5,5] checked against the basis",
            vs.len()
        ),
    ))
}

fn hnf_check(ctx: &Context) -> Result<(bool, String)> {
    let a = &ctx.sys.a_ext;
    let (h, u) = linalg::hermite_with_transform(a);
    let det = u.determinant();
    Ok((
        a.mul(&u) == h && det.abs().is_one(),
        format!("det U = {det}"),
    ))
}

fn double_dual_check(ctx: &Context) -> Result<(bool, String)> {
    let d = polytope::dual_nef_partition(&ctx.sys.fan)?;
    let mut tested = 0;
    let mut ok = true;
    for p in [&d.nabla_sum, &d.nabla_dual] {
        if polytope::is_reflexive(p) {
            ok &= polytope::polar_dual(&polytope::polar_dual(p)?)? == *p;
            tested += 1;
        }
    }
    Ok((ok && tested == 2, format!("{tested} reflexive polytopes")))
}

fn minkowski_check(ctx: &Context) -> Result<(bool, String)> {
    let d = polytope::dual_nef_partition(&ctx.sys.fan)?;
    let ps: Vec<&polytope::LatticePolytope> = d.nabla.iter().chain(&d.deltas).collect();
    let mut ok = true;
    for a in &ps {
        for b in &ps {
            ok &= polytope::minkowski_sum(a, b)? == polytope::minkowski_sum(b, a)?;
            for c in &ps {
                let left = polytope::minkowski_sum(&polytope::minkowski_sum(a, b)?, c)?;
                let right = polytope::minkowski_sum(a, &polytope::minkowski_sum(b, c)?)?;
                ok &= left == right;
            }
        }
    }
    Ok((ok, format!("{} polytopes, all pairs and triples", ps.len())))
}

fn nef_duality_check(ctx: &Context) -> Result<(bool, String)> {
    let d = polytope::dual_nef_partition(&ctx.sys.fan)?;
    let contained = d.deltas.iter().all(|delta| {
        delta
            .vertices
            .iter()
            .all(|v| d.nabla_dual.contains_lattice_point(v))
    });
    Ok((
        contained && polytope::is_reflexive(&d.nabla_sum),
        format!(
            "nabla has {} vertices, its dual {}",
            d.nabla_sum.vertices.len(),
            d.nabla_dual.vertices.len()
        ),
    ))
}

fn relations_check(ctx: &Context) -> Result<(bool, String)> {
    let sys = &ctx.sys;
    let f = &sys.fan;
    let mut ok = true;
    for pc in &sys.collections {
        ok &= sys.in_kernel(&pc.l_ext);
        let (plus, minus) = linalg::split_positive_negative(&pc.l_ext);
        for (j, (p, m)) in plus.0.iter().zip(&minus.0).enumerate() {
            let ray = f.j_rays()[j];
            let in_p = ray.is_some_and(|k| pc.rays.contains(&k));
            let in_sigma = ray.is_none_or(|k| pc.sigma.contains(&k));
            ok &= if in_p { p.is_one() } else { p.is_zero() };
            ok &= m.is_zero() || in_sigma;
        }
    }
    Ok((ok, format!("{} primitive relations", sys.collections.len())))
}

fn c0_check(ctx: &Context) -> Result<(bool, String)> {
    let all: Vec<String> = ctx
        .sys
        .collections
        .iter()
        .flat_map(|pc| pc.c0.iter().map(ToString::to_string))
        .collect();
    let ok = ctx
        .sys
        .collections
        .iter()
        .all(|pc| pc.c0.iter().all(|c| !c.is_negative()));
    Ok((ok, format!("c_(i,0) = {all:?}")))
}

fn ring_check(ctx: &Context) -> Result<(bool, String)> {
    let b = ctx.ring.dims_by_degree();
    let ok = ctx.ring.dim() == ctx.sys.fan.max_cones.len() && b.last() == Some(&1);
    Ok((
        ok,
        format!("betti {b:?}, {} maximal cones", ctx.sys.fan.max_cones.len()),
    ))
}

fn ample_check(ctx: &Context) -> Result<(bool, String)> {
    let f = &ctx.sys.fan;
    let interior = toric::lift_dual(f, &ctx.sys.lattice, &ctx.kahler.ray_sum())?;
    toric::check_ample(f, &interior)?;
    toric::check_ample(f, &ctx.cfg.weight)?;
    Ok((
        true,
        format!(
            "weight {:?}",
            ctx.cfg.weight.iter().map(fmt_rat).collect::<Vec<_>>()
        ),
    ))
}

fn random_lattice_points(sys: &GkzSystem, count: usize, seed: u64) -> Vec<LatticeVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let lam: Vec<Int> = (0..sys.lattice.rank())
                .map(|_| Int::from(rng.random_range(-4i64..=4)))
                .collect();
            sys.lattice.point(&lam)
        })
        .collect()
}

fn euler_monomial_check(ctx: &Context) -> Result<(bool, String)> {
    let sys = &ctx.sys;
    let alpha = sys.canonical_alpha();
    let mut ok = true;
    for l in random_lattice_points(sys, 20, 0x5eed) {
        let mut s: LogSeries<Rat> =
            LogSeries::new(alpha.0.clone(), ctx.cfg.weight.clone(), ctx.cfg.order);
        s.accumulate(series::key_of(&l, sys.j_len()), Rat::one());
        for e in sys.euler_operators() {
            ok &= apply_operator(&Operator::Euler(e), &s).annihilated();
        }
    }
    Ok((ok, "20 seeded lattice points".into()))
}

fn indicial_degree_check(ctx: &Context) -> Result<(bool, String)> {
    let sys = &ctx.sys;
    let mut ok = true;
    let mut ls: Vec<LatticeVector> = sys.collections.iter().map(|pc| pc.l_ext.clone()).collect();
    ls.extend(random_lattice_points(sys, 10, 0x1d));
    for l in &ls {
        let p = gkz::indicial_polynomial(sys, l)?;
        let (plus, _) = linalg::split_positive_negative(l);
        let deg: u32 = plus
            .0
            .iter()
            .map(|x| u32::try_from(x).expect("non-negative"))
            .sum();
        let lead: Vec<u32> = plus
            .0
            .iter()
            .map(|x| u32::try_from(x).expect("small"))
            .collect();
        ok &= p.total_degree() == deg && p.coefficient(&lead) == Rat::one();
    }
    Ok((ok, format!("{} relations", ls.len())))
}

fn zero_locus_check(ctx: &Context) -> Result<(bool, String)> {
    let locus = gkz::indicial_ideal_zero_locus(&ctx.sys, &ctx.kahler)?;
    Ok((
        locus == vec![ctx.sys.canonical_alpha()],
        format!(
            "{:?}",
            locus.iter().map(|a| a.to_strings()).collect::<Vec<_>>()
        ),
    ))
}

fn surjection_check(ctx: &Context) -> Result<(bool, String)> {
    Ok((
        gkz::indicial_ring_surjection_check(&ctx.sys, &ctx.ring),
        String::new(),
    ))
}

fn oracle_check(ctx: &Context) -> Result<(bool, String)> {
    let points = enumerate_region(&ctx.sys, &ctx.cfg, Region::Effective)?;
    let mut bad = Vec::new();
    for l in &points {
        if series::period_coefficient_c(&ctx.sys, l)? != series::residue_oracle(&ctx.sys, l)? {
            bad.push(l.to_i64());
        }
    }
    Ok((
        bad.is_empty(),
        format!("{} coefficients, mismatches {bad:?}", points.len()),
    ))
}

fn annihilated_by_all<C: Coefficient>(sys: &GkzSystem, s: &LogSeries<C>) -> (bool, usize) {
    let mut ok = true;
    let mut checked = 0;
    let mut record = |a: Applied<C>| {
        ok &= a.annihilated();
        checked += a.checked;
    };
    for b in sys.box_operators() {
        record(apply_operator(&Operator::Box(b), s));
    }
    for e in sys.euler_operators() {
        record(apply_operator(&Operator::Euler(e), s));
    }
    (ok, checked)
}

fn annihilation_check(ctx: &Context) -> Result<(bool, String)> {
    let sys = &ctx.sys;
    let alpha = sys.canonical_alpha();
    let g = series::gamma_series(sys, &alpha, &ctx.cfg)?;
    let p = series::apply_phi(
        sys,
        &series::normalized_period_series(sys, &ctx.cfg)?,
        &alpha.0,
    );
    let b = series::b_series(sys, &ctx.ring, &ctx.cfg)?;
    let mut ok = true;
    let mut checked = 0;
    for s in [&g, &p] {
        let (a, c) = annihilated_by_all(sys, s);
        ok &= a;
        checked += c;
    }
    for pairing in bseries::pairings(&b, &ctx.ring, ctx.cfg.exec) {
        let (a, c) = annihilated_by_all(sys, &pairing);
        ok &= a;
        checked += c;
    }
    Ok((
        ok,
        format!(
            "{checked} reliable coefficients checked at order {}",
            ctx.cfg.order
        ),
    ))
}

/// Lattice points outside NE(X) with lattice coordinates in `[-bound, bound]`.
fn outside_mori(ctx: &Context, bound: i64) -> Vec<LatticeVector> {
    let k = ctx.sys.lattice.rank();
    let mut out = Vec::new();
    let mut lam = vec![-bound; k];
    loop {
        let li: Vec<Int> = lam.iter().map(|&x| Int::from(x)).collect();
        if !toric::in_mori_cone(&ctx.kahler, &li) {
            out.push(ctx.sys.lattice.point(&li));
        }
        let mut t = 0;
        while t < k {
            lam[t] += 1;
            if lam[t] <= bound {
                break;
            }
            lam[t] = -bound;
            t += 1;
        }
        if t == k {
            break;
        }
    }
    out
}

fn support_check(ctx: &Context) -> Result<(bool, String)> {
    let outside = outside_mori(ctx, 3);
    let mut ok = true;
    for l in &outside {
        ok &= bseries::vanishing_check_outside_mori(&ctx.sys, &ctx.ring, &ctx.kahler, l)?;
    }
    let b = series::b_series(&ctx.sys, &ctx.ring, &ctx.cfg)?;
    let inside = b.terms.keys().all(|(l, _)| {
        let lam = ctx
            .sys
            .lattice
            .coords(&LatticeVector::from_i64(l))
            .expect("term in L_ext");
        toric::in_mori_cone(&ctx.kahler, &lam)
    });
    Ok((
        ok && inside,
        format!(
            "{} points outside NE(X) in the box |lambda| <= 3",
            outside.len()
        ),
    ))
}

/// Up to `count` lattice vectors outside NE(X): combinations of the
/// primitive relations with coefficients in [-3, 3] and entries bounded by
/// 3, padded with larger negated multiples of the generators when the
/// bounded pool is too small (rank one).
pub fn mori_vanishing_samples(
    sys: &GkzSystem,
    kahler: &ConeDescription,
    count: usize,
) -> Vec<LatticeVector> {
    let gens: Vec<LatticeVector> = sys.collections.iter().map(|pc| pc.l_ext.clone()).collect();
    let outside = |l: &LatticeVector| {
        sys.lattice
            .coords(l)
            .is_some_and(|lam| !toric::in_mori_cone(kahler, &lam))
    };
    let mut pool: Vec<LatticeVector> = Vec::new();
    let mut coeffs = vec![-3i64; gens.len()];
    loop {
        let mut l = LatticeVector::zeros(sys.j_len());
        for (g, &c) in gens.iter().zip(&coeffs) {
            l = l.add(&g.scale(&Int::from(c)));
        }
        let bounded = l.0.iter().all(|x| x.abs() <= Int::from(3));
        if bounded && outside(&l) && !pool.contains(&l) {
            pool.push(l);
        }
        let mut t = 0;
        while t < coeffs.len() {
            coeffs[t] += 1;
            if coeffs[t] <= 3 {
                break;
            }
            coeffs[t] = -3;
            t += 1;
        }
        if t == coeffs.len() {
            break;
        }
    }
    let key = |l: &LatticeVector| {
        let size: Int = l.0.iter().map(|x| x.abs()).sum();
        (size, l.clone())
    };
    pool.sort_by_key(key);
    let mut k = 1i64;
    while pool.len() < count && k < 64 {
        for g in &gens {
            let l = g.scale(&Int::from(-k));
            if outside(&l) && !pool.contains(&l) && pool.len() < count {
                pool.push(l);
            }
        }
        k += 1;
    }
    pool.truncate(count);
    pool
}

fn mori_samples_check(ctx: &Context) -> Result<(bool, String)> {
    let samples = mori_vanishing_samples(&ctx.sys, &ctx.kahler, 10);
    let mut ok = samples.len() == 10;
    for l in &samples {
        ok &= bseries::vanishing_check_outside_mori(&ctx.sys, &ctx.ring, &ctx.kahler, l)?;
    }
    Ok((ok, format!("{} samples", samples.len())))
}

/// Rank of the coefficient matrix of the pairings over all monomials.
pub fn pairing_rank(pairings: &[LogSeries<Rat>]) -> usize {
    let mut keys: Vec<&series::Key> = pairings.iter().flat_map(|p| p.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rat>> = keys
        .iter()
        .map(|k| {
            pairings
                .iter()
                .map(|p| p.terms.get(*k).cloned().unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

fn rank_check(ctx: &Context) -> Result<(bool, String)> {
    let b = series::b_series(&ctx.sys, &ctx.ring, &ctx.cfg)?;
    let rank = pairing_rank(&bseries::pairings(&b, &ctx.ring, ctx.cfg.exec));
    let cones = ctx.sys.fan.max_cones.len();
    Ok((
        rank == ctx.ring.dim() && rank == cones,
        format!(
            "rank {rank}, dim H {}, {cones} maximal cones",
            ctx.ring.dim()
        ),
    ))
}

fn maximal_triangulation_check(ctx: &Context) -> Result<(bool, String)> {
    let t = triangulation::maximal_triangulation(&ctx.sys)?;
    let f = &ctx.sys.fan;
    let ok = t
        .simplices
        .iter()
        .all(|s| (0..f.r()).all(|i| s.contains(&f.j_of_block(i))));
    Ok((ok, format!("{} unimodular simplices", t.simplices.len())))
}

fn volume_check(ctx: &Context) -> Result<(bool, String)> {
    let pc = PointConfiguration::from_system(&ctx.sys);
    let t = triangulation::maximal_triangulation(&ctx.sys)?;
    let v = triangulation::normalized_volume(&pc, &t)?;
    let generic = triangulation::normalized_volume_generic(&pc, 0xa11)?;
    let cones = Int::from(ctx.sys.fan.max_cones.len());
    let dim = Int::from(ctx.ring.dim());
    Ok((
        v == cones && v == dim && generic == v,
        format!("volume {v}, generic {generic}"),
    ))
}

fn interior_weights_check(ctx: &Context) -> Result<(bool, String)> {
    let f = &ctx.sys.fan;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e1a);
    let mut ok = true;
    for _ in 0..8 {
        let mut y = vec![Rat::zero(); ctx.sys.lattice.rank()];
        for ray in &ctx.kahler.rays {
            let c = rat(rng.random_range(1..20), 1);
            for (a, x) in y.iter_mut().zip(ray) {
                *a += rat_from_int(x) * &c;
            }
        }
        let w = toric::lift_dual(f, &ctx.sys.lattice, &y)?;
        ok &= triangulation::induces_maximal(&ctx.sys, &w)?;
    }
    ok &= triangulation::induces_maximal(&ctx.sys, &ctx.cfg.weight)?;
    Ok((
        ok,
        "8 seeded interior weights and the working weight".into(),
    ))
}

fn secondary_cone_check(ctx: &Context) -> Result<(bool, String)> {
    let pc = PointConfiguration::from_system(&ctx.sys);
    let t = triangulation::maximal_triangulation(&ctx.sys)?;
    let sc = triangulation::secondary_cone(&ctx.sys, &pc, &t)?;
    let ok = ctx.kahler.rays.iter().all(|r| {
        let y: Vec<Rat> = r.iter().map(rat_from_int).collect();
        sc.cone.contains(&y)
    });
    let vacuous = if sc.non_vertex_conditions == 0 {
        "; the non-vertex clause is vacuous"
    } else {
        ""
    };
    Ok((ok, format!("{} wall conditions{vacuous}", sc.walls)))
}

fn groebner_check(ctx: &Context) -> Result<(bool, String)> {
    let c = groebner::minimal_gb_is_primitive_collections(&ctx.sys, &ctx.cfg.weight)?;
    Ok((
        c.holds(),
        format!(
            "{} binomials; lead = collection side {}, S-pairs reduce {}, reduced basis {}, LT = SR {}",
            c.primitive_binomials.len(),
            c.leading_is_collection,
            c.s_pairs_reduce,
            c.equals_reduced_basis,
            c.lt_is_stanley_reisner
        ),
    ))
}

fn charts_check(ctx: &Context) -> Result<(bool, String)> {
    let charts = degeneracy::subdivide_kahler_cone(&ctx.sys)?;
    let points = enumerate_region(&ctx.sys, &ctx.cfg, Region::Effective)?;
    for chart in &charts {
        for l in &points {
            chart.exponents(&ctx.sys, &l.to_i64())?;
        }
    }
    Ok((
        !charts.is_empty(),
        format!(
            "{} chart(s), {} exponents decomposed each",
            charts.len(),
            points.len()
        ),
    ))
}

fn certificate_check(ctx: &Context) -> Result<(bool, String)> {
    let charts = degeneracy::subdivide_kahler_cone(&ctx.sys)?;
    let mut ok = true;
    let mut failed = Vec::new();
    for chart in &charts {
        let r = degeneracy::certificate_report(&ctx.sys, &ctx.ring, chart, &ctx.cfg)?;
        if !r.passed() {
            ok = false;
            failed.extend(
                r.clauses
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.clone()),
            );
        }
    }
    Ok((
        ok,
        format!("{} chart(s), failed clauses {failed:?}", charts.len()),
    ))
}

/// Convenience wrapper used by the CLI and the acceptance suite.
pub fn run_for_fan(f: &FanData, order: i64, exec: Execution) -> Result<Vec<CheckResult>> {
    let ctx = Context::new(f, order, None, exec)?;
    Ok(run_all(&ctx))
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

pub fn failure_error(results: &[CheckResult]) -> Option<Error> {
    results
        .iter()
        .find(|r| !r.passed)
        .map(|r| Error::CertificateFailed {
            clause: r.id.clone(),
            detail: r.detail.clone(),
        })
}
