//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gkzfrac::checks::mori_vanishing_samples;
use gkzfrac::cohomology::CohomologyRing;
use gkzfrac::corpus;
use gkzfrac::degeneracy;
use gkzfrac::fan::FanData;
use gkzfrac::gkz::{self, build_system, GkzSystem};
use gkzfrac::groebner;
use gkzfrac::linalg::{rat, split_positive_negative, LatticeVector, Rat};
use gkzfrac::polytope;
use gkzfrac::series::{self, apply_operator, bseries, LogSeries, Operator, SeriesConfig};
use gkzfrac::toric;
use gkzfrac::triangulation::{self, PointConfiguration};
use num::{BigInt, One, Signed};

type Outcome = Result<String, String>;
type Criterion = (
    &'static str,
    &'static str,
    fn() -> Outcome,
    Option<Duration>,
);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn setup(f: &FanData, order: i64) -> (GkzSystem, SeriesConfig) {
    let sys = build_system(f).expect("system builds");
    let w = toric::default_weight(f, &sys.lattice).expect("default weight");
    (sys, SeriesConfig::new(w, order))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Fans named in the volume and structure criteria (the one-block
/// partitions).
fn anticanonical() -> Vec<FanData> {
    vec![corpus::p1(), corpus::p2(), corpus::p1xp1(), corpus::f1()]
}

fn ac1() -> Outcome {
    let f = corpus::p1();
    let (sys, cfg) = setup(&f, 4);
    let chart = &degeneracy::subdivide_kahler_cone(&sys).map_err(|e| e.to_string())?[0];
    let p = degeneracy::period_in_chart(&sys, chart, &cfg).map_err(|e| e.to_string())?;
    let mut shown = Vec::new();
    for k in 0..=4u64 {
        let closed = Rat::new(
            factorial(4 * k),
            BigInt::from(16u32).pow(k as u32) * factorial(2 * k) * factorial(k) * factorial(k),
        );
        let l = LatticeVector::from_i64(&[-2 * k as i64, k as i64, k as i64]);
        let oracle = series::residue_oracle(&sys, &l).map_err(|e| e.to_string())?;
        let got = p.get(&[k as i64], &[0]).cloned();
        ensure(got.as_ref() == Some(&closed) && oracle == closed, || {
            format!("k = {k}: series {got:?}, oracle {oracle}, closed form {closed}")
        })?;
        shown.push(closed.to_string());
    }
    Ok(format!("coefficients {}", shown.join(", ")))
}

fn ac2() -> Outcome {
    let mut out = Vec::new();
    for (f, chi) in anticanonical().iter().zip([2u32, 3, 4, 4]) {
        let sys = build_system(f).map_err(|e| e.to_string())?;
        let pc = PointConfiguration::from_system(&sys);
        let t = triangulation::maximal_triangulation(&sys).map_err(|e| e.to_string())?;
        let vol = triangulation::normalized_volume(&pc, &t).map_err(|e| e.to_string())?;
        let dim = CohomologyRing::new(f).map_err(|e| e.to_string())?.dim();
        ensure(
            vol == chi.into() && f.max_cones.len() == chi as usize && dim == chi as usize,
            || {
                format!(
                    "{}: volume {vol}, cones {}, dim H {dim}",
                    f.name,
                    f.max_cones.len()
                )
            },
        )?;
        out.push(format!("{} {vol}", f.name));
    }
    Ok(out.join(", "))
}

fn killed<C: series::Coefficient>(sys: &GkzSystem, s: &LogSeries<C>) -> Result<usize, String> {
    let mut checked = 0;
    let ops = sys
        .box_operators()
        .into_iter()
        .map(Operator::Box)
        .chain(sys.euler_operators().into_iter().map(Operator::Euler));
    for op in ops {
        let a = apply_operator(&op, s);
        ensure(a.annihilated(), || {
            format!("operator {op:?} leaves a nonzero reliable term")
        })?;
        checked += a.checked;
    }
    Ok(checked)
}

fn ac3() -> Outcome {
    let mut total = 0;
    for f in corpus::all() {
        let (sys, cfg) = setup(&f, 8);
        let ring = CohomologyRing::new(&f).map_err(|e| e.to_string())?;
        let g =
            series::gamma_series(&sys, &sys.canonical_alpha(), &cfg).map_err(|e| e.to_string())?;
        total += killed(&sys, &g).map_err(|e| format!("{} gamma series: {e}", f.name))?;
        let b = series::b_series(&sys, &ring, &cfg).map_err(|e| e.to_string())?;
        for (t, p) in bseries::pairings(&b, &ring, cfg.exec).iter().enumerate() {
            total += killed(&sys, p).map_err(|e| format!("{} pairing {t}: {e}", f.name))?;
        }
    }
    Ok(format!("{total} reliable coefficients vanish"))
}

fn ac4() -> Outcome {
    let mut out = Vec::new();
    for f in corpus::all() {
        let (sys, cfg) = setup(&f, 0);
        let c = groebner::minimal_gb_is_primitive_collections(&sys, &cfg.weight)
            .map_err(|e| e.to_string())?;
        ensure(c.holds(), || format!("{}: {c:?}", f.name))?;
        out.push(format!("{} {}", f.name, c.primitive_binomials.len()));
    }
    Ok(format!("binomials per fan: {}", out.join(", ")))
}

fn ac5() -> Outcome {
    let mut out = Vec::new();
    for f in corpus::all() {
        let (sys, cfg) = setup(&f, 8);
        let ring = CohomologyRing::new(&f).map_err(|e| e.to_string())?;
        let kahler = toric::kahler_cone(&f, &sys.lattice).map_err(|e| e.to_string())?;
        let locus = gkz::indicial_ideal_zero_locus(&sys, &kahler).map_err(|e| e.to_string())?;
        let alpha = sys.canonical_alpha();
        let rays = f.j_rays();
        let half_at_zero = (0..f.j_len()).all(|j| {
            alpha.0[j]
                == if rays[j].is_none() {
                    rat(-1, 2)
                } else {
                    rat(0, 1)
                }
        });
        ensure(locus == vec![alpha.clone()] && half_at_zero, || {
            format!("{}: locus {locus:?}", f.name)
        })?;
        for chart in degeneracy::subdivide_kahler_cone(&sys).map_err(|e| e.to_string())? {
            let r = degeneracy::certificate_report(&sys, &ring, &chart, &cfg)
                .map_err(|e| e.to_string())?;
            ensure(r.passed() && r.log_free_rank == 1, || {
                format!("{}: {:?}", f.name, r.clauses)
            })?;
        }
        out.push(f.name.clone());
    }
    Ok(format!("certified: {}", out.join(", ")))
}

fn ac6() -> Outcome {
    let mut n = 0;
    for f in corpus::all() {
        let sys = build_system(&f).map_err(|e| e.to_string())?;
        let ring = CohomologyRing::new(&f).map_err(|e| e.to_string())?;
        let kahler = toric::kahler_cone(&f, &sys.lattice).map_err(|e| e.to_string())?;
        let samples = mori_vanishing_samples(&sys, &kahler, 10);
        ensure(samples.len() == 10, || {
            format!("{}: only {} samples", f.name, samples.len())
        })?;
        for l in &samples {
            let lam = sys.lattice.coords(l).ok_or("sample not in L_ext")?;
            ensure(!toric::in_mori_cone(&kahler, &lam), || {
                format!("{l:?} is in NE(X)")
            })?;
            let d = gkz::j_classes(&f, &ring);
            let o = bseries::o_coefficient(&ring, &d, &sys.canonical_alpha().0, &l.to_i64());
            ensure(o.is_zero(), || {
                format!("{}: O at {:?} is nonzero", f.name, l.to_i64())
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} samples vanish"))
}

fn ac7() -> Outcome {
    let mut relations = 0;
    for f in corpus::all() {
        let sys = build_system(&f).map_err(|e| e.to_string())?;
        for b in &sys.lattice.basis {
            ensure(sys.in_kernel(b), || {
                format!("{}: basis vector {b:?} not in the kernel", f.name)
            })?;
        }
        for pc in &sys.collections {
            ensure(sys.in_kernel(&pc.l_ext), || {
                format!("{}: relation not in the kernel", f.name)
            })?;
            ensure(pc.c0.iter().all(|c| !c.is_negative()), || {
                format!("{}: c0 {:?}", f.name, pc.c0)
            })?;
            let (plus, _) = split_positive_negative(&pc.l_ext);
            ensure(plus.0.iter().all(|x| x <= &num::BigInt::one()), || {
                "l+ entries exceed 1".into()
            })?;
            relations += 1;
        }
        let t = triangulation::maximal_triangulation(&sys).map_err(|e| e.to_string())?;
        for s in &t.simplices {
            for i in 0..f.r() {
                ensure(s.contains(&f.j_of_block(i)), || {
                    format!("{}: simplex {s:?} misses nu_{},0", f.name, i + 1)
                })?;
            }
        }
    }
    Ok(format!("{relations} primitive relations"))
}

fn ac8() -> Outcome {
    let mut out = Vec::new();
    for f in corpus::all() {
        let d = polytope::dual_nef_partition(&f).map_err(|e| e.to_string())?;
        ensure(polytope::is_reflexive(&d.nabla_sum), || {
            format!("{}: nabla not reflexive", f.name)
        })?;
        let dual = polytope::polar_dual(&d.nabla_sum).map_err(|e| e.to_string())?;
        let back = polytope::polar_dual(&dual).map_err(|e| e.to_string())?;
        ensure(back == d.nabla_sum, || {
            format!("{}: double dual differs", f.name)
        })?;
        out.push(format!("{} {}", f.name, d.nabla_sum.vertices.len()));
    }
    Ok(format!("nabla vertex counts: {}", out.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "AC1",
            "P1 period coefficients match the residue oracle",
            ac1,
            Some(Duration::from_secs(1)),
        ),
        (
            "AC2",
            "normalized volume = maximal cones = dim H",
            ac2,
            Some(Duration::from_secs(1)),
        ),
        (
            "AC3",
            "GKZ operators annihilate the series at order 8",
            ac3,
            Some(Duration::from_secs(30)),
        ),
        (
            "AC4",
            "primitive binomials form the reduced Groebner basis",
            ac4,
            None,
        ),
        (
            "AC5",
            "maximal degeneracy certificate at order 8",
            ac5,
            None,
        ),
        (
            "AC6",
            "B-coefficients vanish outside the Mori cone",
            ac6,
            None,
        ),
        (
            "AC7",
            "kernel, c_(i,0) and maximal triangulation structure",
            ac7,
            None,
        ),
        ("AC8", "dual nef-partition round trip", ac8, None),
    ];
    let mut failed = 0;
    for (id, what, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| (*s).to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id} {what} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {what} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
