//! Command dispatch: each command runs one module pipeline and renders a
//! [`Report`].

use serde_json::{json, Value};

use crate::checks;
use crate::cohomology::CohomologyRing;
use crate::degeneracy;
use crate::error::{Error, Result};
use crate::fan::{self, FanData};
use crate::gkz::{self, build_system, GkzSystem};
use crate::groebner::{self, monomial};
use crate::io::InputSpec;
use crate::linalg::{fmt_rat, Rat};
use crate::par::Execution;
use crate::polytope;
use crate::report::{i64s, int_rows_json, ints, matrix_text, rats, rats_json, Markdown, Report};
use crate::series::{self, bseries, enumerate_region, Region, SeriesConfig};
use crate::toric;
use crate::triangulation::{self, PointConfiguration};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    System,
    Cohomology,
    Series,
    Bseries,
    Fans,
    Groebner,
    Degeneracy,
    CheckAll,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::System,
        Command::Cohomology,
        Command::Series,
        Command::Bseries,
        Command::Fans,
        Command::Groebner,
        Command::Degeneracy,
        Command::CheckAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::System => "system",
            Command::Cohomology => "cohomology",
            Command::Series => "series",
            Command::Bseries => "bseries",
            Command::Fans => "fans",
            Command::Groebner => "groebner",
            Command::Degeneracy => "degeneracy",
            Command::CheckAll => "check-all",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub order: Option<i64>,
    /// Ample weight over the input rays, in input order.
    pub weight: Option<Vec<Rat>>,
    pub exec: Execution,
}

/// Parses a comma-separated list of exact rationals.
pub fn parse_weight(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|t| {
            crate::linalg::parse_rat(t.trim()).ok_or_else(|| {
                Error::InvalidInput(format!("weight entry '{t}' is not a rational number"))
            })
        })
        .collect()
}

struct Session {
    spec: InputSpec,
    fan: FanData,
    order: i64,
    exec: Execution,
}

impl Session {
    fn system(&self) -> Result<GkzSystem> {
        build_system(&self.fan)
    }

    fn config(&self, sys: &GkzSystem) -> Result<SeriesConfig> {
        let w = toric::resolve_weight(&self.fan, &sys.lattice, None)?;
        Ok(SeriesConfig::new(w, self.order).with_exec(self.exec))
    }

    fn input_rays(&self, rays: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = rays.iter().map(|&k| self.fan.input_index[k]).collect();
        v.sort_unstable();
        v
    }
}

pub fn run_command(cmd: Command, spec: &InputSpec, flags: &Flags) -> Result<Report> {
    let mut spec = spec.clone();
    if let Some(w) = &flags.weight {
        spec.ample_weight = Some(w.clone());
    }
    let fan = spec.to_fan()?;
    let order = flags.order.unwrap_or(spec.order);
    if order < 0 {
        return Err(Error::InvalidInput(format!(
            "order must be non-negative, got {order}"
        )));
    }
    let s = Session {
        spec,
        fan,
        order,
        exec: flags.exec,
    };
    let (json, markdown, passed) = match cmd {
        Command::Validate => validate(&s)?,
        Command::System => system(&s)?,
        Command::Cohomology => cohomology(&s)?,
        Command::Series => series_cmd(&s)?,
        Command::Bseries => bseries_cmd(&s)?,
        Command::Fans => fans(&s)?,
        Command::Groebner => groebner_cmd(&s)?,
        Command::Degeneracy => degeneracy_cmd(&s)?,
        Command::CheckAll => check_all(&s)?,
    };
    Ok(Report {
        command: cmd.name().into(),
        input: s.spec.name.clone(),
        passed,
        json,
        markdown,
    })
}

type Output = (Value, String, bool);

fn title(s: &Session, what: &str) -> Markdown {
    Markdown::new(&format!("{what}: {}", s.spec.name))
}

fn validate(s: &Session) -> Result<Output> {
    let v = fan::validate_fan(&s.fan)?;
    let mut md = title(s, "validate");
    md.kv("dimension", s.spec.rank)
        .kv("rays", s.spec.rays.len())
        .kv("maximal cones", s.spec.max_cones.len())
        .kv("nef-partition blocks", s.spec.nef_partition.len())
        .kv("primitive", v.primitive)
        .kv("simplicial", v.simplicial)
        .kv("smooth", v.smooth)
        .kv("complete", v.complete)
        .kv("partition exact", v.partition_exact)
        .kv("walls checked", v.walls_checked)
        .kv("directions sampled", v.directions_sampled)
        .end_list();
    let json = json!({
        "dimension": s.spec.rank,
        "rays": s.spec.rays,
        "max_cones": s.spec.max_cones,
        "nef_partition": s.spec.nef_partition,
        "validation": v,
    });
    Ok((json, md.finish(), true))
}

fn system(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let f = &s.fan;
    let cfg = s.config(&sys)?;
    let kahler = toric::kahler_cone(f, &sys.lattice)?;
    let d_names: Vec<String> = sys.labels.iter().map(|l| format!("d_{l}")).collect();
    let a_names: Vec<String> = sys.labels.iter().map(|l| format!("a_{l}")).collect();

    let collections: Vec<Value> = sys
        .collections
        .iter()
        .map(|pc| {
            json!({
                "rays": s.input_rays(&pc.rays),
                "sigma": s.input_rays(&pc.sigma),
                "l_ext": pc.l_ext.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "c0": pc.c0.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    let boxes: Vec<String> = sys
        .box_operators()
        .iter()
        .map(|b| {
            format!(
                "{} - {}",
                monomial(&b.plus.to_i64(), &d_names),
                monomial(&b.minus.to_i64(), &d_names)
            )
        })
        .collect();
    let eulers: Vec<String> = sys
        .euler_operators()
        .iter()
        .map(|e| {
            let terms: Vec<String> = e
                .coeffs
                .iter()
                .zip(&sys.labels)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, l)| {
                    if c == 1 {
                        format!("x_{l} d_{l}")
                    } else {
                        format!("{c} x_{l} d_{l}")
                    }
                })
                .collect();
            format!("{} - ({})", terms.join(" + "), fmt_rat(&e.beta))
        })
        .collect();
    let indicial: Vec<String> = sys
        .collections
        .iter()
        .map(|pc| gkz::indicial_polynomial(&sys, &pc.l_ext).map(|p| p.render(&a_names)))
        .collect::<Result<_>>()?;
    let locus = gkz::indicial_ideal_zero_locus(&sys, &kahler)?;
    let dual = polytope::dual_nef_partition(f)?;

    let mut md = title(s, "system");
    md.section("Point configuration")
        .line(&format!("columns: {}", sys.labels.join(", ")))
        .code(&matrix_text(&sys.a_ext.to_rows()))
        .kv("beta", rats(&sys.beta))
        .kv(
            "L_ext basis",
            sys.lattice
                .basis
                .iter()
                .map(|b| ints(&b.0))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .kv("weight", rats(&cfg.weight))
        .end_list();
    md.section("Primitive relations").table(
        &["collection", "sigma", "l_ext", "c_(i,0)"],
        &sys.collections
            .iter()
            .map(|pc| {
                vec![
                    format!("{:?}", s.input_rays(&pc.rays)),
                    format!("{:?}", s.input_rays(&pc.sigma)),
                    ints(&pc.l_ext.0),
                    ints(&pc.c0),
                ]
            })
            .collect::<Vec<_>>(),
    );
    md.section("Operators")
        .code(&boxes.join("\n"))
        .code(&eulers.join("\n"));
    md.section("Indicial ideal")
        .code(&indicial.join("\n"))
        .kv(
            "zero locus on the Kähler cone",
            locus
                .iter()
                .map(|a| rats(&a.0))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .kv(
            "Kähler cone rays",
            kahler
                .rays
                .iter()
                .map(|r| ints(r))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .end_list();
    md.section("Dual nef-partition")
        .kv(
            "nabla vertices",
            dual.nabla_sum
                .vertices
                .iter()
                .map(|v| i64s(v))
                .collect::<Vec<_>>()
                .join(" "),
        )
        .kv(
            "dual vertices",
            dual.nabla_dual
                .vertices
                .iter()
                .map(|v| i64s(v))
                .collect::<Vec<_>>()
                .join(" "),
        )
        .end_list();

    let json = json!({
        "labels": sys.labels,
        "a": int_rows_json(&sys.a.to_rows()),
        "a_ext": int_rows_json(&sys.a_ext.to_rows()),
        "beta": rats_json(&sys.beta),
        "lattice_basis": int_rows_json(&sys.lattice.basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>()),
        "weight": rats_json(&cfg.weight),
        "primitive_relations": collections,
        "box_operators": boxes,
        "euler_operators": eulers,
        "indicial_polynomials": indicial,
        "indicial_zero_locus": locus.iter().map(|a| a.to_strings()).collect::<Vec<_>>(),
        "kahler_cone": kahler,
        "dual_nef_partition": {
            "nabla": dual.nabla.iter().map(|p| &p.vertices).collect::<Vec<_>>(),
            "nabla_sum": dual.nabla_sum.vertices,
            "nabla_dual": dual.nabla_dual.vertices,
            "deltas": dual.deltas.iter().map(|p| &p.vertices).collect::<Vec<_>>(),
        },
    });
    Ok((json, md.finish(), true))
}

fn cohomology(s: &Session) -> Result<Output> {
    let ring = CohomologyRing::new(&s.fan)?;
    let summary = ring.summary();
    let sr: Vec<Vec<usize>> = summary
        .stanley_reisner
        .iter()
        .map(|m| s.input_rays(m))
        .collect();
    let mut md = title(s, "cohomology");
    md.kv("dimension", summary.dimension)
        .kv("betti numbers", format!("{:?}", summary.betti))
        .kv("basis", summary.basis.join(", "))
        .kv(
            "Stanley-Reisner generators (input ray indices)",
            format!("{sr:?}"),
        )
        .kv("top integral of the point class", &summary.top_integral)
        .end_list();
    let json = json!({
        "dimension": summary.dimension,
        "betti": summary.betti,
        "basis": summary.basis,
        "stanley_reisner": sr,
        "top_integral": summary.top_integral,
    });
    Ok((json, md.finish(), true))
}

fn series_cmd(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let cfg = s.config(&sys)?;
    let points = enumerate_region(&sys, &cfg, Region::Effective)?;
    let charts = degeneracy::subdivide_kahler_cone(&sys)?;
    let chart = charts
        .first()
        .ok_or_else(|| Error::SubdivisionFailed("no chart".into()))?;
    let mut rows = Vec::new();
    let mut terms = Vec::new();
    for l in &points {
        let li = l.to_i64();
        let c = series::period_coefficient_c(&sys, l)?;
        let lam = sys
            .lattice
            .coords(l)
            .expect("enumerated points lie in L_ext");
        let m = chart.exponents(&sys, &li)?;
        let deg = toric::weight_degree(&cfg.weight, l);
        rows.push(vec![
            ints(&lam),
            i64s(&li),
            fmt_rat(&deg),
            i64s(&m),
            fmt_rat(&c),
        ]);
        terms.push(json!({
            "lambda": lam.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "l": li,
            "degree": fmt_rat(&deg),
            "chart_exponent": m,
            "coefficient": fmt_rat(&c),
        }));
    }
    let gamma = series::gamma_series(&sys, &sys.canonical_alpha(), &cfg)?;
    let in_chart = degeneracy::period_in_chart(&sys, chart, &cfg)?;
    let mut md = title(s, "series");
    md.kv("order", s.order)
        .kv("weight", rats(&cfg.weight))
        .kv("canonical alpha", rats(&sys.canonical_alpha().0))
        .kv(
            "chart basis",
            chart
                .basis
                .iter()
                .map(|b| i64s(b))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .kv("gamma series terms", gamma.len())
        .end_list();
    md.section("Normalized period coefficients")
        .table(&["lambda", "l", "w.l", "z exponent", "coefficient"], &rows);
    let json = json!({
        "order": s.order,
        "weight": rats_json(&cfg.weight),
        "alpha": sys.canonical_alpha().to_strings(),
        "chart": chart,
        "normalized_period": terms,
        "period_in_chart": in_chart.to_json(&[]),
        "gamma_series": gamma.to_json(&[]),
    });
    Ok((json, md.finish(), true))
}

fn bseries_cmd(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let cfg = s.config(&sys)?;
    let ring = CohomologyRing::new(&s.fan)?;
    let b = series::b_series(&sys, &ring, &cfg)?;
    let pairings = bseries::pairings(&b, &ring, cfg.exec);
    let rank = checks::pairing_rank(&pairings);
    let mut rows = Vec::new();
    for ((l, m), c) in &b.terms {
        let class: Vec<String> =
            c.0.iter()
                .zip(&ring.labels)
                .filter(|(x, _)| !num::Zero::is_zero(*x))
                .map(|(x, name)| format!("{} {name}", fmt_rat(x)))
                .collect();
        rows.push(vec![i64s(l), format!("{m:?}"), class.join(" + ")]);
    }
    let mut md = title(s, "bseries");
    md.kv("order", s.order)
        .kv("basis", ring.labels.join(", "))
        .kv("terms", b.len())
        .kv("pairing rank", rank)
        .kv(
            "log degree of each pairing",
            format!(
                "{:?}",
                pairings
                    .iter()
                    .map(|p| p.max_log_degree())
                    .collect::<Vec<_>>()
            ),
        )
        .end_list();
    md.section("Terms (l, log exponents, coefficient)")
        .table(&["l", "log exponents", "class"], &rows);
    let json = json!({
        "order": s.order,
        "basis": ring.labels,
        "series": b.to_json(&ring.labels),
        "pairing_rank": rank,
        "pairing_log_degrees": pairings.iter().map(|p| p.max_log_degree()).collect::<Vec<_>>(),
    });
    Ok((json, md.finish(), true))
}

fn fans(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let pc = PointConfiguration::from_system(&sys);
    let t = triangulation::maximal_triangulation(&sys)?;
    let vol = triangulation::normalized_volume(&pc, &t)?;
    let sc = triangulation::secondary_cone(&sys, &pc, &t)?;
    let kahler = toric::kahler_cone(&s.fan, &sys.lattice)?;
    let name = |simplex: &Vec<usize>| {
        simplex
            .iter()
            .map(|&k| pc.labels[k].clone())
            .collect::<Vec<_>>()
    };
    let mut md = title(s, "fans");
    md.section("Maximal triangulation")
        .line(
            &t.simplices
                .iter()
                .map(|x| format!("{{{}}}", name(x).join(", ")))
                .collect::<Vec<_>>()
                .join(" "),
        )
        .kv("normalized volume", &vol)
        .kv("maximal cones", s.fan.max_cones.len())
        .kv(
            "secondary cone rays",
            sc.cone
                .rays
                .iter()
                .map(|r| ints(r))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .kv(
            "Kähler cone rays",
            kahler
                .rays
                .iter()
                .map(|r| ints(r))
                .collect::<Vec<_>>()
                .join(", "),
        )
        .kv("wall conditions", sc.walls)
        .kv("non-vertex conditions", sc.non_vertex_conditions)
        .end_list();
    let mut fan_json = Value::Null;
    if sys.lattice.rank() <= 2 {
        let (cells, complete) = triangulation::secondary_fan(&sys)?;
        let rows: Vec<Vec<String>> = cells
            .iter()
            .map(|c| {
                vec![
                    c.cone
                        .rays
                        .iter()
                        .map(|r| ints(r))
                        .collect::<Vec<_>>()
                        .join(" "),
                    c.triangulation.simplices.len().to_string(),
                ]
            })
            .collect();
        md.section("Secondary fan")
            .kv("complete", complete)
            .end_list()
            .table(&["cone rays", "simplices"], &rows);
        fan_json = json!({"complete": complete, "cells": cells});
    } else {
        md.section("Secondary fan")
            .line("not enumerated for relation lattices of rank above 2");
    }
    let json = json!({
        "labels": pc.labels,
        "maximal_triangulation": t,
        "normalized_volume": vol.to_string(),
        "secondary_cone": sc,
        "kahler_cone": kahler,
        "secondary_fan": fan_json,
    });
    Ok((json, md.finish(), true))
}

fn groebner_cmd(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let cfg = s.config(&sys)?;
    let x_names: Vec<String> = sys.labels.iter().map(|l| format!("x_{l}")).collect();
    let gb = groebner::toric_groebner_basis(&sys, &cfg.weight)?;
    let corr = groebner::minimal_gb_is_primitive_collections(&sys, &cfg.weight)?;
    let rendered: Vec<String> = gb.generators.iter().map(|g| g.render(&x_names)).collect();
    let leading: Vec<String> = gb
        .leading_terms()
        .iter()
        .map(|m| monomial(m, &x_names))
        .collect();
    let mut md = title(s, "groebner");
    md.kv("weight", rats(&cfg.weight)).end_list();
    md.section("Reduced Gröbner basis")
        .code(&rendered.join("\n"));
    md.section("Correspondence")
        .kv("leading terms", leading.join(", "))
        .kv(
            "leading side is the collection side",
            corr.leading_is_collection,
        )
        .kv("S-pairs reduce to zero", corr.s_pairs_reduce)
        .kv(
            "primitive binomials are the reduced basis",
            corr.equals_reduced_basis,
        )
        .kv(
            "leading-term ideal is Stanley-Reisner",
            corr.lt_is_stanley_reisner,
        )
        .end_list();
    let json = json!({
        "weight": rats_json(&cfg.weight),
        "basis": rendered,
        "leading_terms": leading,
        "correspondence": corr,
    });
    Ok((json, md.finish(), corr.holds()))
}

fn degeneracy_cmd(s: &Session) -> Result<Output> {
    let sys = s.system()?;
    let cfg = s.config(&sys)?;
    let ring = CohomologyRing::new(&s.fan)?;
    let charts = degeneracy::subdivide_kahler_cone(&sys)?;
    let mut md = title(s, "degeneracy");
    md.kv("order", s.order)
        .kv("charts", charts.len())
        .end_list();
    let mut reports = Vec::new();
    let mut passed = true;
    for (i, chart) in charts.iter().enumerate() {
        let r = degeneracy::certificate_report(&sys, &ring, chart, &cfg)?;
        passed &= r.passed();
        md.section(&format!("Chart {}", i + 1))
            .kv(
                "rays",
                chart
                    .rays
                    .iter()
                    .map(|r| i64s(r))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .kv(
                "basis",
                chart
                    .basis
                    .iter()
                    .map(|b| i64s(b))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .kv("signs", i64s(&chart.signs))
            .kv("pairing rank", r.pairing_rank)
            .kv("log-free combinations", r.log_free_rank)
            .end_list()
            .table(
                &["clause", "passed", "detail"],
                &r.clauses
                    .iter()
                    .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                    .collect::<Vec<_>>(),
            );
        reports.push(r.to_json());
    }
    Ok((
        json!({"order": s.order, "certificates": reports}),
        md.finish(),
        passed,
    ))
}

fn check_all(s: &Session) -> Result<Output> {
    let ctx = checks::Context::new(&s.fan, s.order, None, s.exec)?;
    let results = checks::run_all(&ctx);
    let passed = checks::all_passed(&results);
    let mut md = title(s, "check-all");
    md.kv("order", s.order)
        .kv("checks", results.len())
        .kv("failed", results.iter().filter(|r| !r.passed).count())
        .end_list()
        .table(
            &["id", "result", "detail"],
            &results
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        if r.passed { "PASS" } else { "FAIL" }.into(),
                        r.detail.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        );
    Ok((
        json!({"order": s.order, "checks": results}),
        md.finish(),
        passed,
    ))
}
