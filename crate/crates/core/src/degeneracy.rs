//! Canonical coordinates on unimodular subcones of the Kähler cone and the
//! maximal-degeneracy certificate.
//!
//! A chart is a unimodular simplicial cone tau with rays `y_1..y_k` (dual
//! coordinates of the L_ext basis). Its dual basis `l^(1)..l^(k)` spans
//! `tau^dual` in L_ext, and the coordinates are
//! `z_k = (-1)^{sum_i l^(k)_{i,0}} x^{l^(k)}` in the GKZ variables. Logs are
//! carried as `L_k = log x^{l^(k)}`, which keeps every coefficient rational.

use num::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::{CohClass, CohomologyRing};
use crate::error::{Error, Result};
use crate::gkz::{self, j_classes, GkzSystem};
use crate::linalg::{self, fmt_rat, rat, Int, LatticeVector, Rat};
use crate::series::bseries::{log_expansion, o_coefficient};
use crate::series::{self, enumerate_region, phi_sign, LogSeries, Region, SeriesConfig};
use crate::toric::{self, ConeDescription};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalChart {
    /// Rays of tau in dual coordinates.
    pub rays: Vec<Vec<i64>>,
    /// The basis `l^(k)` over J.
    pub basis: Vec<Vec<i64>>,
    /// `(-1)^{sum_i l^(k)_{i,0}}`.
    pub signs: Vec<i64>,
}

impl CanonicalChart {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// tau as a cone description; its inequalities are the dual basis.
    pub fn cone(&self, sys: &GkzSystem) -> ConeDescription {
        let mut ineq: Vec<Vec<Int>> = self
            .basis
            .iter()
            .map(|l| {
                sys.lattice
                    .coords(&LatticeVector::from_i64(l))
                    .expect("chart basis lies in L_ext")
            })
            .collect();
        ineq.sort();
        let mut rays: Vec<Vec<Int>> = self
            .rays
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        rays.sort();
        ConeDescription {
            inequalities: ineq,
            rays,
        }
    }

    /// Exponents `m` with `l = sum m_k l^(k)`.
    pub fn exponents(&self, sys: &GkzSystem, l: &[i64]) -> Result<Vec<i64>> {
        let lam = sys
            .lattice
            .coords_rat(&LatticeVector::from_i64(l))
            .ok_or_else(|| Error::NotInKernel(l.iter().map(ToString::to_string).collect()))?;
        let m: Vec<Rat> = self
            .rays
            .iter()
            .map(|y| y.iter().zip(&lam).map(|(&a, b)| rat(a, 1) * b).sum())
            .collect();
        if m.iter().any(|x| !x.is_integer() || x.is_negative()) {
            return Err(Error::NegativeExponent {
                l: l.to_vec(),
                m: m.iter().map(fmt_rat).collect(),
            });
        }
        Ok(m.iter()
            .map(|x| i64::try_from(x.to_integer()).expect("small exponent"))
            .collect())
    }

    /// `prod_k s_k^{m_k}`.
    pub fn sign_of(&self, m: &[i64]) -> Rat {
        let odd = self
            .signs
            .iter()
            .zip(m)
            .filter(|(&s, &e)| s < 0 && e % 2 != 0)
            .count();
        if odd % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (1..=self.rank()).map(|k| format!("z{k}")).collect()
    }
}

fn i64_rows(rows: &[Vec<Int>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).expect("small entry"))
                .collect()
        })
        .collect()
}

fn abs_det(rows: &[Vec<i64>]) -> Int {
    let ints: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    linalg::det_int_rows(&ints).abs()
}

/// Splits a pointed full-dimensional cone of rank at most 3 into
/// simplicial cones.
fn simplicial_pieces(cone: &ConeDescription, rank: usize) -> Result<Vec<Vec<Vec<i64>>>> {
    let rays = i64_rows(&cone.rays);
    if rays.len() == rank {
        return Ok(vec![rays]);
    }
    if rank != 3 {
        return Err(Error::SubdivisionFailed(format!(
            "non-simplicial cone with {} rays in rank {rank}",
            rays.len()
        )));
    }
    // cone over v0 and each facet that misses it
    let v0 = rays[0].clone();
    let mut out = Vec::new();
    for g in &cone.inequalities {
        let g = i64_rows(std::slice::from_ref(g)).remove(0);
        let dot = |v: &[i64]| v.iter().zip(&g).map(|(a, b)| a * b).sum::<i64>();
        if dot(&v0) == 0 {
            continue;
        }
        let facet: Vec<Vec<i64>> = rays.iter().filter(|r| dot(r) == 0).cloned().collect();
        if facet.len() != 2 {
            return Err(Error::SubdivisionFailed(format!(
                "facet {g:?} is not simplicial"
            )));
        }
        let mut piece = vec![v0.clone()];
        piece.extend(facet);
        out.push(piece);
    }
    Ok(out)
}

/// Shortest nonzero lattice point `sum c_s y_s` with `0 <= c_s < 1`,
/// ties broken lexicographically.
fn parallelepiped_witness(rays: &[Vec<i64>]) -> Option<Vec<i64>> {
    let k = rays.len();
    let bound: Vec<i64> = (0..k)
        .map(|j| rays.iter().map(|r| r[j].abs()).sum())
        .collect();
    let cols: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
        .collect();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut p = bound.iter().map(|b| -b).collect::<Vec<_>>();
    loop {
        if p.iter().any(|&x| x != 0) {
            let target: Vec<Rat> = p.iter().map(|&x| rat(x, 1)).collect();
            if let Some(c) = linalg::coordinates_in_span(&cols, &target) {
                if c.iter().all(|x| !x.is_negative() && *x < Rat::one()) {
                    let norm: i64 = p.iter().map(|x| x * x).sum();
                    let cand = (norm, p.clone());
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let mut t = 0;
        while t < k {
            p[t] += 1;
            if p[t] <= bound[t] {
                break;
            }
            p[t] = -bound[t];
            t += 1;
        }
        if t == k {
            break;
        }
    }
    best.map(|b| b.1)
}

/// Repeated stellar subdivision until every cone is unimodular.
fn unimodular_refinement(piece: Vec<Vec<i64>>) -> Result<Vec<Vec<Vec<i64>>>> {
    let mut todo = vec![piece];
    let mut done = Vec::new();
    let mut steps = 0;
    while let Some(c) = todo.pop() {
        steps += 1;
        if steps > 10_000 {
            return Err(Error::SubdivisionFailed(
                "refinement did not terminate".into(),
            ));
        }
        if abs_det(&c).is_zero() {
            return Err(Error::SubdivisionFailed(format!("degenerate cone {c:?}")));
        }
        if abs_det(&c).is_one() {
            done.push(c);
            continue;
        }
        let w = parallelepiped_witness(&c)
            .ok_or_else(|| Error::SubdivisionFailed(format!("no witness in cone {c:?}")))?;
        let cols: Vec<Vec<Rat>> = c
            .iter()
            .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
            .collect();
        let coeffs =
            linalg::coordinates_in_span(&cols, &w.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>())
                .expect("witness lies in the span");
        for (s, cs) in coeffs.iter().enumerate() {
            if cs.is_positive() {
                let mut next = c.clone();
                next[s] = w.clone();
                todo.push(next);
            }
        }
    }
    Ok(done)
}

/// One canonical chart per cone of a unimodular subdivision of the closed
/// Kähler cone.
pub fn subdivide_kahler_cone(sys: &GkzSystem) -> Result<Vec<CanonicalChart>> {
    let f = &sys.fan;
    let rank = sys.lattice.rank();
    let kahler = toric::kahler_cone(f, &sys.lattice)?;
    if rank > 3 && kahler.rays.len() != rank {
        return Err(Error::SubdivisionFailed(format!("rank {rank} exceeds 3")));
    }
    let mut charts = Vec::new();
    for piece in simplicial_pieces(&kahler, rank)? {
        for mut rays in unimodular_refinement(piece)? {
            rays.sort();
            charts.push(chart_from_rays(sys, rays)?);
        }
    }
    charts.sort_by(|a, b| a.rays.cmp(&b.rays));
    Ok(charts)
}

/// The chart of a unimodular simplicial cone.
pub fn chart_from_rays(sys: &GkzSystem, rays: Vec<Vec<i64>>) -> Result<CanonicalChart> {
    let k = sys.lattice.rank();
    let y: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
        .collect();
    let mut basis = Vec::with_capacity(k);
    for t in 0..k {
        let e: Vec<Rat> = (0..k)
            .map(|s| if s == t { Rat::one() } else { Rat::zero() })
            .collect();
        let lam = linalg::solve(&y, &e)
            .ok_or_else(|| Error::SubdivisionFailed(format!("singular cone {rays:?}")))?;
        if !lam.iter().all(Rat::is_integer) {
            return Err(Error::SubdivisionFailed(format!(
                "cone {rays:?} is not unimodular"
            )));
        }
        let lam: Vec<Int> = lam.iter().map(Rat::to_integer).collect();
        basis.push(sys.lattice.point(&lam));
    }
    assert!(linalg::is_unimodular_lattice_basis(
        &basis,
        &sys.lattice.basis
    )?);
    let f = &sys.fan;
    let signs = basis
        .iter()
        .map(|l| {
            let s: Int = (0..f.r()).map(|i| l.0[f.j_of_block(i)].clone()).sum();
            if (s % Int::from(2)).is_zero() {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(CanonicalChart {
        rays,
        basis: basis.iter().map(LatticeVector::to_i64).collect(),
        signs,
    })
}

fn chart_weight(chart: &CanonicalChart, w: &[Rat]) -> Vec<Rat> {
    chart
        .basis
        .iter()
        .map(|l| l.iter().zip(w).map(|(&a, b)| rat(a, 1) * b).sum())
        .collect()
}

/// Rewrites a log-free series in the GKZ variables into chart coordinates.
pub fn transport(
    sys: &GkzSystem,
    chart: &CanonicalChart,
    s: &LogSeries<Rat>,
) -> Result<LogSeries<Rat>> {
    let k = chart.rank();
    let mut out = LogSeries::new(s.alpha.clone(), chart_weight(chart, &s.weight), s.order);
    for ((l, logs), c) in &s.terms {
        if logs.iter().any(|&e| e > 0) {
            return Err(Error::InvalidInput(
                "transport expects a log-free series".into(),
            ));
        }
        let m = chart.exponents(sys, l)?;
        let sign = chart.sign_of(&m);
        out.accumulate((m, vec![0; k]), c * sign);
    }
    Ok(out)
}

/// The normalized period in the chart: the physical period is turned into
/// the GKZ variables by the quotient-torus sign map, then transported, so
/// the coefficient of `z^m` is `C_l` with `l = sum m_k l^(k)`.
pub fn period_in_chart(
    sys: &GkzSystem,
    chart: &CanonicalChart,
    cfg: &SeriesConfig,
) -> Result<LogSeries<Rat>> {
    let p = series::normalized_period_series(sys, cfg)?;
    let gkz_form = series::apply_phi(sys, &p, &sys.canonical_alpha().0);
    transport(sys, chart, &gkz_form)
}

/// Classes `T_k` with `D_J = sum_k l^(k)_J T_k`.
pub fn chart_classes(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    chart: &CanonicalChart,
) -> Result<Vec<CohClass>> {
    let d = j_classes(&sys.fan, ring);
    let k = chart.rank();
    // u_t over J with u_t . l^(s) = delta_ts, supported on rays
    let rows: Vec<Vec<Rat>> = (0..k)
        .map(|s| chart.basis[s].iter().map(|&x| rat(x, 1)).collect())
        .collect();
    let mut out = Vec::with_capacity(k);
    for t in 0..k {
        let e: Vec<Rat> = (0..k)
            .map(|s| if s == t { Rat::one() } else { Rat::zero() })
            .collect();
        let u = solve_dual(&rows, &e, &sys.fan)?;
        let mut c = ring.zero();
        for (dj, uj) in d.iter().zip(&u) {
            if !uj.is_zero() {
                c = c.add(&dj.scale(uj));
            }
        }
        out.push(c);
    }
    for (j, dj) in d.iter().enumerate() {
        let mut s = ring.zero();
        for (t, tc) in out.iter().enumerate() {
            s = s.add(&tc.scale(&rat(chart.basis[t][j], 1)));
        }
        assert_eq!(&s, dj, "D_J expands over the chart classes");
    }
    Ok(out)
}

/// A vector over J vanishing at the `(i,0)` slots with prescribed pairings.
fn solve_dual(rows: &[Vec<Rat>], rhs: &[Rat], f: &crate::fan::FanData) -> Result<Vec<Rat>> {
    let restricted: Vec<Vec<Rat>> = rows.iter().map(|r| f.restrict_to_i(r)).collect();
    let w = linalg::solve(&restricted, rhs)
        .ok_or_else(|| Error::InvalidInput("dual vector cannot be lifted".into()))?;
    Ok(f.lift_to_j(&w))
}

/// The B-series in the chart: keys are `(m, n)` for `z^m L^n`, with the
/// prefactor `x^alpha` implicit.
pub fn chart_b_series(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    chart: &CanonicalChart,
    cfg: &SeriesConfig,
) -> Result<LogSeries<CohClass>> {
    let kahler = toric::kahler_cone(&sys.fan, &sys.lattice)?;
    let points = enumerate_region(sys, cfg, Region::Mori(&kahler))?;
    let alpha = sys.canonical_alpha();
    let d = j_classes(&sys.fan, ring);
    let t = chart_classes(sys, ring, chart)?;
    let logs = log_expansion(ring, &t);
    let mut out = LogSeries::new(alpha.0.clone(), chart_weight(chart, &cfg.weight), cfg.order);
    for l in &points {
        let lv = l.to_i64();
        let o = o_coefficient(ring, &d, &alpha.0, &lv);
        if o.is_zero() {
            continue;
        }
        let m = chart.exponents(sys, &lv)?;
        let o = o.scale(&chart.sign_of(&m));
        for (n, tn) in &logs {
            out.accumulate((m.clone(), n.clone()), ring.mul(&o, tn));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub chart: CanonicalChart,
    pub order: i64,
    pub clauses: Vec<Clause>,
    /// Highest total log degree of each pairing, in ring-basis order.
    pub log_degrees: Vec<u32>,
    /// Cohomological degree of each ring basis element.
    pub basis_degrees: Vec<usize>,
    pub pairing_rank: usize,
    pub log_free_rank: usize,
    pub period_terms: usize,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn into_result(self) -> Result<Self> {
        match self.clauses.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::CertificateFailed {
                clause: c.name.clone(),
                detail: c.detail.clone(),
            }),
            None => Ok(self),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or_else(|e| json!({"error": e.to_string()}))
    }
}

fn clause(name: &str, passed: bool, detail: String) -> Clause {
    Clause {
        name: name.into(),
        passed,
        detail,
    }
}

/// Builds the certificate without failing on violated clauses.
pub fn certificate_report(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    chart: &CanonicalChart,
    cfg: &SeriesConfig,
) -> Result<CertificateReport> {
    let mut clauses = Vec::new();

    // (1) holomorphy of the normalized period in the chart
    let period = period_in_chart(sys, chart, cfg);
    let (holo, detail, period_terms) = match &period {
        Ok(p) => {
            let k = chart.rank();
            let one = p.get(&vec![0; k], &vec![0; k]).cloned();
            let ok =
                one == Some(Rat::one()) && p.terms.keys().all(|(m, _)| m.iter().all(|&e| e >= 0));
            (
                ok,
                format!(
                    "{} terms, constant term {}",
                    p.len(),
                    one.map_or("missing".into(), |c| fmt_rat(&c))
                ),
                p.len(),
            )
        }
        Err(e) => (false, e.to_string(), 0),
    };
    clauses.push(clause("holomorphic period", holo, detail));

    // (2) exactly one log-free pairing, proportional to <B, 1^dual>
    let b = chart_b_series(sys, ring, chart, cfg)?;
    let dim = ring.dim();
    let pairings: Vec<LogSeries<Rat>> = (0..dim)
        .map(|t| series::pair_with_dual(&b, &series::bseries::dual_functional(ring, t)))
        .collect();
    let keys: Vec<series::Key> = {
        let mut ks: Vec<series::Key> = pairings
            .iter()
            .flat_map(|p| p.terms.keys().cloned())
            .collect();
        ks.sort();
        ks.dedup();
        ks
    };
    let matrix = |filter: &dyn Fn(&series::Key) -> bool| -> Vec<Vec<Rat>> {
        keys.iter()
            .filter(|k| filter(k))
            .map(|k| {
                pairings
                    .iter()
                    .map(|p| p.terms.get(k).cloned().unwrap_or_else(Rat::zero))
                    .collect()
            })
            .collect()
    };
    let full = matrix(&|_| true);
    let pairing_rank = linalg::rank(&full);
    let log_rows = matrix(&|k| k.1.iter().any(|&e| e > 0));
    let log_free = linalg::nullspace(&log_rows, dim);
    let log_degrees: Vec<u32> = pairings.iter().map(LogSeries::max_log_degree).collect();
    let one_index = ring
        .degrees
        .iter()
        .position(|&d| d == 0)
        .expect("unit in the basis");
    let mut ok2 = pairing_rank == dim && log_free.len() == 1;
    let mut detail = format!(
        "rank {pairing_rank} of {dim}, {} log-free combination(s), log degrees {log_degrees:?}",
        log_free.len()
    );
    if ok2 {
        let a = &log_free[0];
        let proportional = a
            .iter()
            .enumerate()
            .all(|(t, x)| (t == one_index) != x.is_zero());
        let stratified = log_degrees
            .iter()
            .zip(&ring.degrees)
            .all(|(&l, &d)| l as usize == d);
        let matches_period = match &period {
            Ok(p) => proportional_series(&pairings[one_index], p),
            Err(_) => false,
        };
        ok2 = proportional && stratified && matches_period;
        detail.push_str(&format!(
            "; proportional to the unit pairing: {proportional}; log degree equals cohomological degree: {stratified}; \
             agrees with the period up to a scalar: {matches_period}"
        ));
    }
    clauses.push(clause("unique log-free solution", ok2, detail));

    // (3) the indicial zero locus is the canonical exponent
    let tau = chart.cone(sys);
    let (ok3, detail) = match gkz::indicial_ideal_zero_locus(sys, &tau) {
        Ok(locus) if locus == vec![sys.canonical_alpha()] => {
            (true, format!("alpha = {:?}", locus[0].to_strings()))
        }
        Ok(locus) => (
            false,
            format!(
                "locus {:?}",
                locus.iter().map(|a| a.to_strings()).collect::<Vec<_>>()
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    clauses.push(clause("indicial locus", ok3, detail));

    Ok(CertificateReport {
        chart: chart.clone(),
        order: cfg.order,
        clauses,
        log_degrees,
        basis_degrees: ring.degrees.clone(),
        pairing_rank,
        log_free_rank: log_free.len(),
        period_terms,
    })
}

fn proportional_series(a: &LogSeries<Rat>, b: &LogSeries<Rat>) -> bool {
    let Some((a0, b0)) = a
        .terms
        .iter()
        .next()
        .and_then(|(k, v)| b.terms.get(k).map(|w| (v, w)))
    else {
        return false;
    };
    let scale = b0 / a0;
    a.len() == b.len()
        && a.terms
            .iter()
            .all(|(k, v)| b.terms.get(k) == Some(&(v * &scale)))
}

/// The certificate; fails with `CertificateFailed` naming the first
/// violated clause.
pub fn maximal_degeneracy_check(
    sys: &GkzSystem,
    ring: &CohomologyRing,
    chart: &CanonicalChart,
    cfg: &SeriesConfig,
) -> Result<CertificateReport> {
    certificate_report(sys, ring, chart, cfg)?.into_result()
}

/// Coefficient of the chart period at `z^m`, recomputed from the residue
/// oracle with the sign bookkeeping done by hand.
pub fn oracle_chart_coefficient(sys: &GkzSystem, chart: &CanonicalChart, m: &[i64]) -> Result<Rat> {
    let mut l = LatticeVector::zeros(sys.j_len());
    for (lk, &mk) in chart.basis.iter().zip(m) {
        l = l.add(&LatticeVector::from_i64(lk).scale(&Int::from(mk)));
    }
    let c = series::residue_oracle(sys, &l)?;
    Ok(c * phi_sign(sys, &l.to_i64()) * chart.sign_of(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gkz::build_system;

    fn setup(f: &crate::fan::FanData) -> (GkzSystem, CohomologyRing, SeriesConfig) {
        let sys = build_system(f).unwrap();
        let ring = CohomologyRing::new(f).unwrap();
        let w = toric::default_weight(f, &sys.lattice).unwrap();
        (sys, ring, SeriesConfig::new(w, 6))
    }

    #[test]
    fn charts() {
        let (sys, _, _) = setup(&corpus::p2());
        let c = subdivide_kahler_cone(&sys).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].basis, vec![vec![-3, 1, 1, 1]]);
        assert_eq!(c[0].signs, vec![-1]);
        let (sys, _, _) = setup(&corpus::p1());
        let c = subdivide_kahler_cone(&sys).unwrap();
        assert_eq!(
            (c[0].basis.clone(), c[0].signs.clone()),
            (vec![vec![-2, 1, 1]], vec![1])
        );
        let (sys, _, _) = setup(&corpus::p1xp1_r2());
        let c = subdivide_kahler_cone(&sys).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].signs, vec![1, 1]);
    }

    #[test]
    fn stellar_subdivision_of_a_non_unimodular_cone() {
        let pieces = unimodular_refinement(vec![vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(pieces.iter().all(|p| abs_det(p).is_one()));
        let pieces = unimodular_refinement(vec![vec![1, 0], vec![1, 3]]).unwrap();
        assert!(pieces.iter().all(|p| abs_det(p).is_one()));
        assert_eq!(pieces.len(), 3);
    }

    #[test]
    fn p1_period_in_chart() {
        let (sys, _, cfg) = setup(&corpus::p1());
        let chart = &subdivide_kahler_cone(&sys).unwrap()[0];
        let p = period_in_chart(&sys, chart, &cfg).unwrap();
        assert_eq!(p.get(&[0], &[0]), Some(&rat(1, 1)));
        assert_eq!(p.get(&[1], &[0]), Some(&rat(3, 4)));
        assert_eq!(p.get(&[2], &[0]), Some(&rat(105, 64)));
    }

    #[test]
    fn p2_period_in_chart_matches_oracle() {
        let (sys, _, cfg) = setup(&corpus::p2());
        let chart = &subdivide_kahler_cone(&sys).unwrap()[0];
        let p = period_in_chart(&sys, chart, &cfg).unwrap();
        assert_eq!(p.get(&[1], &[0]), Some(&rat(15, 8)));
        for ((m, _), c) in &p.terms {
            assert_eq!(&oracle_chart_coefficient(&sys, chart, m).unwrap(), c);
        }
    }

    #[test]
    fn negative_exponent_is_reported() {
        let (sys, _, _) = setup(&corpus::p1());
        let chart = &subdivide_kahler_cone(&sys).unwrap()[0];
        assert!(matches!(
            chart.exponents(&sys, &[2, -1, -1]),
            Err(Error::NegativeExponent { .. })
        ));
    }

    #[test]
    fn certificates_pass_on_corpus() {
        for f in corpus::all() {
            let (sys, ring, cfg) = setup(&f);
            for chart in subdivide_kahler_cone(&sys).unwrap() {
                let r = maximal_degeneracy_check(&sys, &ring, &chart, &cfg);
                assert!(r.is_ok(), "{}: {r:?}", f.name);
                let r = r.unwrap();
                assert_eq!(r.log_free_rank, 1);
                assert_eq!(r.pairing_rank, ring.dim());
            }
        }
    }

    #[test]
    fn p2_log_stratification() {
        let (sys, ring, cfg) = setup(&corpus::p2());
        let chart = &subdivide_kahler_cone(&sys).unwrap()[0];
        let r = certificate_report(&sys, &ring, chart, &cfg).unwrap();
        let mut l = r.log_degrees.clone();
        l.sort();
        assert_eq!(l, vec![0, 1, 2]);
    }

    #[test]
    fn broken_chart_fails_the_certificate() {
        let (sys, ring, cfg) = setup(&corpus::p1());
        // the opposite half-line is not inside the Kähler cone
        let chart = chart_from_rays(&sys, vec![vec![-1]]).unwrap();
        let r = certificate_report(&sys, &ring, &chart, &cfg);
        match r {
            Ok(rep) => assert!(!rep.passed()),
            Err(e) => assert!(matches!(e, Error::NegativeExponent { .. })),
        }
    }
}
