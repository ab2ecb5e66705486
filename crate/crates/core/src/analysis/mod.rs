//! Empirical checks of the reverse-greedy analysis: the serving-set triangle
//! bound, supermodularity of removal costs, the per-step increment bound,
//! the harmonic approximation bound and the single-step general inequality.

mod ball;
pub mod campaign;

use std::io;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{FacilitySet, WeightedMetricSpace};
use crate::solvers::{exact_kmedian, rgreedy, Direction, GreedyTrace, TiePolicy};

pub use crate::report::{BoundReport, Witness, FLOAT_TOLERANCE};
pub use ball::{ball_instrumentation, BallInstrumentation};

/// `H_m = 1 + 1/2 + ... + 1/m`, with `H_0 = 0`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).fold(0.0, |acc, i| acc + 1.0 / i as f64)
}

/// For every point `x`: `c(x, Q) <= 2 c(x, M) + c(x, R)` where `Q` is the
/// set of facilities of `R` serving `M`.
pub fn check_lemma1(
    space: &WeightedMetricSpace,
    r: &FacilitySet,
    m: &FacilitySet,
) -> Result<BoundReport> {
    if r.is_empty() || m.is_empty() {
        return Err(Error::domain("serving-set bound needs nonempty R and M"));
    }
    let q = space.serving_set(r, m)?;
    let tol = space.tolerance();
    let mut tightest: Option<(f64, f64, usize)> = None;
    for x in 0..space.n() {
        let lhs = space.nearest_in(x, q.members()).1;
        let rhs = 2.0 * space.nearest_in(x, m.members()).1 + space.nearest_in(x, r.members()).1;
        if lhs > rhs + tol {
            return Ok(BoundReport::compare(
                "lemma1",
                lhs,
                rhs,
                tol,
                Some(Witness::Point(x)),
            ));
        }
        if tightest.is_none_or(|(l, h, _)| rhs - lhs < h - l) {
            tightest = Some((lhs, rhs, x));
        }
    }
    let (lhs, rhs, x) = tightest.expect("space has points");
    Ok(BoundReport::compare(
        "lemma1",
        lhs,
        rhs,
        tol,
        Some(Witness::Point(x)),
    ))
}

/// `sum_{r in R \ Q} [cost(R \ {r}) - cost(R)] <= cost(Q) - cost(R)` for
/// nonempty `Q` strictly inside `R`.
pub fn check_supermodularity(
    space: &WeightedMetricSpace,
    q: &FacilitySet,
    r: &FacilitySet,
) -> Result<BoundReport> {
    space.check_set(q)?;
    space.check_set(r)?;
    if q.is_empty() || !q.is_subset(r) || q.len() == r.len() {
        return Err(Error::input(
            "supermodularity check needs a nonempty Q strictly inside R",
        ));
    }
    let cost_r = space.cost_unchecked(r.members());
    let outside: Vec<usize> = r
        .members()
        .iter()
        .copied()
        .filter(|&f| !q.contains(f))
        .collect();
    let lhs: f64 = outside
        .iter()
        .map(|&f| space.cost_unchecked(r.without(f).members()) - cost_r)
        .sum();
    let rhs = space.cost_unchecked(q.members()) - cost_r;
    Ok(BoundReport::compare(
        "supermod",
        lhs,
        rhs,
        space.tolerance(),
        Some(Witness::Points(outside)),
    ))
}

/// Per-step bound `delta_j <= 2 opt_k / (j - k)` for every step `j > k` of
/// a reverse trace, given the optimal `k`-median cost.
pub fn step_bounds_with_opt(
    trace: &GreedyTrace,
    k: usize,
    opt: f64,
    tolerance: f64,
) -> Result<Vec<BoundReport>> {
    if trace.direction != Direction::Reverse || trace.k_target > k {
        return Err(Error::input(format!(
            "step bounds need a reverse trace reaching k={k}"
        )));
    }
    Ok(trace
        .steps
        .iter()
        .filter(|s| s.step > k)
        .map(|s| {
            BoundReport::compare(
                "stepbound",
                s.delta,
                2.0 * opt / (s.step - k) as f64,
                tolerance,
                Some(Witness::Step {
                    step: s.step,
                    point: s.point,
                }),
            )
        })
        .collect())
}

/// [`step_bounds_with_opt`] with the optimum from the exact oracle.
pub fn check_step_bounds(
    space: &WeightedMetricSpace,
    trace: &GreedyTrace,
    k: usize,
) -> Result<Vec<BoundReport>> {
    if trace.n != space.n() {
        return Err(Error::input("trace does not belong to this space"));
    }
    let (_, opt) = exact_kmedian(space, k)?;
    step_bounds_with_opt(trace, k, opt, space.tolerance())
}

/// Approximation ratio against `2 H_{n-k}` given both costs. A zero optimum
/// requires a zero greedy cost and is reported as `lhs = greedy cost`,
/// `rhs = 0`.
pub fn harmonic_report(
    n: usize,
    k: usize,
    greedy_cost: f64,
    opt: f64,
    tolerance: f64,
) -> BoundReport {
    if opt <= tolerance {
        return BoundReport::compare(
            "harmonic",
            greedy_cost,
            0.0,
            tolerance,
            Some(Witness::Note("zero optimum".into())),
        );
    }
    BoundReport::compare(
        "harmonic",
        greedy_cost / opt,
        2.0 * harmonic(n - k),
        tolerance,
        None,
    )
}

pub fn check_harmonic(space: &WeightedMetricSpace, k: usize) -> Result<BoundReport> {
    check_harmonic_with(space, k, &TiePolicy::Lexicographic)
}

pub fn check_harmonic_with(
    space: &WeightedMetricSpace,
    k: usize,
    tie: &TiePolicy,
) -> Result<BoundReport> {
    let (_, opt) = exact_kmedian(space, k)?;
    let trace = rgreedy(space, k, tie)?;
    Ok(harmonic_report(
        space.n(),
        k,
        trace.final_cost(),
        opt,
        space.tolerance(),
    ))
}

/// For any `R` with `|R| = j >= 2`: `min_r [cost(R \ {r}) - cost(R)] <= 2
/// cost(mu*) / (j - 1)` with `mu*` the optimal 1-median. The witness is the
/// cheapest facility to remove.
pub fn check_general_inequality(
    space: &WeightedMetricSpace,
    r: &FacilitySet,
) -> Result<BoundReport> {
    let (_, opt1) = exact_kmedian(space, 1)?;
    general_inequality_with_opt(space, r, opt1)
}

pub fn general_inequality_with_opt(
    space: &WeightedMetricSpace,
    r: &FacilitySet,
    opt1: f64,
) -> Result<BoundReport> {
    space.check_set(r)?;
    if r.len() < 2 {
        return Err(Error::domain("general inequality needs |R| >= 2"));
    }
    let cost_r = space.cost_unchecked(r.members());
    let (arg, lhs) = r
        .members()
        .iter()
        .map(|&f| (f, space.cost_unchecked(r.without(f).members()) - cost_r))
        .fold((usize::MAX, f64::INFINITY), |best, c| {
            if c.1 < best.1 {
                c
            } else {
                best
            }
        });
    let rhs = 2.0 * opt1 / (r.len() - 1) as f64;
    Ok(BoundReport::compare(
        "general",
        lhs,
        rhs,
        space.tolerance(),
        Some(Witness::Point(arg)),
    ))
}

/// `rhs / lhs`: how far a holding bound is from being tight.
pub fn tightness(report: &BoundReport) -> f64 {
    report.rhs / report.lhs
}

/// One row of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub instance: String,
    pub params: String,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub witness: String,
}

impl CheckRow {
    pub fn new(
        instance: impl Into<String>,
        params: impl Into<String>,
        report: &BoundReport,
    ) -> Self {
        CheckRow {
            check: report.check_name.clone(),
            instance: instance.into(),
            params: params.into(),
            holds: report.holds,
            lhs: report.lhs,
            rhs: report.rhs,
            slack: report.slack,
            witness: report
                .witness
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default(),
        }
    }
}

pub const REPORT_CSV_HEADER: [&str; 8] = [
    "check", "instance", "params", "holds", "lhs", "rhs", "slack", "witness",
];

pub fn write_report_csv<W: io::Write>(rows: &[CheckRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.instance.clone(),
            r.params.clone(),
            r.holds.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.slack.to_string(),
            r.witness.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
