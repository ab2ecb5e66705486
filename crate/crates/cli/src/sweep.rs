use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::bail;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use rgreedy_core::analysis::{general_inequality_with_opt, harmonic, tightness};
use rgreedy_core::solvers::DEFAULT_SUBSET_BUDGET;
use rgreedy_core::{
    exact_kmedian, exact_kmedian_with_budget, forward_greedy, gen_random, gen_star, gen_tree_lb,
    rgreedy, rgreedy_reference, Error, FacilitySet, RandomKind, StarInstanceParams,
    TreeInstanceParams, WeightedMetricSpace,
};
use serde::Serialize;

use crate::args::{error_code, parse_list};
use crate::solve::Algorithm;
use crate::svg::{line_chart, Series};
use crate::{output, GlobalArgs, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tree,
    Star,
    Random,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    family: Family,
    /// Tree heights, e.g. `1..3`.
    #[arg(long, default_value = "1..3")]
    h: String,
    /// Star arm counts.
    #[arg(long, default_value = "10")]
    j: String,
    /// Star heavy weights, e.g. `10,100,1000`.
    #[arg(long, default_value = "10,100,1000")]
    w: String,
    /// Random instance sizes.
    #[arg(long, default_value = "4..10")]
    n: String,
    /// Random instance kind.
    #[arg(long, default_value = "random_graph")]
    kind: RandomKind,
    /// Random instances per size, seeded from `--seed` upward.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Values of k.
    #[arg(short, default_value = "1")]
    k: String,
    #[arg(long, value_enum, default_value_t = Algorithm::Rgreedy)]
    alg: Algorithm,
    /// Largest number of subsets the exact oracle may enumerate per row.
    #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
    budget: u128,
    /// Also write a ratio-vs-parameter chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
enum Job {
    Tree(u32),
    Star(usize, f64),
    Random(usize, u64),
}

impl Job {
    fn name(&self, kind: RandomKind) -> String {
        match *self {
            Job::Tree(h) => format!("tree_lb(h={h})"),
            Job::Star(j, w) => format!("star(j={j},w={w})"),
            Job::Random(n, seed) => {
                let kind = match kind {
                    RandomKind::RandomGraph => "random_graph",
                    RandomKind::UnitSquarePoints => "unit_square_points",
                };
                format!("{kind}(n={n},seed={seed})")
            }
        }
    }

    fn build(&self, kind: RandomKind) -> rgreedy_core::Result<WeightedMetricSpace> {
        match *self {
            Job::Tree(h) => gen_tree_lb(TreeInstanceParams { h }),
            Job::Star(j, w) => gen_star(StarInstanceParams { j, w }),
            Job::Random(n, seed) => gen_random(n, kind, seed),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    family: &'static str,
    instance: String,
    param: f64,
    n: Option<usize>,
    total_weight: Option<f64>,
    k: usize,
    alg: &'static str,
    tie: String,
    alg_cost: Option<f64>,
    exact_cost: Option<f64>,
    ratio: Option<f64>,
    harmonic_bound: Option<f64>,
    lb_reference: Option<f64>,
    general_tightness: Option<f64>,
    error: String,
    #[serde(skip)]
    code: u8,
}

pub fn run(args: &SweepArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let ks: Vec<usize> = parse_list(&args.k)?;
    let (family, jobs) = match args.family {
        Family::Tree => {
            let hs: Vec<u32> = parse_list(&args.h)?;
            if let Some(h) = hs.iter().find(|&&h| !(1..=4).contains(&h)) {
                bail!(Error::Input(format!("tree height {h} outside 1..=4")));
            }
            if hs
                .iter()
                .any(|&h| TreeInstanceParams { h }.is_long_running())
                && !g.allow_large
            {
                bail!(Error::TooLarge(
                    "tree height 4 is hours-scale; pass --allow-large to sweep it".into()
                ));
            }
            ("tree_lb", hs.into_iter().map(Job::Tree).collect::<Vec<_>>())
        }
        Family::Star => {
            let js: Vec<usize> = parse_list(&args.j)?;
            let ws: Vec<f64> = parse_list(&args.w)?;
            let jobs = js
                .iter()
                .flat_map(|&j| ws.iter().map(move |&w| Job::Star(j, w)))
                .collect();
            ("star", jobs)
        }
        Family::Random => {
            let ns: Vec<usize> = parse_list(&args.n)?;
            if args.seeds == 0 {
                bail!(Error::Input("--seeds must be at least 1".into()));
            }
            let jobs = ns
                .iter()
                .flat_map(|&n| (0..args.seeds).map(move |s| Job::Random(n, g.seed.wrapping_add(s))))
                .collect();
            ("random", jobs)
        }
    };
    let star_x_is_w = parse_list::<f64>(&args.w).map_or(true, |w| w.len() > 1);

    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .flat_map_iter(|job| job_rows(job, family, &ks, args, g, star_x_is_w))
        .collect();

    output::write_rows(&rows, g.format, output::open(g.output.as_deref())?)?;
    if let Some(path) = &args.svg {
        std::fs::write(path, chart(args.family, &rows, star_x_is_w))?;
    }
    let worst = rows.iter().map(|r| r.code).max().unwrap_or(0);
    Ok(if worst == 0 {
        Outcome::Ok
    } else {
        Outcome::RowErrors(worst)
    })
}

fn job_rows(
    job: &Job,
    family: &'static str,
    ks: &[usize],
    args: &SweepArgs,
    g: &GlobalArgs,
    star_x_is_w: bool,
) -> Vec<SweepRow> {
    let param = match *job {
        Job::Tree(h) => h as f64,
        Job::Star(j, w) => {
            if star_x_is_w {
                w
            } else {
                j as f64
            }
        }
        Job::Random(n, _) => n as f64,
    };
    let base = SweepRow {
        family,
        instance: job.name(args.kind),
        param,
        n: None,
        total_weight: None,
        k: 0,
        alg: args.alg.name(),
        tie: g.tie.to_string(),
        alg_cost: None,
        exact_cost: None,
        ratio: None,
        harmonic_bound: None,
        lb_reference: match *job {
            Job::Tree(h) => Some((h as f64 - 1.0) / 8.0),
            _ => None,
        },
        general_tightness: None,
        error: String::new(),
        code: 0,
    };
    let space = match job.build(args.kind) {
        Ok(s) => s,
        Err(e) => {
            return ks
                .iter()
                .map(|&k| SweepRow {
                    k,
                    error: e.to_string(),
                    code: error_code(&e),
                    ..base.clone()
                })
                .collect()
        }
    };
    let tightness = match *job {
        Job::Star(j, _) if j >= 2 => star_tightness(&space, j).ok(),
        _ => None,
    };
    let tie = g.tie.resolve(&space);
    ks.iter()
        .map(|&k| {
            let mut row = SweepRow {
                n: Some(space.n()),
                total_weight: Some(space.total_weight()),
                k,
                tie: tie.to_string(),
                general_tightness: tightness,
                ..base.clone()
            };
            let result = (|| -> rgreedy_core::Result<(f64, f64)> {
                let trace = match args.alg {
                    Algorithm::Rgreedy => rgreedy(&space, k, &tie)?,
                    Algorithm::Forward => forward_greedy(&space, k, &tie)?,
                    Algorithm::RgreedyRef => rgreedy_reference(&space, k, &tie)?,
                };
                let (_, opt) = exact_kmedian_with_budget(&space, k, args.budget)?;
                Ok((trace.final_cost(), opt))
            })();
            match result {
                Ok((cost, opt)) => {
                    row.alg_cost = Some(cost);
                    row.exact_cost = Some(opt);
                    row.ratio = if opt > 0.0 {
                        Some(cost / opt)
                    } else if cost == 0.0 {
                        Some(1.0)
                    } else {
                        None
                    };
                    row.harmonic_bound = Some(2.0 * harmonic(space.n() - k));
                }
                Err(e) => {
                    row.error = e.to_string();
                    row.code = error_code(&e);
                }
            }
            row
        })
        .collect()
}

/// Tightness of the general per-step inequality on the set of light points.
fn star_tightness(space: &WeightedMetricSpace, j: usize) -> rgreedy_core::Result<f64> {
    let (_, opt1) = exact_kmedian(space, 1)?;
    let ys = FacilitySet::new(j + 1..=2 * j)?;
    Ok(tightness(&general_inequality_with_opt(space, &ys, opt1)?))
}

fn chart(family: Family, rows: &[SweepRow], star_x_is_w: bool) -> String {
    let x_label = match family {
        Family::Tree => "h",
        Family::Star if star_x_is_w => "w",
        Family::Star => "j",
        Family::Random => "n",
    };
    // mean ratio per (k, x)
    let mut ratio: BTreeMap<usize, BTreeMap<u64, (f64, f64, usize)>> = BTreeMap::new();
    let mut tight: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in rows {
        if let Some(v) = r.ratio {
            let e = ratio
                .entry(r.k)
                .or_default()
                .entry(r.param.to_bits())
                .or_insert((r.param, 0.0, 0));
            e.1 += v;
            e.2 += 1;
        }
        if let Some(v) = r.general_tightness {
            let e = tight.entry(r.param.to_bits()).or_insert((r.param, 0.0, 0));
            e.1 += v;
            e.2 += 1;
        }
    }
    let to_points = |m: &BTreeMap<u64, (f64, f64, usize)>| {
        let mut pts: Vec<(f64, f64)> = m.values().map(|&(x, sum, c)| (x, sum / c as f64)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    };
    let mut series: Vec<Series> = ratio
        .iter()
        .map(|(k, m)| Series {
            name: format!("ratio k={k}"),
            points: to_points(m),
        })
        .collect();
    if !tight.is_empty() {
        series.push(Series {
            name: "general tightness".into(),
            points: to_points(&tight),
        });
    }
    if family == Family::Tree {
        let mut xs: Vec<f64> = rows.iter().map(|r| r.param).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        series.push(Series {
            name: "(h-1)/8".into(),
            points: xs.iter().map(|&h| (h, (h - 1.0) / 8.0)).collect(),
        });
    }
    line_chart(x_label, "value", &series)
}
