use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rgreedy_core::solvers::DEFAULT_SUBSET_BUDGET;
use rgreedy_core::{exact_kmedian_with_budget, forward_greedy, rgreedy, rgreedy_reference};
use serde::Serialize;

use crate::args::{facility_names, load_instance, Format};
use crate::{output, GlobalArgs, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Rgreedy,
    Forward,
    RgreedyRef,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rgreedy => "rgreedy",
            Algorithm::Forward => "forward",
            Algorithm::RgreedyRef => "rgreedy-ref",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    instance: PathBuf,
    /// Number of facilities to keep.
    #[arg(short)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Algorithm::Rgreedy)]
    alg: Algorithm,
    /// Also solve exactly and report the approximation ratio.
    #[arg(long)]
    exact: bool,
    /// Largest number of subsets the exact oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    instance: PathBuf,
    #[arg(short)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
    budget: u128,
}

#[derive(Serialize)]
struct ExactRow {
    k: usize,
    cost: f64,
    facilities: String,
}

pub fn run_solve(args: &SolveArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let space = load_instance(&args.instance, g.allow_large)?;
    let tie = g.tie.resolve(&space);
    let trace = match args.alg {
        Algorithm::Rgreedy => rgreedy(&space, args.k, &tie)?,
        Algorithm::Forward => forward_greedy(&space, args.k, &tie)?,
        Algorithm::RgreedyRef => rgreedy_reference(&space, args.k, &tie)?,
    };
    let mut summary = format!(
        "alg={} tie={} k={} final={} cost={}",
        args.alg.name(),
        tie,
        args.k,
        facility_names(&space, trace.final_set.members()),
        trace.final_cost()
    );
    if args.exact {
        let (set, opt) = exact_kmedian_with_budget(&space, args.k, args.budget)?;
        let ratio = if opt > 0.0 {
            trace.final_cost() / opt
        } else if trace.final_cost() == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        summary.push_str(&format!(
            " exact={} exact_cost={opt} ratio={ratio}",
            facility_names(&space, set.members())
        ));
    }

    let mut out = output::open(g.output.as_deref())?;
    match g.format {
        Format::Csv => trace.write_csv(&mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &trace)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    if g.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Outcome::Ok)
}

pub fn run_exact(args: &ExactArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let space = load_instance(&args.instance, g.allow_large)?;
    let (set, cost) = exact_kmedian_with_budget(&space, args.k, args.budget)?;
    let row = ExactRow {
        k: args.k,
        cost,
        facilities: facility_names(&space, set.members()),
    };
    output::write_rows(&[row], g.format, output::open(g.output.as_deref())?)?;
    Ok(Outcome::Ok)
}
