use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use rgreedy_core::{ball_instrumentation, rgreedy, GreedyTrace};
use serde::Serialize;

use crate::args::{load_instance, Format};
use crate::{output, GlobalArgs, Outcome};

#[derive(Debug, Args)]
pub struct InstrumentArgs {
    instance: PathBuf,
    /// Full reverse trace CSV (from `solve -k 1`); computed with `--tie` when omitted.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Ball radius around the optimal 1-median.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

#[derive(Serialize)]
struct ZoneRow {
    zone: usize,
    size: usize,
    weight: f64,
    t: Option<usize>,
    t_step: Option<usize>,
    m_operational: Option<f64>,
}

pub fn run(args: &InstrumentArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let space = load_instance(&args.instance, g.allow_large)?;
    let trace = match &args.trace {
        Some(path) => {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            GreedyTrace::read_csv(f, space.n())
                .with_context(|| format!("reading {}", path.display()))?
        }
        None => rgreedy(&space, 1, &g.tie.resolve(&space))?,
    };
    let b = ball_instrumentation(&space, &trace, args.radius)?;
    let mut out = output::open(g.output.as_deref())?;
    match g.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &b)?;
            writeln!(out)?;
            out.flush()?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# center={} radius={} ball_size={} h={}",
                space.display_name(b.center),
                b.radius,
                b.ball.len(),
                b.h
            )?;
            writeln!(
                out,
                "# total_weight={} never_serving_weight={} max_empty_run={}",
                b.total_weight, b.never_serving_weight, b.max_empty_run
            )?;
            writeln!(
                out,
                "# weighted_sum_static={} per_weight={} tail={} operational={}",
                b.weighted_sum_static,
                b.weighted_sum_ratio(),
                b.weighted_sum_static_tail,
                b.weighted_sum_operational
            )?;
            let rows: Vec<ZoneRow> = (0..=b.h)
                .map(|i| ZoneRow {
                    zone: i,
                    size: b.zones[i].len(),
                    weight: b.m_static[i],
                    t: b.t[i],
                    t_step: b.t_step(i, space.n()),
                    m_operational: b.m_operational[i],
                })
                .collect();
            output::write_rows(&rows, Format::Csv, out)?;
        }
    }
    Ok(Outcome::Ok)
}
