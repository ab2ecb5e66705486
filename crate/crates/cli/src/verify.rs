use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use rgreedy_core::analysis::campaign::{
    chain_bounds, chain_rows, random_corpus, set_check_campaign, set_check_on, CorpusInstance,
    SetCheck,
};
use rgreedy_core::analysis::{harmonic_report, step_bounds_with_opt, write_report_csv, CheckRow};
use rgreedy_core::{exact_kmedian, rgreedy, WeightedMetricSpace};

use crate::args::{instance_name, load_instance, parse_list, Format};
use crate::{output, GlobalArgs, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Lemma1,
    Supermod,
    Stepbound,
    Harmonic,
    General,
    Metric,
    All,
}

impl Check {
    fn expand(self) -> Vec<Check> {
        use Check::*;
        match self {
            All => vec![Metric, Lemma1, Supermod, General, Harmonic, Stepbound],
            c => vec![c],
        }
    }

    fn set_check(self) -> Option<SetCheck> {
        match self {
            Check::Lemma1 => Some(SetCheck::Lemma1),
            Check::Supermod => Some(SetCheck::Supermod),
            Check::General => Some(SetCheck::General),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance files; without any, a seeded random corpus is used.
    instances: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Check::All)]
    check: Check,
    /// Random trials per check (corpus size for harmonic, stepbound and metric).
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Only check this k (harmonic and stepbound); default is every k.
    #[arg(short)]
    k: Option<usize>,
    /// Point counts of random corpus instances.
    #[arg(long, default_value = "4..14")]
    sizes: String,
}

pub fn run(args: &VerifyArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let mut rows = Vec::new();
    if args.instances.is_empty() {
        let sizes: Vec<usize> = parse_list(&args.sizes)?;
        let sizes = RangeInclusive::new(sizes[0], *sizes.last().unwrap());
        let mut corpus: Option<Vec<CorpusInstance>> = None;
        for check in args.check.expand() {
            if let Some(set_check) = check.set_check() {
                rows.extend(set_check_campaign(set_check, g.seed, args.trials, &sizes)?);
                continue;
            }
            let corpus = match &mut corpus {
                Some(c) => c,
                None => corpus.insert(random_corpus(g.seed, args.trials, &sizes)?),
            };
            let per_instance: Vec<Vec<CheckRow>> = corpus
                .par_iter()
                .map(|inst| instance_rows(check, &inst.space, &inst.name, args, g))
                .collect::<anyhow::Result<_>>()?;
            rows.extend(per_instance.into_iter().flatten());
        }
    } else {
        let loaded = args
            .instances
            .iter()
            .map(|p| Ok((instance_name(p), load_instance(p, g.allow_large)?)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        for check in args.check.expand() {
            for (name, space) in &loaded {
                let r = match check.set_check() {
                    Some(set_check) => set_check_on(set_check, space, name, g.seed, args.trials)?,
                    None => instance_rows(check, space, name, args, g)?,
                };
                rows.extend(r);
            }
        }
    }

    let out = output::open(g.output.as_deref())?;
    match g.format {
        Format::Csv => write_report_csv(&rows, out)?,
        Format::Json => output::write_rows(&rows, Format::Json, out)?,
    }
    let failed = rows.iter().filter(|r| !r.holds).count();
    eprintln!("{} checks, {failed} violations", rows.len());
    Ok(if failed == 0 {
        Outcome::Ok
    } else {
        Outcome::Violations
    })
}

fn instance_rows(
    check: Check,
    space: &WeightedMetricSpace,
    name: &str,
    args: &VerifyArgs,
    g: &GlobalArgs,
) -> anyhow::Result<Vec<CheckRow>> {
    let tie = g.tie.resolve(space);
    match check {
        Check::Metric => Ok(vec![CheckRow::new(name, "", &space.verify_metric())]),
        Check::Harmonic | Check::Stepbound => {
            let (harmonic, steps) = match args.k {
                Some(k) => {
                    let (_, opt) =
                        exact_kmedian(space, k).with_context(|| format!("{name}: exact k={k}"))?;
                    let trace = rgreedy(space, k, &tie)?;
                    let params = format!("k={k} tie={tie}");
                    let h =
                        harmonic_report(space.n(), k, trace.final_cost(), opt, space.tolerance());
                    let steps = step_bounds_with_opt(&trace, k, opt, space.tolerance())?;
                    let worst = steps
                        .iter()
                        .find(|r| !r.holds)
                        .or_else(|| steps.iter().min_by(|a, b| a.slack.total_cmp(&b.slack)));
                    (
                        vec![CheckRow::new(name, params.clone(), &h)],
                        worst
                            .map(|r| CheckRow::new(name, params, r))
                            .into_iter()
                            .collect(),
                    )
                }
                None => {
                    let bounds = chain_bounds(space, &tie)
                        .with_context(|| format!("{name}: chain bounds"))?;
                    chain_rows(name, &bounds, &tie)
                }
            };
            Ok(if check == Check::Harmonic {
                harmonic
            } else {
                steps
            })
        }
        _ => unreachable!("set checks are run by campaign"),
    }
}
