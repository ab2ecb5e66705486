use std::io::Write;
use std::path::PathBuf;

use anyhow::bail;
use clap::{Args, Subcommand};
use rgreedy_core::instance::{to_json, TreeEncoding};
use rgreedy_core::{
    epsilon_perturb, gen_k_copies, gen_random, gen_star, gen_tree_lb, Error, RandomKind,
    StarInstanceParams, TreeInstanceParams,
};

use crate::args::load_instance;
use crate::{output, GlobalArgs, Outcome};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Layered lower-bound tree of height h (1..=4).
    Tree {
        #[arg(long)]
        h: u32,
        /// Write the tree as an explicit edge list.
        #[arg(long)]
        expand_graph: bool,
    },
    /// Star instance with j arms and heavy weight w.
    Star {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        w: f64,
    },
    /// Seeded random instance.
    Random {
        #[arg(long)]
        n: usize,
        /// unit_square_points or random_graph.
        #[arg(long, default_value = "random_graph")]
        kind: RandomKind,
    },
    /// k far-apart copies of a base instance.
    Copies {
        base: PathBuf,
        #[arg(short)]
        k: usize,
        /// Distance between copies (default 4 * diameter * total weight).
        #[arg(long)]
        separation: Option<f64>,
    },
    /// Raise zero distances between distinct points to eps.
    Perturb {
        base: PathBuf,
        #[arg(long)]
        eps: f64,
    },
}

pub fn run(args: &GenArgs, g: &GlobalArgs) -> anyhow::Result<Outcome> {
    let mut encoding = TreeEncoding::Implicit;
    let space = match &args.family {
        Family::Tree { h, expand_graph } => {
            let params = TreeInstanceParams { h: *h };
            if params.is_long_running() && !g.allow_large {
                bail!(Error::TooLarge(format!(
                    "tree instance of height {h} is hours-scale; pass --allow-large to generate it"
                )));
            }
            if *expand_graph {
                encoding = TreeEncoding::ExpandedGraph;
            }
            gen_tree_lb(params)?
        }
        Family::Star { j, w } => gen_star(StarInstanceParams { j: *j, w: *w })?,
        Family::Random { n, kind } => gen_random(*n, *kind, g.seed)?,
        Family::Copies {
            base,
            k,
            separation,
        } => gen_k_copies(&load_instance(base, g.allow_large)?, *k, *separation)?,
        Family::Perturb { base, eps } => {
            let base = load_instance(base, g.allow_large)?;
            epsilon_perturb(&base, *eps)?
        }
    };
    let mut out = output::open(g.output.as_deref())?;
    out.write_all(to_json(&space, encoding)?.as_bytes())?;
    out.flush()?;
    Ok(Outcome::Ok)
}
