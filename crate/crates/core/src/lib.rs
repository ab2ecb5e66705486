//! Reverse greedy (RGreedy) and forward greedy heuristics for metric
//! k-median, the layered-tree and star instances that stress them, an exact
//! small-instance oracle, and empirical checks of the bounds governing
//! RGreedy's approximation ratio.
//!
//! ```
//! use rgreedy_core::{gen_tree_lb, rgreedy, exact_kmedian, TiePolicy, TreeInstanceParams};
//!
//! let tree = gen_tree_lb(TreeInstanceParams { h: 2 }).unwrap();
//! let trace = rgreedy(&tree, 1, &TiePolicy::priority_of(&tree)).unwrap();
//! let (_, opt) = exact_kmedian(&tree, 1).unwrap();
//! assert_eq!(trace.final_cost(), 29.0);
//! assert_eq!(opt, 29.0);
//! ```

pub mod analysis;
mod error;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod metric;
mod report;
mod service;
pub mod solvers;
pub mod tree;

pub use analysis::{
    ball_instrumentation, check_general_inequality, check_harmonic, check_lemma1,
    check_step_bounds, check_supermodularity, harmonic, BallInstrumentation, BoundReport, Witness,
};
pub use error::{Error, Result};
pub use gen::{
    epsilon_perturb, gen_k_copies, gen_random, gen_star, gen_tree_lb, RandomKind,
    StarInstanceParams, TreeInstanceParams,
};
pub use graph::graph_to_metric;
pub use metric::{Assignment, DistanceOracle, FacilitySet, Point, WeightedMetricSpace};
pub use solvers::{
    exact_kmedian, exact_kmedian_with_budget, forward_greedy, removal_delta, rgreedy,
    rgreedy_reference, Direction, GreedyTrace, TiePolicy, TraceStep,
};
