//! Reverse greedy (fast and reference), forward greedy and the exact oracle.

mod exact;
mod forward;
mod reference;
mod rgreedy;
mod trace;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FacilitySet, WeightedMetricSpace};

pub use exact::{binomial, exact_kmedian, exact_kmedian_with_budget, DEFAULT_SUBSET_BUDGET};
pub use forward::forward_greedy;
pub use reference::rgreedy_reference;
pub use rgreedy::rgreedy;
pub use trace::{Direction, GreedyTrace, TraceStep, TRACE_CSV_HEADER};

/// Rule for choosing among candidates with exactly equal cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Smallest point id.
    Lexicographic,
    /// Earliest in the list; unlisted points rank after listed ones, by id.
    Priority(Vec<usize>),
    /// Uniform among the exact minimizers, from a seeded stream.
    SeededRandom(u64),
}

impl TiePolicy {
    /// The instance's own priority list, or lexicographic when it has none.
    pub fn priority_of(space: &WeightedMetricSpace) -> TiePolicy {
        match space.tie_priority() {
            Some(list) => TiePolicy::Priority(list.to_vec()),
            None => TiePolicy::Lexicographic,
        }
    }
}

impl std::fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TiePolicy::Lexicographic => f.write_str("lex"),
            TiePolicy::Priority(_) => f.write_str("priority"),
            TiePolicy::SeededRandom(seed) => write!(f, "random:{seed}"),
        }
    }
}

pub(crate) struct TieBreaker {
    rank: Vec<usize>,
    rng: Option<ChaCha8Rng>,
}

impl TieBreaker {
    pub(crate) fn new(policy: &TiePolicy, n: usize) -> Result<Self> {
        let mut rank: Vec<usize> = (0..n).collect();
        let mut rng = None;
        match policy {
            TiePolicy::Lexicographic => {}
            TiePolicy::Priority(list) => {
                let mut seen = vec![false; n];
                for (pos, &id) in list.iter().enumerate() {
                    if id >= n || std::mem::replace(&mut seen[id], true) {
                        return Err(Error::input(format!(
                            "tie priority entry {pos} ({id}) is out of range or repeated"
                        )));
                    }
                    rank[id] = pos;
                }
                for (id, r) in rank.iter_mut().enumerate() {
                    if !seen[id] {
                        *r = list.len() + id;
                    }
                }
            }
            TiePolicy::SeededRandom(seed) => rng = Some(ChaCha8Rng::seed_from_u64(*seed)),
        }
        Ok(TieBreaker { rank, rng })
    }

    pub(crate) fn rank(&self, id: usize) -> usize {
        self.rank[id]
    }

    /// True when ordering by `(cost, rank)` alone decides every tie.
    pub(crate) fn is_deterministic_order(&self) -> bool {
        self.rng.is_none()
    }

    /// Picks one of the exact minimizers, which must be sorted by id. The
    /// random stream only advances when there is a real choice.
    pub(crate) fn pick(&mut self, minimizers: &[usize]) -> usize {
        debug_assert!(!minimizers.is_empty());
        if minimizers.len() == 1 {
            return minimizers[0];
        }
        match &mut self.rng {
            Some(rng) => minimizers[rng.gen_range(0..minimizers.len())],
            None => *minimizers
                .iter()
                .min_by_key(|&&id| self.rank[id])
                .expect("nonempty"),
        }
    }
}

pub(crate) fn check_k(space: &WeightedMetricSpace, k: usize) -> Result<()> {
    if k == 0 || k > space.n() {
        Err(Error::input(format!(
            "k = {k} must lie in 1..={}",
            space.n()
        )))
    } else {
        Ok(())
    }
}

/// `cost(R \ {r}) - cost(R)`.
pub fn removal_delta(
    space: &WeightedMetricSpace,
    facilities: &FacilitySet,
    r: usize,
) -> Result<f64> {
    space.check_set(facilities)?;
    space.check_id(r)?;
    if !facilities.contains(r) {
        return Err(Error::input(format!("facility {r} is not in the set")));
    }
    if facilities.len() == 1 {
        return Err(Error::domain("cannot remove the last facility"));
    }
    let before = space.cost_unchecked(facilities.members());
    let after = space.cost_unchecked(facilities.without(r).members());
    Ok(after - before)
}
