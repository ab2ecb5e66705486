use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::trace::{Direction, GreedyTrace, TraceStep};
use super::{check_k, TieBreaker, TiePolicy};
use crate::error::Result;
use crate::metric::{FacilitySet, WeightedMetricSpace};
use crate::service::ServiceState;

/// Heap entry; `delta` is a lower bound on the facility's current removal
/// delta and is revalidated when popped.
#[derive(Clone, Copy)]
struct Candidate {
    delta: f64,
    rank: usize,
    id: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .delta
            .total_cmp(&self.delta)
            .then_with(|| other.rank.cmp(&self.rank))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reverse greedy: start with every point open and repeatedly close the
/// facility whose removal raises the cost least, until `k` remain.
///
/// Each client keeps its nearest and second-nearest open facility; a
/// facility's removal delta is the weighted gap between the two over the
/// clients it serves. Deltas only grow as facilities close, so stale heap
/// keys are lower bounds and a popped candidate is recomputed before it is
/// accepted.
///
/// On instances with non-integer costs the candidates whose incremental
/// delta lies within a small window of the minimum are re-scored by summing
/// the full post-removal cost in id order, so the choice matches a
/// from-scratch evaluation bit for bit.
pub fn rgreedy(space: &WeightedMetricSpace, k: usize, tie: &TiePolicy) -> Result<GreedyTrace> {
    check_k(space, k)?;
    let n = space.n();
    let mut breaker = TieBreaker::new(tie, n)?;
    let mut steps = Vec::with_capacity(n - k);
    if k == n {
        return Ok(GreedyTrace {
            direction: Direction::Reverse,
            k_target: k,
            n,
            steps,
            final_set: FacilitySet::all(n),
        });
    }

    let exact = space.is_integral();
    let single_pick = exact && breaker.is_deterministic_order();
    let mut state = ServiceState::all_open(space);
    let mut heap: BinaryHeap<Candidate> = (0..n)
        .map(|id| Candidate {
            delta: state.removal_delta(id),
            rank: breaker.rank(id),
            id,
        })
        .collect();
    let mut cost = state.cost();
    let mut fresh: Vec<Candidate> = Vec::new();

    while state.open_count() > k {
        let step = state.open_count();
        fresh.clear();
        let window = if exact {
            0.0
        } else {
            1e-9 * (1.0 + cost.abs())
        };
        let mut limit: Option<f64> = None;
        while let Some(&top) = heap.peek() {
            if limit.is_some_and(|l| top.delta > l) {
                break;
            }
            heap.pop();
            debug_assert!(state.is_open(top.id));
            let current = state.removal_delta(top.id);
            if current != top.delta {
                heap.push(Candidate {
                    delta: current,
                    ..top
                });
                continue;
            }
            if limit.is_none() {
                limit = Some(current + window);
            }
            fresh.push(top);
            if single_pick {
                break;
            }
        }

        let (chosen, cost_after) = if exact {
            let mut ids: Vec<usize> = fresh.iter().map(|c| c.id).collect();
            ids.sort_unstable();
            let chosen = breaker.pick(&ids);
            let delta = fresh.iter().find(|c| c.id == chosen).expect("chosen").delta;
            (chosen, cost + delta)
        } else {
            let scored: Vec<(usize, f64)> = fresh
                .iter()
                .map(|c| (c.id, state.cost_without(c.id)))
                .collect();
            let best = scored.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            let mut ids: Vec<usize> = scored.iter().filter(|s| s.1 == best).map(|s| s.0).collect();
            ids.sort_unstable();
            (breaker.pick(&ids), best)
        };

        steps.push(TraceStep {
            step,
            point: chosen,
            cost_before: cost,
            cost_after,
            delta: cost_after - cost,
        });
        cost = cost_after;
        state.close(chosen);
        heap.extend(fresh.iter().copied().filter(|c| c.id != chosen));
    }

    Ok(GreedyTrace {
        direction: Direction::Reverse,
        k_target: k,
        n,
        steps,
        final_set: FacilitySet::from_sorted(state.open_facilities().to_vec()),
    })
}
