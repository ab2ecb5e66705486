use super::trace::{Direction, GreedyTrace, TraceStep};
use super::{check_k, TieBreaker, TiePolicy};
use crate::error::Result;
use crate::metric::{FacilitySet, WeightedMetricSpace};

/// Reverse greedy evaluated from scratch: every step scores every candidate
/// by recomputing the full cost of the reduced set. Slow, but shares no
/// bookkeeping with [`rgreedy`](super::rgreedy); the two must produce
/// identical traces.
pub fn rgreedy_reference(
    space: &WeightedMetricSpace,
    k: usize,
    tie: &TiePolicy,
) -> Result<GreedyTrace> {
    check_k(space, k)?;
    let n = space.n();
    let mut breaker = TieBreaker::new(tie, n)?;
    let mut open: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    let mut reduced = Vec::with_capacity(n);
    while open.len() > k {
        let cost_before = space.cost_unchecked(&open);
        let mut best = f64::INFINITY;
        let mut minimizers = Vec::new();
        for &r in &open {
            reduced.clear();
            reduced.extend(open.iter().copied().filter(|&f| f != r));
            let c = space.cost_unchecked(&reduced);
            if c < best {
                best = c;
                minimizers.clear();
            }
            if c == best {
                minimizers.push(r);
            }
        }
        let chosen = breaker.pick(&minimizers);
        steps.push(TraceStep {
            step: open.len(),
            point: chosen,
            cost_before,
            cost_after: best,
            delta: best - cost_before,
        });
        open.retain(|&f| f != chosen);
    }
    Ok(GreedyTrace {
        direction: Direction::Reverse,
        k_target: k,
        n,
        steps,
        final_set: FacilitySet::from_sorted(open),
    })
}
