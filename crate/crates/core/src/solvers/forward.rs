use super::trace::{Direction, GreedyTrace, TraceStep};
use super::{check_k, TieBreaker, TiePolicy};
use crate::error::Result;
use crate::metric::{FacilitySet, WeightedMetricSpace};

/// Forward greedy: start empty and repeatedly add the facility that leaves
/// the smallest cost. The first step records `cost_before = 0` and the
/// absolute cost as its delta; later deltas are nonpositive.
pub fn forward_greedy(
    space: &WeightedMetricSpace,
    k: usize,
    tie: &TiePolicy,
) -> Result<GreedyTrace> {
    check_k(space, k)?;
    let n = space.n();
    let mut breaker = TieBreaker::new(tie, n)?;
    let mut service = vec![f64::INFINITY; n];
    let mut chosen_mask = vec![false; n];
    let mut steps = Vec::with_capacity(k);
    let mut cost = 0.0;
    for step in 1..=k {
        let mut best = f64::INFINITY;
        let mut minimizers = Vec::new();
        for f in (0..n).filter(|&f| !chosen_mask[f]) {
            let c: f64 = (0..n)
                .map(|x| space.weight(x) * service[x].min(space.d(x, f)))
                .sum();
            if c < best {
                best = c;
                minimizers.clear();
            }
            if c == best {
                minimizers.push(f);
            }
        }
        let f = breaker.pick(&minimizers);
        chosen_mask[f] = true;
        for (x, s) in service.iter_mut().enumerate() {
            *s = s.min(space.d(x, f));
        }
        steps.push(TraceStep {
            step,
            point: f,
            cost_before: cost,
            cost_after: best,
            delta: best - cost,
        });
        cost = best;
    }
    let members = (0..n).filter(|&f| chosen_mask[f]).collect();
    Ok(GreedyTrace {
        direction: Direction::Forward,
        k_target: k,
        n,
        steps,
        final_set: FacilitySet::from_sorted(members),
    })
}
