//! Bookkeeping of which facilities ever serve the ball around the optimal
//! 1-median along a full reverse-greedy trace.
//!
//! Zone `Z_i` holds the points `x` with `(i-1) r < c(x, mu) <= i r` (zone 0:
//! distance exactly 0) that serve some ball member at some time. Times count
//! removals already performed, so time `p` is the state with `n - p` open
//! facilities, just before the `(p+1)`-th removal. At time 0 every point
//! serves itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::WeightedMetricSpace;
use crate::service::ServiceState;
use crate::solvers::{exact_kmedian, Direction, GreedyTrace};

/// Operational weights `m_j` are defined from `t_{j - OFFSET}`.
pub const OPERATIONAL_OFFSET: usize = 6;
/// Zones from this index on enter the `sum i * m_i` diagnostic.
pub const WEIGHTED_SUM_FROM: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallInstrumentation {
    pub center: usize,
    pub radius: f64,
    /// Points within `radius` of the center.
    pub ball: Vec<usize>,
    /// `zones[i]` = `Z_i`, for `i` in `0..=h`.
    pub zones: Vec<Vec<usize>>,
    /// Largest index with a nonempty zone.
    pub h: usize,
    /// `t[j]`: time at which the last facility of `Z_0 ∪ ... ∪ Z_j` is
    /// removed; `None` if one of them survives the whole trace.
    pub t: Vec<Option<usize>>,
    /// Total weight of each zone.
    pub m_static: Vec<f64>,
    /// `m_operational[j]`: weight served by `Z_j` at time `t[j - 6]`;
    /// defined only for `j >= 7` with `t[j - 6]` defined.
    pub m_operational: Vec<Option<f64>>,
    /// Weight of points that never serve a ball member.
    pub never_serving_weight: f64,
    pub total_weight: f64,
    /// `sum_{i >= 1} i * m_static[i]`.
    pub weighted_sum_static: f64,
    /// `sum_{i >= 10} i * m_static[i]`.
    pub weighted_sum_static_tail: f64,
    /// `sum_{i >= 10} i * m_operational[i]` over defined entries.
    pub weighted_sum_operational: f64,
    /// Longest run of consecutive empty zones strictly between 0 and `h`.
    pub max_empty_run: usize,
}

impl BallInstrumentation {
    /// `weighted_sum_static / total_weight`.
    pub fn weighted_sum_ratio(&self) -> f64 {
        self.weighted_sum_static / self.total_weight
    }

    /// Step index (facilities open before the removal) matching `t[j]`.
    pub fn t_step(&self, j: usize, n: usize) -> Option<usize> {
        self.t.get(j).copied().flatten().map(|p| n - p)
    }
}

fn zone_of(dist: f64, radius: f64) -> usize {
    if dist == 0.0 {
        0
    } else {
        (dist / radius).ceil().max(1.0) as usize
    }
}

pub fn ball_instrumentation(
    space: &WeightedMetricSpace,
    trace: &GreedyTrace,
    radius: f64,
) -> Result<BallInstrumentation> {
    let n = space.n();
    if trace.direction != Direction::Reverse
        || trace.k_target != 1
        || trace.n != n
        || trace.steps.len() + 1 != n
    {
        return Err(Error::input(
            "ball instrumentation needs a full reverse trace down to one facility",
        ));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::input(format!("radius {radius} must be positive")));
    }
    let (center_set, _) = exact_kmedian(space, 1)?;
    let center = center_set.members()[0];
    let dist: Vec<f64> = (0..n).map(|x| space.d(x, center)).collect();
    let zone: Vec<usize> = dist.iter().map(|&d| zone_of(d, radius)).collect();
    let ball: Vec<usize> = (0..n).filter(|&x| dist[x] <= radius).collect();

    // pass 1: who serves the ball, and when each point is removed
    let mut used = vec![false; n];
    for &b in &ball {
        used[b] = true;
    }
    let mut removed_at = vec![None; n];
    let mut state = ServiceState::all_open(space);
    for (p, s) in trace.steps.iter().enumerate() {
        for &b in &ball {
            used[state.n1[b]] = true;
        }
        if !state.is_open(s.point) {
            return Err(Error::input(format!(
                "trace removes point {} twice",
                s.point
            )));
        }
        removed_at[s.point] = Some(p);
        state.close(s.point);
    }
    for &b in &ball {
        used[state.n1[b]] = true;
    }

    let h = (0..n)
        .filter(|&x| used[x])
        .map(|x| zone[x])
        .max()
        .unwrap_or(0);
    let mut zones = vec![Vec::new(); h + 1];
    let mut m_static = vec![0.0; h + 1];
    let mut never_serving_weight = 0.0;
    for x in 0..n {
        if used[x] {
            zones[zone[x]].push(x);
            m_static[zone[x]] += space.weight(x);
        } else {
            never_serving_weight += space.weight(x);
        }
    }

    let mut t = Vec::with_capacity(h + 1);
    let mut last: Option<usize> = None;
    let mut survivor = false;
    for zone_members in &zones {
        for &x in zone_members {
            match removed_at[x] {
                Some(p) => last = Some(last.map_or(p, |l: usize| l.max(p))),
                None => survivor = true,
            }
        }
        t.push(if survivor { None } else { last });
    }

    // pass 2: weight served by each zone at the times t[j - 6]
    let mut m_operational = vec![None; h + 1];
    let wanted: Vec<(usize, usize)> = (OPERATIONAL_OFFSET + 1..=h)
        .filter_map(|j| t[j - OPERATIONAL_OFFSET].map(|p| (p, j)))
        .collect();
    if !wanted.is_empty() {
        let mut state = ServiceState::all_open(space);
        for (p, s) in trace.steps.iter().enumerate() {
            if wanted.iter().any(|&(time, _)| time == p) {
                let mut served = vec![0.0; h + 1];
                for x in 0..n {
                    let f = state.n1[x];
                    if used[f] {
                        served[zone[f]] += space.weight(x);
                    }
                }
                for &(_, j) in wanted.iter().filter(|&&(time, _)| time == p) {
                    m_operational[j] = Some(served[j]);
                }
            }
            state.close(s.point);
        }
    }

    // folds from +0.0; an empty f64 sum would be -0.0
    let weighted_sum_static = (1..=h).fold(0.0, |acc, i| acc + i as f64 * m_static[i]);
    let weighted_sum_static_tail =
        (WEIGHTED_SUM_FROM..=h).fold(0.0, |acc, i| acc + i as f64 * m_static[i]);
    let weighted_sum_operational = (WEIGHTED_SUM_FROM..=h)
        .filter_map(|i| m_operational[i].map(|m| i as f64 * m))
        .fold(0.0, |acc, v| acc + v);
    let mut max_empty_run = 0;
    let mut run = 0;
    for z in zones.iter().take(h).skip(1) {
        if z.is_empty() {
            run += 1;
            max_empty_run = max_empty_run.max(run);
        } else {
            run = 0;
        }
    }

    Ok(BallInstrumentation {
        center,
        radius,
        ball,
        zones,
        h,
        t,
        m_static,
        m_operational,
        never_serving_weight,
        total_weight: space.total_weight(),
        weighted_sum_static,
        weighted_sum_static_tail,
        weighted_sum_operational,
        max_empty_run,
    })
}
