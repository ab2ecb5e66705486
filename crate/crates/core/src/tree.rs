//! Implicit distance oracle for the layered lower-bound tree.
//!
//! Point `0` is the extra node `mu` adjacent to every leaf. Tree nodes follow
//! in descending level order: the root (level `h`) is point `1`, then all level
//! `h - 1` nodes, and so on down to the leaves (level 1). A node at level
//! `l > 1` has `(l + 1)^3` children, and within a level the children of node
//! `p` occupy the contiguous index block `p * (l + 1)^3 ..`.

use serde::{Deserialize, Serialize};

/// Largest supported height. Height 5 would need roughly 10^9 points.
pub const MAX_TREE_HEIGHT: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeOracle {
    h: u32,
    /// `counts[l]` = number of nodes at level `l` (index 0 unused).
    counts: Vec<u64>,
    /// `offsets[l]` = id of the first node at level `l`.
    offsets: Vec<u64>,
}

fn cube(x: u64) -> u64 {
    x * x * x
}

impl TreeOracle {
    /// Callers validate `1 <= h <= MAX_TREE_HEIGHT`.
    pub(crate) fn new(h: u32) -> Self {
        let h_us = h as usize;
        let mut counts = vec![0u64; h_us + 1];
        counts[h_us] = 1;
        for level in (1..h_us).rev() {
            // each node at level+1 has (level+2)^3 children
            counts[level] = counts[level + 1] * cube(level as u64 + 2);
        }
        let mut offsets = vec![0u64; h_us + 1];
        let mut next = 1u64;
        for level in (1..=h_us).rev() {
            offsets[level] = next;
            next += counts[level];
        }
        TreeOracle { h, counts, offsets }
    }

    pub fn height(&self) -> u32 {
        self.h
    }

    /// Total number of points including `mu`.
    pub fn num_points(&self) -> usize {
        1 + self.counts.iter().sum::<u64>() as usize
    }

    pub fn level_count(&self, level: u32) -> u64 {
        self.counts[level as usize]
    }

    /// Id of the first node on `level`.
    pub fn level_offset(&self, level: u32) -> usize {
        self.offsets[level as usize] as usize
    }

    /// `(level!)^3`, the collapsed cluster weight of a node on `level`.
    pub fn level_weight(level: u32) -> u64 {
        cube((1..=level as u64).product())
    }

    /// `(level, index within level)` for a tree node; `None` for `mu`.
    pub fn locate(&self, id: usize) -> Option<(u32, u64)> {
        if id == 0 {
            return None;
        }
        let id = id as u64;
        (1..=self.h)
            .find(|&l| {
                let off = self.offsets[l as usize];
                id >= off && id < off + self.counts[l as usize]
            })
            .map(|l| (l, id - self.offsets[l as usize]))
    }

    /// Id of the parent of a non-root tree node.
    pub fn parent(&self, id: usize) -> Option<usize> {
        let (level, idx) = self.locate(id)?;
        if level == self.h {
            return None;
        }
        let pidx = idx / cube(level as u64 + 2);
        Some((self.offsets[level as usize + 1] + pidx) as usize)
    }

    /// Shortest-path distance in the tree augmented with `mu`.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let (la, ia, lb, ib) = match (self.locate(a), self.locate(b)) {
            (None, Some((l, _))) | (Some((l, _)), None) => return l as f64,
            (Some((la, ia)), Some((lb, ib))) => (la, ia, lb, ib),
            (None, None) => unreachable!("a != b"),
        };
        // climb to the lowest common ancestor
        let (mut l1, mut i1, mut l2, mut i2) = if la <= lb {
            (la, ia, lb, ib)
        } else {
            (lb, ib, la, ia)
        };
        let mut steps = 0u32;
        while l1 < l2 {
            i1 /= cube(l1 as u64 + 2);
            l1 += 1;
            steps += 1;
        }
        while i1 != i2 {
            i1 /= cube(l1 as u64 + 2);
            i2 /= cube(l2 as u64 + 2);
            l1 += 1;
            l2 += 1;
            steps += 2;
        }
        // alternative route: down to a leaf, through mu, up again
        steps.min(la + lb) as f64
    }
}
