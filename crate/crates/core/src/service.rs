//! Incremental nearest / second-nearest bookkeeping for a shrinking facility
//! set. Closing a facility only rescans the clients that had it as nearest or
//! runner-up.

use crate::metric::WeightedMetricSpace;

const NONE: usize = usize::MAX;

pub(crate) struct ServiceState<'a> {
    space: &'a WeightedMetricSpace,
    /// Open facilities in ascending id order.
    open: Vec<usize>,
    is_open: Vec<bool>,
    pub(crate) n1: Vec<usize>,
    pub(crate) d1: Vec<f64>,
    pub(crate) n2: Vec<usize>,
    pub(crate) d2: Vec<f64>,
    /// Clients whose nearest facility is the key. Never stale for open keys.
    primary: Vec<Vec<usize>>,
    /// Clients whose runner-up was the key at some point; filtered on use.
    secondary: Vec<Vec<usize>>,
}

impl<'a> ServiceState<'a> {
    /// Every point open.
    pub(crate) fn all_open(space: &'a WeightedMetricSpace) -> Self {
        let n = space.n();
        let mut st = ServiceState {
            space,
            open: (0..n).collect(),
            is_open: vec![true; n],
            n1: vec![NONE; n],
            d1: vec![f64::INFINITY; n],
            n2: vec![NONE; n],
            d2: vec![f64::INFINITY; n],
            primary: vec![Vec::new(); n],
            secondary: vec![Vec::new(); n],
        };
        for x in 0..n {
            let (mut b1, mut e1) = (NONE, f64::INFINITY);
            let (mut b2, mut e2) = (NONE, f64::INFINITY);
            for f in 0..n {
                let d = space.d(x, f);
                if d < e1 {
                    (b2, e2) = (b1, e1);
                    (b1, e1) = (f, d);
                } else if d < e2 {
                    (b2, e2) = (f, d);
                }
            }
            st.n1[x] = b1;
            st.d1[x] = e1;
            st.primary[b1].push(x);
            if b2 != NONE {
                st.n2[x] = b2;
                st.d2[x] = e2;
                st.secondary[b2].push(x);
            }
        }
        st
    }

    pub(crate) fn open_count(&self) -> usize {
        self.open.len()
    }

    pub(crate) fn open_facilities(&self) -> &[usize] {
        &self.open
    }

    pub(crate) fn is_open(&self, f: usize) -> bool {
        self.is_open[f]
    }

    /// `cost(R \ {f}) - cost(R)` from the clients `f` currently serves.
    pub(crate) fn removal_delta(&self, f: usize) -> f64 {
        self.primary[f]
            .iter()
            .map(|&x| self.space.weight(x) * (self.d2[x] - self.d1[x]))
            .sum()
    }

    /// Current cost, summed in id order.
    pub(crate) fn cost(&self) -> f64 {
        (0..self.n1.len())
            .map(|x| self.space.weight(x) * self.d1[x])
            .sum()
    }

    /// `cost(R \ {f})`, summed in id order.
    pub(crate) fn cost_without(&self, f: usize) -> f64 {
        (0..self.n1.len())
            .map(|x| {
                let d = if self.n1[x] == f {
                    self.d2[x]
                } else {
                    self.d1[x]
                };
                self.space.weight(x) * d
            })
            .sum()
    }

    fn rescan_second(&mut self, x: usize) {
        let nearest = self.n1[x];
        let (mut best, mut best_d) = (NONE, f64::INFINITY);
        for &f in &self.open {
            if f == nearest {
                continue;
            }
            let d = self.space.d(x, f);
            if d < best_d {
                best = f;
                best_d = d;
            }
        }
        self.n2[x] = best;
        self.d2[x] = best_d;
        if best != NONE {
            self.secondary[best].push(x);
        }
    }

    /// Closes `r`; at least one other facility must stay open.
    pub(crate) fn close(&mut self, r: usize) {
        debug_assert!(self.is_open[r] && self.open.len() >= 2);
        self.is_open[r] = false;
        let pos = self.open.binary_search(&r).expect("open facility");
        self.open.remove(pos);

        for x in std::mem::take(&mut self.primary[r]) {
            let promoted = self.n2[x];
            self.n1[x] = promoted;
            self.d1[x] = self.d2[x];
            self.primary[promoted].push(x);
            self.rescan_second(x);
        }
        for x in std::mem::take(&mut self.secondary[r]) {
            if self.n2[x] == r {
                self.rescan_second(x);
            }
        }
    }
}
