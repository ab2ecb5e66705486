//! Shortest-path metrics from weighted undirected graphs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::metric::{DenseMatrix, DistanceOracle, Edge, Point, WeightedMetricSpace};

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Result<Vec<Vec<(usize, f64)>>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v, len)) in edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "metric.edges[{i}]: endpoint out of range (space has {n} points)"
            )));
        }
        if !len.is_finite() || len < 0.0 {
            return Err(Error::input(format!(
                "metric.edges[{i}]: length {len} is not a finite nonnegative number"
            )));
        }
        if u != v {
            adj[u].push((v, len));
            adj[v].push((u, len));
        }
    }
    Ok(adj)
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize, dist: &mut [f64]) {
    dist.fill(f64::INFINITY);
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(State {
        dist: 0.0,
        node: source,
    });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, len) in &adj[node] {
            let nd = d + len;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(State {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
}

/// All-pairs shortest paths (one Dijkstra per source). The entry for
/// `(a, b)` with `a < b` is taken from the run rooted at `a` and mirrored.
pub fn shortest_path_matrix(n: usize, edges: &[Edge]) -> Result<DenseMatrix> {
    let adj = adjacency(n, edges)?;
    let mut m = DenseMatrix::zeros(n);
    let mut dist = vec![0.0; n];
    for a in 0..n {
        dijkstra(&adj, a, &mut dist);
        for (b, &d) in dist.iter().enumerate().skip(a + 1) {
            if d.is_infinite() {
                return Err(Error::input(format!(
                    "graph is disconnected: no path between points {a} and {b}"
                )));
            }
            m.set(a, b, d);
            m.set(b, a, d);
        }
    }
    Ok(m)
}

/// Space whose distances are shortest-path lengths over `edges`.
pub fn graph_to_metric(
    points: Vec<Point>,
    edges: Vec<Edge>,
    pseudometric: bool,
) -> Result<WeightedMetricSpace> {
    let matrix = shortest_path_matrix(points.len(), &edges)?;
    WeightedMetricSpace::assemble(
        points,
        DistanceOracle::Graph { edges, matrix },
        pseudometric,
    )
}
