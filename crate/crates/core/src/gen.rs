//! Instance generators: the layered lower-bound tree, the star tightness
//! instance, widely separated copies, random fuzzing instances and the
//! epsilon perturbation that turns a pseudometric into a metric.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::graph_to_metric;
use crate::metric::{DenseMatrix, DistanceOracle, Edge, Point, WeightedMetricSpace};
use crate::tree::{TreeOracle, MAX_TREE_HEIGHT};

pub const CLUSTER_NOTE: &str =
    "each zero-distance cluster of a tree node is collapsed into one point carrying the cluster size as weight";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeInstanceParams {
    pub h: u32,
}

impl TreeInstanceParams {
    /// Height 4 works but is slow for every solver (224,127 points).
    pub fn is_long_running(&self) -> bool {
        self.h >= 4
    }

    fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::input("tree height h must be at least 1"));
        }
        if self.h > MAX_TREE_HEIGHT {
            // node count of height h, including mu
            let mut points: f64 = 1.0;
            let mut level_count: f64 = 1.0;
            for level in (1..=self.h).rev() {
                points += level_count;
                level_count *= ((level + 1) as f64).powi(3);
            }
            return Err(Error::TooLarge(format!(
                "tree height {} would have about {:.3e} weighted points; heights above {} are not supported",
                self.h, points, MAX_TREE_HEIGHT
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarInstanceParams {
    pub j: usize,
    pub w: f64,
}

/// Lower-bound tree of height `h` with `mu` attached to every leaf.
///
/// Point 0 is `mu`, point 1 the root `rho`; the emitted tie priority removes
/// `mu` first, then nodes level by level from the leaves up.
pub fn gen_tree_lb(params: TreeInstanceParams) -> Result<WeightedMetricSpace> {
    params.validate()?;
    let tree = TreeOracle::new(params.h);
    let points = tree_points(&tree);
    let priority = tree_priority(&tree);
    let mut space = WeightedMetricSpace::assemble(points, DistanceOracle::Tree(tree), true)?;
    space.set_tie_priority(Some(priority))?;
    space.push_note(CLUSTER_NOTE);
    Ok(space)
}

fn tree_points(tree: &TreeOracle) -> Vec<Point> {
    let mut points = Vec::with_capacity(tree.num_points());
    points.push(Point::labeled(1.0, "mu"));
    for level in (1..=tree.height()).rev() {
        let w = TreeOracle::level_weight(level) as f64;
        for _ in 0..tree.level_count(level) {
            points.push(Point::new(w));
        }
    }
    points[1].label = Some("rho".into());
    points
}

fn tree_priority(tree: &TreeOracle) -> Vec<usize> {
    let mut order = vec![0];
    for level in 1..=tree.height() {
        let off = tree.level_offset(level);
        order.extend(off..off + tree.level_count(level) as usize);
    }
    order
}

/// Unit-length edge list of the lower-bound tree (parent links plus `mu`
/// to every leaf).
pub fn tree_lb_edges(h: u32) -> Result<Vec<Edge>> {
    TreeInstanceParams { h }.validate()?;
    let tree = TreeOracle::new(h);
    let mut edges = Vec::with_capacity(tree.num_points());
    for id in 1..tree.num_points() {
        if let Some(p) = tree.parent(id) {
            edges.push((p, id, 1.0));
        }
    }
    let leaves = tree.level_offset(1);
    for leaf in leaves..leaves + tree.level_count(1) as usize {
        edges.push((0, leaf, 1.0));
    }
    Ok(edges)
}

/// Same instance as [`gen_tree_lb`] but with distances from an explicit
/// edge list instead of the implicit oracle.
pub fn gen_tree_lb_expanded(params: TreeInstanceParams) -> Result<WeightedMetricSpace> {
    let implicit = gen_tree_lb(params)?;
    let edges = tree_lb_edges(params.h)?;
    let mut space = graph_to_metric(implicit.points().to_vec(), edges, true)?;
    space.set_tie_priority(implicit.tie_priority().map(<[usize]>::to_vec))?;
    space.push_note(CLUSTER_NOTE);
    Ok(space)
}

/// Ids of the star instance: `mu = 0`, `x_i = i`, `y_i = j + i` for `i` in `1..=j`.
pub fn star_ids(
    j: usize,
) -> (
    usize,
    impl Iterator<Item = usize>,
    impl Iterator<Item = usize>,
) {
    (0, 1..=j, j + 1..=2 * j)
}

/// Star instance: `mu` joined to each heavy `x_i` by length 1, each `x_i`
/// joined to its own `y_i` by length 1 and to every other `y_l` by length 2.
pub fn gen_star(params: StarInstanceParams) -> Result<WeightedMetricSpace> {
    let StarInstanceParams { j, w } = params;
    if j == 0 {
        return Err(Error::input("star arm count j must be at least 1"));
    }
    if !(w.is_finite() && w >= 1.0) {
        return Err(Error::input(format!(
            "star cluster weight w = {w} must be at least 1"
        )));
    }
    let mut points = vec![Point::labeled(1.0, "mu")];
    points.extend((1..=j).map(|i| Point::labeled(w, format!("x{i}"))));
    points.extend((1..=j).map(|i| Point::labeled(1.0, format!("y{i}"))));
    let mut edges = Vec::new();
    for i in 1..=j {
        edges.push((0, i, 1.0));
        for l in 1..=j {
            edges.push((i, j + l, if l == i { 1.0 } else { 2.0 }));
        }
    }
    graph_to_metric(points, edges, false)
}

/// `k` disjoint copies of `base` at mutual distance `separation`.
///
/// The default separation is `4 * diameter * total_weight` (or 1 for a
/// zero-diameter base). Separations below `2 * diameter` are rejected.
pub fn gen_k_copies(
    base: &WeightedMetricSpace,
    k: usize,
    separation: Option<f64>,
) -> Result<WeightedMetricSpace> {
    if k == 0 {
        return Err(Error::input("number of copies k must be at least 1"));
    }
    if k == 1 {
        return Ok(base.clone());
    }
    let diameter = base.diameter();
    let sep = match separation {
        Some(s) => {
            if !(s.is_finite() && s > 0.0 && s >= 2.0 * diameter) {
                return Err(Error::input(format!(
                    "separation {s} must be positive and at least 2 * diameter = {}",
                    2.0 * diameter
                )));
            }
            s
        }
        None => {
            let s = 4.0 * diameter * base.total_weight();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        }
    };
    let n = base.n();
    let dense = base.to_dense();
    let total = n * k;
    let mut m = DenseMatrix::zeros(total);
    for a in 0..total {
        for b in 0..total {
            let d = if a / n == b / n {
                dense.get(a % n, b % n)
            } else {
                sep
            };
            m.set(a, b, d);
        }
    }
    let mut points = Vec::with_capacity(total);
    for c in 0..k {
        points.extend(base.points().iter().map(|p| Point {
            weight: p.weight,
            label: p.label.as_ref().map(|l| format!("{l}#{c}")),
        }));
    }
    let mut space =
        WeightedMetricSpace::assemble(points, DistanceOracle::Dense(m), base.is_pseudometric())?;
    if let Some(pri) = base.tie_priority() {
        let list = (0..k)
            .flat_map(|c| pri.iter().map(move |&p| c * n + p))
            .collect();
        space.set_tie_priority(Some(list))?;
    }
    for note in base.notes() {
        space.push_note(note.clone());
    }
    space.push_note(format!("{k} copies at separation {sep}"));
    Ok(space)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomKind {
    /// Euclidean distances between uniform points of the unit square.
    UnitSquarePoints,
    /// Shortest paths over a random connected graph with integer lengths 1..=10.
    RandomGraph,
}

impl std::str::FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_square_points" | "unit-square" => Ok(RandomKind::UnitSquarePoints),
            "random_graph" | "graph" => Ok(RandomKind::RandomGraph),
            other => Err(Error::input(format!(
                "unknown random kind {other:?} (expected unit_square_points or random_graph)"
            ))),
        }
    }
}

/// Unit-weight random instance, a pure function of `(n, kind, seed)`.
pub fn gen_random(n: usize, kind: RandomKind, seed: u64) -> Result<WeightedMetricSpace> {
    if n == 0 {
        return Err(Error::input("random instance needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = vec![Point::new(1.0); n];
    match kind {
        RandomKind::UnitSquarePoints => {
            let coords: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
                .collect();
            let mut m = DenseMatrix::zeros(n);
            for a in 0..n {
                for b in 0..a {
                    let (dx, dy) = (coords[a].0 - coords[b].0, coords[a].1 - coords[b].1);
                    let d = (dx * dx + dy * dy).sqrt();
                    m.set(a, b, d);
                    m.set(b, a, d);
                }
            }
            WeightedMetricSpace::assemble(points, DistanceOracle::Dense(m), false)
        }
        RandomKind::RandomGraph => {
            let mut edges = Vec::new();
            for v in 1..n {
                let u = rng.gen_range(0..v);
                edges.push((u, v, rng.gen_range(1..=10u32) as f64));
            }
            if n >= 3 {
                for _ in 0..n {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v {
                        edges.push((u.min(v), u.max(v), rng.gen_range(1..=10u32) as f64));
                    }
                }
            }
            graph_to_metric(points, edges, false)
        }
    }
}

/// Raises every off-diagonal distance to at least `eps`. Requires `eps` below
/// half the smallest positive distance so the result is a true metric.
pub fn epsilon_perturb(space: &WeightedMetricSpace, eps: f64) -> Result<WeightedMetricSpace> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::input(format!("epsilon {eps} must be positive")));
    }
    let dense = space.to_dense();
    let n = space.n();
    let mut min_pos: Option<(f64, usize, usize)> = None;
    for a in 0..n {
        for b in 0..a {
            let d = dense.get(a, b);
            if d > 0.0 && min_pos.is_none_or(|(m, _, _)| d < m) {
                min_pos = Some((d, a, b));
            }
        }
    }
    if let Some((m, a, b)) = min_pos {
        if eps >= m / 2.0 {
            return Err(Error::input(format!(
                "epsilon {eps} must be below half the smallest positive distance d({b},{a}) = {m}"
            )));
        }
    }
    let mut out = dense.clone();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.set(a, b, dense.get(a, b).max(eps));
            }
        }
    }
    let mut result =
        WeightedMetricSpace::assemble(space.points().to_vec(), DistanceOracle::Dense(out), false)?;
    result.set_tie_priority(space.tie_priority().map(<[usize]>::to_vec))?;
    for note in space.notes() {
        result.push_note(note.clone());
    }
    result.push_note(format!("zero distances raised to epsilon = {eps}"));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FacilitySet;

    fn tree(h: u32) -> WeightedMetricSpace {
        gen_tree_lb(TreeInstanceParams { h }).unwrap()
    }

    #[test]
    fn tree_sizes() {
        let t1 = tree(1);
        assert_eq!(t1.n(), 2);
        assert_eq!(t1.distance(0, 1).unwrap(), 1.0);
        assert_eq!(t1.total_weight(), 2.0);
        let t2 = tree(2);
        assert_eq!(t2.n(), 29);
        assert_eq!(t2.total_weight(), 36.0);
        let t3 = tree(3);
        assert_eq!(t3.n(), 1794);
        assert_eq!(t3.total_weight(), 2457.0);
        assert_eq!(t3.find_label("rho"), Some(1));
        assert_eq!(t3.find_label("mu"), Some(0));
    }

    #[test]
    fn tree_refuses_height_five() {
        let err = gen_tree_lb(TreeInstanceParams { h: 5 }).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
        assert!(err.to_string().contains("e"), "{err}");
        assert!(gen_tree_lb(TreeInstanceParams { h: 0 }).is_err());
    }

    #[test]
    fn tree_priority_order() {
        let t = tree(2);
        let pri = t.tie_priority().unwrap();
        assert_eq!(pri[0], 0);
        assert_eq!(pri[1], 2);
        assert_eq!(*pri.last().unwrap(), 1);
        assert_eq!(pri.len(), 29);
    }

    #[test]
    fn tree_costs_h2() {
        let t = tree(2);
        assert_eq!(t.cost(&FacilitySet::new([0]).unwrap()).unwrap(), 43.0);
        assert_eq!(t.cost(&FacilitySet::new([1]).unwrap()).unwrap(), 29.0);
        assert_eq!(t.distance(0, 1).unwrap(), 2.0);
    }

    #[test]
    fn expanded_tree_matches_implicit() {
        for h in 1..=3 {
            let a = tree(h);
            let b = gen_tree_lb_expanded(TreeInstanceParams { h }).unwrap();
            assert_eq!(a.to_dense(), b.to_dense(), "h={h}");
        }
    }

    #[test]
    fn tree_metric_valid() {
        for h in 1..=2 {
            assert!(tree(h).verify_metric().holds);
        }
    }

    #[test]
    fn star_distances() {
        let s = gen_star(StarInstanceParams { j: 1, w: 1.0 }).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.distance(0, 1).unwrap(), 1.0);
        assert_eq!(s.distance(1, 2).unwrap(), 1.0);
        assert_eq!(s.distance(0, 2).unwrap(), 2.0);
        let s = gen_star(StarInstanceParams { j: 3, w: 5.0 }).unwrap();
        assert_eq!(s.distance(1, 5).unwrap(), 2.0);
        // y_1 to y_2
        assert_eq!(s.distance(4, 5).unwrap(), 3.0);
        assert!(s.verify_metric().holds);
        assert_eq!(s.cost(&FacilitySet::new([0]).unwrap()).unwrap(), 21.0);
    }

    #[test]
    fn star_rejects_bad_params() {
        assert!(gen_star(StarInstanceParams { j: 0, w: 5.0 }).is_err());
        assert!(gen_star(StarInstanceParams { j: 2, w: 0.5 }).is_err());
    }

    #[test]
    fn star_cost_of_all_y() {
        let s = gen_star(StarInstanceParams { j: 10, w: 1000.0 }).unwrap();
        let ys = FacilitySet::new(11..=20).unwrap();
        assert_eq!(s.cost(&ys).unwrap(), 10002.0);
    }

    #[test]
    fn copies() {
        let base = gen_star(StarInstanceParams { j: 3, w: 5.0 }).unwrap();
        assert_eq!(gen_k_copies(&base, 1, None).unwrap(), base);
        let two = gen_k_copies(&base, 2, None).unwrap();
        assert_eq!(two.n(), 14);
        // diameter 3, total weight 19
        assert_eq!(two.distance(0, 7).unwrap(), 4.0 * 3.0 * 19.0);
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(
                    two.distance(a + 7, b + 7).unwrap(),
                    base.distance(a, b).unwrap()
                );
            }
        }
        assert!(two.verify_metric().holds);
        assert!(gen_k_copies(&base, 2, Some(5.0)).is_err());
        assert!(gen_k_copies(&base, 0, None).is_err());
    }

    #[test]
    fn random_is_deterministic_and_metric() {
        for kind in [RandomKind::UnitSquarePoints, RandomKind::RandomGraph] {
            let a = gen_random(10, kind, 7).unwrap();
            let b = gen_random(10, kind, 7).unwrap();
            assert_eq!(a, b);
            assert!(a.verify_metric().holds, "{kind:?}");
            assert_ne!(a, gen_random(10, kind, 8).unwrap());
        }
        let one = gen_random(1, RandomKind::UnitSquarePoints, 3).unwrap();
        assert_eq!(one.cost(&FacilitySet::all(1)).unwrap(), 0.0);
        assert!(gen_random(0, RandomKind::RandomGraph, 1).is_err());
        assert!(gen_random(12, RandomKind::RandomGraph, 1)
            .unwrap()
            .is_integral());
    }

    #[test]
    fn perturb() {
        let s = gen_star(StarInstanceParams { j: 2, w: 3.0 }).unwrap();
        assert_eq!(epsilon_perturb(&s, 0.1).unwrap().to_dense(), s.to_dense());
        let twins = WeightedMetricSpace::from_matrix(
            vec![Point::new(1.0); 2],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            true,
        )
        .unwrap();
        let p = epsilon_perturb(&twins, 0.01).unwrap();
        assert_eq!(p.distance(0, 1).unwrap(), 0.01);
        assert!(p.verify_metric().holds);
        let t2 = tree(2);
        assert_eq!(
            epsilon_perturb(&t2, 0.25).unwrap().to_dense(),
            t2.to_dense()
        );
        let err = epsilon_perturb(&t2, 0.5).unwrap_err();
        assert!(
            err.to_string().contains("smallest positive distance"),
            "{err}"
        );
        assert!(epsilon_perturb(&t2, 0.0).is_err());
    }
}
