//! Weighted (pseudo)metric spaces, facility sets and service costs.
//!
//! Every point is a client with a nonnegative demand weight; the cost of a
//! facility set `F` is the weighted sum of each point's distance to its nearest
//! member of `F`. Ties between equally near facilities always go to the
//! smallest point id.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{BoundReport, Witness, FLOAT_TOLERANCE};
use crate::tree::TreeOracle;

/// Sums of integers stay exact in `f64` below this bound.
const EXACT_INTEGER_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub weight: f64,
    pub label: Option<String>,
}

impl Point {
    pub fn new(weight: f64) -> Self {
        Point {
            weight,
            label: None,
        }
    }

    pub fn labeled(weight: f64, label: impl Into<String>) -> Self {
        Point {
            weight,
            label: Some(label.into()),
        }
    }
}

/// Row-major square matrix of distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_flat(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data must be n*n");
        DenseMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.n + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, v: f64) {
        self.data[a * self.n + b] = v;
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.data[a * self.n..(a + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Undirected weighted edge `(u, v, length)`.
pub type Edge = (usize, usize, f64);

#[derive(Debug, Clone, PartialEq)]
pub enum DistanceOracle {
    Dense(DenseMatrix),
    /// All-pairs shortest paths over `edges`, kept alongside the source graph.
    Graph {
        edges: Vec<Edge>,
        matrix: DenseMatrix,
    },
    Tree(TreeOracle),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMetricSpace {
    points: Vec<Point>,
    oracle: DistanceOracle,
    pseudometric: bool,
    tie_priority: Option<Vec<usize>>,
    notes: Vec<String>,
    integral: bool,
}

impl WeightedMetricSpace {
    /// Builds a space from an explicit matrix, rejecting non-square,
    /// asymmetric, negative, non-finite or nonzero-diagonal input.
    pub fn from_matrix(
        points: Vec<Point>,
        rows: Vec<Vec<f64>>,
        pseudometric: bool,
    ) -> Result<Self> {
        let n = points.len();
        if rows.len() != n {
            return Err(Error::input(format!(
                "metric.matrix: has {} rows but there are {} points",
                rows.len(),
                n
            )));
        }
        let mut m = DenseMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "metric.matrix[{i}]: has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::input(format!(
                        "metric.matrix[{i}][{j}]: distance {v} is not a finite nonnegative number"
                    )));
                }
                m.set(i, j, v);
            }
        }
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::input(format!(
                    "metric.matrix[{i}][{i}]: diagonal entry is {} (must be 0)",
                    m.get(i, i)
                )));
            }
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::input(format!(
                        "metric.matrix[{i}][{j}]: {} differs from metric.matrix[{j}][{i}] = {} (not symmetric)",
                        m.get(i, j),
                        m.get(j, i)
                    )));
                }
            }
        }
        Self::assemble(points, DistanceOracle::Dense(m), pseudometric)
    }

    pub(crate) fn assemble(
        points: Vec<Point>,
        oracle: DistanceOracle,
        pseudometric: bool,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("a space needs at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.weight.is_finite() || p.weight < 0.0 {
                return Err(Error::input(format!(
                    "points[{i}].weight: {} is not a finite nonnegative number",
                    p.weight
                )));
            }
        }
        let mut space = WeightedMetricSpace {
            points,
            oracle,
            pseudometric,
            tie_priority: None,
            notes: Vec::new(),
            integral: false,
        };
        space.integral = space.detect_integral();
        Ok(space)
    }

    fn detect_integral(&self) -> bool {
        let weights_ok = self.points.iter().all(|p| p.weight.fract() == 0.0);
        if !weights_ok {
            return false;
        }
        let max_d = match &self.oracle {
            DistanceOracle::Dense(m) | DistanceOracle::Graph { matrix: m, .. } => {
                if m.data.iter().any(|d| d.fract() != 0.0) {
                    return false;
                }
                m.data.iter().copied().fold(0.0, f64::max)
            }
            DistanceOracle::Tree(t) => t.height() as f64,
        };
        2.0 * self.total_weight() * max_d < EXACT_INTEGER_LIMIT
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.points[x].weight
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.points[x].label.as_deref()
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_name(&self, x: usize) -> String {
        self.label(x)
            .map(str::to_owned)
            .unwrap_or_else(|| x.to_string())
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.label.as_deref() == Some(label))
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    pub fn oracle(&self) -> &DistanceOracle {
        &self.oracle
    }

    pub fn is_pseudometric(&self) -> bool {
        self.pseudometric
    }

    pub fn set_pseudometric(&mut self, allowed: bool) {
        self.pseudometric = allowed;
    }

    /// True when every distance and weight is an integer and all costs fit
    /// below 2^53, so cost arithmetic is exact.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Comparison tolerance for bound checks on this space.
    pub fn tolerance(&self) -> f64 {
        if self.integral {
            0.0
        } else {
            FLOAT_TOLERANCE
        }
    }

    pub fn tie_priority(&self) -> Option<&[usize]> {
        self.tie_priority.as_deref()
    }

    pub fn set_tie_priority(&mut self, priority: Option<Vec<usize>>) -> Result<()> {
        if let Some(list) = &priority {
            let mut seen = vec![false; self.n()];
            for (pos, &id) in list.iter().enumerate() {
                if id >= self.n() {
                    return Err(Error::input(format!(
                        "tie_priority[{pos}]: {id} is not a point id"
                    )));
                }
                if std::mem::replace(&mut seen[id], true) {
                    return Err(Error::input(format!(
                        "tie_priority[{pos}]: {id} listed twice"
                    )));
                }
            }
        }
        self.tie_priority = priority;
        Ok(())
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn check_id(&self, x: usize) -> Result<()> {
        if x < self.n() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "point id {x} out of range (space has {} points)",
                self.n()
            )))
        }
    }

    /// Distance between two valid ids.
    pub fn distance(&self, a: usize, b: usize) -> Result<f64> {
        self.check_id(a)?;
        self.check_id(b)?;
        Ok(self.d(a, b))
    }

    /// Unchecked distance lookup.
    #[inline]
    pub(crate) fn d(&self, a: usize, b: usize) -> f64 {
        match &self.oracle {
            DistanceOracle::Dense(m) | DistanceOracle::Graph { matrix: m, .. } => m.get(a, b),
            DistanceOracle::Tree(t) => t.distance(a, b),
        }
    }

    /// Fully materialized distance matrix.
    pub fn to_dense(&self) -> DenseMatrix {
        match &self.oracle {
            DistanceOracle::Dense(m) | DistanceOracle::Graph { matrix: m, .. } => m.clone(),
            DistanceOracle::Tree(t) => {
                let n = self.n();
                let mut m = DenseMatrix::zeros(n);
                for a in 0..n {
                    for b in 0..a {
                        let d = t.distance(a, b);
                        m.set(a, b, d);
                        m.set(b, a, d);
                    }
                }
                m
            }
        }
    }

    /// Same points and flags, distances replaced by an explicit matrix.
    pub fn densified(&self) -> Self {
        let mut out = self.clone();
        out.oracle = DistanceOracle::Dense(self.to_dense());
        out
    }

    pub fn diameter(&self) -> f64 {
        let n = self.n();
        let mut best = 0.0f64;
        for a in 0..n {
            for b in 0..a {
                best = best.max(self.d(a, b));
            }
        }
        best
    }

    /// Weighted cost `sum_x weight(x) * c_{xF}`, summed in id order.
    pub fn cost(&self, facilities: &FacilitySet) -> Result<f64> {
        self.check_set(facilities)?;
        if facilities.is_empty() {
            return Err(Error::domain("cost of an empty facility set is undefined"));
        }
        Ok(self.cost_unchecked(facilities.members()))
    }

    pub(crate) fn cost_unchecked(&self, members: &[usize]) -> f64 {
        (0..self.n())
            .map(|x| self.weight(x) * self.nearest_in(x, members).1)
            .sum()
    }

    /// Nearest member of a nonempty slice, smallest id among ties. The slice
    /// must be sorted ascending for the tie rule to hold.
    #[inline]
    pub(crate) fn nearest_in(&self, x: usize, members: &[usize]) -> (usize, f64) {
        let mut best = (members[0], self.d(x, members[0]));
        for &f in &members[1..] {
            let d = self.d(x, f);
            if d < best.1 {
                best = (f, d);
            }
        }
        best
    }

    pub fn nearest_facility(&self, x: usize, facilities: &FacilitySet) -> Result<(usize, f64)> {
        self.check_id(x)?;
        self.check_set(facilities)?;
        if facilities.is_empty() {
            return Err(Error::domain("no facilities to serve from"));
        }
        Ok(self.nearest_in(x, facilities.members()))
    }

    /// Nearest and second-nearest facility for every point.
    pub fn assignment(&self, facilities: &FacilitySet) -> Result<Vec<Assignment>> {
        self.check_set(facilities)?;
        if facilities.is_empty() {
            return Err(Error::domain("no facilities to serve from"));
        }
        let members = facilities.members();
        Ok((0..self.n())
            .map(|x| {
                let (nearest, nearest_dist) = self.nearest_in(x, members);
                let rest: Vec<usize> = members.iter().copied().filter(|&f| f != nearest).collect();
                let second = (!rest.is_empty()).then(|| self.nearest_in(x, &rest));
                Assignment {
                    nearest,
                    nearest_dist,
                    second: second.map(|s| s.0),
                    second_dist: second.map(|s| s.1),
                }
            })
            .collect())
    }

    /// The facilities of `serving` that are nearest to some member of
    /// `clients`: `Q = { nearest(m, R) : m in M }`.
    pub fn serving_set(&self, serving: &FacilitySet, clients: &FacilitySet) -> Result<FacilitySet> {
        self.check_set(serving)?;
        self.check_set(clients)?;
        if serving.is_empty() {
            return Err(Error::domain("serving set of an empty facility set"));
        }
        let mut q: Vec<usize> = clients
            .members()
            .iter()
            .map(|&m| self.nearest_in(m, serving.members()).0)
            .collect();
        q.sort_unstable();
        q.dedup();
        Ok(FacilitySet(q))
    }

    pub(crate) fn check_set(&self, set: &FacilitySet) -> Result<()> {
        match set.members().last() {
            Some(&last) if last >= self.n() => Err(Error::input(format!(
                "facility {last} is not a point of this {}-point space",
                self.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Checks reflexivity, symmetry, nonnegativity, the zero-distance rule and
    /// the triangle inequality over all triples. Reports the first violation,
    /// or the tightest triple when everything holds.
    pub fn verify_metric(&self) -> BoundReport {
        const NAME: &str = "metric";
        let tol = self.tolerance();
        let m = self.to_dense();
        let n = self.n();
        let fail = |lhs: f64, rhs: f64, w: Witness| BoundReport {
            check_name: NAME.into(),
            holds: false,
            witness: Some(w),
            lhs,
            rhs,
            slack: rhs - lhs,
        };
        for a in 0..n {
            if m.get(a, a) != 0.0 {
                return fail(m.get(a, a), 0.0, Witness::Note(format!("d({a},{a}) != 0")));
            }
            for b in 0..n {
                let d = m.get(a, b);
                if !d.is_finite() || d < 0.0 {
                    return fail(
                        -d,
                        0.0,
                        Witness::Note(format!("d({a},{b}) = {d} is negative")),
                    );
                }
                if d != m.get(b, a) {
                    return fail(
                        d,
                        m.get(b, a),
                        Witness::Note(format!("d({a},{b}) != d({b},{a})")),
                    );
                }
                if a != b && d == 0.0 && !self.pseudometric {
                    return fail(
                        0.0,
                        0.0,
                        Witness::Note(format!(
                            "d({a},{b}) = 0 for distinct points (not a pseudometric space)"
                        )),
                    );
                }
            }
        }
        let mut tightest: Option<(f64, f64, [usize; 3])> = None;
        for x in 0..n {
            let row_x = m.row(x);
            for y in 0..n {
                if y == x {
                    continue;
                }
                let dxy = row_x[y];
                let row_y = m.row(y);
                for z in 0..n {
                    if z == x || z == y {
                        continue;
                    }
                    let lhs = row_x[z];
                    let rhs = dxy + row_y[z];
                    if lhs > rhs + tol {
                        return fail(lhs, rhs, Witness::Points(vec![x, y, z]));
                    }
                    if tightest.is_none_or(|(l, r, _)| rhs - lhs < r - l) {
                        tightest = Some((lhs, rhs, [x, y, z]));
                    }
                }
            }
        }
        match tightest {
            Some((lhs, rhs, w)) => {
                BoundReport::compare(NAME, lhs, rhs, tol, Some(Witness::Points(w.to_vec())))
            }
            None => BoundReport::compare(NAME, 0.0, 0.0, tol, None),
        }
    }
}

/// Sorted set of distinct point ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacilitySet(Vec<usize>);

impl FacilitySet {
    /// Sorts the members; duplicates are rejected.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("facility {} listed twice", w[0])));
        }
        Ok(FacilitySet(v))
    }

    /// Every point of an `n`-point space.
    pub fn all(n: usize) -> Self {
        FacilitySet((0..n).collect())
    }

    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        FacilitySet(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FacilitySet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// Copy without `x`.
    pub fn without(&self, x: usize) -> FacilitySet {
        FacilitySet(self.0.iter().copied().filter(|&y| y != x).collect())
    }
}

/// Nearest and runner-up facility of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub nearest: usize,
    pub nearest_dist: f64,
    pub second: Option<usize>,
    pub second_dist: Option<f64>,
}


#[cfg(test)]
mod tests {
    use super::fixtures::line3;
    use super::*;

    fn set(v: &[usize]) -> FacilitySet {
        FacilitySet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn distance_reflexive_and_checked() {
        let s = line3();
        assert_eq!(s.distance(1, 1).unwrap(), 0.0);
        assert!(matches!(s.distance(0, 3), Err(Error::Input(_))));
    }

    #[test]
    fn cost_all_points_is_zero() {
        let s = line3();
        assert_eq!(s.cost(&FacilitySet::all(3)).unwrap(), 0.0);
        assert_eq!(s.cost(&set(&[1])).unwrap(), 2.0);
    }

    #[test]
    fn cost_of_empty_set_is_domain_error() {
        let s = line3();
        assert!(matches!(s.cost(&set(&[])), Err(Error::Domain(_))));
        assert!(matches!(
            s.nearest_facility(0, &set(&[])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn nearest_tie_goes_to_smaller_id() {
        let s = line3();
        assert_eq!(s.nearest_facility(1, &set(&[0, 2])).unwrap(), (0, 1.0));
        assert_eq!(s.nearest_facility(2, &set(&[1, 2])).unwrap(), (2, 0.0));
    }

    #[test]
    fn serving_set_examples() {
        let s = line3();
        assert_eq!(s.serving_set(&set(&[0, 2]), &set(&[1])).unwrap(), set(&[0]));
        assert_eq!(
            s.serving_set(&FacilitySet::all(3), &set(&[0, 2])).unwrap(),
            set(&[0, 2])
        );
        assert!(s.serving_set(&set(&[]), &set(&[1])).is_err());
    }

    #[test]
    fn assignment_second_only_with_two_members() {
        let s = line3();
        let a = s.assignment(&set(&[1])).unwrap();
        assert!(a
            .iter()
            .all(|x| x.second.is_none() && x.second_dist.is_none()));
        let a = s.assignment(&set(&[0, 2])).unwrap();
        assert_eq!(a[1].nearest, 0);
        assert_eq!(a[1].second, Some(2));
        assert_eq!(a[1].second_dist, Some(1.0));
    }

    #[test]
    fn verify_metric_single_point() {
        let s = WeightedMetricSpace::from_matrix(vec![Point::new(1.0)], vec![vec![0.0]], false)
            .unwrap();
        assert!(s.verify_metric().holds);
    }

    #[test]
    fn verify_metric_reports_triangle_witness() {
        let s = WeightedMetricSpace::from_matrix(
            vec![Point::new(1.0); 3],
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0],
            ],
            false,
        )
        .unwrap();
        let r = s.verify_metric();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(Witness::Points(vec![0, 1, 2])));
        assert_eq!((r.lhs, r.rhs), (5.0, 2.0));
    }

    #[test]
    fn verify_metric_flags_zero_distance_unless_pseudometric() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        let mut s =
            WeightedMetricSpace::from_matrix(vec![Point::new(1.0); 2], rows, false).unwrap();
        assert!(!s.verify_metric().holds);
        s.set_pseudometric(true);
        assert!(s.verify_metric().holds);
    }

    #[test]
    fn matrix_validation_names_the_field() {
        let err = WeightedMetricSpace::from_matrix(
            vec![Point::new(1.0); 2],
            vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            false,
        )
        .unwrap_err();
        assert!(err.to_string().contains("metric.matrix[1][0]"), "{err}");
        let err =
            WeightedMetricSpace::from_matrix(vec![Point::new(1.0); 2], vec![vec![0.0, 1.0]], false)
                .unwrap_err();
        assert!(err.to_string().contains("rows"), "{err}");
        let err = WeightedMetricSpace::from_matrix(
            vec![Point::new(1.0); 2],
            vec![vec![1.0, 1.0], vec![1.0, 0.0]],
            false,
        )
        .unwrap_err();
        assert!(err.to_string().contains("diagonal"), "{err}");
    }

    #[test]
    fn facility_set_rejects_duplicates() {
        assert!(FacilitySet::new([2, 1, 2]).is_err());
        assert_eq!(FacilitySet::new([2, 0]).unwrap().members(), &[0, 2]);
    }

    #[test]
    fn integral_detection() {
        assert!(line3().is_integral());
        let s = WeightedMetricSpace::from_matrix(
            vec![Point::new(1.0); 2],
            vec![vec![0.0, 0.5], vec![0.5, 0.0]],
            false,
        )
        .unwrap();
        assert!(!s.is_integral());
        assert_eq!(s.tolerance(), FLOAT_TOLERANCE);
    }
}
