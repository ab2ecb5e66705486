//! JSON instance files.
//!
//! ```json
//! { "points": [{"id": 0, "weight": 1.0, "label": "mu"}, ...],
//!   "metric": {"type": "dense", "matrix": [[0, 1], [1, 0]]}
//!           | {"type": "graph", "edges": [[0, 1, 3.0], ...]}
//!           | {"type": "tree_lb", "h": 3},
//!   "pseudometric": true,
//!   "tie_priority": [0, 2, 3] }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{gen_tree_lb, tree_lb_edges, TreeInstanceParams};
use crate::graph::graph_to_metric;
use crate::metric::{DistanceOracle, Edge, Point, WeightedMetricSpace};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default)]
    points: Vec<PointRecord>,
    metric: MetricRecord,
    #[serde(default)]
    pseudometric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tie_priority: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRecord {
    id: usize,
    weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum MetricRecord {
    Dense { matrix: Vec<Vec<f64>> },
    Graph { edges: Vec<Edge> },
    TreeLb { h: u32 },
}

/// How a tree instance is written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TreeEncoding {
    /// `{"type": "tree_lb", "h": ...}`
    #[default]
    Implicit,
    /// Unit-length edge list.
    ExpandedGraph,
}

pub fn to_json(space: &WeightedMetricSpace, tree: TreeEncoding) -> Result<String> {
    let metric = match (space.oracle(), tree) {
        (DistanceOracle::Dense(m), _) => MetricRecord::Dense { matrix: m.rows() },
        (DistanceOracle::Graph { edges, .. }, _) => MetricRecord::Graph {
            edges: edges.clone(),
        },
        (DistanceOracle::Tree(t), TreeEncoding::Implicit) => MetricRecord::TreeLb { h: t.height() },
        (DistanceOracle::Tree(t), TreeEncoding::ExpandedGraph) => MetricRecord::Graph {
            edges: tree_lb_edges(t.height())?,
        },
    };
    let file = InstanceFile {
        points: space
            .points()
            .iter()
            .enumerate()
            .map(|(id, p)| PointRecord {
                id,
                weight: p.weight,
                label: p.label.clone(),
            })
            .collect(),
        metric,
        pseudometric: space.is_pseudometric(),
        tie_priority: space.tie_priority().map(<[usize]>::to_vec),
        notes: space.notes().to_vec(),
    };
    let mut s = serde_json::to_string(&file)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<WeightedMetricSpace> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::input(format!("instance json: {e}")))?;
    for (i, p) in file.points.iter().enumerate() {
        if p.id != i {
            return Err(Error::input(format!(
                "points[{i}].id: expected {i}, found {} (ids must be 0..n in order)",
                p.id
            )));
        }
    }
    let points: Vec<Point> = file
        .points
        .iter()
        .map(|p| Point {
            weight: p.weight,
            label: p.label.clone(),
        })
        .collect();
    let mut space = match file.metric {
        MetricRecord::Dense { matrix } => {
            WeightedMetricSpace::from_matrix(points, matrix, file.pseudometric)?
        }
        MetricRecord::Graph { edges } => graph_to_metric(points, edges, file.pseudometric)?,
        MetricRecord::TreeLb { h } => {
            let mut generated = gen_tree_lb(TreeInstanceParams { h })?;
            if !points.is_empty() {
                if points.len() != generated.n() {
                    return Err(Error::input(format!(
                        "points: tree_lb h={h} has {} points, file lists {}",
                        generated.n(),
                        points.len()
                    )));
                }
                if let Some(i) =
                    (0..points.len()).find(|&i| points[i].weight != generated.weight(i))
                {
                    return Err(Error::input(format!(
                        "points[{i}].weight: {} does not match tree_lb h={h} weight {}",
                        points[i].weight,
                        generated.weight(i)
                    )));
                }
            }
            generated.set_pseudometric(file.pseudometric);
            if file.tie_priority.is_none() {
                return Ok(generated);
            }
            generated
        }
    };
    if let Some(pri) = file.tie_priority {
        space.set_tie_priority(Some(pri))?;
    }
    for note in file.notes {
        if !space.notes().contains(&note) {
            space.push_note(note);
        }
    }
    Ok(space)
}

pub fn load(path: impl AsRef<Path>) -> Result<WeightedMetricSpace> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save(space: &WeightedMetricSpace, path: impl AsRef<Path>, tree: TreeEncoding) -> Result<()> {
    fs::write(path, to_json(space, tree)?)?;
    Ok(())
}
