use std::fmt;

use serde::{Deserialize, Serialize};

/// Absolute tolerance used for instances whose distances or weights are not
/// all integers.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Where a check was violated, or where it was tightest if it held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Point(usize),
    Points(Vec<usize>),
    Step { step: usize, point: usize },
    Note(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(x) => write!(f, "x={x}"),
            Witness::Points(ps) => {
                let body: Vec<String> = ps.iter().map(usize::to_string).collect();
                write!(f, "({})", body.join(" "))
            }
            Witness::Step { step, point } => write!(f, "step={step} point={point}"),
            Witness::Note(s) => f.write_str(s),
        }
    }
}

/// Outcome of one inequality check `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check_name: String,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl BoundReport {
    /// Builds a report whose verdict is `lhs <= rhs + tolerance`.
    pub fn compare(
        check_name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        witness: Option<Witness>,
    ) -> Self {
        BoundReport {
            check_name: check_name.into(),
            holds: lhs <= rhs + tolerance,
            witness,
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }
}
