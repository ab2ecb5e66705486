use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FacilitySet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Reverse,
    Forward,
}

/// One removal (reverse) or addition (forward).
///
/// For reverse traces `step` is the size of the facility set before the
/// removal; for forward traces it is the size after the addition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub point: usize,
    pub cost_before: f64,
    pub cost_after: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub direction: Direction,
    pub k_target: usize,
    pub n: usize,
    pub steps: Vec<TraceStep>,
    pub final_set: FacilitySet,
}

pub const TRACE_CSV_HEADER: [&str; 5] = [
    "step",
    "removed_or_added",
    "cost_before",
    "cost_after",
    "delta",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    step: usize,
    removed_or_added: usize,
    cost_before: f64,
    cost_after: f64,
    delta: f64,
}

impl GreedyTrace {
    /// Cost of `final_set`; for an empty reverse trace this is the zero cost
    /// of keeping every point.
    pub fn final_cost(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.cost_after)
    }

    /// Prefix of a reverse trace that stops once `k` facilities remain.
    pub fn truncated(&self, k: usize) -> Result<GreedyTrace> {
        if self.direction != Direction::Reverse || k < self.k_target || k > self.n {
            return Err(Error::input(format!(
                "cannot truncate a trace reaching k={} at k={k}",
                self.k_target
            )));
        }
        let steps: Vec<TraceStep> = self.steps.iter().copied().filter(|s| s.step > k).collect();
        let mut removed = vec![false; self.n];
        for s in &steps {
            removed[s.point] = true;
        }
        let members: Vec<usize> = (0..self.n).filter(|&x| !removed[x]).collect();
        Ok(GreedyTrace {
            direction: Direction::Reverse,
            k_target: k,
            n: self.n,
            steps,
            final_set: FacilitySet::from_sorted(members),
        })
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_CSV_HEADER)?;
        for s in &self.steps {
            w.write_record([
                s.step.to_string(),
                s.point.to_string(),
                s.cost_before.to_string(),
                s.cost_after.to_string(),
                s.delta.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Parses a trace CSV produced by [`write_csv`](Self::write_csv) for a
    /// space with `n` points. The direction is inferred from the step column.
    pub fn read_csv<R: io::Read>(input: R, n: usize) -> Result<GreedyTrace> {
        let mut rdr = csv::Reader::from_reader(input);
        let header = rdr.headers()?.clone();
        if header.iter().ne(TRACE_CSV_HEADER) {
            return Err(Error::input(format!(
                "trace csv header must be {}",
                TRACE_CSV_HEADER.join(",")
            )));
        }
        let mut steps = Vec::new();
        for (line, row) in rdr.deserialize::<CsvRow>().enumerate() {
            let row = row.map_err(|e| Error::input(format!("trace csv row {}: {e}", line + 1)))?;
            if row.removed_or_added >= n {
                return Err(Error::input(format!(
                    "trace csv row {}: point {} out of range",
                    line + 1,
                    row.removed_or_added
                )));
            }
            steps.push(TraceStep {
                step: row.step,
                point: row.removed_or_added,
                cost_before: row.cost_before,
                cost_after: row.cost_after,
                delta: row.delta,
            });
        }
        // reverse traces start at step n >= 2, forward traces at step 1
        let forward = steps.first().is_some_and(|s| s.step == 1);
        let points: Vec<usize> = steps.iter().map(|s| s.point).collect();
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("trace csv lists a point twice"));
        }
        if forward {
            for (i, s) in steps.iter().enumerate() {
                if s.step != i + 1 {
                    return Err(Error::input(format!(
                        "trace csv row {}: expected forward step {}",
                        i + 1,
                        i + 1
                    )));
                }
            }
            Ok(GreedyTrace {
                direction: Direction::Forward,
                k_target: steps.len(),
                n,
                steps,
                final_set: FacilitySet::from_sorted(sorted),
            })
        } else {
            for (i, s) in steps.iter().enumerate() {
                if s.step != n - i || s.step < 2 {
                    return Err(Error::input(format!(
                        "trace csv row {}: expected reverse step {}",
                        i + 1,
                        n - i
                    )));
                }
            }
            let members = (0..n)
                .filter(|x| sorted.binary_search(x).is_err())
                .collect();
            Ok(GreedyTrace {
                direction: Direction::Reverse,
                k_target: n - steps.len(),
                n,
                steps,
                final_set: FacilitySet::from_sorted(members),
            })
        }
    }
}
