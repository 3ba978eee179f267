//! Exhaustive evaluation of the gate over a grid of index values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{decide, EngineConfig, Outcome, Step};
use crate::error::{check_unit, Error, Result};
use crate::snapshot::IndexSnapshot;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Points evaluated: `g^6` with F measured plus `g^5` with F unmeasured.
    pub points: u64,
    pub outcomes: BTreeMap<Outcome, u64>,
    pub fired_steps: BTreeMap<Step, u64>,
    pub errors: u64,
    /// Every point produced exactly one recommendation.
    pub total: bool,
}

impl SweepReport {
    pub fn count(&self, outcome: Outcome) -> u64 {
        self.outcomes.get(&outcome).copied().unwrap_or(0)
    }
}

/// Visits every snapshot on the grid, F measured first, in lexicographic
/// `(PI, U, F, PRI, IU, GQ)` order.
pub fn for_each_grid_point(grid: &[f64], mut visit: impl FnMut(IndexSnapshot)) {
    let f_values: Vec<Option<f64>> = grid.iter().copied().map(Some).chain([None]).collect();
    for &pi in grid {
        for &u in grid {
            for &f in &f_values {
                for &pri in grid {
                    for &iu in grid {
                        for &gq in grid {
                            visit(IndexSnapshot {
                                pi,
                                u,
                                f,
                                pri,
                                iu,
                                gq,
                            });
                        }
                    }
                }
            }
        }
    }
}

pub fn grid_size(grid_len: usize) -> u64 {
    let g = grid_len as u64;
    g.pow(6) + g.pow(5)
}

pub fn sweep(grid: &[f64], config: &EngineConfig) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::DegenerateInput("sweep grid is empty".into()));
    }
    for (i, v) in grid.iter().enumerate() {
        check_unit(format!("grid[{i}]"), *v)?;
    }
    config.validate()?;

    let mut report = SweepReport {
        points: 0,
        outcomes: BTreeMap::new(),
        fired_steps: BTreeMap::new(),
        errors: 0,
        total: false,
    };
    for_each_grid_point(grid, |snapshot| {
        report.points += 1;
        match decide(&snapshot, config) {
            Ok(r) => {
                *report.outcomes.entry(r.outcome).or_default() += 1;
                *report.fired_steps.entry(r.fired_step).or_default() += 1;
            }
            Err(_) => report.errors += 1,
        }
    });
    let decided: u64 = report.outcomes.values().sum();
    report.total = report.errors == 0 && decided == report.points;
    Ok(report)
}
