//! Detection of analysis paralysis over an iteration history.
//!
//! Two patterns are recognised over the most recent `paralysis_window`
//! iterations:
//!
//! * threshold chasing: every measured index passes in each iteration, yet
//!   the gate never opened (the team is polishing toward 1);
//! * stagnation: no index moved by `stagnation_delta` or more across the
//!   window and the gate never opened.
//!
//! Threshold chasing wins when both hold.

use serde::{Deserialize, Serialize};

use crate::engine::{EngineConfig, Outcome, Recommendation};
use crate::snapshot::{IndexName, IndexSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParalysisKind {
    ThresholdChasing,
    Stagnation,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParalysisReport {
    pub triggered: bool,
    pub kind: ParalysisKind,
    /// Sequence numbers of the iterations examined.
    pub window: Vec<u32>,
}

/// One past iteration as seen by the detector.
#[derive(Debug, Clone, Copy)]
pub struct HistoryPoint<'a> {
    pub seq: u32,
    pub snapshot: &'a IndexSnapshot,
    pub outcome: Outcome,
}

/// Detector over `(snapshot, recommendation)` pairs numbered from 1.
pub fn detect_paralysis(
    history: &[(IndexSnapshot, Recommendation)],
    config: &EngineConfig,
) -> ParalysisReport {
    let points: Vec<HistoryPoint<'_>> = history
        .iter()
        .enumerate()
        .map(|(i, (snapshot, rec))| HistoryPoint {
            seq: i as u32 + 1,
            snapshot,
            outcome: rec.outcome,
        })
        .collect();
    detect_paralysis_in(&points, config)
}

pub fn detect_paralysis_in(history: &[HistoryPoint<'_>], config: &EngineConfig) -> ParalysisReport {
    let k = config.paralysis_window;
    let start = history.len().saturating_sub(k);
    let window = &history[start..];
    let seqs: Vec<u32> = window.iter().map(|p| p.seq).collect();

    let kind = if history.len() < k || window.iter().any(|p| p.outcome.is_gate_open()) {
        ParalysisKind::None
    } else if window
        .iter()
        .all(|p| p.snapshot.measured().all(|(_, v)| config.passes(v)))
    {
        ParalysisKind::ThresholdChasing
    } else if is_stagnant(window, config.stagnation_delta) {
        ParalysisKind::Stagnation
    } else {
        ParalysisKind::None
    };

    ParalysisReport {
        triggered: kind != ParalysisKind::None,
        kind,
        window: seqs,
    }
}

/// Every index spans less than `delta` across the window. F counts as
/// having moved when it is measured in some iterations and not others.
fn is_stagnant(window: &[HistoryPoint<'_>], delta: f64) -> bool {
    IndexName::ALL.into_iter().all(|name| {
        let values: Vec<Option<f64>> = window.iter().map(|p| p.snapshot.get(name)).collect();
        if values.iter().all(Option::is_none) {
            return true;
        }
        if values.iter().any(Option::is_none) {
            return false;
        }
        let (lo, hi) = values
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(*v), hi.max(*v))
            });
        hi - lo < delta
    })
}
