use std::fmt::Write;

use aap_core::{IndexName, ParalysisKind};

use crate::error::{Result, StoreError};
use crate::record::ProjectRecord;

/// Renders a Markdown report covering every iteration and the paralysis
/// check over the whole history.
pub fn export_report(record: &ProjectRecord) -> Result<String> {
    if record.iterations.is_empty() {
        return Err(StoreError::EmptyHistory);
    }
    let engine = record.config.engine();
    let mut out = String::new();
    let w = &mut out;
    // Writing into a String cannot fail.
    let _ = writeln!(w, "# Analysis gate report: {}\n", record.project.name);
    let _ = writeln!(w, "- Project: `{}`", record.project.id);
    let _ = writeln!(w, "- Created: {}", record.project.created_at);
    let _ = writeln!(
        w,
        "- Threshold: {} (strict), PRI mode: {:?}",
        engine.threshold, engine.pri_mode
    );
    let _ = writeln!(w, "- Iterations: {}\n", record.iterations.len());

    for it in &record.iterations {
        let rec = &it.recommendation;
        let _ = writeln!(w, "## Iteration {} ({})\n", it.seq, it.timestamp);
        let _ = writeln!(w, "| Index | Value | Passes |");
        let _ = writeln!(w, "|-------|-------|--------|");
        for name in IndexName::ALL {
            let (value, passes) = match it.snapshot.get(name) {
                Some(v) => (
                    format!("{v:.3}"),
                    if engine.passes(v) { "yes" } else { "no" },
                ),
                None => ("unmeasured".to_string(), "-"),
            };
            let _ = writeln!(w, "| {name} | {value} | {passes} |");
        }
        let _ = writeln!(w);
        let _ = writeln!(
            w,
            "Outcome: **{}** (step {})\n",
            rec.outcome, rec.fired_step
        );
        let _ = writeln!(w, "> {}\n", rec.rationale);
        if rec.advisories.is_empty() {
            let _ = writeln!(w, "Advisories: none\n");
        } else {
            let list: Vec<String> = rec.advisories.iter().map(ToString::to_string).collect();
            let _ = writeln!(w, "Advisories: {}\n", list.join(", "));
        }
    }

    let paralysis = record.paralysis();
    let _ = writeln!(w, "## Paralysis check\n");
    let seqs: Vec<String> = paralysis.window.iter().map(ToString::to_string).collect();
    match paralysis.kind {
        ParalysisKind::None => {
            let _ = writeln!(
                w,
                "No analysis paralysis detected (window: {}).",
                if seqs.is_empty() {
                    "-".to_string()
                } else {
                    seqs.join(", ")
                }
            );
        }
        ParalysisKind::ThresholdChasing => {
            let _ = writeln!(
                w,
                "**Analysis paralysis: ThresholdChasing** over iterations {}. Every measured \
                 index passes, yet the gate stayed closed; stop refining toward 1 and \
                 reconsider the PRI mode.",
                seqs.join(", ")
            );
        }
        ParalysisKind::Stagnation => {
            let _ = writeln!(
                w,
                "**Analysis paralysis: Stagnation** over iterations {}. No index moved by \
                 {} or more and the gate stayed closed; change the approach rather than \
                 repeating it.",
                seqs.join(", "),
                engine.stagnation_delta
            );
        }
    }
    Ok(out)
}
