//! Human-readable output.

use std::fmt::Write;

use aap_core::ParalysisReport;
use aap_core::{
    EngineConfig, IndexName, IndexSnapshot, Outcome, Recommendation, SweepReport, Verdict,
};
use aap_store::IterationRecord;

pub fn index_table(snapshot: &IndexSnapshot, config: &EngineConfig) -> String {
    let mut out = String::from("Index  Value       Passes\n");
    for name in IndexName::ALL {
        let (value, passes) = match snapshot.get(name) {
            Some(v) => (
                format!("{v:.6}"),
                if config.passes(v) { "yes" } else { "no" },
            ),
            None => ("unmeasured".to_string(), "-"),
        };
        let _ = writeln!(out, "{:<6} {value:<11} {passes}", name.as_str());
    }
    out
}

pub fn recommendation(rec: &Recommendation) -> String {
    let mut out = String::new();
    let gate = if rec.outcome.is_gate_open() {
        "open"
    } else {
        "closed"
    };
    let _ = writeln!(
        out,
        "Outcome: {} (step {}, gate {gate})",
        rec.outcome, rec.fired_step
    );
    let _ = writeln!(out, "Rationale: {}", rec.rationale);
    if rec.advisories.is_empty() {
        let _ = writeln!(out, "Advisories: none");
    } else {
        let list: Vec<String> = rec.advisories.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "Advisories: {}", list.join(", "));
    }
    let _ = writeln!(out, "Trace:");
    for entry in &rec.trace {
        let verdict = match entry.verdict {
            Verdict::Skipped => "skipped",
            Verdict::Passed => "passed",
            Verdict::Fired => "FIRED",
        };
        let _ = writeln!(
            out,
            "  {:<4} {:<8} {}",
            entry.step.id(),
            verdict,
            entry.guard
        );
    }
    out
}

pub fn decision(snapshot: &IndexSnapshot, rec: &Recommendation, config: &EngineConfig) -> String {
    format!("{}\n{}", index_table(snapshot, config), recommendation(rec))
}

fn short(value: Option<f64>) -> String {
    value.map_or_else(|| "  -  ".to_string(), |v| format!("{v:.3}"))
}

pub fn history(iterations: &[IterationRecord], paralysis: &ParalysisReport) -> String {
    let mut out = String::from(
        "Seq  Timestamp             PI     U      F      PRI    IU     GQ     Outcome (step)\n",
    );
    for it in iterations {
        let s = &it.snapshot;
        let _ = writeln!(
            out,
            "{:<4} {}  {}  {}  {}  {}  {}  {}  {} ({})",
            it.seq,
            it.timestamp,
            short(Some(s.pi)),
            short(Some(s.u)),
            short(s.f),
            short(Some(s.pri)),
            short(Some(s.iu)),
            short(Some(s.gq)),
            it.recommendation.outcome,
            it.recommendation.fired_step
        );
    }
    if paralysis.triggered {
        let _ = writeln!(
            out,
            "\nAnalysis paralysis: {:?} over iterations {:?}",
            paralysis.kind, paralysis.window
        );
    } else {
        let _ = writeln!(out, "\nNo analysis paralysis detected.");
    }
    out
}

pub fn sweep(report: &SweepReport) -> String {
    let mut out = String::from("Outcome                     Count\n");
    for outcome in Outcome::ALL {
        let _ = writeln!(out, "{:<27} {}", outcome.as_str(), report.count(outcome));
    }
    let _ = writeln!(out, "\nPoints: {}", report.points);
    let _ = writeln!(out, "Errors: {}", report.errors);
    let _ = writeln!(out, "Totality: {}", report.total);
    out
}
