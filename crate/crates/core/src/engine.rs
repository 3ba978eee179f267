//! The analysis-to-design gate.
//!
//! [`decide`] walks four stages in a fixed order: data relevance (PI, U,
//! F), process understanding (PRI), interface utility (IU) and geography
//! (GQ). Each stage is a list of guarded rules whose guards partition the
//! stage's input space. A rule either ends the decision with an
//! [`Outcome`] or lets evaluation continue, possibly attaching an
//! [`Advisory`]. Every guard examined is recorded in the trace.
//!
//! An index passes only when it is strictly above the threshold.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snapshot::IndexSnapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriMode {
    /// Advance past process analysis only once PRI reaches 1.
    Literal,
    /// Advance once PRI clears the threshold.
    #[default]
    Pragmatic,
}

impl std::str::FromStr for PriMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(PriMode::Literal),
            "pragmatic" => Ok(PriMode::Pragmatic),
            other => Err(Error::InvalidConfig(format!(
                "unknown PRI mode `{other}` (expected literal or pragmatic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub threshold: f64,
    pub pri_mode: PriMode,
    pub pri_unity_epsilon: f64,
    pub paralysis_window: usize,
    pub stagnation_delta: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            threshold: 0.5,
            pri_mode: PriMode::Pragmatic,
            pri_unity_epsilon: 1e-9,
            paralysis_window: 3,
            stagnation_delta: 0.05,
        }
    }
}

impl EngineConfig {
    pub fn literal() -> Self {
        EngineConfig {
            pri_mode: PriMode::Literal,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.threshold;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold must lie strictly between 0 and 1, got {t}"
            )));
        }
        let eps = self.pri_unity_epsilon;
        if !(eps > 0.0 && eps < 1.0 - t) {
            return Err(Error::InvalidConfig(format!(
                "pri_unity_epsilon must lie in (0, 1 - threshold), got {eps}"
            )));
        }
        if self.paralysis_window < 2 {
            return Err(Error::InvalidConfig(format!(
                "paralysis_window must be at least 2, got {}",
                self.paralysis_window
            )));
        }
        if !(self.stagnation_delta.is_finite() && self.stagnation_delta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "stagnation_delta must be positive, got {}",
                self.stagnation_delta
            )));
        }
        Ok(())
    }

    /// Strict pass test.
    pub fn passes(&self, value: f64) -> bool {
        value > self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    RestartAnalysis,
    CheckFutureUsefulness,
    ContinueProcessAnalysis,
    InvolveMorePeople,
    FindAlternatives,
    ResolveGeographicalFactors,
    ReadyForDesign,
}

impl Outcome {
    pub const ALL: [Outcome; 7] = [
        Outcome::RestartAnalysis,
        Outcome::CheckFutureUsefulness,
        Outcome::ContinueProcessAnalysis,
        Outcome::InvolveMorePeople,
        Outcome::FindAlternatives,
        Outcome::ResolveGeographicalFactors,
        Outcome::ReadyForDesign,
    ];

    /// Only `ReadyForDesign` opens the gate.
    pub fn is_gate_open(self) -> bool {
        self == Outcome::ReadyForDesign
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::RestartAnalysis => "RestartAnalysis",
            Outcome::CheckFutureUsefulness => "CheckFutureUsefulness",
            Outcome::ContinueProcessAnalysis => "ContinueProcessAnalysis",
            Outcome::InvolveMorePeople => "InvolveMorePeople",
            Outcome::FindAlternatives => "FindAlternatives",
            Outcome::ResolveGeographicalFactors => "ResolveGeographicalFactors",
            Outcome::ReadyForDesign => "ReadyForDesign",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Advisory {
    ReworkTeam,
    RethinkInterface,
    NotGeneric,
    /// The indices fell in a region the original algorithm does not cover.
    UncoveredRegion,
}

impl fmt::Display for Advisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Advisory::ReworkTeam => "ReworkTeam",
            Advisory::RethinkInterface => "RethinkInterface",
            Advisory::NotGeneric => "NotGeneric",
            Advisory::UncoveredRegion => "UncoveredRegion",
        };
        f.write_str(s)
    }
}

/// Algorithm step identifiers. Steps written with a trailing arrow are
/// pass-through guards that let evaluation continue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "3a")]
    S3a,
    #[serde(rename = "3b")]
    S3b,
    #[serde(rename = "3c→")]
    S3c,
    #[serde(rename = "3d→")]
    S3d,
    #[serde(rename = "3e")]
    S3e,
    #[serde(rename = "3f")]
    S3f,
    #[serde(rename = "3g")]
    S3g,
    #[serde(rename = "5")]
    S5,
    #[serde(rename = "6")]
    S6,
    #[serde(rename = "7→")]
    S7,
    #[serde(rename = "8")]
    S8,
    #[serde(rename = "8→")]
    S8Pass,
    #[serde(rename = "9")]
    S9,
    #[serde(rename = "9b")]
    S9b,
    #[serde(rename = "10")]
    S10,
}

impl Step {
    pub fn id(self) -> &'static str {
        match self {
            Step::S3a => "3a",
            Step::S3b => "3b",
            Step::S3c => "3c→",
            Step::S3d => "3d→",
            Step::S3e => "3e",
            Step::S3f => "3f",
            Step::S3g => "3g",
            Step::S5 => "5",
            Step::S6 => "6",
            Step::S7 => "7→",
            Step::S8 => "8",
            Step::S8Pass => "8→",
            Step::S9 => "9",
            Step::S9b => "9b",
            Step::S10 => "10",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Guard false; the rule did not apply.
    Skipped,
    /// Guard true; evaluation continued to the next stage.
    Passed,
    /// Guard true; the rule produced the outcome.
    Fired,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    pub step: Step,
    pub guard: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recommendation {
    pub outcome: Outcome,
    pub fired_step: Step,
    pub advisories: BTreeSet<Advisory>,
    pub rationale: String,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Effect {
    Conclude(Outcome),
    Continue,
}

struct Rule {
    step: Step,
    guard: fn(&Inputs) -> bool,
    /// Guard rendering; `{t}` becomes the threshold.
    text: &'static str,
    effect: Effect,
    advisories: &'static [Advisory],
}

/// Pre-evaluated guard atoms for one snapshot.
struct Inputs {
    pi: bool,
    u: bool,
    f_measured: bool,
    f: bool,
    pri: bool,
    pri_is_one: bool,
    literal: bool,
    iu: bool,
    gq: bool,
}

impl Inputs {
    fn new(s: &IndexSnapshot, config: &EngineConfig) -> Self {
        Inputs {
            pi: config.passes(s.pi),
            u: config.passes(s.u),
            f_measured: s.f.is_some(),
            f: s.f.is_some_and(|f| config.passes(f)),
            pri: config.passes(s.pri),
            pri_is_one: (s.pri - 1.0).abs() <= config.pri_unity_epsilon,
            literal: config.pri_mode == PriMode::Literal,
            iu: config.passes(s.iu),
            gq: config.passes(s.gq),
        }
    }
}

use Advisory::*;
use Effect::*;
use Outcome::*;

const DATA_STAGE: &[Rule] = &[
    Rule {
        step: Step::S3a,
        guard: |i| i.pi && (!i.u || (i.f_measured && !i.f)),
        text: "PI > {t} and (U <= {t} or (F measured and F <= {t}))",
        effect: Conclude(RestartAnalysis),
        advisories: &[],
    },
    Rule {
        step: Step::S3b,
        guard: |i| !i.pi && i.u && !i.f_measured,
        text: "PI <= {t} and U > {t} and F unmeasured",
        effect: Conclude(CheckFutureUsefulness),
        advisories: &[],
    },
    Rule {
        step: Step::S3c,
        guard: |i| !i.pi && i.u && i.f,
        text: "PI <= {t} and U > {t} and F > {t}",
        effect: Continue,
        advisories: &[ReworkTeam],
    },
    Rule {
        step: Step::S3d,
        guard: |i| i.pi && i.u && i.f,
        text: "PI > {t} and U > {t} and F > {t}",
        effect: Continue,
        advisories: &[],
    },
    Rule {
        step: Step::S3e,
        guard: |i| !i.pi && !i.u,
        text: "PI <= {t} and U <= {t}",
        effect: Conclude(RestartAnalysis),
        advisories: &[ReworkTeam, UncoveredRegion],
    },
    Rule {
        step: Step::S3f,
        guard: |i| !i.pi && i.u && i.f_measured && !i.f,
        text: "PI <= {t} and U > {t} and F measured and F <= {t}",
        effect: Conclude(RestartAnalysis),
        advisories: &[UncoveredRegion],
    },
    Rule {
        step: Step::S3g,
        guard: |i| i.pi && i.u && !i.f_measured,
        text: "PI > {t} and U > {t} and F unmeasured",
        effect: Conclude(CheckFutureUsefulness),
        advisories: &[UncoveredRegion],
    },
];

const PROCESS_STAGE: &[Rule] = &[
    Rule {
        step: Step::S5,
        guard: |i| !i.pri,
        text: "PRI <= {t}",
        effect: Conclude(RestartAnalysis),
        advisories: &[],
    },
    Rule {
        step: Step::S6,
        guard: |i| i.literal && i.pri && !i.pri_is_one,
        text: "literal mode and PRI > {t} and PRI != 1",
        effect: Conclude(ContinueProcessAnalysis),
        advisories: &[],
    },
    Rule {
        step: Step::S7,
        guard: |i| (i.literal && i.pri_is_one) || (!i.literal && i.pri),
        text: "(literal mode and PRI = 1) or (pragmatic mode and PRI > {t})",
        effect: Continue,
        advisories: &[],
    },
];

const INTERFACE_STAGE: &[Rule] = &[
    Rule {
        step: Step::S8,
        guard: |i| !i.iu && !i.pi,
        text: "IU <= {t} and PI <= {t}",
        effect: Conclude(InvolveMorePeople),
        advisories: &[],
    },
    Rule {
        step: Step::S8Pass,
        guard: |i| !i.iu && i.pi,
        text: "IU <= {t} and PI > {t}",
        effect: Continue,
        advisories: &[RethinkInterface],
    },
];

const GEOGRAPHY_STAGE: &[Rule] = &[
    Rule {
        step: Step::S9,
        guard: |i| !i.gq && (!i.pi || !i.pri),
        text: "GQ <= {t} and (PI <= {t} or PRI <= {t})",
        effect: Conclude(FindAlternatives),
        advisories: &[],
    },
    Rule {
        step: Step::S9b,
        guard: |i| !i.gq && i.pi && i.pri,
        text: "GQ <= {t} and PI > {t} and PRI > {t}",
        effect: Conclude(ResolveGeographicalFactors),
        advisories: &[NotGeneric],
    },
    Rule {
        step: Step::S10,
        guard: |i| i.gq,
        text: "GQ > {t}",
        effect: Conclude(ReadyForDesign),
        advisories: &[],
    },
];

const STAGES: [&[Rule]; 4] = [DATA_STAGE, PROCESS_STAGE, INTERFACE_STAGE, GEOGRAPHY_STAGE];

fn render_guard(text: &str, threshold: f64) -> String {
    text.replace("{t}", &threshold.to_string())
}

/// Explanation attached to the recommendation for the step that fired.
pub fn rationale(step: Step) -> &'static str {
    match step {
        Step::S3a => "Step 3a: the team's contribution is adequate but the gathered data is not relevant enough; discard it and restart the analysis.",
        Step::S3b => "Step 3b: the data is immediately useful but its future usefulness has not been assessed; check future usefulness.",
        Step::S3c => "Step 3c: the data is useful now and later, but the team itself needs reworking.",
        Step::S3d => "Step 3d: team contribution and data usefulness both pass; proceed to process analysis.",
        Step::S3e => "Step 3e: neither the team's contribution nor the immediately useful data passes; restart the analysis with a reworked team.",
        Step::S3f => "Step 3f: the data is useful now but measured future usefulness fails while the team also falls short; restart the analysis.",
        Step::S3g => "Step 3g: the team and the immediate data pass but future usefulness was never measured; check future usefulness.",
        Step::S5 => "Step 5: the existing processes are not understood; return to step 1 and redo the analysis.",
        Step::S6 => "Step 6: processes are understood above threshold but not completely; continue process analysis without starting over.",
        Step::S7 => "Step 7: process understanding is sufficient to move on.",
        Step::S8 => "Step 8: interface utility and team contribution both fall short; involve more people.",
        Step::S8Pass => "Step 8: interface utility falls short while the team passes; rethink the interface and move on.",
        Step::S9 => "Step 9: the geographical quotient is low and may be dragging down PI or PRI; find alternatives.",
        Step::S9b => "Step 9b: the geographical quotient is low although PI and PRI pass; resolve the geographical factors before design, as the solution will not be generic.",
        Step::S10 => "Step 10: the geographical quotient passes; the gate is open and design work can begin.",
    }
}

/// Runs the gate over one snapshot.
pub fn decide(snapshot: &IndexSnapshot, config: &EngineConfig) -> Result<Recommendation> {
    config.validate()?;
    snapshot.validate()?;
    let inputs = Inputs::new(snapshot, config);

    let mut trace = Vec::new();
    let mut advisories = BTreeSet::new();
    for stage in STAGES {
        for rule in stage {
            let holds = (rule.guard)(&inputs);
            let verdict = match (holds, rule.effect) {
                (false, _) => Verdict::Skipped,
                (true, Continue) => Verdict::Passed,
                (true, Conclude(_)) => Verdict::Fired,
            };
            trace.push(TraceEntry {
                step: rule.step,
                guard: render_guard(rule.text, config.threshold),
                verdict,
            });
            if !holds {
                continue;
            }
            advisories.extend(rule.advisories.iter().copied());
            if let Conclude(outcome) = rule.effect {
                return Ok(Recommendation {
                    outcome,
                    fired_step: rule.step,
                    advisories,
                    rationale: rationale(rule.step).to_string(),
                    trace,
                });
            }
            break;
        }
    }
    unreachable!("the geography stage always concludes")
}

/// Evaluates every guard of every stage independently of evaluation order.
///
/// Returns, per stage, the steps whose guard holds. The stage guards
/// partition the input space, so each inner list holds at most one step
/// (exactly one for every stage except interface utility, which has no
/// rule when IU passes).
pub fn matching_rules(snapshot: &IndexSnapshot, config: &EngineConfig) -> [Vec<Step>; 4] {
    let inputs = Inputs::new(snapshot, config);
    STAGES.map(|stage| {
        stage
            .iter()
            .filter(|rule| (rule.guard)(&inputs))
            .map(|rule| rule.step)
            .collect()
    })
}
