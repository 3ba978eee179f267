//! Structured evidence gathered during an analysis iteration.
//!
//! Every instrument validates its own invariants; the index functions in
//! [`crate::indices`] call `validate` before computing anything.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiAnswer {
    pub question_id: String,
    pub score: f64,
}

/// Answers to the people-index question set.
///
/// `weights` may be left empty, which means uniform weighting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiQuestionnaire {
    pub answers: Vec<PiAnswer>,
    #[serde(default)]
    pub weights: Vec<f64>,
}

impl PiQuestionnaire {
    /// Builds a questionnaire with uniform weights.
    pub fn uniform<I, S>(answers: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let answers: Vec<PiAnswer> = answers
            .into_iter()
            .map(|(id, score)| PiAnswer {
                question_id: id.into(),
                score,
            })
            .collect();
        let weights = vec![1.0; answers.len()];
        PiQuestionnaire { answers, weights }
    }

    pub fn effective_weights(&self) -> Vec<f64> {
        if self.weights.is_empty() {
            vec![1.0; self.answers.len()]
        } else {
            self.weights.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        const PATH: &str = "pi_questionnaire";
        if self.answers.is_empty() {
            return Err(Error::invalid(
                format!("{PATH}.answers"),
                "at least one answer is required",
            ));
        }
        let mut seen = HashSet::new();
        for (i, answer) in self.answers.iter().enumerate() {
            if !seen.insert(answer.question_id.as_str()) {
                return Err(Error::invalid(
                    format!("{PATH}.answers[{i}].question_id"),
                    format!("duplicate question id `{}`", answer.question_id),
                ));
            }
            check_unit(format!("{PATH}.answers[{i}].score"), answer.score)?;
        }
        if !self.weights.is_empty() && self.weights.len() != self.answers.len() {
            return Err(Error::invalid(
                format!("{PATH}.weights"),
                format!(
                    "{} weights given for {} answers",
                    self.weights.len(),
                    self.answers.len()
                ),
            ));
        }
        for (i, w) in self.weights.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::invalid(
                    format!("{PATH}.weights[{i}]"),
                    format!("weight {w} must be a non-negative number"),
                ));
            }
        }
        if self.effective_weights().iter().all(|w| *w == 0.0) {
            return Err(Error::invalid(
                format!("{PATH}.weights"),
                "all weights are zero",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParticipantRole {
    /// Collects information: analysts, programmers, interviewers.
    Gatherer,
    /// Provides information, usually the intended end users.
    Source,
}

/// Row `i`, column `j` holds rater `i`'s estimate of member `j`'s fractional
/// contribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeerRatingMatrix {
    pub member_ids: Vec<String>,
    pub ratings: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub roles: BTreeMap<String, ParticipantRole>,
}

impl PeerRatingMatrix {
    pub fn new<S: Into<String>>(
        member_ids: impl IntoIterator<Item = S>,
        ratings: Vec<Vec<f64>>,
    ) -> Self {
        PeerRatingMatrix {
            member_ids: member_ids.into_iter().map(Into::into).collect(),
            ratings,
            roles: BTreeMap::new(),
        }
    }

    /// Matrix with generated member ids `m1..mn`.
    pub fn from_rows(ratings: Vec<Vec<f64>>) -> Self {
        let n = ratings.first().map_or(0, Vec::len);
        Self::new((1..=n).map(|j| format!("m{j}")), ratings)
    }

    pub fn raters(&self) -> usize {
        self.ratings.len()
    }

    pub fn members(&self) -> usize {
        self.member_ids.len()
    }

    pub fn validate(&self) -> Result<()> {
        const PATH: &str = "peer_ratings";
        let n = self.members();
        if n < 2 {
            return Err(Error::DegenerateInput(format!(
                "{PATH}: at least 2 members are required, got {n}"
            )));
        }
        if self.ratings.is_empty() {
            return Err(Error::DegenerateInput(format!(
                "{PATH}: at least 1 rater is required"
            )));
        }
        for (i, row) in self.ratings.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(
                    format!("{PATH}.ratings[{i}]"),
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
            for (j, r) in row.iter().enumerate() {
                check_unit(format!("{PATH}.ratings[{i}][{j}]"), *r)?;
            }
        }
        for member in self.roles.keys() {
            if !self.member_ids.contains(member) {
                return Err(Error::invalid(
                    format!("{PATH}.roles.{member}"),
                    "role given for an unknown member",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataTag {
    Immediate,
    Future,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataItem {
    pub item_id: String,
    #[serde(default)]
    pub description: String,
    pub tags: BTreeSet<DataTag>,
    pub usefulness: f64,
}

impl DataItem {
    pub fn new(id: impl Into<String>, tags: &[DataTag], usefulness: f64) -> Self {
        DataItem {
            item_id: id.into(),
            description: String::new(),
            tags: tags.iter().copied().collect(),
            usefulness,
        }
    }

    pub fn described(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataInventory {
    pub items: Vec<DataItem>,
}

impl DataInventory {
    pub fn validate(&self) -> Result<()> {
        const PATH: &str = "data_inventory";
        if self.items.is_empty() {
            return Err(Error::EmptyInventory(format!("{PATH}.items")));
        }
        for (i, item) in self.items.iter().enumerate() {
            if item.tags.is_empty() {
                return Err(Error::invalid(
                    format!("{PATH}.items[{i}].tags"),
                    "an item needs at least one of immediate, future",
                ));
            }
            check_unit(format!("{PATH}.items[{i}].usefulness"), item.usefulness)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    /// The system cannot work without it.
    Core,
    Supporting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessEntry {
    pub process_id: String,
    pub kind: ProcessKind,
    pub understanding: f64,
}

impl ProcessEntry {
    pub fn new(id: impl Into<String>, kind: ProcessKind, understanding: f64) -> Self {
        ProcessEntry {
            process_id: id.into(),
            kind,
            understanding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessInventory {
    pub processes: Vec<ProcessEntry>,
}

impl ProcessInventory {
    pub fn validate(&self) -> Result<()> {
        const PATH: &str = "process_inventory";
        if self.processes.is_empty() {
            return Err(Error::EmptyInventory(format!("{PATH}.processes")));
        }
        for (i, p) in self.processes.iter().enumerate() {
            check_unit(
                format!("{PATH}.processes[{i}].understanding"),
                p.understanding,
            )?;
        }
        Ok(())
    }
}

/// Number of interface-utility questions.
pub const IU_QUESTIONS: usize = 4;

/// One answer per interface question, in catalogue order: expected outputs,
/// reflected processes, user types, desktop or web.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IuChecklist {
    pub answers: Vec<f64>,
}

impl IuChecklist {
    pub fn new(answers: [f64; IU_QUESTIONS]) -> Self {
        IuChecklist {
            answers: answers.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        const PATH: &str = "iu_checklist";
        if self.answers.len() != IU_QUESTIONS {
            return Err(Error::invalid(
                format!("{PATH}.answers"),
                format!(
                    "exactly {IU_QUESTIONS} answers are required, got {}",
                    self.answers.len()
                ),
            ));
        }
        for (i, a) in self.answers.iter().enumerate() {
            check_unit(format!("{PATH}.answers[{i}]"), *a)?;
        }
        Ok(())
    }
}

/// A geographical hindrance. Severity 1 is maximal dissimilarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GqFactor {
    pub factor_id: String,
    #[serde(default)]
    pub description: String,
    pub severity: f64,
}

impl GqFactor {
    pub fn new(id: impl Into<String>, severity: f64) -> Self {
        GqFactor {
            factor_id: id.into(),
            description: String::new(),
            severity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GqFactorList {
    #[serde(default)]
    pub factors: Vec<GqFactor>,
}

impl GqFactorList {
    pub fn validate(&self) -> Result<()> {
        for (i, factor) in self.factors.iter().enumerate() {
            check_unit(format!("gq_factors.factors[{i}].severity"), factor.severity)?;
        }
        Ok(())
    }
}

/// All instruments of one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentBundle {
    pub pi_questionnaire: PiQuestionnaire,
    #[serde(default)]
    pub peer_ratings: Option<PeerRatingMatrix>,
    pub data_inventory: DataInventory,
    pub process_inventory: ProcessInventory,
    pub iu_checklist: IuChecklist,
    #[serde(default)]
    pub gq_factors: GqFactorList,
}

impl InstrumentBundle {
    pub fn validate(&self) -> Result<()> {
        self.pi_questionnaire.validate()?;
        if let Some(peer) = &self.peer_ratings {
            peer.validate()?;
        }
        self.data_inventory.validate()?;
        self.process_inventory.validate()?;
        self.iu_checklist.validate()?;
        self.gq_factors.validate()
    }
}
