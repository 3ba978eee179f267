//! The project document and its invariants.

use std::path::Path;

use aap_core::{
    compute_snapshot, decide, EngineConfig, IndexName, IndexParams, IndexSnapshot,
    InstrumentBundle, PriMode, Recommendation,
};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StoreError};
use crate::timestamp::Timestamp;

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance for stored snapshots against indices recomputed from stored
/// instruments.
pub const RECOMPUTE_TOLERANCE: f64 = 1e-9;

/// Engine settings plus index weights, as stored with a project.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectConfig {
    pub threshold: f64,
    pub pri_mode: PriMode,
    pub pri_unity_epsilon: f64,
    pub paralysis_window: usize,
    pub stagnation_delta: f64,
    pub core_weight: f64,
    pub supporting_weight: f64,
    pub lambda: f64,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        ProjectConfig::from_parts(EngineConfig::default(), IndexParams::default())
    }
}

impl ProjectConfig {
    pub fn from_parts(engine: EngineConfig, params: IndexParams) -> Self {
        ProjectConfig {
            threshold: engine.threshold,
            pri_mode: engine.pri_mode,
            pri_unity_epsilon: engine.pri_unity_epsilon,
            paralysis_window: engine.paralysis_window,
            stagnation_delta: engine.stagnation_delta,
            core_weight: params.core_weight,
            supporting_weight: params.supporting_weight,
            lambda: params.lambda,
        }
    }

    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            threshold: self.threshold,
            pri_mode: self.pri_mode,
            pri_unity_epsilon: self.pri_unity_epsilon,
            paralysis_window: self.paralysis_window,
            stagnation_delta: self.stagnation_delta,
        }
    }

    pub fn params(&self) -> IndexParams {
        IndexParams {
            core_weight: self.core_weight,
            supporting_weight: self.supporting_weight,
            lambda: self.lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.engine().validate()?;
        self.params().validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectInfo {
    pub id: String,
    pub name: String,
    pub created_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationRecord {
    pub seq: u32,
    pub timestamp: Timestamp,
    #[serde(default)]
    pub instruments: Option<InstrumentBundle>,
    pub snapshot: IndexSnapshot,
    pub recommendation: Recommendation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectRecord {
    pub schema_version: u32,
    pub project: ProjectInfo,
    pub config: ProjectConfig,
    pub revision: u64,
    pub iterations: Vec<IterationRecord>,
}

/// Evidence for a new iteration: full instruments, or bare index values.
#[derive(Debug, Clone, PartialEq)]
pub enum IterationInput {
    Instruments(InstrumentBundle),
    Snapshot(IndexSnapshot),
}

/// Returns true when `id` is usable as a project identifier and file stem.
pub fn is_valid_project_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl ProjectRecord {
    pub fn new(name: impl Into<String>, config: ProjectConfig) -> Result<Self> {
        Self::with_id(
            uuid::Uuid::new_v4().to_string(),
            name,
            config,
            Timestamp::now(),
        )
    }

    pub fn with_id(
        id: impl Into<String>,
        name: impl Into<String>,
        config: ProjectConfig,
        created_at: Timestamp,
    ) -> Result<Self> {
        let id = id.into();
        if !is_valid_project_id(&id) {
            return Err(StoreError::InvalidRequest(format!(
                "project id `{id}` may only contain letters, digits, '-' and '_'"
            )));
        }
        config.validate()?;
        Ok(ProjectRecord {
            schema_version: SCHEMA_VERSION,
            project: ProjectInfo {
                id,
                name: name.into(),
                created_at,
            },
            config,
            revision: 0,
            iterations: Vec::new(),
        })
    }

    pub fn latest(&self) -> Option<&IterationRecord> {
        self.iterations.last()
    }

    /// Pairs of `(snapshot, recommendation)` in sequence order.
    pub fn history(&self) -> Vec<(IndexSnapshot, Recommendation)> {
        self.iterations
            .iter()
            .map(|it| (it.snapshot, it.recommendation.clone()))
            .collect()
    }

    pub fn paralysis(&self) -> aap_core::ParalysisReport {
        aap_core::detect_paralysis(&self.history(), &self.config.engine())
    }

    /// Checks every structural and recomputability invariant.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(StoreError::SchemaVersionMismatch {
                found: self.schema_version.into(),
                expected: SCHEMA_VERSION,
            });
        }
        if !is_valid_project_id(&self.project.id) {
            return Err(StoreError::invariant(
                "project.id",
                "invalid project identifier",
            ));
        }
        self.config
            .validate()
            .map_err(|e| StoreError::invariant("config", e.to_string()))?;
        if self.revision < self.iterations.len() as u64 {
            return Err(StoreError::invariant(
                "revision",
                format!(
                    "revision {} is behind {} stored iterations",
                    self.revision,
                    self.iterations.len()
                ),
            ));
        }
        let engine = self.config.engine();
        let params = self.config.params();
        for (i, it) in self.iterations.iter().enumerate() {
            let path = format!("iterations[{i}]");
            if it.seq as usize != i + 1 {
                return Err(StoreError::invariant(
                    format!("{path}.seq"),
                    format!("expected {}, found {}", i + 1, it.seq),
                ));
            }
            it.snapshot.validate().map_err(|e| {
                StoreError::invariant(
                    format!("{path}.snapshot.{}", e.field_path().unwrap_or("")),
                    e.to_string(),
                )
            })?;
            if let Some(bundle) = &it.instruments {
                let (recomputed, _) = compute_snapshot(bundle, &params).map_err(|e| {
                    StoreError::invariant(
                        format!("{path}.instruments.{}", e.field_path().unwrap_or("")),
                        e.to_string(),
                    )
                })?;
                check_snapshot(&path, &it.snapshot, &recomputed)?;
            }
            let expected = decide(&it.snapshot, &engine)?;
            let stored = &it.recommendation;
            if stored.outcome != expected.outcome
                || stored.fired_step != expected.fired_step
                || stored.advisories != expected.advisories
            {
                return Err(StoreError::invariant(
                    format!("{path}.recommendation"),
                    format!(
                        "stored {} (step {}) but the snapshot decides {} (step {})",
                        stored.outcome, stored.fired_step, expected.outcome, expected.fired_step
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Appends one iteration after an optimistic revision check.
    pub fn append_iteration(
        &mut self,
        expected_revision: u64,
        input: IterationInput,
        timestamp: Timestamp,
    ) -> Result<&IterationRecord> {
        if expected_revision != self.revision {
            return Err(StoreError::RevisionConflict {
                supplied: expected_revision,
                current: self.revision,
            });
        }
        let (instruments, snapshot) = match input {
            IterationInput::Instruments(bundle) => {
                let (snapshot, _) = compute_snapshot(&bundle, &self.config.params())?;
                (Some(bundle), snapshot)
            }
            IterationInput::Snapshot(snapshot) => (None, snapshot),
        };
        let recommendation = decide(&snapshot, &self.config.engine())?;
        self.iterations.push(IterationRecord {
            seq: self.iterations.len() as u32 + 1,
            timestamp,
            instruments,
            snapshot,
            recommendation,
        });
        self.revision += 1;
        Ok(self.iterations.last().expect("just pushed"))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("project records serialize");
        text.push('\n');
        text
    }

    /// Parses and validates a project document.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| StoreError::MalformedDocument(e.to_string()))?;
        match value
            .get("schema_version")
            .and_then(serde_json::Value::as_i64)
        {
            Some(v) if v == i64::from(SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(StoreError::SchemaVersionMismatch {
                    found: v,
                    expected: SCHEMA_VERSION,
                })
            }
            None => {
                return Err(StoreError::MalformedDocument(
                    "missing integer `schema_version`".into(),
                ))
            }
        }
        let record: ProjectRecord =
            serde_json::from_str(text).map_err(|e| StoreError::MalformedDocument(e.to_string()))?;
        record.validate()?;
        Ok(record)
    }
}

fn check_snapshot(path: &str, stored: &IndexSnapshot, recomputed: &IndexSnapshot) -> Result<()> {
    for name in IndexName::ALL {
        let field = format!("{path}.snapshot.{}", name.as_str().to_ascii_lowercase());
        match (stored.get(name), recomputed.get(name)) {
            (Some(a), Some(b)) if (a - b).abs() <= RECOMPUTE_TOLERANCE => {}
            (None, None) => {}
            (a, b) => {
                return Err(StoreError::invariant(
                    field,
                    format!("{name} stored as {a:?} but instruments give {b:?}"),
                ))
            }
        }
    }
    Ok(())
}

pub fn save_project(record: &ProjectRecord, destination: &Path) -> Result<()> {
    crate::fs::write_atomic(destination, record.to_json().as_bytes())
}

pub fn load_project(source: &Path) -> Result<ProjectRecord> {
    let text = std::fs::read_to_string(source)
        .map_err(|e| StoreError::io(format!("reading {}", source.display()), e))?;
    ProjectRecord::from_json(&text)
}
