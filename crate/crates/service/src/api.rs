//! Request and response bodies of the `/api/v1` endpoints.

use std::collections::BTreeMap;

use aap_core::{EngineConfig, IndexSnapshot, InstrumentBundle, Recommendation, TraceEntry};
use aap_store::{IterationInput, IterationRecord, ProjectConfig};
use serde::{Deserialize, Serialize};

use crate::error::ApiFailure;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecideRequest {
    pub snapshot: IndexSnapshot,
    #[serde(default)]
    pub config: Option<EngineConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecideResponse {
    pub recommendation: Recommendation,
    pub trace: Vec<TraceEntry>,
}

/// An override value: a number, or the string `"unmeasured"` (F only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverrideValue {
    Value(f64),
    Sentinel(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    pub snapshot: IndexSnapshot,
    #[serde(default)]
    pub overrides: BTreeMap<String, OverrideValue>,
    #[serde(default)]
    pub config: Option<EngineConfig>,
}

impl WhatIfRequest {
    pub fn overrides(&self) -> Result<Vec<(&str, Option<f64>)>, ApiFailure> {
        self.overrides
            .iter()
            .map(|(name, value)| match value {
                OverrideValue::Value(v) => Ok((name.as_str(), Some(*v))),
                OverrideValue::Sentinel(s) if s == aap_core::snapshot::UNMEASURED => {
                    Ok((name.as_str(), None))
                }
                OverrideValue::Sentinel(s) => Err(ApiFailure::malformed(format!(
                    "override for {name} must be a number or \"unmeasured\", got \"{s}\""
                ))
                .at(Some(&format!("overrides.{name}")))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateProjectRequest {
    pub name: String,
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub config: Option<ProjectConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendIterationRequest {
    pub revision: u64,
    #[serde(default)]
    pub instruments: Option<InstrumentBundle>,
    #[serde(default)]
    pub snapshot: Option<IndexSnapshot>,
}

impl AppendIterationRequest {
    pub fn into_input(self) -> Result<(u64, IterationInput), ApiFailure> {
        let input = match (self.instruments, self.snapshot) {
            (Some(bundle), None) => IterationInput::Instruments(bundle),
            (None, Some(snapshot)) => IterationInput::Snapshot(snapshot),
            _ => {
                return Err(ApiFailure::malformed(
                    "exactly one of `instruments` or `snapshot` is required",
                ))
            }
        };
        Ok((self.revision, input))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendIterationResponse {
    pub iteration: IterationRecord,
    pub revision: u64,
}
