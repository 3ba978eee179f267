//! Persistence for analysis-gate projects.
//!
//! A project is one self-contained JSON document holding its configuration
//! and an append-only list of iterations. Each iteration keeps the
//! instruments it was computed from (when given), the index snapshot and
//! the recommendation, so every stored decision can be recomputed and
//! checked on load.

mod error;
mod fs;
mod record;
mod report;
mod store;
mod timestamp;

pub use error::{Result, StoreError};
pub use record::{
    is_valid_project_id, load_project, save_project, IterationInput, IterationRecord,
    ProjectConfig, ProjectInfo, ProjectRecord, RECOMPUTE_TOLERANCE, SCHEMA_VERSION,
};
pub use report::export_report;
pub use store::{ProjectStore, ProjectSummary};
pub use timestamp::Timestamp;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/projects.md")]
mod guide {}
