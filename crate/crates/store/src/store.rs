//! A directory of project documents, one `<id>.json` file per project.
//!
//! Writers to the same project are serialised by an in-process lock and,
//! across processes, by the revision check performed under that lock.
//! Readers never take the lock.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Result, StoreError};
use crate::fs::write_atomic;
use crate::record::{
    is_valid_project_id, load_project, IterationInput, IterationRecord, ProjectConfig,
    ProjectRecord,
};
use crate::timestamp::Timestamp;

/// Listing entry for a stored project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub id: String,
    pub name: String,
    pub created_at: Timestamp,
    pub revision: u64,
    pub iterations: usize,
}

#[derive(Debug)]
pub struct ProjectStore {
    root: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl ProjectStore {
    /// Opens `root`, creating the directory if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        std::fs::create_dir_all(&root)
            .map_err(|e| StoreError::io(format!("creating {}", root.display()), e))?;
        Ok(ProjectStore {
            root,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, id: &str) -> Result<PathBuf> {
        if !is_valid_project_id(id) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        Ok(self.root.join(format!("{id}.json")))
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    pub fn create(
        &self,
        name: &str,
        config: ProjectConfig,
        id: Option<String>,
    ) -> Result<ProjectRecord> {
        let record = match id {
            Some(id) => ProjectRecord::with_id(id, name, config, Timestamp::now())?,
            None => ProjectRecord::new(name, config)?,
        };
        let path = self.path_for(&record.project.id)?;
        let lock = self.lock_for(&record.project.id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        if path.exists() {
            return Err(StoreError::InvalidRequest(format!(
                "project `{}` already exists",
                record.project.id
            )));
        }
        write_atomic(&path, record.to_json().as_bytes())?;
        Ok(record)
    }

    pub fn load(&self, id: &str) -> Result<ProjectRecord> {
        let path = self.path_for(id)?;
        if !path.exists() {
            return Err(StoreError::NotFound(id.to_string()));
        }
        load_project(&path)
    }

    pub fn list(&self) -> Result<Vec<ProjectSummary>> {
        let entries = std::fs::read_dir(&self.root)
            .map_err(|e| StoreError::io(format!("listing {}", self.root.display()), e))?;
        let mut out = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| StoreError::io("listing store", e))?;
            let path = entry.path();
            let is_project = path.extension().is_some_and(|ext| ext == "json")
                && path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .is_some_and(is_valid_project_id);
            if !is_project {
                continue;
            }
            let record = load_project(&path)?;
            out.push(ProjectSummary {
                id: record.project.id,
                name: record.project.name,
                created_at: record.project.created_at,
                revision: record.revision,
                iterations: record.iterations.len(),
            });
        }
        out.sort_by(|a, b| {
            a.created_at
                .cmp(&b.created_at)
                .then_with(|| a.id.cmp(&b.id))
        });
        Ok(out)
    }

    /// Appends an iteration and returns it with the new revision.
    pub fn append(
        &self,
        id: &str,
        expected_revision: u64,
        input: IterationInput,
    ) -> Result<(IterationRecord, u64)> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut record = self.load(id)?;
        let iteration = record
            .append_iteration(expected_revision, input, Timestamp::now())?
            .clone();
        write_atomic(&self.path_for(id)?, record.to_json().as_bytes())?;
        Ok((iteration, record.revision))
    }
}
