//! Assessment indices and the analysis-to-design gate.
//!
//! An analysis team scores its evidence with a handful of instruments
//! ([`instruments`]), turns them into six bounded indices ([`indices`]) and
//! asks the gate ([`engine::decide`]) whether to keep analysing, rework the
//! team, or move on to design. [`paralysis`] watches a history of such
//! decisions for signs that the team is refining without converging.
//!
//! ```
//! use aap_core::{decide, EngineConfig, IndexSnapshot, Outcome};
//!
//! let snapshot = IndexSnapshot { pri: 0.9, ..IndexSnapshot::uniform(0.8) };
//! let rec = decide(&snapshot, &EngineConfig::default()).unwrap();
//! assert_eq!(rec.outcome, Outcome::ReadyForDesign);
//! assert_eq!(rec.fired_step.id(), "10");
//! ```

pub mod catalog;
pub mod contribution;
pub mod decimal;
pub mod engine;
mod error;
pub mod indices;
pub mod instruments;
pub mod normalize;
pub mod paralysis;
pub mod snapshot;
pub mod sweep;
pub mod whatif;

pub use contribution::{contribution_balance, estimate_contributions};
pub use engine::{
    decide, Advisory, EngineConfig, Outcome, PriMode, Recommendation, Step, TraceEntry, Verdict,
};
pub use error::{Error, Result};
pub use indices::{
    compute_data_indices, compute_gq, compute_iu, compute_pi, compute_pri, compute_snapshot,
    IndexParams, IndexWarning,
};
pub use instruments::*;
pub use normalize::normalize_scores;
pub use paralysis::{detect_paralysis, ParalysisKind, ParalysisReport};
pub use snapshot::{IndexName, IndexSnapshot};
pub use sweep::{sweep, SweepReport};
pub use whatif::what_if;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/indices.md")]
    mod indices {}
    #[doc = include_str!("../../../book/src/contributions.md")]
    mod contributions {}
    #[doc = include_str!("../../../book/src/gate.md")]
    mod gate {}
    #[doc = include_str!("../../../book/src/modes.md")]
    mod modes {}
    #[doc = include_str!("../../../book/src/paralysis.md")]
    mod paralysis {}
}
