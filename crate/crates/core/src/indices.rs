//! The five assessment indices, each a bounded score in `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::contribution::{contribution_balance, estimate_contributions};
use crate::error::{check_unit, Error, Result};
use crate::instruments::{
    DataInventory, DataTag, GqFactorList, InstrumentBundle, IuChecklist, PeerRatingMatrix,
    PiQuestionnaire, ProcessInventory, ProcessKind,
};
use crate::snapshot::IndexSnapshot;

/// Tunables for turning instruments into indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexParams {
    pub core_weight: f64,
    pub supporting_weight: f64,
    /// Share of PI taken from the peer-rating balance; 0 disables the blend.
    pub lambda: f64,
}

impl Default for IndexParams {
    fn default() -> Self {
        IndexParams {
            core_weight: 2.0,
            supporting_weight: 1.0,
            lambda: 0.0,
        }
    }
}

impl IndexParams {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("core_weight", self.core_weight),
            ("supporting_weight", self.supporting_weight),
        ] {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {w}")));
            }
        }
        check_unit("lambda", self.lambda).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexWarning {
    /// No gathered item was tagged immediate; U was set to 0.
    NoImmediateEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataIndices {
    pub u: f64,
    pub f: Option<f64>,
    pub warnings: Vec<IndexWarning>,
}

/// People index: weighted questionnaire mean, optionally blended with the
/// balance of the least-squares contribution estimate.
pub fn compute_pi(
    questionnaire: &PiQuestionnaire,
    peer: Option<&PeerRatingMatrix>,
    lambda: f64,
) -> Result<f64> {
    questionnaire.validate()?;
    check_unit("lambda", lambda)?;

    let weights = questionnaire.effective_weights();
    let total: f64 = weights.iter().sum();
    let weighted: f64 = questionnaire
        .answers
        .iter()
        .zip(&weights)
        .map(|(a, w)| a.score * w)
        .sum();
    let mean = weighted / total;

    let pi = match peer {
        None if lambda > 0.0 => {
            return Err(Error::invalid(
                "peer_ratings",
                "lambda > 0 requires a peer rating matrix",
            ))
        }
        None => mean,
        Some(_) if lambda == 0.0 => mean,
        Some(matrix) if lambda == 1.0 => contribution_balance(&estimate_contributions(matrix)?)?,
        Some(matrix) => {
            let balance = contribution_balance(&estimate_contributions(matrix)?)?;
            (1.0 - lambda) * mean + lambda * balance
        }
    };
    Ok(pi.clamp(0.0, 1.0))
}

pub fn compute_data_indices(inventory: &DataInventory) -> Result<DataIndices> {
    inventory.validate()?;
    let tag_mean = |tag: DataTag| {
        let (sum, count) = inventory
            .items
            .iter()
            .filter(|item| item.tags.contains(&tag))
            .fold((0.0, 0usize), |(s, c), item| (s + item.usefulness, c + 1));
        (count > 0).then(|| (sum / count as f64).clamp(0.0, 1.0))
    };

    let mut warnings = Vec::new();
    let u = tag_mean(DataTag::Immediate).unwrap_or_else(|| {
        warnings.push(IndexWarning::NoImmediateEvidence);
        0.0
    });
    Ok(DataIndices {
        u,
        f: tag_mean(DataTag::Future),
        warnings,
    })
}

/// Process index with core processes weighted `core_weight` and supporting
/// processes `supporting_weight`.
pub fn compute_pri(
    inventory: &ProcessInventory,
    core_weight: f64,
    supporting_weight: f64,
) -> Result<f64> {
    inventory.validate()?;
    IndexParams {
        core_weight,
        supporting_weight,
        lambda: 0.0,
    }
    .validate()?;
    let (num, den) = inventory
        .processes
        .iter()
        .fold((0.0, 0.0), |(num, den), p| {
            let w = match p.kind {
                ProcessKind::Core => core_weight,
                ProcessKind::Supporting => supporting_weight,
            };
            (num + w * p.understanding, den + w)
        });
    Ok((num / den).clamp(0.0, 1.0))
}

pub fn compute_iu(checklist: &IuChecklist) -> Result<f64> {
    checklist.validate()?;
    let mean = checklist.answers.iter().sum::<f64>() / checklist.answers.len() as f64;
    Ok(mean.clamp(0.0, 1.0))
}

/// Geographical quotient: one minus the mean factor severity. No known
/// dissimilarity scores 1.
pub fn compute_gq(factors: &GqFactorList) -> Result<f64> {
    factors.validate()?;
    if factors.factors.is_empty() {
        return Ok(1.0);
    }
    let mean =
        factors.factors.iter().map(|f| f.severity).sum::<f64>() / factors.factors.len() as f64;
    Ok((1.0 - mean).clamp(0.0, 1.0))
}

/// Computes every index of an iteration from its instruments.
///
/// The peer-rating blend applies only when the bundle carries a rating
/// matrix; without one, PI is the questionnaire mean.
pub fn compute_snapshot(
    bundle: &InstrumentBundle,
    params: &IndexParams,
) -> Result<(IndexSnapshot, Vec<IndexWarning>)> {
    params.validate()?;
    bundle.validate()?;
    let lambda = if bundle.peer_ratings.is_some() {
        params.lambda
    } else {
        0.0
    };
    let pi = compute_pi(
        &bundle.pi_questionnaire,
        bundle.peer_ratings.as_ref(),
        lambda,
    )?;
    let data = compute_data_indices(&bundle.data_inventory)?;
    let snapshot = IndexSnapshot {
        pi,
        u: data.u,
        f: data.f,
        pri: compute_pri(
            &bundle.process_inventory,
            params.core_weight,
            params.supporting_weight,
        )?,
        iu: compute_iu(&bundle.iu_checklist)?,
        gq: compute_gq(&bundle.gq_factors)?,
    };
    Ok((snapshot, data.warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruments::{DataItem, GqFactor, ProcessEntry};

    fn questionnaire(scores: &[f64]) -> PiQuestionnaire {
        PiQuestionnaire::uniform(
            scores
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("q{i}"), *s)),
        )
    }

    #[test]
    fn pi_extremes_and_mean() {
        assert_eq!(
            compute_pi(&questionnaire(&[1.0; 8]), None, 0.0).unwrap(),
            1.0
        );
        assert_eq!(
            compute_pi(&questionnaire(&[0.0; 8]), None, 0.0).unwrap(),
            0.0
        );
        let half = questionnaire(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(compute_pi(&half, None, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn pi_respects_weights() {
        let mut q = questionnaire(&[1.0, 0.0]);
        q.weights = vec![3.0, 1.0];
        assert_eq!(compute_pi(&q, None, 0.0).unwrap(), 0.75);
    }

    #[test]
    fn pi_blend_endpoints() {
        let q = questionnaire(&[1.0, 0.5]);
        let peer = PeerRatingMatrix::from_rows(vec![vec![0.6, 0.4], vec![0.8, 0.2]]);
        assert_eq!(compute_pi(&q, Some(&peer), 0.0).unwrap(), 0.75);
        let balance = contribution_balance(&estimate_contributions(&peer).unwrap()).unwrap();
        assert_eq!(compute_pi(&q, Some(&peer), 1.0).unwrap(), balance);
        let mid = compute_pi(&q, Some(&peer), 0.5).unwrap();
        assert!((mid - (0.5 * 0.75 + 0.5 * balance)).abs() < 1e-12);
    }

    #[test]
    fn pi_lambda_without_peer_is_rejected() {
        let err = compute_pi(&questionnaire(&[0.5]), None, 0.3).unwrap_err();
        assert_eq!(err.field_path(), Some("peer_ratings"));
    }

    #[test]
    fn data_indices_absent_categories() {
        let inv = DataInventory {
            items: vec![DataItem::new("a", &[DataTag::Immediate], 0.8)],
        };
        let d = compute_data_indices(&inv).unwrap();
        assert_eq!((d.u, d.f), (0.8, None));
        assert!(d.warnings.is_empty());

        let future_only = DataInventory {
            items: vec![DataItem::new("a", &[DataTag::Future], 0.8)],
        };
        let d = compute_data_indices(&future_only).unwrap();
        assert_eq!((d.u, d.f), (0.0, Some(0.8)));
        assert_eq!(d.warnings, vec![IndexWarning::NoImmediateEvidence]);
    }

    #[test]
    fn data_indices_means() {
        let inv = DataInventory {
            items: vec![
                DataItem::new("hr-attrition", &[DataTag::Future], 0.4),
                DataItem::new("budget-trend", &[DataTag::Future], 0.6),
                DataItem::new("erring-process", &[DataTag::Immediate], 1.0),
            ],
        };
        let d = compute_data_indices(&inv).unwrap();
        assert_eq!((d.u, d.f), (1.0, Some(0.5)));
    }

    #[test]
    fn item_with_both_tags_counts_twice() {
        let inv = DataInventory {
            items: vec![
                DataItem::new("a", &[DataTag::Immediate, DataTag::Future], 0.9),
                DataItem::new("b", &[DataTag::Future], 0.3),
            ],
        };
        let d = compute_data_indices(&inv).unwrap();
        assert_eq!(d.u, 0.9);
        assert!((d.f.unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn pri_weighting() {
        let inv = |a: f64, b: f64| ProcessInventory {
            processes: vec![
                ProcessEntry::new("billing", ProcessKind::Core, a),
                ProcessEntry::new("archive", ProcessKind::Supporting, b),
            ],
        };
        assert_eq!(compute_pri(&inv(1.0, 1.0), 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(compute_pri(&inv(0.0, 0.0), 2.0, 1.0).unwrap(), 0.0);
        assert!((compute_pri(&inv(1.0, 0.0), 2.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            compute_pri(&inv(1.0, 0.0), 0.0, 1.0),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            compute_pri(&ProcessInventory { processes: vec![] }, 2.0, 1.0),
            Err(Error::EmptyInventory(_))
        ));
    }

    #[test]
    fn iu_mean() {
        assert_eq!(compute_iu(&IuChecklist::new([1.0; 4])).unwrap(), 1.0);
        assert_eq!(compute_iu(&IuChecklist::new([0.0; 4])).unwrap(), 0.0);
        assert_eq!(
            compute_iu(&IuChecklist::new([1.0, 1.0, 0.0, 0.0])).unwrap(),
            0.5
        );
    }

    #[test]
    fn gq_from_severities() {
        let list = |s: &[f64]| GqFactorList {
            factors: s
                .iter()
                .enumerate()
                .map(|(i, v)| GqFactor::new(format!("g{i}"), *v))
                .collect(),
        };
        assert_eq!(compute_gq(&list(&[1.0; 4])).unwrap(), 0.0);
        assert_eq!(compute_gq(&list(&[])).unwrap(), 1.0);
        assert!((compute_gq(&list(&[0.2, 0.6])).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(
            compute_gq(&list(&[1.2])),
            Err(Error::RangeViolation { .. })
        ));
    }
}
