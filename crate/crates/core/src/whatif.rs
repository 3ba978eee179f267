use crate::engine::{decide, EngineConfig, Recommendation};
use crate::error::{check_unit, Error, Result};
use crate::snapshot::{IndexName, IndexSnapshot};

/// Applies named index overrides to a copy of `snapshot`.
///
/// A `None` value marks F as unmeasured; it is rejected for other indices.
pub fn apply_overrides<'a, I>(snapshot: &IndexSnapshot, overrides: I) -> Result<IndexSnapshot>
where
    I: IntoIterator<Item = (&'a str, Option<f64>)>,
{
    let mut merged = *snapshot;
    for (name, value) in overrides {
        let index: IndexName = name.parse()?;
        match value {
            Some(v) => {
                check_unit(format!("overrides.{index}"), v)?;
            }
            None if index != IndexName::F => {
                return Err(Error::InstrumentInvalid {
                    field: format!("overrides.{index}"),
                    reason: "only F may be set to unmeasured".into(),
                })
            }
            None => {}
        }
        merged = merged.with(index, value);
    }
    Ok(merged)
}

/// Decides on the snapshot with `overrides` applied; `snapshot` is untouched.
pub fn what_if<'a, I>(
    snapshot: &IndexSnapshot,
    overrides: I,
    config: &EngineConfig,
) -> Result<Recommendation>
where
    I: IntoIterator<Item = (&'a str, Option<f64>)>,
{
    decide(&apply_overrides(snapshot, overrides)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Outcome;

    fn restart_snapshot() -> IndexSnapshot {
        IndexSnapshot {
            u: 0.3,
            pri: 0.9,
            ..IndexSnapshot::uniform(0.8)
        }
    }

    #[test]
    fn raising_u_opens_the_gate() {
        let base = restart_snapshot();
        let r = what_if(&base, [("U", Some(0.9))], &EngineConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::ReadyForDesign);
        assert_eq!(base.u, 0.3);
    }

    #[test]
    fn empty_overrides_match_decide() {
        let base = restart_snapshot();
        let config = EngineConfig::default();
        assert_eq!(
            what_if(&base, [], &config).unwrap(),
            decide(&base, &config).unwrap()
        );
    }

    #[test]
    fn override_errors() {
        let base = restart_snapshot();
        let config = EngineConfig::default();
        assert!(matches!(
            what_if(&base, [("PI", Some(1.2))], &config),
            Err(Error::RangeViolation { .. })
        ));
        assert!(matches!(
            what_if(&base, [("DG", Some(0.2))], &config),
            Err(Error::UnknownIndexName(_))
        ));
        assert!(what_if(&base, [("PI", None)], &config).is_err());
        let r = what_if(&base, [("U", Some(0.9)), ("F", None)], &config).unwrap();
        assert_eq!(r.outcome, Outcome::CheckFutureUsefulness);
    }
}
