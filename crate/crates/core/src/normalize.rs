use crate::error::{Error, Result};

/// Value emitted for every input when the raw range is degenerate.
///
/// Sits exactly on the default threshold, so it never passes a gate.
pub const DEGENERATE_RANGE_VALUE: f64 = 0.5;

/// Maps raw measurements from `[lo, hi]` onto `[0, 1]` linearly.
pub fn normalize_scores(raw: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::DegenerateInput(format!(
            "normalization range [{lo}, {hi}] is not a finite interval"
        )));
    }
    raw.iter()
        .enumerate()
        .map(|(i, &x)| {
            if !(lo..=hi).contains(&x) {
                return Err(Error::RangeViolation {
                    field: format!("raw[{i}]"),
                    value: x,
                    lo,
                    hi,
                });
            }
            if lo == hi {
                Ok(DEGENERATE_RANGE_VALUE)
            } else {
                Ok(((x - lo) / (hi - lo)).clamp(0.0, 1.0))
            }
        })
        .collect()
}
