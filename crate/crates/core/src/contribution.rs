//! Least-squares estimate of individual contributions from peer ratings.
//!
//! Given an `m x n` rating matrix `r`, the estimate `c` minimises
//! `sum_ij (r_ij - c_j)^2` over contribution vectors with `sum_j c_j = 1` and
//! `c_j >= 0`. The objective equals `m * sum_j (c_j - mean_j)^2` plus a
//! constant, so the minimiser is the Euclidean projection of the column
//! means onto the probability simplex. Without the sign constraint it has
//! the closed form `c_j = mean_j + (1 - sum_k mean_k) / n`; when that leaves
//! negative components, they are pinned to zero and the correction is
//! re-solved over the remaining members until none is negative.

use crate::error::{Error, Result};
use crate::instruments::PeerRatingMatrix;

/// Column means of the rating matrix.
pub fn column_means(matrix: &PeerRatingMatrix) -> Vec<f64> {
    let m = matrix.raters() as f64;
    (0..matrix.members())
        .map(|j| matrix.ratings.iter().map(|row| row[j]).sum::<f64>() / m)
        .collect()
}

/// `sum_ij (r_ij - c_j)^2` for a candidate contribution vector.
pub fn least_squares_objective(matrix: &PeerRatingMatrix, contributions: &[f64]) -> f64 {
    matrix
        .ratings
        .iter()
        .flat_map(|row| {
            row.iter()
                .zip(contributions)
                .map(|(r, c)| (r - c) * (r - c))
        })
        .sum()
}

pub fn estimate_contributions(matrix: &PeerRatingMatrix) -> Result<Vec<f64>> {
    matrix.validate()?;
    let means = column_means(matrix);
    let n = means.len();

    let mut active = vec![true; n];
    let mut estimate = vec![0.0; n];
    loop {
        let support = active.iter().filter(|a| **a).count();
        let mass: f64 = means
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(m, _)| m)
            .sum();
        let correction = (1.0 - mass) / support as f64;

        let mut pinned_any = false;
        for j in 0..n {
            if !active[j] {
                estimate[j] = 0.0;
                continue;
            }
            let value = means[j] + correction;
            if value < 0.0 {
                active[j] = false;
                estimate[j] = 0.0;
                pinned_any = true;
            } else {
                estimate[j] = value;
            }
        }
        // Each pass pins at least one member, and the member with the
        // largest mean is never pinned, so this terminates within n passes.
        if !pinned_any {
            break;
        }
    }

    let total: f64 = estimate.iter().sum();
    Ok(estimate
        .into_iter()
        .map(|c| (c / total).clamp(0.0, 1.0))
        .collect())
}

/// How evenly the contribution is spread: 1 for uniform, 0 for a monopoly.
pub fn contribution_balance(contributions: &[f64]) -> Result<f64> {
    let n = contributions.len();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "contribution balance needs at least 2 members, got {n}"
        )));
    }
    let share = 1.0 / n as f64;
    let max_dev = contributions
        .iter()
        .map(|c| (c - share).abs())
        .fold(0.0, f64::max);
    Ok((1.0 - max_dev / (1.0 - share)).clamp(0.0, 1.0))
}
