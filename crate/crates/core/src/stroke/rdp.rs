//! Ramer-Douglas-Peucker polyline simplification.

use super::StrokeError;
use crate::geom::{point_segment_distance_sq, Point};

/// Simplifies `points` so that every removed point lies within `epsilon`
/// of the simplified chain.
///
/// The output is always a subsequence of the input and keeps both
/// endpoints. Among equally distant candidates the earliest index is
/// split on, which makes the operation idempotent: simplifying an
/// already-simplified chain returns it unchanged.
///
/// Distances are measured to the closed chord segment (clamped to its
/// endpoints), so closed loops — where a chord degenerates to a point —
/// are handled correctly.
///
/// # Errors
/// Returns [`StrokeError::InvalidInput`] for an empty input or a
/// non-finite/negative `epsilon`.
pub fn rdp_simplify(points: &[Point], epsilon: f64) -> Result<Vec<Point>, StrokeError> {
    if points.is_empty() {
        return Err(StrokeError::InvalidInput("cannot simplify an empty polyline".into()));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(StrokeError::InvalidInput(format!(
            "simplification tolerance must be finite and non-negative, got {epsilon}"
        )));
    }
    let n = points.len();
    if n <= 2 {
        return Ok(points.to_vec());
    }

    let eps_sq = epsilon * epsilon;
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;

    let mut stack = vec![(0usize, n - 1)];
    while let Some((start, end)) = stack.pop() {
        if end <= start + 1 {
            continue;
        }
        let (a, b) = (points[start], points[end]);
        let mut max_sq = f64::NEG_INFINITY;
        let mut split = start + 1;
        for (i, &p) in points.iter().enumerate().take(end).skip(start + 1) {
            let d_sq = point_segment_distance_sq(p, a, b);
            if d_sq > max_sq {
                max_sq = d_sq;
                split = i;
            }
        }
        if max_sq > eps_sq {
            keep[split] = true;
            stack.push((start, split));
            stack.push((split, end));
        }
    }

    Ok(points
        .iter()
        .zip(&keep)
        .filter_map(|(&p, &k)| k.then_some(p))
        .collect())
}
