//! Piecewise cubic Bezier fitting of polylines by iterated least squares
//! with Newton-Raphson reparameterization and recursive splitting.
//!
//! Given endpoint tangents, the two free control points of a cubic are
//! found by solving a 2x2 least-squares system for the tangent magnitudes.
//! If the fit misses the tolerance but is close (within 4x), the chord
//! parameterization is refined by Newton-Raphson and the solve is retried
//! a few times; otherwise the polyline is split at the worst point and
//! both halves are fitted recursively, sharing a common tangent at the
//! split so the chain stays visually smooth.

use super::{CubicBezier, StrokeError};
use crate::geom::{Point, Vec2};

/// Fitting failure within 4x of tolerance triggers reparameterization
/// instead of an immediate split.
const REPARAM_HEADROOM: f64 = 4.0;
/// Maximum Newton-Raphson refinement rounds before giving up and splitting.
const MAX_REPARAM_ITERATIONS: usize = 4;

/// Fits `points` with a C0-continuous chain of cubic Beziers whose maximum
/// deviation from the input points is at most `max_error` (measured at the
/// fitted parameter values).
///
/// # Errors
/// Returns [`StrokeError::InvalidInput`] for fewer than 2 points,
/// non-finite coordinates, consecutive duplicate points (which make the
/// chord parameterization degenerate), or a non-positive `max_error`.
pub fn fit_bezier(points: &[Point], max_error: f64) -> Result<Vec<CubicBezier>, StrokeError> {
    if points.len() < 2 {
        return Err(StrokeError::InvalidInput(format!(
            "need at least 2 points to fit, got {}",
            points.len()
        )));
    }
    if !max_error.is_finite() || max_error <= 0.0 {
        return Err(StrokeError::InvalidInput(format!(
            "fit tolerance must be positive and finite, got {max_error}"
        )));
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(StrokeError::InvalidInput("points must have finite coordinates".into()));
    }
    if points.windows(2).any(|w| w[0].dist(w[1]) <= 1e-12) {
        return Err(StrokeError::InvalidInput(
            "consecutive (near-)duplicate points cannot be fitted".into(),
        ));
    }

    let n = points.len();
    let t1 = (points[1] - points[0]).normalized().expect("distinct neighbours");
    let t2 = (points[n - 2] - points[n - 1]).normalized().expect("distinct neighbours");
    let mut out = Vec::new();
    fit_cubic(points, t1, t2, max_error, &mut out);
    Ok(out)
}

/// Evaluates a cubic Bezier at `t` by de Casteljau subdivision.
pub fn eval_cubic(seg: &CubicBezier, t: f64) -> Point {
    let a = seg[0].lerp(seg[1], t);
    let b = seg[1].lerp(seg[2], t);
    let c = seg[2].lerp(seg[3], t);
    a.lerp(b, t).lerp(b.lerp(c, t), t)
}

/// Recursive fitting step. `t_hat1` points along the curve at the first
/// point, `t_hat2` points backward along the curve at the last point.
fn fit_cubic(pts: &[Point], t_hat1: Vec2, t_hat2: Vec2, max_error: f64, out: &mut Vec<CubicBezier>) {
    let n = pts.len();
    if n == 2 {
        let dist = pts[1].dist(pts[0]) / 3.0;
        out.push([pts[0], pts[0] + t_hat1 * dist, pts[1] + t_hat2 * dist, pts[1]]);
        return;
    }

    let mut u = chord_length_parameterize(pts);
    let mut bez = generate_bezier(pts, &u, t_hat1, t_hat2);
    let (mut max_dist_sq, mut split) = compute_max_error(pts, &bez, &u);
    let tol_sq = max_error * max_error;

    if max_dist_sq <= tol_sq {
        out.push(bez);
        return;
    }

    if max_dist_sq <= tol_sq * REPARAM_HEADROOM * REPARAM_HEADROOM {
        for _ in 0..MAX_REPARAM_ITERATIONS {
            u = reparameterize(pts, &u, &bez);
            bez = generate_bezier(pts, &u, t_hat1, t_hat2);
            let (d, s) = compute_max_error(pts, &bez, &u);
            max_dist_sq = d;
            split = s;
            if max_dist_sq <= tol_sq {
                out.push(bez);
                return;
            }
        }
    }

    let t_center = center_tangent(pts, split);
    fit_cubic(&pts[..=split], t_hat1, t_center, max_error, out);
    fit_cubic(&pts[split..], -t_center, t_hat2, max_error, out);
}

/// Cumulative chord lengths normalized to `[0, 1]`.
fn chord_length_parameterize(pts: &[Point]) -> Vec<f64> {
    let mut u = Vec::with_capacity(pts.len());
    u.push(0.0);
    for w in pts.windows(2) {
        u.push(u.last().unwrap() + w[1].dist(w[0]));
    }
    let total = *u.last().unwrap();
    for v in &mut u {
        *v /= total;
    }
    u
}

/// Solves the 2x2 least-squares system for the tangent magnitudes
/// `alpha_l`, `alpha_r`, falling back to the chord-thirds heuristic when
/// the system is singular or produces degenerate magnitudes.
fn generate_bezier(pts: &[Point], u: &[f64], t_hat1: Vec2, t_hat2: Vec2) -> CubicBezier {
    let first = pts[0];
    let last = *pts.last().unwrap();

    let mut c00 = 0.0;
    let mut c01 = 0.0;
    let mut c11 = 0.0;
    let mut x0 = 0.0;
    let mut x1 = 0.0;
    for (&p, &ui) in pts.iter().zip(u) {
        let b = bernstein(ui);
        let a0 = t_hat1 * b[1];
        let a1 = t_hat2 * b[2];
        c00 += a0.dot(a0);
        c01 += a0.dot(a1);
        c11 += a1.dot(a1);
        let tmp = p - (first * (b[0] + b[1]) + last * (b[2] + b[3]));
        x0 += a0.dot(tmp);
        x1 += a1.dot(tmp);
    }

    let det_c0_c1 = c00 * c11 - c01 * c01;
    let det_x_c1 = x0 * c11 - x1 * c01;
    let det_c0_x = c00 * x1 - c01 * x0;
    let (mut alpha_l, mut alpha_r) = if det_c0_c1 == 0.0 {
        (0.0, 0.0)
    } else {
        (det_x_c1 / det_c0_c1, det_c0_x / det_c0_c1)
    };

    let seg_length = last.dist(first);
    let epsilon = 1e-6 * seg_length;
    if !alpha_l.is_finite() || !alpha_r.is_finite() || alpha_l < epsilon || alpha_r < epsilon {
        let dist = seg_length / 3.0;
        alpha_l = dist;
        alpha_r = dist;
    }

    [first, first + t_hat1 * alpha_l, last + t_hat2 * alpha_r, last]
}

fn bernstein(u: f64) -> [f64; 4] {
    let v = 1.0 - u;
    [v * v * v, 3.0 * u * v * v, 3.0 * u * u * v, u * u * u]
}

/// Maximum squared deviation between `pts[i]` and the curve at `u[i]`,
/// plus the index to split at (the first worst point; defaults to the
/// middle when all deviations are zero).
fn compute_max_error(pts: &[Point], bez: &CubicBezier, u: &[f64]) -> (f64, usize) {
    let mut max_sq = 0.0;
    let mut split = pts.len() / 2;
    for i in 1..pts.len() - 1 {
        let d_sq = (eval_cubic(bez, u[i]) - pts[i]).norm_sq();
        if d_sq > max_sq {
            max_sq = d_sq;
            split = i;
        }
    }
    (max_sq, split)
}

/// One Newton-Raphson step per point toward the parameter of the nearest
/// curve location.
fn reparameterize(pts: &[Point], u: &[f64], bez: &CubicBezier) -> Vec<f64> {
    pts.iter().zip(u).map(|(&p, &ui)| newton_step(bez, p, ui)).collect()
}

fn newton_step(bez: &CubicBezier, p: Point, u: f64) -> f64 {
    // Derivative control points of a cubic (degree 2) and its derivative
    // (degree 1).
    let d1: [Vec2; 3] =
        [(bez[1] - bez[0]) * 3.0, (bez[2] - bez[1]) * 3.0, (bez[3] - bez[2]) * 3.0];
    let d2: [Vec2; 2] = [(d1[1] - d1[0]) * 2.0, (d1[2] - d1[1]) * 2.0];

    let q = eval_cubic(bez, u);
    let q1 = d1[0].lerp(d1[1], u).lerp(d1[1].lerp(d1[2], u), u);
    let q2 = d2[0].lerp(d2[1], u);

    let diff = q - p;
    let numerator = diff.dot(q1);
    let denominator = q1.dot(q1) + diff.dot(q2);
    if denominator == 0.0 {
        u
    } else {
        u - numerator / denominator
    }
}

/// Averaged tangent at an interior split point, oriented backward along
/// the curve (suitable as the end tangent of the left half).
fn center_tangent(pts: &[Point], center: usize) -> Vec2 {
    let v1 = pts[center - 1] - pts[center];
    let v2 = pts[center] - pts[center + 1];
    ((v1 + v2) * 0.5)
        .normalized()
        .or_else(|| v1.normalized())
        .expect("consecutive duplicates were rejected earlier")
}
