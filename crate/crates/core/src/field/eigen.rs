//! Closed-form eigendecomposition of symmetric 2x2 tensors and the derived
//! coherence measure.

use crate::geom::Vec2;

/// Relative threshold below which the two eigenvalues are considered equal
/// and no orientation is defined.
const DEGENERACY_EPS: f64 = 1e-12;

/// Eigendecomposition of a symmetric 2x2 matrix, eigenvalues in ascending
/// order (`lambda1 <= lambda2`).
///
/// `v1` (the minor eigenvector) is the direction of least intensity change —
/// the direction strokes follow. `v1` and `v2` are unit length and exactly
/// orthogonal; each is defined up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem2 {
    pub lambda1: f64,
    pub lambda2: f64,
    pub v1: Vec2,
    pub v2: Vec2,
    /// True when the eigenvalue gap is negligible (isotropic tensor); the
    /// eigenvectors are then the convention `v1 = (1, 0)`, `v2 = (0, 1)`.
    pub degenerate: bool,
}

/// Decomposes the symmetric matrix `[[sxx, sxy], [sxy, syy]]`.
///
/// Uses the closed form `lambda = m -+ d` with `m` the mean of the diagonal
/// and `d = hypot((sxx - syy)/2, sxy)`. The major eigenvector is taken from
/// the larger-magnitude column of `S - lambda1*I` (numerically stable branch),
/// and the minor eigenvector is its exact perpendicular.
pub fn eigen2(sxx: f64, sxy: f64, syy: f64) -> EigenSystem2 {
    let m = 0.5 * (sxx + syy);
    let d = f64::hypot(0.5 * (sxx - syy), sxy);
    let lambda1 = m - d;
    let lambda2 = m + d;

    if d <= DEGENERACY_EPS * m.abs().max(1.0) {
        return EigenSystem2 {
            lambda1,
            lambda2,
            v1: Vec2::new(1.0, 0.0),
            v2: Vec2::new(0.0, 1.0),
            degenerate: true,
        };
    }

    // Columns of S - lambda1*I are parallel to the major eigenvector; pick
    // the one farther from cancellation.
    let c1 = Vec2::new(sxx - lambda1, sxy);
    let c2 = Vec2::new(sxy, syy - lambda1);
    let major = if c1.norm_sq() >= c2.norm_sq() { c1 } else { c2 };
    // d > eps guarantees a nonzero column.
    let v2 = major.normalized().expect("non-degenerate tensor has a nonzero major column");
    EigenSystem2 { lambda1, lambda2, v1: v2.perp(), v2, degenerate: false }
}

/// Anisotropy of an eigenvalue pair: `((l2 - l1) / (l2 + l1))^2` in `[0, 1]`.
///
/// 1 means perfectly oriented (one zero eigenvalue), 0 means isotropic.
/// Slightly negative inputs (rounding noise) are clamped to zero, and a
/// near-zero eigenvalue sum — a featureless region — is defined as
/// coherence 0.
pub fn coherence(lambda1: f64, lambda2: f64) -> f64 {
    let l1 = lambda1.max(0.0);
    let l2 = lambda2.max(0.0);
    let sum = l1 + l2;
    if sum <= 1e-12 {
        return 0.0;
    }
    let r = (l2 - l1) / sum;
    r * r
}
