//! Turning tracts into renderable brush strokes: polyline simplification
//! (Ramer-Douglas-Peucker) followed by piecewise-cubic Bezier fitting
//! (Schneider's least-squares algorithm), with stroke width and colour
//! attached.

mod fit;
mod rdp;

pub use fit::{eval_cubic, fit_bezier};
pub use rdp::rdp_simplify;

use crate::geom::Point;
use crate::raster::Rgb;
use crate::tracer::Tract;
use thiserror::Error;

/// One cubic Bezier segment: `[start, control1, control2, end]`.
pub type CubicBezier = [Point; 4];

/// Errors from stroke geometry operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrokeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A renderable brush stroke: a C0-continuous chain of cubic Bezier
/// segments with constant width and solid colour.
#[derive(Debug, Clone, PartialEq)]
pub struct BrushStroke {
    /// Consecutive segments share endpoints exactly.
    pub segments: Vec<CubicBezier>,
    /// Stroke width in pixels (> 0).
    pub width: f64,
    /// Solid RGB colour, channels in `[0, 255]`.
    pub color: Rgb,
}

/// Simplifies a tract and fits the result with cubic Beziers, attaching
/// width and colour.
///
/// # Errors
/// Returns [`StrokeError::InvalidInput`] for tracts with fewer than 2
/// points, non-positive/non-finite width, colour channels outside
/// `[0, 255]`, or invalid tolerances (propagated from the simplification
/// and fitting steps).
pub fn tract_to_stroke(
    tract: &Tract,
    width: f64,
    color: Rgb,
    rdp_epsilon: f64,
    fit_error: f64,
) -> Result<BrushStroke, StrokeError> {
    if tract.len() < 2 {
        return Err(StrokeError::InvalidInput(format!(
            "tract must have at least 2 points, got {}",
            tract.len()
        )));
    }
    if !width.is_finite() || width <= 0.0 {
        return Err(StrokeError::InvalidInput(format!("stroke width must be positive, got {width}")));
    }
    if color.iter().any(|c| !(0.0..=255.0).contains(c)) {
        return Err(StrokeError::InvalidInput(format!("colour channels must be in [0, 255], got {color:?}")));
    }
    let simplified = rdp_simplify(tract.points(), rdp_epsilon)?;
    let segments = fit_bezier(&simplified, fit_error)?;
    Ok(BrushStroke { segments, width, color })
}
