//! Raster and vector output: an RGB canvas, anti-aliased rendering of
//! brush strokes, a per-cell colour-distance metric used for paint
//! gating, and SVG export.
//!
//! Strokes are drawn as round-capped, round-joined thick polylines
//! obtained by flattening their Bezier chain. Coverage of each pixel is
//! computed from the distance between the pixel centre and the flattened
//! centerline, accumulated across segments with `max` into a per-stroke
//! buffer, and composited onto the canvas once per stroke so overlapping
//! segments of the same stroke never double-blend.

mod svg;

pub use svg::export_svg;

use crate::geom::{point_segment_distance_sq, Point};
use crate::raster::{ColorImage, Rgb};
use crate::stroke::{BrushStroke, CubicBezier};
use thiserror::Error;

/// Chordal tolerance (in pixels) when flattening Bezier segments for
/// rasterization.
const FLATTEN_TOLERANCE: f64 = 0.2;
/// Hard cap on flattening recursion depth.
const MAX_FLATTEN_DEPTH: u32 = 20;

/// Errors from canvas construction and canvas metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// An RGB paint target with a remembered background colour.
#[derive(Debug, Clone, PartialEq)]
pub struct Canvas {
    image: ColorImage,
    background: Rgb,
}

impl Canvas {
    pub fn width(&self) -> usize {
        self.image.width()
    }

    pub fn height(&self) -> usize {
        self.image.height()
    }

    pub fn image(&self) -> &ColorImage {
        &self.image
    }

    pub fn into_image(self) -> ColorImage {
        self.image
    }

    pub fn background(&self) -> Rgb {
        self.background
    }
}

/// Creates a canvas filled with `background`.
///
/// # Errors
/// Returns [`RenderError::InvalidParameter`] for zero dimensions or
/// background channels outside `[0, 255]`.
pub fn new_canvas(width: usize, height: usize, background: Rgb) -> Result<Canvas, RenderError> {
    if width == 0 || height == 0 {
        return Err(RenderError::InvalidParameter(format!(
            "canvas dimensions must be positive, got {width}x{height}"
        )));
    }
    if background.iter().any(|c| !(0.0..=255.0).contains(c)) {
        return Err(RenderError::InvalidParameter(format!(
            "background channels must be in [0, 255], got {background:?}"
        )));
    }
    Ok(Canvas { image: ColorImage::new(width, height, background), background })
}

/// Renders `stroke` onto the canvas with round caps and joins.
///
/// Pixel coverage falls linearly from 1 to 0 across a one-pixel band
/// around the stroke boundary, which approximates area coverage. Pixels
/// whose centre is at least `width/2 + 0.5` from the centerline are left
/// bit-identical; pixels at most `width/2 - 0.5` away are set to the
/// stroke colour exactly. Strokes entirely outside the canvas, and
/// strokes with non-finite geometry, leave the canvas unchanged.
pub fn draw_stroke(canvas: &mut Canvas, stroke: &BrushStroke) {
    if !stroke.width.is_finite() || stroke.width <= 0.0 {
        return;
    }
    let radius = stroke.width * 0.5;
    let pts = flatten_stroke(stroke);
    if pts.is_empty() || pts.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return;
    }

    // Bounding box of the painted region, clipped to the canvas.
    let pad = radius + 1.0;
    let (w, h) = (canvas.width(), canvas.height());
    let min_x = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - pad;
    let max_x = pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + pad;
    let min_y = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - pad;
    let max_y = pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + pad;
    if max_x < 0.0 || max_y < 0.0 || min_x > (w - 1) as f64 || min_y > (h - 1) as f64 {
        return;
    }
    let x0 = min_x.max(0.0).floor() as usize;
    let y0 = min_y.max(0.0).floor() as usize;
    let x1 = max_x.min((w - 1) as f64).ceil() as usize;
    let y1 = max_y.min((h - 1) as f64).ceil() as usize;
    let (bw, bh) = (x1 - x0 + 1, y1 - y0 + 1);

    // Per-stroke coverage: max over segments of per-segment coverage.
    // Coverage is a function of the distance to the nearest segment, so
    // the max equals the coverage of the whole chain.
    let mut coverage = vec![0.0f64; bw * bh];
    let segments: Vec<(Point, Point)> = if pts.len() == 1 {
        vec![(pts[0], pts[0])] // a lone point paints a round dot
    } else {
        pts.windows(2).map(|s| (s[0], s[1])).collect()
    };
    for &(a, b) in &segments {
        let sx0 = ((a.x.min(b.x) - pad).max(x0 as f64).floor() as usize).max(x0);
        let sx1 = ((a.x.max(b.x) + pad).min(x1 as f64).ceil() as usize).min(x1);
        let sy0 = ((a.y.min(b.y) - pad).max(y0 as f64).floor() as usize).max(y0);
        let sy1 = ((a.y.max(b.y) + pad).min(y1 as f64).ceil() as usize).min(y1);
        if sx0 > sx1 || sy0 > sy1 {
            continue;
        }
        for y in sy0..=sy1 {
            let row = (y - y0) * bw;
            for x in sx0..=sx1 {
                let d = point_segment_distance_sq(
                    Point::new(x as f64, y as f64),
                    a,
                    b,
                )
                .sqrt();
                let cov = (radius - d + 0.5).clamp(0.0, 1.0);
                let slot = &mut coverage[row + (x - x0)];
                if cov > *slot {
                    *slot = cov;
                }
            }
        }
    }

    // Composite once per stroke.
    for y in y0..=y1 {
        for x in x0..=x1 {
            let cov = coverage[(y - y0) * bw + (x - x0)];
            if cov <= 0.0 {
                continue;
            }
            let dst = canvas.image.get(x, y);
            let src = stroke.color;
            let out = if cov >= 1.0 {
                src // exact assignment keeps fully covered pixels bit-exact
            } else {
                [
                    dst[0] + (src[0] - dst[0]) * cov,
                    dst[1] + (src[1] - dst[1]) * cov,
                    dst[2] + (src[2] - dst[2]) * cov,
                ]
            };
            canvas.image.set(x, y, out);
        }
    }
}

/// Flattens the stroke's Bezier chain into a polyline within
/// [`FLATTEN_TOLERANCE`] of the true curve, deduplicating consecutive
/// equal points.
fn flatten_stroke(stroke: &BrushStroke) -> Vec<Point> {
    let mut pts = Vec::new();
    for seg in &stroke.segments {
        if pts.is_empty() {
            pts.push(seg[0]);
        }
        flatten_cubic(seg, 0, &mut pts);
    }
    pts.dedup();
    pts
}

fn flatten_cubic(seg: &CubicBezier, depth: u32, out: &mut Vec<Point>) {
    let flat_sq = FLATTEN_TOLERANCE * FLATTEN_TOLERANCE;
    let flat = point_segment_distance_sq(seg[1], seg[0], seg[3]) <= flat_sq
        && point_segment_distance_sq(seg[2], seg[0], seg[3]) <= flat_sq;
    if flat || depth >= MAX_FLATTEN_DEPTH {
        out.push(seg[3]);
        return;
    }
    let (left, right) = split_cubic(seg, 0.5);
    flatten_cubic(&left, depth + 1, out);
    flatten_cubic(&right, depth + 1, out);
}

fn split_cubic(seg: &CubicBezier, t: f64) -> (CubicBezier, CubicBezier) {
    let p01 = seg[0].lerp(seg[1], t);
    let p12 = seg[1].lerp(seg[2], t);
    let p23 = seg[2].lerp(seg[3], t);
    let p012 = p01.lerp(p12, t);
    let p123 = p12.lerp(p23, t);
    let mid = p012.lerp(p123, t);
    ([seg[0], p01, p012, mid], [mid, p123, p23, seg[3]])
}

/// An axis-aligned pixel rectangle: columns `x..x+w`, rows `y..y+h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

/// Mean Euclidean RGB distance between two images over `cell`.
///
/// This is zero exactly when the images agree on every pixel of the cell.
///
/// # Errors
/// Returns [`RenderError::InvalidInput`] when the images have different
/// dimensions or the cell is empty or out of bounds.
pub fn mean_cell_distance(
    a: &ColorImage,
    b: &ColorImage,
    cell: CellRect,
) -> Result<f64, RenderError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(RenderError::InvalidInput(format!(
            "image dimensions differ: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    if cell.w == 0 || cell.h == 0 {
        return Err(RenderError::InvalidInput("cell must not be empty".into()));
    }
    if cell.x + cell.w > a.width() || cell.y + cell.h > a.height() {
        return Err(RenderError::InvalidInput(format!(
            "cell {cell:?} exceeds image bounds {}x{}",
            a.width(),
            a.height()
        )));
    }
    let mut total = 0.0;
    for y in cell.y..cell.y + cell.h {
        for x in cell.x..cell.x + cell.w {
            let pa = a.get(x, y);
            let pb = b.get(x, y);
            let d_sq: f64 = (0..3).map(|c| (pa[c] - pb[c]) * (pa[c] - pb[c])).sum();
            total += d_sq.sqrt();
        }
    }
    Ok(total / (cell.w * cell.h) as f64)
}
