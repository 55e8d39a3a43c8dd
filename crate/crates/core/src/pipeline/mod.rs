//! The multilayer stylization pipeline: per layer, resample the input,
//! build an orientation field, gate grid cells by colour distance, trace
//! a tract per active cell in random order, fit it, and paint it.
//!
//! Coordinate spaces: the *canvas* (and the input image) live at the
//! original resolution; each layer traces in its own *working* image
//! whose resolution is `original / scale_factor` (unless
//! [`ResizeMode::BlurOnly`] keeps resolution and only blurs). Tracts are
//! recorded in working coordinates; strokes in canvas coordinates.

use crate::field::{estimator_or_err, FieldError};
use crate::geom::Point;
use crate::raster::{gaussian_blur_color, resample, ColorImage, RasterError, Rgb};
use crate::render::{
    draw_stroke, mean_cell_distance, new_canvas, Canvas, CellRect, RenderError,
};
use crate::stroke::tract_to_stroke;
use crate::stroke::BrushStroke;
use crate::tracer::{
    trace_bidirectional, trace_direction, OrientationQuery, Tract, TracerConfig, TracerError,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest possible mean RGB distance (black vs white).
pub const MAX_RGB_DISTANCE: f64 = 441.673;

/// Errors from pipeline orchestration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tracer(#[from] TracerError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Per-layer painting parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    /// Resolution divisor for the working image (> 1 coarsens, < 1
    /// super-samples).
    pub scale_factor: f64,
    /// Tract arc-length budget in pixels (see
    /// [`StylizationConfig::length_space`] for which pixels).
    pub stroke_length: f64,
    /// Stroke width in canvas pixels; also the gating cell size.
    pub stroke_width: f64,
    /// A cell is painted only if its mean RGB distance from the original
    /// exceeds this.
    pub color_threshold: f64,
}

impl LayerParams {
    fn validate(&self) -> Result<(), PipelineError> {
        let positive = [
            ("scale_factor", self.scale_factor),
            ("stroke_length", self.stroke_length),
            ("stroke_width", self.stroke_width),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(PipelineError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.color_threshold.is_finite()
            || !(0.0..=MAX_RGB_DISTANCE).contains(&self.color_threshold)
        {
            return Err(PipelineError::InvalidConfig(format!(
                "color_threshold must be in [0, {MAX_RGB_DISTANCE}], got {}",
                self.color_threshold
            )));
        }
        Ok(())
    }
}

/// How the working image of a layer is produced from the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResizeMode {
    /// Resample to `original / scale_factor` (anti-alias prefilter when
    /// downsampling).
    Resize,
    /// Keep full resolution and Gaussian-blur with sigma = scale_factor.
    BlurOnly,
}

/// Which pixel space a layer's `stroke_length` budget is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthSpace {
    /// Working-image pixels: coarse layers get strokes that span the
    /// coarse image.
    Working,
    /// Original-resolution pixels: the budget is divided by the scale
    /// factor before tracing.
    Original,
}

/// Full pipeline configuration. `Default` carries the standard four-layer
/// coarse-to-fine parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct StylizationConfig {
    pub layers: Vec<LayerParams>,
    /// Orientation-field estimator name (see [`crate::field::estimators`]).
    pub field_kind: String,
    /// Gradient derivative scale in working-image pixels.
    pub sigma_d: f64,
    /// Tensor smoothing scale in working-image pixels.
    pub rho: f64,
    /// Minimum coherence for seeding and continuing tracts.
    pub coherence_min: f64,
    pub rng_seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Upper step bound; `None` uses the layer's stroke width.
    pub max_step: Option<f64>,
    pub error_tol: f64,
    /// Polyline simplification tolerance in canvas pixels.
    pub rdp_epsilon: f64,
    /// Bezier fitting tolerance in canvas pixels.
    pub fit_error: f64,
    pub background: Rgb,
    pub resize_mode: ResizeMode,
    /// Trace from the seed in both directions (half the budget each way).
    pub bidirectional: bool,
    pub length_space: LengthSpace,
    /// Jitter seeds uniformly within their cell instead of using centres.
    pub seed_jitter: bool,
}

impl Default for StylizationConfig {
    fn default() -> Self {
        let layer = |scale_factor, stroke_length, stroke_width, color_threshold| LayerParams {
            scale_factor,
            stroke_length,
            stroke_width,
            color_threshold,
        };
        Self {
            layers: vec![
                layer(10.0, 1000.0, 50.0, 100.0),
                layer(5.0, 500.0, 25.0, 100.0),
                layer(1.0, 100.0, 5.0, 50.0),
                layer(0.5, 100.0, 2.5, 50.0),
            ],
            field_kind: "structure_tensor".into(),
            sigma_d: 1.0,
            rho: 1.0,
            coherence_min: 0.5,
            rng_seed: 0,
            initial_step: 1.0,
            min_step: 0.1,
            max_step: None,
            error_tol: 0.1,
            rdp_epsilon: 0.5,
            fit_error: 1.0,
            background: [255.0, 255.0, 255.0],
            resize_mode: ResizeMode::Resize,
            bidirectional: true,
            length_space: LengthSpace::Working,
            seed_jitter: false,
        }
    }
}

impl StylizationConfig {
    fn validate(&self) -> Result<(), PipelineError> {
        for (i, layer) in self.layers.iter().enumerate() {
            layer.validate().map_err(|e| {
                PipelineError::InvalidConfig(format!("layer {}: {e}", i + 1))
            })?;
        }
        if !self.rdp_epsilon.is_finite() || self.rdp_epsilon < 0.0 {
            return Err(PipelineError::InvalidConfig(format!(
                "rdp_epsilon must be non-negative and finite, got {}",
                self.rdp_epsilon
            )));
        }
        if !self.fit_error.is_finite() || self.fit_error <= 0.0 {
            return Err(PipelineError::InvalidConfig(format!(
                "fit_error must be positive and finite, got {}",
                self.fit_error
            )));
        }
        Ok(())
    }
}

/// One grid cell: its column/row in the gating grid and its pixel rect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCell {
    pub col: usize,
    pub row: usize,
    pub rect: CellRect,
}

/// Provenance of one painted stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeRecord {
    /// Index into `cfg.layers`.
    pub layer: usize,
    /// `(col, row)` of the gating cell.
    pub cell: (usize, usize),
    /// Seed point in working-image coordinates.
    pub seed: Point,
    /// Traced streamline in working-image coordinates.
    pub tract: Tract,
    /// Fitted stroke in canvas coordinates.
    pub stroke: BrushStroke,
}

/// Tiles a `width` x `height` canvas with square cells of side `size`
/// pixels (boundaries at `round(i * size)`), keeping partial cells at the
/// right/bottom edges. The cells partition the canvas exactly.
///
/// # Errors
/// Returns [`PipelineError::InvalidConfig`] for a non-finite or
/// non-positive `size`.
pub fn cell_grid(width: usize, height: usize, size: f64) -> Result<Vec<GridCell>, PipelineError> {
    if !size.is_finite() || size <= 0.0 {
        return Err(PipelineError::InvalidConfig(format!(
            "cell size must be positive and finite, got {size}"
        )));
    }
    let xs = grid_boundaries(width, size);
    let ys = grid_boundaries(height, size);
    let mut cells = Vec::with_capacity((xs.len() - 1) * (ys.len() - 1));
    for (row, wy) in ys.windows(2).enumerate() {
        for (col, wx) in xs.windows(2).enumerate() {
            cells.push(GridCell {
                col,
                row,
                rect: CellRect { x: wx[0], y: wy[0], w: wx[1] - wx[0], h: wy[1] - wy[0] },
            });
        }
    }
    Ok(cells)
}

fn grid_boundaries(extent: usize, size: f64) -> Vec<usize> {
    let mut bounds = vec![0usize];
    let mut i = 1u64;
    while *bounds.last().unwrap() < extent {
        let b = ((i as f64 * size).round() as usize).min(extent);
        if b > *bounds.last().unwrap() {
            bounds.push(b);
        }
        i += 1;
    }
    bounds
}

/// Indices (into `cells`) of the cells whose mean colour distance between
/// `original` and `snapshot` exceeds `threshold`, in grid order.
///
/// # Errors
/// Propagates dimension/bounds errors from the cell metric.
pub fn active_cells(
    original: &ColorImage,
    snapshot: &ColorImage,
    cells: &[GridCell],
    threshold: f64,
) -> Result<Vec<usize>, PipelineError> {
    let mut active = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        if mean_cell_distance(original, snapshot, cell.rect)? > threshold {
            active.push(i);
        }
    }
    Ok(active)
}

/// Paints one layer onto `canvas` and returns the provenance of every
/// stroke placed (tagged with `layer_index`).
///
/// Steps: build the working image and its orientation field; tile the
/// canvas into `stroke_width`-sized cells; gate cells against a snapshot
/// of the canvas taken at layer start; shuffle the active cells; per
/// cell, trace a tract from the cell centre (mapped into working
/// coordinates), colour it from the working image at the tract's middle
/// point, map it back to canvas coordinates, simplify, fit, and draw
/// immediately. Cells whose seed is rejected (low coherence) or whose
/// tract is degenerate are skipped.
///
/// # Errors
/// Invalid parameters or dimension mismatches abort the layer;
/// per-cell seed rejections do not.
pub fn stylize_layer<R: Rng>(
    original: &ColorImage,
    canvas: &mut Canvas,
    layer_index: usize,
    params: &LayerParams,
    cfg: &StylizationConfig,
    rng: &mut R,
) -> Result<Vec<StrokeRecord>, PipelineError> {
    params.validate()?;
    cfg.validate()?;
    if original.width() != canvas.width() || original.height() != canvas.height() {
        return Err(PipelineError::InvalidInput(format!(
            "canvas is {}x{} but the original is {}x{}",
            canvas.width(),
            canvas.height(),
            original.width(),
            original.height()
        )));
    }

    // (1) Working image and orientation field.
    let (working, scale) = match cfg.resize_mode {
        ResizeMode::Resize => (resample(original, params.scale_factor)?, params.scale_factor),
        ResizeMode::BlurOnly => (gaussian_blur_color(original, params.scale_factor)?, 1.0),
    };
    let grey = working.to_greyscale();
    let field = estimator_or_err(&cfg.field_kind)?.build(&grey, cfg.sigma_d, cfg.rho)?;

    let max_step = cfg.max_step.unwrap_or(params.stroke_width).max(cfg.min_step);
    let tracer_cfg = TracerConfig {
        max_length: match cfg.length_space {
            LengthSpace::Working => params.stroke_length,
            LengthSpace::Original => params.stroke_length / scale,
        },
        coherence_min: cfg.coherence_min,
        initial_step: cfg.initial_step.clamp(cfg.min_step, max_step),
        min_step: cfg.min_step,
        max_step,
        error_tol: cfg.error_tol,
    };
    tracer_cfg.validate().map_err(PipelineError::Tracer)?;

    // (2)-(4) Cell grid, snapshot gating, shuffle.
    let cells = cell_grid(canvas.width(), canvas.height(), params.stroke_width)?;
    let snapshot = canvas.image().clone();
    let mut order = active_cells(original, &snapshot, &cells, params.color_threshold)?;
    order.shuffle(rng);

    let max_wx = (working.width() - 1) as f64;
    let max_wy = (working.height() - 1) as f64;
    let mut records = Vec::new();

    for idx in order {
        let cell = cells[idx];
        // (5) Seed at the cell centre (optionally jittered within the cell).
        let rect = cell.rect;
        let mut seed = Point::new(
            rect.x as f64 + (rect.w as f64 - 1.0) / 2.0,
            rect.y as f64 + (rect.h as f64 - 1.0) / 2.0,
        );
        if cfg.seed_jitter {
            let jx = rng.random_range(-0.5..0.5) * rect.w as f64;
            let jy = rng.random_range(-0.5..0.5) * rect.h as f64;
            seed.x = (seed.x + jx).clamp(rect.x as f64, (rect.x + rect.w - 1) as f64);
            seed.y = (seed.y + jy).clamp(rect.y as f64, (rect.y + rect.h - 1) as f64);
        }
        // Cell centres can map a hair outside the working domain at the
        // right/bottom edges (rounding in `resample`), so clamp.
        let seed_w = Point::new(
            (seed.x / scale).clamp(0.0, max_wx),
            (seed.y / scale).clamp(0.0, max_wy),
        );

        let traced = if cfg.bidirectional {
            trace_bidirectional(&field, seed_w, &tracer_cfg)
        } else {
            match field.orientation_at(seed_w.x, seed_w.y) {
                Ok(sample) => trace_direction(&field, seed_w, sample.direction, &tracer_cfg),
                Err(_) => continue,
            }
        };
        let tract = match traced {
            Ok(t) => t,
            Err(TracerError::SeedRejected { .. } | TracerError::SeedOutOfBounds { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        if tract.len() < 2 {
            continue;
        }

        // (6) Colour from the working image at the tract's middle point;
        // map the tract back to canvas coordinates.
        let mid = tract.points()[tract.len() / 2];
        let color = working.bilinear_sample(mid.x, mid.y)?;
        let canvas_tract =
            Tract::from_points(tract.points().iter().map(|&p| p * scale).collect());

        // (7) Simplify, fit, draw in shuffle order. Pathological tracts
        // that defeat the fitter are skipped rather than aborting the run.
        let Ok(stroke) = tract_to_stroke(
            &canvas_tract,
            params.stroke_width,
            color,
            cfg.rdp_epsilon,
            cfg.fit_error,
        ) else {
            continue;
        };
        draw_stroke(canvas, &stroke);
        records.push(StrokeRecord {
            layer: layer_index,
            cell: (cell.col, cell.row),
            seed: seed_w,
            tract,
            stroke,
        });
    }
    Ok(records)
}

/// Runs the full multilayer pipeline on `original`, returning the painted
/// canvas and the provenance of every stroke.
///
/// Output is bit-identical for identical (image, config) input: each
/// layer uses an independent, portable RNG stream derived from
/// `cfg.rng_seed` and the layer index.
///
/// # Errors
/// Propagates configuration and dimension errors from the layers.
pub fn stylize(
    original: &ColorImage,
    cfg: &StylizationConfig,
) -> Result<(Canvas, Vec<StrokeRecord>), PipelineError> {
    cfg.validate()?;
    let mut canvas = new_canvas(original.width(), original.height(), cfg.background)?;
    let mut records = Vec::new();
    for (i, params) in cfg.layers.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(i as u64);
        records.extend(stylize_layer(original, &mut canvas, i, params, cfg, &mut rng)?);
    }
    Ok((canvas, records))
}

/// Mean tract jaggedness: for each tract with at least 3 points, the mean
/// absolute turning angle (radians) at its interior vertices divided by
/// its mean segment length; averaged over all such tracts. Lower is
/// smoother.
///
/// # Errors
/// Returns [`PipelineError::InvalidInput`] when no tract qualifies.
pub fn smoothness_metric(records: &[StrokeRecord]) -> Result<f64, PipelineError> {
    let mut per_tract = Vec::new();
    for record in records {
        let pts = record.tract.points();
        if pts.len() < 3 {
            continue;
        }
        let mut angle_sum = 0.0;
        for w in pts.windows(3) {
            let a = w[1] - w[0];
            let b = w[2] - w[1];
            let cross = a.x * b.y - a.y * b.x;
            angle_sum += cross.atan2(a.dot(b)).abs();
        }
        let mean_angle = angle_sum / (pts.len() - 2) as f64;
        let mean_seg = record.tract.arc_length() / (pts.len() - 1) as f64;
        per_tract.push(mean_angle / mean_seg);
    }
    if per_tract.is_empty() {
        return Err(PipelineError::InvalidInput(
            "smoothness metric needs at least one tract with 3 or more points".into(),
        ));
    }
    Ok(per_tract.iter().sum::<f64>() / per_tract.len() as f64)
}
