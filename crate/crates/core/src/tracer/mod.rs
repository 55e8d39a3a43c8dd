//! Streamline tracing through an orientation field.
//!
//! A tract follows the minor-eigenvector direction of the field from a seed
//! point, integrating `dr/ds = v1(r)` with an adaptive embedded
//! Runge-Kutta 2(3) scheme: the step is advanced with a second-order
//! midpoint step and the local error is estimated against a third-order
//! Bogacki-Shampine-style combination of the same stage evaluations.
//!
//! Eigenvectors carry no intrinsic sign, so every field evaluation is
//! aligned against the previous step direction before use. Tracing stops at
//! the image border, where interpolated coherence drops below a threshold,
//! or when the arc-length budget is exhausted (the final step is truncated
//! to land exactly on the budget). When a border or low-coherence region is
//! hit the step is repeatedly halved down to `min_step` first, so tracts
//! approach their stopping boundary instead of ending a full step short.

use crate::field::{FieldError, OrientationSample, TensorField};
use crate::geom::{Point, Vec2};
use thiserror::Error;

/// Minimum spacing between consecutive tract points; budget remainders
/// below this are not worth a segment.
const MIN_SPACING: f64 = 1e-6;

/// Anything the tracer can sample directions from. Implemented by
/// [`TensorField`]; test doubles use it to probe convention invariances.
pub trait OrientationQuery {
    fn width(&self) -> usize;
    fn height(&self) -> usize;

    /// Orientation at a continuous point.
    ///
    /// # Errors
    /// Returns [`FieldError::OutOfBounds`] outside `[0, w-1] x [0, h-1]`.
    fn orientation_at(&self, x: f64, y: f64) -> Result<OrientationSample, FieldError>;
}

impl OrientationQuery for TensorField {
    fn width(&self) -> usize {
        TensorField::width(self)
    }

    fn height(&self) -> usize {
        TensorField::height(self)
    }

    fn orientation_at(&self, x: f64, y: f64) -> Result<OrientationSample, FieldError> {
        crate::field::orientation_at(self, x, y)
    }
}

/// Step-size and stopping parameters for tracing.
#[derive(Debug, Clone, PartialEq)]
pub struct TracerConfig {
    /// Arc-length budget in field pixels ([`trace_bidirectional`] spends
    /// half per direction).
    pub max_length: f64,
    /// Tracing stops where interpolated coherence falls below this.
    pub coherence_min: f64,
    /// First attempted step size, in pixels along the tract.
    pub initial_step: f64,
    /// Smallest adaptive step; boundary refinement stops here.
    pub min_step: f64,
    /// Largest adaptive step.
    pub max_step: f64,
    /// Local error tolerance (pixels) for step acceptance.
    pub error_tol: f64,
}

impl TracerConfig {
    /// Validates the parameter ranges.
    ///
    /// # Errors
    /// Returns [`TracerError::InvalidConfig`] for non-finite values, a
    /// non-positive budget or tolerance, a coherence threshold outside
    /// `[0, 1]`, or step sizes violating
    /// `1e-6 <= min_step <= initial_step <= max_step`.
    pub fn validate(&self) -> Result<(), TracerError> {
        let all = [
            self.max_length,
            self.coherence_min,
            self.initial_step,
            self.min_step,
            self.max_step,
            self.error_tol,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(TracerError::InvalidConfig("all parameters must be finite".into()));
        }
        if self.max_length <= 0.0 {
            return Err(TracerError::InvalidConfig("max_length must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.coherence_min) {
            return Err(TracerError::InvalidConfig("coherence_min must be in [0, 1]".into()));
        }
        if self.min_step < MIN_SPACING {
            return Err(TracerError::InvalidConfig(format!(
                "min_step must be at least {MIN_SPACING}"
            )));
        }
        if !(self.min_step <= self.initial_step && self.initial_step <= self.max_step) {
            return Err(TracerError::InvalidConfig(
                "step sizes must satisfy min_step <= initial_step <= max_step".into(),
            ));
        }
        if self.error_tol <= 0.0 {
            return Err(TracerError::InvalidConfig("error_tol must be positive".into()));
        }
        Ok(())
    }
}

/// A traced streamline: ordered points plus cached arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tract {
    points: Vec<Point>,
    arc_length: f64,
}

impl Tract {
    /// Builds a tract from an explicit polyline, computing its arc length
    /// as the sum of segment lengths.
    pub fn from_points(points: Vec<Point>) -> Self {
        let arc_length = points.windows(2).map(|w| w[1].dist(w[0])).sum();
        Self { points, arc_length }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn arc_length(&self) -> f64 {
        self.arc_length
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Diagnostics accumulated during one trace.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TraceStats {
    /// Field evaluations performed.
    pub evaluations: u32,
    /// Steps accepted at `min_step` with local error still above tolerance
    /// (the anti-stall escape hatch at sharp field kinks).
    pub forced_min_step_accepts: u32,
    /// Smallest coherence seen among evaluations of accepted steps (1.0 if
    /// nothing was accepted).
    pub min_accepted_coherence: f64,
}

/// Errors from tract seeding and configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TracerError {
    #[error("invalid tracer configuration: {0}")]
    InvalidConfig(String),
    #[error("seed point ({x}, {y}) lies outside the field domain")]
    SeedOutOfBounds { x: f64, y: f64 },
    #[error("seed coherence {coherence} is below the threshold {threshold}")]
    SeedRejected { coherence: f64, threshold: f64 },
}

/// Outcome of one attempted RK step.
enum StepAttempt {
    /// Landing point, its cached orientation, travel direction, per-attempt
    /// minimum coherence, and the embedded error estimate.
    Valid { next: Point, sample: OrientationSample, dir: Vec2, min_coherence: f64, err: f64 },
    /// A stage or landing point left the domain or fell below the coherence
    /// threshold.
    Blocked,
}

/// Traces a single direction from `seed` until a stopping rule fires,
/// returning the tract and its diagnostics.
///
/// # Errors
/// Returns [`TracerError::InvalidConfig`] for bad parameters or a
/// (near-)zero `initial_dir`, [`TracerError::SeedOutOfBounds`] for a seed
/// outside the field, and [`TracerError::SeedRejected`] when coherence at
/// the seed is below `cfg.coherence_min`.
pub fn trace_direction_with_stats<F: OrientationQuery + ?Sized>(
    field: &F,
    seed: Point,
    initial_dir: Vec2,
    cfg: &TracerConfig,
) -> Result<(Tract, TraceStats), TracerError> {
    cfg.validate()?;
    let dir = initial_dir
        .normalized()
        .ok_or_else(|| TracerError::InvalidConfig("initial direction must be nonzero".into()))?;

    let mut stats = TraceStats { min_accepted_coherence: 1.0, ..TraceStats::default() };
    let seed_sample = match field.orientation_at(seed.x, seed.y) {
        Ok(s) => s,
        Err(_) => return Err(TracerError::SeedOutOfBounds { x: seed.x, y: seed.y }),
    };
    stats.evaluations += 1;
    if seed_sample.coherence < cfg.coherence_min {
        return Err(TracerError::SeedRejected {
            coherence: seed_sample.coherence,
            threshold: cfg.coherence_min,
        });
    }

    let mut points = vec![seed];
    let mut arc = 0.0;
    let mut pos = seed;
    let mut pos_sample = seed_sample;
    let mut ref_dir = dir;
    let mut h = cfg.initial_step.min(cfg.max_step);

    loop {
        let remaining = cfg.max_length - arc;
        if remaining <= MIN_SPACING {
            break;
        }
        let h_try = h.min(remaining);

        match attempt_step(field, pos, pos_sample, ref_dir, h_try, cfg, &mut stats) {
            StepAttempt::Blocked => {
                if h_try > cfg.min_step {
                    // Refine towards the boundary instead of stopping a full
                    // step short of it.
                    h = (h_try * 0.5).max(cfg.min_step);
                    continue;
                }
                break;
            }
            StepAttempt::Valid { next, sample, dir, min_coherence, err } => {
                if err > cfg.error_tol && h_try > cfg.min_step {
                    h = (h_try * 0.5).max(cfg.min_step);
                    continue;
                }
                if err > cfg.error_tol {
                    // Accept at the floor rather than stalling on a kink.
                    stats.forced_min_step_accepts += 1;
                }
                arc += (next - pos).norm();
                points.push(next);
                stats.min_accepted_coherence = stats.min_accepted_coherence.min(min_coherence);
                pos = next;
                pos_sample = sample;
                ref_dir = dir;
                h = if err < cfg.error_tol * 0.25 {
                    (h_try * 1.5).min(cfg.max_step)
                } else {
                    h_try.max(cfg.min_step)
                };
            }
        }
    }

    Ok((Tract { points, arc_length: arc }, stats))
}

/// One embedded RK2(3) step of size `h` from `pos`.
fn attempt_step<F: OrientationQuery + ?Sized>(
    field: &F,
    pos: Point,
    pos_sample: OrientationSample,
    ref_dir: Vec2,
    h: f64,
    cfg: &TracerConfig,
    stats: &mut TraceStats,
) -> StepAttempt {
    let mut min_coherence = pos_sample.coherence;
    let mut eval = |p: Point| -> Option<(Vec2, f64)> {
        let s = field.orientation_at(p.x, p.y).ok()?;
        stats.evaluations += 1;
        if s.coherence < cfg.coherence_min {
            return None;
        }
        Some((align(s.direction, ref_dir), s.coherence))
    };

    let k1 = align(pos_sample.direction, ref_dir);
    let Some((k2, c2)) = eval(pos + k1 * (0.5 * h)) else { return StepAttempt::Blocked };
    let Some((k3, c3)) = eval(pos + k2 * (0.75 * h)) else { return StepAttempt::Blocked };
    min_coherence = min_coherence.min(c2).min(c3);

    // Second-order midpoint result (the point we advance to) ...
    let next = pos + k2 * h;
    // ... versus the third-order combination of the same stages.
    let third = pos + (k1 * (2.0 / 9.0) + k2 * (1.0 / 3.0) + k3 * (4.0 / 9.0)) * h;
    let err = (next - third).norm();

    // Landing point must itself be usable; its sample seeds the next step.
    let sample = match field.orientation_at(next.x, next.y) {
        Ok(s) if s.coherence >= cfg.coherence_min => s,
        _ => return StepAttempt::Blocked,
    };
    stats.evaluations += 1;
    min_coherence = min_coherence.min(sample.coherence);

    StepAttempt::Valid { next, sample, dir: k2, min_coherence, err }
}

/// Flips `v` so it points along `reference` (eigenvectors are signless).
fn align(v: Vec2, reference: Vec2) -> Vec2 {
    if v.dot(reference) < 0.0 {
        -v
    } else {
        v
    }
}

/// Traces a single direction from `seed`; see
/// [`trace_direction_with_stats`] for the stopping rules and errors.
///
/// # Errors
/// Same conditions as [`trace_direction_with_stats`].
pub fn trace_direction<F: OrientationQuery + ?Sized>(
    field: &F,
    seed: Point,
    initial_dir: Vec2,
    cfg: &TracerConfig,
) -> Result<Tract, TracerError> {
    trace_direction_with_stats(field, seed, initial_dir, cfg).map(|(t, _)| t)
}

/// Traces both ways along the field direction at `seed`, spending half of
/// `cfg.max_length` per side, and concatenates the halves into one tract
/// running backward-end to forward-end.
///
/// # Errors
/// Same conditions as [`trace_direction_with_stats`].
pub fn trace_bidirectional<F: OrientationQuery + ?Sized>(
    field: &F,
    seed: Point,
    cfg: &TracerConfig,
) -> Result<Tract, TracerError> {
    trace_bidirectional_with_stats(field, seed, cfg).map(|(t, _)| t)
}

/// [`trace_bidirectional`] plus merged diagnostics for both halves.
///
/// # Errors
/// Same conditions as [`trace_direction_with_stats`].
pub fn trace_bidirectional_with_stats<F: OrientationQuery + ?Sized>(
    field: &F,
    seed: Point,
    cfg: &TracerConfig,
) -> Result<(Tract, TraceStats), TracerError> {
    cfg.validate()?;
    let seed_sample = match field.orientation_at(seed.x, seed.y) {
        Ok(s) => s,
        Err(_) => return Err(TracerError::SeedOutOfBounds { x: seed.x, y: seed.y }),
    };
    if seed_sample.coherence < cfg.coherence_min {
        return Err(TracerError::SeedRejected {
            coherence: seed_sample.coherence,
            threshold: cfg.coherence_min,
        });
    }

    let half = TracerConfig { max_length: cfg.max_length * 0.5, ..cfg.clone() };
    let dir = seed_sample.direction;
    let (forward, fs) = trace_direction_with_stats(field, seed, dir, &half)?;
    let (backward, bs) = trace_direction_with_stats(field, seed, -dir, &half)?;

    let mut points = Vec::with_capacity(forward.len() + backward.len() - 1);
    points.extend(backward.points().iter().rev().copied());
    points.extend_from_slice(&forward.points()[1..]);

    let stats = TraceStats {
        evaluations: fs.evaluations + bs.evaluations,
        forced_min_step_accepts: fs.forced_min_step_accepts + bs.forced_min_step_accepts,
        min_accepted_coherence: fs.min_accepted_coherence.min(bs.min_accepted_coherence),
    };
    Ok((Tract { points, arc_length: forward.arc_length() + backward.arc_length() }, stats))
}
