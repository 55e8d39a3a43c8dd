//! Stroke-based image stylization.
//!
//! The crate turns a photograph into a painterly rendering in four stages:
//!
//! 1. [`raster`] — image containers, Gaussian/derivative filtering, and
//!    resampling used everywhere else.
//! 2. [`field`] — per-pixel orientation estimation. Orientation comes from a
//!    smoothed structure tensor by default; alternative estimators are
//!    registered by name and selected at runtime (see [`field::registry`]).
//! 3. [`tracer`] — adaptive streamline integration through the orientation
//!    field, producing polyline tracts that follow image structure.
//! 4. [`stroke`] / [`render`] — tract simplification, cubic Bezier fitting,
//!    and anti-aliased stroke rasterization (plus SVG export).
//!
//! [`pipeline`] ties the stages into a coarse-to-fine multi-layer painting
//! loop driven by [`pipeline::StylizationConfig`], and [`config`] parses the
//! on-disk configuration format.

pub mod config;
pub mod field;
pub mod geom;
pub mod pipeline;
pub mod raster;
pub mod render;
pub mod stroke;
pub mod tracer;

pub use geom::{Point, Vec2};
