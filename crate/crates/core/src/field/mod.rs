//! Per-pixel orientation estimation.
//!
//! A [`TensorField`] stores a symmetric 2x2 tensor per pixel. Sampling it at
//! a continuous point interpolates the three tensor components bilinearly
//! (never the eigenvectors, which are only defined up to sign) and
//! decomposes the interpolated tensor on the spot. The minor eigenvector —
//! the direction of least intensity change — is the direction brush strokes
//! follow, and the eigenvalue spread yields a confidence weight
//! ([`coherence`]).
//!
//! Two estimators are provided behind one interface (see [`registry`]):
//!
//! * `structure_tensor` — gradient outer products smoothed by a Gaussian
//!   window, robust to gradient sign flips across ridges;
//! * `gradient` — raw, unsmoothed outer products, the classic
//!   normal-to-gradient baseline.

mod eigen;
pub mod registry;

pub use eigen::{coherence, eigen2, EigenSystem2};
pub use registry::{estimator, estimator_or_err, estimators, OrientationEstimator};

use crate::geom::Vec2;
use crate::raster::{gaussian_blur, gradient, RasterError, ScalarImage};
use thiserror::Error;

/// Errors from field construction and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("sample point ({x}, {y}) lies outside the field domain")]
    OutOfBounds { x: f64, y: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown orientation estimator {0:?} (expected one of: {1})")]
    UnknownEstimator(String, String),
}

impl From<RasterError> for FieldError {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::OutOfBounds { x, y } => FieldError::OutOfBounds { x, y },
            other => FieldError::InvalidParameter(other.to_string()),
        }
    }
}

/// Per-pixel symmetric 2x2 tensors `[[sxx, sxy], [sxy, syy]]`, stored as
/// three component planes.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    sxx: ScalarImage,
    sxy: ScalarImage,
    syy: ScalarImage,
}

/// Interpolated orientation at a continuous point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationSample {
    /// Unit minor eigenvector (stroke direction), defined up to sign;
    /// `(1, 0)` by convention when the tensor is degenerate.
    pub direction: Vec2,
    /// Anisotropy in `[0, 1]`; 0 for degenerate tensors.
    pub coherence: f64,
}

impl TensorField {
    pub(crate) fn from_planes(sxx: ScalarImage, sxy: ScalarImage, syy: ScalarImage) -> Self {
        assert_eq!(sxx.width(), sxy.width());
        assert_eq!(sxx.width(), syy.width());
        assert_eq!(sxx.height(), sxy.height());
        assert_eq!(sxx.height(), syy.height());
        Self { sxx, sxy, syy }
    }

    pub fn width(&self) -> usize {
        self.sxx.width()
    }

    pub fn height(&self) -> usize {
        self.sxx.height()
    }

    /// Tensor components at integer pixel coordinates.
    pub fn components(&self, x: usize, y: usize) -> (f64, f64, f64) {
        (self.sxx.get(x, y), self.sxy.get(x, y), self.syy.get(x, y))
    }

    /// Bilinearly interpolated tensor components at a continuous point.
    ///
    /// # Errors
    /// Returns [`FieldError::OutOfBounds`] outside `[0, w-1] x [0, h-1]`.
    pub fn sample_components(&self, x: f64, y: f64) -> Result<(f64, f64, f64), FieldError> {
        let sxx = self.sxx.bilinear_sample(x, y)?;
        let sxy = self.sxy.bilinear_sample(x, y)?;
        let syy = self.syy.bilinear_sample(x, y)?;
        Ok((sxx, sxy, syy))
    }
}

/// Samples stroke direction and coherence at a continuous point by
/// interpolating tensor components and decomposing the result.
///
/// # Errors
/// Returns [`FieldError::OutOfBounds`] outside the field domain.
pub fn orientation_at(field: &TensorField, x: f64, y: f64) -> Result<OrientationSample, FieldError> {
    let (sxx, sxy, syy) = field.sample_components(x, y)?;
    let e = eigen2(sxx, sxy, syy);
    if e.degenerate {
        // Near-isotropic tensors carry no usable orientation, whatever the
        // raw anisotropy ratio would claim (it is ill-conditioned for tiny
        // eigenvalue sums).
        return Ok(OrientationSample { direction: Vec2::new(1.0, 0.0), coherence: 0.0 });
    }
    Ok(OrientationSample { direction: e.v1, coherence: coherence(e.lambda1, e.lambda2) })
}

/// Structure tensor of a greyscale image: derivative-of-Gaussian gradients
/// at scale `sigma_d`, outer products smoothed componentwise by a Gaussian
/// window of scale `rho`.
///
/// # Errors
/// Returns [`FieldError::InvalidParameter`] unless both scales are finite
/// and positive.
pub fn structure_tensor(img: &ScalarImage, sigma_d: f64, rho: f64) -> Result<TensorField, FieldError> {
    let (ix, iy) = gradient(img, sigma_d)?;
    let (sxx, sxy, syy) = outer_products(&ix, &iy);
    Ok(TensorField::from_planes(
        gaussian_blur(&sxx, rho)?,
        gaussian_blur(&sxy, rho)?,
        gaussian_blur(&syy, rho)?,
    ))
}

/// Rank-1 orientation field from raw gradients (no tensor smoothing): the
/// baseline estimator. Minor eigenvectors are exactly the isophote
/// directions, and coherence is 1 wherever the gradient is nonzero.
///
/// # Errors
/// Returns [`FieldError::InvalidParameter`] unless `sigma_d` is finite and
/// positive.
pub fn gradient_orientation_field(img: &ScalarImage, sigma_d: f64) -> Result<TensorField, FieldError> {
    let (ix, iy) = gradient(img, sigma_d)?;
    let (sxx, sxy, syy) = outer_products(&ix, &iy);
    Ok(TensorField::from_planes(sxx, sxy, syy))
}

fn outer_products(ix: &ScalarImage, iy: &ScalarImage) -> (ScalarImage, ScalarImage, ScalarImage) {
    let (w, h) = (ix.width(), ix.height());
    let n = w * h;
    let mut sxx = Vec::with_capacity(n);
    let mut sxy = Vec::with_capacity(n);
    let mut syy = Vec::with_capacity(n);
    for (gx, gy) in ix.data().iter().zip(iy.data()) {
        sxx.push(gx * gx);
        sxy.push(gx * gy);
        syy.push(gy * gy);
    }
    (
        ScalarImage::from_vec(w, h, sxx),
        ScalarImage::from_vec(w, h, sxy),
        ScalarImage::from_vec(w, h, syy),
    )
}
