//! Named orientation estimators.
//!
//! Every estimator implements [`OrientationEstimator`] and is registered
//! here under a canonical name plus short aliases, so configuration files
//! (`field_kind = gradient`) and CLI flags (`--field st`) can select the
//! algorithm at runtime without the callers knowing the concrete types.

use super::{gradient_orientation_field, structure_tensor, FieldError, TensorField};
use crate::raster::ScalarImage;

/// A strategy for turning a greyscale image into an orientation tensor
/// field.
///
/// `sigma_d` is the differentiation scale. `rho` is the tensor smoothing
/// scale; estimators that do not smooth are free to ignore it.
pub trait OrientationEstimator: Send + Sync {
    /// Canonical name, as written in configuration files.
    fn name(&self) -> &'static str;

    /// Alternative spellings accepted on the command line.
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    /// One-line description for listings and error messages.
    fn describe(&self) -> &'static str;

    /// Builds the tensor field.
    ///
    /// # Errors
    /// Returns [`FieldError::InvalidParameter`] for unusable scales.
    fn build(&self, grey: &ScalarImage, sigma_d: f64, rho: f64) -> Result<TensorField, FieldError>;
}

struct StructureTensorEstimator;

impl OrientationEstimator for StructureTensorEstimator {
    fn name(&self) -> &'static str {
        "structure_tensor"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["st", "structure-tensor"]
    }

    fn describe(&self) -> &'static str {
        "Gaussian-smoothed gradient outer products (default; robust across ridges)"
    }

    fn build(&self, grey: &ScalarImage, sigma_d: f64, rho: f64) -> Result<TensorField, FieldError> {
        structure_tensor(grey, sigma_d, rho)
    }
}

struct GradientEstimator;

impl OrientationEstimator for GradientEstimator {
    fn name(&self) -> &'static str {
        "gradient"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["grad"]
    }

    fn describe(&self) -> &'static str {
        "raw gradient outer products, no smoothing (normal-to-gradient baseline)"
    }

    fn build(&self, grey: &ScalarImage, sigma_d: f64, _rho: f64) -> Result<TensorField, FieldError> {
        gradient_orientation_field(grey, sigma_d)
    }
}

static REGISTRY: [&dyn OrientationEstimator; 2] =
    [&StructureTensorEstimator, &GradientEstimator];

/// All registered estimators, default first.
pub fn estimators() -> &'static [&'static dyn OrientationEstimator] {
    &REGISTRY
}

/// Looks an estimator up by canonical name or alias (case-sensitive).
pub fn estimator(name: &str) -> Option<&'static dyn OrientationEstimator> {
    REGISTRY
        .iter()
        .find(|e| e.name() == name || e.aliases().contains(&name))
        .copied()
}

/// Like [`estimator`], but produces the error the config and CLI layers
/// report for unknown names.
pub fn estimator_or_err(name: &str) -> Result<&'static dyn OrientationEstimator, FieldError> {
    estimator(name).ok_or_else(|| {
        let known = REGISTRY.iter().map(|e| e.name()).collect::<Vec<_>>().join(", ");
        FieldError::UnknownEstimator(name.to_string(), known)
    })
}
