//! Resolution changes for the coarse-to-fine painting layers.
//!
//! `factor` is a resolution divisor: a 100x60 image resampled by 10 becomes
//! 10x6, and by 0.5 becomes 200x120. Downsampling applies a Gaussian
//! anti-alias prefilter with `sigma = factor / 2` before bilinear sampling;
//! upsampling is plain bilinear.

use super::filter::gaussian_blur_color;
use super::{ColorImage, RasterError};

/// Resamples `img` by the resolution divisor `factor`. Output dimensions are
/// `max(1, round(dim / factor))`; `factor = 1` returns the image unchanged.
///
/// # Errors
/// Returns [`RasterError::InvalidParameter`] unless `factor` is finite and
/// positive.
pub fn resample(img: &ColorImage, factor: f64) -> Result<ColorImage, RasterError> {
    if !factor.is_finite() || factor <= 0.0 {
        return Err(RasterError::InvalidParameter(format!(
            "resample factor must be finite and positive, got {factor}"
        )));
    }
    let dim = |n: usize| ((n as f64 / factor).round() as usize).max(1);
    let (w_out, h_out) = (dim(img.width()), dim(img.height()));

    let filtered;
    let src = if factor > 1.0 {
        filtered = gaussian_blur_color(img, factor / 2.0)?;
        &filtered
    } else {
        img
    };

    // Centre-aligned mapping: output pixel centres sample the source at the
    // equivalent relative position, clamped into the sampleable domain.
    let sx = img.width() as f64 / w_out as f64;
    let sy = img.height() as f64 / h_out as f64;
    let mut out = ColorImage::new(w_out, h_out, [0.0; 3]);
    for y in 0..h_out {
        let src_y = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (img.height() - 1) as f64);
        for x in 0..w_out {
            let src_x = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (img.width() - 1) as f64);
            // In-domain by construction, so sampling cannot fail.
            let px = src.bilinear_sample(src_x, src_y).expect("clamped sample in domain");
            out.set(x, y, px);
        }
    }
    Ok(out)
}
