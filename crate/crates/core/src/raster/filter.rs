//! Separable Gaussian filtering and derivative-of-Gaussian gradients.
//!
//! All convolutions replicate the border pixel outside the image, so a
//! constant image is a fixed point of blurring and gradients near the edge
//! stay bounded.

use super::{ColorImage, RasterError, ScalarImage};

/// Sampled 1-D Gaussian, truncated at `radius = ceil(3 sigma)` and
/// renormalized so the taps sum to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
    radius: usize,
    taps: Vec<f64>,
}

impl GaussianKernel {
    /// Builds a smoothing kernel.
    ///
    /// # Errors
    /// Returns [`RasterError::InvalidParameter`] unless `sigma` is finite
    /// and positive.
    pub fn new(sigma: f64) -> Result<Self, RasterError> {
        let radius = Self::checked_radius(sigma)?;
        let mut taps: Vec<f64> = (-(radius as i64)..=radius as i64)
            .map(|j| (-((j * j) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= sum;
        }
        Ok(Self { sigma, radius, taps })
    }

    /// Builds the matching derivative kernel. Taps are antisymmetric
    /// (`sum = 0` by construction) and scaled so the response to a unit ramp
    /// is exactly 1, which removes the truncation bias of the raw sampled
    /// derivative-of-Gaussian.
    pub fn derivative(sigma: f64) -> Result<Self, RasterError> {
        let radius = Self::checked_radius(sigma)?;
        let mut taps: Vec<f64> = (-(radius as i64)..=radius as i64)
            .map(|j| j as f64 * (-((j * j) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        // Ramp response = sum_j j * tap[j]; force it to 1.
        let ramp: f64 = taps
            .iter()
            .enumerate()
            .map(|(i, t)| (i as f64 - radius as f64) * t)
            .sum();
        for t in &mut taps {
            *t /= ramp;
        }
        Ok(Self { sigma, radius, taps })
    }

    fn checked_radius(sigma: f64) -> Result<usize, RasterError> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(RasterError::InvalidParameter(format!(
                "kernel sigma must be finite and positive, got {sigma}"
            )));
        }
        Ok((3.0 * sigma).ceil() as usize)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Taps indexed `0..=2*radius`, centre at index `radius`.
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }
}

/// Correlates one row/column direction of `src` with `kernel`, replicating
/// edge pixels. `horizontal` selects the scan direction.
fn convolve_1d(src: &ScalarImage, kernel: &GaussianKernel, horizontal: bool) -> ScalarImage {
    let (w, h) = (src.width(), src.height());
    let r = kernel.radius() as i64;
    let taps = kernel.taps();
    let mut out = ScalarImage::new(w, h, 0.0);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &t) in taps.iter().enumerate() {
                let off = k as i64 - r;
                let (sx, sy) = if horizontal {
                    ((x as i64 + off).clamp(0, w as i64 - 1), y as i64)
                } else {
                    (x as i64, (y as i64 + off).clamp(0, h as i64 - 1))
                };
                acc += t * src.get(sx as usize, sy as usize);
            }
            out.set(x, y, acc);
        }
    }
    out
}

/// Gaussian blur by separable convolution (rows, then columns).
///
/// # Errors
/// Returns [`RasterError::InvalidParameter`] unless `sigma` is finite and
/// positive.
pub fn gaussian_blur(img: &ScalarImage, sigma: f64) -> Result<ScalarImage, RasterError> {
    let kernel = GaussianKernel::new(sigma)?;
    Ok(convolve_1d(&convolve_1d(img, &kernel, true), &kernel, false))
}

/// Per-channel Gaussian blur of an RGB image.
///
/// # Errors
/// Returns [`RasterError::InvalidParameter`] unless `sigma` is finite and
/// positive.
pub fn gaussian_blur_color(img: &ColorImage, sigma: f64) -> Result<ColorImage, RasterError> {
    let kernel = GaussianKernel::new(sigma)?;
    let mut out = img.clone();
    for c in 0..3 {
        let plane = ScalarImage::from_vec(img.width(), img.height(), img.plane(c).to_vec());
        let blurred = convolve_1d(&convolve_1d(&plane, &kernel, true), &kernel, false);
        *out.plane_mut(c) = blurred.data().to_vec();
    }
    Ok(out)
}

/// Derivative-of-Gaussian gradient: `(I_x, I_y)` at scale `sigma_d`.
///
/// `I_x` is positive where intensity increases with x (columns), `I_y` where
/// it increases with y (rows).
///
/// # Errors
/// Returns [`RasterError::InvalidParameter`] unless `sigma_d` is finite and
/// positive.
pub fn gradient(img: &ScalarImage, sigma_d: f64) -> Result<(ScalarImage, ScalarImage), RasterError> {
    let smooth = GaussianKernel::new(sigma_d)?;
    let deriv = GaussianKernel::derivative(sigma_d)?;
    let ix = convolve_1d(&convolve_1d(img, &deriv, true), &smooth, false);
    let iy = convolve_1d(&convolve_1d(img, &smooth, true), &deriv, false);
    Ok((ix, iy))
}
