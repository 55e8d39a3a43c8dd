//! Image containers and the low-level pixel operations the rest of the
//! pipeline builds on: decoding, greyscale conversion, Gaussian filtering,
//! derivative-of-Gaussian gradients, bilinear sampling, and resampling.
//!
//! Pixel values are stored as `f64` in the `[0, 255]` range so repeated
//! filtering does not accumulate quantization error; conversion to 8-bit
//! happens only at encode time. Coordinates are `(x, y) = (column, row)`
//! with the origin at the centre of the top-left pixel, so the sampleable
//! domain of a `w x h` image is `[0, w-1] x [0, h-1]`.

mod filter;
mod resample;

pub use filter::{gaussian_blur, gaussian_blur_color, gradient, GaussianKernel};
pub use resample::resample;

use thiserror::Error;

/// Errors from image construction, decoding, and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RasterError {
    #[error("image decode failed: {0}")]
    Decode(String),
    #[error("image encode failed: {0}")]
    Encode(String),
    #[error("sample point ({x}, {y}) lies outside the image domain")]
    OutOfBounds { x: f64, y: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Single-channel image, row-major `f64` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarImage {
    /// Creates an image filled with `fill`.
    ///
    /// # Panics
    /// Panics if either dimension is zero.
    pub fn new(width: usize, height: usize, fill: f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self { width, height, data: vec![fill; width * height] }
    }

    /// Wraps existing row-major data.
    ///
    /// # Panics
    /// Panics if `data.len() != width * height` or either dimension is zero.
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        assert_eq!(data.len(), width * height, "data length must match dimensions");
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = v;
    }

    /// Bilinear interpolation at a continuous point.
    ///
    /// # Errors
    /// Returns [`RasterError::OutOfBounds`] when `(x, y)` lies outside
    /// `[0, width-1] x [0, height-1]` (NaN coordinates included).
    pub fn bilinear_sample(&self, x: f64, y: f64) -> Result<f64, RasterError> {
        let (x0, y0, fx, fy) = bilinear_cell(self.width, self.height, x, y)?;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bot = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        Ok(top * (1.0 - fy) + bot * fy)
    }
}

/// RGB image stored as three planes, values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    planes: [Vec<f64>; 3],
}

/// An RGB triple in `[0, 255]`.
pub type Rgb = [f64; 3];

impl ColorImage {
    /// Creates an image filled with a solid colour.
    ///
    /// # Panics
    /// Panics if either dimension is zero.
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let n = width * height;
        Self {
            width,
            height,
            planes: [vec![fill[0]; n], vec![fill[1]; n], vec![fill[2]; n]],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Rgb {
        debug_assert!(x < self.width && y < self.height);
        let i = y * self.width + x;
        [self.planes[0][i], self.planes[1][i], self.planes[2][i]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, px: Rgb) {
        debug_assert!(x < self.width && y < self.height);
        let i = y * self.width + x;
        self.planes[0][i] = px[0];
        self.planes[1][i] = px[1];
        self.planes[2][i] = px[2];
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        &self.planes[c]
    }

    pub(crate) fn plane_mut(&mut self, c: usize) -> &mut Vec<f64> {
        &mut self.planes[c]
    }

    /// Per-channel bilinear interpolation; same domain rules as
    /// [`ScalarImage::bilinear_sample`].
    ///
    /// # Errors
    /// Returns [`RasterError::OutOfBounds`] outside the sampleable domain.
    pub fn bilinear_sample(&self, x: f64, y: f64) -> Result<Rgb, RasterError> {
        let (x0, y0, fx, fy) = bilinear_cell(self.width, self.height, x, y)?;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let mut out = [0.0; 3];
        for (c, plane) in self.planes.iter().enumerate() {
            let at = |px: usize, py: usize| plane[py * self.width + px];
            let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
            let bot = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
            out[c] = top * (1.0 - fy) + bot * fy;
        }
        Ok(out)
    }

    /// Rec. 601 luma: `0.299 R + 0.587 G + 0.114 B`.
    pub fn to_greyscale(&self) -> ScalarImage {
        let n = self.width * self.height;
        let mut data = Vec::with_capacity(n);
        for i in 0..n {
            data.push(
                0.299 * self.planes[0][i] + 0.587 * self.planes[1][i] + 0.114 * self.planes[2][i],
            );
        }
        ScalarImage::from_vec(self.width, self.height, data)
    }
}

/// Shared bilinear setup: validates the domain and returns the integer cell
/// origin plus fractional offsets.
fn bilinear_cell(
    width: usize,
    height: usize,
    x: f64,
    y: f64,
) -> Result<(usize, usize, f64, f64), RasterError> {
    let xmax = (width - 1) as f64;
    let ymax = (height - 1) as f64;
    // Negated comparison so NaN also lands in the error branch.
    if !(x >= 0.0 && x <= xmax && y >= 0.0 && y <= ymax) {
        return Err(RasterError::OutOfBounds { x, y });
    }
    let x0 = (x.floor() as usize).min(width.saturating_sub(2));
    let y0 = (y.floor() as usize).min(height.saturating_sub(2));
    Ok((x0, y0, x - x0 as f64, y - y0 as f64))
}

/// Decodes PNG or JPEG bytes into a [`ColorImage`]. Alpha, when present, is
/// composited over white.
///
/// # Errors
/// Returns [`RasterError::Decode`] for malformed or unsupported input and
/// for images with a zero dimension.
pub fn decode_image(bytes: &[u8]) -> Result<ColorImage, RasterError> {
    let decoded = image::load_from_memory(bytes).map_err(|e| RasterError::Decode(e.to_string()))?;
    let rgba = decoded.to_rgba8();
    let (w, h) = (rgba.width() as usize, rgba.height() as usize);
    if w == 0 || h == 0 {
        return Err(RasterError::Decode("image has a zero dimension".into()));
    }
    let mut out = ColorImage::new(w, h, [0.0; 3]);
    for (x, y, px) in rgba.enumerate_pixels() {
        let a = px[3] as f64 / 255.0;
        let over = |c: u8| a * c as f64 + (1.0 - a) * 255.0;
        out.set(x as usize, y as usize, [over(px[0]), over(px[1]), over(px[2])]);
    }
    Ok(out)
}

/// Encodes a [`ColorImage`] as 8-bit RGB PNG bytes. Channels are clamped to
/// `[0, 255]` and rounded.
///
/// # Errors
/// Returns [`RasterError::Encode`] if the PNG encoder fails.
pub fn encode_png(img: &ColorImage) -> Result<Vec<u8>, RasterError> {
    let quantize = |v: f64| v.clamp(0.0, 255.0).round() as u8;
    let mut rgb = image::RgbImage::new(img.width() as u32, img.height() as u32);
    for y in 0..img.height() {
        for x in 0..img.width() {
            let px = img.get(x, y);
            rgb.put_pixel(x as u32, y as u32, image::Rgb([quantize(px[0]), quantize(px[1]), quantize(px[2])]));
        }
    }
    let mut bytes = Vec::new();
    rgb.write_to(&mut std::io::Cursor::new(&mut bytes), image::ImageFormat::Png)
        .map_err(|e| RasterError::Encode(e.to_string()))?;
    Ok(bytes)
}
