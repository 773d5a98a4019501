//! Pixel model shared by every analyzer: 8-bit RGB rasters, HSV conversion,
//! saturation-weighted hue histograms and resampling onto the canonical frame.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Width of the canonical analysis frame.
pub const CANONICAL_WIDTH: usize = 640;
/// Height of the canonical analysis frame.
pub const CANONICAL_HEIGHT: usize = 426;

/// Default saturation floor for histogram admission.
pub const DEFAULT_S_MIN: f64 = 0.05;
/// Default value floor for histogram admission.
pub const DEFAULT_V_MIN: f64 = 0.05;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RasterError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("expected {expected} pixels for the given dimensions, got {actual}")]
    PixelCount { expected: usize, actual: usize },
}

/// Row-major 8-bit RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::EmptyDimensions { width, height });
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(RasterError::PixelCount {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with a single color.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self, RasterError> {
        Self::new(width, height, vec![rgb; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self, RasterError> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    /// Interprets a packed `RGBRGB...` buffer.
    pub fn from_rgb_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self, RasterError> {
        if !bytes.len().is_multiple_of(3) {
            return Err(RasterError::PixelCount {
                expected: width * height,
                actual: bytes.len() / 3,
            });
        }
        let pixels = bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn is_canonical(&self) -> bool {
        self.width == CANONICAL_WIDTH && self.height == CANONICAL_HEIGHT
    }

    /// Rec.601 luma per pixel, in 8-bit units.
    pub fn luminance(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| luma(p)).collect()
    }
}

/// Rec.601 luma of one pixel.
pub fn luma([r, g, b]: [u8; 3]) -> f64 {
    0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b)
}

/// Hexcone HSV sample. Hue is stored as 0 for achromatic pixels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsvPixel {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

impl HsvPixel {
    pub fn from_rgb([r, g, b]: [u8; 3]) -> Self {
        let r = f64::from(r) / 255.0;
        let g = f64::from(g) / 255.0;
        let b = f64::from(b) / 255.0;
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let chroma = max - min;
        if max == 0.0 || chroma == 0.0 {
            return Self {
                h: 0.0,
                s: 0.0,
                v: max,
            };
        }
        let sector = if max == r {
            ((g - b) / chroma).rem_euclid(6.0)
        } else if max == g {
            (b - r) / chroma + 2.0
        } else {
            (r - g) / chroma + 4.0
        };
        let mut h = 60.0 * sector;
        if h >= 360.0 {
            h -= 360.0;
        }
        Self {
            h,
            s: chroma / max,
            v: max,
        }
    }

    pub fn to_rgb(self) -> [u8; 3] {
        let chroma = self.v * self.s;
        let sector = self.h.rem_euclid(360.0) / 60.0;
        let x = chroma * (1.0 - (sector.rem_euclid(2.0) - 1.0).abs());
        let (r, g, b) = match sector as u32 {
            0 => (chroma, x, 0.0),
            1 => (x, chroma, 0.0),
            2 => (0.0, chroma, x),
            3 => (0.0, x, chroma),
            4 => (x, 0.0, chroma),
            _ => (chroma, 0.0, x),
        };
        let m = self.v - chroma;
        let to_u8 = |c: f64| ((c + m) * 255.0).round().clamp(0.0, 255.0) as u8;
        [to_u8(r), to_u8(g), to_u8(b)]
    }
}

/// Per-pixel HSV values with the dimensions of the source raster.
#[derive(Clone, Debug, PartialEq)]
pub struct HsvGrid {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<HsvPixel>,
}

impl HsvGrid {
    pub fn get(&self, x: usize, y: usize) -> HsvPixel {
        self.pixels[y * self.width + x]
    }

    pub fn to_rgb(&self) -> RasterImage {
        RasterImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.to_rgb()).collect(),
        }
    }
}

pub fn rgb_to_hsv(image: &RasterImage) -> HsvGrid {
    HsvGrid {
        width: image.width,
        height: image.height,
        pixels: image
            .pixels
            .iter()
            .map(|&p| HsvPixel::from_rgb(p))
            .collect(),
    }
}

/// 360 one-degree hue bins weighted by saturation.
#[derive(Clone, Debug, PartialEq)]
pub struct HueHistogram {
    bins: Vec<f64>,
}

impl Default for HueHistogram {
    fn default() -> Self {
        Self {
            bins: vec![0.0; 360],
        }
    }
}

impl HueHistogram {
    /// Histogram from explicit bin weights. Negative or non-finite weights
    /// are clamped to zero.
    pub fn from_bins(bins: [f64; 360]) -> Self {
        Self {
            bins: bins
                .iter()
                .map(|&w| if w.is_finite() && w > 0.0 { w } else { 0.0 })
                .collect(),
        }
    }

    pub fn add(&mut self, hue: f64, weight: f64) {
        let bin = (hue.rem_euclid(360.0).floor() as usize).min(359);
        self.bins[bin] += weight;
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn total_mass(&self) -> f64 {
        self.bins.iter().sum()
    }

    /// `(bin index, weight)` for every bin carrying mass, in bin order.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.bins
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(b, &w)| (b, w))
    }

    /// Same mass moved by a whole number of degrees.
    pub fn rotated(&self, degrees: i32) -> Self {
        let mut bins = vec![0.0; 360];
        for (b, &w) in self.bins.iter().enumerate() {
            let to = (b as i32 + degrees).rem_euclid(360) as usize;
            bins[to] = w;
        }
        Self { bins }
    }
}

/// Accumulates saturation into `bin[floor(h)]` for pixels passing both floors.
/// Pixels are visited in row-major order so the sum is reproducible.
pub fn hue_histogram(hsv: &HsvGrid, s_min: f64, v_min: f64) -> HueHistogram {
    let mut hist = HueHistogram::default();
    for p in &hsv.pixels {
        if p.s >= s_min && p.v >= v_min && p.s > 0.0 {
            hist.add(p.h, p.s);
        }
    }
    hist
}

/// Bilinear resample to `width`x`height` using pixel-center alignment.
pub fn resize_bilinear(image: &RasterImage, width: usize, height: usize) -> RasterImage {
    assert!(width > 0 && height > 0, "target size must be non-empty");
    if image.width == width && image.height == height {
        return image.clone();
    }
    let sx = image.width as f64 / width as f64;
    let sy = image.height as f64 / height as f64;
    let max_x = (image.width - 1) as f64;
    let max_y = (image.height - 1) as f64;

    // Precompute horizontal taps; they are shared by every row.
    let taps_x: Vec<(usize, usize, f64)> = (0..width)
        .map(|x| {
            let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, max_x);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(image.width - 1);
            (x0, x1, fx - x0 as f64)
        })
        .collect();

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, max_y);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(image.height - 1);
        let ty = fy - y0 as f64;
        for &(x0, x1, tx) in &taps_x {
            let p00 = image.get(x0, y0);
            let p10 = image.get(x1, y0);
            let p01 = image.get(x0, y1);
            let p11 = image.get(x1, y1);
            let mut out = [0u8; 3];
            for c in 0..3 {
                let top = f64::from(p00[c]) * (1.0 - tx) + f64::from(p10[c]) * tx;
                let bottom = f64::from(p01[c]) * (1.0 - tx) + f64::from(p11[c]) * tx;
                let v = top * (1.0 - ty) + bottom * ty;
                out[c] = v.round().clamp(0.0, 255.0) as u8;
            }
            pixels.push(out);
        }
    }
    RasterImage {
        width,
        height,
        pixels,
    }
}

/// Resample onto the 640x426 analysis frame. Canonical inputs are returned unchanged.
pub fn resize_canonical(image: &RasterImage) -> RasterImage {
    resize_bilinear(image, CANONICAL_WIDTH, CANONICAL_HEIGHT)
}
