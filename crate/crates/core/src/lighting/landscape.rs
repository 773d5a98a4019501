//! Horizontal light direction for landscapes.
//!
//! Azimuth convention: 0° is light from directly behind the camera (front
//! light on the subject) and angles grow clockwise seen from above, so 90° is
//! light arriving from the subject's right and 180° is back light.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::LightingError;
use crate::harmony::signed_arc;
use crate::json::round_sig9;
use crate::raster::{resize_canonical, RasterImage, CANONICAL_HEIGHT, CANONICAL_WIDTH};

pub const AZIMUTH_BINS: usize = 36;
pub const BIN_DEGREES: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AzimuthalDistribution {
    bins: Vec<f64>,
}

impl AzimuthalDistribution {
    pub fn new(bins: Vec<f64>) -> Result<Self, LightingError> {
        if bins.len() != AZIMUTH_BINS {
            return Err(LightingError::BinCount(bins.len()));
        }
        if let Some((i, &v)) = bins
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(LightingError::NegativeIntensity { bin: i, value: v });
        }
        Ok(Self { bins })
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            bins: self.bins.iter().map(|b| b * factor).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LightingOctant {
    Front,
    RightFront,
    Right,
    RightBack,
    Back,
    LeftBack,
    Left,
    LeftFront,
}

impl LightingOctant {
    pub const ALL: [LightingOctant; 8] = [
        LightingOctant::Front,
        LightingOctant::RightFront,
        LightingOctant::Right,
        LightingOctant::RightBack,
        LightingOctant::Back,
        LightingOctant::LeftBack,
        LightingOctant::Left,
        LightingOctant::LeftFront,
    ];

    pub fn center(self) -> f64 {
        45.0 * self.index() as f64
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&o| o == self).unwrap_or(0)
    }

    /// Human name, e.g. "left front light".
    pub fn phrase(self) -> &'static str {
        match self {
            LightingOctant::Front => "front light",
            LightingOctant::RightFront => "right front light",
            LightingOctant::Right => "right light",
            LightingOctant::RightBack => "right back light",
            LightingOctant::Back => "back light",
            LightingOctant::LeftBack => "left back light",
            LightingOctant::Left => "left light",
            LightingOctant::LeftFront => "left front light",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let norm = norm.strip_suffix("light").unwrap_or(&norm);
        Self::ALL.iter().copied().find(|o| {
            o.phrase()
                .replace(' ', "")
                .strip_suffix("light")
                .is_some_and(|p| p == norm)
        })
    }
}

impl fmt::Display for LightingOctant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phrase())
    }
}

/// Octant whose center is nearest to `theta`. A boundary at `22.5 + 45k`
/// belongs to the octant with the lower center.
pub fn octant_of(theta: f64) -> LightingOctant {
    let t = theta.rem_euclid(360.0);
    let k = ((t - 22.5) / 45.0).ceil().rem_euclid(8.0) as usize;
    LightingOctant::ALL[k]
}

/// Center angle of the strongest bin; the lowest index wins ties.
pub fn peak_azimuth(dist: &AzimuthalDistribution) -> Result<f64, LightingError> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &v) in dist.bins.iter().enumerate() {
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    best.map(|(k, _)| BIN_DEGREES * k as f64 + BIN_DEGREES / 2.0)
        .ok_or(LightingError::NoLight)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeLightReport {
    pub octant: LightingOctant,
    pub theta_max: f64,
    /// Signed shortest arc from the octant center to `theta_max`.
    pub delta: f64,
}

pub fn landscape_light_report(
    dist: &AzimuthalDistribution,
) -> Result<LandscapeLightReport, LightingError> {
    let theta_max = peak_azimuth(dist)?;
    let octant = octant_of(theta_max);
    Ok(LandscapeLightReport {
        octant,
        theta_max,
        delta: signed_arc(octant.center(), theta_max),
    })
}

pub const DEFAULT_FOV: f64 = 60.0;

/// Image-only fallback: bright sky columns in the top third are read as a
/// light source in the back hemisphere. Column `c` maps to azimuth
/// `180 + (c/639 - 0.5) * fov`; each bin holds the mean luminance of the
/// columns that fall into it.
pub fn estimate_azimuthal_distribution(
    image: &RasterImage,
    fov: f64,
) -> Result<AzimuthalDistribution, LightingError> {
    if !(fov > 10.0 && fov < 180.0) {
        return Err(LightingError::FieldOfView(fov));
    }
    let canonical = resize_canonical(image);
    let sky_rows = CANONICAL_HEIGHT / 3;
    let luma = canonical.luminance();

    let mut sums = [0.0f64; AZIMUTH_BINS];
    let mut counts = [0usize; AZIMUTH_BINS];
    for c in 0..CANONICAL_WIDTH {
        let column_mean = (0..sky_rows)
            .map(|r| luma[r * CANONICAL_WIDTH + c])
            .sum::<f64>()
            / sky_rows as f64;
        let azimuth =
            (180.0 + (c as f64 / (CANONICAL_WIDTH - 1) as f64 - 0.5) * fov).rem_euclid(360.0);
        let bin = ((azimuth / BIN_DEGREES).floor() as usize).min(AZIMUTH_BINS - 1);
        sums[bin] += column_mean;
        counts[bin] += 1;
    }
    // Rounding to 9 significant digits keeps summation noise from breaking
    // ties between bins that see the same sky.
    let bins = sums
        .iter()
        .zip(counts)
        .map(|(s, n)| {
            if n == 0 {
                0.0
            } else {
                round_sig9(s / n as f64)
            }
        })
        .collect();
    AzimuthalDistribution::new(bins)
}
