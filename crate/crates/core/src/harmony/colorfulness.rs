//! Opponent-channel colorfulness and the seven-level scale built on it.

use serde::{Deserialize, Serialize};

use crate::raster::RasterImage;

/// Lower bounds (8-bit units) of levels 2 through 7.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorfulnessScale {
    pub thresholds: [f64; 6],
}

impl Default for ColorfulnessScale {
    fn default() -> Self {
        Self {
            thresholds: [15.0, 33.0, 45.0, 59.0, 82.0, 109.0],
        }
    }
}

impl ColorfulnessScale {
    pub fn level(&self, m: f64) -> u8 {
        1 + self.thresholds.iter().filter(|&&t| m >= t).count() as u8
    }

    pub fn is_valid(&self) -> bool {
        self.thresholds.windows(2).all(|w| w[0] < w[1])
            && self.thresholds.iter().all(|t| t.is_finite() && *t > 0.0)
    }
}

pub fn level_name(level: u8) -> &'static str {
    match level {
        1 => "not colorful",
        2 => "slightly colorful",
        3 => "moderately colorful",
        4 => "averagely colorful",
        5 => "quite colorful",
        6 => "highly colorful",
        _ => "extremely colorful",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorfulnessReport {
    pub m_value: f64,
    pub level: u8,
}

/// `M = sqrt(var_rg + var_yb) + 0.3 * sqrt(mean_rg^2 + mean_yb^2)`, with
/// `rg = R - G` and `yb = (R + G)/2 - B`, population statistics.
pub fn colorfulness_metric(image: &RasterImage) -> f64 {
    // Welford accumulation over both opponent channels.
    let mut n = 0.0;
    let (mut mean_rg, mut m2_rg) = (0.0, 0.0);
    let (mut mean_yb, mut m2_yb) = (0.0, 0.0);
    for &[r, g, b] in image.pixels() {
        let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
        let rg = r - g;
        let yb = 0.5 * (r + g) - b;
        n += 1.0;
        let d_rg = rg - mean_rg;
        mean_rg += d_rg / n;
        m2_rg += d_rg * (rg - mean_rg);
        let d_yb = yb - mean_yb;
        mean_yb += d_yb / n;
        m2_yb += d_yb * (yb - mean_yb);
    }
    let var_rg = m2_rg / n;
    let var_yb = m2_yb / n;
    (var_rg + var_yb).sqrt() + 0.3 * (mean_rg * mean_rg + mean_yb * mean_yb).sqrt()
}

pub fn colorfulness(image: &RasterImage, scale: &ColorfulnessScale) -> ColorfulnessReport {
    let m_value = colorfulness_metric(image);
    ColorfulnessReport {
        m_value,
        level: scale.level(m_value),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorDirection {
    MoreVivid,
    MoreFrosty,
    Keep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAdvice {
    pub direction: ColorDirection,
    pub magnitude: u8,
}

pub fn color_advice(input: &ColorfulnessReport, reference: &ColorfulnessReport) -> ColorAdvice {
    level_advice(input.level, reference.level)
}

pub fn level_advice(input: u8, reference: u8) -> ColorAdvice {
    let direction = match reference.cmp(&input) {
        std::cmp::Ordering::Greater => ColorDirection::MoreVivid,
        std::cmp::Ordering::Less => ColorDirection::MoreFrosty,
        std::cmp::Ordering::Equal => ColorDirection::Keep,
    };
    ColorAdvice {
        direction,
        magnitude: input.abs_diff(reference),
    }
}
