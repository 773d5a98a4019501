//! Portrait lighting from order-2 spherical-harmonic coefficients.
//!
//! The coefficients are rendered orthographically onto a 256x256 disk
//! (front hemisphere), the brightest cell is taken as the illumination
//! center, and the center is matched against three canonical setups.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::LightingError;

pub const CANVAS: usize = 256;

/// Canonical illumination centers as `(row, col)` on the 256x256 canvas.
pub const REMBRANDT_CENTER: (usize, usize) = (82, 172);
pub const BUTTERFLY_CENTER: (usize, usize) = (63, 127);
pub const LOWER_CENTER: (usize, usize) = (191, 127);

/// Similarity above which the lighting counts as matching its type.
pub const SIMILARITY_THRESHOLD: f64 = 0.9;

/// Nine coefficients ordered (0,0), (1,-1), (1,0), (1,1), (2,-2), (2,-1),
/// (2,0), (2,1), (2,2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShCoeffs(pub [f64; 9]);

impl ShCoeffs {
    pub fn new(values: &[f64]) -> Result<Self, LightingError> {
        let arr: [f64; 9] = values
            .try_into()
            .map_err(|_| LightingError::ShCount(values.len()))?;
        if arr.iter().any(|v| !v.is_finite()) {
            return Err(LightingError::NonFiniteSh);
        }
        Ok(Self(arr))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

/// Real SH basis for unit direction `(x, y, z)`.
pub fn sh_basis(x: f64, y: f64, z: f64) -> [f64; 9] {
    [
        0.282095,
        0.488603 * y,
        0.488603 * z,
        0.488603 * x,
        1.092548 * x * y,
        1.092548 * y * z,
        0.315392 * (3.0 * z * z - 1.0),
        1.092548 * x * z,
        0.546274 * (x * x - y * y),
    ]
}

pub fn eval_sh(coeffs: &ShCoeffs, x: f64, y: f64, z: f64) -> f64 {
    sh_basis(x, y, z)
        .iter()
        .zip(coeffs.0.iter())
        .map(|(b, c)| b * c)
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IlluminationMap {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl IlluminationMap {
    pub fn value(&self, row: usize, col: usize) -> Option<f64> {
        let i = row * CANVAS + col;
        self.mask[i].then(|| self.values[i])
    }
}

fn cell_direction(row: usize, col: usize) -> Option<(f64, f64, f64)> {
    let half = (CANVAS as f64 - 1.0) / 2.0;
    let x = (col as f64 - half) / half;
    let y = (half - row as f64) / half;
    let r2 = x * x + y * y;
    (r2 <= 1.0).then(|| (x, y, (1.0 - r2).sqrt()))
}

pub fn render_sh(coeffs: &ShCoeffs) -> IlluminationMap {
    let mut values = vec![0.0; CANVAS * CANVAS];
    let mut mask = vec![false; CANVAS * CANVAS];
    for row in 0..CANVAS {
        for col in 0..CANVAS {
            if let Some((x, y, z)) = cell_direction(row, col) {
                let i = row * CANVAS + col;
                values[i] = eval_sh(coeffs, x, y, z);
                mask[i] = true;
            }
        }
    }
    IlluminationMap { values, mask }
}

/// Brightest valid cell; ties go to the smallest row, then column.
pub fn illumination_center(map: &IlluminationMap) -> Result<(usize, usize), LightingError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (&v, &valid)) in map.values.iter().zip(&map.mask).enumerate() {
        if valid && best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| (i / CANVAS, i % CANVAS))
        .ok_or(LightingError::EmptyMask)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortraitLightType {
    Rembrandt,
    Butterfly,
    Lower,
}

impl PortraitLightType {
    /// Priority order used to break distance ties.
    pub const ALL: [PortraitLightType; 3] = [
        PortraitLightType::Rembrandt,
        PortraitLightType::Butterfly,
        PortraitLightType::Lower,
    ];

    pub fn center(self) -> (usize, usize) {
        match self {
            PortraitLightType::Rembrandt => REMBRANDT_CENTER,
            PortraitLightType::Butterfly => BUTTERFLY_CENTER,
            PortraitLightType::Lower => LOWER_CENTER,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PortraitLightType::Rembrandt => "Rembrandt",
            PortraitLightType::Butterfly => "butterfly",
            PortraitLightType::Lower => "lower",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            PortraitLightType::Rembrandt => {
                "light from high at one side, splitting the face into a lit half and a shadowed half"
            }
            PortraitLightType::Butterfly => {
                "light from high in front, casting a small shadow under the nose"
            }
            PortraitLightType::Lower => "light from below the face, lighting the chin and underside",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rembrandt" => Some(Self::Rembrandt),
            "butterfly" => Some(Self::Butterfly),
            "lower" | "bottom" => Some(Self::Lower),
            _ => None,
        }
    }
}

impl fmt::Display for PortraitLightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitLightReport {
    pub light_type: PortraitLightType,
    pub center: (usize, usize),
    pub similarity: f64,
}

fn cell_distance(a: (usize, usize), b: (usize, usize)) -> f64 {
    let dr = a.0 as f64 - b.0 as f64;
    let dc = a.1 as f64 - b.1 as f64;
    (dr * dr + dc * dc).sqrt()
}

/// `1 - d / (256 * sqrt 2)`.
pub fn similarity(center: (usize, usize), canonical: (usize, usize)) -> f64 {
    1.0 - cell_distance(center, canonical) / (CANVAS as f64 * std::f64::consts::SQRT_2)
}

pub fn classify_portrait_light(center: (usize, usize)) -> PortraitLightReport {
    let mut best = PortraitLightType::ALL[0];
    let mut best_d = cell_distance(center, best.center());
    for t in &PortraitLightType::ALL[1..] {
        let d = cell_distance(center, t.center());
        if d < best_d {
            best = *t;
            best_d = d;
        }
    }
    PortraitLightReport {
        light_type: best,
        center,
        similarity: similarity(center, best.center()),
    }
}

pub fn portrait_light_report(coeffs: &ShCoeffs) -> Result<PortraitLightReport, LightingError> {
    if coeffs.is_zero() {
        return Err(LightingError::ZeroSh);
    }
    Ok(classify_portrait_light(illumination_center(&render_sh(
        coeffs,
    ))?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortraitLightVerdict {
    Keep,
    Strengthen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitLightAdvice {
    pub light_type: PortraitLightType,
    pub verdict: PortraitLightVerdict,
    pub sentence: String,
}

pub fn portrait_light_advice(report: &PortraitLightReport) -> PortraitLightAdvice {
    let t = report.light_type;
    if report.similarity > SIMILARITY_THRESHOLD {
        PortraitLightAdvice {
            light_type: t,
            verdict: PortraitLightVerdict::Keep,
            sentence: format!("The lighting is close to {} lighting, keep it.", t.name()),
        }
    } else {
        PortraitLightAdvice {
            light_type: t,
            verdict: PortraitLightVerdict::Strengthen,
            sentence: format!(
                "Strengthen the characteristics of {} lighting: {}.",
                t.name(),
                t.description()
            ),
        }
    }
}
