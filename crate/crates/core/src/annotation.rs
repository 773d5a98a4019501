//! Per-image annotation sidecar: externally computed model outputs
//! (embedding, aesthetic score, face boxes, SH lighting, azimuth intensity,
//! semantic lines) that the analyzers consume.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composition::{FaceBox, LineSegment};
use crate::lighting::{AzimuthalDistribution, LightingError, ShCoeffs};
use crate::raster::{CANONICAL_HEIGHT, CANONICAL_WIDTH};

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("malformed annotation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("annotation id must be non-empty")]
    EmptyId,
    #[error("embedding must be non-empty and finite")]
    BadEmbedding,
    #[error("aesthetic_score must be finite")]
    BadScore,
    #[error("faces[{index}]: box {x},{y} {w}x{h} is not inside the 640x426 frame")]
    BadFace {
        index: usize,
        x: u32,
        y: u32,
        w: u32,
        h: u32,
    },
    #[error("sh_coeffs: {0}")]
    Sh(LightingError),
    #[error("azimuth_intensity: {0}")]
    Azimuth(LightingError),
    #[error("semantic_lines[{index}]: {reason}")]
    BadLine { index: usize, reason: String },
}

/// Raw sidecar document. Unknown fields are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnotationSidecar {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<f32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aesthetic_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceBox>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sh_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azimuth_intensity: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantic_lines: Option<Vec<[[i32; 2]; 2]>>,
}

/// Sidecar whose present fields passed their owning module's checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Annotation {
    pub id: String,
    pub embedding: Option<Vec<f32>>,
    pub aesthetic_score: Option<f64>,
    pub faces: Vec<FaceBox>,
    pub sh_coeffs: Option<ShCoeffs>,
    pub azimuth: Option<AzimuthalDistribution>,
    pub semantic_lines: Option<Vec<LineSegment>>,
}

impl Annotation {
    /// An annotation that carries nothing but an id.
    pub fn bare(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ..Self::default()
        }
    }
}

impl AnnotationSidecar {
    pub fn from_json(text: &str) -> Result<Self, AnnotationError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<Annotation, AnnotationError> {
        if self.id.trim().is_empty() {
            return Err(AnnotationError::EmptyId);
        }
        if let Some(e) = &self.embedding {
            if e.is_empty() || e.iter().any(|v| !v.is_finite()) {
                return Err(AnnotationError::BadEmbedding);
            }
        }
        if self.aesthetic_score.is_some_and(|s| !s.is_finite()) {
            return Err(AnnotationError::BadScore);
        }
        let faces = self.faces.clone().unwrap_or_default();
        for (index, f) in faces.iter().enumerate() {
            if f.validate().is_err() {
                return Err(AnnotationError::BadFace {
                    index,
                    x: f.x,
                    y: f.y,
                    w: f.w,
                    h: f.h,
                });
            }
        }
        let sh_coeffs = self
            .sh_coeffs
            .as_deref()
            .map(ShCoeffs::new)
            .transpose()
            .map_err(AnnotationError::Sh)?;
        let azimuth = self
            .azimuth_intensity
            .clone()
            .map(AzimuthalDistribution::new)
            .transpose()
            .map_err(AnnotationError::Azimuth)?;
        let semantic_lines = self
            .semantic_lines
            .as_ref()
            .map(|lines| {
                lines
                    .iter()
                    .enumerate()
                    .map(|(index, &[a, b])| border_segment(index, a, b))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        Ok(Annotation {
            id: self.id.clone(),
            embedding: self.embedding.clone(),
            aesthetic_score: self.aesthetic_score,
            faces,
            sh_coeffs,
            azimuth,
            semantic_lines,
        })
    }
}

/// Extends an in-frame segment to the frame border.
fn border_segment(index: usize, a: [i32; 2], b: [i32; 2]) -> Result<LineSegment, AnnotationError> {
    let inside = |p: [i32; 2]| {
        (0..CANONICAL_WIDTH as i32).contains(&p[0]) && (0..CANONICAL_HEIGHT as i32).contains(&p[1])
    };
    if !inside(a) || !inside(b) {
        return Err(AnnotationError::BadLine {
            index,
            reason: "endpoint outside the 640x426 frame".into(),
        });
    }
    let seg = LineSegment::new((a[0], a[1]), (b[0], b[1]));
    let polar = seg.to_polar().map_err(|e| AnnotationError::BadLine {
        index,
        reason: e.to_string(),
    })?;
    crate::composition::to_segment(&polar).map_err(|e| AnnotationError::BadLine {
        index,
        reason: e.to_string(),
    })
}
