//! Composition analysis for landscapes (dominant lines) and portraits
//! (subject placement).

pub mod landscape;
pub mod portrait;

use thiserror::Error;

pub use landscape::{
    classify_landscape_composition, detect_edges, detect_segments, hough_lines, to_segment,
    CompositionBands, EdgeMap, LandscapeComposition, LandscapeKind, LineSegment, PolarLine,
};
pub use portrait::{
    classify_portrait_composition, face_center, portrait_composition_advice, primary_face, Anchor,
    FaceBox, PlacementAdvice, PortraitComposition,
};

#[derive(Debug, Error, PartialEq)]
pub enum CompositionError {
    #[error("expected a 640x426 image, got {width}x{height}")]
    NotCanonical { width: usize, height: usize },
    #[error("line rho={rho} theta={theta} does not cross the frame")]
    OutsideFrame { rho: f64, theta: f64 },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("no lines to classify")]
    NoLines,
    #[error("face box {0:?} is not inside the 640x426 frame")]
    FaceOutsideFrame(portrait::FaceBox),
}
