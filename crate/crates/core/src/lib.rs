//! Deterministic aesthetic guidance for photographs: color, lighting and
//! composition profiles compared against photography templates or a
//! retrieved guidance image.

pub mod annotation;
pub mod composition;
pub mod guidance;
pub mod harmony;
pub mod json;
pub mod lighting;
pub mod raster;
pub mod search;

pub use annotation::{Annotation, AnnotationError, AnnotationSidecar};
pub use guidance::{
    alg_i, alg_t, compare_profiles, profile_image, render_text, route_mode, Attribute,
    AttributeAdvice, AttributeProfile, Delta, GuidanceError, GuidanceReport, GuideConfig, Mode,
    ProfileSidecar, Reference, TemplateSpec, Verdict,
};
pub use raster::{RasterError, RasterImage};
pub use search::{
    build_index, select_guidance, EmbeddingIndex, EmbeddingRecord, QueryResult, SearchError,
};
