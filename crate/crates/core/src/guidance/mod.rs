//! Profiling, template and guidance-image comparison, and report rendering.

pub mod compare;
pub mod config;
pub mod profile;
pub mod report;
pub mod template;
pub mod text;

use thiserror::Error;

pub use compare::{
    compare_profiles, render_text, Attribute, AttributeAdvice, Delta, Reference, Verdict,
};
pub use config::{AnalysisSettings, GuideConfig, Tolerances};
pub use profile::{
    profile_image, route_mode, AttributeProfile, ColorProfile, CompositionProfile, LightingProfile,
    Mode,
};
pub use report::{alg_i, alg_t, GuidanceReport, ProfileSidecar};
pub use template::{CompositionTarget, LightingTarget, TemplateSpec};
pub use text::Sentences;

use crate::search::SearchError;

#[derive(Debug, Error)]
pub enum GuidanceError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("mode mismatch: input is {input}, reference is {reference}")]
    ModeMismatch { input: Mode, reference: Mode },
    #[error("annotation has no embedding")]
    MissingEmbedding,
    #[error("no stored profile for guidance image {0:?}")]
    MissingProfile(String),
    #[error("profile sidecar: {0}")]
    Profiles(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}
