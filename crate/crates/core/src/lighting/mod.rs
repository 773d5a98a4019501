//! Light direction analysis: azimuthal octants for landscapes and
//! spherical-harmonic light types for portraits.

pub mod landscape;
pub mod portrait;

use thiserror::Error;

pub use landscape::{
    estimate_azimuthal_distribution, landscape_light_report, octant_of, peak_azimuth,
    AzimuthalDistribution, LandscapeLightReport, LightingOctant,
};
pub use portrait::{
    classify_portrait_light, illumination_center, portrait_light_advice, portrait_light_report,
    render_sh, IlluminationMap, PortraitLightAdvice, PortraitLightReport, PortraitLightType,
    ShCoeffs,
};

#[derive(Debug, Error, PartialEq)]
pub enum LightingError {
    #[error("azimuth distribution needs 36 bins, got {0}")]
    BinCount(usize),
    #[error("azimuth bin {bin} has invalid intensity {value}")]
    NegativeIntensity { bin: usize, value: f64 },
    #[error("azimuth distribution carries no light")]
    NoLight,
    #[error("field of view {0} outside (10, 180) degrees")]
    FieldOfView(f64),
    #[error("expected 9 spherical-harmonic coefficients, got {0}")]
    ShCount(usize),
    #[error("spherical-harmonic coefficients must be finite")]
    NonFiniteSh,
    #[error("spherical-harmonic coefficients are all zero")]
    ZeroSh,
    #[error("illumination map has no valid cells")]
    EmptyMask,
}
