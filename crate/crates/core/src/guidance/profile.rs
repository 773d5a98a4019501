//! Three-attribute profile of one image.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::GuideConfig;
use crate::annotation::Annotation;
use crate::composition::{
    classify_landscape_composition, classify_portrait_composition, detect_segments, face_center,
    primary_face, LandscapeComposition, PortraitComposition,
};
use crate::harmony::{best_palette_in, colorfulness, ColorfulnessReport, HarmonyFit};
use crate::lighting::{
    estimate_azimuthal_distribution, landscape_light_report, portrait_light_report,
    LandscapeLightReport, PortraitLightReport,
};
use crate::raster::{hue_histogram, resize_canonical, rgb_to_hsv, RasterImage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Landscape,
    Portrait,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Landscape => "landscape",
            Mode::Portrait => "portrait",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "landscape" => Some(Mode::Landscape),
            "portrait" => Some(Mode::Portrait),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ColorProfile {
    Available {
        colorfulness: ColorfulnessReport,
        harmony: HarmonyFit,
    },
    Unavailable {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LightingProfile {
    Landscape(LandscapeLightReport),
    Portrait(PortraitLightReport),
    Unavailable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CompositionProfile {
    Landscape(LandscapeComposition),
    Portrait(PortraitComposition),
    Unavailable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeProfile {
    pub mode: Mode,
    pub color: ColorProfile,
    pub lighting: LightingProfile,
    pub composition: CompositionProfile,
}

impl AttributeProfile {
    /// Lighting and composition variants agree with `mode`.
    pub fn is_consistent(&self) -> bool {
        let lighting_ok = matches!(
            (&self.lighting, self.mode),
            (LightingProfile::Landscape(_), Mode::Landscape)
                | (LightingProfile::Portrait(_), Mode::Portrait)
                | (LightingProfile::Unavailable { .. }, _)
        );
        let composition_ok = matches!(
            (&self.composition, self.mode),
            (CompositionProfile::Landscape(_), Mode::Landscape)
                | (CompositionProfile::Portrait(_), Mode::Portrait)
                | (CompositionProfile::Unavailable { .. }, _)
        );
        lighting_ok && composition_ok
    }
}

/// Portrait iff at least one face box is present, unless overridden.
pub fn route_mode(annotation: &Annotation, forced: Option<Mode>) -> Mode {
    forced.unwrap_or(if annotation.faces.is_empty() {
        Mode::Landscape
    } else {
        Mode::Portrait
    })
}

/// Profiles an image. Missing annotation fields fall back to the image-only
/// estimators where those exist; otherwise the attribute is marked
/// unavailable. `image` may be absent when only annotations are at hand.
pub fn profile_image(
    image: Option<&RasterImage>,
    annotation: &Annotation,
    forced: Option<Mode>,
    config: &GuideConfig,
) -> AttributeProfile {
    let mode = route_mode(annotation, forced);
    let canonical = image.map(resize_canonical);
    let canonical = canonical.as_ref();

    let color = match canonical {
        Some(img) => {
            let hist = hue_histogram(
                &rgb_to_hsv(img),
                config.analysis.s_min,
                config.analysis.v_min,
            );
            ColorProfile::Available {
                colorfulness: colorfulness(img, &config.colorfulness),
                harmony: best_palette_in(&hist, &config.palettes),
            }
        }
        None => ColorProfile::Unavailable {
            reason: "no image pixels".into(),
        },
    };

    let lighting = match mode {
        Mode::Landscape => landscape_lighting(canonical, annotation, config),
        Mode::Portrait => match &annotation.sh_coeffs {
            Some(sh) => match portrait_light_report(sh) {
                Ok(r) => LightingProfile::Portrait(r),
                Err(e) => LightingProfile::Unavailable {
                    reason: e.to_string(),
                },
            },
            None => LightingProfile::Unavailable {
                reason: "no spherical-harmonic coefficients".into(),
            },
        },
    };

    let composition = match mode {
        Mode::Landscape => landscape_composition(canonical, annotation, config),
        Mode::Portrait => match primary_face(&annotation.faces) {
            Some(face) => {
                CompositionProfile::Portrait(classify_portrait_composition(face_center(face)))
            }
            None => CompositionProfile::Unavailable {
                reason: "no face box".into(),
            },
        },
    };

    AttributeProfile {
        mode,
        color,
        lighting,
        composition,
    }
}

fn landscape_lighting(
    canonical: Option<&RasterImage>,
    annotation: &Annotation,
    config: &GuideConfig,
) -> LightingProfile {
    let dist = match (&annotation.azimuth, canonical) {
        (Some(d), _) => Ok(d.clone()),
        (None, Some(img)) => estimate_azimuthal_distribution(img, config.analysis.field_of_view),
        (None, None) => {
            return LightingProfile::Unavailable {
                reason: "no azimuth distribution and no image".into(),
            }
        }
    };
    match dist.and_then(|d| landscape_light_report(&d)) {
        Ok(r) => LightingProfile::Landscape(r),
        Err(e) => LightingProfile::Unavailable {
            reason: e.to_string(),
        },
    }
}

fn landscape_composition(
    canonical: Option<&RasterImage>,
    annotation: &Annotation,
    config: &GuideConfig,
) -> CompositionProfile {
    let lines = match (&annotation.semantic_lines, canonical) {
        (Some(lines), _) => lines.clone(),
        (None, Some(img)) => {
            match detect_segments(
                img,
                config.analysis.edge_threshold,
                config.analysis.line_count,
            ) {
                Ok(lines) => lines,
                Err(e) => {
                    return CompositionProfile::Unavailable {
                        reason: e.to_string(),
                    }
                }
            }
        }
        (None, None) => {
            return CompositionProfile::Unavailable {
                reason: "no semantic lines and no image".into(),
            }
        }
    };
    if lines.is_empty() {
        return CompositionProfile::Unavailable {
            reason: "no dominant line found".into(),
        };
    }
    match classify_landscape_composition(&lines, &config.bands) {
        Ok(c) => CompositionProfile::Landscape(c),
        Err(e) => CompositionProfile::Unavailable {
            reason: e.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{FaceBox, LandscapeKind};
    use crate::lighting::{AzimuthalDistribution, LightingOctant, ShCoeffs};

    fn gray() -> RasterImage {
        RasterImage::filled(640, 426, [128, 128, 128]).unwrap()
    }

    #[test]
    fn routing() {
        let mut ann = Annotation::bare("a");
        assert_eq!(route_mode(&ann, None), Mode::Landscape);
        ann.faces = vec![FaceBox::new(10, 10, 20, 20).unwrap()];
        assert_eq!(route_mode(&ann, None), Mode::Portrait);
        ann.faces.push(FaceBox::new(100, 10, 20, 20).unwrap());
        assert_eq!(route_mode(&ann, Some(Mode::Landscape)), Mode::Landscape);
    }

    #[test]
    fn landscape_with_azimuth_annotation() {
        let mut bins = vec![0.0; 36];
        bins[27] = 4.0;
        let ann = Annotation {
            azimuth: Some(AzimuthalDistribution::new(bins).unwrap()),
            ..Annotation::bare("a")
        };
        let p = profile_image(Some(&gray()), &ann, None, &GuideConfig::default());
        assert_eq!(p.mode, Mode::Landscape);
        match p.lighting {
            LightingProfile::Landscape(r) => assert_eq!(r.octant, LightingOctant::Left),
            other => panic!("{other:?}"),
        }
        assert!(p.is_consistent());
    }

    #[test]
    fn gray_landscape_is_level_one_without_lines() {
        let p = profile_image(
            Some(&gray()),
            &Annotation::bare("g"),
            None,
            &GuideConfig::default(),
        );
        match p.color {
            ColorProfile::Available { colorfulness, .. } => assert_eq!(colorfulness.level, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            p.composition,
            CompositionProfile::Unavailable { .. }
        ));
    }

    #[test]
    fn portrait_without_sh_marks_lighting_unavailable() {
        let ann = Annotation {
            faces: vec![FaceBox::new(300, 190, 40, 46).unwrap()],
            ..Annotation::bare("p")
        };
        let p = profile_image(Some(&gray()), &ann, None, &GuideConfig::default());
        assert_eq!(p.mode, Mode::Portrait);
        assert!(matches!(p.lighting, LightingProfile::Unavailable { .. }));
        assert!(matches!(p.composition, CompositionProfile::Portrait(_)));
    }

    #[test]
    fn portrait_with_sh() {
        let ann = Annotation {
            faces: vec![FaceBox::new(300, 190, 40, 46).unwrap()],
            sh_coeffs: Some(ShCoeffs([1.0, 0.5, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])),
            ..Annotation::bare("p")
        };
        let p = profile_image(None, &ann, None, &GuideConfig::default());
        assert!(matches!(p.lighting, LightingProfile::Portrait(_)));
        assert!(matches!(p.color, ColorProfile::Unavailable { .. }));
    }

    #[test]
    fn detected_horizon_is_classified() {
        let img = RasterImage::from_fn(640, 426, |_, y| {
            if y < 142 {
                [150, 190, 240]
            } else {
                [40, 90, 30]
            }
        })
        .unwrap();
        let p = profile_image(
            Some(&img),
            &Annotation::bare("h"),
            None,
            &GuideConfig::default(),
        );
        match p.composition {
            CompositionProfile::Landscape(c) => assert_eq!(c.kind, LandscapeKind::Thirds),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn profile_json_round_trips() {
        let img = RasterImage::from_fn(640, 426, |_, y| {
            if y < 142 {
                [150, 190, 240]
            } else {
                [40, 90, 30]
            }
        })
        .unwrap();
        let p = profile_image(
            Some(&img),
            &Annotation::bare("g"),
            None,
            &GuideConfig::default(),
        );
        assert!(matches!(p.composition, CompositionProfile::Landscape(_)));
        let text = serde_json::to_string(&p).unwrap();
        let back: AttributeProfile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
