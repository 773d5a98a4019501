//! Tunable constants, loaded from `config.toml` in the config directory.
//!
//! Every key is optional; missing keys keep their defaults.
//!
//! ```toml
//! [palettes]
//! i = [[0.0, 18.0]]          # [center_offset, width] per sector
//! L = [[0.0, 18.0], [90.0, 79.2]]
//!
//! [colorfulness]
//! thresholds = [15, 33, 45, 59, 82, 109]
//!
//! [tolerances]
//! lighting_degrees = 5.0
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::text::Sentences;
use super::GuidanceError;
use crate::composition::landscape::{DEFAULT_EDGE_THRESHOLD, DEFAULT_LINE_COUNT};
use crate::composition::portrait::DEFAULT_PLACEMENT_THRESHOLD;
use crate::composition::CompositionBands;
use crate::harmony::{ColorfulnessScale, PaletteSet, PaletteTemplate, Sector, TemplateId};
use crate::lighting::landscape::DEFAULT_FOV;
use crate::lighting::portrait::SIMILARITY_THRESHOLD;

pub const CONFIG_FILE: &str = "config.toml";

/// Adjust-versus-keep thresholds used when two profiles share a class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub colorfulness_levels: u8,
    pub lighting_degrees: f64,
    pub portrait_similarity: f64,
    pub tilt_degrees: f64,
    pub shift_pixels: f64,
    pub subject_offset_pixels: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            colorfulness_levels: 0,
            lighting_degrees: 5.0,
            portrait_similarity: SIMILARITY_THRESHOLD,
            tilt_degrees: 3.0,
            shift_pixels: 15.0,
            subject_offset_pixels: DEFAULT_PLACEMENT_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSettings {
    pub edge_threshold: f64,
    pub line_count: usize,
    pub field_of_view: f64,
    pub s_min: f64,
    pub v_min: f64,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            edge_threshold: DEFAULT_EDGE_THRESHOLD,
            line_count: DEFAULT_LINE_COUNT,
            field_of_view: DEFAULT_FOV,
            s_min: crate::raster::DEFAULT_S_MIN,
            v_min: crate::raster::DEFAULT_V_MIN,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GuideConfig {
    pub palettes: PaletteSet,
    pub colorfulness: ColorfulnessScale,
    pub bands: CompositionBands,
    pub tolerances: Tolerances,
    pub analysis: AnalysisSettings,
    pub sentences: Sentences,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    palettes: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    colorfulness: Option<ColorfulnessScale>,
    #[serde(default)]
    composition: Option<CompositionBands>,
    #[serde(default)]
    tolerances: Option<Tolerances>,
    #[serde(default)]
    analysis: Option<AnalysisSettings>,
}

impl GuideConfig {
    pub fn from_toml(text: &str) -> Result<Self, GuidanceError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| GuidanceError::Config(e.to_string()))?;
        let mut config = GuideConfig::default();
        for (name, sectors) in raw.palettes {
            let id: TemplateId = name
                .parse()
                .map_err(|e: crate::harmony::HarmonyError| GuidanceError::Config(e.to_string()))?;
            let sectors = sectors.iter().map(|&[c, w]| Sector::new(c, w)).collect();
            let template = PaletteTemplate::new(id, sectors)
                .map_err(|e| GuidanceError::Config(e.to_string()))?;
            match config.palettes.templates.iter_mut().find(|t| t.id == id) {
                Some(slot) => *slot = template,
                None => config.palettes.templates.push(template),
            }
        }
        if let Some(scale) = raw.colorfulness {
            if !scale.is_valid() {
                return Err(GuidanceError::Config(
                    "colorfulness thresholds must be positive and increasing".into(),
                ));
            }
            config.colorfulness = scale;
        }
        if let Some(bands) = raw.composition {
            config.bands = bands;
        }
        if let Some(t) = raw.tolerances {
            config.tolerances = t;
        }
        if let Some(a) = raw.analysis {
            config.analysis = a;
        }
        Ok(config)
    }

    /// Reads `<dir>/config.toml` and `<dir>/sentences.txt`; absent files
    /// keep the defaults.
    pub fn load_dir(dir: &Path) -> Result<Self, GuidanceError> {
        let path = dir.join(CONFIG_FILE);
        let mut config = if path.exists() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| GuidanceError::Config(format!("{}: {e}", path.display())))?;
            Self::from_toml(&text)?
        } else {
            Self::default()
        };
        config.sentences = Sentences::load_dir(dir)?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        assert_eq!(GuideConfig::from_toml("").unwrap(), GuideConfig::default());
    }

    #[test]
    fn overrides_apply() {
        let cfg = GuideConfig::from_toml(
            r#"
            [palettes]
            i = [[0.0, 30.0]]

            [colorfulness]
            thresholds = [10, 20, 30, 40, 50, 60]

            [tolerances]
            lighting_degrees = 9.0
            "#,
        )
        .unwrap();
        assert_eq!(
            cfg.palettes.get(TemplateId::SmallI).unwrap().sectors[0].width,
            30.0
        );
        assert_eq!(cfg.palettes.templates.len(), 7);
        assert_eq!(cfg.colorfulness.level(55.0), 6);
        assert_eq!(cfg.tolerances.lighting_degrees, 9.0);
        assert_eq!(cfg.tolerances.tilt_degrees, 3.0);
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(GuideConfig::from_toml("[palettes]\nQ = [[0.0, 10.0]]").is_err());
        assert!(GuideConfig::from_toml("[palettes]\nI = [[0.0, 100.0], [50.0, 100.0]]").is_err());
        assert!(GuideConfig::from_toml("[colorfulness]\nthresholds = [5, 4, 3, 2, 1, 0]").is_err());
        assert!(GuideConfig::from_toml("[tolerances]\nbogus = 1").is_err());
    }
}
