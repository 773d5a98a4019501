//! Photography templates: target classes for each attribute.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::profile::Mode;
use super::GuidanceError;
use crate::composition::{Anchor, LandscapeKind};
use crate::harmony::TemplateId;
use crate::lighting::{LightingOctant, PortraitLightType};

pub const TEMPLATES_DIR: &str = "templates";

const BUILTIN: [(&str, &str); 5] = [
    (
        "thirds-left-light",
        include_str!("../../data/templates/thirds-left-light.toml"),
    ),
    (
        "diagonal-side-light",
        include_str!("../../data/templates/diagonal-side-light.toml"),
    ),
    (
        "horizon-front-light",
        include_str!("../../data/templates/horizon-front-light.toml"),
    ),
    (
        "rembrandt-thirds",
        include_str!("../../data/templates/rembrandt-thirds.toml"),
    ),
    (
        "butterfly-center",
        include_str!("../../data/templates/butterfly-center.toml"),
    ),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LightingTarget {
    Octant(LightingOctant),
    Portrait(PortraitLightType),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CompositionTarget {
    Landscape(LandscapeKind),
    Portrait(Anchor),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateSpec {
    pub name: String,
    pub mode: Mode,
    pub colorfulness_level: u8,
    /// Optional harmony palette; without it color is judged on level alone.
    pub palette: Option<TemplateId>,
    pub lighting: LightingTarget,
    pub composition: CompositionTarget,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    mode: String,
    colorfulness_level: u8,
    #[serde(default)]
    palette: Option<String>,
    lighting: String,
    composition: String,
}

impl TemplateSpec {
    pub fn from_toml(text: &str) -> Result<Self, GuidanceError> {
        let bad = |reason: String| GuidanceError::InvalidTemplate(reason);
        let raw: RawSpec = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        if raw.name.trim().is_empty() {
            return Err(bad("name must be non-empty".into()));
        }
        let mode = Mode::parse(&raw.mode)
            .ok_or_else(|| bad(format!("mode {:?} is not landscape or portrait", raw.mode)))?;
        if !(1..=7).contains(&raw.colorfulness_level) {
            return Err(bad(format!(
                "colorfulness_level {} outside 1..=7",
                raw.colorfulness_level
            )));
        }
        let palette = raw
            .palette
            .map(|p| match p.parse::<TemplateId>() {
                Ok(id) if id != TemplateId::N => Ok(id),
                _ => Err(bad(format!(
                    "palette {p:?} is not a chromatic harmony template"
                ))),
            })
            .transpose()?;
        let (lighting, composition) = match mode {
            Mode::Landscape => (
                LightingOctant::parse(&raw.lighting)
                    .map(LightingTarget::Octant)
                    .ok_or_else(|| bad(format!("{:?} is not a lighting octant", raw.lighting)))?,
                LandscapeKind::parse(&raw.composition)
                    .map(CompositionTarget::Landscape)
                    .ok_or_else(|| {
                        bad(format!(
                            "{:?} is not a landscape composition",
                            raw.composition
                        ))
                    })?,
            ),
            Mode::Portrait => (
                PortraitLightType::parse(&raw.lighting)
                    .map(LightingTarget::Portrait)
                    .ok_or_else(|| {
                        bad(format!("{:?} is not a portrait light type", raw.lighting))
                    })?,
                Anchor::parse(&raw.composition)
                    .map(CompositionTarget::Portrait)
                    .ok_or_else(|| bad(format!("{:?} is not a subject anchor", raw.composition)))?,
            ),
        };
        Ok(Self {
            name: raw.name,
            mode,
            colorfulness_level: raw.colorfulness_level,
            palette,
            lighting,
            composition,
        })
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::from_toml(text).expect("built-in template parses"))
    }

    /// Resolution order: an existing file path, then
    /// `<config_dir>/templates/<name>.toml`, then the built-ins.
    pub fn resolve(name_or_path: &str, config_dir: Option<&Path>) -> Result<Self, GuidanceError> {
        let as_path = Path::new(name_or_path);
        if as_path.is_file() {
            return Self::from_file(as_path);
        }
        if let Some(dir) = config_dir {
            let candidate = dir.join(TEMPLATES_DIR).join(format!("{name_or_path}.toml"));
            if candidate.is_file() {
                return Self::from_file(&candidate);
            }
        }
        Self::builtin(name_or_path)
            .ok_or_else(|| GuidanceError::UnknownTemplate(name_or_path.to_string()))
    }

    fn from_file(path: &Path) -> Result<Self, GuidanceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GuidanceError::InvalidTemplate(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_match_their_names() {
        for name in builtin_names() {
            let spec = TemplateSpec::builtin(name).unwrap();
            assert_eq!(spec.name, name);
        }
        let t = TemplateSpec::builtin("thirds-left-light").unwrap();
        assert_eq!(t.mode, Mode::Landscape);
        assert_eq!(t.colorfulness_level, 5);
        assert_eq!(t.lighting, LightingTarget::Octant(LightingOctant::Left));
        assert_eq!(
            t.composition,
            CompositionTarget::Landscape(LandscapeKind::Thirds)
        );
    }

    #[test]
    fn targets_must_fit_the_mode() {
        let spec = |mode: &str, light: &str, comp: &str| {
            TemplateSpec::from_toml(&format!(
                "name = \"x\"\nmode = \"{mode}\"\ncolorfulness_level = 3\nlighting = \"{light}\"\ncomposition = \"{comp}\"\n"
            ))
        };
        assert!(spec("landscape", "left", "thirds").is_ok());
        assert!(spec("landscape", "rembrandt", "thirds").is_err());
        assert!(spec("portrait", "butterfly", "diagonal").is_err());
        assert!(spec("portrait", "butterfly", "third_br").is_ok());
        assert!(spec("aerial", "left", "thirds").is_err());
    }

    #[test]
    fn level_and_palette_checked() {
        let base =
            "name = \"x\"\nmode = \"landscape\"\nlighting = \"left\"\ncomposition = \"thirds\"\n";
        assert!(TemplateSpec::from_toml(&format!("{base}colorfulness_level = 0\n")).is_err());
        assert!(TemplateSpec::from_toml(&format!("{base}colorfulness_level = 8\n")).is_err());
        let p =
            TemplateSpec::from_toml(&format!("{base}colorfulness_level = 2\npalette = \"V\"\n"))
                .unwrap();
        assert_eq!(p.palette, Some(TemplateId::V));
        assert!(TemplateSpec::from_toml(&format!(
            "{base}colorfulness_level = 2\npalette = \"N\"\n"
        ))
        .is_err());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            TemplateSpec::resolve("no-such-template", None),
            Err(GuidanceError::UnknownTemplate(_))
        ));
    }
}
