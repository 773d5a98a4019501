//! Per-attribute comparison of an input profile against a reference.

use serde::{Deserialize, Serialize};

use super::config::GuideConfig;
use super::profile::{AttributeProfile, ColorProfile, CompositionProfile, LightingProfile, Mode};
use super::template::{CompositionTarget, LightingTarget, TemplateSpec};
use super::GuidanceError;
use crate::composition::landscape::THIRDS_Y;
use crate::composition::portrait::movement_phrase;
use crate::composition::{Anchor, LandscapeComposition, LandscapeKind, PortraitComposition};
use crate::harmony::{signed_arc, TemplateId};
use crate::lighting::{
    LandscapeLightReport, LightingOctant, PortraitLightReport, PortraitLightType,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    Color,
    Lighting,
    Composition,
}

impl Attribute {
    pub const ALL: [Attribute; 3] = [
        Attribute::Color,
        Attribute::Lighting,
        Attribute::Composition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Color => "color",
            Attribute::Lighting => "lighting",
            Attribute::Composition => "composition",
        }
    }
}

/// `Unavailable` is the "no advice" outcome when either side lacks the
/// attribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Adopt,
    Adjust,
    Keep,
    Unavailable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "unit", rename_all = "snake_case")]
pub enum Delta {
    /// Reference level minus input level.
    Levels { value: i32 },
    /// Signed azimuth change, positive toward increasing azimuth.
    Degrees { value: f64 },
    /// Input similarity to its portrait light type.
    Similarity { value: f64 },
    /// Positive tilt rolls the camera clockwise; positive shift moves the
    /// line down.
    Line {
        tilt_degrees: f64,
        shift_pixels: f64,
    },
    /// Subject movement in canonical pixels.
    Pixels { dx: i32, dy: i32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeAdvice {
    pub attribute: Attribute,
    pub verdict: Verdict,
    pub delta: Option<Delta>,
    pub sentence: String,
}

/// What an input is compared against.
#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    Profile(&'a AttributeProfile),
    Template(&'a TemplateSpec),
}

impl Reference<'_> {
    pub fn mode(&self) -> Mode {
        match self {
            Reference::Profile(p) => p.mode,
            Reference::Template(t) => t.mode,
        }
    }
}

/// Returns exactly three records, in color, lighting, composition order.
pub fn compare_profiles(
    input: &AttributeProfile,
    reference: Reference<'_>,
    config: &GuideConfig,
) -> Result<Vec<AttributeAdvice>, GuidanceError> {
    if input.mode != reference.mode() {
        return Err(GuidanceError::ModeMismatch {
            input: input.mode,
            reference: reference.mode(),
        });
    }
    let ctx = Ctx { config };
    Ok(vec![
        ctx.color(input, reference),
        ctx.lighting(input, reference),
        ctx.composition(input, reference),
    ])
}

/// Concatenates the sentences, one per line.
pub fn render_text(advice: &[AttributeAdvice]) -> String {
    let mut out = String::new();
    for a in advice {
        out.push_str(&a.sentence);
        out.push('\n');
    }
    out
}

struct Ctx<'a> {
    config: &'a GuideConfig,
}

enum ColorTarget {
    Level(u8),
    Full { level: u8, palette: TemplateId },
}

fn fmt_num(x: f64) -> String {
    let r = (x * 10.0).round() / 10.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r:.1}")
    }
}

impl Ctx<'_> {
    fn say(&self, key: &str, slots: &[(&str, String)]) -> String {
        self.config.sentences.render(key, slots)
    }

    fn keep(&self, attribute: Attribute, delta: Option<Delta>) -> AttributeAdvice {
        AttributeAdvice {
            attribute,
            verdict: Verdict::Keep,
            delta,
            sentence: self.say("keep", &[("attribute", attribute.name().into())]),
        }
    }

    fn unavailable(&self, attribute: Attribute, reason: &str) -> AttributeAdvice {
        AttributeAdvice {
            attribute,
            verdict: Verdict::Unavailable,
            delta: None,
            sentence: self.say(
                "unavailable",
                &[
                    ("attribute", attribute.name().into()),
                    ("reason", reason.into()),
                ],
            ),
        }
    }

    fn level_sentence(&self, input: u8, target: u8) -> Option<String> {
        let diff = i32::from(target) - i32::from(input);
        if diff == 0 {
            return None;
        }
        let key = if diff > 0 {
            "color.vivid"
        } else {
            "color.frosty"
        };
        let n = diff.unsigned_abs();
        let unit = if n == 1 { "level" } else { "levels" };
        Some(self.say(
            key,
            &[("levels", n.to_string()), ("level_unit", unit.into())],
        ))
    }

    fn color(&self, input: &AttributeProfile, reference: Reference<'_>) -> AttributeAdvice {
        let attr = Attribute::Color;
        let (level, palette) = match &input.color {
            ColorProfile::Available {
                colorfulness,
                harmony,
            } => (colorfulness.level, harmony.scheme.template_id),
            ColorProfile::Unavailable { reason } => return self.unavailable(attr, reason),
        };
        let target = match reference {
            Reference::Template(t) => match t.palette {
                Some(p) => ColorTarget::Full {
                    level: t.colorfulness_level,
                    palette: p,
                },
                None => ColorTarget::Level(t.colorfulness_level),
            },
            Reference::Profile(p) => match &p.color {
                ColorProfile::Available {
                    colorfulness,
                    harmony,
                } => ColorTarget::Full {
                    level: colorfulness.level,
                    palette: harmony.scheme.template_id,
                },
                ColorProfile::Unavailable { reason } => {
                    return self.unavailable(attr, &format!("reference: {reason}"))
                }
            },
        };
        let (target_level, target_palette) = match target {
            ColorTarget::Level(l) => (l, None),
            ColorTarget::Full { level, palette } => (level, Some(palette)),
        };
        let diff = i32::from(target_level) - i32::from(level);
        let delta = Some(Delta::Levels { value: diff });

        if let Some(tp) = target_palette.filter(|&tp| tp != palette) {
            let mut sentence = self.say(
                "color.adopt",
                &[
                    ("palette", tp.to_string()),
                    ("current_palette", palette.to_string()),
                ],
            );
            if let Some(extra) = self.level_sentence(level, target_level) {
                sentence.push(' ');
                sentence.push_str(&extra);
            }
            return AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adopt,
                delta,
                sentence,
            };
        }
        if diff.unsigned_abs() > u32::from(self.config.tolerances.colorfulness_levels) {
            AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adjust,
                delta,
                sentence: self
                    .level_sentence(level, target_level)
                    .expect("nonzero level difference"),
            }
        } else {
            self.keep(attr, delta)
        }
    }

    fn lighting(&self, input: &AttributeProfile, reference: Reference<'_>) -> AttributeAdvice {
        let attr = Attribute::Lighting;
        let reason = |p: &LightingProfile| match p {
            LightingProfile::Unavailable { reason } => Some(reason.clone()),
            _ => None,
        };
        match (&input.lighting, reference) {
            (LightingProfile::Unavailable { reason }, _) => self.unavailable(attr, reason),
            (LightingProfile::Landscape(inp), Reference::Template(t)) => match t.lighting {
                LightingTarget::Octant(o) => self.landscape_light(inp, o, o.center()),
                LightingTarget::Portrait(_) => self.unavailable(attr, "template has no octant"),
            },
            (LightingProfile::Portrait(inp), Reference::Template(t)) => match t.lighting {
                LightingTarget::Portrait(l) => self.portrait_light(inp, l),
                LightingTarget::Octant(_) => self.unavailable(attr, "template has no light type"),
            },
            (_, Reference::Profile(p)) => match (&input.lighting, &p.lighting) {
                (LightingProfile::Landscape(inp), LightingProfile::Landscape(r)) => {
                    self.landscape_light(inp, r.octant, r.theta_max)
                }
                (LightingProfile::Portrait(inp), LightingProfile::Portrait(r)) => {
                    self.portrait_light(inp, r.light_type)
                }
                (_, other) => self.unavailable(
                    attr,
                    &format!(
                        "reference: {}",
                        reason(other).unwrap_or_else(|| "incompatible report".into())
                    ),
                ),
            },
        }
    }

    fn landscape_light(
        &self,
        input: &LandscapeLightReport,
        octant: LightingOctant,
        target_theta: f64,
    ) -> AttributeAdvice {
        let attr = Attribute::Lighting;
        let delta_deg = signed_arc(input.theta_max, target_theta);
        let delta = Some(Delta::Degrees { value: delta_deg });
        if input.octant != octant {
            return AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adopt,
                delta,
                sentence: self.say(
                    "lighting.adopt",
                    &[
                        ("reference_light", octant.phrase().into()),
                        ("current_light", input.octant.phrase().into()),
                    ],
                ),
            };
        }
        if delta_deg.abs() > self.config.tolerances.lighting_degrees {
            let sense = if delta_deg > 0.0 {
                "clockwise"
            } else {
                "counterclockwise"
            };
            AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adjust,
                delta,
                sentence: self.say(
                    "lighting.adjust",
                    &[
                        ("sense", sense.into()),
                        ("degrees", fmt_num(delta_deg.abs())),
                        ("current_light", input.octant.phrase().into()),
                    ],
                ),
            }
        } else {
            self.keep(attr, delta)
        }
    }

    fn portrait_light(
        &self,
        input: &PortraitLightReport,
        target: PortraitLightType,
    ) -> AttributeAdvice {
        let attr = Attribute::Lighting;
        let delta = Some(Delta::Similarity {
            value: input.similarity,
        });
        if input.light_type != target {
            return AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adopt,
                delta,
                sentence: self.say(
                    "portrait_light.adopt",
                    &[
                        ("reference_light", target.name().into()),
                        ("current_light", input.light_type.name().into()),
                        ("description", target.description().into()),
                    ],
                ),
            };
        }
        if input.similarity > self.config.tolerances.portrait_similarity {
            self.keep(attr, delta)
        } else {
            AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adjust,
                delta,
                sentence: self.say(
                    "portrait_light.adjust",
                    &[
                        ("current_light", input.light_type.name().into()),
                        ("description", target.description().into()),
                    ],
                ),
            }
        }
    }

    fn composition(&self, input: &AttributeProfile, reference: Reference<'_>) -> AttributeAdvice {
        let attr = Attribute::Composition;
        let reason = |p: &CompositionProfile| match p {
            CompositionProfile::Unavailable { reason } => Some(reason.clone()),
            _ => None,
        };
        match (&input.composition, reference) {
            (CompositionProfile::Unavailable { reason }, _) => self.unavailable(attr, reason),
            (CompositionProfile::Landscape(inp), Reference::Template(t)) => match t.composition {
                CompositionTarget::Landscape(k) => {
                    self.landscape_comp(inp, k, inp.tilt_delta, inp.shift_delta)
                }
                CompositionTarget::Portrait(_) => {
                    self.unavailable(attr, "template has no line class")
                }
            },
            (CompositionProfile::Portrait(inp), Reference::Template(t)) => match t.composition {
                CompositionTarget::Portrait(a) => self.subject(inp, a, a.point()),
                CompositionTarget::Landscape(_) => self.unavailable(attr, "template has no anchor"),
            },
            (_, Reference::Profile(p)) => match (&input.composition, &p.composition) {
                (CompositionProfile::Landscape(inp), CompositionProfile::Landscape(r)) => {
                    let tilt = r.primary_line.signed_angle() - inp.primary_line.signed_angle();
                    let shift = if r.kind == LandscapeKind::Diagonal {
                        0.0
                    } else {
                        r.primary_line.mean_y() - inp.primary_line.mean_y()
                    };
                    self.landscape_comp(inp, r.kind, tilt, shift)
                }
                (CompositionProfile::Portrait(inp), CompositionProfile::Portrait(r)) => {
                    self.subject(inp, r.anchor, r.center)
                }
                (_, other) => self.unavailable(
                    attr,
                    &format!(
                        "reference: {}",
                        reason(other).unwrap_or_else(|| "incompatible report".into())
                    ),
                ),
            },
        }
    }

    fn landscape_comp(
        &self,
        input: &LandscapeComposition,
        kind: LandscapeKind,
        tilt: f64,
        shift: f64,
    ) -> AttributeAdvice {
        let attr = Attribute::Composition;
        if input.kind != kind {
            let (tilt, shift) = adopt_line_delta(input, kind);
            return AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adopt,
                delta: Some(Delta::Line {
                    tilt_degrees: tilt,
                    shift_pixels: shift,
                }),
                sentence: self.say(
                    "composition.adopt",
                    &[
                        ("reference_kind", kind.name().into()),
                        ("current_kind", input.kind.name().into()),
                    ],
                ),
            };
        }
        let delta = Some(Delta::Line {
            tilt_degrees: tilt,
            shift_pixels: shift,
        });
        let tol = &self.config.tolerances;
        let mut parts = Vec::new();
        if tilt.abs() > tol.tilt_degrees {
            let sense = if tilt > 0.0 {
                "clockwise"
            } else {
                "counterclockwise"
            };
            parts.push(self.say(
                "composition.tilt",
                &[("sense", sense.into()), ("degrees", fmt_num(tilt.abs()))],
            ));
        }
        if shift.abs() > tol.shift_pixels {
            let direction = if shift > 0.0 { "down" } else { "up" };
            parts.push(self.say(
                "composition.shift",
                &[
                    ("kind", kind.name().into()),
                    ("direction", direction.into()),
                    ("pixels", fmt_num(shift.abs())),
                ],
            ));
        }
        if parts.is_empty() {
            self.keep(attr, delta)
        } else {
            AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adjust,
                delta,
                sentence: parts.join(" "),
            }
        }
    }

    fn subject(
        &self,
        input: &PortraitComposition,
        anchor: Anchor,
        target: (i32, i32),
    ) -> AttributeAdvice {
        let attr = Attribute::Composition;
        let (dx, dy) = (target.0 - input.center.0, target.1 - input.center.1);
        let delta = Some(Delta::Pixels { dx, dy });
        if input.anchor != anchor {
            return AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adopt,
                delta,
                sentence: self.say(
                    "subject.adopt",
                    &[
                        ("reference_anchor", anchor.phrase().into()),
                        ("current_anchor", input.anchor.phrase().into()),
                        ("movement", movement_phrase(dx, dy)),
                    ],
                ),
            };
        }
        if f64::from(dx).hypot(f64::from(dy)) > self.config.tolerances.subject_offset_pixels {
            AttributeAdvice {
                attribute: attr,
                verdict: Verdict::Adjust,
                delta,
                sentence: self.say(
                    "subject.adjust",
                    &[
                        ("movement", movement_phrase(dx, dy)),
                        ("anchor", anchor.phrase().into()),
                    ],
                ),
            }
        } else {
            self.keep(attr, delta)
        }
    }
}

/// Tilt and shift that would bring the input line to the canonical geometry
/// of `kind`.
fn adopt_line_delta(input: &LandscapeComposition, kind: LandscapeKind) -> (f64, f64) {
    let angle = input.primary_line.signed_angle();
    let mean_y = input.primary_line.mean_y();
    match kind {
        LandscapeKind::Thirds => {
            let target = if (THIRDS_Y[0] - mean_y).abs() <= (THIRDS_Y[1] - mean_y).abs() {
                THIRDS_Y[0]
            } else {
                THIRDS_Y[1]
            };
            (-angle, target - mean_y)
        }
        LandscapeKind::Horizontal => (-angle, 0.0),
        LandscapeKind::Diagonal => {
            let dir = if angle >= 0.0 { 1.0 } else { -1.0 };
            (dir * 45.0 - angle, 0.0)
        }
        LandscapeKind::Unclassified => (0.0, 0.0),
    }
}
