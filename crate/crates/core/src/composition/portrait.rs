//! Subject placement against the thirds power points and the frame center.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::CompositionError;
use crate::raster::{CANONICAL_HEIGHT, CANONICAL_WIDTH};

pub const DEFAULT_PLACEMENT_THRESHOLD: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl FaceBox {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Result<Self, CompositionError> {
        let b = Self { x, y, w, h };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), CompositionError> {
        let inside = self.w >= 1
            && self.h >= 1
            && u64::from(self.x) + u64::from(self.w) <= CANONICAL_WIDTH as u64
            && u64::from(self.y) + u64::from(self.h) <= CANONICAL_HEIGHT as u64;
        if inside {
            Ok(())
        } else {
            Err(CompositionError::FaceOutsideFrame(*self))
        }
    }

    pub fn area(&self) -> u64 {
        u64::from(self.w) * u64::from(self.h)
    }
}

/// Box center with halves rounded up.
pub fn face_center(b: &FaceBox) -> (i32, i32) {
    (
        (b.x + b.w.div_ceil(2)) as i32,
        (b.y + b.h.div_ceil(2)) as i32,
    )
}

/// Largest face by area; the earliest one wins ties.
pub fn primary_face(faces: &[FaceBox]) -> Option<&FaceBox> {
    faces
        .iter()
        .fold(None, |best: Option<&FaceBox>, f| match best {
            Some(b) if b.area() >= f.area() => Some(b),
            _ => Some(f),
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Center,
    ThirdTl,
    ThirdTr,
    ThirdBl,
    ThirdBr,
}

impl Anchor {
    /// Tie-break order.
    pub const ALL: [Anchor; 5] = [
        Anchor::Center,
        Anchor::ThirdTl,
        Anchor::ThirdTr,
        Anchor::ThirdBl,
        Anchor::ThirdBr,
    ];

    pub fn point(self) -> (i32, i32) {
        match self {
            Anchor::Center => (320, 213),
            Anchor::ThirdTl => (213, 142),
            Anchor::ThirdTr => (426, 142),
            Anchor::ThirdBl => (213, 284),
            Anchor::ThirdBr => (426, 284),
        }
    }

    pub fn phrase(self) -> &'static str {
        match self {
            Anchor::Center => "the frame center",
            Anchor::ThirdTl => "the upper-left thirds point",
            Anchor::ThirdTr => "the upper-right thirds point",
            Anchor::ThirdBl => "the lower-left thirds point",
            Anchor::ThirdBr => "the lower-right thirds point",
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Anchor::Center => Anchor::Center,
            Anchor::ThirdTl => Anchor::ThirdTr,
            Anchor::ThirdTr => Anchor::ThirdTl,
            Anchor::ThirdBl => Anchor::ThirdBr,
            Anchor::ThirdBr => Anchor::ThirdBl,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', ' '], "_")
            .as_str()
        {
            "center" => Some(Anchor::Center),
            "third_tl" => Some(Anchor::ThirdTl),
            "third_tr" => Some(Anchor::ThirdTr),
            "third_bl" => Some(Anchor::ThirdBl),
            "third_br" => Some(Anchor::ThirdBr),
            _ => None,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phrase())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitComposition {
    pub anchor: Anchor,
    pub center: (i32, i32),
    pub distance: f64,
    /// Anchor minus subject center.
    pub offset: (i32, i32),
}

pub fn classify_portrait_composition(center: (i32, i32)) -> PortraitComposition {
    let dist = |a: Anchor| {
        let (ax, ay) = a.point();
        f64::from(ax - center.0).hypot(f64::from(ay - center.1))
    };
    let mut anchor = Anchor::ALL[0];
    let mut distance = dist(anchor);
    for a in &Anchor::ALL[1..] {
        let d = dist(*a);
        if d < distance {
            anchor = *a;
            distance = d;
        }
    }
    let (ax, ay) = anchor.point();
    PortraitComposition {
        anchor,
        center,
        distance,
        offset: (ax - center.0, ay - center.1),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementAdvice {
    pub well_placed: bool,
    pub anchor: Anchor,
    pub dx: i32,
    pub dy: i32,
    pub sentence: String,
}

/// Renders a movement instruction such as "left by 50 px (7.8% of the frame
/// width)"; zero components are omitted.
pub fn movement_phrase(dx: i32, dy: i32) -> String {
    let mut parts = Vec::new();
    if dx != 0 {
        let dir = if dx < 0 { "left" } else { "right" };
        let pct = 100.0 * f64::from(dx.abs()) / CANONICAL_WIDTH as f64;
        parts.push(format!(
            "{dir} by {} px ({pct:.1}% of the frame width)",
            dx.abs()
        ));
    }
    if dy != 0 {
        let dir = if dy < 0 { "up" } else { "down" };
        let pct = 100.0 * f64::from(dy.abs()) / CANONICAL_HEIGHT as f64;
        parts.push(format!(
            "{dir} by {} px ({pct:.1}% of the frame height)",
            dy.abs()
        ));
    }
    parts.join(" and ")
}

pub fn portrait_composition_advice(comp: &PortraitComposition, threshold: f64) -> PlacementAdvice {
    let (dx, dy) = comp.offset;
    let well_placed = comp.distance <= threshold;
    let sentence = if well_placed {
        format!("The subject is well placed on {}.", comp.anchor.phrase())
    } else {
        format!(
            "Move the subject {} toward {}.",
            movement_phrase(dx, dy),
            comp.anchor.phrase()
        )
    };
    PlacementAdvice {
        well_placed,
        anchor: comp.anchor,
        dx,
        dy,
        sentence,
    }
}
