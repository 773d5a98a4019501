//! Dominant-line composition on the canonical 640x426 frame.
//!
//! Lines come either from Sobel edges plus Hough voting or from externally
//! supplied segments. Coordinates put the origin at the top-left corner with
//! `y` growing downward.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CompositionError;
use crate::raster::{RasterImage, CANONICAL_HEIGHT, CANONICAL_WIDTH};

/// Horizontal thirds lines, `floor(426/3)` and `floor(2*426/3)`.
pub const THIRDS_Y: [f64; 2] = [142.0, 284.0];

pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.1;
pub const DEFAULT_LINE_COUNT: usize = 2;

// Largest Sobel magnitude an 8-bit luma image can produce.
const SOBEL_MAX: f64 = 4.0 * 255.0 * std::f64::consts::SQRT_2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    cells: Vec<bool>,
}

impl EdgeMap {
    pub fn empty() -> Self {
        Self {
            cells: vec![false; CANONICAL_WIDTH * CANONICAL_HEIGHT],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * CANONICAL_WIDTH + x]
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        self.cells[y * CANONICAL_WIDTH + x] = on;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(i, _)| (i % CANONICAL_WIDTH, i / CANONICAL_WIDTH))
    }
}

/// Sobel gradient magnitude on Rec.601 luma, scaled by the largest possible
/// magnitude and thresholded. Borders replicate the edge pixel.
pub fn detect_edges(image: &RasterImage, threshold: f64) -> Result<EdgeMap, CompositionError> {
    if !image.is_canonical() {
        return Err(CompositionError::NotCanonical {
            width: image.width(),
            height: image.height(),
        });
    }
    let (w, h) = (CANONICAL_WIDTH, CANONICAL_HEIGHT);
    let luma = image.luminance();
    let at = |x: isize, y: isize| {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        luma[y * w + x]
    };
    let mut edges = EdgeMap::empty();
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            let magnitude = (gx * gx + gy * gy).sqrt() / SOBEL_MAX;
            if magnitude > threshold {
                edges.set(x as usize, y as usize, true);
            }
        }
    }
    Ok(edges)
}

/// Line `x cos(theta) + y sin(theta) = rho`, theta in degrees within `[0, 180)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarLine {
    pub rho: f64,
    pub theta: f64,
    pub votes: u32,
}

const THETA_BINS: usize = 180;
const NMS_THETA: isize = 2;
const NMS_RHO: isize = 5;

/// Hough voting with 1° / 1 px bins, 5°x10 px non-maximum suppression, and
/// peaks ordered by votes then `(theta, rho)`.
pub fn hough_lines(edges: &EdgeMap, k: usize) -> Vec<PolarLine> {
    if k == 0 {
        return Vec::new();
    }
    let diag = ((CANONICAL_WIDTH * CANONICAL_WIDTH + CANONICAL_HEIGHT * CANONICAL_HEIGHT) as f64)
        .sqrt()
        .ceil() as isize;
    let rho_bins = (2 * diag + 1) as usize;
    let trig: Vec<(f64, f64)> = (0..THETA_BINS)
        .map(|t| {
            let r = (t as f64).to_radians();
            (r.cos(), r.sin())
        })
        .collect();

    let mut acc = vec![0u32; THETA_BINS * rho_bins];
    for (x, y) in edges.points() {
        for (t, &(c, s)) in trig.iter().enumerate() {
            let rho = (x as f64 * c + y as f64 * s).round() as isize;
            acc[t * rho_bins + (rho + diag) as usize] += 1;
        }
    }

    // Neighbour lookup wraps theta across 0/180 by flipping rho.
    let cell = |t: isize, r: isize| -> Option<(usize, isize)> {
        let (t, r) = if t < 0 {
            (t + THETA_BINS as isize, -r)
        } else if t >= THETA_BINS as isize {
            (t - THETA_BINS as isize, -r)
        } else {
            (t, r)
        };
        (r.abs() <= diag).then_some((t as usize, r))
    };
    let votes_at = |t: usize, r: isize| acc[t * rho_bins + (r + diag) as usize];
    let order = |a: (u32, usize, isize), b: (u32, usize, isize)| {
        b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    };

    let mut peaks: Vec<(u32, usize, isize)> = Vec::new();
    for t in 0..THETA_BINS {
        for r in -diag..=diag {
            let v = votes_at(t, r);
            if v == 0 {
                continue;
            }
            let me = (v, t, r);
            let mut is_peak = true;
            'window: for dt in -NMS_THETA..=NMS_THETA {
                for dr in -NMS_RHO..=NMS_RHO {
                    if dt == 0 && dr == 0 {
                        continue;
                    }
                    if let Some((nt, nr)) = cell(t as isize + dt, r + dr) {
                        let other = (votes_at(nt, nr), nt, nr);
                        if order(other, me) == Ordering::Less {
                            is_peak = false;
                            break 'window;
                        }
                    }
                }
            }
            if is_peak {
                peaks.push(me);
            }
        }
    }
    peaks.sort_by(|a, b| order(*a, *b));
    peaks
        .into_iter()
        .take(k)
        .map(|(votes, t, r)| PolarLine {
            rho: r as f64,
            theta: t as f64,
            votes,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSegment {
    pub p0: (i32, i32),
    pub p1: (i32, i32),
}

impl LineSegment {
    /// Segment with endpoints ordered by ascending x, then y.
    pub fn new(a: (i32, i32), b: (i32, i32)) -> Self {
        if a <= b {
            Self { p0: a, p1: b }
        } else {
            Self { p0: b, p1: a }
        }
    }

    pub fn mean_y(&self) -> f64 {
        f64::from(self.p0.1 + self.p1.1) / 2.0
    }

    /// Angle from horizontal, counterclockwise as seen in the image, in
    /// `(-90, 90]`. A line rising to the right is positive.
    pub fn signed_angle(&self) -> f64 {
        let s = Self::new(self.p0, self.p1);
        let dx = f64::from(s.p1.0 - s.p0.0);
        let dy = f64::from(s.p1.1 - s.p0.1);
        if dx == 0.0 {
            return 90.0;
        }
        (-dy).atan2(dx).to_degrees()
    }

    pub fn to_polar(&self) -> Result<PolarLine, CompositionError> {
        if self.p0 == self.p1 {
            return Err(CompositionError::DegenerateSegment);
        }
        let dx = f64::from(self.p1.0 - self.p0.0);
        let dy = f64::from(self.p1.1 - self.p0.1);
        let mut theta = (-dx).atan2(dy).to_degrees();
        let (nx, ny) = (dy, -dx);
        let len = (nx * nx + ny * ny).sqrt();
        let mut rho = (f64::from(self.p0.0) * nx + f64::from(self.p0.1) * ny) / len;
        // Normal (cos t, sin t) = (dy, -dx)/len; fold theta into [0, 180).
        theta = theta.rem_euclid(360.0);
        if theta >= 180.0 {
            theta -= 180.0;
            rho = -rho;
        }
        Ok(PolarLine {
            rho,
            theta,
            votes: 1,
        })
    }
}

/// Clips an infinite polar line to the canonical frame border.
pub fn to_segment(line: &PolarLine) -> Result<LineSegment, CompositionError> {
    let (max_x, max_y) = ((CANONICAL_WIDTH - 1) as f64, (CANONICAL_HEIGHT - 1) as f64);
    let t = line.theta.to_radians();
    let (c, s) = (t.cos(), t.sin());
    let eps = 1e-9;
    let mut hits: Vec<(f64, f64)> = Vec::new();
    if s.abs() > eps {
        for x in [0.0, max_x] {
            let y = (line.rho - x * c) / s;
            if (-eps..=max_y + eps).contains(&y) {
                hits.push((x, y.clamp(0.0, max_y)));
            }
        }
    }
    if c.abs() > eps {
        for y in [0.0, max_y] {
            let x = (line.rho - y * s) / c;
            if (-eps..=max_x + eps).contains(&x) {
                hits.push((x.clamp(0.0, max_x), y));
            }
        }
    }
    let mut best: Option<((f64, f64), (f64, f64), f64)> = None;
    for (i, a) in hits.iter().enumerate() {
        for b in &hits[i + 1..] {
            let d = (a.0 - b.0).hypot(a.1 - b.1);
            if best.is_none_or(|(_, _, bd)| d > bd) {
                best = Some((*a, *b, d));
            }
        }
    }
    match best {
        Some((a, b, d)) if d > 0.5 => {
            let round = |p: (f64, f64)| (p.0.round() as i32, p.1.round() as i32);
            Ok(LineSegment::new(round(a), round(b)))
        }
        _ => Err(CompositionError::OutsideFrame {
            rho: line.rho,
            theta: line.theta,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandscapeKind {
    Horizontal,
    Thirds,
    Diagonal,
    Unclassified,
}

impl LandscapeKind {
    pub fn name(self) -> &'static str {
        match self {
            LandscapeKind::Horizontal => "horizontal",
            LandscapeKind::Thirds => "thirds",
            LandscapeKind::Diagonal => "diagonal",
            LandscapeKind::Unclassified => "unclassified",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "horizontal" => Some(Self::Horizontal),
            "thirds" => Some(Self::Thirds),
            "diagonal" => Some(Self::Diagonal),
            "unclassified" => Some(Self::Unclassified),
            _ => None,
        }
    }
}

impl fmt::Display for LandscapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Angle bands and tolerances for landscape classification, in degrees and pixels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompositionBands {
    pub horizontal_max: f64,
    pub diagonal_min: f64,
    pub diagonal_max: f64,
    pub thirds_tolerance: f64,
}

impl Default for CompositionBands {
    fn default() -> Self {
        Self {
            horizontal_max: 5.0,
            diagonal_min: 20.0,
            diagonal_max: 70.0,
            thirds_tolerance: 15.0,
        }
    }
}

/// Positive `tilt_delta` asks for a clockwise camera roll; positive
/// `shift_delta` asks for the line to move down in the frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeComposition {
    pub kind: LandscapeKind,
    pub primary_line: LineSegment,
    pub tilt_delta: f64,
    pub shift_delta: f64,
}

fn nearest_thirds_shift(mean_y: f64) -> f64 {
    let a = THIRDS_Y[0] - mean_y;
    let b = THIRDS_Y[1] - mean_y;
    if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}

pub fn classify_landscape_composition(
    lines: &[LineSegment],
    bands: &CompositionBands,
) -> Result<LandscapeComposition, CompositionError> {
    let primary = *lines.first().ok_or(CompositionError::NoLines)?;
    let primary = LineSegment::new(primary.p0, primary.p1);
    let angle = primary.signed_angle();
    let phi = angle.abs();
    let direction = if angle >= 0.0 { 1.0 } else { -1.0 };

    let (kind, tilt_delta, shift_delta) = if phi <= bands.horizontal_max {
        let shift = nearest_thirds_shift(primary.mean_y());
        let kind = if shift.abs() <= bands.thirds_tolerance {
            LandscapeKind::Thirds
        } else {
            LandscapeKind::Horizontal
        };
        (kind, -angle, shift)
    } else if (bands.diagonal_min..=bands.diagonal_max).contains(&phi) {
        (LandscapeKind::Diagonal, direction * 45.0 - angle, 0.0)
    } else {
        let target = if phi < 22.5 { 0.0 } else { direction * 45.0 };
        (LandscapeKind::Unclassified, target - angle, 0.0)
    };
    Ok(LandscapeComposition {
        kind,
        primary_line: primary,
        tilt_delta,
        shift_delta,
    })
}

/// Edge detection, Hough voting and clipping in one pass. Returns the
/// segments strongest first.
pub fn detect_segments(
    image: &RasterImage,
    threshold: f64,
    k: usize,
) -> Result<Vec<LineSegment>, CompositionError> {
    let edges = detect_edges(image, threshold)?;
    Ok(hough_lines(&edges, k)
        .iter()
        .filter_map(|l| to_segment(l).ok())
        .collect())
}
