//! Hue-wheel harmony templates and the saturation-weighted fitting energy.
//!
//! A template is a set of hue sectors that may be rotated as a whole by an
//! angle `alpha`. The fitting energy of a hue histogram against a rotated
//! template sums, over every occupied bin, the bin's saturation mass times the
//! arc distance from the bin hue to the nearest sector border (zero inside).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarmonyError;
use crate::raster::HueHistogram;

/// Shortest arc between two hues on the color wheel, in `[0, 180]`.
pub fn arc_distance(h1: f64, h2: f64) -> f64 {
    let d = (h1 - h2).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Signed shortest arc from `from` to `to`, in `(-180, 180]`.
pub fn signed_arc(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TemplateId {
    #[serde(rename = "i")]
    SmallI,
    V,
    L,
    I,
    T,
    Y,
    X,
    N,
}

impl TemplateId {
    /// Chromatic templates in tie-break order.
    pub const CHROMATIC: [TemplateId; 7] = [
        TemplateId::SmallI,
        TemplateId::V,
        TemplateId::L,
        TemplateId::I,
        TemplateId::T,
        TemplateId::Y,
        TemplateId::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::SmallI => "i",
            TemplateId::V => "V",
            TemplateId::L => "L",
            TemplateId::I => "I",
            TemplateId::T => "T",
            TemplateId::Y => "Y",
            TemplateId::X => "X",
            TemplateId::N => "N",
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = HarmonyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "i" => TemplateId::SmallI,
            "V" => TemplateId::V,
            "L" => TemplateId::L,
            "I" => TemplateId::I,
            "T" => TemplateId::T,
            "Y" => TemplateId::Y,
            "X" => TemplateId::X,
            "N" => TemplateId::N,
            other => return Err(HarmonyError::UnknownTemplate(other.to_string())),
        })
    }
}

/// One hue sector, positioned relative to the template rotation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub center_offset: f64,
    pub width: f64,
}

impl Sector {
    pub fn new(center_offset: f64, width: f64) -> Self {
        Self {
            center_offset,
            width,
        }
    }

    /// Arc distance from `hue` to this sector rotated by `alpha`; zero inside.
    pub fn distance(&self, hue: f64, alpha: f64) -> f64 {
        let outside = arc_distance(hue, alpha + self.center_offset) - self.width / 2.0;
        if outside <= 0.0 {
            0.0
        } else {
            outside
        }
    }

    pub fn center(&self, alpha: f64) -> f64 {
        (alpha + self.center_offset).rem_euclid(360.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaletteTemplate {
    pub id: TemplateId,
    pub sectors: Vec<Sector>,
}

impl PaletteTemplate {
    pub fn new(id: TemplateId, sectors: Vec<Sector>) -> Result<Self, HarmonyError> {
        if sectors.len() > 2 {
            return Err(HarmonyError::InvalidTemplate {
                id,
                reason: format!("{} sectors, at most 2 allowed", sectors.len()),
            });
        }
        for s in &sectors {
            if !(s.width > 0.0 && s.width <= 360.0) || !s.center_offset.is_finite() {
                return Err(HarmonyError::InvalidTemplate {
                    id,
                    reason: format!("sector width {} outside (0, 360]", s.width),
                });
            }
        }
        if let [a, b] = sectors.as_slice() {
            if arc_distance(a.center_offset, b.center_offset) < (a.width + b.width) / 2.0 {
                return Err(HarmonyError::InvalidTemplate {
                    id,
                    reason: "sectors overlap".into(),
                });
            }
        }
        if id == TemplateId::N && !sectors.is_empty() {
            return Err(HarmonyError::InvalidTemplate {
                id,
                reason: "the achromatic template has no sectors".into(),
            });
        }
        if id != TemplateId::N && sectors.is_empty() {
            return Err(HarmonyError::InvalidTemplate {
                id,
                reason: "chromatic templates need at least one sector".into(),
            });
        }
        Ok(Self { id, sectors })
    }

    /// Standard sector layout for `id`.
    pub fn standard(id: TemplateId) -> Self {
        let sectors = match id {
            TemplateId::SmallI => vec![Sector::new(0.0, 18.0)],
            TemplateId::V => vec![Sector::new(0.0, 93.6)],
            TemplateId::L => vec![Sector::new(0.0, 18.0), Sector::new(90.0, 79.2)],
            TemplateId::I => vec![Sector::new(0.0, 18.0), Sector::new(180.0, 18.0)],
            TemplateId::T => vec![Sector::new(0.0, 180.0)],
            TemplateId::Y => vec![Sector::new(0.0, 93.6), Sector::new(180.0, 18.0)],
            TemplateId::X => vec![Sector::new(0.0, 93.6), Sector::new(180.0, 93.6)],
            TemplateId::N => vec![],
        };
        Self { id, sectors }
    }

    /// Distance from `hue` to the nearest sector and that sector's index.
    pub fn nearest_sector(&self, hue: f64, alpha: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.sectors.iter().enumerate() {
            let d = s.distance(hue, alpha);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best
    }

    pub fn distance(&self, hue: f64, alpha: f64) -> f64 {
        self.nearest_sector(hue, alpha).map_or(0.0, |(_, d)| d)
    }
}

/// The full set of templates used for fitting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaletteSet {
    pub templates: Vec<PaletteTemplate>,
}

impl Default for PaletteSet {
    fn default() -> Self {
        Self {
            templates: TemplateId::CHROMATIC
                .iter()
                .map(|&id| PaletteTemplate::standard(id))
                .collect(),
        }
    }
}

impl PaletteSet {
    pub fn get(&self, id: TemplateId) -> Option<&PaletteTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonyScheme {
    pub template_id: TemplateId,
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonyFit {
    pub scheme: HarmonyScheme,
    pub energy: f64,
}

/// Histogram bins are represented by their lower edge, so integer-hue
/// pixels contribute exactly their own distance.
fn bin_hue(bin: usize) -> f64 {
    bin as f64
}

fn energy_of(occupied: &[(f64, f64)], template: &PaletteTemplate, alpha: f64) -> f64 {
    occupied
        .iter()
        .map(|&(hue, w)| w * template.distance(hue, alpha))
        .sum()
}

fn occupied_hues(hist: &HueHistogram) -> Vec<(f64, f64)> {
    hist.occupied().map(|(b, w)| (bin_hue(b), w)).collect()
}

/// Fitting energy of `hist` against `template` rotated by `alpha`.
pub fn harmony_energy(hist: &HueHistogram, template: &PaletteTemplate, alpha: f64) -> f64 {
    energy_of(&occupied_hues(hist), template, alpha)
}

/// Rotation minimizing [`harmony_energy`].
///
/// A 1° scan is followed by a 0.1° refinement. Energy is Lipschitz in the
/// rotation with constant equal to the histogram mass, so every grid cell whose
/// value minus `mass / 2` still undercuts the best refined energy is refined
/// too; the result equals the minimum over the whole 0.1° lattice. Ties go to
/// the smallest angle.
pub fn best_angle(hist: &HueHistogram, template: &PaletteTemplate) -> (f64, f64) {
    let occupied = occupied_hues(hist);
    let mass: f64 = occupied.iter().map(|&(_, w)| w).sum();
    if template.sectors.is_empty() || occupied.is_empty() {
        return (0.0, 0.0);
    }

    let grid: Vec<f64> = (0..360)
        .map(|deg| energy_of(&occupied, template, f64::from(deg)))
        .collect();
    let winner = argmin_first(&grid);

    // Tenths of a degree, 0..3600.
    let refine = |center: usize, best: &mut (u32, f64)| {
        for step in -5i32..=5 {
            let tenth = (center as i32 * 10 + step).rem_euclid(3600) as u32;
            let e = energy_of(&occupied, template, f64::from(tenth) / 10.0);
            if e < best.1 || (e == best.1 && tenth < best.0) {
                *best = (tenth, e);
            }
        }
    };

    let mut best = (winner as u32 * 10, grid[winner]);
    refine(winner, &mut best);

    let slack = mass / 2.0 * (1.0 + 1e-9) + 1e-12;
    for (deg, &e) in grid.iter().enumerate() {
        if deg != winner && e - slack <= best.1 {
            refine(deg, &mut best);
        }
    }
    (f64::from(best.0) / 10.0, best.1)
}

fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Minimum-energy scheme over the chromatic templates of `palettes`, in order.
pub fn best_palette_in(hist: &HueHistogram, palettes: &PaletteSet) -> HarmonyFit {
    let mut best: Option<HarmonyFit> = None;
    for template in palettes.templates.iter().filter(|t| !t.sectors.is_empty()) {
        let (alpha, energy) = best_angle(hist, template);
        if best.is_none_or(|b| energy < b.energy) {
            best = Some(HarmonyFit {
                scheme: HarmonyScheme {
                    template_id: template.id,
                    alpha,
                },
                energy,
            });
        }
    }
    best.unwrap_or(HarmonyFit {
        scheme: HarmonyScheme {
            template_id: TemplateId::N,
            alpha: 0.0,
        },
        energy: 0.0,
    })
}

/// [`best_palette_in`] with the standard templates.
pub fn best_palette(hist: &HueHistogram) -> HarmonyFit {
    best_palette_in(hist, &PaletteSet::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{hue_histogram, HsvGrid, HsvPixel};
    use proptest::prelude::*;

    fn single_bin(bin: usize, mass: f64) -> HueHistogram {
        let mut bins = [0.0; 360];
        bins[bin] = mass;
        HueHistogram::from_bins(bins)
    }

    /// Per-pixel evaluation of the energy straight from the definition.
    fn per_pixel_energy(pixels: &[HsvPixel], template: &PaletteTemplate, alpha: f64) -> f64 {
        pixels
            .iter()
            .map(|p| {
                let d = template
                    .sectors
                    .iter()
                    .map(|s| {
                        let c = alpha + s.center_offset;
                        let raw = (p.h - c).rem_euclid(360.0);
                        let arc = raw.min(360.0 - raw);
                        (arc - s.width / 2.0).max(0.0)
                    })
                    .fold(f64::INFINITY, f64::min);
                d * p.s
            })
            .sum()
    }

    fn brute_force(hist: &HueHistogram, template: &PaletteTemplate) -> f64 {
        (0..3600)
            .map(|t| harmony_energy(hist, template, f64::from(t) / 10.0))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn arc_distance_cases() {
        assert_eq!(arc_distance(0.0, 0.0), 0.0);
        assert_eq!(arc_distance(350.0, 10.0), 20.0);
        assert_eq!(arc_distance(90.0, 270.0), 180.0);
        assert_eq!(signed_arc(350.0, 10.0), 20.0);
        assert_eq!(signed_arc(10.0, 350.0), -20.0);
    }

    #[test]
    fn standard_templates_validate() {
        for id in TemplateId::CHROMATIC.iter().copied().chain([TemplateId::N]) {
            let t = PaletteTemplate::standard(id);
            PaletteTemplate::new(t.id, t.sectors.clone()).unwrap();
        }
    }

    #[test]
    fn overlapping_sectors_rejected() {
        let err = PaletteTemplate::new(
            TemplateId::X,
            vec![Sector::new(0.0, 93.6), Sector::new(60.0, 93.6)],
        );
        assert!(err.is_err());
    }

    #[test]
    fn mass_inside_sector_costs_nothing() {
        let t = PaletteTemplate::standard(TemplateId::V);
        let mut bins = [0.0; 360];
        for b in 80..120 {
            bins[b] = 0.7;
        }
        let hist = HueHistogram::from_bins(bins);
        assert_eq!(harmony_energy(&hist, &t, 100.0), 0.0);
    }

    #[test]
    fn outside_mass_pays_distance_to_border() {
        let t = PaletteTemplate::standard(TemplateId::SmallI);
        let hist = single_bin(30, 2.5);
        assert!((harmony_energy(&hist, &t, 0.0) - 2.5 * 21.0).abs() < 1e-12);
        let pixels = vec![
            HsvPixel {
                h: 30.0,
                s: 1.0,
                v: 1.0
            };
            3
        ];
        let grid = HsvGrid {
            width: 3,
            height: 1,
            pixels: pixels.clone(),
        };
        let via_hist = harmony_energy(&hue_histogram(&grid, 0.05, 0.05), &t, 0.0);
        assert!((via_hist - per_pixel_energy(&pixels, &t, 0.0)).abs() < 1e-9);
        assert!((via_hist - 63.0).abs() < 1e-9);
    }

    #[test]
    fn empty_histogram() {
        let hist = HueHistogram::default();
        let t = PaletteTemplate::standard(TemplateId::L);
        assert_eq!(harmony_energy(&hist, &t, 33.0), 0.0);
        assert_eq!(best_angle(&hist, &t), (0.0, 0.0));
        let fit = best_palette(&hist);
        assert_eq!(fit.scheme.template_id, TemplateId::SmallI);
        assert_eq!(fit.scheme.alpha, 0.0);
        assert_eq!(fit.energy, 0.0);
    }

    #[test]
    fn single_hue_fits_inside_narrow_sector() {
        let hist = single_bin(123, 4.0);
        let t = PaletteTemplate::standard(TemplateId::SmallI);
        let (alpha, energy) = best_angle(&hist, &t);
        assert_eq!(energy, 0.0);
        assert!(arc_distance(alpha, 123.0) <= 9.0);
        assert_eq!(energy, brute_force(&hist, &t));
        assert_eq!(best_palette(&hist).scheme.template_id, TemplateId::SmallI);
    }

    #[test]
    fn complementary_pair_aligns_with_i_template() {
        let mut bins = [0.0; 360];
        bins[0] = 1.0;
        bins[180] = 1.0;
        let hist = HueHistogram::from_bins(bins);
        let t = PaletteTemplate::standard(TemplateId::I);
        let (_, energy) = best_angle(&hist, &t);
        assert_eq!(energy, 0.0);
        assert_eq!(brute_force(&hist, &t), 0.0);
    }

    #[test]
    fn half_wheel_needs_the_t_template() {
        let mut bins = [0.0; 360];
        for b in 0..=180 {
            bins[b] = 1.0;
        }
        let hist = HueHistogram::from_bins(bins);
        let fit = best_palette(&hist);
        assert_eq!(fit.scheme.template_id, TemplateId::T);
        assert_eq!(fit.energy, 0.0);
        for id in [
            TemplateId::SmallI,
            TemplateId::V,
            TemplateId::L,
            TemplateId::I,
        ] {
            assert!(
                brute_force(&hist, &PaletteTemplate::standard(id)) > 0.0,
                "{id}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn best_angle_matches_lattice_minimum(
            mass in proptest::collection::vec((0usize..360, 0.01f64..1.0), 1..12),
            which in 0usize..7,
        ) {
            let mut bins = [0.0; 360];
            for (b, w) in mass { bins[b] += w; }
            let hist = HueHistogram::from_bins(bins);
            let t = PaletteTemplate::standard(TemplateId::CHROMATIC[which]);
            let (_, e) = best_angle(&hist, &t);
            let oracle = brute_force(&hist, &t);
            prop_assert!(e <= oracle + 1e-6 * oracle.max(1.0));
        }

        #[test]
        fn rotation_equivariance(
            mass in proptest::collection::vec((0usize..360, 0.01f64..1.0), 1..10),
            shift in 0i32..360,
            alpha in 0u32..360,
        ) {
            let mut bins = [0.0; 360];
            for (b, w) in mass { bins[b] += w; }
            let hist = HueHistogram::from_bins(bins);
            let rotated = hist.rotated(shift);
            let t = PaletteTemplate::standard(TemplateId::Y);
            let a = f64::from(alpha);
            let e0 = harmony_energy(&hist, &t, a);
            let e1 = harmony_energy(&rotated, &t, (a + f64::from(shift)) % 360.0);
            prop_assert!((e0 - e1).abs() <= 1e-9 * e0.max(1.0));
            let (_, b0) = best_angle(&hist, &t);
            let (_, b1) = best_angle(&rotated, &t);
            prop_assert!((b0 - b1).abs() <= 1e-9 * b0.max(1.0));
        }
    }
}
