//! Binary sector assignment with a Potts smoothness prior, and hue
//! compression toward the assigned sector.

use serde::{Deserialize, Serialize};

use super::maxflow::FlowGraph;
use super::palette::{signed_arc, PaletteTemplate};
use super::HarmonyError;
use crate::raster::{HsvGrid, HsvPixel};

/// Default Potts weight between 4-neighbours.
pub const DEFAULT_LAMBDA: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorLabeling {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u8>,
    pub energy: f64,
}

fn data_cost(p: HsvPixel, template: &PaletteTemplate, alpha: f64, label: usize) -> f64 {
    p.s * template.sectors[label].distance(p.h, alpha)
}

/// `E(l) = sum_p s_p * d(h_p, sector_{l_p}) + lambda * #{4-neighbour pairs with l_p != l_q}`.
pub fn labeling_energy(
    hsv: &HsvGrid,
    template: &PaletteTemplate,
    alpha: f64,
    lambda: f64,
    labels: &[u8],
) -> f64 {
    let (w, h) = (hsv.width, hsv.height);
    let mut data = 0.0;
    for (p, &l) in hsv.pixels.iter().zip(labels) {
        data += data_cost(*p, template, alpha, usize::from(l));
    }
    let mut cuts = 0usize;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w && labels[i] != labels[i + 1] {
                cuts += 1;
            }
            if y + 1 < h && labels[i] != labels[i + w] {
                cuts += 1;
            }
        }
    }
    data + lambda * cuts as f64
}

/// Assigns each pixel to one of the template's two sectors by exact s-t
/// min-cut. Single-sector templates label everything 0.
pub fn label_sectors(
    hsv: &HsvGrid,
    template: &PaletteTemplate,
    alpha: f64,
    lambda: f64,
) -> Result<SectorLabeling, HarmonyError> {
    let n = hsv.pixels.len();
    let labels = match template.sectors.len() {
        0 => return Err(HarmonyError::NoSectors(template.id)),
        1 => vec![0u8; n],
        _ => {
            let (w, h) = (hsv.width, hsv.height);
            let source = n;
            let sink = n + 1;
            let mut graph = FlowGraph::new(n + 2);
            for (i, p) in hsv.pixels.iter().enumerate() {
                // Cutting source->p puts p on the sink side (label 1).
                let c0 = data_cost(*p, template, alpha, 0);
                let c1 = data_cost(*p, template, alpha, 1);
                let common = c0.min(c1);
                if c1 - common > 0.0 {
                    graph.add_edge(source, i, c1 - common, 0.0);
                }
                if c0 - common > 0.0 {
                    graph.add_edge(i, sink, c0 - common, 0.0);
                }
            }
            if lambda > 0.0 {
                for y in 0..h {
                    for x in 0..w {
                        let i = y * w + x;
                        if x + 1 < w {
                            graph.add_edge(i, i + 1, lambda, lambda);
                        }
                        if y + 1 < h {
                            graph.add_edge(i, i + w, lambda, lambda);
                        }
                    }
                }
            }
            let (_, source_side) = graph.min_cut(source, sink);
            source_side[..n]
                .iter()
                .map(|&s| if s { 0 } else { 1 })
                .collect()
        }
    };
    let energy = labeling_energy(hsv, template, alpha, lambda, &labels);
    Ok(SectorLabeling {
        width: hsv.width,
        height: hsv.height,
        labels,
        energy,
    })
}

/// Pulls each hue toward its assigned sector center:
/// `h' = C + (w/2) * tanh(2 * delta / w)`, with `delta` the signed arc from `C`.
pub fn harmonize(
    hsv: &HsvGrid,
    template: &PaletteTemplate,
    alpha: f64,
    labeling: &SectorLabeling,
) -> Result<HsvGrid, HarmonyError> {
    if labeling.labels.len() != hsv.pixels.len() {
        return Err(HarmonyError::LabelingSize {
            expected: hsv.pixels.len(),
            actual: labeling.labels.len(),
        });
    }
    if template.sectors.is_empty() {
        return Err(HarmonyError::NoSectors(template.id));
    }
    let pixels = hsv
        .pixels
        .iter()
        .zip(&labeling.labels)
        .map(|(p, &l)| {
            let sector = template
                .sectors
                .get(usize::from(l))
                .unwrap_or(&template.sectors[0]);
            HsvPixel {
                h: compress_hue(p.h, sector.center(alpha), sector.width),
                ..*p
            }
        })
        .collect();
    Ok(HsvGrid {
        width: hsv.width,
        height: hsv.height,
        pixels,
    })
}

pub fn compress_hue(hue: f64, center: f64, width: f64) -> f64 {
    let half = width / 2.0;
    let delta = signed_arc(center, hue);
    // tanh saturates to exactly 1.0 in floating point for large ratios.
    let pull = (delta / half).tanh().clamp(-1.0 + 1e-12, 1.0 - 1e-12);
    (center + half * pull).rem_euclid(360.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmony::palette::{arc_distance, TemplateId};
    use proptest::prelude::*;

    fn grid(pixels: Vec<HsvPixel>, width: usize) -> HsvGrid {
        HsvGrid {
            width,
            height: pixels.len() / width,
            pixels,
        }
    }

    fn exhaustive_minimum(hsv: &HsvGrid, t: &PaletteTemplate, alpha: f64, lambda: f64) -> f64 {
        let n = hsv.pixels.len();
        (0u32..(1 << n))
            .map(|mask| {
                let labels: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                labeling_energy(hsv, t, alpha, lambda, &labels)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn px(h: f64, s: f64) -> HsvPixel {
        HsvPixel { h, s, v: 1.0 }
    }

    #[test]
    fn zero_lambda_picks_nearest_sector() {
        let t = PaletteTemplate::standard(TemplateId::I);
        let hsv = grid(
            vec![
                px(10.0, 1.0),
                px(170.0, 1.0),
                px(200.0, 0.4),
                px(350.0, 0.9),
            ],
            2,
        );
        let lab = label_sectors(&hsv, &t, 0.0, 0.0).unwrap();
        for (p, &l) in hsv.pixels.iter().zip(&lab.labels) {
            let (nearest, _) = t.nearest_sector(p.h, 0.0).unwrap();
            assert_eq!(usize::from(l), nearest, "hue {}", p.h);
        }
    }

    #[test]
    fn two_by_two_matches_enumeration() {
        let t = PaletteTemplate::standard(TemplateId::L);
        let hsv = grid(
            vec![px(40.0, 1.0), px(60.0, 0.5), px(300.0, 0.7), px(95.0, 0.2)],
            2,
        );
        let lab = label_sectors(&hsv, &t, 20.0, 0.5).unwrap();
        let oracle = exhaustive_minimum(&hsv, &t, 20.0, 0.5);
        assert!(
            (lab.energy - oracle).abs() < 1e-9,
            "{} vs {}",
            lab.energy,
            oracle
        );
    }

    #[test]
    fn uniform_hue_gives_uniform_labels() {
        let t = PaletteTemplate::standard(TemplateId::X);
        let hsv = grid(vec![px(77.0, 0.8); 12], 4);
        let lab = label_sectors(&hsv, &t, 140.0, DEFAULT_LAMBDA).unwrap();
        assert!(lab.labels.iter().all(|&l| l == lab.labels[0]));
    }

    #[test]
    fn single_sector_is_all_zero() {
        let t = PaletteTemplate::standard(TemplateId::V);
        let hsv = grid(vec![px(10.0, 1.0), px(200.0, 1.0)], 2);
        let lab = label_sectors(&hsv, &t, 0.0, 0.5).unwrap();
        assert_eq!(lab.labels, vec![0, 0]);
    }

    #[test]
    fn achromatic_template_is_an_error() {
        let t = PaletteTemplate::standard(TemplateId::N);
        let hsv = grid(vec![px(10.0, 1.0)], 1);
        assert_eq!(
            label_sectors(&hsv, &t, 0.0, 0.5),
            Err(HarmonyError::NoSectors(TemplateId::N))
        );
    }

    #[test]
    fn harmonize_formula() {
        let t = PaletteTemplate::standard(TemplateId::SmallI);
        let hsv = grid(vec![px(100.0, 0.5), px(160.0, 0.5)], 2);
        let lab = label_sectors(&hsv, &t, 100.0, 0.0).unwrap();
        let out = harmonize(&hsv, &t, 100.0, &lab).unwrap();
        assert_eq!(out.pixels[0].h, 100.0);
        let expected = 100.0 + 9.0 * (120.0f64 / 18.0).tanh();
        assert!((out.pixels[1].h - expected).abs() < 1e-9);
        assert_eq!(out.pixels[1].s, 0.5);
    }

    #[test]
    fn harmonize_rejects_mismatched_labeling() {
        let t = PaletteTemplate::standard(TemplateId::SmallI);
        let hsv = grid(vec![px(1.0, 1.0), px(2.0, 1.0)], 2);
        let lab = SectorLabeling {
            width: 1,
            height: 1,
            labels: vec![0],
            energy: 0.0,
        };
        assert!(harmonize(&hsv, &t, 0.0, &lab).is_err());
    }

    proptest! {
        #[test]
        fn small_images_reach_exhaustive_optimum(
            pixels in proptest::collection::vec((0.0f64..360.0, 0.0f64..1.0), 1..=9),
            alpha in 0.0f64..360.0,
            lambda in 0.0f64..3.0,
            which in 0usize..4,
        ) {
            let ids = [TemplateId::L, TemplateId::I, TemplateId::Y, TemplateId::X];
            let t = PaletteTemplate::standard(ids[which]);
            let n = pixels.len();
            let width = if n % 3 == 0 { 3 } else { n };
            let hsv = grid(pixels.into_iter().map(|(h, s)| px(h, s)).collect(), width);
            let lab = label_sectors(&hsv, &t, alpha, lambda).unwrap();
            let oracle = exhaustive_minimum(&hsv, &t, alpha, lambda);
            prop_assert!((lab.energy - oracle).abs() <= 1e-9 * oracle.max(1.0));
        }

        #[test]
        fn compressed_hue_stays_inside(hue in 0.0f64..360.0, center in 0.0f64..360.0, width in 1.0f64..180.0) {
            let out = compress_hue(hue, center, width);
            prop_assert!(arc_distance(out, center) < width / 2.0 || width / 2.0 - arc_distance(out, center) < 1e-9);
        }

        #[test]
        fn compression_is_monotone(a in -179.0f64..179.0, b in -179.0f64..179.0, width in 1.0f64..180.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let c = 180.0;
            let h_lo = compress_hue(c + lo, c, width);
            let h_hi = compress_hue(c + hi, c, width);
            prop_assert!(h_lo <= h_hi + 1e-12);
        }
    }
}
