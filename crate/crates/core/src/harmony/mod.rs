//! Color harmony: template fitting, sector labeling, hue compression and the
//! colorfulness scale.

mod colorfulness;
mod labeling;
pub(crate) mod maxflow;
mod palette;

use thiserror::Error;

pub use colorfulness::{
    color_advice, colorfulness, colorfulness_metric, level_advice, level_name, ColorAdvice,
    ColorDirection, ColorfulnessReport, ColorfulnessScale,
};
pub use labeling::{
    compress_hue, harmonize, label_sectors, labeling_energy, SectorLabeling, DEFAULT_LAMBDA,
};
pub use palette::{
    arc_distance, best_angle, best_palette, best_palette_in, harmony_energy, signed_arc,
    HarmonyFit, HarmonyScheme, PaletteSet, PaletteTemplate, Sector, TemplateId,
};

use crate::raster::{hue_histogram, rgb_to_hsv, RasterImage, DEFAULT_S_MIN, DEFAULT_V_MIN};

#[derive(Debug, Error, PartialEq)]
pub enum HarmonyError {
    #[error("unknown harmony template {0:?}")]
    UnknownTemplate(String),
    #[error("invalid template {id}: {reason}")]
    InvalidTemplate { id: TemplateId, reason: String },
    #[error("template {0} has no sectors to label against")]
    NoSectors(TemplateId),
    #[error("labeling covers {actual} pixels, image has {expected}")]
    LabelingSize { expected: usize, actual: usize },
}

/// Output of the full fit / label / compress pipeline on one image.
#[derive(Clone, Debug)]
pub struct Harmonized {
    pub fit: HarmonyFit,
    pub labeling: SectorLabeling,
    pub image: RasterImage,
}

/// Fits the best palette to `image`, assigns sectors with weight `lambda`
/// and returns the hue-compressed result.
pub fn harmonize_image(
    image: &RasterImage,
    palettes: &PaletteSet,
    lambda: f64,
) -> Result<Harmonized, HarmonyError> {
    let hsv = rgb_to_hsv(image);
    let fit = best_palette_in(&hue_histogram(&hsv, DEFAULT_S_MIN, DEFAULT_V_MIN), palettes);
    let template = palettes
        .get(fit.scheme.template_id)
        .cloned()
        .unwrap_or_else(|| PaletteTemplate::standard(fit.scheme.template_id));
    let labeling = label_sectors(&hsv, &template, fit.scheme.alpha, lambda)?;
    let out = harmonize(&hsv, &template, fit.scheme.alpha, &labeling)?;
    Ok(Harmonized {
        fit,
        labeling,
        image: out.to_rgb(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::HsvPixel;

    #[test]
    fn harmonized_image_hues_sit_in_the_fitted_palette() {
        let img = RasterImage::from_fn(24, 16, |x, y| {
            let h = if x < 12 {
                20.0 + y as f64
            } else {
                200.0 + (x as f64) * 2.0
            };
            HsvPixel { h, s: 0.9, v: 0.9 }.to_rgb()
        })
        .unwrap();
        let out = harmonize_image(&img, &PaletteSet::default(), DEFAULT_LAMBDA).unwrap();
        let template = PaletteTemplate::standard(out.fit.scheme.template_id);
        let hsv = rgb_to_hsv(&out.image);
        for p in &hsv.pixels {
            // 8-bit requantization moves hue by well under a degree.
            assert!(
                template.distance(p.h, out.fit.scheme.alpha) < 1.0,
                "hue {}",
                p.h
            );
        }
    }
}
