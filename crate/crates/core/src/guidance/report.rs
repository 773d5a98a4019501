//! ALG-T and ALG-I pipelines and the report they produce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::compare::{compare_profiles, render_text, AttributeAdvice, Reference};
use super::config::GuideConfig;
use super::profile::{profile_image, AttributeProfile, Mode};
use super::template::TemplateSpec;
use super::GuidanceError;
use crate::annotation::Annotation;
use crate::raster::RasterImage;
use crate::search::{select_guidance, EmbeddingIndex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuidanceReport {
    pub input_id: String,
    pub reference_id: String,
    pub mode: Mode,
    pub advice: Vec<AttributeAdvice>,
    pub text: String,
}

impl GuidanceReport {
    fn build(input_id: &str, reference_id: &str, mode: Mode, advice: Vec<AttributeAdvice>) -> Self {
        let text = render_text(&advice);
        Self {
            input_id: input_id.to_string(),
            reference_id: reference_id.to_string(),
            mode,
            advice,
            text,
        }
    }
}

/// Precomputed profiles of the indexed guidance images, keyed by id.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProfileSidecar(pub BTreeMap<String, AttributeProfile>);

impl ProfileSidecar {
    pub fn from_json(text: &str) -> Result<Self, GuidanceError> {
        serde_json::from_str(text).map_err(|e| GuidanceError::Profiles(e.to_string()))
    }

    pub fn get(&self, id: &str) -> Option<&AttributeProfile> {
        self.0.get(id)
    }
}

/// Guidance against a photography template.
pub fn alg_t(
    image: Option<&RasterImage>,
    annotation: &Annotation,
    forced: Option<Mode>,
    template: &TemplateSpec,
    config: &GuideConfig,
) -> Result<GuidanceReport, GuidanceError> {
    let profile = profile_image(image, annotation, forced, config);
    let advice = compare_profiles(&profile, Reference::Template(template), config)?;
    Ok(GuidanceReport::build(
        &annotation.id,
        &template.name,
        profile.mode,
        advice,
    ))
}

/// Guidance against the best-scoring of the `k` nearest indexed images.
pub fn alg_i(
    image: Option<&RasterImage>,
    annotation: &Annotation,
    forced: Option<Mode>,
    index: &EmbeddingIndex,
    profiles: &ProfileSidecar,
    k: usize,
    config: &GuideConfig,
) -> Result<GuidanceReport, GuidanceError> {
    let query = annotation
        .embedding
        .as_deref()
        .ok_or(GuidanceError::MissingEmbedding)?;
    let results = index.top_k(query, k)?;
    let chosen = select_guidance(&results)?;
    let reference = profiles
        .get(&chosen.id)
        .ok_or_else(|| GuidanceError::MissingProfile(chosen.id.clone()))?;
    let profile = profile_image(image, annotation, forced, config);
    let advice = compare_profiles(&profile, Reference::Profile(reference), config)?;
    Ok(GuidanceReport::build(
        &annotation.id,
        &chosen.id,
        profile.mode,
        advice,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guidance::compare::Verdict;
    use crate::search::{build_index, EmbeddingRecord};

    fn gray() -> RasterImage {
        RasterImage::filled(640, 426, [128, 128, 128]).unwrap()
    }

    #[test]
    fn alg_t_on_gray_landscape() {
        let t = TemplateSpec::builtin("thirds-left-light").unwrap();
        let r = alg_t(
            Some(&gray()),
            &Annotation::bare("g"),
            None,
            &t,
            &GuideConfig::default(),
        )
        .unwrap();
        assert_eq!(r.reference_id, "thirds-left-light");
        assert_eq!(r.advice.len(), 3);
        assert_eq!(r.advice[0].verdict, Verdict::Adjust);
        assert_eq!(r.text.lines().count(), 3);
    }

    #[test]
    fn alg_t_mode_mismatch() {
        let t = TemplateSpec::builtin("rembrandt-thirds").unwrap();
        assert!(matches!(
            alg_t(
                Some(&gray()),
                &Annotation::bare("g"),
                None,
                &t,
                &GuideConfig::default()
            ),
            Err(GuidanceError::ModeMismatch { .. })
        ));
    }

    fn rec(id: &str, score: f32, v: Vec<f32>) -> EmbeddingRecord {
        EmbeddingRecord {
            id: id.into(),
            score,
            vector: v,
        }
    }

    #[test]
    fn alg_i_selects_and_compares() {
        let cfg = GuideConfig::default();
        let index = build_index(vec![
            rec("a", 3.0, vec![1.0, 0.0]),
            rec("b", 9.0, vec![1.0, 0.1]),
            rec("c", 5.0, vec![0.0, 1.0]),
        ])
        .unwrap();
        let ann = Annotation {
            embedding: Some(vec![1.0, 0.0]),
            ..Annotation::bare("q")
        };
        let own = profile_image(Some(&gray()), &ann, None, &cfg);
        let mut profiles = ProfileSidecar::default();
        profiles.0.insert("b".into(), own.clone());
        let r = alg_i(Some(&gray()), &ann, None, &index, &profiles, 3, &cfg).unwrap();
        assert_eq!(r.reference_id, "b");
        assert!(r
            .advice
            .iter()
            .all(|a| matches!(a.verdict, Verdict::Keep | Verdict::Unavailable)));

        // k = 1 takes the nearest neighbor regardless of score.
        let err = alg_i(Some(&gray()), &ann, None, &index, &profiles, 1, &cfg).unwrap_err();
        assert!(matches!(err, GuidanceError::MissingProfile(ref id) if id == "a"));

        let bare = Annotation::bare("q");
        assert!(matches!(
            alg_i(Some(&gray()), &bare, None, &index, &profiles, 3, &cfg),
            Err(GuidanceError::MissingEmbedding)
        ));
    }

    #[test]
    fn sidecar_round_trip() {
        let cfg = GuideConfig::default();
        let mut s = ProfileSidecar::default();
        s.0.insert(
            "x".into(),
            profile_image(Some(&gray()), &Annotation::bare("x"), None, &cfg),
        );
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(ProfileSidecar::from_json(&text).unwrap(), s);
    }
}
