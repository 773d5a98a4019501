//! `shotguide`: shooting advice for color, lighting and composition.
//!
//! Exit codes:
//!   0  success
//!   1  other failure (config, I/O on outputs)
//!   2  unreadable input (image, annotation, index or profile file)
//!   3  invalid annotation
//!   4  unknown or invalid template
//!   5  mode mismatch between input and reference
//!   6  index-build record validation failure
//!   7  annotation has no embedding
//!   8  selected guidance image has no stored profile

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use shotguide_core::guidance::{Mode, ProfileSidecar, TemplateSpec};
use shotguide_core::search::DEFAULT_K;
use shotguide_core::{
    alg_i, alg_t, build_index, json, profile_image, Annotation, AnnotationSidecar, EmbeddingIndex,
    EmbeddingRecord, GuidanceError, GuidanceReport, GuideConfig, RasterImage, SearchError,
};

const CONFIG_ENV: &str = "ALG_CONFIG";

#[derive(Parser)]
#[command(
    name = "shotguide",
    version,
    about = "Aesthetic shooting guidance for photographs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Landscape,
    Portrait,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Landscape => Mode::Landscape,
            ModeArg::Portrait => Mode::Portrait,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the attribute profile of an image as JSON.
    Analyze {
        image: PathBuf,
        #[arg(long)]
        annotation: Option<PathBuf>,
        /// Override face-based landscape/portrait routing.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Compare an image against a photography template.
    GuideTemplate {
        image: PathBuf,
        #[arg(long)]
        annotation: Option<PathBuf>,
        /// Built-in template name or path to a template TOML file.
        #[arg(long)]
        template: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build the embedding index and profile sidecar from annotation files.
    IndexBuild {
        annotations_dir: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        profiles: PathBuf,
        /// Directory holding `<stem>.png` or `<stem>.bmp` for each sidecar.
        /// Defaults to the annotations directory.
        #[arg(long)]
        images: Option<PathBuf>,
    },
    /// Compare an image against the best guidance image retrieved from an index.
    GuideImage {
        image: PathBuf,
        #[arg(long)]
        annotation: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        profiles: PathBuf,
        #[arg(short, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Other(String),
    #[error("{0}")]
    Unreadable(String),
    #[error("{0}")]
    BadAnnotation(String),
    #[error("{0}")]
    Template(String),
    #[error("{0}")]
    ModeMismatch(String),
    #[error("{0}")]
    IndexRecord(String),
    #[error("{0}")]
    MissingEmbedding(String),
    #[error("{0}")]
    MissingProfile(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Unreadable(_) => 2,
            Failure::BadAnnotation(_) => 3,
            Failure::Template(_) => 4,
            Failure::ModeMismatch(_) => 5,
            Failure::IndexRecord(_) => 6,
            Failure::MissingEmbedding(_) => 7,
            Failure::MissingProfile(_) => 8,
        }
    }
}

impl From<GuidanceError> for Failure {
    fn from(e: GuidanceError) -> Self {
        let msg = e.to_string();
        match e {
            GuidanceError::UnknownTemplate(_) | GuidanceError::InvalidTemplate(_) => {
                Failure::Template(msg)
            }
            GuidanceError::ModeMismatch { .. } => Failure::ModeMismatch(msg),
            GuidanceError::MissingEmbedding => Failure::MissingEmbedding(msg),
            GuidanceError::MissingProfile(_) => Failure::MissingProfile(msg),
            GuidanceError::Profiles(_) => Failure::Unreadable(msg),
            GuidanceError::Search(SearchError::QueryDimension { .. })
            | GuidanceError::Search(SearchError::ZeroQuery) => Failure::BadAnnotation(msg),
            GuidanceError::Config(_) | GuidanceError::Search(_) => Failure::Other(msg),
        }
    }
}

fn load_config() -> Result<(GuideConfig, Option<PathBuf>), Failure> {
    match std::env::var_os(CONFIG_ENV) {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            let cfg = GuideConfig::load_dir(&dir).map_err(|e| Failure::Other(e.to_string()))?;
            Ok((cfg, Some(dir)))
        }
        None => Ok((GuideConfig::default(), None)),
    }
}

fn load_image(path: &Path) -> Result<RasterImage, Failure> {
    let img = image::open(path)
        .map_err(|e| Failure::Unreadable(format!("{}: {e}", path.display())))?
        .to_rgb8();
    RasterImage::from_rgb_bytes(img.width() as usize, img.height() as usize, img.as_raw())
        .map_err(|e| Failure::Unreadable(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Unreadable(format!("{}: {e}", path.display())))
}

fn parse_annotation(path: &Path, text: &str) -> Result<Annotation, String> {
    AnnotationSidecar::from_json(text)
        .and_then(|s| s.validate())
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Loads the annotation, or a bare one named after the image file.
fn load_annotation(path: Option<&Path>, image: &Path) -> Result<Annotation, Failure> {
    match path {
        Some(p) => parse_annotation(p, &read_text(p)?).map_err(Failure::BadAnnotation),
        None => Ok(Annotation::bare(
            image
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".into()),
        )),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    json::to_string(value).map_err(|e| Failure::Other(e.to_string()))
}

fn emit_report(report: &GuidanceReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => to_json(report),
        Format::Text => Ok(report.text.clone()),
    }
}

fn find_image(dir: &Path, stem: &str) -> Option<PathBuf> {
    ["png", "bmp"]
        .iter()
        .map(|ext| dir.join(format!("{stem}.{ext}")))
        .find(|p| p.is_file())
}

fn index_build(
    dir: &Path,
    output: &Path,
    profiles_path: &Path,
    images: Option<&Path>,
    config: &GuideConfig,
) -> Result<String, Failure> {
    let entries =
        fs::read_dir(dir).map_err(|e| Failure::Unreadable(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.is_file())
        .collect();
    files.sort();

    let image_dir = images.unwrap_or(dir);
    let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut records = Vec::new();
    let mut profiles = ProfileSidecar::default();
    for path in &files {
        let bad = |msg: String| Failure::IndexRecord(format!("{}: {msg}", path.display()));
        let text = read_text(path)?;
        let ann = parse_annotation(path, &text).map_err(Failure::IndexRecord)?;
        if let Some(first) = seen.get(&ann.id) {
            return Err(bad(format!(
                "duplicate id {:?} (also in {})",
                ann.id,
                first.display()
            )));
        }
        let vector = ann
            .embedding
            .clone()
            .ok_or_else(|| bad("missing embedding".into()))?;
        let score = ann
            .aesthetic_score
            .ok_or_else(|| bad("missing aesthetic_score".into()))?;
        let record = EmbeddingRecord {
            id: ann.id.clone(),
            score: score as f32,
            vector,
        };
        // Per-record checks (zero vector, score range) name the file.
        build_index(vec![record.clone()]).map_err(|e| bad(e.to_string()))?;
        if let Some(first) = records.first().map(|r: &EmbeddingRecord| r.vector.len()) {
            if record.vector.len() != first {
                return Err(bad(format!(
                    "embedding dimension {} differs from {first}",
                    record.vector.len()
                )));
            }
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let image = match find_image(image_dir, &stem) {
            Some(p) => Some(load_image(&p)?),
            None => None,
        };
        profiles.0.insert(
            ann.id.clone(),
            profile_image(image.as_ref(), &ann, None, config),
        );
        seen.insert(ann.id.clone(), path.clone());
        records.push(record);
    }
    if records.is_empty() {
        return Err(Failure::IndexRecord(format!(
            "{}: no annotation files",
            dir.display()
        )));
    }
    let count = records.len();
    let index = build_index(records).map_err(|e| Failure::IndexRecord(e.to_string()))?;
    fs::write(output, index.to_bytes())
        .map_err(|e| Failure::Other(format!("{}: {e}", output.display())))?;
    fs::write(profiles_path, to_json(&profiles)?)
        .map_err(|e| Failure::Other(format!("{}: {e}", profiles_path.display())))?;
    Ok(format!("indexed {count} records\n"))
}

fn run(cli: Cli) -> Result<String, Failure> {
    let (config, config_dir) = load_config()?;
    match cli.command {
        Command::Analyze {
            image,
            annotation,
            mode,
        } => {
            let img = load_image(&image)?;
            let ann = load_annotation(annotation.as_deref(), &image)?;
            to_json(&profile_image(
                Some(&img),
                &ann,
                mode.map(Mode::from),
                &config,
            ))
        }
        Command::GuideTemplate {
            image,
            annotation,
            template,
            mode,
            format,
        } => {
            let spec = TemplateSpec::resolve(&template, config_dir.as_deref())?;
            let img = load_image(&image)?;
            let ann = load_annotation(annotation.as_deref(), &image)?;
            let report = alg_t(Some(&img), &ann, mode.map(Mode::from), &spec, &config)?;
            emit_report(&report, format)
        }
        Command::IndexBuild {
            annotations_dir,
            output,
            profiles,
            images,
        } => index_build(
            &annotations_dir,
            &output,
            &profiles,
            images.as_deref(),
            &config,
        ),
        Command::GuideImage {
            image,
            annotation,
            index,
            profiles,
            k,
            mode,
            format,
        } => {
            let img = load_image(&image)?;
            let ann = load_annotation(Some(&annotation), &image)?;
            if ann.embedding.is_none() {
                return Err(GuidanceError::MissingEmbedding.into());
            }
            let bytes = fs::read(&index)
                .map_err(|e| Failure::Unreadable(format!("{}: {e}", index.display())))?;
            let idx = EmbeddingIndex::from_bytes(&bytes)
                .map_err(|e| Failure::Unreadable(format!("{}: {e}", index.display())))?;
            let sidecar = ProfileSidecar::from_json(&read_text(&profiles)?)
                .map_err(|e| Failure::Unreadable(format!("{}: {e}", profiles.display())))?;
            let report = alg_i(
                Some(&img),
                &ann,
                mode.map(Mode::from),
                &idx,
                &sidecar,
                k,
                &config,
            )?;
            emit_report(&report, format)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("shotguide: {e}");
            ExitCode::from(e.code())
        }
    }
}
