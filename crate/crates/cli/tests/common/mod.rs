#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_shotguide"));
    cmd.env_remove("ALG_CONFIG");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn shotguide")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn write_png(path: &Path, w: u32, h: u32, f: impl Fn(u32, u32) -> [u8; 3]) {
    let img = image::RgbImage::from_fn(w, h, |x, y| image::Rgb(f(x, y)));
    img.save(path).unwrap();
}

/// Blue sky over green ground, horizon on the upper thirds line.
pub fn landscape_png(path: &Path) {
    write_png(path, 640, 426, |_, y| {
        if y < 142 {
            [120, 170, 235]
        } else {
            [60, 120, 40]
        }
    });
}

pub fn gray_png(path: &Path) {
    write_png(path, 640, 426, |_, _| [128, 128, 128]);
}

/// 36 azimuth bins with a single peak at `bin`.
pub fn azimuth_peak(bin: usize) -> Vec<f64> {
    let mut v = vec![0.0; 36];
    v[bin] = 5.0;
    v
}

pub fn write_json(path: &Path, value: &Value) -> PathBuf {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.to_path_buf()
}

/// Three guidance images plus a query: the highest-scoring guidance image
/// is lit from the left, the query from the front.
pub struct AlgIFixture {
    pub dir: tempfile::TempDir,
    pub query_image: PathBuf,
    pub query_annotation: PathBuf,
    pub index: PathBuf,
    pub profiles: PathBuf,
}

impl AlgIFixture {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let db = dir.path().join("db");
        std::fs::create_dir(&db).unwrap();
        let guides = [
            ("g-left", 9.0, [1.0, 0.2, 0.0, 0.1], 27),
            ("g-front", 4.0, [1.0, 0.0, 0.0, 0.0], 0),
            ("g-back", 6.0, [0.0, 1.0, 0.5, 0.0], 18),
        ];
        for (id, score, emb, bin) in guides {
            landscape_png(&db.join(format!("{id}.png")));
            write_json(
                &db.join(format!("{id}.json")),
                &json!({
                    "id": id,
                    "embedding": emb,
                    "aesthetic_score": score,
                    "faces": [],
                    "azimuth_intensity": azimuth_peak(bin),
                }),
            );
        }
        let query_image = dir.path().join("query.png");
        landscape_png(&query_image);
        let query_annotation = write_json(
            &dir.path().join("query.json"),
            &json!({
                "id": "query",
                "embedding": [1.0, 0.0, 0.0, 0.02],
                "azimuth_intensity": azimuth_peak(0),
            }),
        );
        let index = dir.path().join("index.bin");
        let profiles = dir.path().join("profiles.json");
        let out = run(&[
            "index-build",
            db.to_str().unwrap(),
            "-o",
            index.to_str().unwrap(),
            "--profiles",
            profiles.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        Self {
            dir,
            query_image,
            query_annotation,
            index,
            profiles,
        }
    }

    pub fn guide_args(&self, k: &str) -> Vec<String> {
        [
            "guide-image",
            self.query_image.to_str().unwrap(),
            "--annotation",
            self.query_annotation.to_str().unwrap(),
            "--index",
            self.index.to_str().unwrap(),
            "--profiles",
            self.profiles.to_str().unwrap(),
            "-k",
            k,
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }
}
