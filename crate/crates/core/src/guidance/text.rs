//! Sentence templates: `key=template` lines with `{slot}` placeholders.

use std::collections::BTreeMap;
use std::path::Path;

use super::GuidanceError;

pub const SENTENCES_FILE: &str = "sentences.txt";

const DEFAULT_SENTENCES: &str = include_str!("../../data/sentences.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct Sentences {
    templates: BTreeMap<String, String>,
}

impl Default for Sentences {
    fn default() -> Self {
        Self {
            templates: parse_lines(DEFAULT_SENTENCES).expect("built-in sentences parse"),
        }
    }
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, String>, GuidanceError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (key, template) = line.split_once('=').ok_or_else(|| {
            GuidanceError::Config(format!("sentences line {}: expected key=template", n + 1))
        })?;
        out.insert(key.trim().to_string(), template.to_string());
    }
    Ok(out)
}

impl Sentences {
    /// Built-in templates with the keys in `text` replaced. Unknown keys are
    /// rejected so a typo cannot silently fall back to the default.
    pub fn with_overrides(text: &str) -> Result<Self, GuidanceError> {
        let mut s = Self::default();
        for (key, template) in parse_lines(text)? {
            if !s.templates.contains_key(&key) {
                return Err(GuidanceError::Config(format!(
                    "unknown sentence key {key:?}"
                )));
            }
            s.templates.insert(key, template);
        }
        Ok(s)
    }

    /// Reads `<dir>/sentences.txt` when it exists.
    pub fn load_dir(dir: &Path) -> Result<Self, GuidanceError> {
        let path = dir.join(SENTENCES_FILE);
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| GuidanceError::Config(format!("{}: {e}", path.display())))?;
        Self::with_overrides(&text)
    }

    pub fn template(&self, key: &str) -> Option<&str> {
        self.templates.get(key).map(String::as_str)
    }

    /// Substitutes `slots` into the template for `key`. Placeholders without a
    /// slot value are left as written.
    pub fn render(&self, key: &str, slots: &[(&str, String)]) -> String {
        let Some(template) = self.template(key) else {
            return format!("{{{key}}}");
        };
        fill(template, slots)
    }
}

fn fill(template: &str, slots: &[(&str, String)]) -> String {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) => {
                let name = &after[..close];
                match slots.iter().find(|(k, _)| *k == name) {
                    Some((_, v)) => out.push_str(v),
                    None => {
                        out.push('{');
                        out.push_str(name);
                        out.push('}');
                    }
                }
                rest = &after[close + 1..];
            }
            None => {
                out.push_str(&rest[open..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vivid_sentence() {
        let s = Sentences::default();
        let text = s.render(
            "color.vivid",
            &[("levels", "2".into()), ("level_unit", "levels".into())],
        );
        assert_eq!(
            text,
            "Make the image more vivid: raise colorfulness by 2 levels."
        );
    }

    #[test]
    fn keep_sentence() {
        let s = Sentences::default();
        assert_eq!(
            s.render("keep", &[("attribute", "lighting".into())]),
            "Keep the current lighting."
        );
    }

    #[test]
    fn missing_slots_stay_literal() {
        assert_eq!(fill("a {x} b {y", &[("x", "1".into())]), "a 1 b {y");
        assert_eq!(fill("{z}", &[]), "{z}");
    }

    #[test]
    fn overrides() {
        let s = Sentences::with_overrides("# localized\nkeep=Garder {attribute}.\n").unwrap();
        assert_eq!(s.render("keep", &[("attribute", "x".into())]), "Garder x.");
        assert!(Sentences::with_overrides("nope=1").is_err());
        assert!(Sentences::with_overrides("no separator").is_err());
    }
}
