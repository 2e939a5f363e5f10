//! The `ecoreq` configuration file (TOML).
//!
//! ```toml
//! format = "json"
//! dictionary = "words.txt"
//! instance_types = "types.txt"
//! provenance_log = "history.jsonl"
//!
//! [rules]
//! SEM-001 = "off"
//! EMP-002 = "on"
//! SEM-003 = "error"
//!
//! [conventions]
//! literals = false
//!
//! [layout]
//! min_angle_deg = 20.0
//! max_label_overlaps = 2
//! ```
//!
//! Relative paths are taken from the directory holding the file. Unknown
//! keys and rule ids are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::layout::LayoutThresholds;
use crate::rules::{Conventions, RuleConfig};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "ECOREQ_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    format: Option<OutputFormat>,
    dictionary: Option<PathBuf>,
    instance_types: Option<PathBuf>,
    provenance_log: Option<PathBuf>,
    #[serde(default)]
    rules: BTreeMap<String, String>,
    #[serde(default)]
    conventions: Conventions,
    #[serde(default)]
    layout: LayoutThresholds,
}

#[derive(Debug, Clone, Default)]
pub struct CliConfig {
    pub rules: RuleConfig,
    pub format: Option<OutputFormat>,
    pub dictionary: Option<PathBuf>,
    /// File of extra known instance type names, one per line.
    pub instance_types: Option<PathBuf>,
    pub provenance_log: Option<PathBuf>,
}

impl CliConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| e.message().to_string())?;
        let mut rules = RuleConfig::default();
        rules.conventions = file.conventions;
        rules.layout = file.layout;
        for (rule, setting) in &file.rules {
            rules.set_str(rule, setting).map_err(|e| e.to_string())?;
        }
        rules.validate().map_err(|e| e.to_string())?;
        let rebase = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base_dir.join(p) } else { p });
        Ok(CliConfig {
            rules,
            format: file.format,
            dictionary: rebase(file.dictionary),
            instance_types: rebase(file.instance_types),
            provenance_log: rebase(file.provenance_log),
        })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The explicit path, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, String> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(CliConfig::default()),
            },
        }
    }
}
