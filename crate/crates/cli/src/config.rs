//! Run configuration: a flat key=value file merged with command-line
//! overrides, overrides winning.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;

/// Configuration error, reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Options shared by all pipeline subcommands. Every field can also come
/// from the config file under its long flag name.
#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// Flat key=value configuration file; command-line flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Word dataset (csv with header)
    #[arg(long)]
    pub dataset: Option<PathBuf>,

    /// Column holding the word forms
    #[arg(long)]
    pub form_column: Option<String>,

    /// Column holding lexeme identifiers (simulated semantics)
    #[arg(long)]
    pub lexeme_column: Option<String>,

    /// Comma-separated inflectional feature columns (simulated semantics)
    #[arg(long)]
    pub feature_columns: Option<String>,

    /// Embedding text file aligned with the dataset (loaded semantics)
    #[arg(long)]
    pub embeddings: Option<PathBuf>,

    /// n-gram order of the form cues
    #[arg(long)]
    pub grams: Option<usize>,

    /// Split forms on the separator instead of by character
    #[arg(long)]
    pub tokenized: Option<bool>,

    /// Token separator used when --tokenized true
    #[arg(long)]
    pub separator: Option<String>,

    /// Semantic dimensions (default: number of cues)
    #[arg(long)]
    pub dims: Option<usize>,

    /// Seed for simulated semantic vectors
    #[arg(long)]
    pub seed: Option<u64>,

    /// Ridge penalty for all least-squares fits
    #[arg(long)]
    pub ridge: Option<f64>,

    /// Positional support threshold for path decoding
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Longest candidate cue sequence (default: longest gold sequence + 1)
    #[arg(long)]
    pub max_length: Option<usize>,

    /// Cues kept per position after thresholding
    #[arg(long)]
    pub beam: Option<usize>,

    /// Output / artifact directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where word meanings come from. Exactly one source must be configured.
#[derive(Debug, Clone, PartialEq)]
pub enum SemanticsSource {
    Simulated {
        lexeme_column: String,
        feature_columns: Vec<String>,
    },
    Loaded {
        path: PathBuf,
    },
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset: PathBuf,
    pub form_column: String,
    pub semantics: SemanticsSource,
    pub grams: usize,
    pub tokenized: bool,
    pub separator: String,
    pub dims: Option<usize>,
    pub seed: u64,
    pub ridge: f64,
    pub threshold: f64,
    pub max_length: Option<usize>,
    pub beam: usize,
    pub out: PathBuf,
}

pub const DEFAULT_FORM_COLUMN: &str = "Word";
pub const DEFAULT_GRAMS: usize = 3;
pub const DEFAULT_SEPARATOR: &str = "_";
pub const DEFAULT_SEED: u64 = 0;

fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError(format!(
                "bad config line {} in {}: expected key=value",
                idx + 1,
                path.display()
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| ConfigError(format!("bad value for {key}: {raw:?}"))),
    }
}

impl CommonArgs {
    /// Merges the config file (if any) under the command-line flags and
    /// validates the result.
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let known = [
            "dataset",
            "form-column",
            "lexeme-column",
            "feature-columns",
            "embeddings",
            "grams",
            "tokenized",
            "separator",
            "dims",
            "seed",
            "ridge",
            "threshold",
            "max-length",
            "beam",
            "out",
        ];
        for key in file.keys() {
            if !known.contains(&key.as_str()) {
                return Err(ConfigError(format!("unknown config key {key:?}")));
            }
        }

        let dataset = self
            .dataset
            .clone()
            .or_else(|| file.get("dataset").map(PathBuf::from))
            .ok_or_else(|| ConfigError("missing required option: dataset".into()))?;
        let form_column = self
            .form_column
            .clone()
            .or_else(|| file.get("form-column").cloned())
            .unwrap_or_else(|| DEFAULT_FORM_COLUMN.to_string());
        let lexeme_column = self
            .lexeme_column
            .clone()
            .or_else(|| file.get("lexeme-column").cloned());
        let feature_columns = self
            .feature_columns
            .clone()
            .or_else(|| file.get("feature-columns").cloned());
        let embeddings = self
            .embeddings
            .clone()
            .or_else(|| file.get("embeddings").map(PathBuf::from));

        let semantics = match (&lexeme_column, &embeddings) {
            (Some(_), Some(_)) => {
                return Err(ConfigError(
                    "lexeme-column and embeddings are mutually exclusive".into(),
                ))
            }
            (Some(lexeme), None) => SemanticsSource::Simulated {
                lexeme_column: lexeme.clone(),
                feature_columns: feature_columns
                    .as_deref()
                    .map(|s| {
                        s.split(',')
                            .map(str::trim)
                            .filter(|c| !c.is_empty())
                            .map(str::to_string)
                            .collect()
                    })
                    .unwrap_or_default(),
            },
            (None, Some(path)) => {
                if feature_columns.is_some() {
                    return Err(ConfigError(
                        "feature-columns requires lexeme-column (simulated semantics)".into(),
                    ));
                }
                SemanticsSource::Loaded { path: path.clone() }
            }
            (None, None) => return Err(ConfigError(
                "semantic source required: give lexeme-column (and feature-columns) or embeddings"
                    .into(),
            )),
        };

        let grams = match self.grams.or(parsed(&file, "grams")?) {
            Some(0) => return Err(ConfigError("grams must be >= 1".into())),
            Some(g) => g,
            None => DEFAULT_GRAMS,
        };
        let tokenized = self
            .tokenized
            .or(parsed(&file, "tokenized")?)
            .unwrap_or(false);
        let separator = self
            .separator
            .clone()
            .or_else(|| file.get("separator").cloned())
            .unwrap_or_else(|| DEFAULT_SEPARATOR.to_string());
        if tokenized && separator.is_empty() {
            return Err(ConfigError(
                "separator must be non-empty when tokenized".into(),
            ));
        }
        let ridge = self.ridge.or(parsed(&file, "ridge")?).unwrap_or(0.0);
        if !ridge.is_finite() || ridge < 0.0 {
            return Err(ConfigError("ridge must be >= 0".into()));
        }
        let threshold = self
            .threshold
            .or(parsed(&file, "threshold")?)
            .unwrap_or(ldl_core::paths::DEFAULT_THRESHOLD);
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(ConfigError("threshold must be > 0".into()));
        }
        let beam = self
            .beam
            .or(parsed(&file, "beam")?)
            .unwrap_or(ldl_core::paths::DEFAULT_BEAM);
        if beam == 0 {
            return Err(ConfigError("beam must be >= 1".into()));
        }
        let dims = self.dims.or(parsed(&file, "dims")?);
        if dims == Some(0) {
            return Err(ConfigError("dims must be >= 1".into()));
        }

        Ok(RunConfig {
            dataset,
            form_column,
            semantics,
            grams,
            tokenized,
            separator,
            dims,
            seed: self.seed.or(parsed(&file, "seed")?).unwrap_or(DEFAULT_SEED),
            ridge,
            threshold,
            max_length: self.max_length.or(parsed(&file, "max-length")?),
            beam,
            out: self
                .out
                .clone()
                .or_else(|| file.get("out").map(PathBuf::from))
                .ok_or_else(|| ConfigError("missing required option: out".into()))?,
        })
    }
}

impl RunConfig {
    pub fn tokenization(&self) -> ldl_core::Tokenization {
        if self.tokenized {
            ldl_core::Tokenization::separated(self.separator.clone())
        } else {
            ldl_core::Tokenization::Characters
        }
    }
}
