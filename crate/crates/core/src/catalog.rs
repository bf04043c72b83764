//! The ML name catalog: which qualified names count as estimators, scalers,
//! random APIs and so on.
//!
//! The catalog is data. A default copy is embedded; users may supply a TOML
//! file whose keys replace the corresponding default entries.
//!
//! Schema:
//!
//! ```toml
//! version = "1.0.0"
//!
//! [names]
//! # key -> list of dotted names. An entry ending in `.*` matches every name
//! # under that prefix; an entry starting with `!` excludes a name or prefix.
//! estimators = ["sklearn.svm.SVC", "xgboost.*"]
//!
//! [hyperparameters]
//! # constructor -> keyword names that count as explicit hyperparameters
//! "sklearn.svm.SVC" = ["C", "kernel", "gamma"]
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;

pub const DEFAULT_CATALOG: &str = include_str!("../catalog/ml_catalog.toml");

/// Every key the predicate library reads. A catalog missing one of these
/// (after merging with the default) is rejected.
pub const REQUIRED_KEYS: &[&str] = &[
    "estimators",
    "scale_sensitive_estimators",
    "neural_models",
    "neural_base_classes",
    "model_builders",
    "optimizers",
    "data_first_constructors",
    "scalers",
    "scaling_transformers",
    "scaling_functions",
    "splitters",
    "dataframe_sources",
    "tabular_reads",
    "series_constructors",
    "tensor_constructors",
    "matrix_constructors",
    "random_apis",
    "seed_apis",
    "seeded_generators",
    "dl_frameworks",
    "determinism_apis",
    "determinism_flags",
    "determinism_env_vars",
    "ml_methods",
    "fit_methods",
    "training_methods",
    "taint_breaking_methods",
    "tile_apis",
    "tile_methods",
    "concat_apis",
    "unguarded_math_apis",
    "unguarded_math_methods",
    "guard_apis",
    "guard_methods",
    "dot_apis",
    "threshold_dependent_metrics",
    "threshold_independent_metrics",
    "free_memory_apis",
    "inplace_methods",
    "row_iteration_methods",
    "merge_apis",
    "nan_constants",
    "early_stopping_callbacks",
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid catalog: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("catalog is missing required key `{0}`")]
    MissingKey(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: Option<String>,
    #[serde(default)]
    names: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    hyperparameters: BTreeMap<String, Vec<String>>,
}

/// A set of dotted names with `prefix.*` wildcards and `!` exclusions.
#[derive(Debug, Clone, Default)]
pub struct NameSet {
    exact: HashSet<String>,
    prefixes: Vec<String>,
    excluded: HashSet<String>,
    excluded_prefixes: Vec<String>,
}

impl NameSet {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = NameSet::default();
        for entry in entries {
            let entry = entry.as_ref().trim();
            let (negated, entry) = match entry.strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, entry),
            };
            match (negated, entry.strip_suffix(".*")) {
                (false, Some(prefix)) => set.prefixes.push(format!("{prefix}.")),
                (false, None) => {
                    set.exact.insert(entry.to_string());
                }
                (true, Some(prefix)) => set.excluded_prefixes.push(format!("{prefix}.")),
                (true, None) => {
                    set.excluded.insert(entry.to_string());
                }
            }
        }
        set
    }

    pub fn contains(&self, name: &str) -> bool {
        if self.excluded.contains(name) || self.excluded_prefixes.iter().any(|p| name.starts_with(p)) {
            return false;
        }
        self.exact.contains(name) || self.prefixes.iter().any(|p| name.starts_with(p))
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.prefixes.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    version: String,
    sets: HashMap<String, NameSet>,
    hyperparameters: HashMap<String, Vec<String>>,
}

impl Catalog {
    /// The embedded default catalog, parsed once per process.
    pub fn builtin() -> Arc<Catalog> {
        static BUILTIN: OnceLock<Arc<Catalog>> = OnceLock::new();
        BUILTIN
            .get_or_init(|| Arc::new(Catalog::from_toml(DEFAULT_CATALOG).expect("embedded catalog is valid")))
            .clone()
    }

    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let raw: RawCatalog = toml::from_str(text)?;
        let catalog = Self::from_raw(raw);
        catalog.check_required()?;
        Ok(catalog)
    }

    /// Loads a user catalog; its keys replace the default entries of the
    /// same name, everything else is inherited.
    pub fn load_override(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::merged_with_default(&text)
    }

    pub fn merged_with_default(text: &str) -> Result<Self, CatalogError> {
        let mut base: RawCatalog = toml::from_str(DEFAULT_CATALOG)?;
        let user: RawCatalog = toml::from_str(text)?;
        if let Some(version) = user.version {
            base.version = Some(version);
        }
        base.names.extend(user.names);
        base.hyperparameters.extend(user.hyperparameters);
        let catalog = Self::from_raw(base);
        catalog.check_required()?;
        Ok(catalog)
    }

    fn from_raw(raw: RawCatalog) -> Self {
        Self {
            version: raw.version.unwrap_or_else(|| "unversioned".to_string()),
            sets: raw
                .names
                .into_iter()
                .map(|(key, entries)| (key, NameSet::new(entries)))
                .collect(),
            hyperparameters: raw.hyperparameters.into_iter().collect(),
        }
    }

    fn check_required(&self) -> Result<(), CatalogError> {
        match REQUIRED_KEYS.iter().find(|k| !self.sets.contains_key(**k)) {
            Some(missing) => Err(CatalogError::MissingKey(missing.to_string())),
            None => Ok(()),
        }
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Whether `name` is listed under `key`. Unknown keys match nothing.
    pub fn matches(&self, key: &str, name: &str) -> bool {
        self.sets.get(key).is_some_and(|set| set.contains(name))
    }

    pub fn set(&self, key: &str) -> Option<&NameSet> {
        self.sets.get(key)
    }

    pub fn hyperparameters(&self, constructor: &str) -> Option<&[String]> {
        self.hyperparameters.get(constructor).map(Vec::as_slice)
    }
}
