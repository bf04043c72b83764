//! The shipped rules: 22 catalog smells plus two extension smells, each in
//! its own `.smell` file, with per-rule metadata.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{parse_rules, validate_rules, DslError, RuleSpec, ValidationError};
use crate::predicates::PredicateRegistry;

/// Bumped whenever a builtin rule changes behavior.
pub const RULESET_VERSION: &str = "1.0.0";

/// The rule-file grammar in EBNF.
pub const GRAMMAR: &str = include_str!("../grammar/smell.ebnf");

macro_rules! rule_files {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../rules/", $file)))),*]
    };
}

/// `(file name, source)` of every builtin rule, in id order.
pub const BUILTIN_RULE_FILES: &[(&str, &str)] = rule_files![
    "R01_broadcasting_feature_not_used.smell",
    "R02_randomness_uncontrolled.smell",
    "R03_tensor_array_not_used.smell",
    "R04_improper_train_eval_mode_toggling.smell",
    "R05_hyperparameter_not_set.smell",
    "R06_deterministic_algorithm_option_not_used.smell",
    "R07_missing_mask_of_invalid_value.smell",
    "R08_pytorch_call_method_misused.smell",
    "R09_gradients_not_cleared.smell",
    "R10_memory_not_freed.smell",
    "R11_data_leakage.smell",
    "R12_matrix_multiplication_api_misused.smell",
    "R13_empty_column_misinitialization.smell",
    "R14_dataframe_conversion_api_misused.smell",
    "R15_merge_api_parameter_not_set.smell",
    "R16_in_place_apis_misused.smell",
    "R17_unnecessary_iteration.smell",
    "R18_nan_equivalence_comparison_misused.smell",
    "R19_threshold_dependent_validation.smell",
    "R20_chain_indexing.smell",
    "R21_columns_and_datatype_not_set.smell",
    "R22_no_scaling_before_sensitive_operation.smell",
    "X01_index_column_not_set.smell",
    "X02_early_stopping_not_used.smell",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Effect {
    Correctness,
    Efficiency,
    Maintainability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SmellType {
    Generic,
    #[serde(rename = "API-specific")]
    ApiSpecific,
}

/// Pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stage {
    /// Model training
    MT,
    /// Model evaluation
    ME,
    /// Data cleaning
    DC,
    /// Feature engineering
    FE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Granularity {
    NodeLevel,
    /// At most one finding per file.
    FileLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCatalogEntry {
    pub id: &'static str,
    pub name: &'static str,
    pub effect: Effect,
    #[serde(rename = "type")]
    pub smell_type: SmellType,
    pub stages: &'static [Stage],
    pub granularity: Granularity,
    pub heuristic: &'static str,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

use Effect::*;
use Granularity::*;
use SmellType::*;
use Stage::*;

// (id, name, effect, type, stages, granularity)
#[allow(clippy::type_complexity)]
const TABLE: &[(&str, &str, Effect, SmellType, &[Stage], Granularity)] = &[
    ("R1", "Broadcasting Feature Not Used", Efficiency, Generic, &[MT], NodeLevel),
    ("R2", "Randomness Uncontrolled", Correctness, Generic, &[MT, ME], FileLevel),
    ("R3", "TensorArray Not Used", Efficiency, ApiSpecific, &[MT], NodeLevel),
    ("R4", "Improper Train/Eval Mode Toggling", Correctness, Generic, &[MT], NodeLevel),
    ("R5", "Hyperparameter Not Explicitly Set", Maintainability, Generic, &[MT], NodeLevel),
    ("R6", "Deterministic Algorithm Option Not Used", Correctness, Generic, &[MT], FileLevel),
    ("R7", "Missing Mask of Invalid Value", Correctness, Generic, &[MT], NodeLevel),
    ("R8", "PyTorch Call Method Misused", Correctness, ApiSpecific, &[MT], NodeLevel),
    ("R9", "Gradients Not Cleared", Correctness, ApiSpecific, &[MT], NodeLevel),
    ("R10", "Memory Not Freed", Efficiency, Generic, &[MT], FileLevel),
    ("R11", "Data Leakage", Correctness, Generic, &[ME], NodeLevel),
    ("R12", "Matrix Multiplication API Misused", Correctness, ApiSpecific, &[DC], NodeLevel),
    ("R13", "Empty Column Misinitialization", Correctness, Generic, &[DC], NodeLevel),
    ("R14", "DataFrame Conversion API Misused", Maintainability, ApiSpecific, &[DC], NodeLevel),
    ("R15", "Merge API Parameter Not Explicitly Set", Maintainability, Generic, &[DC], NodeLevel),
    ("R16", "In-Place APIs Misused", Maintainability, Generic, &[DC], NodeLevel),
    ("R17", "Unnecessary Iteration", Efficiency, Generic, &[DC], NodeLevel),
    ("R18", "NaN Equivalence Comparison Misused", Correctness, Generic, &[DC], NodeLevel),
    ("R19", "Threshold-Dependent Validation", Correctness, Generic, &[ME], NodeLevel),
    ("R20", "Chain Indexing", Maintainability, ApiSpecific, &[DC], NodeLevel),
    ("R21", "Columns and DataType Not Explicitly Set", Maintainability, Generic, &[DC], NodeLevel),
    ("R22", "No Scaling Before Sensitive Operation", Correctness, Generic, &[FE], NodeLevel),
    ("X1", "Index Column Not Explicitly Set in DataFrame Read", Maintainability, ApiSpecific, &[DC], NodeLevel),
    ("X2", "Early Stopping Not Used in Model.fit", Efficiency, ApiSpecific, &[MT], NodeLevel),
];

/// Ids of every builtin rule, in catalog order.
pub fn builtin_rule_ids() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|row| row.0)
}

/// Source text of the builtin rule file defining `id`.
pub fn builtin_rule_source(id: &str) -> Option<&'static str> {
    let index = TABLE.iter().position(|row| row.0 == id)?;
    Some(BUILTIN_RULE_FILES[index].1)
}

/// Metadata for a builtin rule.
pub fn rule_metadata(id: &str) -> Result<RuleCatalogEntry, UnknownRule> {
    let index = TABLE.iter().position(|row| row.0 == id).ok_or_else(|| UnknownRule(id.to_string()))?;
    let (id, name, effect, smell_type, stages, granularity) = TABLE[index];
    Ok(RuleCatalogEntry {
        id,
        name,
        effect,
        smell_type,
        stages,
        granularity,
        heuristic: heuristic(BUILTIN_RULE_FILES[index].1),
    })
}

/// The `# ID: ...` header line of a rule file, without the id.
fn heuristic(source: &str) -> &str {
    source
        .lines()
        .next()
        .and_then(|line| line.strip_prefix('#'))
        .and_then(|line| line.split_once(':'))
        .map_or("", |(_, text)| text.trim())
}

/// Lines of rule text that are neither blank nor comments.
pub fn dsl_line_count(source: &str) -> usize {
    source
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .count()
}

/// Parses the builtin rules. They are part of the build, so a parse
/// failure is a bug.
pub fn load_builtin_ruleset() -> Vec<RuleSpec> {
    BUILTIN_RULE_FILES
        .iter()
        .flat_map(|(file, text)| parse_rules(text).unwrap_or_else(|e| panic!("builtin rule {file}: {e}")))
        .collect()
}

#[derive(Debug, Error)]
pub enum RulesetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: DslError,
    },
    #[error("duplicate rule id `{id}` in {path}")]
    DuplicateRuleId { id: String, path: PathBuf },
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<ValidationError>),
}

/// Reads rule files. A directory contributes its `.smell` files in name
/// order. Ids must be unique across all given paths.
pub fn load_rule_paths(paths: &[PathBuf]) -> Result<Vec<RuleSpec>, RulesetError> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|source| RulesetError::Io {
                path: path.clone(),
                source,
            })?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "smell") && p.is_file())
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }

    let mut rules: Vec<RuleSpec> = Vec::new();
    for file in files {
        let text = fs::read_to_string(&file).map_err(|source| RulesetError::Io {
            path: file.clone(),
            source,
        })?;
        let parsed = parse_rules(&text).map_err(|source| RulesetError::Parse {
            path: file.clone(),
            source,
        })?;
        for rule in parsed {
            if rules.iter().any(|r| r.id == rule.id) {
                return Err(RulesetError::DuplicateRuleId { id: rule.id, path: file });
            }
            rules.push(rule);
        }
    }
    Ok(rules)
}

/// `base` with every rule of `extra` added, or replacing the base rule of
/// the same id in place.
pub fn merge_rules(base: Vec<RuleSpec>, extra: Vec<RuleSpec>) -> Vec<RuleSpec> {
    let mut merged = base;
    for rule in extra {
        match merged.iter_mut().find(|r| r.id == rule.id) {
            Some(slot) => *slot = rule,
            None => merged.push(rule),
        }
    }
    merged
}

/// Validates `rules`, turning any error into [`RulesetError::Invalid`].
pub fn check_rules(rules: &[RuleSpec], registry: &PredicateRegistry) -> Result<(), RulesetError> {
    let errors = validate_rules(rules, registry);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(RulesetError::Invalid(errors))
    }
}

/// Whether `path` looks like a rule file.
pub fn is_rule_file(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext == "smell")
}
