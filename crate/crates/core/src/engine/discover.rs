use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use super::EngineError;
use crate::frontend::SourceFile;

/// Directory names skipped unless the caller opts out.
pub const DEFAULT_DENY: &[&str] = &[
    ".git",
    ".hg",
    ".svn",
    ".tox",
    ".nox",
    ".eggs",
    ".venv",
    "venv",
    "env",
    "virtualenv",
    "site-packages",
    "node_modules",
    "__pycache__",
    ".mypy_cache",
    ".pytest_cache",
    ".ipynb_checkpoints",
];

/// Which files a scan visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoverOptions {
    /// Directory names never descended into.
    pub deny: Vec<String>,
    /// File extensions, without the dot.
    pub extensions: Vec<String>,
}

impl Default for DiscoverOptions {
    fn default() -> Self {
        Self {
            deny: DEFAULT_DENY.iter().map(|s| s.to_string()).collect(),
            extensions: vec!["py".to_string()],
        }
    }
}

/// Report key of `path`: relative to `root`, forward slashes.
pub fn relative_key(root: &Path, path: &Path) -> String {
    let rel = if root.is_file() {
        path.file_name().map(PathBuf::from).unwrap_or_else(|| path.to_path_buf())
    } else {
        path.strip_prefix(root).unwrap_or(path).to_path_buf()
    };
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Matching files under `root`, sorted by report key. A file root yields
/// itself.
pub fn discover_paths(root: &Path, options: &DiscoverOptions) -> Result<Vec<PathBuf>, EngineError> {
    let meta = std::fs::metadata(root).map_err(|source| EngineError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    if meta.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let wanted = |p: &Path| {
        p.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| options.extensions.iter().any(|x| x == e))
    };
    let mut found: Vec<(String, PathBuf)> = WalkDir::new(root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| {
            e.depth() == 0 || !e.file_type().is_dir() || !options.deny.iter().any(|d| e.file_name() == d.as_str())
        })
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file() && wanted(e.path()))
        .map(|e| (relative_key(root, e.path()), e.into_path()))
        .collect();
    found.sort();
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Reads every discovered file, failing on the first unreadable one.
pub fn discover_files(root: &Path, options: &DiscoverOptions) -> Result<Vec<SourceFile>, EngineError> {
    discover_paths(root, options)?
        .into_iter()
        .map(|p| {
            SourceFile::read(&p).map_err(|e| EngineError::Io {
                path: p.clone(),
                source: std::io::Error::other(e.to_string()),
            })
        })
        .collect()
}
