//! Annotated fixture files: `pos_*.py` and `neg_*.py` under one directory
//! per rule. A positive marks each line that must be reported with a
//! trailing `# expect: RULE` comment (several ids may be comma-separated).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::engine::{EngineError, FileOutcome};
use crate::frontend::SourceFile;
use crate::engine::Engine;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub rule: String,
    pub positive: bool,
    pub file: SourceFile,
    pub expected: BTreeSet<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOutcome {
    pub rule: String,
    pub path: PathBuf,
    pub positive: bool,
    pub expected: BTreeSet<u32>,
    pub found: BTreeSet<u32>,
}

impl FixtureOutcome {
    /// Positives must be reported at exactly the annotated lines and
    /// negatives not at all.
    pub fn passed(&self) -> bool {
        if self.positive {
            !self.expected.is_empty() && self.found == self.expected
        } else {
            self.found.is_empty()
        }
    }
}

/// Lines of `text` annotated with `# expect:` naming `rule`.
pub fn expected_lines(text: &str, rule: &str) -> BTreeSet<u32> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| {
            line.rsplit_once("# expect:")
                .is_some_and(|(_, ids)| ids.split(',').any(|id| id.trim() == rule))
        })
        .map(|(i, _)| i as u32 + 1)
        .collect()
}

/// Every fixture under `root/<RULE>/`, ordered by rule then file name.
pub fn load_fixture_dir(root: &Path) -> Result<Vec<Fixture>, EngineError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| EngineError::Io { path, source }
    };
    let mut rule_dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(io(root))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    rule_dirs.sort();
    let mut out = Vec::new();
    for dir in rule_dirs {
        let rule = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(io(&dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "py"))
            .collect();
        files.sort();
        for path in files {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let positive = name.starts_with("pos");
            if !positive && !name.starts_with("neg") {
                continue;
            }
            let file = SourceFile::read(&path).map_err(|e| EngineError::Io {
                path: path.clone(),
                source: std::io::Error::other(e.to_string()),
            })?;
            out.push(Fixture {
                expected: expected_lines(&file.text, &rule),
                rule: rule.clone(),
                positive,
                file,
            });
        }
    }
    Ok(out)
}

/// Runs `engine` on one fixture and keeps the lines of its rule.
pub fn check_fixture(engine: &Engine, fixture: &Fixture) -> FixtureOutcome {
    let found = match engine.analyze("fixture.py", &fixture.file) {
        FileOutcome::Analyzed { findings, .. } => findings
            .into_iter()
            .filter(|f| f.rule_id == fixture.rule)
            .map(|f| f.line)
            .collect(),
        FileOutcome::Skipped(_) => BTreeSet::new(),
    };
    FixtureOutcome {
        rule: fixture.rule.clone(),
        path: fixture.file.path.clone(),
        positive: fixture.positive,
        expected: fixture.expected.clone(),
        found,
    }
}
