//! Scanning: discover files, parse each once, run every matcher over the
//! shared tree, and aggregate a deterministic report.

mod discover;
mod report;
mod summary;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

pub use discover::{discover_files, discover_paths, relative_key, DiscoverOptions, DEFAULT_DENY};
pub use report::{
    line_of, write_output, write_report, Entry, Format, Report, RuleCount, ScanStats, Skipped, Timings, STATS_KEY,
};
pub use summary::{nearest_rank, summarize, RuleRow, Summary, TimingSummary};

use crate::catalog::Catalog;
use crate::dsl::{compile_rule, CompileError, Matcher, RuleSpec};
use crate::frontend::context::build_context_with;
use crate::frontend::{parse_source, SourceFile};
use crate::predicates::{FileView, PredicateRegistry};
use crate::Finding;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("cannot build thread pool: {0}")]
    Pool(String),
    #[error("malformed report: {0}")]
    BadReport(String),
}

/// Result of analyzing one file.
#[derive(Debug, Clone, PartialEq)]
pub enum FileOutcome {
    Analyzed { findings: Vec<Finding>, loc: usize },
    Skipped(String),
}

/// Per-rule and combined matching time for one already-parsed file.
#[derive(Debug, Clone)]
pub struct RuleTimings {
    pub per_rule: Vec<(String, Duration)>,
    pub parallel: Duration,
}

impl RuleTimings {
    pub fn serial_sum(&self) -> Duration {
        self.per_rule.iter().map(|(_, d)| *d).sum()
    }
}

/// Compiled rules plus a worker pool. One engine can run many scans.
pub struct Engine {
    matchers: Vec<Matcher>,
    catalog: Arc<Catalog>,
    pool: rayon::ThreadPool,
    jobs: usize,
    parses: AtomicUsize,
}

impl Engine {
    /// Compiles `rules`. `jobs` is clamped to at least 1.
    pub fn new(
        rules: &[RuleSpec],
        registry: &PredicateRegistry,
        catalog: Arc<Catalog>,
        jobs: usize,
    ) -> Result<Self, EngineError> {
        let matchers = rules
            .iter()
            .map(|r| compile_rule(r, registry))
            .collect::<Result<Vec<_>, _>>()?;
        let jobs = jobs.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| EngineError::Pool(e.to_string()))?;
        Ok(Self {
            matchers,
            catalog,
            pool,
            jobs,
            parses: AtomicUsize::new(0),
        })
    }

    pub fn matchers(&self) -> &[Matcher] {
        &self.matchers
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Files parsed by this engine so far.
    pub fn parse_count(&self) -> usize {
        self.parses.load(Ordering::Relaxed)
    }

    /// Parses `file` once and runs every matcher on it, rules in parallel.
    /// `key` becomes the findings' file name.
    pub fn analyze(&self, key: &str, file: &SourceFile) -> FileOutcome {
        self.parses.fetch_add(1, Ordering::Relaxed);
        let ast = match parse_source(file) {
            Ok(ast) => ast,
            Err(e) => return FileOutcome::Skipped(e.to_string()),
        };
        let ctx = build_context_with(&ast, self.catalog.clone());
        let view = FileView::new(key, &ast, &ctx);
        let findings = self.pool.install(|| {
            self.matchers
                .par_iter()
                .map(|m| m.run(&view))
                .collect::<Vec<_>>()
                .concat()
        });
        FileOutcome::Analyzed {
            findings,
            loc: file.loc,
        }
    }

    /// Scans already-loaded files. Keys must be unique.
    pub fn scan_sources(&self, project: &str, files: &[(String, SourceFile)], timed: bool) -> Report {
        let start = Instant::now();
        let outcomes: Vec<(FileOutcome, Duration)> = self.pool.install(|| {
            files
                .par_iter()
                .map(|(key, file)| {
                    let t = Instant::now();
                    let outcome = self.analyze(key, file);
                    (outcome, t.elapsed())
                })
                .collect()
        });
        let wall = start.elapsed();
        let mut report = Report::new(project);
        let mut per_file = std::collections::BTreeMap::new();
        for ((key, _), (outcome, took)) in files.iter().zip(outcomes) {
            match outcome {
                FileOutcome::Analyzed { findings, loc } => {
                    report.stats.files_scanned += 1;
                    report.stats.loc_total += loc;
                    report.add_findings(findings);
                }
                FileOutcome::Skipped(reason) => report.stats.skipped_files.push(Skipped {
                    file: key.clone(),
                    reason,
                }),
            }
            per_file.insert(key.clone(), took.as_secs_f64());
        }
        report.stats.skipped_files.sort_by(|a, b| a.file.cmp(&b.file));
        if timed {
            report.stats.timings = Some(Timings {
                wall_time_s: wall.as_secs_f64(),
                per_file_s: per_file,
            });
        }
        report
    }

    /// Discovers and scans everything under `root`. Unreadable and
    /// unparseable files are listed as skipped.
    pub fn scan(&self, root: &Path, options: &DiscoverOptions, timed: bool) -> Result<Report, EngineError> {
        let start = Instant::now();
        let paths = discover_paths(root, options)?;
        let mut loaded = Vec::with_capacity(paths.len());
        let mut unreadable = Vec::new();
        for path in paths {
            let key = relative_key(root, &path);
            match SourceFile::read(&path) {
                Ok(file) => loaded.push((key, file)),
                Err(e) => unreadable.push(Skipped {
                    file: key,
                    reason: e.to_string(),
                }),
            }
        }
        let mut report = self.scan_sources(&project_name(root), &loaded, timed);
        report.stats.skipped_files.extend(unreadable);
        report.stats.skipped_files.sort_by(|a, b| a.file.cmp(&b.file));
        if let Some(t) = report.stats.timings.as_mut() {
            t.wall_time_s = start.elapsed().as_secs_f64();
        }
        Ok(report)
    }

    /// Times every matcher alone, then all of them together on the
    /// engine's pool, over one parse of `file`.
    pub fn time_rules(&self, file: &SourceFile) -> Option<RuleTimings> {
        let ast = parse_source(file).ok()?;
        let ctx = build_context_with(&ast, self.catalog.clone());
        let view = FileView::new("t", &ast, &ctx);
        let per_rule = self
            .matchers
            .iter()
            .map(|m| {
                let t = Instant::now();
                std::hint::black_box(m.run(&view));
                (m.rule_id().to_string(), t.elapsed())
            })
            .collect();
        let t = Instant::now();
        self.pool.install(|| {
            std::hint::black_box(self.matchers.par_iter().map(|m| m.run(&view)).collect::<Vec<_>>());
        });
        Some(RuleTimings {
            per_rule,
            parallel: t.elapsed(),
        })
    }
}

/// The project key of a report: the root as given, with forward slashes
/// and no trailing separator.
pub fn project_name(root: &Path) -> String {
    let s = root.to_string_lossy().replace('\\', "/");
    let trimmed = s.trim_end_matches('/');
    if trimmed.is_empty() {
        s
    } else {
        trimmed.to_string()
    }
}
