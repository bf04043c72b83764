use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::EngineError;
use crate::Finding;

/// Reserved top-level key holding scan statistics.
pub const STATS_KEY: &str = "__stats__";

/// One reported smell instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Entry {
    /// Unknown when a report was read back from a message without a line.
    pub line: Option<u32>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub file: String,
    pub reason: String,
}

/// Wall-clock measurements. Only present when a scan was asked to time
/// itself, since they are never reproducible.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Timings {
    pub wall_time_s: f64,
    pub per_file_s: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanStats {
    pub files_scanned: usize,
    pub loc_total: usize,
    pub skipped_files: Vec<Skipped>,
    pub timings: Option<Timings>,
}

/// project -> file -> rule -> entries, plus statistics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub project: String,
    pub files: BTreeMap<String, BTreeMap<String, Vec<Entry>>>,
    pub stats: ScanStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Instances and affected files of one rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleCount {
    pub instances: usize,
    pub affected_files: usize,
}

impl Report {
    pub fn new(project: impl Into<String>) -> Self {
        Self {
            project: project.into(),
            ..Self::default()
        }
    }

    /// Adds findings, dropping repeats of the same (rule, file, line) and
    /// keeping each list ordered by line.
    pub fn add_findings(&mut self, findings: impl IntoIterator<Item = Finding>) {
        let mut sorted: Vec<Finding> = findings.into_iter().collect();
        sorted.sort();
        for f in sorted {
            let list = self.files.entry(f.file).or_default().entry(f.rule_id).or_default();
            if list.iter().any(|e| e.line == Some(f.line)) {
                continue;
            }
            list.push(Entry {
                line: Some(f.line),
                message: f.message,
            });
            list.sort();
        }
    }

    /// Every (file, rule, entry) in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &Entry)> {
        self.files.iter().flat_map(|(file, rules)| {
            rules
                .iter()
                .flat_map(move |(rule, list)| list.iter().map(move |e| (file.as_str(), rule.as_str(), e)))
        })
    }

    pub fn total_findings(&self) -> usize {
        self.files.values().flat_map(|r| r.values()).map(Vec::len).sum()
    }

    pub fn files_with_findings(&self) -> usize {
        self.files.values().filter(|r| r.values().any(|l| !l.is_empty())).count()
    }

    pub fn rule_counts(&self) -> BTreeMap<String, RuleCount> {
        let mut counts: BTreeMap<String, RuleCount> = BTreeMap::new();
        for rules in self.files.values() {
            for (rule, list) in rules {
                if list.is_empty() {
                    continue;
                }
                let c = counts.entry(rule.clone()).or_default();
                c.instances += list.len();
                c.affected_files += 1;
            }
        }
        counts
    }

    /// The report as JSON. `strict` leaves out the statistics block.
    pub fn to_json(&self, strict: bool) -> Value {
        let mut files = Map::new();
        for (file, rules) in &self.files {
            let mut by_rule = Map::new();
            for (rule, list) in rules {
                let messages: Vec<Value> = list.iter().map(|e| Value::String(e.message.clone())).collect();
                by_rule.insert(rule.clone(), Value::Array(messages));
            }
            files.insert(file.clone(), Value::Object(by_rule));
        }
        let mut top = Map::new();
        top.insert(self.project.clone(), Value::Object(files));
        if !strict {
            top.insert(STATS_KEY.to_string(), self.stats_json());
        }
        Value::Object(top)
    }

    fn stats_json(&self) -> Value {
        let total = self.total_findings();
        let per_rule: Map<String, Value> = self
            .rule_counts()
            .into_iter()
            .map(|(rule, c)| {
                let share = round(100.0 * c.instances as f64 / total as f64, 2);
                (
                    rule,
                    json!({"instances": c.instances, "affected_files": c.affected_files, "share_pct": share}),
                )
            })
            .collect();
        let skipped: Vec<Value> = self
            .stats
            .skipped_files
            .iter()
            .map(|s| json!({"file": s.file, "reason": s.reason}))
            .collect();
        let mut stats = json!({
            "files_scanned": self.stats.files_scanned,
            "files_with_findings": self.files_with_findings(),
            "total_findings": total,
            "loc_total": self.stats.loc_total,
            "per_rule": per_rule,
            "skipped_files": skipped,
        });
        if let Some(t) = &self.stats.timings {
            let per_file: Map<String, Value> = t.per_file_s.iter().map(|(f, s)| (f.clone(), json!(round(*s, 6)))).collect();
            stats["timings"] = json!({"wall_time_s": round(t.wall_time_s, 6), "per_file_s": per_file});
        }
        stats
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render_json(&self, strict: bool) -> String {
        let mut out = serde_json::to_string_pretty(&self.to_json(strict)).expect("report is plain JSON");
        out.push('\n');
        out
    }

    /// One `file:line rule_id message` row per finding.
    pub fn render_text(&self) -> String {
        let mut rows: Vec<(&str, Option<u32>, &str, &str)> =
            self.entries().map(|(f, r, e)| (f, e.line, r, e.message.as_str())).collect();
        rows.sort();
        let mut out = String::new();
        for (file, line, rule, message) in rows {
            let line = line.map_or_else(|| "?".to_string(), |l| l.to_string());
            let _ = writeln!(out, "{file}:{line} {rule} {message}");
        }
        out
    }

    pub fn render(&self, format: Format, strict: bool) -> String {
        match format {
            Format::Json => self.render_json(strict),
            Format::Text => self.render_text(),
        }
    }

    /// Reads a report written by [`Report::render_json`]. Lines come back
    /// from the last `line N` in each message.
    pub fn from_json(value: &Value) -> Result<Self, EngineError> {
        let bad = |why: &str| EngineError::BadReport(why.to_string());
        let top = value.as_object().ok_or_else(|| bad("top level is not an object"))?;
        let mut projects = top.iter().filter(|(k, _)| k.as_str() != STATS_KEY);
        let (project, files) = projects.next().ok_or_else(|| bad("no project key"))?;
        if projects.next().is_some() {
            return Err(bad("more than one project key"));
        }
        let mut report = Report::new(project.clone());
        for (file, rules) in files.as_object().ok_or_else(|| bad("project value is not an object"))? {
            let rules = rules.as_object().ok_or_else(|| bad("file value is not an object"))?;
            let slot = report.files.entry(file.clone()).or_default();
            for (rule, messages) in rules {
                let messages = messages.as_array().ok_or_else(|| bad("rule value is not an array"))?;
                let mut list = Vec::new();
                for m in messages {
                    let message = m.as_str().ok_or_else(|| bad("message is not a string"))?.to_string();
                    list.push(Entry {
                        line: line_of(&message),
                        message,
                    });
                }
                list.sort();
                slot.insert(rule.clone(), list);
            }
        }
        if let Some(stats) = top.get(STATS_KEY) {
            report.stats = stats_from_json(stats);
        }
        Ok(report)
    }

    pub fn parse(text: &str) -> Result<Self, EngineError> {
        let value: Value = serde_json::from_str(text).map_err(|e| EngineError::BadReport(e.to_string()))?;
        Self::from_json(&value)
    }
}

fn stats_from_json(stats: &Value) -> ScanStats {
    let count = |key: &str| stats.get(key).and_then(Value::as_u64).unwrap_or(0) as usize;
    let skipped_files = stats
        .get("skipped_files")
        .and_then(Value::as_array)
        .map(|list| {
            list.iter()
                .map(|s| Skipped {
                    file: s.get("file").and_then(Value::as_str).unwrap_or_default().to_string(),
                    reason: s.get("reason").and_then(Value::as_str).unwrap_or_default().to_string(),
                })
                .collect()
        })
        .unwrap_or_default();
    let timings = stats.get("timings").map(|t| Timings {
        wall_time_s: t.get("wall_time_s").and_then(Value::as_f64).unwrap_or(0.0),
        per_file_s: t
            .get("per_file_s")
            .and_then(Value::as_object)
            .map(|m| m.iter().filter_map(|(k, v)| Some((k.clone(), v.as_f64()?))).collect())
            .unwrap_or_default(),
    });
    ScanStats {
        files_scanned: count("files_scanned"),
        loc_total: count("loc_total"),
        skipped_files,
        timings,
    }
}

/// The number after the last `line` in a message.
pub fn line_of(message: &str) -> Option<u32> {
    let at = message.rfind("line")?;
    let digits: String = message[at + 4..]
        .trim_start()
        .chars()
        .take_while(char::is_ascii_digit)
        .collect();
    digits.parse().ok()
}

fn round(x: f64, places: i32) -> f64 {
    let k = 10f64.powi(places);
    (x * k).round() / k
}

/// Writes `text` to `out`, or stdout when `out` is `None`. Files are
/// replaced atomically through a temporary file in the same directory.
pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), EngineError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source: std::io::Error| EngineError::Io { path, source }
    };
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io(Path::new("<stdout>")))?;
            stdout.flush().map_err(io(Path::new("<stdout>")))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
            tmp.write_all(text.as_bytes()).map_err(io(path))?;
            tmp.as_file().sync_all().map_err(io(path))?;
            tmp.persist(path).map_err(|e| io(path)(e.error))?;
            Ok(())
        }
    }
}

/// Renders `report` and writes it.
pub fn write_report(report: &Report, format: Format, out: Option<&Path>, strict: bool) -> Result<(), EngineError> {
    write_output(&report.render(format, strict), out)
}
