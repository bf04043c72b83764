//! Scoring detections against ground truth, plus the distribution
//! statistics used to describe a scan (Gini, Pearson).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::engine::Report;

/// Version of the ground-truth record format.
pub const TRUTH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("ground truth is file-level; line-level matching is impossible")]
    GranularityMismatch,
    #[error("no rule has a defined F1")]
    NoDefinedRules,
    #[error("empty input")]
    Empty,
    #[error("all values are zero")]
    AllZero,
    #[error("negative value {0}")]
    NegativeValue(f64),
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least two points")]
    TooShort,
    #[error("a series is constant")]
    ConstantSeries,
    #[error("ground truth line {line}: {message}")]
    BadTruth { line: usize, message: String },
    #[error("duplicate ground-truth entry {file}:{line} {rule}")]
    DuplicateEntry { file: String, rule: String, line: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Smell,
    Clean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Line,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub file: String,
    pub rule: String,
    pub line: u32,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    pub entries: Vec<TruthEntry>,
    pub granularity: Granularity,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    granularity: Granularity,
    #[serde(default)]
    version: Option<u32>,
}

impl GroundTruth {
    pub fn new(entries: Vec<TruthEntry>, granularity: Granularity) -> Result<Self, MetricsError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert((&e.file, &e.rule, e.line)) {
                return Err(MetricsError::DuplicateEntry {
                    file: e.file.clone(),
                    rule: e.rule.clone(),
                    line: e.line,
                });
            }
        }
        Ok(Self { entries, granularity })
    }

    /// One JSON object per line: `{"file", "rule", "line", "label"}`.
    /// An optional `{"granularity": "line"|"file", "version": 1}` record
    /// sets the granularity. Blank lines and `#` lines are skipped.
    pub fn parse_jsonl(text: &str) -> Result<Self, MetricsError> {
        let mut entries = Vec::new();
        let mut granularity = Granularity::Line;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| MetricsError::BadTruth { line: i + 1, message };
            let value: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            if value.get("granularity").is_some() {
                let header: Header = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
                if let Some(v) = header.version.filter(|&v| v > TRUTH_SCHEMA_VERSION) {
                    return Err(bad(format!("unsupported schema version {v}")));
                }
                granularity = header.granularity;
                continue;
            }
            entries.push(serde_json::from_value(value).map_err(|e| bad(e.to_string()))?);
        }
        Self::new(entries, granularity)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = format!(
            "{}\n",
            json!({"granularity": self.granularity, "version": TRUTH_SCHEMA_VERSION})
        );
        for e in &self.entries {
            let _ = writeln!(out, "{}", serde_json::to_string(e).expect("plain record"));
        }
        out
    }
}

/// One reported instance, as far as scoring is concerned.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Detection {
    pub file: String,
    pub rule: String,
    pub line: Option<u32>,
}

impl Detection {
    pub fn new(file: impl Into<String>, rule: impl Into<String>, line: u32) -> Self {
        Self {
            file: file.into(),
            rule: rule.into(),
            line: Some(line),
        }
    }
}

/// Detections of a report.
pub fn detections(report: &Report) -> Vec<Detection> {
    report
        .entries()
        .map(|(file, rule, e)| Detection {
            file: file.to_string(),
            rule: rule.to_string(),
            line: e.line,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, fp, fn_, tn: 0 }
    }

    fn add(&mut self, other: ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }
}

/// tp / (tp + fp), absent when nothing was detected.
pub fn precision(c: &ConfusionCounts) -> Option<f64> {
    let d = c.tp + c.fp;
    (d > 0).then(|| c.tp as f64 / d as f64)
}

/// tp / (tp + fn), absent when there is nothing to find.
pub fn recall(c: &ConfusionCounts) -> Option<f64> {
    let d = c.tp + c.fn_;
    (d > 0).then(|| c.tp as f64 / d as f64)
}

/// Harmonic mean of precision and recall, absent if either is absent or
/// both are zero.
pub fn f1(c: &ConfusionCounts) -> Option<f64> {
    let (p, r) = (precision(c)?, recall(c)?);
    (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Confusion {
    pub overall: ConfusionCounts,
    pub per_rule: BTreeMap<String, ConfusionCounts>,
}

/// Matches detections to labeled instances. Detections in files without
/// any label are ignored.
pub fn confusion(
    detections: &[Detection],
    truth: &GroundTruth,
    granularity: Granularity,
) -> Result<Confusion, MetricsError> {
    if truth.granularity == Granularity::File && granularity == Granularity::Line {
        return Err(MetricsError::GranularityMismatch);
    }
    // Key: (file, rule, line); file-level matching uses line 0.
    type Key = (String, String, u32);
    let key_of = |file: &str, rule: &str, line: u32| -> Key {
        let line = if granularity == Granularity::File { 0 } else { line };
        (file.to_string(), rule.to_string(), line)
    };

    let mut labels: BTreeMap<Key, Label> = BTreeMap::new();
    for e in &truth.entries {
        let slot = labels.entry(key_of(&e.file, &e.rule, e.line)).or_insert(e.label);
        if e.label == Label::Smell {
            *slot = Label::Smell;
        }
    }
    let labeled_files: BTreeSet<&str> = truth.entries.iter().map(|e| e.file.as_str()).collect();

    let mut detected: BTreeSet<Key> = BTreeSet::new();
    let mut unmatched_line_less: Vec<(String, String)> = Vec::new();
    for d in detections {
        if !labeled_files.contains(d.file.as_str()) {
            continue;
        }
        match (d.line, granularity) {
            (Some(line), _) => {
                detected.insert(key_of(&d.file, &d.rule, line));
            }
            (None, Granularity::File) => {
                detected.insert(key_of(&d.file, &d.rule, 0));
            }
            (None, Granularity::Line) => unmatched_line_less.push((d.file.clone(), d.rule.clone())),
        }
    }

    let mut per_rule: BTreeMap<String, ConfusionCounts> = BTreeMap::new();
    for key in &detected {
        let c = per_rule.entry(key.1.clone()).or_default();
        match labels.get(key) {
            Some(Label::Smell) => c.tp += 1,
            _ => c.fp += 1,
        }
    }
    for (_, rule) in unmatched_line_less {
        per_rule.entry(rule).or_default().fp += 1;
    }
    for (key, label) in &labels {
        if detected.contains(key) {
            continue;
        }
        let c = per_rule.entry(key.1.clone()).or_default();
        match label {
            Label::Smell => c.fn_ += 1,
            Label::Clean => c.tn += 1,
        }
    }
    let mut overall = ConfusionCounts::default();
    for c in per_rule.values() {
        overall.add(*c);
    }
    Ok(Confusion { overall, per_rule })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MacroF1 {
    pub value: f64,
    pub included: Vec<String>,
    /// Rules whose F1 is undefined.
    pub excluded: Vec<String>,
}

/// Unweighted mean of the defined per-rule F1 values.
pub fn macro_f1(per_rule: &BTreeMap<String, ConfusionCounts>) -> Result<MacroF1, MetricsError> {
    let mut included = Vec::new();
    let mut excluded = Vec::new();
    let mut sum = 0.0;
    for (rule, c) in per_rule {
        match f1(c) {
            Some(v) => {
                sum += v;
                included.push(rule.clone());
            }
            None => excluded.push(rule.clone()),
        }
    }
    if included.is_empty() {
        return Err(MetricsError::NoDefinedRules);
    }
    Ok(MacroF1 {
        value: sum / included.len() as f64,
        included,
        excluded,
    })
}

/// Mean-absolute-difference Gini coefficient of non-negative values.
pub fn gini(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(&v) = values.iter().find(|v| **v < 0.0 || v.is_nan()) {
        return Err(MetricsError::NegativeValue(v));
    }
    let total: f64 = values.iter().sum();
    if total == 0.0 {
        return Err(MetricsError::AllZero);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    // sum_{i<j} (x_j - x_i) over sorted values, weighted by rank.
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok(weighted / (n * total))
}

/// Sample Pearson correlation, clamped to [-1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MetricsError::TooShort);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::ConstantSeries);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub rule: String,
    #[serde(flatten)]
    pub counts: ConfusionCounts,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl ScoreRow {
    pub fn new(rule: impl Into<String>, counts: ConfusionCounts) -> Self {
        Self {
            rule: rule.into(),
            precision: precision(&counts),
            recall: recall(&counts),
            f1: f1(&counts),
            counts,
        }
    }
}

/// Per-rule and overall scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSummary {
    pub rules: Vec<ScoreRow>,
    pub overall: ScoreRow,
    #[serde(rename = "macro")]
    pub macro_f1: Option<MacroF1>,
}

impl MetricsSummary {
    pub fn from_confusion(c: &Confusion) -> Self {
        Self {
            rules: c.per_rule.iter().map(|(r, counts)| ScoreRow::new(r.clone(), *counts)).collect(),
            overall: ScoreRow::new("overall", c.overall),
            macro_f1: macro_f1(&c.per_rule).ok(),
        }
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain JSON");
        out.push('\n');
        out
    }

    pub fn render_text(&self) -> String {
        let pct = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{:.2}", 100.0 * v));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>6} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9}",
            "rule", "tp", "fp", "fn", "tn", "precision", "recall", "f1"
        );
        for row in self.rules.iter().chain(std::iter::once(&self.overall)) {
            let c = row.counts;
            let _ = writeln!(
                out,
                "{:<10} {:>6} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9}",
                row.rule,
                c.tp,
                c.fp,
                c.fn_,
                c.tn,
                pct(row.precision),
                pct(row.recall),
                pct(row.f1)
            );
        }
        match &self.macro_f1 {
            Some(m) => {
                let _ = writeln!(out, "macro F1 {:.2} over {} rules", 100.0 * m.value, m.included.len());
                if !m.excluded.is_empty() {
                    let _ = writeln!(out, "undefined F1: {}", m.excluded.join(", "));
                }
            }
            None => {
                let _ = writeln!(out, "macro F1 undefined");
            }
        }
        out
    }
}

/// `P=.. R=.. F1=..` in percent with two decimals; `-` when undefined.
pub fn headline(c: &ConfusionCounts) -> String {
    let pct = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{:.2}", 100.0 * v));
    format!("P={} R={} F1={}", pct(precision(c)), pct(recall(c)), pct(f1(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry(file: &str, rule: &str, line: u32, label: Label) -> TruthEntry {
        TruthEntry {
            file: file.into(),
            rule: rule.into(),
            line,
            label,
        }
    }

    #[test]
    fn table_row_counts() {
        let c = ConfusionCounts::new(344, 44, 43);
        assert!((precision(&c).unwrap() * 100.0 - 88.66).abs() < 0.01);
        assert!((recall(&c).unwrap() * 100.0 - 88.89).abs() < 0.01);
        assert!((f1(&c).unwrap() * 100.0 - 88.77).abs() < 0.01);
        assert_eq!(headline(&c), "P=88.66 R=88.89 F1=88.77");
    }

    #[test]
    fn empty_denominators_are_undefined() {
        let c = ConfusionCounts::default();
        assert_eq!((precision(&c), recall(&c), f1(&c)), (None, None, None));
        assert_eq!(headline(&c), "P=- R=- F1=-");
        let only_fp = ConfusionCounts::new(0, 3, 2);
        assert_eq!((precision(&only_fp), recall(&only_fp), f1(&only_fp)), (Some(0.0), Some(0.0), None));
    }

    #[test]
    fn exact_report_has_no_errors() {
        let truth = GroundTruth::new(
            vec![entry("a.py", "R5", 8, Label::Smell), entry("a.py", "R1", 3, Label::Smell)],
            Granularity::Line,
        )
        .unwrap();
        let dets = vec![Detection::new("a.py", "R5", 8), Detection::new("a.py", "R1", 3)];
        let c = confusion(&dets, &truth, Granularity::Line).unwrap();
        assert_eq!(c.overall, ConfusionCounts::new(2, 0, 0));
    }

    #[test]
    fn matching_rules() {
        let truth = GroundTruth::new(
            vec![
                entry("a.py", "R5", 8, Label::Smell),
                entry("a.py", "R5", 20, Label::Clean),
                entry("a.py", "R1", 3, Label::Smell),
                entry("b.py", "R1", 1, Label::Clean),
            ],
            Granularity::Line,
        )
        .unwrap();
        let dets = vec![
            Detection::new("a.py", "R5", 9),
            Detection::new("a.py", "R5", 20),
            Detection::new("a.py", "R1", 3),
            Detection::new("unlabeled.py", "R5", 1),
        ];
        let line = confusion(&dets, &truth, Granularity::Line).unwrap();
        assert_eq!(line.per_rule["R5"], ConfusionCounts { tp: 0, fp: 2, fn_: 1, tn: 0 });
        assert_eq!(line.per_rule["R1"], ConfusionCounts { tp: 1, fp: 0, fn_: 0, tn: 1 });

        let file = confusion(&dets, &truth, Granularity::File).unwrap();
        assert_eq!(file.per_rule["R5"], ConfusionCounts { tp: 1, fp: 0, fn_: 0, tn: 0 });
    }

    #[test]
    fn file_truth_cannot_be_line_matched() {
        let truth = GroundTruth::new(vec![entry("a.py", "R2", 1, Label::Smell)], Granularity::File).unwrap();
        assert_eq!(confusion(&[], &truth, Granularity::Line), Err(MetricsError::GranularityMismatch));
        assert!(confusion(&[], &truth, Granularity::File).is_ok());
    }

    #[test]
    fn truth_parsing() {
        let text = "{\"granularity\": \"line\", \"version\": 1}\n\n# comment\n\
                    {\"file\": \"a.py\", \"rule\": \"R5\", \"line\": 8, \"label\": \"smell\"}\n";
        let t = GroundTruth::parse_jsonl(text).unwrap();
        assert_eq!(t.entries, [entry("a.py", "R5", 8, Label::Smell)]);
        assert_eq!(GroundTruth::parse_jsonl(&t.to_jsonl()).unwrap(), t);

        let dup = "{\"file\": \"a\", \"rule\": \"R5\", \"line\": 8, \"label\": \"smell\"}\n\
                   {\"file\": \"a\", \"rule\": \"R5\", \"line\": 8, \"label\": \"clean\"}\n";
        assert!(matches!(GroundTruth::parse_jsonl(dup), Err(MetricsError::DuplicateEntry { .. })));
        let bad_label = "{\"file\": \"a\", \"rule\": \"R5\", \"line\": 8, \"label\": \"maybe\"}\n";
        assert!(matches!(GroundTruth::parse_jsonl(bad_label), Err(MetricsError::BadTruth { line: 1, .. })));
    }

    #[test]
    fn macro_mean() {
        let per_rule: BTreeMap<String, ConfusionCounts> = [
            ("A".to_string(), ConfusionCounts::new(2, 0, 0)),
            ("B".to_string(), ConfusionCounts::new(1, 1, 1)),
            ("C".to_string(), ConfusionCounts::default()),
        ]
        .into();
        let m = macro_f1(&per_rule).unwrap();
        assert!((m.value - 0.75).abs() < 1e-12);
        assert_eq!(m.excluded, ["C"]);
        let single: BTreeMap<_, _> = [("B".to_string(), ConfusionCounts::new(1, 1, 1))].into();
        assert!((macro_f1(&single).unwrap().value - 0.5).abs() < 1e-12);
        let none: BTreeMap<_, _> = [("C".to_string(), ConfusionCounts::default())].into();
        assert_eq!(macro_f1(&none), Err(MetricsError::NoDefinedRules));
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&[5.0, 5.0, 5.0]).unwrap(), 0.0);
        assert!((gini(&[0.0, 0.0, 10.0]).unwrap() - 0.6667).abs() < 1e-4);
        assert_eq!(gini(&[]), Err(MetricsError::Empty));
        assert_eq!(gini(&[0.0, 0.0]), Err(MetricsError::AllZero));
        assert_eq!(gini(&[1.0, -1.0]), Err(MetricsError::NegativeValue(-1.0)));
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0], &[1.0]), Err(MetricsError::TooShort));
        assert_eq!(pearson(&[1.0, 2.0], &[1.0]), Err(MetricsError::LengthMismatch(2, 1)));
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(MetricsError::ConstantSeries));
    }

    fn pairwise_gini(x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let mut s = 0.0;
        for a in x {
            for b in x {
                s += (a - b).abs();
            }
        }
        s / (2.0 * n * n * mean)
    }

    proptest! {
        #[test]
        fn f1_bounded_by_precision_and_recall(tp in 0u64..500, fp in 0u64..500, fn_ in 0u64..500) {
            let c = ConfusionCounts::new(tp, fp, fn_);
            if let (Some(p), Some(r), Some(f)) = (precision(&c), recall(&c), f1(&c)) {
                prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&r));
                prop_assert!(f <= p.max(r) + 1e-12);
            }
        }

        #[test]
        fn order_of_detections_does_not_matter(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut entries = Vec::new();
            for f in 0..4 {
                for line in 1..6 {
                    if rng.gen_bool(0.5) {
                        let label = if rng.gen_bool(0.6) { Label::Smell } else { Label::Clean };
                        entries.push(entry(&format!("f{f}"), "R1", line, label));
                    }
                }
            }
            let mut dets: Vec<Detection> = (0..12)
                .map(|_| Detection::new(format!("f{}", rng.gen_range(0..5)), "R1", rng.gen_range(1..6)))
                .collect();
            let truth = GroundTruth::new(entries.clone(), Granularity::Line).unwrap();
            let a = confusion(&dets, &truth, Granularity::Line).unwrap();
            dets.shuffle(&mut rng);
            entries.shuffle(&mut rng);
            let truth2 = GroundTruth::new(entries, Granularity::Line).unwrap();
            prop_assert_eq!(&a, &confusion(&dets, &truth2, Granularity::Line).unwrap());
            let smells = truth.entries.iter().filter(|e| e.label == Label::Smell).count() as u64;
            prop_assert_eq!(a.overall.tp + a.overall.fn_, smells);
        }

        #[test]
        fn gini_scale_invariant(xs in proptest::collection::vec(0.0f64..1000.0, 1..40), k in 0.01f64..100.0) {
            prop_assume!(xs.iter().sum::<f64>() > 0.0);
            let scaled: Vec<f64> = xs.iter().map(|x| x * k).collect();
            prop_assert!((gini(&xs).unwrap() - gini(&scaled).unwrap()).abs() < 1e-10);
            prop_assert!((gini(&xs).unwrap() - pairwise_gini(&xs)).abs() < 1e-10);
        }

        #[test]
        fn gini_of_one_hot(n in 1usize..50, at in 0usize..50) {
            let mut xs = vec![0.0; n];
            xs[at % n] = 3.0;
            prop_assert!((gini(&xs).unwrap() - (n as f64 - 1.0) / n as f64).abs() < 1e-12);
        }

        #[test]
        fn pearson_affine_and_sign(
            pairs in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
            a in 0.1f64..10.0,
            b in -50.0f64..50.0,
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            if let Ok(r) = pearson(&x, &y) {
                prop_assert!((-1.0..=1.0).contains(&r));
                let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                prop_assert!((pearson(&xt, &y).unwrap() - r).abs() < 1e-9);
                let neg: Vec<f64> = y.iter().map(|v| -v).collect();
                prop_assert!((pearson(&x, &neg).unwrap() + r).abs() < 1e-9);
            }
        }
    }
}
