use std::fmt::Write as _;

use serde::Serialize;

use super::Report;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleRow {
    pub rule_id: String,
    pub instances: usize,
    /// Percentage of all findings.
    pub share_pct: f64,
    pub affected_files: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingSummary {
    pub wall_time_s: f64,
    pub median_file_s: f64,
    pub p90_file_s: f64,
    pub p99_file_s: f64,
    /// Wall time per 1,000 lines of code.
    pub seconds_per_kloc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub files_scanned: usize,
    pub files_with_findings: usize,
    pub files_skipped: usize,
    pub total_findings: usize,
    pub loc_total: usize,
    pub rules: Vec<RuleRow>,
    pub timing: Option<TimingSummary>,
}

/// Nearest-rank percentile of `sorted` (ascending), `p` in (0, 100].
pub fn nearest_rank(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = (p * sorted.len() as f64 / 100.0).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Rule ids ordered R1, R2, ..., R10 rather than byte-wise.
fn natural_key(id: &str) -> (String, u64, String) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    let (head, tail) = id.split_at(split);
    let digits: String = tail.chars().take_while(char::is_ascii_digit).collect();
    (head.to_string(), digits.parse().unwrap_or(0), tail[digits.len()..].to_string())
}

pub fn summarize(report: &Report) -> Summary {
    let total = report.total_findings();
    let mut rules: Vec<RuleRow> = report
        .rule_counts()
        .into_iter()
        .map(|(rule_id, c)| RuleRow {
            share_pct: 100.0 * c.instances as f64 / total as f64,
            rule_id,
            instances: c.instances,
            affected_files: c.affected_files,
        })
        .collect();
    rules.sort_by_key(|r| natural_key(&r.rule_id));

    let timing = report.stats.timings.as_ref().map(|t| {
        let mut times: Vec<f64> = t.per_file_s.values().copied().collect();
        times.sort_by(f64::total_cmp);
        let kloc = report.stats.loc_total as f64 / 1000.0;
        TimingSummary {
            wall_time_s: t.wall_time_s,
            median_file_s: nearest_rank(&times, 50.0).unwrap_or(0.0),
            p90_file_s: nearest_rank(&times, 90.0).unwrap_or(0.0),
            p99_file_s: nearest_rank(&times, 99.0).unwrap_or(0.0),
            seconds_per_kloc: (kloc > 0.0).then(|| t.wall_time_s / kloc),
        }
    });

    Summary {
        files_scanned: report.stats.files_scanned,
        files_with_findings: report.files_with_findings(),
        files_skipped: report.stats.skipped_files.len(),
        total_findings: total,
        loc_total: report.stats.loc_total,
        rules,
        timing,
    }
}

impl Summary {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "files scanned        {}", self.files_scanned);
        let _ = writeln!(out, "files with findings  {}", self.files_with_findings);
        let _ = writeln!(out, "files skipped        {}", self.files_skipped);
        let _ = writeln!(out, "total findings       {}", self.total_findings);
        let _ = writeln!(out, "lines of code        {}", self.loc_total);
        if !self.rules.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<8} {:>9} {:>8} {:>14}", "rule", "instances", "share", "affected files");
            for r in &self.rules {
                let _ = writeln!(
                    out,
                    "{:<8} {:>9} {:>7.2}% {:>14}",
                    r.rule_id, r.instances, r.share_pct, r.affected_files
                );
            }
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out);
            let _ = writeln!(out, "wall time            {:.3} s", t.wall_time_s);
            let _ = writeln!(
                out,
                "per-file time        median {:.4} s, p90 {:.4} s, p99 {:.4} s",
                t.median_file_s, t.p90_file_s, t.p99_file_s
            );
            if let Some(k) = t.seconds_per_kloc {
                let _ = writeln!(out, "time per 1,000 LOC   {k:.4} s");
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("summary is plain JSON");
        out.push('\n');
        out
    }
}
