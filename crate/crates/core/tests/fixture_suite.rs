use std::collections::BTreeMap;
use std::path::PathBuf;

use mlsmell::catalog::Catalog;
use mlsmell::engine::{Engine, FileOutcome};
use mlsmell::fixtures::{check_fixture, load_fixture_dir};
use mlsmell::frontend::SourceFile;
use mlsmell::predicates::standard_registry;
use mlsmell::ruleset::{builtin_rule_ids, load_builtin_ruleset};

fn fixtures_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn engine() -> Engine {
    Engine::new(&load_builtin_ruleset(), &standard_registry(), Catalog::builtin(), 1).unwrap()
}

#[test]
fn every_rule_fixture_passes() {
    let engine = engine();
    let fixtures = load_fixture_dir(&fixtures_root().join("rules")).unwrap();
    assert!(fixtures.len() >= 24 * 6, "{} fixtures", fixtures.len());
    let mut per_rule: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut failures = Vec::new();
    for fixture in &fixtures {
        let outcome = check_fixture(&engine, fixture);
        let slot = per_rule.entry(outcome.rule.clone()).or_default();
        if outcome.positive {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
        if !outcome.passed() {
            failures.push(format!(
                "{}: expected {:?}, found {:?}",
                outcome.path.display(),
                outcome.expected,
                outcome.found
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    for id in builtin_rule_ids() {
        let (p, n) = per_rule.get(id).copied().unwrap_or_default();
        assert!(p >= 3 && n >= 3, "{id}: {p} positive, {n} negative fixtures");
    }
}

fn lines_for(engine: &Engine, name: &str, rule: &str) -> Vec<u32> {
    let path = fixtures_root().join("listings").join(name);
    let file = SourceFile::read(&path).unwrap();
    match engine.analyze(name, &file) {
        FileOutcome::Analyzed { findings, .. } => {
            findings.into_iter().filter(|f| f.rule_id == rule).map(|f| f.line).collect()
        }
        FileOutcome::Skipped(why) => panic!("{name}: {why}"),
    }
}

#[test]
fn listing_fixtures() {
    let e = engine();
    assert_eq!(lines_for(&e, "listing1_smelly.py", "R5"), [8]);
    assert_eq!(lines_for(&e, "listing2_smelly.py", "R11"), [4]);
    assert_eq!(lines_for(&e, "listing3_smelly.py", "R1"), [3]);
    assert!(lines_for(&e, "listing1_fixed.py", "R5").is_empty());
    assert!(lines_for(&e, "listing2_fixed.py", "R11").is_empty());
    assert!(lines_for(&e, "listing3_fixed.py", "R1").is_empty());
}

#[test]
fn file_level_rules_report_once_per_file() {
    let e = engine();
    let text = "import numpy as np\nimport torch\nfrom keras.models import Sequential\n\
                a = np.random.rand(2)\nb = np.random.rand(3)\n\
                for i in range(2):\n    m = Sequential()\n    n = Sequential()\n    m.fit(a, b)\n";
    let FileOutcome::Analyzed { findings, .. } = e.analyze("f.py", &SourceFile::new("f.py", text)) else {
        panic!("parse failed");
    };
    for rule in ["R2", "R6", "R10"] {
        assert_eq!(findings.iter().filter(|f| f.rule_id == rule).count(), 1, "{rule}");
    }
}
