//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mlsmell::catalog::Catalog;
use mlsmell::dsl::{compile_rule, interpret_rule, Arg, Condition, RuleSpec};
use mlsmell::engine::{discover_files, relative_key, DiscoverOptions, Engine};
use mlsmell::fixtures::{check_fixture, load_fixture_dir};
use mlsmell::frontend::context::build_context_with;
use mlsmell::frontend::{parse_source, Ast, FileContext};
use mlsmell::metrics::{f1, gini, pearson, precision, recall, ConfusionCounts};
use mlsmell::predicates::{core_registry, standard_registry, FileView, ParamKind, PredicateRegistry};
use mlsmell::ruleset::{builtin_rule_ids, builtin_rule_source, dsl_line_count, load_builtin_ruleset};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fixtures_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn engine(jobs: usize) -> Engine {
    Engine::new(&load_builtin_ruleset(), &standard_registry(), Catalog::builtin(), jobs).expect("builtin rules compile")
}

fn c1_listings() -> Outcome {
    let start = Instant::now();
    let report = engine(1)
        .scan(&fixtures_root().join("listings"), &DiscoverOptions::default(), false)
        .expect("listings scan");
    let elapsed = start.elapsed();
    let watched = ["R1", "R5", "R11"];
    let found: BTreeSet<(String, String, u32)> = report
        .entries()
        .filter(|(_, rule, _)| watched.contains(rule))
        .map(|(file, rule, e)| (file.to_string(), rule.to_string(), e.line.unwrap_or(0)))
        .collect();
    let expected: BTreeSet<(String, String, u32)> = [
        ("listing1_smelly.py", "R5", 8),
        ("listing2_smelly.py", "R11", 4),
        ("listing3_smelly.py", "R1", 3),
    ]
    .iter()
    .map(|(f, r, l)| (f.to_string(), r.to_string(), *l))
    .collect();
    let pass = report.stats.files_scanned == 6 && found == expected && elapsed < Duration::from_secs(1);
    outcome(pass, format!("found {found:?} on 6 listings in {elapsed:.2?} (limit 1s)"))
}

fn c2_fixture_suite() -> Outcome {
    let start = Instant::now();
    let engine = engine(1);
    let fixtures = load_fixture_dir(&fixtures_root().join("rules")).expect("fixture corpus");
    let mut per_rule: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut failures = Vec::new();
    for f in &fixtures {
        let o = check_fixture(&engine, f);
        let slot = per_rule.entry(o.rule.clone()).or_default();
        if o.positive {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
        if !o.passed() {
            failures.push(format!("{}: expected {:?} found {:?}", o.path.display(), o.expected, o.found));
        }
    }
    let elapsed = start.elapsed();
    let thin: Vec<&str> = builtin_rule_ids()
        .filter(|id| per_rule.get(*id).is_none_or(|(p, n)| *p < 3 || *n < 3))
        .collect();
    let pass = failures.is_empty() && thin.is_empty() && builtin_rule_ids().count() == 24 && elapsed < Duration::from_secs(10);
    let mut detail = format!(
        "{} fixtures over {} rules, {} failing, under-covered {:?}, {elapsed:.2?} (limit 10s)",
        fixtures.len(),
        per_rule.len(),
        failures.len(),
        thin
    );
    for f in failures.iter().take(5) {
        detail.push_str(&format!("\n    {f}"));
    }
    outcome(pass, detail)
}

fn c3_metric_reproduction() -> Outcome {
    let c = ConfusionCounts::new(344, 44, 43);
    let targets = [("P", 88.66), ("R", 88.89), ("F1", 88.77)];
    let lib = [precision(&c), recall(&c), f1(&c)].map(|v| v.map(|v| 100.0 * v));
    let lib_ok = lib.iter().zip(targets).all(|(v, (_, t))| v.is_some_and(|v| (v - t).abs() <= 0.01));

    let out = Command::new(env!("CARGO_BIN_EXE_mlsmell"))
        .args(["eval", "--counts", "344,44,43"])
        .output()
        .expect("cli runs");
    let printed = String::from_utf8_lossy(&out.stdout).trim().to_string();
    let parsed: BTreeMap<String, f64> = printed
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .filter_map(|(k, v)| Some((k.to_string(), v.parse().ok()?)))
        .collect();
    let cli_ok = out.status.success()
        && targets
            .iter()
            .all(|(k, t)| parsed.get(*k).is_some_and(|v| (v - t).abs() <= 0.01));
    outcome(
        lib_ok && cli_ok,
        format!(
            "cli `{printed}`, library P={:.4} R={:.4} F1={:.4} (tolerance 0.01 pp)",
            lib[0].unwrap_or(f64::NAN),
            lib[1].unwrap_or(f64::NAN),
            lib[2].unwrap_or(f64::NAN)
        ),
    )
}

const STRINGS: &[&str] = &["how", "on", "dtype", "usecols", "index_col", "random_state", "axis", "x"];

fn random_condition(
    rng: &mut ChaCha8Rng,
    sigs: &[(String, Vec<ParamKind>)],
    vars: &mut Vec<String>,
    depth: u32,
    nested_left: &mut u32,
) -> Condition {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..6) };
    match choice {
        1 => Condition::not(random_condition(rng, sigs, vars, depth - 1, nested_left)),
        2 => Condition::and(
            random_condition(rng, sigs, vars, depth - 1, nested_left),
            random_condition(rng, sigs, vars, depth - 1, nested_left),
        ),
        3 => Condition::or(
            random_condition(rng, sigs, vars, depth - 1, nested_left),
            random_condition(rng, sigs, vars, depth - 1, nested_left),
        ),
        4 if *nested_left > 0 => {
            *nested_left -= 1;
            let var = format!("v{}", vars.len());
            vars.push(var.clone());
            let body = random_condition(rng, sigs, vars, depth - 1, nested_left);
            vars.pop();
            Condition::exists(var, body)
        }
        _ => {
            let (name, params) = sigs.choose(rng).expect("registry is not empty");
            let args = params
                .iter()
                .map(|p| match p {
                    ParamKind::Node => Arg::Var(vars.choose(rng).expect("a bound variable").clone()),
                    ParamKind::Str => Arg::Str(STRINGS.choose(rng).expect("pool").to_string()),
                })
                .collect();
            Condition::call(name.clone(), args)
        }
    }
}

fn random_rule(rng: &mut ChaCha8Rng, sigs: &[(String, Vec<ParamKind>)], n: usize) -> RuleSpec {
    let mut vars = vec!["c".to_string()];
    let mut nested = 1;
    let depth = rng.gen_range(0..5);
    let body = random_condition(rng, sigs, &mut vars, depth, &mut nested);
    let action = ["at line {lineno}", "{rule_id} on {name} at line {lineno}", "plain"]
        .choose(rng)
        .expect("templates");
    RuleSpec::new(format!("Q{n}"), format!("Random {n}"), Condition::exists("c", body), action)
}

struct Parsed {
    key: String,
    ast: Ast,
    ctx: FileContext,
}

fn parsed_corpus() -> Vec<Parsed> {
    let catalog = Catalog::builtin();
    let mut out = Vec::new();
    for dir in ["rules", "listings"] {
        let root = fixtures_root().join(dir);
        let files = discover_files(&root, &DiscoverOptions::default()).expect("fixtures");
        for file in files {
            let key = relative_key(&root, &file.path);
            if let Ok(ast) = parse_source(&file) {
                let ctx = build_context_with(&ast, catalog.clone());
                out.push(Parsed { key, ast, ctx });
            }
        }
    }
    out
}

fn c4_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let registry: PredicateRegistry = standard_registry();
    let sigs: Vec<(String, Vec<ParamKind>)> = registry.signatures().map(|s| (s.name.clone(), s.params.clone())).collect();
    let builtins = load_builtin_ruleset();
    let corpus = parsed_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let (mut divergent, mut nonempty, mut random_rules) = (Vec::new(), 0usize, 0usize);
    for i in 0..1000 {
        let rule = if rng.gen_bool(0.5) {
            builtins.choose(&mut rng).expect("builtins").clone()
        } else {
            random_rules += 1;
            random_rule(&mut rng, &sigs, i)
        };
        let file = corpus.choose(&mut rng).expect("corpus");
        let view = FileView::new(&file.key, &file.ast, &file.ctx);
        let compiled = compile_rule(&rule, &registry).map(|m| m.run(&view));
        let interpreted = interpret_rule(&rule, &view, &registry);
        match (compiled, interpreted) {
            (Ok(a), Ok(b)) if a == b => nonempty += usize::from(!a.is_empty()),
            (a, b) => divergent.push(format!("{} on {}: {:?} vs {:?}", rule.id, file.key, a.ok(), b.ok())),
        }
    }
    let elapsed = start.elapsed();
    let pass = divergent.is_empty() && elapsed < Duration::from_secs(60);
    let mut detail = format!(
        "1000 pairs ({random_rules} random rules, {} files, {nonempty} with findings), {} divergent, {elapsed:.2?} (limit 60s)",
        corpus.len(),
        divergent.len()
    );
    for d in divergent.iter().take(3) {
        detail.push_str(&format!("\n    {d}"));
    }
    outcome(pass, detail)
}

fn c5_determinism() -> Outcome {
    let root = fixtures_root();
    let outputs: Vec<(usize, String)> = [1, 4, 8]
        .iter()
        .map(|&jobs| {
            let report = engine(jobs).scan(&root, &DiscoverOptions::default(), false).expect("corpus scan");
            (jobs, report.render_json(false))
        })
        .collect();
    let same = outputs.windows(2).all(|w| w[0].1 == w[1].1);
    outcome(
        same && !outputs[0].1.is_empty(),
        format!("jobs 1/4/8 json reports of {} bytes, identical: {same}", outputs[0].1.len()),
    )
}

fn synthetic_corpus(dir: &Path) -> usize {
    let mut texts: Vec<String> = Vec::new();
    for sub in ["rules", "listings"] {
        let root = fixtures_root().join(sub);
        for file in discover_files(&root, &DiscoverOptions::default()).expect("fixtures") {
            texts.push(file.text);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let n = 60;
    for i in 0..n {
        let mut body = String::new();
        while body.lines().count() < 150 {
            body.push_str(texts.choose(&mut rng).expect("texts"));
            body.push('\n');
        }
        std::fs::write(dir.join(format!("module_{i:03}.py")), body).expect("write corpus");
    }
    n
}

fn c6_throughput() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let written = synthetic_corpus(dir.path());
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let engine = engine(jobs);
    let report = engine.scan(dir.path(), &DiscoverOptions::default(), true).expect("synthetic scan");
    let wall = report.stats.timings.as_ref().map_or(f64::INFINITY, |t| t.wall_time_s);
    let kloc = report.stats.loc_total as f64 / 1000.0;
    let per_kloc = wall / kloc;
    let throughput_ok = report.stats.files_scanned >= 50 && report.stats.skipped_files.is_empty() && per_kloc <= 1.0;

    // Per file: parallel run of all rules against the serial sum of the
    // per-rule times, paired within one repetition. The median ratio over
    // repetitions discards scheduler hiccups on either side.
    let mut worst: (f64, String) = (0.0, String::new());
    let mut over = 0;
    let files = discover_files(dir.path(), &DiscoverOptions::default()).expect("corpus");
    for file in &files {
        let key = relative_key(dir.path(), &file.path);
        let mut ratios: Vec<f64> = (0..25)
            .map(|_| {
                let t = engine.time_rules(file).expect("synthetic file parses");
                t.parallel.as_secs_f64() / t.serial_sum().as_secs_f64()
            })
            .collect();
        ratios.sort_by(f64::total_cmp);
        let ratio = ratios[ratios.len() / 2];
        if ratio > 1.1 {
            over += 1;
        }
        if ratio > worst.0 {
            worst = (ratio, key);
        }
    }
    let pass = throughput_ok && over == 0;
    outcome(
        pass,
        format!(
            "{} files ({written} written), {:.1} KLOC, {:.4} s/KLOC (limit 1.0); median parallel/serial worst {:.3} on {} (limit 1.10), {over} over; jobs {jobs}",
            report.stats.files_scanned, kloc, per_kloc, worst.0, worst.1
        ),
    )
}

/// Exact rational a/b compared with a float: |x - a/b| computed as
/// |x*b - a| / b in wide integers where possible.
fn frac_close(x: Option<f64>, num: u128, den: u128, tol: f64) -> bool {
    match x {
        None => den == 0,
        Some(_) if den == 0 => false,
        Some(x) => {
            // Reduce first so the float conversion of both parts is exact.
            let g = gcd(num, den);
            let (n, d) = (num / g, den / g);
            (x - n as f64 / d as f64).abs() <= tol
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
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

fn covariance_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (n - 1.0);
    let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    cov / (sx * sy)
}

fn c7_metric_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut bad_counts = 0;
    for _ in 0..10_000 {
        let (tp, fp, fn_) = (rng.gen_range(0..200u64), rng.gen_range(0..200u64), rng.gen_range(0..200u64));
        let c = ConfusionCounts::new(tp, fp, fn_);
        let (tp, fp, fn_) = (tp as u128, fp as u128, fn_ as u128);
        // F1 = 2tp / (2tp + fp + fn), undefined when tp = 0 and P or R is 0/undefined.
        let f1_den = if tp == 0 { 0 } else { 2 * tp + fp + fn_ };
        let ok = frac_close(precision(&c), tp, tp + fp, 1e-12)
            && frac_close(recall(&c), tp, tp + fn_, 1e-12)
            && frac_close(f1(&c), 2 * tp, f1_den, 1e-12);
        bad_counts += usize::from(!ok);
    }

    let mut bad_gini = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..60);
        let xs: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1000.0) })
            .collect();
        if xs.iter().all(|x| *x == 0.0) {
            continue;
        }
        let k = rng.gen_range(0.001..1000.0);
        let scaled: Vec<f64> = xs.iter().map(|x| x * k).collect();
        let g = gini(&xs).expect("valid vector");
        let ok = (g - pairwise_gini(&xs)).abs() <= 1e-10 && (g - gini(&scaled).expect("valid")).abs() <= 1e-10;
        bad_gini += usize::from(!ok);
    }

    let mut bad_pearson = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..80);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1000.0..1000.0)).collect();
        let slope = rng.gen_range(-3.0..3.0);
        let y: Vec<f64> = x.iter().map(|v| slope * v + rng.gen_range(-500.0..500.0)).collect();
        let r = pearson(&x, &y).expect("random series are not constant");
        let ok = (r - covariance_pearson(&x, &y)).abs() <= 1e-10 && (-1.0..=1.0).contains(&r);
        bad_pearson += usize::from(!ok);
    }
    outcome(
        bad_counts + bad_gini + bad_pearson == 0,
        format!("mismatches: confusion {bad_counts}/10000, gini {bad_gini}/1000, pearson {bad_pearson}/1000"),
    )
}

fn c8_extensibility() -> Outcome {
    let core = core_registry();
    let standard = standard_registry();
    let rule = |id: &str| mlsmell::dsl::parse_rules(builtin_rule_source(id).expect("builtin")).expect("parses").remove(0);
    let (x1, x2) = (rule("X1"), rule("X2"));
    let x1_lines = dsl_line_count(builtin_rule_source("X1").unwrap_or_default());
    let x2_lines = dsl_line_count(builtin_rule_source("X2").unwrap_or_default());

    let x1_only_core = x1.condition.predicate_names().iter().all(|p| core.contains(p)) && compile_rule(&x1, &core).is_ok();
    let new_preds: BTreeSet<&str> = x2.condition.predicate_names().into_iter().filter(|p| !core.contains(p)).collect();
    let one_new = new_preds.len() == 1
        && standard.len() == core.len() + 1
        && new_preds.iter().all(|p| standard.contains(p))
        && compile_rule(&x2, &core).is_err()
        && compile_rule(&x2, &standard).is_ok();

    let engine = engine(1);
    let fixtures = load_fixture_dir(&fixtures_root().join("rules")).expect("fixtures");
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for f in fixtures.iter().filter(|f| f.rule == "X1" || f.rule == "X2") {
        let slot = counts.entry(if f.rule == "X1" { "X1" } else { "X2" }).or_default();
        slot.0 += 1;
        slot.1 += usize::from(check_fixture(&engine, f).passed());
    }
    let suites_ok = ["X1", "X2"].iter().all(|id| counts.get(id).is_some_and(|(n, ok)| *n >= 6 && n == ok));
    outcome(
        x1_lines <= 10 && x2_lines <= 10 && x1_only_core && one_new && suites_ok,
        format!(
            "X1 {x1_lines} lines, core predicates only: {x1_only_core}; X2 {x2_lines} lines, new predicates {new_preds:?}, exactly one: {one_new}; fixtures passed {counts:?}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1 listing fixtures", c1_listings),
        ("C2 per-rule fixture suite", c2_fixture_suite),
        ("C3 metric reproduction", c3_metric_reproduction),
        ("C4 compiler/interpreter equivalence", c4_oracle_equivalence),
        ("C5 determinism under parallelism", c5_determinism),
        ("C6 throughput", c6_throughput),
        ("C7 metric properties", c7_metric_properties),
        ("C8 extensibility", c8_extensibility),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
