use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use mlsmell::catalog::Catalog;
use mlsmell::engine::{summarize, write_output, DiscoverOptions, Engine, Format, Report};
use mlsmell::metrics::{confusion, detections, headline, ConfusionCounts, Granularity, GroundTruth, MetricsSummary};
use mlsmell::predicates::standard_registry;
use mlsmell::ruleset::{check_rules, load_builtin_ruleset, load_rule_paths, merge_rules, RulesetError, RULESET_VERSION};

#[derive(Parser)]
#[command(name = "mlsmell", about = "Find ML-specific code smells in Python projects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a file or directory and report findings.
    Scan(ScanArgs),
    /// Parse and validate rule files without scanning.
    CheckRules {
        /// Rule files or directories of `.smell` files. Defaults to the builtin rules.
        paths: Vec<PathBuf>,
    },
    /// Score a report against ground truth.
    Eval(EvalArgs),
    /// Summarize a saved json report.
    Stats {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
}

#[derive(Args)]
struct ScanArgs {
    path: PathBuf,
    /// Extra rule file or directory; replaces builtin rules of the same id.
    #[arg(long = "rules")]
    rules: Vec<PathBuf>,
    /// Use only the rules given with --rules.
    #[arg(long)]
    no_builtin: bool,
    #[arg(long, env = "MLSMELL_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the statistics block from json output.
    #[arg(long)]
    strict_listing7: bool,
    /// Print the compiled form of every rule to stderr.
    #[arg(long)]
    emit_matchers: bool,
    /// Extra directory name to skip.
    #[arg(long)]
    deny: Vec<String>,
    /// Do not skip the default directories (.git, venv, ...).
    #[arg(long)]
    no_default_deny: bool,
    /// TOML file overriding catalog entries.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Include wall-clock timings in the report. Makes output non-reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, required_unless_present = "counts", requires = "truth")]
    report: Option<PathBuf>,
    /// Ground truth as json lines.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Match on (file, rule) instead of (file, rule, line).
    #[arg(long)]
    file_level: bool,
    /// Score raw counts `tp,fp,fn` instead of a report.
    #[arg(long, conflicts_with_all = ["report", "truth"], value_parser = parse_counts)]
    counts: Option<ConfusionCounts>,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

fn parse_counts(s: &str) -> Result<ConfusionCounts, String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("expected tp,fp,fn: {e}"))?;
    match parts[..] {
        [tp, fp, fn_] => Ok(ConfusionCounts::new(tp, fp, fn_)),
        _ => Err("expected three counts tp,fp,fn".to_string()),
    }
}

fn version() -> String {
    format!(
        "{} (ruleset {}, catalog {})",
        env!("CARGO_PKG_VERSION"),
        RULESET_VERSION,
        Catalog::builtin().version()
    )
}

fn main() -> ExitCode {
    let matches = match Cli::command().version(version()).try_get_matches() {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&anyhow!(first_line(&e.render().to_string()).trim_start_matches("error: ").to_string())),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => return fail(&anyhow!(e.to_string())),
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or(s)
}

fn fail(e: &anyhow::Error) -> ExitCode {
    let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
    eprintln!("error: {}", first_line(&chain.join(": ")));
    ExitCode::from(2)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Scan(args) => scan(args),
        Command::CheckRules { paths } => check(&paths),
        Command::Eval(args) => eval(args),
        Command::Stats { report, format } => {
            let summary = summarize(&read_report(&report)?);
            print!(
                "{}",
                match format {
                    OutFormat::Json => summary.render_json(),
                    OutFormat::Text => summary.render_text(),
                }
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn scan(args: ScanArgs) -> Result<ExitCode> {
    if !args.path.exists() {
        bail!("{}: no such file or directory", args.path.display());
    }
    let registry = standard_registry();
    let base = if args.no_builtin { Vec::new() } else { load_builtin_ruleset() };
    let rules = if args.rules.is_empty() {
        base
    } else {
        merge_rules(base, load_rule_paths(&args.rules)?)
    };
    if rules.is_empty() {
        bail!("no rules to run");
    }
    check_rules(&rules, &registry).map_err(one_line)?;

    let catalog = match &args.catalog {
        Some(path) => Arc::new(Catalog::load_override(path)?),
        None => Catalog::builtin(),
    };
    let jobs = match args.jobs {
        Some(j) => j as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let engine = Engine::new(&rules, &registry, catalog, jobs)?;
    if args.emit_matchers {
        for m in engine.matchers() {
            eprint!("{}", m.emit());
        }
    }

    let mut options = DiscoverOptions::default();
    if args.no_default_deny {
        options.deny.clear();
    }
    options.deny.extend(args.deny);
    let report = engine.scan(&args.path, &options, args.timings)?;

    let format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    write_output(&report.render(format, args.strict_listing7), args.out.as_deref())?;
    Ok(if report.total_findings() > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// Validation can yield several errors; the diagnostic keeps the first and a count.
fn one_line(e: RulesetError) -> anyhow::Error {
    match e {
        RulesetError::Invalid(errors) if errors.len() > 1 => {
            anyhow!("{} (and {} more error(s))", errors[0], errors.len() - 1)
        }
        other => other.into(),
    }
}

fn check(paths: &[PathBuf]) -> Result<ExitCode> {
    let registry = standard_registry();
    let rules = if paths.is_empty() {
        load_builtin_ruleset()
    } else {
        load_rule_paths(paths)?
    };
    match check_rules(&rules, &registry) {
        Ok(()) => {
            println!("{} rule{} OK", rules.len(), if rules.len() == 1 { "" } else { "s" });
            Ok(ExitCode::SUCCESS)
        }
        Err(RulesetError::Invalid(errors)) => {
            for e in &errors {
                println!("{e}");
            }
            bail!("{} invalid rule error(s)", errors.len())
        }
        Err(e) => Err(e.into()),
    }
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    if let Some(counts) = args.counts {
        match args.format {
            OutFormat::Text => println!("{}", headline(&counts)),
            OutFormat::Json => print!("{}", MetricsSummary::from_confusion(&single(counts)).render_json()),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let (Some(report), Some(truth)) = (args.report, args.truth) else {
        bail!("eval needs --report and --truth, or --counts");
    };
    let report = read_report(&report)?;
    let text = std::fs::read_to_string(&truth).with_context(|| truth.display().to_string())?;
    let truth = GroundTruth::parse_jsonl(&text).with_context(|| truth.display().to_string())?;
    let granularity = if args.file_level { Granularity::File } else { Granularity::Line };
    let c = confusion(&detections(&report), &truth, granularity)?;
    let summary = MetricsSummary::from_confusion(&c);
    match args.format {
        OutFormat::Text => {
            println!("{}", headline(&c.overall));
            print!("{}", summary.render_text());
        }
        OutFormat::Json => print!("{}", summary.render_json()),
    }
    Ok(ExitCode::SUCCESS)
}

fn single(counts: ConfusionCounts) -> mlsmell::metrics::Confusion {
    mlsmell::metrics::Confusion {
        overall: counts,
        per_rule: [("counts".to_string(), counts)].into(),
    }
}

fn read_report(path: &Path) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
    Report::parse(&text).with_context(|| path.display().to_string())
}
