//! The `mathlint` command-line interface.
//!
//! Exit codes: 0 clean, 1 diagnostics at error severity (or any diagnostic
//! with `--strict`), 2 usage/config/IO failure. Diagnostics go to stdout,
//! progress and summaries to stderr.

use std::ffi::OsString;
use std::io::IsTerminal;
use std::path::PathBuf;

use chrono::{NaiveDate, Utc};
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{self, LintConfig};
use crate::debt::{self, FileScan};
use crate::deprecation::{self, DeprecationKind};
use crate::diagnostics::{format_diagnostics, Diagnostic, OutputFormat, Severity};
use crate::lexer::tokenize;
use crate::lint::LinterRegistry;
use crate::project::{
    lint_paths, plan_fix_texts, render_diff, write_fixes, LintOptions, ProjectLint,
};
use crate::rules;

#[derive(Parser)]
#[command(
    name = "mathlint",
    version,
    about = "Linting, deprecation migration, import analysis and debt metrics for Lean-style modules",
    disable_help_subcommand = true
)]
struct Cli {
    /// Config file (default: mathlint.toml found from the target upward)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (default: logical CPU count)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Output format for diagnostics
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: FormatArg,

    /// Exit nonzero on any diagnostic, not only errors
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Human,
    Json,
    Ci,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Human => OutputFormat::Human,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Ci => OutputFormat::CiAnnotations,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Lint files or directories
    Lint {
        /// Files or project directories (default: current directory)
        paths: Vec<PathBuf>,
        /// Apply available fixes in place
        #[arg(long)]
        fix: bool,
        /// With --fix: print diffs instead of writing files
        #[arg(long)]
        dry_run: bool,
    },
    /// Import-graph analysis
    Imports {
        #[command(subcommand)]
        cmd: ImportsCmd,
    },
    /// Deprecation registry: listing, expiry, automatic migration
    Deprecations {
        #[command(subcommand)]
        cmd: DeprecationsCmd,
    },
    /// Technical-debt metrics
    Debt {
        #[command(subcommand)]
        cmd: DebtCmd,
    },
    /// Print the rule catalogue and the shipped defaults
    Rules,
}

#[derive(Subcommand)]
enum ImportsCmd {
    /// Print the module import graph
    Graph {
        paths: Vec<PathBuf>,
        /// Emit DOT instead of a plain listing
        #[arg(long)]
        dot: bool,
    },
    /// Report provably removable imports
    Unused { paths: Vec<PathBuf> },
    /// Check the configured directory dependency rules
    CheckDirs { paths: Vec<PathBuf> },
}

#[derive(Subcommand)]
enum DeprecationsCmd {
    /// List all registered deprecations
    List { paths: Vec<PathBuf> },
    /// List deprecations whose grace period has run out
    Expired {
        paths: Vec<PathBuf>,
        /// Evaluate expiry as of this date (YYYY-MM-DD, default: today)
        #[arg(long, value_name = "YYYY-MM-DD")]
        as_of: Option<String>,
    },
    /// Rewrite uses of deprecated names and imports of deprecated modules
    Fix {
        paths: Vec<PathBuf>,
        /// Print diffs instead of writing files
        #[arg(long)]
        dry_run: bool,
    },
}

#[derive(Subcommand)]
enum DebtCmd {
    /// Scan debt markers and report counts, optionally against a baseline
    Report {
        paths: Vec<PathBuf>,
        /// Compare against a stored baseline file
        #[arg(long, value_name = "FILE")]
        baseline: Option<PathBuf>,
        /// Write the current report as the new baseline
        #[arg(long, value_name = "FILE")]
        save_baseline: Option<PathBuf>,
        /// Exit nonzero when a ratcheted category increased
        #[arg(long)]
        fail_on_regression: bool,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn targets(paths: Vec<PathBuf>) -> Vec<PathBuf> {
    if paths.is_empty() {
        vec![PathBuf::from(".")]
    } else {
        paths
    }
}

fn search_roots(paths: &[PathBuf]) -> Vec<PathBuf> {
    let mut roots: Vec<PathBuf> = paths
        .iter()
        .map(|p| {
            if p.is_dir() {
                p.clone()
            } else {
                p.parent().map(PathBuf::from).unwrap_or_else(|| ".".into())
            }
        })
        .collect();
    if let Ok(cwd) = std::env::current_dir() {
        roots.push(cwd);
    }
    roots
}

fn load_config_for(
    explicit: Option<&PathBuf>,
    paths: &[PathBuf],
) -> Result<LintConfig, String> {
    let roots = search_roots(paths);
    config::load_config(explicit.map(|p| p.as_path()), &roots)
        .map(|(c, _)| c)
        .map_err(|e| e.to_string())
}

fn lint_project_at(
    paths: &[PathBuf],
    config: &LintConfig,
    jobs: Option<usize>,
) -> Result<ProjectLint, String> {
    let registry = LinterRegistry::default();
    lint_paths(paths, &registry, config, &LintOptions { jobs }).map_err(|e| e.to_string())
}

fn color_enabled() -> bool {
    std::io::stdout().is_terminal() && std::env::var_os("MATHLINT_NO_COLOR").is_none()
}

fn print_diagnostics(diags: &[Diagnostic], format: FormatArg) {
    match format {
        FormatArg::Human if color_enabled() => {
            for d in diags {
                let color = match d.severity {
                    Severity::Error => "\x1b[31m",
                    Severity::Warning => "\x1b[33m",
                    Severity::Info => "\x1b[36m",
                };
                println!(
                    "{}:{}:{}: [{}{}\x1b[0m] {}: {}",
                    d.file, d.span.line, d.span.col, color, d.severity, d.rule, d.message
                );
            }
        }
        _ => {
            let text = format_diagnostics(diags, format.into());
            if !text.is_empty() {
                print!("{text}");
                if FormatArg::Json == format {
                    println!();
                }
            } else if format == FormatArg::Json {
                println!("[]");
            }
        }
    }
}

fn exit_code_for(diags: &[Diagnostic], strict: bool) -> i32 {
    if diags.iter().any(|d| d.severity == Severity::Error) {
        1
    } else if strict && !diags.is_empty() {
        1
    } else {
        0
    }
}

fn today() -> NaiveDate {
    if let Ok(v) = std::env::var("MATHLINT_TODAY") {
        if let Ok(d) = NaiveDate::parse_from_str(&v, "%Y-%m-%d") {
            return d;
        }
    }
    Utc::now().date_naive()
}

fn timestamp() -> String {
    std::env::var("MATHLINT_TIMESTAMP")
        .unwrap_or_else(|_| Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string())
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Lint { paths, fix, dry_run } => {
            let paths = targets(paths);
            let config = load_config_for(cli.config.as_ref(), &paths)?;
            let mut project = lint_project_at(&paths, &config, cli.jobs)?;
            if fix {
                let outcome = plan_fix_texts(&project, &project.diagnostics, None);
                if dry_run {
                    for (path, old, new) in &outcome.changes {
                        print!("{}", render_diff(path, old, new));
                    }
                    eprintln!(
                        "would fix {} issue(s) in {} file(s)",
                        outcome.total_edits,
                        outcome.changes.len()
                    );
                    return Ok(exit_code_for(&project.diagnostics, cli.strict));
                }
                write_fixes(&project, &outcome).map_err(|e| e.to_string())?;
                eprintln!(
                    "fixed {} issue(s) in {} file(s)",
                    outcome.total_edits,
                    outcome.changes.len()
                );
                project = lint_project_at(&paths, &config, cli.jobs)?;
            }
            print_diagnostics(&project.diagnostics, cli.format);
            Ok(exit_code_for(&project.diagnostics, cli.strict))
        }

        Command::Imports { cmd } => match cmd {
            ImportsCmd::Graph { paths, dot } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                if dot {
                    print!("{}", project.graph.to_dot());
                } else {
                    for module in &project.graph.nodes {
                        let deps = project.graph.direct_imports(module);
                        if deps.is_empty() {
                            println!("{module}");
                        } else {
                            println!("{module} -> {}", deps.join(", "));
                        }
                    }
                }
                let cycles: Vec<&Diagnostic> = project
                    .diagnostics
                    .iter()
                    .filter(|d| d.rule == "imports.cycle")
                    .collect();
                for c in &cycles {
                    eprintln!("{}: {}", c.file, c.message);
                }
                Ok(if cycles.is_empty() { 0 } else { 1 })
            }
            ImportsCmd::Unused { paths } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let diags: Vec<Diagnostic> = project
                    .diagnostics
                    .iter()
                    .filter(|d| d.rule == "imports.unused" || d.rule == "imports.cycle")
                    .cloned()
                    .collect();
                print_diagnostics(&diags, cli.format);
                Ok(exit_code_for(&diags, cli.strict))
            }
            ImportsCmd::CheckDirs { paths } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let diags: Vec<Diagnostic> = project
                    .diagnostics
                    .iter()
                    .filter(|d| {
                        d.rule == "imports.directoryDependency" || d.rule == "imports.cycle"
                    })
                    .cloned()
                    .collect();
                print_diagnostics(&diags, cli.format);
                Ok(exit_code_for(&diags, cli.strict))
            }
        },

        Command::Deprecations { cmd } => match cmd {
            DeprecationsCmd::List { paths } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let entries = project.env.deprecations.chronological();
                if cli.format == FormatArg::Json {
                    let items: Vec<serde_json::Value> = entries
                        .iter()
                        .map(|e| {
                            serde_json::json!({
                                "oldName": e.old_name,
                                "replacement": e.replacement,
                                "message": e.message,
                                "since": e.since.map(|d| d.format("%Y-%m-%d").to_string()),
                                "kind": match e.kind {
                                    DeprecationKind::Declaration => "declaration",
                                    DeprecationKind::Module => "module",
                                },
                                "suggestedImports": e.suggested_imports,
                                "module": e.module,
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                } else {
                    for e in &entries {
                        let since = e
                            .since
                            .map(|d| d.format("%Y-%m-%d").to_string())
                            .unwrap_or_else(|| "unknown".to_string());
                        let target = match (&e.kind, &e.replacement) {
                            (DeprecationKind::Module, _) => {
                                format!("module -> import {}", e.suggested_imports.join(", "))
                            }
                            (_, Some(r)) => format!("-> {r}"),
                            (_, None) => "(manual migration)".to_string(),
                        };
                        println!("{} {} (since {})", e.old_name, target, since);
                    }
                    eprintln!("{} deprecation(s)", entries.len());
                }
                Ok(0)
            }
            DeprecationsCmd::Expired { paths, as_of } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let date = match as_of {
                    Some(s) => NaiveDate::parse_from_str(&s, "%Y-%m-%d")
                        .map_err(|_| format!("`{s}` is not a valid YYYY-MM-DD date"))?,
                    None => today(),
                };
                let expired = deprecation::expired(
                    &project.env.deprecations,
                    date,
                    config.deprecation.grace_days,
                );
                let unknown = deprecation::unknown_since(&project.env.deprecations);
                if cli.format == FormatArg::Json {
                    let items: Vec<serde_json::Value> = expired
                        .iter()
                        .map(|e| {
                            serde_json::json!({
                                "oldName": e.old_name,
                                "since": e.since.map(|d| d.format("%Y-%m-%d").to_string()),
                                "replacement": e.replacement,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "asOf": date.format("%Y-%m-%d").to_string(),
                            "graceDays": config.deprecation.grace_days,
                            "expired": items,
                            "unknownSince": unknown.len(),
                        }))
                        .unwrap()
                    );
                } else {
                    for e in &expired {
                        println!(
                            "{} (since {}, grace {} days)",
                            e.old_name,
                            e.since.map(|d| d.format("%Y-%m-%d").to_string()).unwrap(),
                            config.deprecation.grace_days
                        );
                    }
                    eprintln!(
                        "{} expired as of {}; {} entries with unknown since-date excluded",
                        expired.len(),
                        date.format("%Y-%m-%d"),
                        unknown.len()
                    );
                }
                Ok(0)
            }
            DeprecationsCmd::Fix { paths, dry_run } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let filter = ["deprecation.usage", "deprecation.import"];
                let outcome = plan_fix_texts(&project, &project.diagnostics, Some(&filter));
                let manual: Vec<&Diagnostic> = project
                    .diagnostics
                    .iter()
                    .filter(|d| filter.contains(&d.rule.as_str()) && d.fixes.is_empty())
                    .collect();
                if dry_run {
                    for (path, old, new) in &outcome.changes {
                        print!("{}", render_diff(path, old, new));
                    }
                } else {
                    write_fixes(&project, &outcome).map_err(|e| e.to_string())?;
                }
                eprintln!(
                    "{} {} migration edit(s) in {} file(s)",
                    if dry_run { "would apply" } else { "applied" },
                    outcome.total_edits,
                    outcome.changes.len()
                );
                for m in &manual {
                    eprintln!(
                        "manual migration needed at {}:{}: {}",
                        m.file, m.span.line, m.message
                    );
                }
                Ok(0)
            }
        },

        Command::Debt { cmd } => match cmd {
            DebtCmd::Report {
                paths,
                baseline,
                save_baseline,
                fail_on_regression,
            } => {
                let paths = targets(paths);
                let config = load_config_for(cli.config.as_ref(), &paths)?;
                let project = lint_project_at(&paths, &config, cli.jobs)?;
                let tokens: Vec<Vec<crate::token::Token>> = project
                    .files
                    .iter()
                    .map(|f| tokenize(&f.text).0)
                    .collect();
                let scans: Vec<FileScan> = project
                    .files
                    .iter()
                    .zip(tokens.iter())
                    .map(|(f, t)| FileScan {
                        tokens: t,
                        commands: &f.commands,
                    })
                    .collect();
                let report =
                    debt::scan_debt(&scans, &project.env, &config, today(), &timestamp());
                let delta = match &baseline {
                    Some(path) => Some(debt::diff_reports(
                        &report,
                        &debt::load_baseline(path).map_err(|e| e.to_string())?,
                    )),
                    None => None,
                };
                if let Some(path) = &save_baseline {
                    debt::save_baseline(&report, path).map_err(|e| e.to_string())?;
                    eprintln!("baseline written to {}", path.display());
                }
                match cli.format {
                    FormatArg::Json => print!("{}\n", debt::render_json(&report, delta.as_ref())),
                    _ => print!("{}", debt::render_human(&report, delta.as_ref())),
                }
                if fail_on_regression {
                    if let Some(delta) = &delta {
                        let regressions: Vec<String> = delta
                            .regressions(&config.debt.ratchet)
                            .map(|r| format!("{} +{}", r.category, r.delta))
                            .collect();
                        if !regressions.is_empty() {
                            eprintln!("debt regression: {}", regressions.join(", "));
                            return Ok(1);
                        }
                    }
                }
                Ok(0)
            }
        },

        Command::Rules => {
            println!("Rules (name [default severity] summary):");
            for rule in rules::RULES {
                println!("  {:<30} [{}] {}", rule.name, rule.severity, rule.summary);
            }
            println!();
            let c = LintConfig::default();
            println!("Defaults (override in mathlint.toml):");
            println!("  style.max_line_length        {}", c.style.max_line_length);
            println!(
                "  style.forbidden_imports      {:?}",
                c.style.forbidden_imports
            );
            println!(
                "  tracking.watched_options     {:?}",
                c.tracking.watched_options
            );
            println!(
                "  tracking.global_only_attributes {:?}",
                c.tracking.global_only_attributes
            );
            println!(
                "  deprecation.grace_days       {}",
                c.deprecation.grace_days
            );
            println!(
                "  pedagogy.prop_heads          {:?}",
                c.pedagogy.prop_heads
            );
            println!(
                "  pedagogy.papercut_guards     {:?}",
                c.pedagogy.papercut_guards
            );
            println!(
                "  debt.porting_note_prefixes   {:?}",
                c.debt.porting_note_prefixes
            );
            println!(
                "  debt.adaptation_markers      {:?}",
                c.debt.adaptation_markers
            );
            println!(
                "  debt.backcompat_prefixes     {:?}",
                c.debt.backcompat_prefixes
            );
            println!("  debt.ratchet                 {:?}", c.debt.ratchet);
            println!("  env.builtins                 {:?}", c.env.builtins);
            println!();
            println!("Tactic table ([tactics] in config):");
            for (name, info) in c.tactics.entries() {
                println!(
                    "  {:<14} {:?} / {:?}{}",
                    name,
                    info.flexibility,
                    info.goal_effect,
                    if info.noop { " (noop)" } else { "" }
                );
            }
            println!();
            println!(
                "Suppression: `set_option linter.<rule> false` (file scope) or \
                 `set_option linter.<rule> false in <command>`; groups toggle whole \
                 prefixes (`linter.style`). `@[nolint <rule>]` silences environment \
                 linters per declaration. Grandfathered violations go in \
                 `[exceptions]` as \"file.lean:rule\"."
            );
            Ok(0)
        }
    }
}
