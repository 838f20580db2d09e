//! Project discovery and the full lint pipeline.
//!
//! Files are parsed in parallel, folded into one environment in import
//! order, then linted in parallel again; every merge is deterministic, so
//! two runs over the same tree produce byte-identical output regardless of
//! `--jobs`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::ast::{CommandKind, SyntaxCommand};
use crate::config::LintConfig;
use crate::deprecation::{self, ImportSite};
use crate::diagnostics::Diagnostic;
use crate::edits::apply_edits;
use crate::environment::{process_commands_into, Environment, ModuleAnalysis};
use crate::imports::{self, ImportDecl, ImportGraph, ModuleImports};
use crate::lint::{
    finalize_diagnostics, run_env_linters, run_syntax_linters, LintContext, LinterRegistry,
    SuppressionIndex,
};
use crate::parser::parse_module;
use crate::span::{LineIndex, Span};

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("no such file or directory: {0}")]
    NotFound(String),
    #[error("{0} is not a .lean file")]
    NotLean(String),
}

/// One file to lint: absolute path on disk (when it exists there), display
/// path relative to the project root, and the module path derived from it.
#[derive(Debug, Clone)]
pub struct FileInput {
    pub abs: Option<PathBuf>,
    pub rel: String,
    pub module: String,
}

impl FileInput {
    /// In-memory input (tests, bindings).
    pub fn named(rel: &str) -> Self {
        FileInput {
            abs: None,
            rel: rel.to_string(),
            module: module_of_rel_path(rel),
        }
    }
}

/// `A/B.lean` -> `A.B`
pub fn module_of_rel_path(rel: &str) -> String {
    rel.trim_end_matches(".lean").replace(['/', '\\'], ".")
}

/// Discover `.lean` files under each path (directories are walked
/// recursively, files taken as given), sorted by display path.
pub fn discover_inputs(paths: &[PathBuf]) -> Result<Vec<(FileInput, String)>, ProjectError> {
    let mut out: Vec<(FileInput, String)> = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut files: Vec<PathBuf> = walkdir::WalkDir::new(path)
                .sort_by_file_name()
                .into_iter()
                .filter_map(Result::ok)
                .filter(|e| e.file_type().is_file())
                .map(|e| e.into_path())
                .filter(|p| p.extension().is_some_and(|e| e == "lean"))
                .collect();
            files.sort();
            for f in files {
                let rel = f
                    .strip_prefix(path)
                    .unwrap_or(&f)
                    .to_string_lossy()
                    .replace('\\', "/");
                let text = std::fs::read_to_string(&f).map_err(|e| ProjectError::Io {
                    path: f.display().to_string(),
                    source: e,
                })?;
                out.push((
                    FileInput {
                        abs: Some(f.clone()),
                        rel: rel.clone(),
                        module: module_of_rel_path(&rel),
                    },
                    text,
                ));
            }
        } else if path.is_file() {
            if path.extension().is_none_or(|e| e != "lean") {
                return Err(ProjectError::NotLean(path.display().to_string()));
            }
            let rel = path
                .file_name()
                .map(|n| n.to_string_lossy().to_string())
                .unwrap_or_else(|| path.display().to_string());
            let text = std::fs::read_to_string(path).map_err(|e| ProjectError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            out.push((
                FileInput {
                    abs: Some(path.clone()),
                    rel: rel.clone(),
                    module: module_of_rel_path(&rel),
                },
                text,
            ));
        } else {
            return Err(ProjectError::NotFound(path.display().to_string()));
        }
    }
    out.sort_by(|a, b| a.0.rel.cmp(&b.0.rel));
    Ok(out)
}

#[derive(Debug)]
pub struct SourceFile {
    pub abs: Option<PathBuf>,
    pub path: String,
    pub module: String,
    pub text: String,
    pub commands: Vec<SyntaxCommand>,
}

/// The complete result of linting a project.
pub struct ProjectLint {
    pub files: Vec<SourceFile>,
    pub env: Environment,
    pub graph: ImportGraph,
    /// Final diagnostics: enabled-filtered, suppression applied, sorted.
    pub diagnostics: Vec<Diagnostic>,
    pub analyses: BTreeMap<String, ModuleAnalysis>,
}

impl ProjectLint {
    pub fn file(&self, path: &str) -> Option<&SourceFile> {
        self.files.iter().find(|f| f.path == path)
    }
}

#[derive(Debug, Clone, Default)]
pub struct LintOptions {
    pub jobs: Option<usize>,
}

fn file_import_decls(file: &SourceFile) -> Vec<ImportDecl> {
    file.commands
        .iter()
        .filter_map(|c| match &c.kind {
            CommandKind::Import { module } => Some(ImportDecl {
                module: module.text.clone(),
                span: c.span,
                file: file.path.clone(),
            }),
            _ => None,
        })
        .collect()
}

/// Lint a set of in-memory files as one project.
pub fn lint_inputs(
    inputs: Vec<(FileInput, String)>,
    registry: &LinterRegistry,
    config: &LintConfig,
    options: &LintOptions,
) -> ProjectLint {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");

    // parse in parallel
    let parsed: Vec<(SourceFile, Vec<Diagnostic>)> = pool.install(|| {
        inputs
            .into_par_iter()
            .map(|(input, text)| {
                let (commands, mut diags) = parse_module(&text);
                for d in &mut diags {
                    d.file = input.rel.clone();
                }
                (
                    SourceFile {
                        abs: input.abs,
                        path: input.rel,
                        module: input.module,
                        text,
                        commands,
                    },
                    diags,
                )
            })
            .collect()
    });

    let mut files = Vec::new();
    let mut raw_diags: Vec<Diagnostic> = Vec::new();
    for (file, diags) in parsed {
        raw_diags.extend(diags);
        files.push(file);
    }

    // import graph
    let module_imports: Vec<ModuleImports> = files
        .iter()
        .map(|f| ModuleImports {
            module: f.module.clone(),
            file: f.path.clone(),
            imports: file_import_decls(f),
        })
        .collect();
    let (graph, graph_diags) = imports::build_graph(&module_imports);
    raw_diags.extend(graph_diags);

    // fold modules into the environment in import order
    let mut env = Environment::with_builtins(&config.env.builtins);
    env.module_closure = graph.closure.clone();
    let intro_tactics = config.tactics.intro_tactics();
    let by_module: BTreeMap<&str, usize> = files
        .iter()
        .enumerate()
        .map(|(i, f)| (f.module.as_str(), i))
        .collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let order: Vec<usize> = graph
        .topo_order
        .iter()
        .filter_map(|m| by_module.get(m.as_str()).copied())
        .chain(0..files.len())
        .filter(|i| seen.insert(*i))
        .collect();
    let mut analyses: BTreeMap<String, ModuleAnalysis> = BTreeMap::new();
    for i in order {
        let file = &files[i];
        let analysis = process_commands_into(
            &mut env,
            &file.commands,
            &file.module,
            &file.path,
            &intro_tactics,
        );
        raw_diags.extend(analysis.diagnostics.iter().cloned());
        analyses.insert(file.path.clone(), analysis);
    }

    // per-file syntax linting in parallel
    let per_file: Vec<Vec<Diagnostic>> = pool.install(|| {
        files
            .par_iter()
            .map(|file| {
                let analysis = &analyses[&file.path];
                let line_index = LineIndex::new(&file.text);
                let ctx = LintContext {
                    file: &file.path,
                    text: &file.text,
                    commands: &file.commands,
                    config,
                    line_index: &line_index,
                };
                let mut diags = run_syntax_linters(
                    registry,
                    &ctx,
                    &analysis.scope_trace,
                    &analysis.final_scope,
                );
                let imports_of_file: Vec<ImportSite> = file
                    .commands
                    .iter()
                    .filter_map(|c| match &c.kind {
                        CommandKind::Import { module } => Some(ImportSite {
                            module: module.text.clone(),
                            span: c.span,
                            file: file.path.clone(),
                        }),
                        _ => None,
                    })
                    .collect();
                diags.extend(deprecation::check_module_imports(
                    &imports_of_file,
                    &env.deprecations,
                ));
                diags
            })
            .collect()
    });
    raw_diags.extend(per_file.into_iter().flatten());

    // deprecated-usage warnings over all resolved references
    raw_diags.extend(deprecation::check_usages(
        &env.references,
        &env.deprecations,
    ));

    // import analyses; deprecated stubs are exempt from unused-import
    // reporting (their imports are the migration payload)
    if graph.cycles.is_empty() {
        for mi in &module_imports {
            let is_stub = files.iter().find(|f| f.module == mi.module).is_some_and(|f| {
                f.commands
                    .iter()
                    .any(|c| matches!(c.kind, CommandKind::DeprecatedModule { .. }))
            });
            if is_stub {
                continue;
            }
            raw_diags.extend(imports::unused_imports(mi, &graph, &env.references, &env));
        }
        raw_diags.extend(imports::check_directory_deps(
            &graph,
            &module_imports,
            &config.directories,
        ));
    }

    // environment linters on the final environment
    raw_diags.extend(run_env_linters(registry, &env, config));

    // config + suppression + deterministic order
    let indices: BTreeMap<String, SuppressionIndex> = files
        .iter()
        .map(|f| {
            (
                f.path.clone(),
                SuppressionIndex::new(&f.commands, &analyses[&f.path].scope_trace),
            )
        })
        .collect();
    let diagnostics = finalize_diagnostics(raw_diags, config, |file| indices.get(file));

    ProjectLint {
        files,
        env,
        graph,
        diagnostics,
        analyses,
    }
}

/// Read files from disk and lint them.
pub fn lint_paths(
    paths: &[PathBuf],
    registry: &LinterRegistry,
    config: &LintConfig,
    options: &LintOptions,
) -> Result<ProjectLint, ProjectError> {
    let inputs = discover_inputs(paths)?;
    Ok(lint_inputs(inputs, registry, config, options))
}

// ---------------------------------------------------------------------------
// fix application
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct FixOutcome {
    /// (display path, old text, new text) for every changed file.
    pub changes: Vec<(String, String, String)>,
    pub total_edits: usize,
    pub dropped_overlaps: usize,
}

/// Collect the fixes carried by `diagnostics` (optionally restricted to some
/// rules) and compute the new text per file. Overlapping fixes are dropped
/// deterministically (first by position wins); identical duplicates merge.
pub fn plan_fix_texts(
    project: &ProjectLint,
    diagnostics: &[Diagnostic],
    rule_filter: Option<&[&str]>,
) -> FixOutcome {
    let mut outcome = FixOutcome::default();
    let mut by_file: BTreeMap<&str, Vec<(Span, String)>> = BTreeMap::new();
    for d in diagnostics {
        if let Some(filter) = rule_filter {
            if !filter.contains(&d.rule.as_str()) {
                continue;
            }
        }
        for f in &d.fixes {
            by_file
                .entry(d.file.as_str())
                .or_default()
                .push((f.span, f.replacement.clone()));
        }
    }
    for (path, mut edits) in by_file {
        let Some(file) = project.file(path) else {
            continue;
        };
        edits.sort_by(|a, b| (a.0.start, a.0.end, &a.1).cmp(&(b.0.start, b.0.end, &b.1)));
        edits.dedup();
        let mut kept: Vec<(Span, String)> = Vec::new();
        for (span, repl) in edits {
            match kept.last() {
                Some((prev, _)) if span.start < prev.end => {
                    outcome.dropped_overlaps += 1;
                }
                _ => kept.push((span, repl)),
            }
        }
        if kept.is_empty() {
            continue;
        }
        match apply_edits(&file.text, &kept) {
            Ok(new_text) => {
                if new_text != file.text {
                    outcome.total_edits += kept.len();
                    outcome
                        .changes
                        .push((path.to_string(), file.text.clone(), new_text));
                }
            }
            Err(_) => {
                outcome.dropped_overlaps += kept.len();
            }
        }
    }
    outcome
}

/// Write planned fixes back to disk.
pub fn write_fixes(project: &ProjectLint, outcome: &FixOutcome) -> Result<(), ProjectError> {
    for (path, _, new_text) in &outcome.changes {
        let Some(file) = project.file(path) else {
            continue;
        };
        let Some(abs) = &file.abs else { continue };
        std::fs::write(abs, new_text).map_err(|e| ProjectError::Write {
            path: abs.display().to_string(),
            source: e,
        })?;
    }
    Ok(())
}

/// Minimal unified-diff-style rendering of one file change.
pub fn render_diff(path: &str, old: &str, new: &str) -> String {
    let old_lines: Vec<&str> = old.lines().collect();
    let new_lines: Vec<&str> = new.lines().collect();
    let mut prefix = 0;
    while prefix < old_lines.len()
        && prefix < new_lines.len()
        && old_lines[prefix] == new_lines[prefix]
    {
        prefix += 1;
    }
    let mut suffix = 0;
    while suffix < old_lines.len().saturating_sub(prefix)
        && suffix < new_lines.len().saturating_sub(prefix)
        && old_lines[old_lines.len() - 1 - suffix] == new_lines[new_lines.len() - 1 - suffix]
    {
        suffix += 1;
    }
    let mut out = format!("--- a/{path}\n+++ b/{path}\n");
    out.push_str(&format!(
        "@@ -{},{} +{},{} @@\n",
        prefix + 1,
        old_lines.len() - prefix - suffix,
        prefix + 1,
        new_lines.len() - prefix - suffix
    ));
    for line in &old_lines[prefix..old_lines.len() - suffix] {
        out.push_str(&format!("-{line}\n"));
    }
    for line in &new_lines[prefix..new_lines.len() - suffix] {
        out.push_str(&format!("+{line}\n"));
    }
    out
}
