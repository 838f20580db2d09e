//! Python bindings exposing the main mathlint types and operations:
//! tokenizing, parsing, linting text or whole projects, edit application,
//! goal-trace simulation, deprecation info, import graphs and debt reports.
//!
//! Build with `cargo build -p mathlint-python --release`; the resulting
//! `libmathlint_py.so` imports as the `mathlint_py` module (see
//! `python/smoke_test.py`).

use std::collections::BTreeSet;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::json;

use mathlint::ast::{CommandKind, DeclBody, SyntaxCommand};
use mathlint::config::{self, LintConfig};
use mathlint::debt::{self, FileScan};
use mathlint::deprecation::DeprecationKind;
use mathlint::diagnostics::Diagnostic;
use mathlint::edits::apply_edits as apply_edits_impl;
use mathlint::lexer::tokenize as tokenize_impl;
use mathlint::lint::LinterRegistry;
use mathlint::linters::tactic::simulate_goals;
use mathlint::parser::parse_module;
use mathlint::project::{
    lint_inputs, lint_paths, plan_fix_texts, render_diff, write_fixes, FileInput, LintOptions,
    ProjectLint,
};
use mathlint::span::Span;

fn value_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        serde_json::Value::Null => py.None(),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.unbind().into_any()
            } else {
                n.as_f64().unwrap_or(0.0).into_pyobject(py)?.unbind().into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.unbind().into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, value_to_py(py, v)?)?;
            }
            dict.unbind().into_any()
        }
    })
}

fn span_value(span: &Span) -> serde_json::Value {
    json!({
        "start": span.start,
        "end": span.end,
        "line": span.line,
        "col": span.col,
        "endLine": span.end_line,
        "endCol": span.end_col,
    })
}

fn diag_value(d: &Diagnostic) -> serde_json::Value {
    json!({
        "file": d.file,
        "line": d.span.line,
        "col": d.span.col,
        "endLine": d.span.end_line,
        "endCol": d.span.end_col,
        "severity": d.severity.to_string(),
        "rule": d.rule,
        "message": d.message,
        "fixes": d.fixes.iter().map(|f| json!({
            "startLine": f.span.line,
            "startCol": f.span.col,
            "endLine": f.span.end_line,
            "endCol": f.span.end_col,
            "start": f.span.start,
            "end": f.span.end,
            "replacement": f.replacement,
        })).collect::<Vec<_>>(),
    })
}

fn diags_to_py(py: Python<'_>, diags: &[Diagnostic]) -> PyResult<Py<PyAny>> {
    let values: Vec<serde_json::Value> = diags.iter().map(diag_value).collect();
    value_to_py(py, &serde_json::Value::Array(values))
}

fn load_config_py(root: Option<&str>, config_path: Option<&str>) -> PyResult<LintConfig> {
    let explicit = config_path.map(PathBuf::from);
    let roots: Vec<PathBuf> = root.map(PathBuf::from).into_iter().collect();
    config::load_config(explicit.as_deref(), &roots)
        .map(|(c, _)| c)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

fn lint_project_rs(
    root: &str,
    config_path: Option<&str>,
    jobs: Option<usize>,
) -> PyResult<(ProjectLint, LintConfig)> {
    let config = load_config_py(Some(root), config_path)?;
    let registry = LinterRegistry::default();
    let project = lint_paths(
        &[PathBuf::from(root)],
        &registry,
        &config,
        &LintOptions { jobs },
    )
    .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((project, config))
}

/// Tokenize source text; comments are tokens too.
#[pyfunction]
fn tokenize(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let (tokens, errors) = tokenize_impl(text);
    let values: Vec<serde_json::Value> = tokens
        .iter()
        .map(|t| {
            json!({
                "kind": format!("{:?}", t.kind),
                "text": t.text,
                "span": span_value(&t.span),
            })
        })
        .collect();
    let out = json!({
        "tokens": values,
        "errors": errors.iter().map(|e| json!({
            "message": e.message,
            "span": span_value(&e.span),
        })).collect::<Vec<_>>(),
    });
    value_to_py(py, &out)
}

fn command_kind_name(cmd: &SyntaxCommand) -> &'static str {
    match &cmd.kind {
        CommandKind::CopyrightHeader => "copyright_header",
        CommandKind::ModuleDoc => "module_doc",
        CommandKind::Import { .. } => "import",
        CommandKind::NamespaceOpen { .. } => "namespace_open",
        CommandKind::SectionOpen { .. } => "section_open",
        CommandKind::End { .. } => "end",
        CommandKind::Open { .. } => "open",
        CommandKind::SetOption { .. } => "set_option",
        CommandKind::Variable { .. } => "variable",
        CommandKind::AttributeCmd { .. } => "attribute",
        CommandKind::Declaration(_) => "declaration",
        CommandKind::DeprecatedModule { .. } => "deprecated_module",
        CommandKind::Error => "error",
    }
}

/// Parse one file into its command stream (kinds and spans) plus parse
/// diagnostics.
#[pyfunction]
fn parse(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let (commands, diags) = parse_module(text);
    fn cmd_value(cmd: &SyntaxCommand) -> serde_json::Value {
        json!({
            "kind": command_kind_name(cmd),
            "span": span_value(&cmd.span),
            "hasDocString": cmd.doc_string.is_some(),
            "attributes": cmd.attributes.iter().map(|a| a.name.clone()).collect::<Vec<_>>(),
            "scoped": cmd.scoped_child().map(|c| Box::new(cmd_value(c))),
        })
    }
    let out = json!({
        "commands": commands.iter().map(cmd_value).collect::<Vec<_>>(),
        "diagnostics": diags.iter().map(diag_value).collect::<Vec<_>>(),
    });
    value_to_py(py, &out)
}

/// Apply non-overlapping `(start, end, replacement)` byte-range edits.
/// Raises ValueError on overlapping or out-of-range edits.
#[pyfunction]
fn apply_edits(text: &str, edits: Vec<(usize, usize, String)>) -> PyResult<String> {
    let spans: Vec<(Span, String)> = edits
        .into_iter()
        .map(|(start, end, replacement)| {
            (Span::new(start, end.max(start), 1, 1, 1, 1), replacement)
        })
        .collect();
    apply_edits_impl(text, &spans).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Lint one in-memory file. `config_toml` takes the mathlint.toml contents
/// inline; omitted means shipped defaults.
#[pyfunction]
#[pyo3(signature = (text, filename = "Input.lean", config_toml = None))]
fn lint_text(
    py: Python<'_>,
    text: &str,
    filename: &str,
    config_toml: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let config = match config_toml {
        Some(toml_text) => config::parse_config_str(toml_text, std::path::Path::new("<inline>"))
            .map_err(|e| PyValueError::new_err(e.to_string()))?,
        None => LintConfig::default(),
    };
    let registry = LinterRegistry::default();
    let inputs = vec![(FileInput::named(filename), text.to_string())];
    let project = lint_inputs(inputs, &registry, &config, &LintOptions::default());
    diags_to_py(py, &project.diagnostics)
}

/// Lint a project directory; returns the diagnostics list.
#[pyfunction]
#[pyo3(signature = (root, config_path = None, jobs = None))]
fn lint_project(
    py: Python<'_>,
    root: &str,
    config_path: Option<&str>,
    jobs: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let (project, _) = lint_project_rs(root, config_path, jobs)?;
    diags_to_py(py, &project.diagnostics)
}

/// Apply fixes in a project directory. With `deprecations_only` this is the
/// `deprecations fix` migration; otherwise every available fix is applied.
/// Dry runs return unified diffs instead of writing.
#[pyfunction]
#[pyo3(signature = (root, dry_run = false, deprecations_only = false, config_path = None))]
fn fix_project(
    py: Python<'_>,
    root: &str,
    dry_run: bool,
    deprecations_only: bool,
    config_path: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let (project, _) = lint_project_rs(root, config_path, None)?;
    let filter = ["deprecation.usage", "deprecation.import"];
    let outcome = plan_fix_texts(
        &project,
        &project.diagnostics,
        deprecations_only.then_some(&filter[..]),
    );
    let diffs: Vec<String> = outcome
        .changes
        .iter()
        .map(|(path, old, new)| render_diff(path, old, new))
        .collect();
    if !dry_run {
        write_fixes(&project, &outcome).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    }
    let out = json!({
        "changedFiles": outcome.changes.iter().map(|(p, _, _)| p.clone()).collect::<Vec<_>>(),
        "edits": outcome.total_edits,
        "dryRun": dry_run,
        "diffs": diffs,
    });
    value_to_py(py, &out)
}

/// Registered deprecations of a project.
#[pyfunction]
#[pyo3(signature = (root, config_path = None))]
fn deprecations(py: Python<'_>, root: &str, config_path: Option<&str>) -> PyResult<Py<PyAny>> {
    let (project, _) = lint_project_rs(root, config_path, None)?;
    let values: Vec<serde_json::Value> = project
        .env
        .deprecations
        .chronological()
        .iter()
        .map(|e| {
            json!({
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
    value_to_py(py, &serde_json::Value::Array(values))
}

/// The module import graph: direct edges and transitive closures.
#[pyfunction]
#[pyo3(signature = (root, config_path = None))]
fn import_graph(py: Python<'_>, root: &str, config_path: Option<&str>) -> PyResult<Py<PyAny>> {
    let (project, _) = lint_project_rs(root, config_path, None)?;
    let graph = &project.graph;
    let edges: serde_json::Map<String, serde_json::Value> = graph
        .nodes
        .iter()
        .map(|n| {
            (
                n.clone(),
                json!(graph.direct_imports(n).to_vec()),
            )
        })
        .collect();
    let closure: serde_json::Map<String, serde_json::Value> = graph
        .nodes
        .iter()
        .map(|n| {
            let c: Vec<String> = graph
                .closure_of(n)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default();
            (n.clone(), json!(c))
        })
        .collect();
    let out = json!({
        "modules": graph.nodes,
        "edges": edges,
        "closure": closure,
        "topoOrder": graph.topo_order,
        "cycles": graph.cycles,
        "dot": graph.to_dot(),
    });
    value_to_py(py, &out)
}

/// Technical-debt report for a project; optionally diffed against a stored
/// baseline file.
#[pyfunction]
#[pyo3(signature = (root, baseline = None, config_path = None))]
fn debt_report(
    py: Python<'_>,
    root: &str,
    baseline: Option<&str>,
    config_path: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let (project, config) = lint_project_rs(root, config_path, None)?;
    let tokens: Vec<Vec<mathlint::token::Token>> = project
        .files
        .iter()
        .map(|f| tokenize_impl(&f.text).0)
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
    let today = chrono::Utc::now().date_naive();
    let timestamp = chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string();
    let report = debt::scan_debt(&scans, &project.env, &config, today, &timestamp);
    let delta = match baseline {
        Some(path) => Some(debt::diff_reports(
            &report,
            &debt::load_baseline(std::path::Path::new(path))
                .map_err(|e| PyValueError::new_err(e.to_string()))?,
        )),
        None => None,
    };
    let text = debt::render_json(&report, delta.as_ref());
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    value_to_py(py, &value)
}

/// Goal-count traces for every tactic proof in `text`.
#[pyfunction]
fn goal_traces(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let (commands, _) = parse_module(text);
    let table = LintConfig::default().tactics;
    let mut out = Vec::new();
    for cmd in &commands {
        let CommandKind::Declaration(decl) = &cmd.kind else {
            continue;
        };
        let DeclBody::Tactics(ts) = &decl.body else {
            continue;
        };
        let (trace, diags) = simulate_goals(ts, &table);
        out.push(json!({
            "declaration": decl.name.text,
            "trace": trace.iter().map(|e| json!({
                "tactic": e.name,
                "line": e.span.line,
                "goalsBefore": e.goals_before,
                "goalsAfter": e.goals_after,
                "focusDepth": e.focus_depth,
                "stainsBefore": e.stains_before.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "diagnostics": diags.iter().map(diag_value).collect::<Vec<_>>(),
        }));
    }
    value_to_py(py, &serde_json::Value::Array(out))
}

/// The rule catalogue with default severities.
#[pyfunction]
fn rules(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let values: Vec<serde_json::Value> = mathlint::rules::RULES
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "severity": r.severity.to_string(),
                "summary": r.summary,
            })
        })
        .collect();
    value_to_py(py, &serde_json::Value::Array(values))
}

/// Names every rule group (style, pruning, ...) for toggling.
#[pyfunction]
fn rule_groups(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let groups: BTreeSet<&str> = mathlint::rules::groups().into_iter().collect();
    let values: Vec<serde_json::Value> = groups.iter().map(|g| json!(g)).collect();
    value_to_py(py, &serde_json::Value::Array(values))
}

#[pymodule]
fn mathlint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(apply_edits, m)?)?;
    m.add_function(wrap_pyfunction!(lint_text, m)?)?;
    m.add_function(wrap_pyfunction!(lint_project, m)?)?;
    m.add_function(wrap_pyfunction!(fix_project, m)?)?;
    m.add_function(wrap_pyfunction!(deprecations, m)?)?;
    m.add_function(wrap_pyfunction!(import_graph, m)?)?;
    m.add_function(wrap_pyfunction!(debt_report, m)?)?;
    m.add_function(wrap_pyfunction!(goal_traces, m)?)?;
    m.add_function(wrap_pyfunction!(rules, m)?)?;
    m.add_function(wrap_pyfunction!(rule_groups, m)?)?;
    Ok(())
}
