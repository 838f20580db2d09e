//! Environment linters: naming checks on the final declaration table and the
//! project-level path-capitalization collision check.

use std::collections::BTreeMap;

use crate::config::LintConfig;
use crate::diagnostics::Diagnostic;
use crate::environment::{Declaration, Environment, ModuleRecord};
use crate::lint::EnvLinter;
use crate::rules;
use crate::span::Span;

/// Adjacent repeated namespace components: `Foo.Foo.bar` warns, the
/// non-adjacent `Foo.Bar.Foo.baz` is legitimate.
pub fn lint_dup_namespace(decl: &Declaration) -> Vec<Diagnostic> {
    let parts: Vec<&str> = decl.full_name.split('.').collect();
    for pair in parts.windows(2) {
        if pair[0] == pair[1] {
            return vec![Diagnostic::new(
                "naming.dupNamespace",
                rules::default_severity("naming.dupNamespace"),
                decl.name_span,
                format!(
                    "`{}` repeats the namespace component `{}`",
                    decl.full_name, pair[0]
                ),
            )
            .in_file(&decl.file)];
        }
    }
    Vec::new()
}

pub struct DupNamespaceLinter;

impl EnvLinter for DupNamespaceLinter {
    fn name(&self) -> &'static str {
        "naming.dupNamespace"
    }
    fn run(&self, decl: &Declaration, _: &Environment, _: &LintConfig) -> Vec<Diagnostic> {
        lint_dup_namespace(decl)
    }
}

/// One diagnostic per group of module files whose paths differ only in
/// capitalization; such trees break on case-insensitive filesystems.
pub fn lint_path_case_collisions(modules: &[ModuleRecord]) -> Vec<Diagnostic> {
    let mut groups: BTreeMap<String, Vec<&ModuleRecord>> = BTreeMap::new();
    for m in modules {
        groups.entry(m.file.to_lowercase()).or_default().push(m);
    }
    let mut out = Vec::new();
    for (_, mut members) in groups {
        if members.len() < 2 {
            continue;
        }
        members.sort_by(|a, b| a.file.cmp(&b.file));
        let listing = members
            .iter()
            .map(|m| m.file.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        out.push(
            Diagnostic::new(
                "naming.pathCase",
                rules::default_severity("naming.pathCase"),
                Span::caret(0, 1, 1),
                format!("module paths differ only in capitalization: {listing}"),
            )
            .in_file(&members[0].file),
        );
    }
    out
}
