//! The rule catalogue.
//!
//! Rule names are hierarchical so whole groups can be toggled at once:
//! `set_option linter.style false in ...` disables every `style.*` rule for
//! one command, and a `[lint] enabled` config entry can do the same globally.

use crate::diagnostics::Severity;

#[derive(Debug, Clone, Copy)]
pub struct RuleMeta {
    pub name: &'static str,
    pub severity: Severity,
    pub summary: &'static str,
}

/// Every rule the tool can emit, including pipeline rules (parser,
/// environment, import graph) that are not classical linters.
pub const RULES: &[RuleMeta] = &[
    RuleMeta {
        name: "parse.error",
        severity: Severity::Error,
        summary: "source that does not lex or parse; recovery resumes at the next command",
    },
    RuleMeta {
        name: "parse.importOrder",
        severity: Severity::Error,
        summary: "imports must precede all non-import, non-header commands",
    },
    RuleMeta {
        name: "style.lineLength",
        severity: Severity::Warning,
        summary: "lines longer than the configured limit (default 100 scalar values); single long URLs are exempt",
    },
    RuleMeta {
        name: "style.docString",
        severity: Severity::Warning,
        summary: "doc-strings must open and close with exactly one space or line break",
    },
    RuleMeta {
        name: "style.header",
        severity: Severity::Error,
        summary: "files need a valid copyright header and a module doc-string (unless import-only), and must not import forbidden umbrella modules",
    },
    RuleMeta {
        name: "deprecation.syntax",
        severity: Severity::Warning,
        summary: "`λ x => x` notation is deprecated in favour of `fun x ↦ x`",
    },
    RuleMeta {
        name: "deprecation.usage",
        severity: Severity::Warning,
        summary: "use of a deprecated declaration; names the replacement",
    },
    RuleMeta {
        name: "deprecation.import",
        severity: Severity::Warning,
        summary: "import of a deprecated module stub; suggests the replacement imports",
    },
    RuleMeta {
        name: "deprecation.register",
        severity: Severity::Warning,
        summary: "malformed deprecation markers: missing since-date, missing replacement and message, or duplicate registration",
    },
    RuleMeta {
        name: "tracking.setOption",
        severity: Severity::Warning,
        summary: "watched options (e.g. maxHeartbeats) must be scoped to a single command with `in`",
    },
    RuleMeta {
        name: "tracking.openClassical",
        severity: Severity::Warning,
        summary: "`open Classical` should be scoped with `in` to one command",
    },
    RuleMeta {
        name: "tracking.globalAttributeIn",
        severity: Severity::Warning,
        summary: "some attributes stay global even under `attribute [...] x in`; write `local` explicitly",
    },
    RuleMeta {
        name: "maintenance.missingEnd",
        severity: Severity::Warning,
        summary: "section or namespace left open at end of file",
    },
    RuleMeta {
        name: "maintenance.multiGoal",
        severity: Severity::Warning,
        summary: "a tactic left more than one goal and the next tactic is not the focusing dot `·`",
    },
    RuleMeta {
        name: "maintenance.flexible",
        severity: Severity::Warning,
        summary: "a rigid tactic consumes a goal or hypothesis last modified by a flexible tactic",
    },
    RuleMeta {
        name: "pruning.unusedVariable",
        severity: Severity::Warning,
        summary: "a bound name (lambda binder, intro/have/let) is never used; prefix with `_` to silence",
    },
    RuleMeta {
        name: "pruning.unusedTactic",
        severity: Severity::Warning,
        summary: "a tactic that is known to do nothing (e.g. `skip`)",
    },
    RuleMeta {
        name: "pruning.unreachableTactic",
        severity: Severity::Warning,
        summary: "a tactic that runs with no goals remaining",
    },
    RuleMeta {
        name: "pruning.unusedSeqFocus",
        severity: Severity::Warning,
        summary: "`<;>` after a tactic that produces at most one goal; plain `;` suffices",
    },
    RuleMeta {
        name: "pedagogy.haveLet",
        severity: Severity::Warning,
        summary: "`have` introducing data should be `let`; `let` introducing a proposition should be `have`",
    },
    RuleMeta {
        name: "pedagogy.papercut",
        severity: Severity::Warning,
        summary: "natural-number subtraction truncates at 0; flag `a - b` on Nat without a guarding hypothesis",
    },
    RuleMeta {
        name: "naming.dupNamespace",
        severity: Severity::Warning,
        summary: "declaration names must not repeat adjacent namespace components (Foo.Foo.bar)",
    },
    RuleMeta {
        name: "naming.pathCase",
        severity: Severity::Warning,
        summary: "module paths must not differ only in capitalization",
    },
    RuleMeta {
        name: "imports.unused",
        severity: Severity::Warning,
        summary: "a direct import contributing no referenced declaration, directly or transitively",
    },
    RuleMeta {
        name: "imports.directoryDependency",
        severity: Severity::Warning,
        summary: "an import chain violating the configured directory dependency rules",
    },
    RuleMeta {
        name: "imports.cycle",
        severity: Severity::Error,
        summary: "import cycle; the module graph must be a DAG",
    },
    RuleMeta {
        name: "imports.missingModule",
        severity: Severity::Warning,
        summary: "import of a module that does not exist in the project",
    },
    RuleMeta {
        name: "env.duplicateDeclaration",
        severity: Severity::Warning,
        summary: "a full name declared twice; the first declaration wins",
    },
    RuleMeta {
        name: "env.unmatchedEnd",
        severity: Severity::Warning,
        summary: "`end` with no matching open section or namespace",
    },
    RuleMeta {
        name: "env.unresolvedReference",
        severity: Severity::Warning,
        summary: "an identifier that resolves to no declaration in scope",
    },
    RuleMeta {
        name: "internal.error",
        severity: Severity::Error,
        summary: "a linter crashed or produced inconsistent edits; reported instead of hiding other findings",
    },
];

pub fn rule_meta(name: &str) -> Option<&'static RuleMeta> {
    RULES.iter().find(|r| r.name == name)
}

pub fn default_severity(rule: &str) -> Severity {
    rule_meta(rule).map(|r| r.severity).unwrap_or(Severity::Warning)
}

pub fn all_rule_names() -> impl Iterator<Item = &'static str> {
    RULES.iter().map(|r| r.name)
}

/// True when `key` names a rule or a non-empty rule group (`style`,
/// `pruning`, ... or any dotted prefix of a rule).
pub fn is_rule_or_group(key: &str) -> bool {
    RULES
        .iter()
        .any(|r| r.name == key || r.name.starts_with(&format!("{key}.")))
}

/// Groups in the catalogue, for documentation output.
pub fn groups() -> Vec<&'static str> {
    let mut gs: Vec<&'static str> = RULES
        .iter()
        .filter_map(|r| r.name.split('.').next())
        .collect();
    gs.sort_unstable();
    gs.dedup();
    gs
}
