//! The deprecation system: a registry of deprecated declarations and module
//! stubs, use-site warnings naming replacements, grace-period expiry, and the
//! edit plan behind `mathlint deprecations fix`.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::diagnostics::{Diagnostic, FixEdit};
use crate::environment::{Reference, ReferenceContext};
use crate::rules;
use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeprecationKind {
    Declaration,
    Module,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeprecationEntry {
    /// Full name of the deprecated declaration, or the module path for stubs.
    pub old_name: String,
    pub replacement: Option<String>,
    pub message: Option<String>,
    /// `None` when the since-clause was missing or unparseable; such entries
    /// never expire but still warn at use sites.
    pub since: Option<NaiveDate>,
    pub kind: DeprecationKind,
    /// For module stubs: the stub file's own imports, offered to importers.
    pub suggested_imports: Vec<String>,
    pub module: String,
    pub file: String,
    pub span: Span,
}

impl DeprecationEntry {
    fn since_display(&self) -> String {
        self.since
            .map(|d| d.format("%Y-%m-%d").to_string())
            .unwrap_or_else(|| "unknown".to_string())
    }
}

/// One entry per old name; duplicate registration keeps the first entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeprecationRegistry {
    entries: BTreeMap<String, DeprecationEntry>,
}

impl DeprecationRegistry {
    /// Returns false when the old name was already registered.
    pub fn insert(&mut self, entry: DeprecationEntry) -> bool {
        if self.entries.contains_key(&entry.old_name) {
            return false;
        }
        self.entries.insert(entry.old_name.clone(), entry);
        true
    }

    pub fn get(&self, old_name: &str) -> Option<&DeprecationEntry> {
        self.entries.get(old_name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by old name.
    pub fn iter(&self) -> impl Iterator<Item = &DeprecationEntry> {
        self.entries.values()
    }

    /// Entries ordered by since-date (unknown dates last), then name.
    pub fn chronological(&self) -> Vec<&DeprecationEntry> {
        let mut v: Vec<&DeprecationEntry> = self.entries.values().collect();
        v.sort_by(|a, b| {
            let ka = (a.since.is_none(), a.since, a.old_name.as_str());
            let kb = (b.since.is_none(), b.since, b.old_name.as_str());
            ka.cmp(&kb)
        });
        v
    }
}

/// Entries whose grace period has run out: `today - since > grace_days`,
/// strictly. Entries with an unknown since-date are excluded (callers can
/// count them via [`unknown_since`]). Oldest first.
pub fn expired<'r>(
    registry: &'r DeprecationRegistry,
    today: NaiveDate,
    grace_days: i64,
) -> Vec<&'r DeprecationEntry> {
    let mut v: Vec<&DeprecationEntry> = registry
        .iter()
        .filter(|e| {
            e.since
                .map(|s| (today - s).num_days() > grace_days)
                .unwrap_or(false)
        })
        .collect();
    v.sort_by(|a, b| (a.since, a.old_name.as_str()).cmp(&(b.since, b.old_name.as_str())));
    v
}

/// Entries excluded from the expiry report because their since-date is
/// missing or malformed.
pub fn unknown_since<'r>(registry: &'r DeprecationRegistry) -> Vec<&'r DeprecationEntry> {
    registry.iter().filter(|e| e.since.is_none()).collect()
}

/// Warn at every reference that resolves to a deprecated declaration.
/// References inside the deprecated declaration's own body are exempt.
pub fn check_usages(
    references: &[Reference],
    registry: &DeprecationRegistry,
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for r in references {
        if r.is_local || r.context == ReferenceContext::Import {
            continue;
        }
        let Some(resolved) = &r.resolved else { continue };
        let Some(entry) = registry.get(resolved) else {
            continue;
        };
        if entry.kind != DeprecationKind::Declaration {
            continue;
        }
        if r.enclosing_decl.as_deref() == Some(resolved.as_str()) {
            continue;
        }
        let message = match (&entry.replacement, &entry.message) {
            (_, Some(msg)) => format!(
                "`{}` is deprecated (since {}): {}",
                resolved,
                entry.since_display(),
                msg
            ),
            (Some(rep), None) => format!(
                "`{}` is deprecated, use `{}` instead (since {})",
                resolved,
                rep,
                entry.since_display()
            ),
            (None, None) => format!(
                "`{}` is deprecated (since {})",
                resolved,
                entry.since_display()
            ),
        };
        let mut diag = Diagnostic::new(
            "deprecation.usage",
            rules::default_severity("deprecation.usage"),
            r.site,
            message,
        )
        .in_file(&r.file);
        if let Some(rep) = &entry.replacement {
            diag.fixes.push(FixEdit {
                span: r.site,
                replacement: rep.clone(),
            });
        }
        diags.push(diag);
    }
    diags
}

/// One import statement of a file, with the span of the whole import command.
#[derive(Debug, Clone)]
pub struct ImportSite {
    pub module: String,
    pub span: Span,
    pub file: String,
}

/// Warn on imports of deprecated module stubs. The fix replaces the import
/// line with one line per suggested import, deduplicated against the file's
/// other imports; when everything is already imported the line is dropped.
pub fn check_module_imports(
    file_imports: &[ImportSite],
    registry: &DeprecationRegistry,
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for imp in file_imports {
        let Some(entry) = registry.get(&imp.module) else {
            continue;
        };
        if entry.kind != DeprecationKind::Module {
            continue;
        }
        let missing: Vec<&String> = entry
            .suggested_imports
            .iter()
            .filter(|s| {
                !file_imports
                    .iter()
                    .any(|other| other.module == **s)
            })
            .collect();
        let replacement = missing
            .iter()
            .map(|m| format!("import {m}"))
            .collect::<Vec<_>>()
            .join("\n");
        let suggestion = if entry.suggested_imports.is_empty() {
            "remove the import".to_string()
        } else {
            format!(
                "import {} instead",
                entry
                    .suggested_imports
                    .iter()
                    .map(String::as_str)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let mut message = format!(
            "module `{}` is deprecated (since {}); {}",
            imp.module,
            entry.since_display(),
            suggestion
        );
        if let Some(msg) = &entry.message {
            message.push_str(&format!(" - {msg}"));
        }
        diags.push(
            Diagnostic::new(
                "deprecation.import",
                rules::default_severity("deprecation.import"),
                imp.span,
                message,
            )
            .in_file(&imp.file)
            .with_fix(imp.span, replacement),
        );
    }
    diags
}

/// Edits derived from deprecation diagnostics, grouped per file. Diagnostics
/// without a fix (no replacement registered) are listed for manual work.
#[derive(Debug, Default)]
pub struct FixPlan {
    pub edits_by_file: BTreeMap<String, Vec<(Span, String)>>,
    pub manual: Vec<Diagnostic>,
}

pub fn plan_fixes(diagnostics: &[Diagnostic]) -> FixPlan {
    let mut plan = FixPlan::default();
    for d in diagnostics {
        if d.rule != "deprecation.usage" && d.rule != "deprecation.import" {
            continue;
        }
        if d.fixes.is_empty() {
            plan.manual.push(d.clone());
            continue;
        }
        let file_edits = plan.edits_by_file.entry(d.file.clone()).or_default();
        for f in &d.fixes {
            file_edits.push((f.span, f.replacement.clone()));
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ReferenceContext;

    fn entry(old: &str, rep: Option<&str>, since: Option<&str>) -> DeprecationEntry {
        DeprecationEntry {
            old_name: old.to_string(),
            replacement: rep.map(str::to_string),
            message: None,
            since: since.map(|s| NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()),
            kind: DeprecationKind::Declaration,
            suggested_imports: vec![],
            module: "M".to_string(),
            file: "M.lean".to_string(),
            span: Span::default(),
        }
    }

    fn reference(name: &str, resolved: Option<&str>) -> Reference {
        Reference {
            name: name.to_string(),
            resolved: resolved.map(str::to_string),
            site: Span::new(10, 10 + name.len(), 2, 1, 2, 1 + name.len() as u32),
            module: "User".to_string(),
            file: "User.lean".to_string(),
            context: ReferenceContext::Term,
            is_local: false,
            enclosing_decl: Some("User.main".to_string()),
        }
    }

    #[test]
    fn duplicate_registration_keeps_first() {
        let mut reg = DeprecationRegistry::default();
        assert!(reg.insert(entry("Foo.bar", Some("Foo.baz"), Some("2025-01-01"))));
        assert!(!reg.insert(entry("Foo.bar", Some("Other"), Some("2025-06-01"))));
        assert_eq!(
            reg.get("Foo.bar").unwrap().replacement.as_deref(),
            Some("Foo.baz")
        );
    }

    #[test]
    fn usage_of_deprecated_name_warns_with_fix() {
        let mut reg = DeprecationRegistry::default();
        reg.insert(entry("Foo.bar", Some("Foo.baz"), Some("2025-01-01")));
        let refs = vec![reference("bar", Some("Foo.bar"))];
        let diags = check_usages(&refs, &reg);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("Foo.baz"));
        assert!(diags[0].message.contains("2025-01-01"));
        assert_eq!(diags[0].fixes[0].replacement, "Foo.baz");
    }

    #[test]
    fn replacement_usage_is_clean() {
        let mut reg = DeprecationRegistry::default();
        reg.insert(entry("Foo.bar", Some("Foo.baz"), Some("2025-01-01")));
        let refs = vec![reference("baz", Some("Foo.baz"))];
        assert!(check_usages(&refs, &reg).is_empty());
    }

    #[test]
    fn self_reference_is_exempt() {
        let mut reg = DeprecationRegistry::default();
        reg.insert(entry("Foo.bar", Some("Foo.baz"), Some("2025-01-01")));
        let mut r = reference("bar", Some("Foo.bar"));
        r.enclosing_decl = Some("Foo.bar".to_string());
        assert!(check_usages(&[r], &reg).is_empty());
    }

    #[test]
    fn expiry_boundary_is_strict() {
        let mut reg = DeprecationRegistry::default();
        reg.insert(entry("A.exact", None, Some("2025-02-11")));
        reg.insert(entry("B.over", None, Some("2025-02-10")));
        reg.insert(entry("C.today", None, Some("2025-08-10")));
        let today = NaiveDate::parse_from_str("2025-08-10", "%Y-%m-%d").unwrap();
        // 2025-02-11 is exactly 180 days before today: not yet expired
        let exp = expired(&reg, today, 180);
        assert_eq!(
            exp.iter().map(|e| e.old_name.as_str()).collect::<Vec<_>>(),
            vec!["B.over"]
        );
    }

    #[test]
    fn expiry_is_monotone_in_time() {
        let mut reg = DeprecationRegistry::default();
        for (name, since) in [("A.a", "2025-01-01"), ("B.b", "2025-03-01"), ("C.c", "2025-05-01")] {
            reg.insert(entry(name, None, Some(since)));
        }
        let t1 = NaiveDate::parse_from_str("2025-08-01", "%Y-%m-%d").unwrap();
        let t2 = NaiveDate::parse_from_str("2025-12-01", "%Y-%m-%d").unwrap();
        let e1: Vec<&str> = expired(&reg, t1, 90).iter().map(|e| e.old_name.as_str()).collect();
        let e2: Vec<&str> = expired(&reg, t2, 90).iter().map(|e| e.old_name.as_str()).collect();
        assert!(e1.iter().all(|n| e2.contains(n)));
    }

    #[test]
    fn unknown_since_excluded_from_expiry_but_counted() {
        let mut reg = DeprecationRegistry::default();
        reg.insert(entry("A.a", None, None));
        let today = NaiveDate::parse_from_str("2026-01-01", "%Y-%m-%d").unwrap();
        assert!(expired(&reg, today, 0).is_empty());
        assert_eq!(unknown_since(&reg).len(), 1);
    }

    #[test]
    fn module_import_fix_dedups_existing_imports() {
        let mut reg = DeprecationRegistry::default();
        let mut e = entry("Legacy", None, Some("2025-01-01"));
        e.kind = DeprecationKind::Module;
        e.suggested_imports = vec!["Core.A".to_string(), "Core.B".to_string()];
        reg.insert(e);
        let imports = vec![
            ImportSite {
                module: "Core.A".to_string(),
                span: Span::new(0, 13, 1, 1, 1, 14),
                file: "User.lean".to_string(),
            },
            ImportSite {
                module: "Legacy".to_string(),
                span: Span::new(14, 27, 2, 1, 2, 14),
                file: "User.lean".to_string(),
            },
        ];
        let diags = check_module_imports(&imports, &reg);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].fixes[0].replacement, "import Core.B");
    }

    #[test]
    fn direct_import_of_replacement_is_clean() {
        let mut reg = DeprecationRegistry::default();
        let mut e = entry("Legacy", None, Some("2025-01-01"));
        e.kind = DeprecationKind::Module;
        e.suggested_imports = vec!["Core.A".to_string()];
        reg.insert(e);
        let imports = vec![ImportSite {
            module: "Core.A".to_string(),
            span: Span::default(),
            file: "User.lean".to_string(),
        }];
        assert!(check_module_imports(&imports, &reg).is_empty());
    }
}
