//! Environment construction: folding command streams into a declaration
//! table, scope state (namespaces, sections, opens, options, variables) and a
//! record of every name reference.
//!
//! Modules are processed in import order; an `Environment` is closed under
//! imports by the time a module is folded in. Resolution of a name prefers
//! namespace-qualified candidates innermost-to-outermost, then opened
//! namespaces in reverse open order, then the bare name.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use crate::ast::*;
use crate::deprecation::{DeprecationEntry, DeprecationKind, DeprecationRegistry};
use crate::diagnostics::Diagnostic;
use crate::rules;
use crate::span::Span;

/// Module name under which builtin names (Nat, Prop, Eq, ...) are seeded.
pub const BUILTIN_MODULE: &str = "<builtin>";

#[derive(Debug, Clone, PartialEq)]
pub struct Declaration {
    pub full_name: String,
    pub kind: DeclKind,
    pub module: String,
    pub file: String,
    pub span: Span,
    pub name_span: Span,
    pub doc_string: Option<String>,
    pub attributes: Vec<AttributeSyntax>,
    /// Head symbol of the declared type, when annotated.
    pub statement_head: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceContext {
    Term,
    TacticArg,
    Import,
}

/// One identifier occurrence in a term or tactic-argument position.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub name: String,
    /// Full name the identifier resolved to; present iff resolution
    /// succeeded. Local binders never resolve.
    pub resolved: Option<String>,
    pub site: Span,
    pub module: String,
    pub file: String,
    pub context: ReferenceContext,
    /// True when the name was bound locally (binder, intro/have/let,
    /// `variable`); locals are exempt from unresolved-reference warnings.
    pub is_local: bool,
    pub enclosing_decl: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    Section,
    Namespace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionFrame {
    pub kind: FrameKind,
    pub name: Option<String>,
    pub open_span: Span,
    saved_opens: usize,
    saved_vars: usize,
    saved_options: BTreeMap<String, OptionSetting>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionScope {
    File,
    Command,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionSetting {
    pub value: OptionValue,
    pub scope: OptionScope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableBinding {
    pub name: String,
    pub ty: Option<TermSyntax>,
}

impl VariableBinding {
    pub fn type_head(&self) -> Option<&str> {
        self.ty.as_ref().and_then(|t| t.head_symbol())
    }
}

/// Scope threading state, snapshotted per command for the linters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScopeState {
    pub module: String,
    pub namespace_stack: Vec<String>,
    pub section_stack: Vec<SectionFrame>,
    pub open_namespaces: Vec<String>,
    pub active_options: BTreeMap<String, OptionSetting>,
    pub variables: Vec<VariableBinding>,
}

impl ScopeState {
    pub fn for_module(module: &str) -> Self {
        ScopeState {
            module: module.to_string(),
            ..Default::default()
        }
    }

    pub fn option_bool(&self, name: &str) -> Option<bool> {
        match self.active_options.get(name)?.value {
            OptionValue::Bool(b) => Some(b),
            _ => None,
        }
    }

    /// Most-specific `linter.<rule>` toggle covering `rule`, if any is set:
    /// `linter.style.lineLength` wins over `linter.style`.
    pub fn linter_toggle(&self, rule: &str) -> Option<bool> {
        let mut suffix = rule;
        loop {
            if let Some(b) = self.option_bool(&format!("linter.{suffix}")) {
                return Some(b);
            }
            match suffix.rfind('.') {
                Some(i) => suffix = &suffix[..i],
                None => return None,
            }
        }
    }

    /// Drop command-scoped options; used when attributing diagnostics that
    /// fall between commands to the surrounding file-level state.
    pub fn file_level(&self) -> ScopeState {
        let mut s = self.clone();
        s.active_options
            .retain(|_, setting| setting.scope == OptionScope::File);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRecord {
    pub module: String,
    pub file: String,
}

#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub declarations: BTreeMap<String, Declaration>,
    pub deprecations: DeprecationRegistry,
    pub references: Vec<Reference>,
    pub modules_processed: Vec<ModuleRecord>,
    /// Transitive import sets, used to restrict resolution to modules a file
    /// actually imports. Modules without an entry see everything (the
    /// single-module case).
    pub module_closure: BTreeMap<String, BTreeSet<String>>,
}

/// Names every project can use without declaring them.
pub const DEFAULT_BUILTINS: &[&str] = &[
    "And", "Bool", "Classical", "Dvd", "Eq", "False", "Iff", "Int", "Le", "Lt", "Nat", "Not",
    "Or", "Prop", "String", "True", "Unit", "rfl", "trivial",
];

impl Environment {
    pub fn new() -> Self {
        Environment::default()
    }

    pub fn with_builtins(names: &[String]) -> Self {
        let mut env = Environment::default();
        for name in names {
            env.declarations.insert(
                name.clone(),
                Declaration {
                    full_name: name.clone(),
                    kind: DeclKind::Def,
                    module: BUILTIN_MODULE.to_string(),
                    file: BUILTIN_MODULE.to_string(),
                    span: Span::default(),
                    name_span: Span::default(),
                    doc_string: None,
                    attributes: Vec::new(),
                    statement_head: None,
                },
            );
        }
        env
    }

    fn visible(&self, decl_module: &str, from_module: &str) -> bool {
        if decl_module == from_module || decl_module == BUILTIN_MODULE {
            return true;
        }
        match self.module_closure.get(from_module) {
            Some(closure) => closure.contains(decl_module),
            None => true,
        }
    }

    /// The module defining `full_name`, ignoring builtins.
    pub fn defining_module(&self, full_name: &str) -> Option<&str> {
        self.declarations
            .get(full_name)
            .filter(|d| d.module != BUILTIN_MODULE)
            .map(|d| d.module.as_str())
    }
}

/// Resolve `ident` in `scope`: innermost-to-outermost namespace candidates,
/// then opened namespaces in reverse open order, then the bare name. The
/// first visible declaration wins; deterministic.
pub fn resolve_name(env: &Environment, scope: &ScopeState, ident: &str) -> Option<String> {
    let try_hit = |candidate: String| -> Option<String> {
        env.declarations
            .get(&candidate)
            .filter(|d| env.visible(&d.module, &scope.module))
            .map(|_| candidate)
    };
    for k in (1..=scope.namespace_stack.len()).rev() {
        let qualified = format!("{}.{}", scope.namespace_stack[..k].join("."), ident);
        if let Some(hit) = try_hit(qualified) {
            return Some(hit);
        }
    }
    for ns in scope.open_namespaces.iter().rev() {
        if let Some(hit) = try_hit(format!("{ns}.{ident}")) {
            return Some(hit);
        }
    }
    try_hit(ident.to_string())
}

/// Everything a module contributes besides environment growth.
#[derive(Debug)]
pub struct ModuleAnalysis {
    pub diagnostics: Vec<Diagnostic>,
    /// Scope snapshots parallel to [`flatten_commands`] of the input.
    pub scope_trace: Vec<ScopeState>,
    /// State at end of file; unclosed frames feed `maintenance.missingEnd`.
    pub final_scope: ScopeState,
}

/// Pure variant: clones `imported` and folds the module in.
/// `imported` must already contain all transitive imports of `module`.
pub fn process_commands(
    commands: &[SyntaxCommand],
    imported: &Environment,
    module: &str,
    file: &str,
) -> (Environment, ModuleAnalysis) {
    let mut env = imported.clone();
    let intro: BTreeSet<String> = ["intro", "intros"].iter().map(|s| s.to_string()).collect();
    let analysis = process_commands_into(&mut env, commands, module, file, &intro);
    (env, analysis)
}

/// In-place variant used by the project driver, which threads one cumulative
/// environment through all modules in import order. `intro_tactics` names the
/// tactics whose identifier arguments bind new hypotheses instead of
/// referencing existing names.
pub fn process_commands_into(
    env: &mut Environment,
    commands: &[SyntaxCommand],
    module: &str,
    file: &str,
    intro_tactics: &BTreeSet<String>,
) -> ModuleAnalysis {
    let mut p = Processor {
        env,
        module: module.to_string(),
        file: file.to_string(),
        scope: ScopeState::for_module(module),
        trace: Vec::new(),
        diags: Vec::new(),
        file_imports: Vec::new(),
        intro_tactics,
    };
    p.env.modules_processed.push(ModuleRecord {
        module: module.to_string(),
        file: file.to_string(),
    });
    for cmd in commands {
        p.file_imports.extend(match &cmd.kind {
            CommandKind::Import { module } => Some(module.text.clone()),
            _ => None,
        });
    }
    for cmd in commands {
        p.process(cmd);
    }
    ModuleAnalysis {
        diagnostics: p.diags,
        scope_trace: p.trace,
        final_scope: p.scope,
    }
}

struct Processor<'e, 'c> {
    env: &'e mut Environment,
    module: String,
    file: String,
    scope: ScopeState,
    trace: Vec<ScopeState>,
    diags: Vec<Diagnostic>,
    file_imports: Vec<String>,
    intro_tactics: &'c BTreeSet<String>,
}

impl Processor<'_, '_> {
    fn diag(&mut self, rule: &str, span: Span, message: String) {
        self.diags.push(
            Diagnostic::new(rule, rules::default_severity(rule), span, message)
                .in_file(&self.file),
        );
    }

    fn snapshot(&mut self) {
        self.trace.push(self.scope.clone());
    }

    fn process(&mut self, cmd: &SyntaxCommand) {
        match &cmd.kind {
            CommandKind::CopyrightHeader | CommandKind::ModuleDoc | CommandKind::Error => {
                self.snapshot();
            }
            CommandKind::Import { module } => {
                self.env.references.push(Reference {
                    name: module.text.clone(),
                    resolved: None,
                    site: module.span,
                    module: self.module.clone(),
                    file: self.file.clone(),
                    context: ReferenceContext::Import,
                    is_local: false,
                    enclosing_decl: None,
                });
                self.snapshot();
            }
            CommandKind::NamespaceOpen { name } => {
                self.scope.section_stack.push(SectionFrame {
                    kind: FrameKind::Namespace,
                    name: Some(name.text.clone()),
                    open_span: cmd.span,
                    saved_opens: self.scope.open_namespaces.len(),
                    saved_vars: self.scope.variables.len(),
                    saved_options: self.scope.active_options.clone(),
                });
                self.scope.namespace_stack.push(name.text.clone());
                self.snapshot();
            }
            CommandKind::SectionOpen { name } => {
                self.scope.section_stack.push(SectionFrame {
                    kind: FrameKind::Section,
                    name: name.as_ref().map(|n| n.text.clone()),
                    open_span: cmd.span,
                    saved_opens: self.scope.open_namespaces.len(),
                    saved_vars: self.scope.variables.len(),
                    saved_options: self.scope.active_options.clone(),
                });
                self.snapshot();
            }
            CommandKind::End { name } => {
                let end_name = name.as_ref().map(|n| n.text.clone());
                let matches = self
                    .scope
                    .section_stack
                    .last()
                    .is_some_and(|top| top.name == end_name);
                if matches {
                    let frame = self.scope.section_stack.pop().expect("frame");
                    if frame.kind == FrameKind::Namespace {
                        self.scope.namespace_stack.pop();
                    }
                    self.scope.open_namespaces.truncate(frame.saved_opens);
                    self.scope.variables.truncate(frame.saved_vars);
                    self.scope.active_options = frame.saved_options;
                } else {
                    let what = end_name
                        .map(|n| format!("`end {n}`"))
                        .unwrap_or_else(|| "`end`".to_string());
                    let msg = match self.scope.section_stack.last() {
                        Some(top) => format!(
                            "{what} does not match the innermost open {} {}",
                            match top.kind {
                                FrameKind::Section => "section",
                                FrameKind::Namespace => "namespace",
                            },
                            top.name.as_deref().unwrap_or("<anonymous>")
                        ),
                        None => format!("{what} has no matching open section or namespace"),
                    };
                    self.diag("env.unmatchedEnd", cmd.span, msg);
                }
                self.snapshot();
            }
            CommandKind::Open { namespaces, scoped } => {
                let saved = self.scope.open_namespaces.len();
                self.scope
                    .open_namespaces
                    .extend(namespaces.iter().map(|n| n.text.clone()));
                self.snapshot();
                if let Some(child) = scoped {
                    self.process(child);
                    self.scope.open_namespaces.truncate(saved);
                }
            }
            CommandKind::SetOption {
                option,
                value,
                scoped,
                ..
            } => {
                let scope_kind = if scoped.is_some() {
                    OptionScope::Command
                } else {
                    OptionScope::File
                };
                let prev = self.scope.active_options.insert(
                    option.text.clone(),
                    OptionSetting {
                        value: value.clone(),
                        scope: scope_kind,
                    },
                );
                self.snapshot();
                if let Some(child) = scoped {
                    self.process(child);
                    match prev {
                        Some(setting) => {
                            self.scope
                                .active_options
                                .insert(option.text.clone(), setting);
                        }
                        None => {
                            self.scope.active_options.remove(&option.text);
                        }
                    }
                }
            }
            CommandKind::Variable { binders } => {
                for b in binders {
                    self.scope.variables.push(VariableBinding {
                        name: b.name.clone(),
                        ty: b.ty.clone(),
                    });
                }
                self.snapshot();
            }
            CommandKind::AttributeCmd {
                attrs,
                target,
                scoped,
            } => {
                let resolved = resolve_name(self.env, &self.scope, &target.text)
                    .unwrap_or_else(|| target.text.clone());
                for attr in attrs {
                    if attr.is_deprecated() {
                        self.register_deprecation(resolved.clone(), attr);
                    }
                    if attr.name == "nolint" {
                        if let Some(decl) = self.env.declarations.get_mut(&resolved) {
                            decl.attributes.push(attr.clone());
                        }
                    }
                }
                self.snapshot();
                if let Some(child) = scoped {
                    self.process(child);
                }
            }
            CommandKind::Declaration(decl) => {
                self.snapshot();
                self.process_declaration(cmd, decl);
            }
            CommandKind::DeprecatedModule { message, since } => {
                let entry = DeprecationEntry {
                    old_name: self.module.clone(),
                    replacement: None,
                    message: message.clone(),
                    since: self.validate_since(since.as_ref(), cmd.span),
                    kind: DeprecationKind::Module,
                    suggested_imports: self.file_imports.clone(),
                    module: self.module.clone(),
                    file: self.file.clone(),
                    span: cmd.span,
                };
                if !self.env.deprecations.insert(entry) {
                    self.diag(
                        "deprecation.register",
                        cmd.span,
                        format!("module `{}` is already marked deprecated", self.module),
                    );
                }
                self.snapshot();
            }
        }
    }

    fn validate_since(&mut self, since: Option<&SinceClause>, at: Span) -> Option<NaiveDate> {
        match since {
            None => {
                self.diag(
                    "deprecation.register",
                    at,
                    "deprecation marker is missing its `(since := \"YYYY-MM-DD\")` clause"
                        .to_string(),
                );
                None
            }
            Some(clause) => match NaiveDate::parse_from_str(&clause.date, "%Y-%m-%d") {
                Ok(d) => Some(d),
                Err(_) => {
                    self.diag(
                        "deprecation.register",
                        clause.span,
                        format!("`{}` is not a valid YYYY-MM-DD date", clause.date),
                    );
                    None
                }
            },
        }
    }

    fn register_deprecation(&mut self, old_name: String, attr: &AttributeSyntax) {
        let since = self.validate_since(attr.since.as_ref(), attr.span);
        if attr.replacement.is_none() && attr.message.is_none() {
            self.diag(
                "deprecation.register",
                attr.span,
                format!(
                    "deprecation of `{old_name}` needs a replacement name or a custom message"
                ),
            );
        }
        let entry = DeprecationEntry {
            old_name: old_name.clone(),
            replacement: attr.replacement.as_ref().map(|n| n.text.clone()),
            message: attr.message.clone(),
            since,
            kind: DeprecationKind::Declaration,
            suggested_imports: Vec::new(),
            module: self.module.clone(),
            file: self.file.clone(),
            span: attr.span,
        };
        if !self.env.deprecations.insert(entry) {
            self.diag(
                "deprecation.register",
                attr.span,
                format!("`{old_name}` already has a deprecation entry; the first one wins"),
            );
        }
    }

    fn process_declaration(&mut self, cmd: &SyntaxCommand, decl: &DeclSyntax) {
        let full_name = if self.scope.namespace_stack.is_empty() {
            decl.name.text.clone()
        } else {
            format!(
                "{}.{}",
                self.scope.namespace_stack.join("."),
                decl.name.text
            )
        };

        for attr in &cmd.attributes {
            if attr.is_deprecated() {
                self.register_deprecation(full_name.clone(), attr);
            }
        }

        let declaration = Declaration {
            full_name: full_name.clone(),
            kind: decl.kind,
            module: self.module.clone(),
            file: self.file.clone(),
            span: cmd.span,
            name_span: decl.name.span,
            doc_string: cmd
                .doc_string
                .as_ref()
                .map(|d| d.text.trim().to_string()),
            attributes: cmd.attributes.clone(),
            statement_head: decl
                .ty
                .as_ref()
                .and_then(|t| t.head_symbol())
                .map(str::to_string),
        };
        match self.env.declarations.get(&full_name) {
            Some(existing) if existing.module != BUILTIN_MODULE => {
                let existing_module = existing.module.clone();
                self.diag(
                    "env.duplicateDeclaration",
                    decl.name.span,
                    format!(
                        "`{full_name}` is already declared in module `{existing_module}`; this declaration is shadowed"
                    ),
                );
            }
            _ => {
                self.env.declarations.insert(full_name.clone(), declaration);
            }
        }

        // references
        let mut locals: Vec<String> = self
            .scope
            .variables
            .iter()
            .map(|v| v.name.clone())
            .collect();
        locals.extend(decl.binders.iter().map(|b| b.name.clone()));

        let mut refs: Vec<(String, Span, ReferenceContext, bool)> = Vec::new();
        for b in &decl.binders {
            if let Some(ty) = &b.ty {
                collect_term_refs(ty, &mut locals, ReferenceContext::Term, &mut refs);
            }
        }
        if let Some(ty) = &decl.ty {
            collect_term_refs(ty, &mut locals, ReferenceContext::Term, &mut refs);
        }
        match &decl.body {
            DeclBody::Term(t) => {
                collect_term_refs(t, &mut locals, ReferenceContext::Term, &mut refs)
            }
            DeclBody::Tactics(ts) => {
                collect_tactic_refs(ts, &mut locals, self.intro_tactics, &mut refs)
            }
        }

        for (name, site, context, is_local) in refs {
            let resolved = if is_local {
                None
            } else {
                resolve_name(self.env, &self.scope, &name)
            };
            if !is_local && resolved.is_none() {
                self.diag(
                    "env.unresolvedReference",
                    site,
                    format!("unknown identifier `{name}`"),
                );
            }
            self.env.references.push(Reference {
                name,
                resolved,
                site,
                module: self.module.clone(),
                file: self.file.clone(),
                context,
                is_local,
                enclosing_decl: Some(full_name.clone()),
            });
        }
    }
}

fn collect_term_refs(
    term: &TermSyntax,
    locals: &mut Vec<String>,
    context: ReferenceContext,
    out: &mut Vec<(String, Span, ReferenceContext, bool)>,
) {
    match &term.head {
        TermHead::Ident(name) => {
            let is_local = locals.iter().any(|l| l == name);
            out.push((name.clone(), term.span, context, is_local));
            for a in &term.args {
                collect_term_refs(a, locals, context, out);
            }
        }
        TermHead::Lambda { binders, .. } => {
            let depth = locals.len();
            for b in binders {
                if let Some(ty) = &b.ty {
                    collect_term_refs(ty, locals, context, out);
                }
                locals.push(b.name.clone());
            }
            for a in &term.args {
                collect_term_refs(a, locals, context, out);
            }
            locals.truncate(depth);
        }
        _ => {
            for a in &term.args {
                collect_term_refs(a, locals, context, out);
            }
        }
    }
}

fn collect_tactic_refs(
    tactics: &[TacticSyntax],
    locals: &mut Vec<String>,
    intro_tactics: &BTreeSet<String>,
    out: &mut Vec<(String, Span, ReferenceContext, bool)>,
) {
    for t in tactics {
        if intro_tactics.contains(&t.name) {
            // identifier arguments of intro-like tactics bind fresh names
            for a in &t.args {
                if let Some(name) = a.as_ident() {
                    locals.push(name.to_string());
                } else {
                    collect_term_refs(a, locals, ReferenceContext::TacticArg, out);
                }
            }
        } else {
            for a in &t.args {
                collect_term_refs(a, locals, ReferenceContext::TacticArg, out);
            }
        }
        if let Some(b) = &t.binding {
            if let Some(ty) = &b.ty {
                collect_term_refs(ty, locals, ReferenceContext::TacticArg, out);
            }
            if let Some(v) = &b.value {
                collect_term_refs(v, locals, ReferenceContext::TacticArg, out);
            }
            locals.push(b.name.clone());
        }
        match &t.combinator {
            Some(Combinator::SeqFocus { rhs, .. }) => {
                collect_tactic_refs(std::slice::from_ref(rhs), locals, intro_tactics, out);
            }
            Some(Combinator::FocusDot { block }) => {
                let depth = locals.len();
                collect_tactic_refs(block, locals, intro_tactics, out);
                locals.truncate(depth);
            }
            None => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_module;

    fn process(text: &str) -> (Environment, ModuleAnalysis) {
        let (cmds, diags) = parse_module(text);
        assert!(diags.is_empty(), "parse diagnostics: {diags:#?}");
        let imported = Environment::with_builtins(
            &DEFAULT_BUILTINS.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        );
        process_commands(&cmds, &imported, "M", "M.lean")
    }

    #[test]
    fn empty_module_changes_nothing() {
        let imported = Environment::new();
        let (env, analysis) = process_commands(&[], &imported, "M", "M.lean");
        assert!(env.declarations.is_empty());
        assert!(analysis.diagnostics.is_empty());
    }

    #[test]
    fn namespace_prefixes_declarations() {
        let (env, analysis) = process("namespace Foo\ndef bar := 1\nend Foo");
        assert!(analysis.diagnostics.is_empty());
        assert!(env.declarations.contains_key("Foo.bar"));
        assert!(analysis.final_scope.section_stack.is_empty());
    }

    #[test]
    fn duplicate_declaration_diagnosed_and_first_kept() {
        let (env, analysis) = process("def x := 1\ndef x := 2");
        let dups: Vec<&Diagnostic> = analysis
            .diagnostics
            .iter()
            .filter(|d| d.rule == "env.duplicateDeclaration")
            .collect();
        assert_eq!(dups.len(), 1);
        assert_eq!(dups[0].span.line, 2);
        assert_eq!(env.declarations["x"].span.line, 1);
    }

    #[test]
    fn resolution_prefers_innermost_namespace() {
        let (env, _) = process("namespace Foo\ndef bar := 1\nend Foo");
        let mut scope = ScopeState::for_module("M");
        scope.namespace_stack.push("Foo".to_string());
        assert_eq!(resolve_name(&env, &scope, "bar"), Some("Foo.bar".to_string()));
    }

    #[test]
    fn resolution_falls_back_to_bare_name() {
        let (env, _) = process("def bar := 1");
        let mut scope = ScopeState::for_module("M");
        scope.namespace_stack.push("Other".to_string());
        assert_eq!(resolve_name(&env, &scope, "bar"), Some("bar".to_string()));
    }

    #[test]
    fn resolution_misses_unknown_names() {
        let env = Environment::new();
        let scope = ScopeState::for_module("M");
        assert_eq!(resolve_name(&env, &scope, "nope"), None);
    }

    #[test]
    fn opened_namespaces_resolve_in_reverse_order() {
        let (env, _) = process("namespace A\ndef n := 1\nend A\nnamespace B\ndef n := 2\nend B");
        let mut scope = ScopeState::for_module("M");
        scope.open_namespaces = vec!["A".to_string(), "B".to_string()];
        // B opened last, so B.n wins
        assert_eq!(resolve_name(&env, &scope, "n"), Some("B.n".to_string()));
    }

    #[test]
    fn unmatched_end_is_diagnosed_without_popping() {
        let (_, analysis) = process("section Foo\nend Bar");
        assert_eq!(
            analysis
                .diagnostics
                .iter()
                .filter(|d| d.rule == "env.unmatchedEnd")
                .count(),
            1
        );
        assert_eq!(analysis.final_scope.section_stack.len(), 1);
    }

    #[test]
    fn unresolved_reference_warns() {
        let (_, analysis) = process("def f := nope");
        assert_eq!(
            analysis
                .diagnostics
                .iter()
                .filter(|d| d.rule == "env.unresolvedReference")
                .count(),
            1
        );
    }

    #[test]
    fn locals_do_not_warn_or_resolve() {
        let (env, analysis) = process("def f := fun x => x");
        assert!(analysis
            .diagnostics
            .iter()
            .all(|d| d.rule != "env.unresolvedReference"));
        let x_ref = env
            .references
            .iter()
            .find(|r| r.name == "x" && r.context == ReferenceContext::Term)
            .unwrap();
        assert!(x_ref.is_local);
        assert!(x_ref.resolved.is_none());
    }

    #[test]
    fn variables_are_ambient_locals() {
        let (_, analysis) = process("variable (a b : Nat)\ndef f := a + b");
        assert!(analysis
            .diagnostics
            .iter()
            .all(|d| d.rule != "env.unresolvedReference"));
    }

    #[test]
    fn intro_binds_instead_of_referencing() {
        let (_, analysis) = process("theorem t : True := by\n  intro h\n  exact h");
        assert!(analysis
            .diagnostics
            .iter()
            .all(|d| d.rule != "env.unresolvedReference"));
    }

    #[test]
    fn scoped_option_is_restored_after_child() {
        let (_, analysis) =
            process("set_option linter.style false in\ndef f := 1\ndef g := 2");
        // trace: set_option, child f, g
        assert_eq!(analysis.scope_trace.len(), 3);
        assert_eq!(
            analysis.scope_trace[1].linter_toggle("style.lineLength"),
            Some(false)
        );
        assert_eq!(analysis.scope_trace[2].linter_toggle("style.lineLength"), None);
    }

    #[test]
    fn section_end_restores_options_and_variables() {
        let text = "section\nset_option pp.all true\nvariable (n : Nat)\nend\ndef f := 1";
        let (_, analysis) = process(text);
        let last = analysis.scope_trace.last().unwrap();
        assert!(last.active_options.is_empty());
        assert!(last.variables.is_empty());
    }

    #[test]
    fn deprecated_attribute_registers_entry() {
        let (env, analysis) = process(
            "def Foo.baz := 1\n@[deprecated Foo.baz (since := \"2025-01-01\")]\ndef Foo.bar := 1",
        );
        assert!(analysis.diagnostics.is_empty());
        let entry = env.deprecations.get("Foo.bar").expect("entry");
        assert_eq!(entry.replacement.as_deref(), Some("Foo.baz"));
        assert_eq!(
            entry.since.unwrap(),
            NaiveDate::parse_from_str("2025-01-01", "%Y-%m-%d").unwrap()
        );
    }

    #[test]
    fn missing_since_still_registers_with_diagnostic() {
        let (env, analysis) = process("@[deprecated \"gone\"]\ndef f := 1");
        assert_eq!(
            analysis
                .diagnostics
                .iter()
                .filter(|d| d.rule == "deprecation.register")
                .count(),
            1
        );
        assert!(env.deprecations.get("f").unwrap().since.is_none());
    }

    #[test]
    fn deprecated_module_collects_stub_imports() {
        let text = "import Foo.Core\nimport Foo.Extra\ndeprecated_module \"moved\" (since := \"2025-02-02\")";
        let (cmds, _) = parse_module(text);
        let imported = Environment::new();
        let (env, _) = process_commands(&cmds, &imported, "Legacy", "Legacy.lean");
        let entry = env.deprecations.get("Legacy").unwrap();
        assert_eq!(entry.kind, DeprecationKind::Module);
        assert_eq!(
            entry.suggested_imports,
            vec!["Foo.Core".to_string(), "Foo.Extra".to_string()]
        );
    }

    #[test]
    fn monotone_over_imports() {
        let (base, _) = process("def a := 1");
        let (cmds, _) = parse_module("def b := 2");
        let (env, _) = process_commands(&cmds, &base, "N", "N.lean");
        for k in base.declarations.keys() {
            assert!(env.declarations.contains_key(k));
        }
    }

    #[test]
    fn reference_multiset_matches_identifier_scan() {
        // every identifier in term/tactic-arg position yields one reference
        let text = "def f := g (h k)\ntheorem t : True := by\n  exact m\ndef g := 1\ndef h := 1\ndef k := 1\ndef m := 1";
        let (env, _) = process(text);
        let mut names: Vec<&str> = env
            .references
            .iter()
            .filter(|r| r.context != ReferenceContext::Import)
            .map(|r| r.name.as_str())
            .collect();
        names.sort_unstable();
        assert_eq!(names, vec!["True", "g", "h", "k", "m"]);
    }
}
