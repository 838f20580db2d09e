//! Linter registration and execution.
//!
//! Two linter kinds exist: command linters run on every command (including
//! `... in`-scoped children) with the scope state active at that command;
//! file linters run once per file (line length, header shape, missing `end`).
//! Environment linters run once per declaration on the final, fully merged
//! environment.
//!
//! A linter that panics is caught and turned into one `internal.error`
//! diagnostic naming it; one linter's bug must not hide other findings.

use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::ast::{flatten_commands, SyntaxCommand};
use crate::config::LintConfig;
use crate::diagnostics::{sort_diagnostics, Diagnostic};
use crate::environment::{Declaration, Environment, ScopeState, BUILTIN_MODULE};
use crate::linters;
use crate::rules;
use crate::span::{LineIndex, Span};

/// Everything a per-file linter may look at.
pub struct LintContext<'a> {
    pub file: &'a str,
    pub text: &'a str,
    pub commands: &'a [SyntaxCommand],
    pub config: &'a LintConfig,
    pub line_index: &'a LineIndex,
}

pub trait CommandLinter: Sync + Send {
    fn name(&self) -> &'static str;
    fn run(&self, cmd: &SyntaxCommand, scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic>;
}

pub trait FileLinter: Sync + Send {
    fn name(&self) -> &'static str;
    fn run(
        &self,
        ctx: &LintContext,
        scope_trace: &[ScopeState],
        final_scope: &ScopeState,
    ) -> Vec<Diagnostic>;
}

pub trait EnvLinter: Sync + Send {
    fn name(&self) -> &'static str;
    fn run(&self, decl: &Declaration, env: &Environment, config: &LintConfig) -> Vec<Diagnostic>;
}

pub struct LinterRegistry {
    command_linters: Vec<Box<dyn CommandLinter>>,
    file_linters: Vec<Box<dyn FileLinter>>,
    env_linters: Vec<Box<dyn EnvLinter>>,
}

impl Default for LinterRegistry {
    fn default() -> Self {
        let mut r = LinterRegistry::empty();
        r.register_command_linter(Box::new(linters::deprecated::DeprecatedSyntaxLinter));
        r.register_command_linter(Box::new(linters::style::DocStringLinter));
        r.register_command_linter(Box::new(linters::style::SetOptionLinter));
        r.register_command_linter(Box::new(linters::style::OpenClassicalLinter));
        r.register_command_linter(Box::new(linters::style::GlobalAttributeInLinter));
        r.register_command_linter(Box::new(linters::tactic::GoalFlowLinter));
        r.register_command_linter(Box::new(linters::tactic::FlexibleLinter));
        r.register_command_linter(Box::new(linters::tactic::UnusedBindingsLinter));
        r.register_command_linter(Box::new(linters::tactic::HaveLetLinter));
        r.register_command_linter(Box::new(linters::tactic::PapercutLinter));
        r.register_file_linter(Box::new(linters::style::LineLengthLinter));
        r.register_file_linter(Box::new(linters::style::HeaderLinter));
        r.register_file_linter(Box::new(linters::style::MissingEndLinter));
        r.register_env_linter(Box::new(linters::env_rules::DupNamespaceLinter));
        r
    }
}

impl LinterRegistry {
    pub fn empty() -> Self {
        LinterRegistry {
            command_linters: Vec::new(),
            file_linters: Vec::new(),
            env_linters: Vec::new(),
        }
    }

    pub fn register_command_linter(&mut self, linter: Box<dyn CommandLinter>) {
        self.command_linters.push(linter);
    }

    pub fn register_file_linter(&mut self, linter: Box<dyn FileLinter>) {
        self.file_linters.push(linter);
    }

    pub fn register_env_linter(&mut self, linter: Box<dyn EnvLinter>) {
        self.env_linters.push(linter);
    }
}

fn crash_diagnostic(linter: &str, span: Span) -> Diagnostic {
    Diagnostic::new(
        "internal.error",
        rules::default_severity("internal.error"),
        span,
        format!("linter `{linter}` crashed; its findings for this input are incomplete"),
    )
}

/// Run every command linter on every command of one file (scoped children
/// included), then the file linters, in registration order. Diagnostics come
/// back unfiltered and unsorted; [`finalize_diagnostics`] applies config and
/// suppression.
pub fn run_syntax_linters(
    registry: &LinterRegistry,
    ctx: &LintContext,
    scope_trace: &[ScopeState],
    final_scope: &ScopeState,
) -> Vec<Diagnostic> {
    let units = flatten_commands(ctx.commands);
    debug_assert_eq!(units.len(), scope_trace.len(), "trace out of step");
    let mut out = Vec::new();
    for (cmd, scope) in units.iter().zip(scope_trace.iter()) {
        for linter in &registry.command_linters {
            match catch_unwind(AssertUnwindSafe(|| linter.run(cmd, scope, ctx))) {
                Ok(diags) => out.extend(diags),
                Err(_) => out.push(crash_diagnostic(linter.name(), cmd.span)),
            }
        }
    }
    for linter in &registry.file_linters {
        match catch_unwind(AssertUnwindSafe(|| {
            linter.run(ctx, scope_trace, final_scope)
        })) {
            Ok(diags) => out.extend(diags),
            Err(_) => out.push(crash_diagnostic(linter.name(), Span::caret(0, 1, 1))),
        }
    }
    for d in &mut out {
        if d.file.is_empty() {
            d.file = ctx.file.to_string();
        }
    }
    out
}

/// Run every environment linter on every declaration of the final
/// environment, honouring `@[nolint <rule>]`, plus the project-level
/// path-capitalization check.
pub fn run_env_linters(
    registry: &LinterRegistry,
    env: &Environment,
    config: &LintConfig,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for decl in env.declarations.values() {
        if decl.module == BUILTIN_MODULE {
            continue;
        }
        for linter in &registry.env_linters {
            if decl
                .attributes
                .iter()
                .any(|a| a.nolint_matches(linter.name()))
            {
                continue;
            }
            match catch_unwind(AssertUnwindSafe(|| linter.run(decl, env, config))) {
                Ok(diags) => out.extend(diags),
                Err(_) => {
                    out.push(crash_diagnostic(linter.name(), decl.span).in_file(&decl.file))
                }
            }
        }
    }
    out.extend(linters::env_rules::lint_path_case_collisions(
        &env.modules_processed,
    ));
    out
}

/// Locates the scope state active at a diagnostic's span: the innermost
/// command containing it, or the file-level state left behind by the nearest
/// preceding command for diagnostics that sit between commands.
pub struct SuppressionIndex {
    spans: Vec<Span>,
    trace: Vec<ScopeState>,
}

impl SuppressionIndex {
    pub fn new(commands: &[SyntaxCommand], scope_trace: &[ScopeState]) -> Self {
        let spans: Vec<Span> = flatten_commands(commands).iter().map(|c| c.span).collect();
        debug_assert_eq!(spans.len(), scope_trace.len());
        SuppressionIndex {
            spans,
            trace: scope_trace.to_vec(),
        }
    }

    pub fn scope_at(&self, span: &Span) -> ScopeState {
        // innermost containing unit: later entries are deeper or further right
        let mut best: Option<usize> = None;
        for (i, s) in self.spans.iter().enumerate() {
            if s.contains(span) {
                best = Some(i);
            }
        }
        if let Some(i) = best {
            return self.trace[i].clone();
        }
        // between commands: last command starting before the span, without
        // its command-scoped options
        let mut prev: Option<usize> = None;
        for (i, s) in self.spans.iter().enumerate() {
            if s.start <= span.start {
                prev = Some(i);
            }
        }
        match prev {
            Some(i) => self.trace[i].file_level(),
            None => ScopeState::default(),
        }
    }
}

/// True iff the diagnostic is silenced at its location: the most specific
/// `linter.<rule>` option active there is `false`, or the (file, rule) pair
/// is grandfathered in the exceptions list.
pub fn is_suppressed(diag: &Diagnostic, scope: &ScopeState, config: &LintConfig) -> bool {
    match scope.linter_toggle(&diag.rule) {
        Some(false) => true,
        Some(true) => false,
        None => config.is_exception(&diag.file, &diag.rule),
    }
}

/// Apply config to raw diagnostics: drop disabled rules, override severities,
/// apply scoped suppression (when an index for the file is available), sort.
pub fn finalize_diagnostics<'a>(
    mut diags: Vec<Diagnostic>,
    config: &LintConfig,
    index_for_file: impl Fn(&str) -> Option<&'a SuppressionIndex>,
) -> Vec<Diagnostic> {
    diags.retain(|d| config.rule_enabled(&d.rule));
    for d in &mut diags {
        d.severity = config.severity_for(&d.rule);
    }
    diags.retain(|d| {
        let scope = index_for_file(&d.file)
            .map(|idx| idx.scope_at(&d.span))
            .unwrap_or_default();
        !is_suppressed(d, &scope, config)
    });
    sort_diagnostics(&mut diags);
    diags
}
