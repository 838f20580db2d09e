//! The deprecated-syntax linter: `λ x => x` is the old surface syntax for
//! anonymous functions, `fun x ↦ x` the preferred one. Both pieces get their
//! own diagnostic and fix so either half can be modernised independently.

use crate::ast::*;
use crate::diagnostics::Diagnostic;
use crate::environment::ScopeState;
use crate::lint::{CommandLinter, LintContext};
use crate::rules;

pub fn lint_deprecated_syntax(cmd: &SyntaxCommand) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    cmd.walk_terms(&mut |term| {
        if let TermHead::Lambda {
            kw,
            kw_span,
            arrow,
            arrow_span,
            ..
        } = &term.head
        {
            if *kw == LambdaKw::Lambda {
                out.push(
                    Diagnostic::new(
                        "deprecation.syntax",
                        rules::default_severity("deprecation.syntax"),
                        *kw_span,
                        "`λ` is deprecated for anonymous functions; use `fun`",
                    )
                    .with_fix(*kw_span, "fun"),
                );
            }
            if *arrow == LambdaArrow::FatArrow {
                out.push(
                    Diagnostic::new(
                        "deprecation.syntax",
                        rules::default_severity("deprecation.syntax"),
                        *arrow_span,
                        "`=>` is deprecated in anonymous functions; use `↦`",
                    )
                    .with_fix(*arrow_span, "↦"),
                );
            }
        }
    });
    out
}

pub struct DeprecatedSyntaxLinter;

impl CommandLinter for DeprecatedSyntaxLinter {
    fn name(&self) -> &'static str {
        "deprecation.syntax"
    }
    fn run(&self, cmd: &SyntaxCommand, _: &ScopeState, _: &LintContext) -> Vec<Diagnostic> {
        lint_deprecated_syntax(cmd)
    }
}
