//! Style and hygiene linters: line length, doc-string spacing, copyright
//! header and module doc placement, watched `set_option`s, `open Classical`,
//! attribute scoping, and unclosed sections.

use crate::ast::*;
use crate::diagnostics::Diagnostic;
use crate::environment::{FrameKind, ScopeState};
use crate::lint::{CommandLinter, FileLinter, LintContext};
use crate::rules;
use crate::span::Span;

fn diag(rule: &str, span: Span, message: String) -> Diagnostic {
    Diagnostic::new(rule, rules::default_severity(rule), span, message)
}

// ---------------------------------------------------------------------------
// style.lineLength
// ---------------------------------------------------------------------------

pub struct LineLengthLinter;

/// Pure text check: one diagnostic per line longer than the configured limit
/// (counted in Unicode scalar values), pointing at the first offending
/// column. A line whose overflow is one long URL chunk is exempt.
pub fn lint_line_length(text: &str, max_len: usize, file_offset_index: &crate::span::LineIndex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let count = line.chars().count();
        if count <= max_len {
            continue;
        }
        if url_exempt(line, max_len) {
            continue;
        }
        let line_start = file_offset_index.line_start(line_no);
        let overflow_byte = line
            .char_indices()
            .nth(max_len)
            .map(|(i, _)| i)
            .unwrap_or(line.len());
        let span = Span::new(
            line_start + overflow_byte,
            line_start + line.len(),
            line_no as u32,
            (max_len + 1) as u32,
            line_no as u32,
            (count + 1) as u32,
        );
        out.push(diag(
            "style.lineLength",
            span,
            format!("line is {count} characters long (limit {max_len})"),
        ));
    }
    out
}

/// The whitespace-delimited chunk containing (or following) the first
/// overflowing column must start with "http" and run to the end of the line.
fn url_exempt(line: &str, max_len: usize) -> bool {
    let chars: Vec<char> = line.chars().collect();
    let mut chunks: Vec<(usize, usize)> = Vec::new(); // [start, end) in char positions
    let mut start = None;
    for (i, c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                chunks.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        chunks.push((s, chars.len()));
    }
    // the chunk containing the first over-limit char (or, if that char is
    // whitespace, the next chunk)
    let overflow = max_len;
    let Some(i) = chunks.iter().position(|&(_, ce)| overflow < ce) else {
        return false;
    };
    let (s, e) = chunks[i];
    let chunk: String = chars[s..e].iter().collect();
    chunk.starts_with("http") && i == chunks.len() - 1
}

impl FileLinter for LineLengthLinter {
    fn name(&self) -> &'static str {
        "style.lineLength"
    }
    fn run(&self, ctx: &LintContext, _: &[ScopeState], _: &ScopeState) -> Vec<Diagnostic> {
        lint_line_length(ctx.text, ctx.config.style.max_line_length, ctx.line_index)
    }
}

// ---------------------------------------------------------------------------
// style.docString
// ---------------------------------------------------------------------------

pub struct DocStringLinter;

/// Doc-strings must open with exactly one space or a line break after `/--`
/// and close with exactly one space or a line break before `-/`. The fix
/// normalizes the offending run to one space.
pub fn lint_docstring(doc: &DocString) -> Vec<Diagnostic> {
    let text = doc.text.as_str();
    let Some(inner) = text
        .strip_prefix("/--")
        .and_then(|t| t.strip_suffix("-/"))
    else {
        return Vec::new();
    };
    let inner_start = doc.span.start + 3;
    let inner_end = doc.span.end - 2;
    let mut out = Vec::new();

    let is_break = |c: char| c == '\n';
    let leading: String = inner
        .chars()
        .take_while(|c| c.is_whitespace())
        .collect();

    if leading.len() == inner.len() {
        // whitespace-only doc-string: normalize to a single space
        if inner != " " && !leading.starts_with('\n') {
            let span = crate::span::Span::new(
                inner_start,
                inner_end,
                doc.span.line,
                doc.span.col + 3,
                doc.span.end_line,
                doc.span.end_col.saturating_sub(2),
            );
            out.push(
                diag(
                    "style.docString",
                    span,
                    "doc-string should contain text separated by single spaces from `/--` and `-/`"
                        .to_string(),
                )
                .with_fix(span, " "),
            );
        }
        return out;
    }

    let leading_ok = leading == " " || leading.starts_with(is_break);
    if !leading_ok {
        let span = Span::new(
            inner_start,
            inner_start + leading.len(),
            doc.span.line,
            doc.span.col + 3,
            doc.span.line,
            doc.span.col + 3 + leading.chars().count() as u32,
        );
        out.push(
            diag(
                "style.docString",
                span,
                "doc-string should begin with exactly one space or line break after `/--`"
                    .to_string(),
            )
            .with_fix(span, " "),
        );
    }

    let trailing: String = {
        let rev: String = inner
            .chars()
            .rev()
            .take_while(|c| c.is_whitespace())
            .collect();
        rev.chars().rev().collect()
    };
    let trailing_ok = trailing == " " || trailing.starts_with(is_break);
    if !trailing_ok {
        let span = Span::new(
            inner_end - trailing.len(),
            inner_end,
            doc.span.end_line,
            doc.span
                .end_col
                .saturating_sub(2 + trailing.chars().count() as u32),
            doc.span.end_line,
            doc.span.end_col.saturating_sub(2),
        );
        out.push(
            diag(
                "style.docString",
                span,
                "doc-string should end with exactly one space or line break before `-/`"
                    .to_string(),
            )
            .with_fix(span, " "),
        );
    }
    out
}

impl CommandLinter for DocStringLinter {
    fn name(&self) -> &'static str {
        "style.docString"
    }
    fn run(&self, cmd: &SyntaxCommand, _: &ScopeState, _: &LintContext) -> Vec<Diagnostic> {
        match &cmd.doc_string {
            Some(doc) => lint_docstring(doc),
            None => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// style.header
// ---------------------------------------------------------------------------

pub struct HeaderLinter;

fn check_copyright_text(text: &str) -> Option<String> {
    let inner = text.strip_prefix("/-")?.strip_suffix("-/")?;
    let lines: Vec<&str> = inner
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty())
        .collect();
    if lines.len() != 3 {
        return Some(format!(
            "copyright header must have exactly 3 lines (copyright, license, authors), found {}",
            lines.len()
        ));
    }
    let first = lines[0].trim();
    let Some(rest) = first.strip_prefix("Copyright (c) ") else {
        return Some("first header line must start with `Copyright (c) <year> <name>`".to_string());
    };
    let Some(body) = rest.strip_suffix(". All rights reserved.") else {
        return Some("first header line must end with `. All rights reserved.`".to_string());
    };
    let year: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
    if year.len() != 4 || body.len() <= 5 {
        return Some("first header line needs a 4-digit year followed by author names".to_string());
    }
    if lines[1].trim() != "Released under Apache 2.0 license as described in the file LICENSE." {
        return Some(
            "second header line must be `Released under Apache 2.0 license as described in the file LICENSE.`"
                .to_string(),
        );
    }
    let authors = lines[2].trim();
    match authors.strip_prefix("Authors:") {
        Some(names) if !names.trim().is_empty() => None,
        _ => Some("third header line must be `Authors: <names>`".to_string()),
    }
}

/// Header checks: (a) a well-formed copyright block opens the file, (b) the
/// first non-import command is a module doc-string unless the file is
/// import-only, (c) no forbidden umbrella imports.
pub fn lint_header(
    commands: &[SyntaxCommand],
    text: &str,
    forbidden_imports: &[String],
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if commands.is_empty() {
        return out;
    }

    match &commands[0].kind {
        CommandKind::CopyrightHeader => {
            let raw = &text[commands[0].span.start..commands[0].span.end];
            if let Some(problem) = check_copyright_text(raw) {
                out.push(diag("style.header", commands[0].span, problem));
            }
        }
        _ => {
            out.push(diag(
                "style.header",
                Span::caret(0, 1, 1),
                "file is missing its copyright header".to_string(),
            ));
        }
    }

    let import_only = commands.iter().all(|c| {
        matches!(
            c.kind,
            CommandKind::CopyrightHeader | CommandKind::Import { .. } | CommandKind::ModuleDoc
        )
    });
    let first_body = commands
        .iter()
        .find(|c| !matches!(c.kind, CommandKind::CopyrightHeader | CommandKind::Import { .. }));
    match first_body {
        Some(cmd) if matches!(cmd.kind, CommandKind::ModuleDoc) => {}
        None => {}
        Some(cmd) => {
            if !import_only {
                out.push(diag(
                    "style.header",
                    cmd.span,
                    "the first command after the header and imports must be a module doc-string (`/-! ... -/`)"
                        .to_string(),
                ));
            }
        }
    }

    for cmd in commands {
        if let CommandKind::Import { module } = &cmd.kind {
            if forbidden_imports.iter().any(|f| f == &module.text) {
                out.push(diag(
                    "style.header",
                    cmd.span,
                    format!(
                        "`{}` is an umbrella module and must not be imported directly",
                        module.text
                    ),
                ));
            }
        }
    }
    out
}

impl FileLinter for HeaderLinter {
    fn name(&self) -> &'static str {
        "style.header"
    }
    fn run(&self, ctx: &LintContext, _: &[ScopeState], _: &ScopeState) -> Vec<Diagnostic> {
        lint_header(ctx.commands, ctx.text, &ctx.config.style.forbidden_imports)
    }
}

// ---------------------------------------------------------------------------
// tracking.setOption
// ---------------------------------------------------------------------------

pub struct SetOptionLinter;

/// Watched options must be scoped to one command: `set_option X v in ...`.
/// The fix appends ` in`, binding the next command, and is offered only when
/// a next command exists.
pub fn lint_set_option(
    cmd: &SyntaxCommand,
    watched: &[String],
    has_following_command: bool,
) -> Vec<Diagnostic> {
    let CommandKind::SetOption {
        option,
        value,
        scoped: None,
        ..
    } = &cmd.kind
    else {
        return Vec::new();
    };
    if !watched.iter().any(|w| w == &option.text) {
        return Vec::new();
    }
    let mut d = diag(
        "tracking.setOption",
        cmd.span,
        format!(
            "`set_option {0} {1}` applies to the rest of the file; use `set_option {0} {1} in` to scope it to one command",
            option.text, value
        ),
    );
    if has_following_command {
        d = d.with_fix(
            Span::caret(cmd.span.end, cmd.span.end_line, cmd.span.end_col),
            " in",
        );
    }
    vec![d]
}

impl CommandLinter for SetOptionLinter {
    fn name(&self) -> &'static str {
        "tracking.setOption"
    }
    fn run(&self, cmd: &SyntaxCommand, _: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let has_following = ctx
            .commands
            .iter()
            .any(|c| c.span.start >= cmd.span.end);
        lint_set_option(cmd, &ctx.config.tracking.watched_options, has_following)
    }
}

// ---------------------------------------------------------------------------
// tracking.openClassical
// ---------------------------------------------------------------------------

pub struct OpenClassicalLinter;

pub fn lint_open_classical(cmd: &SyntaxCommand, has_following_command: bool) -> Vec<Diagnostic> {
    let CommandKind::Open {
        namespaces,
        scoped: None,
    } = &cmd.kind
    else {
        return Vec::new();
    };
    if !namespaces.iter().any(|n| n.text == "Classical") {
        return Vec::new();
    }
    let mut d = diag(
        "tracking.openClassical",
        cmd.span,
        "`open Classical` can silently change elaboration for the rest of the file; use `open Classical in` on the command that needs it"
            .to_string(),
    );
    if has_following_command {
        d = d.with_fix(
            Span::caret(cmd.span.end, cmd.span.end_line, cmd.span.end_col),
            " in",
        );
    }
    vec![d]
}

impl CommandLinter for OpenClassicalLinter {
    fn name(&self) -> &'static str {
        "tracking.openClassical"
    }
    fn run(&self, cmd: &SyntaxCommand, _: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let has_following = ctx
            .commands
            .iter()
            .any(|c| c.span.start >= cmd.span.end);
        lint_open_classical(cmd, has_following)
    }
}

// ---------------------------------------------------------------------------
// tracking.globalAttributeIn
// ---------------------------------------------------------------------------

pub struct GlobalAttributeInLinter;

/// `attribute [simp] foo in ...` looks scoped but some attributes stay
/// global; require an explicit `local`.
pub fn lint_global_attribute_in(
    cmd: &SyntaxCommand,
    global_only: &[String],
) -> Vec<Diagnostic> {
    let CommandKind::AttributeCmd {
        attrs,
        scoped: Some(_),
        ..
    } = &cmd.kind
    else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for attr in attrs {
        if attr.is_local {
            continue;
        }
        if global_only.iter().any(|g| g == &attr.name) {
            out.push(
                diag(
                    "tracking.globalAttributeIn",
                    attr.span,
                    format!(
                        "the `{0}` attribute stays global despite `in`; write `attribute [local {0}] ...` if you meant it to be scoped",
                        attr.name
                    ),
                )
                .with_fix(
                    Span::caret(attr.name_span.start, attr.name_span.line, attr.name_span.col),
                    "local ",
                ),
            );
        }
    }
    out
}

impl CommandLinter for GlobalAttributeInLinter {
    fn name(&self) -> &'static str {
        "tracking.globalAttributeIn"
    }
    fn run(&self, cmd: &SyntaxCommand, _: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        lint_global_attribute_in(cmd, &ctx.config.tracking.global_only_attributes)
    }
}

// ---------------------------------------------------------------------------
// maintenance.missingEnd
// ---------------------------------------------------------------------------

pub struct MissingEndLinter;

/// One diagnostic per frame still open at end of file, at its opening span.
pub fn lint_missing_end(final_scope: &ScopeState) -> Vec<Diagnostic> {
    final_scope
        .section_stack
        .iter()
        .map(|frame| {
            let what = match frame.kind {
                FrameKind::Section => "section",
                FrameKind::Namespace => "namespace",
            };
            let name = frame
                .name
                .as_deref()
                .map(|n| format!(" {n}"))
                .unwrap_or_default();
            diag(
                "maintenance.missingEnd",
                frame.open_span,
                format!("this {what}{name} is never closed; add `end{name}`"),
            )
        })
        .collect()
}

impl FileLinter for MissingEndLinter {
    fn name(&self) -> &'static str {
        "maintenance.missingEnd"
    }
    fn run(&self, _: &LintContext, _: &[ScopeState], final_scope: &ScopeState) -> Vec<Diagnostic> {
        lint_missing_end(final_scope)
    }
}
