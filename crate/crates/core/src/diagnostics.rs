//! Diagnostics and their output formats.

use serde::Serialize;

use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
            Severity::Info => write!(f, "info"),
        }
    }
}

impl std::str::FromStr for Severity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(Severity::Error),
            "warning" => Ok(Severity::Warning),
            "info" => Ok(Severity::Info),
            other => Err(format!("unknown severity `{other}`")),
        }
    }
}

/// A single replacement a fix wants to make.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixEdit {
    pub span: Span,
    pub replacement: String,
}

/// One lint finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Registered rule name, e.g. `style.lineLength`.
    pub rule: String,
    pub severity: Severity,
    /// Project-relative path, filled in by the driver.
    pub file: String,
    pub span: Span,
    pub message: String,
    /// Non-overlapping edits which remove the finding when applied.
    pub fixes: Vec<FixEdit>,
    /// Secondary spans (e.g. the staining tactic for `maintenance.flexible`).
    pub related: Vec<Span>,
}

impl Diagnostic {
    pub fn new(
        rule: impl Into<String>,
        severity: Severity,
        span: Span,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            rule: rule.into(),
            severity,
            file: String::new(),
            span,
            message: message.into(),
            fixes: Vec::new(),
            related: Vec::new(),
        }
    }

    pub fn with_fix(mut self, span: Span, replacement: impl Into<String>) -> Self {
        self.fixes.push(FixEdit {
            span,
            replacement: replacement.into(),
        });
        self
    }

    pub fn with_related(mut self, span: Span) -> Self {
        self.related.push(span);
        self
    }

    pub fn in_file(mut self, file: &str) -> Self {
        self.file = file.to_string();
        self
    }
}

/// Deterministic output order: file, then (line, col, rule), then offset.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (
            a.file.as_str(),
            a.span.line,
            a.span.col,
            a.rule.as_str(),
            a.span.start,
            a.message.as_str(),
        )
            .cmp(&(
                b.file.as_str(),
                b.span.line,
                b.span.col,
                b.rule.as_str(),
                b.span.start,
                b.message.as_str(),
            ))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
    CiAnnotations,
}

#[derive(Serialize)]
struct FixJson<'a> {
    #[serde(rename = "startLine")]
    start_line: u32,
    #[serde(rename = "startCol")]
    start_col: u32,
    #[serde(rename = "endLine")]
    end_line: u32,
    #[serde(rename = "endCol")]
    end_col: u32,
    replacement: &'a str,
}

#[derive(Serialize)]
struct DiagnosticJson<'a> {
    file: &'a str,
    line: u32,
    col: u32,
    #[serde(rename = "endLine")]
    end_line: u32,
    #[serde(rename = "endCol")]
    end_col: u32,
    severity: Severity,
    rule: &'a str,
    message: &'a str,
    fixes: Vec<FixJson<'a>>,
}

/// Render diagnostics in one of the stable output formats.
///
/// * human: `file:line:col: [severity] rule: message`, one line each
/// * json: array of objects with the documented schema
/// * ci: GitHub-style workflow annotations
pub fn format_diagnostics(diags: &[Diagnostic], format: OutputFormat) -> String {
    match format {
        OutputFormat::Human => {
            let mut out = String::new();
            for d in diags {
                out.push_str(&format!(
                    "{}:{}:{}: [{}] {}: {}\n",
                    d.file, d.span.line, d.span.col, d.severity, d.rule, d.message
                ));
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<DiagnosticJson> = diags
                .iter()
                .map(|d| DiagnosticJson {
                    file: &d.file,
                    line: d.span.line,
                    col: d.span.col,
                    end_line: d.span.end_line,
                    end_col: d.span.end_col,
                    severity: d.severity,
                    rule: &d.rule,
                    message: &d.message,
                    fixes: d
                        .fixes
                        .iter()
                        .map(|f| FixJson {
                            start_line: f.span.line,
                            start_col: f.span.col,
                            end_line: f.span.end_line,
                            end_col: f.span.end_col,
                            replacement: &f.replacement,
                        })
                        .collect(),
                })
                .collect();
            serde_json::to_string_pretty(&items).expect("diagnostics serialize")
        }
        OutputFormat::CiAnnotations => {
            let mut out = String::new();
            for d in diags {
                let level = match d.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                    Severity::Info => "notice",
                };
                out.push_str(&format!(
                    "::{} file={},line={},col={}::[{}] {}\n",
                    level, d.file, d.span.line, d.span.col, d.rule, d.message
                ));
            }
            out
        }
    }
}
