//! Tokens produced by the lexer.
//!
//! Comment tokens are first-class and never discarded: debt markers live in
//! comments, the copyright header is a block comment, and the lossless
//! round-trip property needs every non-whitespace byte accounted for.

use crate::span::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Symbol,
    /// `/-- ... -/`
    DocComment,
    /// `/-! ... -/`
    ModuleDoc,
    /// `/- ... -/`
    BlockComment,
    /// `-- ...`
    LineComment,
    Eof,
}

/// Reserved words of the mini-language. `deprecated`, `since`, `local`,
/// `nolint`, `have` and `let` stay ordinary identifiers and are interpreted
/// by position instead, so they remain usable as names.
pub const KEYWORDS: &[&str] = &[
    "import",
    "namespace",
    "section",
    "end",
    "open",
    "in",
    "set_option",
    "variable",
    "attribute",
    "def",
    "theorem",
    "lemma",
    "by",
    "at",
    "fun",
    "deprecated_module",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice, including comment/string delimiters.
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is_kw(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    pub fn is_sym(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == sym
    }

    pub fn is_comment(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::DocComment
                | TokenKind::ModuleDoc
                | TokenKind::BlockComment
                | TokenKind::LineComment
        )
    }

    /// Comment text without its delimiters; `None` for non-comments.
    pub fn comment_content(&self) -> Option<&str> {
        let t = self.text.as_str();
        match self.kind {
            TokenKind::LineComment => Some(t.strip_prefix("--").unwrap_or(t)),
            TokenKind::DocComment => {
                let inner = t.strip_prefix("/--").unwrap_or(t);
                Some(inner.strip_suffix("-/").unwrap_or(inner))
            }
            TokenKind::ModuleDoc => {
                let inner = t.strip_prefix("/-!").unwrap_or(t);
                Some(inner.strip_suffix("-/").unwrap_or(inner))
            }
            TokenKind::BlockComment => {
                let inner = t.strip_prefix("/-").unwrap_or(t);
                Some(inner.strip_suffix("-/").unwrap_or(inner))
            }
            _ => None,
        }
    }
}
