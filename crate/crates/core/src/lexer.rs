//! Lexer for the mini-language.
//!
//! Tokens partition the non-whitespace source: comments are tokens, trivia
//! (whitespace) is recoverable from the gaps between token spans, and the
//! final token is always `Eof`. Lex errors (unterminated strings or block
//! comments) are reported with the span of the opening delimiter and lexing
//! resumes on the next line, so one bad token cannot take down a whole file.

use crate::span::Span;
use crate::token::{Token, TokenKind, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.text[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, mark: (usize, u32, u32)) -> Span {
        Span::new(mark.0, self.pos, mark.1, mark.2, self.line, self.col)
    }

    fn skip_to_line_end(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }
}

fn is_ident_start(c: char) -> bool {
    // `λ` is alphabetic to Unicode but is lambda notation here
    (c.is_alphabetic() && c != 'λ') || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

/// Symbols that are single scalar values.
const SINGLE_SYMBOLS: &str = "()[],;:=+-*/<>@·λ↦≤";

/// Tokenize `text`. Returns the token stream (terminated by `Eof`) and any
/// lex errors encountered along the way.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut lx = Lexer::new(text);
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    loop {
        while matches!(lx.peek(), Some(c) if c.is_whitespace()) {
            lx.bump();
        }
        let mark = lx.mark();
        let Some(c) = lx.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                text: String::new(),
                span: Span::caret(lx.pos, lx.line, lx.col),
            });
            break;
        };

        // line comments
        if c == '-' && lx.peek_at(1) == Some('-') {
            lx.skip_to_line_end();
            tokens.push(Token {
                kind: TokenKind::LineComment,
                text: text[mark.0..lx.pos].to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        // block comment family: /- ... -/ with nesting, /-- doc, /-! module doc
        if c == '/' && lx.peek_at(1) == Some('-') {
            let kind = if lx.rest().starts_with("/--") {
                TokenKind::DocComment
            } else if lx.rest().starts_with("/-!") {
                TokenKind::ModuleDoc
            } else {
                TokenKind::BlockComment
            };
            let open_mark = lx.mark();
            lx.bump();
            lx.bump();
            if kind != TokenKind::BlockComment {
                lx.bump();
            }
            let mut depth = 1usize;
            loop {
                if lx.rest().starts_with("-/") {
                    lx.bump();
                    lx.bump();
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                } else if lx.rest().starts_with("/-") {
                    lx.bump();
                    lx.bump();
                    depth += 1;
                } else if lx.bump().is_none() {
                    let open_span = Span::new(
                        open_mark.0,
                        open_mark.0 + 2,
                        open_mark.1,
                        open_mark.2,
                        open_mark.1,
                        open_mark.2 + 2,
                    );
                    errors.push(LexError {
                        span: open_span,
                        message: "unterminated comment".to_string(),
                    });
                    break;
                }
            }
            tokens.push(Token {
                kind,
                text: text[mark.0..lx.pos].to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        // string literals are single-line; an unterminated one ends at the
        // line break and lexing continues on the next line
        if c == '"' {
            let open_mark = lx.mark();
            lx.bump();
            let mut terminated = false;
            while let Some(c) = lx.peek() {
                if c == '\n' {
                    break;
                }
                if c == '\\' {
                    lx.bump();
                    lx.bump();
                    continue;
                }
                lx.bump();
                if c == '"' {
                    terminated = true;
                    break;
                }
            }
            if !terminated {
                errors.push(LexError {
                    span: Span::new(
                        open_mark.0,
                        open_mark.0 + 1,
                        open_mark.1,
                        open_mark.2,
                        open_mark.1,
                        open_mark.2 + 1,
                    ),
                    message: "unterminated string literal".to_string(),
                });
            }
            tokens.push(Token {
                kind: TokenKind::Str,
                text: text[mark.0..lx.pos].to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        if c.is_ascii_digit() {
            while matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
                lx.bump();
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                text: text[mark.0..lx.pos].to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        if is_ident_start(c) {
            loop {
                while matches!(lx.peek(), Some(c) if is_ident_continue(c)) {
                    lx.bump();
                }
                // dotted names (`A.B.c`, `linter.style.lineLength`) lex as one token
                if lx.peek() == Some('.') && matches!(lx.peek_at(1), Some(c) if is_ident_start(c)) {
                    lx.bump();
                    continue;
                }
                break;
            }
            let word = &text[mark.0..lx.pos];
            let kind = if KEYWORDS.contains(&word) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token {
                kind,
                text: word.to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        // multi-character symbols before their prefixes
        let multi = ["<;>", ":=", "=>"];
        if let Some(sym) = multi.iter().find(|s| lx.rest().starts_with(**s)) {
            for _ in 0..sym.chars().count() {
                lx.bump();
            }
            tokens.push(Token {
                kind: TokenKind::Symbol,
                text: (*sym).to_string(),
                span: lx.span_from(mark),
            });
            continue;
        }

        lx.bump();
        let sym_text = &text[mark.0..lx.pos];
        if !SINGLE_SYMBOLS.contains(c) {
            errors.push(LexError {
                span: lx.span_from(mark),
                message: format!("unexpected character `{}`", sym_text),
            });
        }
        tokens.push(Token {
            kind: TokenKind::Symbol,
            text: sym_text.to_string(),
            span: lx.span_from(mark),
        });
    }

    (tokens, errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(TokenKind, String)> {
        let (toks, errs) = tokenize(text);
        assert!(errs.is_empty(), "unexpected lex errors: {errs:?}");
        toks.into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn empty_input_is_just_eof() {
        let (toks, errs) = tokenize("");
        assert!(errs.is_empty());
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::Eof);
    }

    #[test]
    fn import_with_dotted_name() {
        assert_eq!(
            kinds("import A.B"),
            vec![
                (TokenKind::Keyword, "import".to_string()),
                (TokenKind::Ident, "A.B".to_string()),
                (TokenKind::Eof, String::new()),
            ]
        );
    }

    #[test]
    fn doc_comment_then_def() {
        assert_eq!(
            kinds("/-- doc -/ def x := 1"),
            vec![
                (TokenKind::DocComment, "/-- doc -/".to_string()),
                (TokenKind::Keyword, "def".to_string()),
                (TokenKind::Ident, "x".to_string()),
                (TokenKind::Symbol, ":=".to_string()),
                (TokenKind::Number, "1".to_string()),
                (TokenKind::Eof, String::new()),
            ]
        );
    }

    #[test]
    fn comment_kinds_are_distinct() {
        let toks = kinds("/- block -/ /-! module -/ /-- doc -/ -- line");
        assert_eq!(toks[0].0, TokenKind::BlockComment);
        assert_eq!(toks[1].0, TokenKind::ModuleDoc);
        assert_eq!(toks[2].0, TokenKind::DocComment);
        assert_eq!(toks[3].0, TokenKind::LineComment);
    }

    #[test]
    fn nested_block_comment() {
        let toks = kinds("/- a /- b -/ c -/ def");
        assert_eq!(toks[0].0, TokenKind::BlockComment);
        assert_eq!(toks[0].1, "/- a /- b -/ c -/");
        assert_eq!(toks[1].0, TokenKind::Keyword);
    }

    #[test]
    fn unicode_symbols() {
        let toks = kinds("λ x ↦ x · ≤ <;>");
        let syms: Vec<&str> = toks
            .iter()
            .filter(|(k, _)| *k == TokenKind::Symbol)
            .map(|(_, t)| t.as_str())
            .collect();
        assert_eq!(syms, vec!["λ", "↦", "·", "≤", "<;>"]);
    }

    #[test]
    fn unterminated_string_recovers_on_next_line() {
        let (toks, errs) = tokenize("def s := \"oops\ndef t := 1");
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("unterminated string"));
        assert_eq!(errs[0].span.line, 1);
        // lexing continued with the next line
        assert!(toks.iter().any(|t| t.is_kw("def") && t.span.line == 2));
    }

    #[test]
    fn unterminated_comment_reports_opening_span() {
        let (_, errs) = tokenize("/- never closed");
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].span.start, 0);
        assert_eq!(errs[0].span.end, 2);
    }

    #[test]
    fn tokens_partition_non_trivia() {
        let text = "def x := 1 -- c\nmore";
        let (toks, _) = tokenize(text);
        let mut reconstructed = String::new();
        let mut last = 0;
        for t in &toks {
            reconstructed.push_str(&text[last..t.span.start]);
            reconstructed.push_str(&t.text);
            last = t.span.end;
        }
        reconstructed.push_str(&text[last..]);
        assert_eq!(reconstructed, text);
        assert!(text[..toks[0].span.start].trim().is_empty());
    }
}
