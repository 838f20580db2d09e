//! Recursive-descent parser with per-command error recovery.
//!
//! Layout rules: a command owns every token on its first line, plus tokens on
//! later lines indented strictly deeper than the command's first column.
//! Tactic blocks follow the same rule relative to the command (or to the
//! focusing dot for nested `·` blocks). Tactic arguments are atomic terms;
//! applications inside tactic arguments need parentheses.
//!
//! A command that fails to parse is reported once and wrapped into an
//! `Error` command whose span runs to the next line that starts with a
//! recognizable command token, so the rest of the file still parses and the
//! byte-exact round-trip property holds.

use crate::ast::*;
use crate::diagnostics::Diagnostic;
use crate::lexer::tokenize;
use crate::rules;
use crate::span::Span;
use crate::token::{Token, TokenKind};

struct ParseAbort {
    message: String,
    span: Span,
}

fn abort(message: impl Into<String>, span: Span) -> ParseAbort {
    ParseAbort {
        message: message.into(),
        span,
    }
}

/// (line, col) anchor for layout checks.
#[derive(Clone, Copy)]
struct Anchor {
    line: u32,
    col: u32,
}

impl Anchor {
    fn of(tok: &Token) -> Self {
        Anchor {
            line: tok.span.line,
            col: tok.span.col,
        }
    }

    /// A continuation token must sit on the anchor line or be indented
    /// deeper than the anchor column.
    fn allows(&self, tok: &Token) -> bool {
        tok.span.line == self.line || tok.span.col > self.col
    }
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.toks.len() - 1
            && matches!(
                self.toks[self.pos].kind,
                TokenKind::LineComment | TokenKind::BlockComment
            )
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> &'a Token {
        self.skip_trivia();
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    /// Token after the next one, still skipping comments.
    fn peek2(&mut self) -> &'a Token {
        self.skip_trivia();
        let mut i = self.pos + 1;
        while i < self.toks.len() - 1
            && matches!(
                self.toks[i].kind,
                TokenKind::LineComment | TokenKind::BlockComment
            )
        {
            i += 1;
        }
        &self.toks[i.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> &'a Token {
        self.skip_trivia();
        let t = &self.toks[self.pos.min(self.toks.len() - 1)];
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn at_eof(&mut self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn expect_sym(&mut self, sym: &str) -> Result<&'a Token, ParseAbort> {
        let t = self.peek();
        if t.is_sym(sym) {
            Ok(self.bump())
        } else {
            Err(abort(
                format!("expected `{sym}`, found `{}`", describe(t)),
                t.span,
            ))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<Name, ParseAbort> {
        let t = self.peek();
        if t.kind == TokenKind::Ident {
            let t = self.bump();
            Ok(Name {
                text: t.text.clone(),
                span: t.span,
            })
        } else {
            Err(abort(
                format!("expected {what}, found `{}`", describe(t)),
                t.span,
            ))
        }
    }
}

fn describe(t: &Token) -> String {
    if t.kind == TokenKind::Eof {
        "end of file".to_string()
    } else {
        t.text.clone()
    }
}

fn string_content(text: &str) -> String {
    text.trim_start_matches('"')
        .trim_end_matches('"')
        .replace("\\\"", "\"")
        .replace("\\\\", "\\")
}

const COMMAND_KEYWORDS: &[&str] = &[
    "import",
    "namespace",
    "section",
    "end",
    "open",
    "set_option",
    "variable",
    "attribute",
    "def",
    "theorem",
    "lemma",
    "deprecated_module",
];

fn starts_atom(t: &Token) -> bool {
    matches!(
        t.kind,
        TokenKind::Ident | TokenKind::Number | TokenKind::Str
    ) || t.is_sym("(")
        || t.is_sym("λ")
        || t.is_kw("fun")
}

fn binop_prec(t: &Token) -> Option<u8> {
    if t.kind != TokenKind::Symbol {
        return None;
    }
    match t.text.as_str() {
        "=" | "≤" | "<" => Some(1),
        "+" | "-" => Some(2),
        "*" | "/" => Some(3),
        _ => None,
    }
}

struct Parser<'a> {
    cur: Cursor<'a>,
    diags: Vec<Diagnostic>,
}

impl<'a> Parser<'a> {
    // ----- terms ------------------------------------------------------

    fn parse_term(&mut self, anchor: Anchor) -> Result<TermSyntax, ParseAbort> {
        self.parse_binop(anchor, 0)
    }

    fn parse_binop(&mut self, anchor: Anchor, min_prec: u8) -> Result<TermSyntax, ParseAbort> {
        let mut lhs = self.parse_app(anchor)?;
        loop {
            let t = self.cur.peek();
            if !anchor.allows(t) {
                break;
            }
            let Some(prec) = binop_prec(t) else { break };
            if prec < min_prec {
                break;
            }
            let op_tok = self.cur.bump();
            let rhs = self.parse_binop(anchor, prec + 1)?;
            let span = Span::join(lhs.span, rhs.span);
            lhs = TermSyntax {
                head: TermHead::BinOp {
                    op: op_tok.text.clone(),
                    op_span: op_tok.span,
                },
                args: vec![lhs, rhs],
                span,
            };
        }
        Ok(lhs)
    }

    fn parse_app(&mut self, anchor: Anchor) -> Result<TermSyntax, ParseAbort> {
        let mut base = self.parse_atom(anchor)?;
        loop {
            let t = self.cur.peek();
            if !anchor.allows(t) || !starts_atom(t) {
                break;
            }
            let arg = self.parse_atom(anchor)?;
            base.span = Span::join(base.span, arg.span);
            // applied arguments are appended after any structural args
            // (lambda body, parenthesised inner term)
            base.args.push(arg);
        }
        Ok(base)
    }

    fn parse_atom(&mut self, anchor: Anchor) -> Result<TermSyntax, ParseAbort> {
        let t = self.cur.peek();
        if !anchor.allows(t) {
            return Err(abort("expected a term", t.span));
        }
        match t.kind {
            TokenKind::Ident => {
                let t = self.cur.bump();
                Ok(TermSyntax {
                    head: TermHead::Ident(t.text.clone()),
                    args: vec![],
                    span: t.span,
                })
            }
            TokenKind::Number => {
                let t = self.cur.bump();
                Ok(TermSyntax {
                    head: TermHead::Number(t.text.clone()),
                    args: vec![],
                    span: t.span,
                })
            }
            TokenKind::Str => {
                let t = self.cur.bump();
                Ok(TermSyntax {
                    head: TermHead::Str(string_content(&t.text)),
                    args: vec![],
                    span: t.span,
                })
            }
            _ if t.is_sym("(") => {
                let open = self.cur.bump();
                let inner = self.parse_binop(anchor, 0)?;
                let close = self.cur.expect_sym(")")?;
                Ok(TermSyntax {
                    head: TermHead::Paren,
                    args: vec![inner],
                    span: Span::join(open.span, close.span),
                })
            }
            _ if t.is_kw("fun") || t.is_sym("λ") => {
                let kw_tok = self.cur.bump();
                let kw = if kw_tok.is_kw("fun") {
                    LambdaKw::Fun
                } else {
                    LambdaKw::Lambda
                };
                let binders = self.parse_binders(anchor)?;
                if binders.is_empty() {
                    return Err(abort("expected a binder after `fun`", self.cur.peek().span));
                }
                let arrow_tok = self.cur.peek();
                let arrow = if arrow_tok.is_sym("=>") {
                    LambdaArrow::FatArrow
                } else if arrow_tok.is_sym("↦") {
                    LambdaArrow::MapsTo
                } else {
                    return Err(abort(
                        format!("expected `=>` or `↦`, found `{}`", describe(arrow_tok)),
                        arrow_tok.span,
                    ));
                };
                let arrow_tok = self.cur.bump();
                let body = self.parse_binop(anchor, 0)?;
                let span = Span::join(kw_tok.span, body.span);
                Ok(TermSyntax {
                    head: TermHead::Lambda {
                        kw,
                        kw_span: kw_tok.span,
                        arrow,
                        arrow_span: arrow_tok.span,
                        binders,
                    },
                    args: vec![body],
                    span,
                })
            }
            _ => Err(abort(
                format!("expected a term, found `{}`", describe(t)),
                t.span,
            )),
        }
    }

    fn parse_binders(&mut self, anchor: Anchor) -> Result<Vec<Binder>, ParseAbort> {
        let mut binders = Vec::new();
        loop {
            let t = self.cur.peek();
            if !anchor.allows(t) {
                break;
            }
            if t.kind == TokenKind::Ident {
                let t = self.cur.bump();
                binders.push(Binder {
                    name: t.text.clone(),
                    name_span: t.span,
                    ty: None,
                    span: t.span,
                });
            } else if t.is_sym("(") {
                let open = self.cur.bump();
                let mut names = Vec::new();
                while self.cur.peek().kind == TokenKind::Ident {
                    let n = self.cur.bump();
                    names.push((n.text.clone(), n.span));
                }
                if names.is_empty() {
                    return Err(abort("expected binder names", self.cur.peek().span));
                }
                self.cur.expect_sym(":")?;
                let ty = self.parse_term(anchor)?;
                let close = self.cur.expect_sym(")")?;
                let group_span = Span::join(open.span, close.span);
                for (name, name_span) in names {
                    binders.push(Binder {
                        name,
                        name_span,
                        ty: Some(ty.clone()),
                        span: group_span,
                    });
                }
            } else {
                break;
            }
        }
        Ok(binders)
    }

    // ----- tactics ----------------------------------------------------

    fn parse_tactic_block(&mut self, block: Anchor) -> Result<Vec<TacticSyntax>, ParseAbort> {
        let mut tactics = Vec::new();
        loop {
            let t = self.cur.peek();
            let can_start = t.kind == TokenKind::Ident || t.is_sym("·");
            if !can_start || !block.allows(t) {
                break;
            }
            tactics.push(self.parse_tactic(block)?);
            let t = self.cur.peek();
            if t.is_sym(";") && block.allows(t) {
                self.cur.bump();
            }
        }
        Ok(tactics)
    }

    fn parse_tactic(&mut self, block: Anchor) -> Result<TacticSyntax, ParseAbort> {
        let first = self.cur.peek();
        if first.is_sym("·") {
            let dot = self.cur.bump();
            let inner = self.parse_tactic_block(Anchor::of(dot))?;
            let mut span = dot.span;
            if let Some(last) = inner.last() {
                span = Span::join(span, last.span);
            }
            return Ok(TacticSyntax {
                name: "·".to_string(),
                name_span: dot.span,
                args: vec![],
                at_locations: vec![AtLocation::Goal],
                binding: None,
                combinator: Some(Combinator::FocusDot { block: inner }),
                span,
            });
        }

        let name_tok = self.cur.bump();
        if name_tok.kind != TokenKind::Ident {
            return Err(abort(
                format!("expected a tactic, found `{}`", describe(name_tok)),
                name_tok.span,
            ));
        }
        let anchor = Anchor::of(name_tok);
        let mut span = name_tok.span;
        let mut args = Vec::new();
        let mut binding = None;
        let mut at_locations = vec![AtLocation::Goal];

        if name_tok.text == "have" || name_tok.text == "let" {
            let (name, name_span) = if self.cur.peek().kind == TokenKind::Ident
                && anchor.allows(self.cur.peek())
            {
                let n = self.cur.bump();
                (n.text.clone(), n.span)
            } else {
                ("this".to_string(), name_tok.span)
            };
            let ty = if self.cur.peek().is_sym(":") && anchor.allows(self.cur.peek()) {
                self.cur.bump();
                Some(self.parse_term(anchor)?)
            } else {
                None
            };
            let value = if self.cur.peek().is_sym(":=") && anchor.allows(self.cur.peek()) {
                self.cur.bump();
                Some(self.parse_term(anchor)?)
            } else {
                None
            };
            if let Some(t) = &ty {
                span = Span::join(span, t.span);
            }
            if let Some(v) = &value {
                span = Span::join(span, v.span);
            }
            binding = Some(TacticBinding {
                name,
                name_span,
                ty,
                value,
            });
        } else {
            loop {
                let t = self.cur.peek();
                if !anchor.allows(t) || !starts_atom(t) {
                    break;
                }
                let arg = self.parse_atom(anchor)?;
                span = Span::join(span, arg.span);
                args.push(arg);
            }
            let t = self.cur.peek();
            if t.is_kw("at") && anchor.allows(t) {
                self.cur.bump();
                let loc_tok = self.cur.peek();
                if loc_tok.is_sym("*") {
                    let t = self.cur.bump();
                    span = Span::join(span, t.span);
                    at_locations = vec![AtLocation::Wildcard];
                } else {
                    let mut locs = Vec::new();
                    while self.cur.peek().kind == TokenKind::Ident
                        && anchor.allows(self.cur.peek())
                    {
                        let n = self.cur.bump();
                        span = Span::join(span, n.span);
                        locs.push(AtLocation::Hypothesis(Name {
                            text: n.text.clone(),
                            span: n.span,
                        }));
                    }
                    if locs.is_empty() {
                        return Err(abort(
                            "expected `*` or hypothesis names after `at`",
                            self.cur.peek().span,
                        ));
                    }
                    at_locations = locs;
                }
            }
        }

        let mut combinator = None;
        let t = self.cur.peek();
        if t.is_sym("<;>") && anchor.allows(t) {
            let op = self.cur.bump();
            let rhs = self.parse_tactic(block)?;
            span = Span::join(span, rhs.span);
            combinator = Some(Combinator::SeqFocus {
                op_span: op.span,
                rhs: Box::new(rhs),
            });
        }

        Ok(TacticSyntax {
            name: name_tok.text.clone(),
            name_span: name_tok.span,
            args,
            at_locations,
            binding,
            combinator,
            span,
        })
    }

    // ----- attributes and clauses --------------------------------------

    fn parse_since(&mut self) -> Result<SinceClause, ParseAbort> {
        let open = self.cur.expect_sym("(")?;
        let kw = self.cur.expect_ident("`since`")?;
        if kw.text != "since" {
            return Err(abort("expected `since`", kw.span));
        }
        self.cur.expect_sym(":=")?;
        let t = self.cur.peek();
        if t.kind != TokenKind::Str {
            return Err(abort("expected a date string after `since :=`", t.span));
        }
        let date_tok = self.cur.bump();
        let close = self.cur.expect_sym(")")?;
        Ok(SinceClause {
            date: string_content(&date_tok.text),
            span: Span::join(open.span, close.span),
        })
    }

    fn parse_attr(&mut self) -> Result<AttributeSyntax, ParseAbort> {
        let first = self.cur.peek();
        let mut is_local = false;
        let mut start_span = first.span;
        if first.kind == TokenKind::Ident
            && first.text == "local"
            && self.cur.peek2().kind == TokenKind::Ident
        {
            let t = self.cur.bump();
            start_span = t.span;
            is_local = true;
        }
        let name = self.cur.expect_ident("an attribute name")?;
        if !is_local {
            start_span = name.span;
        }
        let mut end_span = name.span;
        let mut args = Vec::new();
        let mut replacement = None;
        let mut message = None;
        let mut since = None;
        if name.text == "deprecated" {
            if self.cur.peek().kind == TokenKind::Ident {
                let n = self.cur.bump();
                end_span = n.span;
                replacement = Some(Name {
                    text: n.text.clone(),
                    span: n.span,
                });
            }
            if self.cur.peek().kind == TokenKind::Str {
                let s = self.cur.bump();
                end_span = s.span;
                message = Some(string_content(&s.text));
            }
            if self.cur.peek().is_sym("(") {
                let clause = self.parse_since()?;
                end_span = clause.span;
                since = Some(clause);
            }
        } else {
            while matches!(
                self.cur.peek().kind,
                TokenKind::Ident | TokenKind::Number
            ) {
                let t = self.cur.bump();
                end_span = t.span;
                args.push(Name {
                    text: t.text.clone(),
                    span: t.span,
                });
            }
        }
        Ok(AttributeSyntax {
            name: name.text,
            name_span: name.span,
            is_local,
            args,
            replacement,
            message,
            since,
            span: Span::join(start_span, end_span),
        })
    }

    fn parse_attr_list(&mut self) -> Result<Vec<AttributeSyntax>, ParseAbort> {
        self.cur.expect_sym("[")?;
        let mut attrs = vec![self.parse_attr()?];
        while self.cur.peek().is_sym(",") {
            self.cur.bump();
            attrs.push(self.parse_attr()?);
        }
        self.cur.expect_sym("]")?;
        Ok(attrs)
    }

    // ----- commands -----------------------------------------------------

    fn parse_decl(
        &mut self,
        anchor: Anchor,
        start_span: Span,
        doc: Option<DocString>,
        attrs: Vec<AttributeSyntax>,
    ) -> Result<SyntaxCommand, ParseAbort> {
        let kw_tok = self.cur.bump();
        let kind = match kw_tok.text.as_str() {
            "def" => DeclKind::Def,
            "theorem" => DeclKind::Theorem,
            "lemma" => DeclKind::Lemma,
            _ => return Err(abort("expected `def`, `theorem` or `lemma`", kw_tok.span)),
        };
        let name = self.cur.expect_ident("a declaration name")?;
        let binders = self.parse_binders(anchor)?;
        let ty = if self.cur.peek().is_sym(":") && anchor.allows(self.cur.peek()) {
            self.cur.bump();
            Some(self.parse_term(anchor)?)
        } else {
            None
        };
        self.cur.expect_sym(":=")?;
        let (body, body_span) = if self.cur.peek().is_kw("by") {
            let by_tok = self.cur.bump();
            let tactics = self.parse_tactic_block(Anchor {
                line: by_tok.span.line,
                col: anchor.col,
            })?;
            let mut span = by_tok.span;
            if let Some(last) = tactics.last() {
                span = Span::join(span, last.span);
            }
            (DeclBody::Tactics(tactics), span)
        } else {
            let t = self.parse_term(anchor)?;
            let span = t.span;
            (DeclBody::Term(t), span)
        };
        Ok(SyntaxCommand {
            kind: CommandKind::Declaration(DeclSyntax {
                kind,
                name,
                binders,
                ty,
                body,
            }),
            span: Span::join(start_span, body_span),
            doc_string: doc,
            attributes: attrs,
        })
    }

    fn parse_command(&mut self) -> Result<SyntaxCommand, ParseAbort> {
        let first = self.cur.peek();
        let anchor = Anchor::of(first);
        let start_span = first.span;

        let simple = |kind: CommandKind, span: Span| SyntaxCommand {
            kind,
            span,
            doc_string: None,
            attributes: Vec::new(),
        };

        match first.kind {
            TokenKind::ModuleDoc => {
                let t = self.cur.bump();
                return Ok(simple(CommandKind::ModuleDoc, t.span));
            }
            TokenKind::DocComment => {
                let doc_tok = self.cur.bump();
                let doc = DocString {
                    text: doc_tok.text.clone(),
                    span: doc_tok.span,
                };
                let mut attrs = Vec::new();
                if self.cur.peek().is_sym("@") {
                    self.cur.bump();
                    attrs = self.parse_attr_list()?;
                }
                let t = self.cur.peek();
                if t.is_kw("def") || t.is_kw("theorem") || t.is_kw("lemma") {
                    return self.parse_decl(anchor, doc_tok.span, Some(doc), attrs);
                }
                return Err(abort(
                    "expected a declaration after a doc comment",
                    t.span,
                ));
            }
            _ => {}
        }

        if first.is_sym("@") {
            self.cur.bump();
            let attrs = self.parse_attr_list()?;
            let t = self.cur.peek();
            if t.is_kw("def") || t.is_kw("theorem") || t.is_kw("lemma") {
                return self.parse_decl(anchor, start_span, None, attrs);
            }
            return Err(abort(
                "expected a declaration after an attribute list",
                t.span,
            ));
        }

        if first.kind != TokenKind::Keyword {
            return Err(abort(
                format!("expected a command, found `{}`", describe(first)),
                first.span,
            ));
        }

        match first.text.as_str() {
            "import" => {
                let kw = self.cur.bump();
                let module = self.cur.expect_ident("a module name")?;
                let span = Span::join(kw.span, module.span);
                Ok(simple(CommandKind::Import { module }, span))
            }
            "namespace" => {
                let kw = self.cur.bump();
                let name = self.cur.expect_ident("a namespace name")?;
                let span = Span::join(kw.span, name.span);
                Ok(simple(CommandKind::NamespaceOpen { name }, span))
            }
            "section" => {
                let kw = self.cur.bump();
                let name = if self.cur.peek().kind == TokenKind::Ident
                    && self.cur.peek().span.line == kw.span.line
                {
                    let n = self.cur.bump();
                    Some(Name {
                        text: n.text.clone(),
                        span: n.span,
                    })
                } else {
                    None
                };
                let span = name
                    .as_ref()
                    .map(|n| Span::join(kw.span, n.span))
                    .unwrap_or(kw.span);
                Ok(simple(CommandKind::SectionOpen { name }, span))
            }
            "end" => {
                let kw = self.cur.bump();
                let name = if self.cur.peek().kind == TokenKind::Ident
                    && self.cur.peek().span.line == kw.span.line
                {
                    let n = self.cur.bump();
                    Some(Name {
                        text: n.text.clone(),
                        span: n.span,
                    })
                } else {
                    None
                };
                let span = name
                    .as_ref()
                    .map(|n| Span::join(kw.span, n.span))
                    .unwrap_or(kw.span);
                Ok(simple(CommandKind::End { name }, span))
            }
            "open" => {
                let kw = self.cur.bump();
                let mut namespaces = Vec::new();
                while self.cur.peek().kind == TokenKind::Ident && anchor.allows(self.cur.peek()) {
                    let n = self.cur.bump();
                    namespaces.push(Name {
                        text: n.text.clone(),
                        span: n.span,
                    });
                }
                if namespaces.is_empty() {
                    return Err(abort("expected namespaces to open", self.cur.peek().span));
                }
                let mut span = Span::join(kw.span, namespaces.last().unwrap().span);
                let scoped = if self.cur.peek().is_kw("in") && anchor.allows(self.cur.peek()) {
                    self.cur.bump();
                    let child = self.parse_command()?;
                    span = Span::join(span, child.span);
                    Some(Box::new(child))
                } else {
                    None
                };
                Ok(simple(CommandKind::Open { namespaces, scoped }, span))
            }
            "set_option" => {
                let kw = self.cur.bump();
                let option = self.cur.expect_ident("an option name")?;
                let val_tok = self.cur.peek();
                let value = match val_tok.kind {
                    TokenKind::Number => {
                        OptionValue::Nat(val_tok.text.parse::<u64>().unwrap_or(u64::MAX))
                    }
                    TokenKind::Ident if val_tok.text == "true" => OptionValue::Bool(true),
                    TokenKind::Ident if val_tok.text == "false" => OptionValue::Bool(false),
                    TokenKind::Ident => OptionValue::Text(val_tok.text.clone()),
                    TokenKind::Str => OptionValue::Text(string_content(&val_tok.text)),
                    _ => {
                        return Err(abort(
                            format!("expected an option value, found `{}`", describe(val_tok)),
                            val_tok.span,
                        ))
                    }
                };
                let val_tok = self.cur.bump();
                let mut span = Span::join(kw.span, val_tok.span);
                let scoped = if self.cur.peek().is_kw("in") && anchor.allows(self.cur.peek()) {
                    self.cur.bump();
                    let child = self.parse_command()?;
                    span = Span::join(span, child.span);
                    Some(Box::new(child))
                } else {
                    None
                };
                Ok(simple(
                    CommandKind::SetOption {
                        option,
                        value,
                        value_span: val_tok.span,
                        scoped,
                    },
                    span,
                ))
            }
            "variable" => {
                let kw = self.cur.bump();
                let binders = self.parse_binders(anchor)?;
                if binders.is_empty() {
                    return Err(abort("expected binders after `variable`", self.cur.peek().span));
                }
                let span = Span::join(kw.span, binders.last().unwrap().span);
                Ok(simple(CommandKind::Variable { binders }, span))
            }
            "attribute" => {
                let kw = self.cur.bump();
                let attrs = self.parse_attr_list()?;
                let target = self.cur.expect_ident("an attribute target")?;
                let mut span = Span::join(kw.span, target.span);
                let scoped = if self.cur.peek().is_kw("in") && anchor.allows(self.cur.peek()) {
                    self.cur.bump();
                    let child = self.parse_command()?;
                    span = Span::join(span, child.span);
                    Some(Box::new(child))
                } else {
                    None
                };
                Ok(simple(
                    CommandKind::AttributeCmd {
                        attrs,
                        target,
                        scoped,
                    },
                    span,
                ))
            }
            "def" | "theorem" | "lemma" => self.parse_decl(anchor, start_span, None, Vec::new()),
            "deprecated_module" => {
                let kw = self.cur.bump();
                let mut span = kw.span;
                let message = if self.cur.peek().kind == TokenKind::Str {
                    let s = self.cur.bump();
                    span = Span::join(span, s.span);
                    Some(string_content(&s.text))
                } else {
                    None
                };
                let since = if self.cur.peek().is_sym("(") {
                    let clause = self.parse_since()?;
                    span = Span::join(span, clause.span);
                    Some(clause)
                } else {
                    None
                };
                Ok(simple(CommandKind::DeprecatedModule { message, since }, span))
            }
            other => Err(abort(
                format!("`{other}` cannot start a command here"),
                first.span,
            )),
        }
    }
}

fn is_line_initial(toks: &[Token], i: usize) -> bool {
    i == 0 || toks[i - 1].span.end_line < toks[i].span.line
}

fn is_recovery_start(t: &Token) -> bool {
    (t.kind == TokenKind::Keyword && COMMAND_KEYWORDS.contains(&t.text.as_str()))
        || t.kind == TokenKind::DocComment
        || t.kind == TokenKind::ModuleDoc
        || t.is_sym("@")
}

/// Parse one file into its command stream.
///
/// Never aborts on a malformed command: each one is reported with a single
/// `parse.error` diagnostic and wrapped as an `Error` command, and parsing
/// resumes at the next line starting a recognizable command.
pub fn parse_module(text: &str) -> (Vec<SyntaxCommand>, Vec<Diagnostic>) {
    let (tokens, lex_errors) = tokenize(text);
    let mut diags: Vec<Diagnostic> = lex_errors
        .into_iter()
        .map(|e| {
            Diagnostic::new(
                "parse.error",
                rules::default_severity("parse.error"),
                e.span,
                e.message,
            )
        })
        .collect();

    let mut commands = Vec::new();
    let mut parser = Parser {
        cur: Cursor::new(&tokens),
        diags: Vec::new(),
    };

    // A block comment opening the file is the copyright header slot.
    if tokens
        .first()
        .is_some_and(|t| t.kind == TokenKind::BlockComment)
    {
        commands.push(SyntaxCommand {
            kind: CommandKind::CopyrightHeader,
            span: tokens[0].span,
            doc_string: None,
            attributes: Vec::new(),
        });
        parser.cur.pos = 1;
    }

    while !parser.cur.at_eof() {
        parser.cur.skip_trivia();
        if parser.cur.at_eof() {
            break;
        }
        let start_pos = parser.cur.pos;
        match parser.parse_command() {
            Ok(cmd) => commands.push(cmd),
            Err(e) => {
                diags.push(Diagnostic::new(
                    "parse.error",
                    rules::default_severity("parse.error"),
                    e.span,
                    e.message,
                ));
                if parser.cur.pos == start_pos {
                    parser.cur.pos += 1;
                }
                let mut i = parser.cur.pos.max(start_pos + 1);
                let eof_idx = tokens.len() - 1;
                while i < eof_idx {
                    if is_line_initial(&tokens, i) && is_recovery_start(&tokens[i]) {
                        break;
                    }
                    i += 1;
                }
                let end_idx = i.min(eof_idx);
                parser.cur.pos = end_idx;
                let span = if end_idx > start_pos {
                    Span::join(tokens[start_pos].span, tokens[end_idx - 1].span)
                } else {
                    tokens[start_pos].span
                };
                commands.push(SyntaxCommand {
                    kind: CommandKind::Error,
                    span,
                    doc_string: None,
                    attributes: Vec::new(),
                });
            }
        }
    }
    diags.extend(parser.diags.drain(..));

    // imports must come before everything except the header and module docs
    let mut body_seen = false;
    for cmd in &commands {
        match &cmd.kind {
            CommandKind::CopyrightHeader | CommandKind::ModuleDoc | CommandKind::Error => {}
            CommandKind::Import { .. } => {
                if body_seen {
                    diags.push(Diagnostic::new(
                        "parse.importOrder",
                        rules::default_severity("parse.importOrder"),
                        cmd.span,
                        "imports must appear before all other commands",
                    ));
                }
            }
            _ => body_seen = true,
        }
    }

    (commands, diags)
}

/// Rebuild the source of a parsed file from its command spans plus the
/// trivia between them. For any successfully parsed file this reproduces the
/// input byte-for-byte.
pub fn reconstruct_source(text: &str, commands: &[SyntaxCommand]) -> String {
    let mut out = String::new();
    let mut last = 0;
    for cmd in commands {
        out.push_str(&text[last..cmd.span.start]);
        out.push_str(&text[cmd.span.start..cmd.span.end]);
        last = cmd.span.end;
    }
    out.push_str(&text[last..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(text: &str) -> Vec<SyntaxCommand> {
        let (cmds, diags) = parse_module(text);
        assert!(diags.is_empty(), "unexpected diagnostics: {diags:#?}");
        cmds
    }

    #[test]
    fn section_end_pair() {
        let cmds = parse_ok("section\nend");
        assert_eq!(cmds.len(), 2);
        assert!(matches!(cmds[0].kind, CommandKind::SectionOpen { name: None }));
        assert!(matches!(cmds[1].kind, CommandKind::End { name: None }));
    }

    #[test]
    fn scoped_set_option_wraps_next_command() {
        let cmds = parse_ok("set_option maxHeartbeats 5000000 in\ndef f := 1");
        assert_eq!(cmds.len(), 1);
        match &cmds[0].kind {
            CommandKind::SetOption { option, value, scoped, .. } => {
                assert_eq!(option.text, "maxHeartbeats");
                assert_eq!(*value, OptionValue::Nat(5_000_000));
                let child = scoped.as_deref().expect("scoped child");
                assert!(matches!(child.kind, CommandKind::Declaration(_)));
            }
            other => panic!("expected set_option, got {other:?}"),
        }
    }

    #[test]
    fn malformed_decl_recovers_with_one_diagnostic() {
        let (cmds, diags) = parse_module("def := :=");
        assert_eq!(cmds.len(), 1);
        assert!(matches!(cmds[0].kind, CommandKind::Error));
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, "parse.error");
    }

    #[test]
    fn recovery_resumes_at_next_command_line() {
        let text = "def := :=\ndef ok := 1";
        let (cmds, diags) = parse_module(text);
        assert_eq!(diags.len(), 1);
        assert_eq!(cmds.len(), 2);
        assert!(matches!(cmds[0].kind, CommandKind::Error));
        assert!(matches!(cmds[1].kind, CommandKind::Declaration(_)));
    }

    #[test]
    fn late_import_is_flagged() {
        let (_, diags) = parse_module("def x := 1\nimport A");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, "parse.importOrder");
    }

    #[test]
    fn header_module_doc_and_imports_keep_order() {
        let text = "/-\nCopyright (c) 2024 A. All rights reserved.\nReleased under Apache 2.0 license as described in the file LICENSE.\nAuthors: A\n-/\n/-! Docs. -/\nimport A.B\nimport C\n";
        let cmds = parse_ok(text);
        assert!(matches!(cmds[0].kind, CommandKind::CopyrightHeader));
        assert!(matches!(cmds[1].kind, CommandKind::ModuleDoc));
        assert!(matches!(cmds[2].kind, CommandKind::Import { .. }));
        assert!(matches!(cmds[3].kind, CommandKind::Import { .. }));
    }

    #[test]
    fn decl_with_doc_attrs_binders_and_type() {
        let text = "/-- Adds. -/\n@[simp, deprecated New.add \"use the new one\" (since := \"2024-01-02\")]\ndef Old.add (a b : Nat) : Nat := a + b";
        let cmds = parse_ok(text);
        assert_eq!(cmds.len(), 1);
        let cmd = &cmds[0];
        assert!(cmd.doc_string.is_some());
        assert_eq!(cmd.attributes.len(), 2);
        assert_eq!(cmd.attributes[0].name, "simp");
        let dep = &cmd.attributes[1];
        assert_eq!(dep.name, "deprecated");
        assert_eq!(dep.replacement.as_ref().unwrap().text, "New.add");
        assert_eq!(dep.message.as_deref(), Some("use the new one"));
        assert_eq!(dep.since.as_ref().unwrap().date, "2024-01-02");
        match &cmd.kind {
            CommandKind::Declaration(d) => {
                assert_eq!(d.name.text, "Old.add");
                assert_eq!(d.binders.len(), 2);
                assert!(d.ty.is_some());
                assert!(matches!(d.body, DeclBody::Term(_)));
            }
            other => panic!("expected declaration, got {other:?}"),
        }
    }

    #[test]
    fn lambda_notation_is_recorded() {
        let cmds = parse_ok("def f := λ x => x");
        let CommandKind::Declaration(d) = &cmds[0].kind else {
            panic!()
        };
        let DeclBody::Term(t) = &d.body else { panic!() };
        let TermHead::Lambda { kw, arrow, .. } = &t.head else {
            panic!("expected lambda, got {:?}", t.head)
        };
        assert_eq!(*kw, LambdaKw::Lambda);
        assert_eq!(*arrow, LambdaArrow::FatArrow);
    }

    #[test]
    fn tactic_block_with_focus_dots_and_seq() {
        let text = "theorem t : True := by\n  constructor\n  · trivial\n  · simp at h1 h2 <;> rfl";
        let cmds = parse_ok(text);
        let CommandKind::Declaration(d) = &cmds[0].kind else {
            panic!()
        };
        let DeclBody::Tactics(ts) = &d.body else { panic!() };
        assert_eq!(ts.len(), 3);
        assert_eq!(ts[0].name, "constructor");
        assert!(ts[1].is_focus_dot());
        let Some(Combinator::FocusDot { block }) = &ts[2].combinator else {
            panic!()
        };
        assert_eq!(block.len(), 1);
        assert_eq!(block[0].name, "simp");
        assert_eq!(block[0].at_locations.len(), 2);
        assert!(matches!(
            block[0].combinator,
            Some(Combinator::SeqFocus { .. })
        ));
    }

    #[test]
    fn nested_focus_blocks_close_by_column() {
        let text = "theorem t : True := by\n  constructor\n  · constructor\n    · trivial\n    · trivial\n  · trivial";
        let cmds = parse_ok(text);
        let CommandKind::Declaration(d) = &cmds[0].kind else {
            panic!()
        };
        let DeclBody::Tactics(ts) = &d.body else { panic!() };
        assert_eq!(ts.len(), 3);
        let Some(Combinator::FocusDot { block }) = &ts[1].combinator else {
            panic!()
        };
        assert_eq!(block.len(), 3); // constructor + two nested dots
    }

    #[test]
    fn have_tactic_binding() {
        let text = "theorem t : True := by\n  have n : Nat := 3\n  trivial";
        let cmds = parse_ok(text);
        let CommandKind::Declaration(d) = &cmds[0].kind else {
            panic!()
        };
        let DeclBody::Tactics(ts) = &d.body else { panic!() };
        let b = ts[0].binding.as_ref().expect("binding");
        assert_eq!(b.name, "n");
        assert_eq!(b.ty.as_ref().unwrap().head_symbol(), Some("Nat"));
    }

    #[test]
    fn deprecated_module_stub() {
        let cmds = parse_ok("deprecated_module \"moved to Foo.Core\" (since := \"2025-02-02\")");
        match &cmds[0].kind {
            CommandKind::DeprecatedModule { message, since } => {
                assert_eq!(message.as_deref(), Some("moved to Foo.Core"));
                assert_eq!(since.as_ref().unwrap().date, "2025-02-02");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let text = "/-\nCopyright (c) 2024 A. All rights reserved.\nReleased under Apache 2.0 license as described in the file LICENSE.\nAuthors: A\n-/\n/-! M -/\nimport A\n\n-- a comment between commands\nnamespace Foo\n/-- doc -/\ndef bar (x : Nat) : Nat := x + 1\nend Foo\n";
        let (cmds, diags) = parse_module(text);
        assert!(diags.is_empty());
        assert_eq!(reconstruct_source(text, &cmds), text);
    }

    #[test]
    fn round_trip_with_parse_errors() {
        let text = "def := :=\n??? what\ndef ok := 1\n";
        let (cmds, _) = parse_module(text);
        assert_eq!(reconstruct_source(text, &cmds), text);
    }

    #[test]
    fn diagnostics_bounded_by_lines() {
        let text = "def := :=\n] ] ]\n:= :=\nwat wat\n";
        let (_, diags) = parse_module(text);
        assert!(diags.len() <= text.lines().count());
    }

    #[test]
    fn commands_have_ordered_disjoint_spans() {
        let text = "import A\nsection\nopen Classical in\ndef f := 1\nend\n";
        let (cmds, _) = parse_module(text);
        let mut last_end = 0;
        for c in &cmds {
            assert!(c.span.start >= last_end);
            assert!(c.span.end >= c.span.start);
            last_end = c.span.end;
        }
    }
}
