//! Syntax tree for the mini-language.
//!
//! Every node carries the span of the exact source slice it was parsed from;
//! sibling spans are ordered and non-overlapping, so a file reconstructs
//! byte-for-byte from its command spans plus the whitespace between them.

use crate::span::Span;

/// An identifier (possibly dotted) with its source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

/// A doc comment, including its `/--`/`-/` delimiters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocString {
    pub text: String,
    pub span: Span,
}

/// The `(since := "YYYY-MM-DD")` clause of deprecation markers. The date is
/// kept raw here; validity is checked when the entry is registered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinceClause {
    pub date: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptionValue {
    Bool(bool),
    Nat(u64),
    Text(String),
}

impl std::fmt::Display for OptionValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OptionValue::Bool(b) => write!(f, "{b}"),
            OptionValue::Nat(n) => write!(f, "{n}"),
            OptionValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// One attribute inside `@[...]` or an `attribute [...]` command.
///
/// `deprecated` attributes get their pieces parsed out: replacement name,
/// message string and since-clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSyntax {
    pub name: String,
    pub name_span: Span,
    pub is_local: bool,
    pub args: Vec<Name>,
    pub replacement: Option<Name>,
    pub message: Option<String>,
    pub since: Option<SinceClause>,
    pub span: Span,
}

impl AttributeSyntax {
    pub fn is_deprecated(&self) -> bool {
        self.name == "deprecated"
    }

    /// `@[nolint rule]` matches a rule either by its full dotted name or by
    /// its final segment (`dupNamespace` for `naming.dupNamespace`).
    pub fn nolint_matches(&self, rule: &str) -> bool {
        self.name == "nolint"
            && self.args.iter().any(|a| {
                a.text == rule || Some(a.text.as_str()) == rule.rsplit('.').next()
            })
    }
}

/// `x` or one name out of `(x y : T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub name_span: Span,
    pub ty: Option<TermSyntax>,
    pub span: Span,
}

/// Which surface notation a lambda used; the deprecated-syntax linter cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaKw {
    /// `fun`
    Fun,
    /// `λ`
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaArrow {
    /// `=>`
    FatArrow,
    /// `↦`
    MapsTo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermHead {
    Ident(String),
    Number(String),
    Str(String),
    Lambda {
        kw: LambdaKw,
        kw_span: Span,
        arrow: LambdaArrow,
        arrow_span: Span,
        binders: Vec<Binder>,
    },
    BinOp {
        op: String,
        op_span: Span,
    },
    Paren,
}

/// A term. Applications are flattened (`f x y` has head `f`, args `[x, y]`),
/// binary operators have exactly two args, lambdas keep the body in `args[0]`,
/// parenthesised terms keep the inner term in `args[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSyntax {
    pub head: TermHead,
    pub args: Vec<TermSyntax>,
    pub span: Span,
}

impl TermSyntax {
    /// Head symbol with parens unwrapped: the thing `pedagogy.*` linters
    /// classify (`Nat`, `=`, `≤`, ...).
    pub fn head_symbol(&self) -> Option<&str> {
        match &self.head {
            TermHead::Ident(n) => Some(n),
            TermHead::BinOp { op, .. } => Some(op),
            TermHead::Paren => self.args.first().and_then(|t| t.head_symbol()),
            _ => None,
        }
    }

    /// Ident name if this term is a bare (possibly parenthesised) identifier.
    pub fn as_ident(&self) -> Option<&str> {
        match &self.head {
            TermHead::Ident(n) if self.args.is_empty() => Some(n),
            TermHead::Paren => self.args.first().and_then(|t| t.as_ident()),
            _ => None,
        }
    }

    /// Depth-first walk over this term and all subterms.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a TermSyntax)) {
        f(self);
        if let TermHead::Lambda { binders, .. } = &self.head {
            for b in binders {
                if let Some(ty) = &b.ty {
                    ty.walk(f);
                }
            }
        }
        for a in &self.args {
            a.walk(f);
        }
    }
}

/// Where a tactic acts: the main goal, one hypothesis, or everything (`at *`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtLocation {
    Goal,
    Wildcard,
    Hypothesis(Name),
}

/// Name/type/value of a `have h : T := v` or `let h : T := v` tactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TacticBinding {
    pub name: String,
    pub name_span: Span,
    pub ty: Option<TermSyntax>,
    pub value: Option<TermSyntax>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combinator {
    /// `t1 <;> t2`: apply `t2` to every goal produced by `t1`.
    SeqFocus {
        op_span: Span,
        rhs: Box<TacticSyntax>,
    },
    /// `· t1; t2 ...`: focus the first goal and run the nested block on it.
    FocusDot { block: Vec<TacticSyntax> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TacticSyntax {
    /// Tactic identifier, or `"·"` for a focusing dot.
    pub name: String,
    pub name_span: Span,
    pub args: Vec<TermSyntax>,
    /// Defaults to `[Goal]` when no `at` clause is written.
    pub at_locations: Vec<AtLocation>,
    pub binding: Option<TacticBinding>,
    pub combinator: Option<Combinator>,
    pub span: Span,
}

impl TacticSyntax {
    pub fn is_focus_dot(&self) -> bool {
        matches!(self.combinator, Some(Combinator::FocusDot { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Def,
    Theorem,
    Lemma,
}

impl std::fmt::Display for DeclKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeclKind::Def => write!(f, "def"),
            DeclKind::Theorem => write!(f, "theorem"),
            DeclKind::Lemma => write!(f, "lemma"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclBody {
    Term(TermSyntax),
    /// `:= by <tactics>`
    Tactics(Vec<TacticSyntax>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclSyntax {
    pub kind: DeclKind,
    pub name: Name,
    pub binders: Vec<Binder>,
    pub ty: Option<TermSyntax>,
    pub body: DeclBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandKind {
    /// The leading `/- Copyright ... -/` block comment of a file.
    CopyrightHeader,
    /// `/-! ... -/`
    ModuleDoc,
    Import {
        module: Name,
    },
    NamespaceOpen {
        name: Name,
    },
    SectionOpen {
        name: Option<Name>,
    },
    End {
        name: Option<Name>,
    },
    Open {
        namespaces: Vec<Name>,
        scoped: Option<Box<SyntaxCommand>>,
    },
    SetOption {
        option: Name,
        value: OptionValue,
        value_span: Span,
        scoped: Option<Box<SyntaxCommand>>,
    },
    Variable {
        binders: Vec<Binder>,
    },
    AttributeCmd {
        attrs: Vec<AttributeSyntax>,
        target: Name,
        scoped: Option<Box<SyntaxCommand>>,
    },
    Declaration(DeclSyntax),
    DeprecatedModule {
        message: Option<String>,
        since: Option<SinceClause>,
    },
    /// Wrapper for source the parser could not make sense of; recovery keeps
    /// the raw span so round-tripping still works.
    Error,
}

/// One top-level command with its attributes and optional doc string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxCommand {
    pub kind: CommandKind,
    pub span: Span,
    pub doc_string: Option<DocString>,
    pub attributes: Vec<AttributeSyntax>,
}

impl SyntaxCommand {
    /// The command scoped under this one by `... in`, if any.
    pub fn scoped_child(&self) -> Option<&SyntaxCommand> {
        match &self.kind {
            CommandKind::Open { scoped, .. }
            | CommandKind::SetOption { scoped, .. }
            | CommandKind::AttributeCmd { scoped, .. } => scoped.as_deref(),
            _ => None,
        }
    }

    /// All terms directly owned by this command (not by scoped children):
    /// binder types, type ascriptions, bodies, tactic arguments.
    pub fn walk_terms<'a>(&'a self, f: &mut impl FnMut(&'a TermSyntax)) {
        fn walk_binders<'a>(binders: &'a [Binder], f: &mut impl FnMut(&'a TermSyntax)) {
            for b in binders {
                if let Some(ty) = &b.ty {
                    ty.walk(f);
                }
            }
        }
        fn walk_tactics<'a>(tactics: &'a [TacticSyntax], f: &mut impl FnMut(&'a TermSyntax)) {
            for t in tactics {
                for a in &t.args {
                    a.walk(f);
                }
                if let Some(b) = &t.binding {
                    if let Some(ty) = &b.ty {
                        ty.walk(f);
                    }
                    if let Some(v) = &b.value {
                        v.walk(f);
                    }
                }
                match &t.combinator {
                    Some(Combinator::SeqFocus { rhs, .. }) => {
                        walk_tactics(std::slice::from_ref(rhs), f)
                    }
                    Some(Combinator::FocusDot { block }) => walk_tactics(block, f),
                    None => {}
                }
            }
        }
        match &self.kind {
            CommandKind::Variable { binders } => walk_binders(binders, f),
            CommandKind::Declaration(d) => {
                walk_binders(&d.binders, f);
                if let Some(ty) = &d.ty {
                    ty.walk(f);
                }
                match &d.body {
                    DeclBody::Term(t) => t.walk(f),
                    DeclBody::Tactics(ts) => walk_tactics(ts, f),
                }
            }
            _ => {}
        }
    }
}

/// Commands in evaluation order: each command followed by its scoped child
/// (recursively). Scope traces produced by the environment are parallel to
/// this flattening.
pub fn flatten_commands(commands: &[SyntaxCommand]) -> Vec<&SyntaxCommand> {
    let mut out = Vec::new();
    fn push<'a>(cmd: &'a SyntaxCommand, out: &mut Vec<&'a SyntaxCommand>) {
        out.push(cmd);
        if let Some(child) = cmd.scoped_child() {
            push(child, out);
        }
    }
    for c in commands {
        push(c, &mut out);
    }
    out
}
