//! Tactic-flow linters: a small abstract interpreter over tactic blocks.
//!
//! Goal counts are simulated from declared per-tactic effects (no elaborator
//! exists here): a tactic consumes the first goal and replaces it with its
//! yield - 0 for closers, 1 for keepers, k for splitters. `·` focuses one
//! goal and contributes whatever its block leaves open; `t1 <;> t2` applies
//! `t2` to every goal `t1` produced. Flexibility staining follows the same
//! walk: flexible tactics stain the locations they modify, rigid tactics
//! warn when acting on stained locations, normalizing tactics wipe stains.
//!
//! Unknown tactics are neutral and keep the goal count, so ignorance never
//! produces false positives.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::*;
use crate::diagnostics::Diagnostic;
use crate::environment::ScopeState;
use crate::lint::{CommandLinter, LintContext};
use crate::rules;
use crate::span::Span;

// ---------------------------------------------------------------------------
// tactic metadata
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flexibility {
    Flexible,
    Rigid,
    Normalizing,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalEffect {
    Closes,
    Keeps,
    Splits(u32),
    /// Keeps the goal and binds new hypothesis names (intro, have, let).
    Introduces,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TacticInfo {
    pub flexibility: Flexibility,
    pub goal_effect: GoalEffect,
    pub noop: bool,
}

impl Default for TacticInfo {
    fn default() -> Self {
        TacticInfo {
            flexibility: Flexibility::Neutral,
            goal_effect: GoalEffect::Keeps,
            noop: false,
        }
    }
}

/// Declared behaviour per tactic name. Effects are configuration, not
/// inference; `[tactics]` in the config file extends or overrides this.
#[derive(Debug, Clone, PartialEq)]
pub struct TacticTable {
    map: BTreeMap<String, TacticInfo>,
}

impl Default for TacticTable {
    fn default() -> Self {
        let mut t = TacticTable {
            map: BTreeMap::new(),
        };
        for name in ["simp", "norm_num", "aesop", "measurability", "fun_prop"] {
            t.set_flexibility(name, Flexibility::Flexible);
        }
        for name in ["ring", "omega", "field_simp"] {
            t.set_flexibility(name, Flexibility::Normalizing);
        }
        for name in ["rw", "apply", "exact"] {
            t.set_flexibility(name, Flexibility::Rigid);
        }
        for name in ["exact", "rfl", "assumption", "trivial"] {
            t.set_effect(name, GoalEffect::Closes);
        }
        t.set_effect("constructor", GoalEffect::Splits(2));
        t.set_effect("cases", GoalEffect::Splits(2));
        for name in ["intro", "intros", "have", "let"] {
            t.set_effect(name, GoalEffect::Introduces);
        }
        t.set_noop("skip", true);
        t
    }
}

impl TacticTable {
    pub fn empty() -> Self {
        TacticTable {
            map: BTreeMap::new(),
        }
    }

    pub fn info(&self, name: &str) -> TacticInfo {
        self.map.get(name).copied().unwrap_or_default()
    }

    pub fn set_flexibility(&mut self, name: &str, f: Flexibility) {
        self.map.entry(name.to_string()).or_default().flexibility = f;
    }

    pub fn set_effect(&mut self, name: &str, e: GoalEffect) {
        self.map.entry(name.to_string()).or_default().goal_effect = e;
    }

    pub fn set_noop(&mut self, name: &str, noop: bool) {
        self.map.entry(name.to_string()).or_default().noop = noop;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &TacticInfo)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Tactics whose identifier arguments bind fresh hypothesis names.
    pub fn intro_tactics(&self) -> BTreeSet<String> {
        self.map
            .iter()
            .filter(|(name, i)| {
                i.goal_effect == GoalEffect::Introduces && *name != "have" && *name != "let"
            })
            .map(|(name, _)| name.clone())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// goal simulation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    Goal,
    Hypothesis(String),
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Goal => write!(f, "goal"),
            Location::Hypothesis(h) => write!(f, "hypothesis `{h}`"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GoalTraceEntry {
    pub name: String,
    pub span: Span,
    pub goals_before: u32,
    pub goals_after: u32,
    pub focus_depth: u32,
    pub stains_before: BTreeSet<Location>,
}

pub type GoalTrace = Vec<GoalTraceEntry>;

struct Sim<'t> {
    table: &'t TacticTable,
    trace: GoalTrace,
    flow_diags: Vec<Diagnostic>,
    flex_diags: Vec<Diagnostic>,
    reachable_noops: Vec<(String, Span)>,
    stains: BTreeSet<Location>,
    stainer: BTreeMap<Location, (String, Span)>,
    known_hyps: BTreeSet<String>,
}

impl<'t> Sim<'t> {
    fn new(table: &'t TacticTable, known_hyps: BTreeSet<String>) -> Self {
        Sim {
            table,
            trace: Vec::new(),
            flow_diags: Vec::new(),
            flex_diags: Vec::new(),
            reachable_noops: Vec::new(),
            stains: BTreeSet::new(),
            stainer: BTreeMap::new(),
            known_hyps,
        }
    }

    fn diag(&self, rule: &str, span: Span, msg: String) -> Diagnostic {
        Diagnostic::new(rule, rules::default_severity(rule), span, msg)
    }

    fn run_block(&mut self, block: &[TacticSyntax], goals: u32, depth: u32) -> u32 {
        let mut g = goals;
        for (i, t) in block.iter().enumerate() {
            let next_is_dot = block.get(i + 1).is_some_and(|n| n.is_focus_dot());
            g = self.step(t, g, depth, next_is_dot);
        }
        g
    }

    fn step(&mut self, t: &TacticSyntax, g: u32, depth: u32, next_is_dot: bool) -> u32 {
        let stains_before = self.stains.clone();
        if g == 0 {
            self.flow_diags.push(self.diag(
                "pruning.unreachableTactic",
                t.span,
                format!("`{}` is unreachable: no goals remain at this point", t.name),
            ));
            self.trace.push(GoalTraceEntry {
                name: t.name.clone(),
                span: t.span,
                goals_before: 0,
                goals_after: 0,
                focus_depth: depth,
                stains_before,
            });
            return 0;
        }
        let yielded = self.apply_unit(t, depth);
        let g_after = g - 1 + yielded;
        self.trace.push(GoalTraceEntry {
            name: t.name.clone(),
            span: t.span,
            goals_before: g,
            goals_after: g_after,
            focus_depth: depth,
            stains_before,
        });
        if g_after < g {
            self.clear_goal_stain();
        }
        if g_after > g && g_after > 1 && !next_is_dot {
            self.flow_diags.push(self.diag(
                "maintenance.multiGoal",
                t.span,
                format!(
                    "`{}` leaves {} goals; focus the next goal with `·`",
                    t.name, g_after
                ),
            ));
        }
        g_after
    }

    /// How many goals replace one goal when `t` runs on it.
    fn apply_unit(&mut self, t: &TacticSyntax, depth: u32) -> u32 {
        if let Some(Combinator::FocusDot { block }) = &t.combinator {
            let leftover = self.run_block(block, 1, depth + 1);
            self.clear_goal_stain();
            return leftover;
        }
        let k1 = self.apply_simple(t);
        if let Some(Combinator::SeqFocus { op_span, rhs }) = &t.combinator {
            if k1 <= 1 {
                self.flow_diags.push(
                    self.diag(
                        "pruning.unusedSeqFocus",
                        *op_span,
                        format!(
                            "`<;>` after `{}` is pointless: it produces at most one goal; use `;`",
                            t.name
                        ),
                    )
                    .with_fix(*op_span, ";"),
                );
            }
            if k1 == 0 {
                return 0;
            }
            let k2 = self.apply_unit(rhs, depth);
            return k1 * k2;
        }
        k1
    }

    fn apply_simple(&mut self, t: &TacticSyntax) -> u32 {
        let info = self.table.info(&t.name);
        let locations = self.locations_of(t);
        match info.flexibility {
            Flexibility::Flexible => {
                for loc in &locations {
                    self.stains.insert(loc.clone());
                    self.stainer
                        .insert(loc.clone(), (t.name.clone(), t.span));
                }
            }
            Flexibility::Rigid => {
                for loc in &locations {
                    if self.stains.contains(loc) {
                        let (by, by_span) = self.stainer.get(loc).cloned().unwrap_or_else(|| {
                            ("a flexible tactic".to_string(), t.span)
                        });
                        self.flex_diags.push(
                            self.diag(
                                "maintenance.flexible",
                                t.span,
                                format!(
                                    "`{}` is a rigid tactic, but the {} was last modified by the flexible tactic `{}` (line {})",
                                    t.name, loc, by, by_span.line
                                ),
                            )
                            .with_related(by_span),
                        );
                    }
                }
            }
            Flexibility::Normalizing => {
                for loc in &locations {
                    self.stains.remove(loc);
                    self.stainer.remove(loc);
                }
            }
            Flexibility::Neutral => {}
        }
        if info.noop {
            self.reachable_noops.push((t.name.clone(), t.span));
        }
        match info.goal_effect {
            GoalEffect::Closes => 0,
            GoalEffect::Keeps => 1,
            GoalEffect::Splits(k) => k,
            GoalEffect::Introduces => {
                for a in &t.args {
                    if let Some(name) = a.as_ident() {
                        self.known_hyps.insert(name.to_string());
                    }
                }
                if let Some(b) = &t.binding {
                    self.known_hyps.insert(b.name.clone());
                }
                1
            }
        }
    }

    fn locations_of(&mut self, t: &TacticSyntax) -> Vec<Location> {
        let mut out = Vec::new();
        for loc in &t.at_locations {
            match loc {
                AtLocation::Goal => out.push(Location::Goal),
                AtLocation::Wildcard => {
                    out.push(Location::Goal);
                    out.extend(
                        self.known_hyps
                            .iter()
                            .map(|h| Location::Hypothesis(h.clone())),
                    );
                }
                AtLocation::Hypothesis(n) => {
                    self.known_hyps.insert(n.text.clone());
                    out.push(Location::Hypothesis(n.text.clone()));
                }
            }
        }
        out
    }

    fn clear_goal_stain(&mut self) {
        self.stains.remove(&Location::Goal);
        self.stainer.remove(&Location::Goal);
    }
}

/// Simulate a proof block starting from one goal. Returns the trace and the
/// goal-flow diagnostics: `maintenance.multiGoal`, `pruning.unreachableTactic`
/// and `pruning.unusedSeqFocus`.
pub fn simulate_goals(
    block: &[TacticSyntax],
    table: &TacticTable,
) -> (GoalTrace, Vec<Diagnostic>) {
    let mut sim = Sim::new(table, BTreeSet::new());
    sim.run_block(block, 1, 0);
    (sim.trace, sim.flow_diags)
}

/// Flexibility staining over one proof block. `initial_hyps` are hypothesis
/// names already in scope (declaration binders, `variable`s).
pub fn lint_flexible(
    block: &[TacticSyntax],
    table: &TacticTable,
    initial_hyps: &BTreeSet<String>,
) -> Vec<Diagnostic> {
    let mut sim = Sim::new(table, initial_hyps.clone());
    sim.run_block(block, 1, 0);
    sim.flex_diags
}

fn run_sim<'t>(block: &[TacticSyntax], table: &'t TacticTable) -> Sim<'t> {
    let mut sim = Sim::new(table, BTreeSet::new());
    sim.run_block(block, 1, 0);
    sim
}

// ---------------------------------------------------------------------------
// unused bindings
// ---------------------------------------------------------------------------

/// Does `term` mention `name` (respecting lambda shadowing)?
fn term_uses(term: &TermSyntax, name: &str) -> bool {
    match &term.head {
        TermHead::Ident(n) => n == name || term.args.iter().any(|a| term_uses(a, name)),
        TermHead::Lambda { binders, .. } => {
            if binders.iter().any(|b| {
                b.ty.as_ref().is_some_and(|t| term_uses(t, name))
            }) {
                return true;
            }
            let shadowed = binders.iter().any(|b| b.name == name);
            if shadowed {
                // body (args[0]) sees the new binding; applied arguments don't
                term.args.iter().skip(1).any(|a| term_uses(a, name))
            } else {
                term.args.iter().any(|a| term_uses(a, name))
            }
        }
        _ => term.args.iter().any(|a| term_uses(a, name)),
    }
}

fn tactic_uses(t: &TacticSyntax, name: &str) -> bool {
    if t.args.iter().any(|a| term_uses(a, name)) {
        return true;
    }
    if t.at_locations
        .iter()
        .any(|l| matches!(l, AtLocation::Hypothesis(n) if n.text == name))
    {
        return true;
    }
    if let Some(b) = &t.binding {
        if b.ty.as_ref().is_some_and(|ty| term_uses(ty, name))
            || b.value.as_ref().is_some_and(|v| term_uses(v, name))
        {
            return true;
        }
    }
    match &t.combinator {
        Some(Combinator::SeqFocus { rhs, .. }) => tactic_uses(rhs, name),
        Some(Combinator::FocusDot { block }) => block.iter().any(|t| tactic_uses(t, name)),
        None => false,
    }
}

/// Names bound by this tactic alone (not its combinators).
fn introduced_names(t: &TacticSyntax, intro_tactics: &BTreeSet<String>) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    if intro_tactics.contains(&t.name) {
        for a in &t.args {
            if let Some(n) = a.as_ident() {
                out.push((n.to_string(), a.span));
            }
        }
    }
    if let Some(b) = &t.binding {
        out.push((b.name.clone(), b.name_span));
    }
    out
}

fn reintroduces(t: &TacticSyntax, name: &str, intro_tactics: &BTreeSet<String>) -> bool {
    introduced_names(t, intro_tactics).iter().any(|(n, _)| n == name)
}

fn scan_block_bindings(
    block: &[TacticSyntax],
    intro_tactics: &BTreeSet<String>,
    out: &mut Vec<Diagnostic>,
) {
    for (i, t) in block.iter().enumerate() {
        for (name, span) in introduced_names(t, intro_tactics) {
            if name.starts_with('_') {
                continue;
            }
            let mut used = false;
            // a `<;>` right-hand side still sees the binding
            if let Some(Combinator::SeqFocus { rhs, .. }) = &t.combinator {
                used = tactic_uses(rhs, &name);
            }
            if !used {
                for later in &block[i + 1..] {
                    if tactic_uses(later, &name) {
                        used = true;
                        break;
                    }
                    if reintroduces(later, &name, intro_tactics) {
                        break;
                    }
                }
            }
            if !used {
                out.push(Diagnostic::new(
                    "pruning.unusedVariable",
                    rules::default_severity("pruning.unusedVariable"),
                    span,
                    format!("`{name}` is never used; prefix it with `_` if this is intentional"),
                ));
            }
        }
        match &t.combinator {
            Some(Combinator::FocusDot { block }) => {
                scan_block_bindings(block, intro_tactics, out)
            }
            Some(Combinator::SeqFocus { rhs, .. }) => {
                scan_block_bindings(std::slice::from_ref(rhs), intro_tactics, out)
            }
            None => {}
        }
    }
}

fn scan_term_lambdas(term: &TermSyntax, out: &mut Vec<Diagnostic>) {
    if let TermHead::Lambda { binders, .. } = &term.head {
        for (i, b) in binders.iter().enumerate() {
            if b.name.starts_with('_') {
                continue;
            }
            let in_later_binder_types = binders[i + 1..]
                .iter()
                .any(|later| later.ty.as_ref().is_some_and(|t| term_uses(t, &b.name)));
            let shadowed_later = binders[i + 1..].iter().any(|later| later.name == b.name);
            let in_body = !shadowed_later
                && term
                    .args
                    .first()
                    .is_some_and(|body| term_uses(body, &b.name));
            if !in_later_binder_types && !in_body {
                out.push(Diagnostic::new(
                    "pruning.unusedVariable",
                    rules::default_severity("pruning.unusedVariable"),
                    b.name_span,
                    format!(
                        "`{}` is never used; prefix it with `_` if this is intentional",
                        b.name
                    ),
                ));
            }
        }
        for b in binders {
            if let Some(ty) = &b.ty {
                scan_term_lambdas(ty, out);
            }
        }
    }
    for a in &term.args {
        scan_term_lambdas(a, out);
    }
}

fn tactic_terms<'a>(ts: &'a [TacticSyntax], out: &mut Vec<&'a TermSyntax>) {
    for t in ts {
        out.extend(t.args.iter());
        if let Some(b) = &t.binding {
            out.extend(b.ty.iter());
            out.extend(b.value.iter());
        }
        match &t.combinator {
            Some(Combinator::SeqFocus { rhs, .. }) => {
                tactic_terms(std::slice::from_ref(rhs), out)
            }
            Some(Combinator::FocusDot { block }) => tactic_terms(block, out),
            None => {}
        }
    }
}

/// Unused lambda binders and intro/have/let names, plus reachable no-op
/// tactics (`pruning.unusedTactic`). Unreachable no-ops are reported by the
/// goal simulation instead.
pub fn lint_unused_bindings(decl: &DeclSyntax, table: &TacticTable) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let intro_tactics = table.intro_tactics();

    let mut terms: Vec<&TermSyntax> = Vec::new();
    if let Some(ty) = &decl.ty {
        terms.push(ty);
    }
    for b in &decl.binders {
        terms.extend(b.ty.iter());
    }
    match &decl.body {
        DeclBody::Term(t) => terms.push(t),
        DeclBody::Tactics(ts) => {
            tactic_terms(ts, &mut terms);
            scan_block_bindings(ts, &intro_tactics, &mut out);
            let sim = run_sim(ts, table);
            for (name, span) in sim.reachable_noops {
                out.push(Diagnostic::new(
                    "pruning.unusedTactic",
                    rules::default_severity("pruning.unusedTactic"),
                    span,
                    format!("`{name}` does nothing here and can be removed"),
                ));
            }
        }
    }
    for t in terms {
        scan_term_lambdas(t, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// have/let and papercut
// ---------------------------------------------------------------------------

/// One `have`/`let` with a type annotation: suggest the other keyword when
/// the annotation's head is on the wrong side of the Prop divide.
pub fn lint_have_let(t: &TacticSyntax, prop_heads: &[String]) -> Vec<Diagnostic> {
    if t.name != "have" && t.name != "let" {
        return Vec::new();
    }
    let Some(binding) = &t.binding else {
        return Vec::new();
    };
    let Some(ty) = &binding.ty else {
        return Vec::new();
    };
    let Some(head) = ty.head_symbol() else {
        return Vec::new();
    };
    let is_prop = prop_heads.iter().any(|h| h == head);
    let diag = |msg: String, replacement: &str| {
        vec![Diagnostic::new(
            "pedagogy.haveLet",
            rules::default_severity("pedagogy.haveLet"),
            t.name_span,
            msg,
        )
        .with_fix(t.name_span, replacement)]
    };
    match (t.name.as_str(), is_prop) {
        ("have", false) => diag(
            format!(
                "`have {} : {head} ...` introduces data whose value matters; use `let`",
                binding.name
            ),
            "let",
        ),
        ("let", true) => diag(
            format!(
                "`let {} : {head} ...` introduces a proposition; use `have`",
                binding.name
            ),
            "have",
        ),
        _ => Vec::new(),
    }
}

/// Known variable types and proposition hypotheses in scope at a term.
#[derive(Debug, Default, Clone)]
pub struct PapercutContext {
    /// name -> type head symbol
    pub types: BTreeMap<String, String>,
    /// hypothesis type terms, shape-matched against guard patterns
    pub hypotheses: Vec<TermSyntax>,
}

impl PapercutContext {
    pub fn add_binder(&mut self, name: &str, ty: Option<&TermSyntax>) {
        if let Some(ty) = ty {
            if let Some(head) = ty.head_symbol() {
                self.types.insert(name.to_string(), head.to_string());
            }
            self.hypotheses.push(ty.clone());
        }
    }
}

fn unparen(t: &TermSyntax) -> &TermSyntax {
    match &t.head {
        TermHead::Paren if !t.args.is_empty() => unparen(&t.args[0]),
        _ => t,
    }
}

fn is_zero(t: &TermSyntax) -> bool {
    matches!(&unparen(t).head, TermHead::Number(n) if n == "0")
}

fn binop<'t>(t: &'t TermSyntax, op: &str) -> Option<(&'t TermSyntax, &'t TermSyntax)> {
    let t = unparen(t);
    match &t.head {
        TermHead::BinOp { op: o, .. } if o == op && t.args.len() == 2 => {
            Some((&t.args[0], &t.args[1]))
        }
        _ => None,
    }
}

fn guard_covers(hyp: &TermSyntax, a: &str, b: &str, guards: &[String]) -> bool {
    for guard in guards {
        let hit = match guard.as_str() {
            // b ≤ a
            "le" => binop(hyp, "≤")
                .is_some_and(|(l, r)| l.as_ident() == Some(b) && r.as_ident() == Some(a)),
            // b < a
            "lt" => binop(hyp, "<")
                .is_some_and(|(l, r)| l.as_ident() == Some(b) && r.as_ident() == Some(a)),
            // 0 < a - b
            "sub_pos" => binop(hyp, "<").is_some_and(|(l, r)| {
                is_zero(l)
                    && binop(r, "-").is_some_and(|(x, y)| {
                        x.as_ident() == Some(a) && y.as_ident() == Some(b)
                    })
            }),
            _ => false,
        };
        if hit {
            return true;
        }
    }
    false
}

/// Flag `a - b` where both operands are known naturals and no guarding
/// hypothesis (`b ≤ a`, `b < a`, `0 < a - b`) is in scope. Unknown operand
/// types stay silent.
pub fn lint_papercut(
    term: &TermSyntax,
    ctx: &PapercutContext,
    guards: &[String],
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    term.walk(&mut |t| {
        let Some((lhs, rhs)) = binop(t, "-") else {
            return;
        };
        let (Some(a), Some(b)) = (lhs.as_ident(), rhs.as_ident()) else {
            return;
        };
        let nat = |n: &str| ctx.types.get(n).map(String::as_str) == Some("Nat");
        if !nat(a) || !nat(b) {
            return;
        }
        if ctx
            .hypotheses
            .iter()
            .any(|h| guard_covers(h, a, b, guards))
        {
            return;
        }
        out.push(Diagnostic::new(
            "pedagogy.papercut",
            rules::default_severity("pedagogy.papercut"),
            t.span,
            format!(
                "`{a} - {b}` on Nat truncates at 0; add a hypothesis like `{b} ≤ {a}` or work in Int"
            ),
        ));
    });
    out
}

// ---------------------------------------------------------------------------
// command linters
// ---------------------------------------------------------------------------

fn decl_of(cmd: &SyntaxCommand) -> Option<&DeclSyntax> {
    match &cmd.kind {
        CommandKind::Declaration(d) => Some(d),
        _ => None,
    }
}

fn decl_tactics(cmd: &SyntaxCommand) -> Option<&[TacticSyntax]> {
    match &decl_of(cmd)?.body {
        DeclBody::Tactics(ts) => Some(ts),
        _ => None,
    }
}

/// multiGoal + unreachableTactic + unusedSeqFocus via goal simulation.
pub struct GoalFlowLinter;

impl CommandLinter for GoalFlowLinter {
    fn name(&self) -> &'static str {
        "maintenance.multiGoal"
    }
    fn run(&self, cmd: &SyntaxCommand, _scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let Some(ts) = decl_tactics(cmd) else {
            return Vec::new();
        };
        simulate_goals(ts, &ctx.config.tactics).1
    }
}

pub struct FlexibleLinter;

impl CommandLinter for FlexibleLinter {
    fn name(&self) -> &'static str {
        "maintenance.flexible"
    }
    fn run(&self, cmd: &SyntaxCommand, scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let Some(decl) = decl_of(cmd) else {
            return Vec::new();
        };
        let Some(ts) = decl_tactics(cmd) else {
            return Vec::new();
        };
        let mut hyps: BTreeSet<String> =
            decl.binders.iter().map(|b| b.name.clone()).collect();
        hyps.extend(scope.variables.iter().map(|v| v.name.clone()));
        lint_flexible(ts, &ctx.config.tactics, &hyps)
    }
}

pub struct UnusedBindingsLinter;

impl CommandLinter for UnusedBindingsLinter {
    fn name(&self) -> &'static str {
        "pruning.unusedVariable"
    }
    fn run(&self, cmd: &SyntaxCommand, _scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let Some(decl) = decl_of(cmd) else {
            return Vec::new();
        };
        lint_unused_bindings(decl, &ctx.config.tactics)
    }
}

pub struct HaveLetLinter;

impl CommandLinter for HaveLetLinter {
    fn name(&self) -> &'static str {
        "pedagogy.haveLet"
    }
    fn run(&self, cmd: &SyntaxCommand, _scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let Some(ts) = decl_tactics(cmd) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        fn walk(
            ts: &[TacticSyntax],
            heads: &[String],
            out: &mut Vec<Diagnostic>,
        ) {
            for t in ts {
                out.extend(lint_have_let(t, heads));
                match &t.combinator {
                    Some(Combinator::SeqFocus { rhs, .. }) => {
                        walk(std::slice::from_ref(rhs), heads, out)
                    }
                    Some(Combinator::FocusDot { block }) => walk(block, heads, out),
                    None => {}
                }
            }
        }
        walk(ts, &ctx.config.pedagogy.prop_heads, &mut out);
        out
    }
}

pub struct PapercutLinter;

impl CommandLinter for PapercutLinter {
    fn name(&self) -> &'static str {
        "pedagogy.papercut"
    }
    fn run(&self, cmd: &SyntaxCommand, scope: &ScopeState, ctx: &LintContext) -> Vec<Diagnostic> {
        let Some(decl) = decl_of(cmd) else {
            return Vec::new();
        };
        let mut pctx = PapercutContext::default();
        for v in &scope.variables {
            pctx.add_binder(&v.name, v.ty.as_ref());
        }
        for b in &decl.binders {
            pctx.add_binder(&b.name, b.ty.as_ref());
        }
        let guards = &ctx.config.pedagogy.papercut_guards;
        let mut out = Vec::new();
        match &decl.body {
            DeclBody::Term(t) => {
                out.extend(lint_papercut(t, &pctx, guards));
            }
            DeclBody::Tactics(ts) => {
                // have/let hypotheses come into scope in order
                fn walk(
                    ts: &[TacticSyntax],
                    pctx: &mut PapercutContext,
                    guards: &[String],
                    out: &mut Vec<Diagnostic>,
                ) {
                    for t in ts {
                        for a in &t.args {
                            out.extend(lint_papercut(a, pctx, guards));
                        }
                        if let Some(b) = &t.binding {
                            if let Some(v) = &b.value {
                                out.extend(lint_papercut(v, pctx, guards));
                            }
                            pctx.add_binder(&b.name, b.ty.as_ref());
                        }
                        match &t.combinator {
                            Some(Combinator::SeqFocus { rhs, .. }) => {
                                walk(std::slice::from_ref(rhs), pctx, guards, out)
                            }
                            Some(Combinator::FocusDot { block }) => {
                                let saved = pctx.clone();
                                walk(block, pctx, guards, out);
                                *pctx = saved;
                            }
                            None => {}
                        }
                    }
                }
                walk(ts, &mut pctx, guards, &mut out);
            }
        }
        if let Some(ty) = &decl.ty {
            out.extend(lint_papercut(ty, &pctx, guards));
        }
        out
    }
}
