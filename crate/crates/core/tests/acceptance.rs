//! Acceptance suite: one check per shipped guarantee, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the report.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mathlint::ast::{AtLocation, Combinator, TacticSyntax};
use mathlint::config::{load_config_file, LintConfig};
use mathlint::debt::{diff_reports, DebtReport};
use mathlint::diagnostics::Diagnostic;
use mathlint::environment::{process_commands, Environment};
use mathlint::lint::LinterRegistry;
use mathlint::linters::style::lint_missing_end;
use mathlint::linters::tactic::{simulate_goals, GoalEffect, TacticTable};
use mathlint::parser::{parse_module, reconstruct_source};
use mathlint::project::{
    lint_inputs, lint_paths, plan_fix_texts, write_fixes, FileInput, LintOptions,
};
use mathlint::span::Span;

type CriterionResult = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn default_registry() -> LinterRegistry {
    LinterRegistry::default()
}

fn config_without_style() -> LintConfig {
    let mut config = LintConfig::default();
    config.enabled.insert("style".to_string(), false);
    config
}

// ---------------------------------------------------------------------------
// 1. golden corpus
// ---------------------------------------------------------------------------

fn parse_expectations(text: &str) -> Vec<(String, u32)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = (i + 1) as u32;
        if let Some(idx) = line.find("-- EXPECT:") {
            for item in line[idx + "-- EXPECT:".len()..].split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                match item.split_once('@') {
                    Some((rule, n)) => out.push((
                        rule.trim().to_string(),
                        n.trim().parse().expect("line number in EXPECT"),
                    )),
                    None => out.push((item.to_string(), line_no)),
                }
            }
        }
    }
    out.sort();
    out
}

fn corpus_fixtures() -> Vec<PathBuf> {
    let mut fixtures: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus dir")
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir() || p.extension().is_some_and(|e| e == "lean"))
        .collect();
    fixtures.sort();
    fixtures
}

fn criterion_golden_corpus() -> CriterionResult {
    let start = Instant::now();
    let registry = default_registry();
    let mut failures = Vec::new();
    let mut total_files = 0usize;
    let mut total_expected = 0usize;
    let mut coverage: BTreeMap<String, usize> = BTreeMap::new();

    for fixture in corpus_fixtures() {
        let config = {
            let candidate = fixture.join("mathlint.toml");
            if candidate.is_file() {
                load_config_file(&candidate).expect("fixture config")
            } else {
                LintConfig::default()
            }
        };
        let project = lint_paths(
            std::slice::from_ref(&fixture),
            &registry,
            &config,
            &LintOptions::default(),
        )
        .expect("fixture lints");

        let mut actual: BTreeMap<&str, Vec<(String, u32)>> = BTreeMap::new();
        for file in &project.files {
            actual.entry(&file.path).or_default();
        }
        for d in &project.diagnostics {
            actual
                .entry(d.file.as_str())
                .or_default()
                .push((d.rule.clone(), d.span.line));
        }
        for file in &project.files {
            total_files += 1;
            let expected = parse_expectations(&file.text);
            total_expected += expected.len();
            for (rule, _) in &expected {
                *coverage.entry(rule.clone()).or_default() += 1;
            }
            let mut got = actual.remove(file.path.as_str()).unwrap_or_default();
            got.sort();
            if got != expected {
                failures.push(format!(
                    "{}/{}: expected {:?}, got {:?}",
                    fixture.file_name().unwrap().to_string_lossy(),
                    file.path,
                    expected,
                    got
                ));
            }
        }
    }

    if total_files < 30 {
        failures.push(format!("corpus has only {total_files} files (need >= 30)"));
    }
    for rule in mathlint::rules::all_rule_names() {
        if rule == "internal.error" {
            continue; // only reachable by injecting a crashing linter
        }
        let n = coverage.get(rule).copied().unwrap_or(0);
        if n < 2 {
            failures.push(format!("rule {rule} covered {n} time(s), need >= 2"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("corpus run took {elapsed:.2?} (budget 5s)"));
    }
    if failures.is_empty() {
        Ok(format!(
            "{total_files} files, {total_expected} expected findings reproduced exactly in {elapsed:.2?}"
        ))
    } else {
        Err(failures.join("\n    "))
    }
}

// ---------------------------------------------------------------------------
// 2. goal-simulation oracle
// ---------------------------------------------------------------------------

const GEN_TACTICS: &[&str] = &[
    "simp",
    "norm_num",
    "aesop",
    "ring",
    "omega",
    "rw",
    "apply",
    "exact",
    "rfl",
    "assumption",
    "trivial",
    "constructor",
    "cases",
    "intro",
    "have",
    "skip",
    "mystery",
];

struct TacticGen {
    rng: ChaCha8Rng,
    next_id: usize,
}

impl TacticGen {
    fn span(&mut self) -> Span {
        let i = self.next_id;
        self.next_id += 1;
        Span::new(i * 10, i * 10 + 5, (i + 1) as u32, 1, (i + 1) as u32, 6)
    }

    fn tactic(&mut self, depth: u32, budget: &mut usize) -> TacticSyntax {
        *budget = budget.saturating_sub(1);
        let sp = self.span();
        let roll = self.rng.random_range(0..10u32);
        if roll == 0 && depth < 3 && *budget > 0 {
            let block = self.block(depth + 1, budget);
            return TacticSyntax {
                name: "·".to_string(),
                name_span: sp,
                args: vec![],
                at_locations: vec![AtLocation::Goal],
                binding: None,
                combinator: Some(Combinator::FocusDot { block }),
                span: sp,
            };
        }
        let name = GEN_TACTICS[self.rng.random_range(0..GEN_TACTICS.len())];
        let combinator = if roll == 1 && *budget > 0 {
            let op_span = self.span();
            let rhs = self.tactic(depth, budget);
            Some(Combinator::SeqFocus {
                op_span,
                rhs: Box::new(rhs),
            })
        } else {
            None
        };
        TacticSyntax {
            name: name.to_string(),
            name_span: sp,
            args: vec![],
            at_locations: vec![AtLocation::Goal],
            binding: None,
            combinator,
            span: sp,
        }
    }

    fn block(&mut self, depth: u32, budget: &mut usize) -> Vec<TacticSyntax> {
        let n = self.rng.random_range(1..=4usize);
        let mut out = Vec::new();
        for _ in 0..n {
            if *budget == 0 {
                break;
            }
            out.push(self.tactic(depth, budget));
        }
        out
    }
}

/// Brute-force reference interpreter over explicit goal lists.
#[derive(Default)]
struct OracleOut {
    unreachable: BTreeSet<usize>,
    multi: BTreeSet<usize>,
}

fn oracle_unit(goal: u64, t: &TacticSyntax, table: &TacticTable, out: &mut OracleOut) -> Vec<u64> {
    if let Some(Combinator::FocusDot { block }) = &t.combinator {
        let mut focused = vec![goal];
        oracle_block(&mut focused, block, table, out);
        return focused;
    }
    let base: Vec<u64> = match table.info(&t.name).goal_effect {
        GoalEffect::Closes => vec![],
        GoalEffect::Keeps | GoalEffect::Introduces => vec![goal],
        GoalEffect::Splits(k) => (0..k as u64).map(|j| goal.wrapping_mul(31) + j + 1).collect(),
    };
    if let Some(Combinator::SeqFocus { rhs, .. }) = &t.combinator {
        let mut result = Vec::new();
        for g in base {
            result.extend(oracle_unit(g, rhs, table, out));
        }
        return result;
    }
    base
}

fn oracle_block(
    goals: &mut Vec<u64>,
    block: &[TacticSyntax],
    table: &TacticTable,
    out: &mut OracleOut,
) {
    for (i, t) in block.iter().enumerate() {
        let next_is_dot = block.get(i + 1).is_some_and(|n| n.is_focus_dot());
        if goals.is_empty() {
            out.unreachable.insert(t.span.start);
            continue;
        }
        let before = goals.len();
        let first = goals.remove(0);
        let mut produced = oracle_unit(first, t, table, out);
        produced.extend(goals.drain(..));
        *goals = produced;
        let after = goals.len();
        if after > before && after > 1 && !next_is_dot {
            out.multi.insert(t.span.start);
        }
    }
}

fn criterion_goal_oracle() -> CriterionResult {
    let table = TacticTable::default();
    let mut gen = TacticGen {
        rng: ChaCha8Rng::seed_from_u64(0x90a1),
        next_id: 0,
    };
    let mut mismatches = Vec::new();
    for case in 0..1000 {
        let mut budget = 10usize;
        let block = gen.block(0, &mut budget);

        let (trace, diags) = simulate_goals(&block, &table);
        let impl_final = trace.last().map(|e| e.goals_after).unwrap_or(1);
        let impl_unreachable: BTreeSet<usize> = diags
            .iter()
            .filter(|d| d.rule == "pruning.unreachableTactic")
            .map(|d| d.span.start)
            .collect();
        let impl_multi: BTreeSet<usize> = diags
            .iter()
            .filter(|d| d.rule == "maintenance.multiGoal")
            .map(|d| d.span.start)
            .collect();

        let mut goals: Vec<u64> = vec![1];
        let mut oracle = OracleOut::default();
        oracle_block(&mut goals, &block, &table, &mut oracle);

        if goals.len() as u32 != impl_final
            || oracle.unreachable != impl_unreachable
            || oracle.multi != impl_multi
        {
            mismatches.push(format!(
                "case {case}: oracle final={} impl final={impl_final}; \
                 oracle unreachable={:?} impl={impl_unreachable:?}; \
                 oracle multi={:?} impl={impl_multi:?}",
                goals.len(),
                oracle.unreachable,
                oracle.multi
            ));
        }
    }
    if mismatches.is_empty() {
        Ok("1000 random tactic blocks, 0 mismatches against the brute-force interpreter".into())
    } else {
        Err(format!(
            "{} mismatches, first: {}",
            mismatches.len(),
            mismatches[0]
        ))
    }
}

// ---------------------------------------------------------------------------
// 3. unused-import soundness + closure correctness
// ---------------------------------------------------------------------------

fn criterion_unused_import_soundness() -> CriterionResult {
    let registry = default_registry();
    let config = config_without_style();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = Vec::new();
    let mut closure_mismatches = 0usize;

    for case in 0..200 {
        let n_modules = rng.random_range(1..=20usize);
        // random DAG: j may import i < j
        let mut imports: Vec<Vec<usize>> = vec![Vec::new(); n_modules];
        for j in 1..n_modules {
            for i in 0..j {
                if rng.random_range(0..100u32) < 22 {
                    imports[j].push(i);
                }
            }
        }
        // naive reachability as the closure oracle
        let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_modules];
        for j in 0..n_modules {
            let mut stack: Vec<usize> = imports[j].clone();
            while let Some(i) = stack.pop() {
                if reach[j].insert(i) {
                    stack.extend(imports[i].iter().copied());
                }
            }
        }
        // up to 60 declarations spread over the modules
        let n_decls = rng.random_range(n_modules.min(60)..=60usize);
        let mut decls_of: Vec<Vec<String>> = vec![Vec::new(); n_modules];
        let mut decl_module: BTreeMap<String, usize> = BTreeMap::new();
        for k in 0..n_decls {
            let m = rng.random_range(0..n_modules);
            let name = format!("d{k}");
            decls_of[m].push(name.clone());
            decl_module.insert(name, m);
        }
        // references drawn from each module's visible set
        let mut refs_of: Vec<Vec<String>> = vec![Vec::new(); n_modules];
        for j in 0..n_modules {
            let mut visible: Vec<String> = decls_of[j].clone();
            for i in &reach[j] {
                visible.extend(decls_of[*i].iter().cloned());
            }
            if visible.is_empty() {
                continue;
            }
            for _ in 0..rng.random_range(0..6u32) {
                refs_of[j].push(visible[rng.random_range(0..visible.len())].clone());
            }
        }

        let module_name = |i: usize| format!("M{i:02}");
        let mut inputs = Vec::new();
        for j in 0..n_modules {
            let mut text = String::new();
            for i in &imports[j] {
                text.push_str(&format!("import {}\n", module_name(*i)));
            }
            for d in &decls_of[j] {
                text.push_str(&format!("def {d} := 1\n"));
            }
            for (idx, r) in refs_of[j].iter().enumerate() {
                text.push_str(&format!("def r{j}_{idx} := {r}\n"));
            }
            inputs.push((FileInput::named(&format!("{}.lean", module_name(j))), text));
        }

        let project = lint_inputs(inputs, &registry, &config, &LintOptions::default());

        // closure must match naive reachability
        for j in 0..n_modules {
            let expected: BTreeSet<String> = reach[j].iter().map(|i| module_name(*i)).collect();
            let actual = project
                .graph
                .closure_of(&module_name(j))
                .cloned()
                .unwrap_or_default();
            if expected != actual {
                closure_mismatches += 1;
            }
        }

        // deleting reported-unused imports must leave every reference resolvable
        for j in 0..n_modules {
            let file = format!("{}.lean", module_name(j));
            let removed: BTreeSet<String> = project
                .diagnostics
                .iter()
                .filter(|d| d.rule == "imports.unused" && d.file == file)
                .map(|d| {
                    d.message
                        .split('`')
                        .nth(1)
                        .expect("module name in message")
                        .to_string()
                })
                .collect();
            let mut visible_after: BTreeSet<&String> = decls_of[j].iter().collect();
            for i in &imports[j] {
                let name = module_name(*i);
                if removed.contains(&name) {
                    continue;
                }
                visible_after.extend(decls_of[*i].iter());
                for r in &reach[*i] {
                    visible_after.extend(decls_of[*r].iter());
                }
            }
            for r in &refs_of[j] {
                if !visible_after.contains(r) {
                    violations.push(format!(
                        "case {case}: removing {:?} from {} breaks reference {r}",
                        removed,
                        module_name(j)
                    ));
                }
            }
        }
    }

    if violations.is_empty() && closure_mismatches == 0 {
        Ok("200 random projects: deletions sound, closures equal naive DFS".into())
    } else {
        Err(format!(
            "{} deletion violations, {} closure mismatches; first: {}",
            violations.len(),
            closure_mismatches,
            violations.first().cloned().unwrap_or_default()
        ))
    }
}

// ---------------------------------------------------------------------------
// 4. deprecation auto-fix on a seeded project
// ---------------------------------------------------------------------------

fn seeded_deprecation_project(dir: &Path) {
    let mut new_defs = String::new();
    for k in 0..27 {
        new_defs.push_str(&format!("def new{k} := 1\n"));
    }
    std::fs::write(dir.join("NewDefs.lean"), new_defs).unwrap();

    let mut old_defs = String::from("import NewDefs\n");
    for k in 0..27 {
        old_defs.push_str(&format!(
            "@[deprecated new{k} (since := \"2024-01-01\")]\ndef old{k} := 1\n"
        ));
    }
    std::fs::write(dir.join("OldDefs.lean"), old_defs).unwrap();

    std::fs::write(
        dir.join("LegacyA.lean"),
        "import NewDefs\ndeprecated_module \"split into NewDefs\" (since := \"2024-02-01\")\n",
    )
    .unwrap();
    std::fs::write(
        dir.join("LegacyB.lean"),
        "import OldDefs\ndeprecated_module \"renamed\" (since := \"2024-03-01\")\n",
    )
    .unwrap();

    for f in 0..5 {
        let mut text = String::from("import OldDefs\n");
        for i in 0..5 {
            text.push_str(&format!("def q{f}_{i} := old{}\n", f * 5 + i));
        }
        std::fs::write(dir.join(format!("Use{f}.lean")), text).unwrap();
    }
    std::fs::write(
        dir.join("UseM.lean"),
        "import LegacyA\nimport LegacyB\ndef m1 := new0\ndef m2 := old26\n",
    )
    .unwrap();
}

fn run_deprecation_fix(dir: &Path, registry: &LinterRegistry, config: &LintConfig) -> usize {
    let project = lint_paths(
        &[dir.to_path_buf()],
        registry,
        config,
        &LintOptions::default(),
    )
    .unwrap();
    let filter = ["deprecation.usage", "deprecation.import"];
    let outcome = plan_fix_texts(&project, &project.diagnostics, Some(&filter));
    let edits = outcome.total_edits;
    write_fixes(&project, &outcome).unwrap();
    edits
}

fn snapshot_tree(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in walkdir_sorted(dir) {
        out.insert(
            entry.file_name().unwrap().to_string_lossy().to_string(),
            std::fs::read_to_string(&entry).unwrap(),
        );
    }
    out
}

fn walkdir_sorted(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "lean"))
        .collect();
    files.sort();
    files
}

fn criterion_deprecation_autofix() -> CriterionResult {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    seeded_deprecation_project(dir);

    let registry = default_registry();
    let config = config_without_style();

    let before = lint_paths(
        &[dir.to_path_buf()],
        &registry,
        &config,
        &LintOptions::default(),
    )
    .unwrap();
    let usages = before
        .diagnostics
        .iter()
        .filter(|d| d.rule == "deprecation.usage")
        .count();
    let imports = before
        .diagnostics
        .iter()
        .filter(|d| d.rule == "deprecation.import")
        .count();
    if usages < 25 || imports < 2 {
        return Err(format!(
            "seed project has {usages} usages / {imports} stub imports (need >= 25 / 2)"
        ));
    }

    let first_edits = run_deprecation_fix(dir, &registry, &config);
    let after_first = snapshot_tree(dir);

    let relint = lint_paths(
        &[dir.to_path_buf()],
        &registry,
        &config,
        &LintOptions::default(),
    )
    .unwrap();
    let fixable_left = relint
        .diagnostics
        .iter()
        .filter(|d| {
            (d.rule == "deprecation.usage" || d.rule == "deprecation.import")
                && !d.fixes.is_empty()
        })
        .count();
    if fixable_left != 0 {
        return Err(format!(
            "{fixable_left} fixable deprecation diagnostics remain after fix"
        ));
    }

    let second_edits = run_deprecation_fix(dir, &registry, &config);
    let after_second = snapshot_tree(dir);
    if after_first != after_second {
        return Err("second fix run changed bytes (idempotence broken)".into());
    }
    if second_edits != 0 {
        return Err(format!("second fix run made {second_edits} edits"));
    }

    Ok(format!(
        "{usages} usages + {imports} stub imports fixed with {first_edits} edits; re-lint clean; second run byte-identical"
    ))
}

// ---------------------------------------------------------------------------
// 5. missingEnd fuzz
// ---------------------------------------------------------------------------

fn criterion_missing_end_fuzz() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe17d);
    let names = ["A", "B", "C"];
    for case in 0..10_000 {
        let n_lines = rng.random_range(0..=12usize);
        let mut text = String::new();
        let mut model: Vec<Option<&str>> = Vec::new();
        for _ in 0..n_lines {
            match rng.random_range(0..5u32) {
                0 => {
                    text.push_str("section\n");
                    model.push(None);
                }
                1 => {
                    let n = names[rng.random_range(0..names.len())];
                    text.push_str(&format!("section {n}\n"));
                    model.push(Some(n));
                }
                2 => {
                    let n = names[rng.random_range(0..names.len())];
                    text.push_str(&format!("namespace {n}\n"));
                    model.push(Some(n));
                }
                3 => {
                    text.push_str("end\n");
                    if model.last() == Some(&None) {
                        model.pop();
                    }
                }
                _ => {
                    let n = names[rng.random_range(0..names.len())];
                    text.push_str(&format!("end {n}\n"));
                    if model.last() == Some(&Some(n)) {
                        model.pop();
                    }
                }
            }
        }
        let (commands, parse_diags) = parse_module(&text);
        if !parse_diags.is_empty() {
            return Err(format!("case {case}: unexpected parse errors: {parse_diags:?}"));
        }
        let (_, analysis) = process_commands(&commands, &Environment::new(), "M", "M.lean");
        let warnings = lint_missing_end(&analysis.final_scope).len();
        if warnings != model.len() {
            return Err(format!(
                "case {case}: {} warnings for stack depth {}\n{text}",
                warnings,
                model.len()
            ));
        }
    }
    Ok("10000 random section/namespace/end sequences: warning count == final stack depth".into())
}

// ---------------------------------------------------------------------------
// 6. suppression exactness matrix
// ---------------------------------------------------------------------------

struct MatrixRule {
    rule: &'static str,
    prelude: &'static str,
    /// `{i}` is substituted by the copy index.
    snippet: &'static str,
    /// diagnostics of `rule` one copy produces
    per_copy: usize,
}

fn matrix_rules() -> Vec<MatrixRule> {
    vec![
        MatrixRule {
            rule: "deprecation.syntax",
            prelude: "",
            snippet: "def lam{i} := λ x => x",
            per_copy: 2,
        },
        MatrixRule {
            rule: "deprecation.usage",
            prelude: "def fresh := 1\n@[deprecated fresh (since := \"2024-01-01\")]\ndef stale := 1\n",
            snippet: "def usage{i} := stale",
            per_copy: 1,
        },
        MatrixRule {
            rule: "deprecation.register",
            prelude: "",
            snippet: "@[deprecated (since := \"2024-01-01\")]\ndef reg{i} := 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "env.duplicateDeclaration",
            prelude: "def dupbase := 1\n",
            snippet: "def dupbase := 2",
            per_copy: 1,
        },
        MatrixRule {
            rule: "env.unresolvedReference",
            prelude: "",
            snippet: "def missing{i} := ghost{i}",
            per_copy: 1,
        },
        MatrixRule {
            rule: "maintenance.flexible",
            prelude: "",
            snippet: "theorem flex{i} (h : True) : True := by\n  simp\n  rw h",
            per_copy: 1,
        },
        MatrixRule {
            rule: "maintenance.multiGoal",
            prelude: "",
            snippet: "theorem mg{i} : True := by\n  constructor\n  trivial\n  trivial",
            per_copy: 1,
        },
        MatrixRule {
            rule: "naming.dupNamespace",
            prelude: "",
            snippet: "def Dup{i}.Dup{i}.x := 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pedagogy.haveLet",
            prelude: "",
            snippet: "theorem hl{i} : True := by\n  have n : Nat := 3\n  exact n",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pedagogy.papercut",
            prelude: "",
            snippet: "def sub{i} (a b : Nat) : Nat := a - b",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pruning.unreachableTactic",
            prelude: "",
            snippet: "theorem ur{i} : True := by\n  trivial\n  skip",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pruning.unusedSeqFocus",
            prelude: "",
            snippet: "theorem sq{i} : True := by\n  trivial <;> skip",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pruning.unusedTactic",
            prelude: "",
            snippet: "theorem ut{i} : True := by\n  skip\n  trivial",
            per_copy: 1,
        },
        MatrixRule {
            rule: "pruning.unusedVariable",
            prelude: "",
            snippet: "def uv{i} := fun x ↦ 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "style.docString",
            prelude: "",
            snippet: "/--  doc{i} -/\ndef ds{i} := 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "style.lineLength",
            prelude: "",
            snippet: "def w{i}_wwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwwww := 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "tracking.globalAttributeIn",
            prelude: "def tgt := 1\n",
            snippet: "attribute [simp] tgt in def ga{i} := 1",
            per_copy: 1,
        },
        MatrixRule {
            rule: "tracking.openClassical",
            prelude: "",
            snippet: "open Classical",
            per_copy: 1,
        },
        MatrixRule {
            rule: "tracking.setOption",
            prelude: "",
            snippet: "set_option maxHeartbeats 5000000",
            per_copy: 1,
        },
    ]
}

fn criterion_suppression_matrix() -> CriterionResult {
    let registry = default_registry();
    let config = LintConfig::default();
    let mut failures = Vec::new();
    let mut checked = 0usize;

    for mr in matrix_rules() {
        for wrapped in 0..3usize {
            let mut text = String::from(mr.prelude);
            let mut copy_first_line = [0u32; 3];
            let mut line_no = text.lines().count() as u32;
            for i in 0..3 {
                let snippet = mr.snippet.replace("{i}", &i.to_string());
                if i == wrapped {
                    text.push_str(&format!(
                        "set_option linter.{} false in\n{}\n",
                        mr.rule, snippet
                    ));
                    copy_first_line[i] = line_no + 2;
                    line_no += 1 + snippet.lines().count() as u32;
                } else {
                    text.push_str(&format!("{snippet}\n"));
                    copy_first_line[i] = line_no + 1;
                    line_no += snippet.lines().count() as u32;
                }
            }
            // a trailing command so `... in` fixes always have a target
            text.push_str("def trailer := 1\n");

            let inputs = vec![(FileInput::named("matrix.lean"), text.clone())];
            let project = lint_inputs(inputs, &registry, &config, &LintOptions::default());
            let hits: Vec<&Diagnostic> = project
                .diagnostics
                .iter()
                .filter(|d| d.rule == mr.rule)
                .collect();

            // which copy does each hit belong to? (copies are line ranges)
            let mut per_copy = [0usize; 3];
            for h in &hits {
                let mut owner = None;
                for i in 0..3 {
                    if h.span.line >= copy_first_line[i]
                        && (i == 2 || h.span.line < copy_first_line[i + 1])
                    {
                        owner = Some(i);
                    }
                }
                match owner {
                    Some(i) => per_copy[i] += 1,
                    None => failures.push(format!(
                        "{} (wrap {wrapped}): diagnostic outside all copies at line {}",
                        mr.rule, h.span.line
                    )),
                }
            }
            for i in 0..3 {
                let expected = if i == wrapped { 0 } else { mr.per_copy };
                if per_copy[i] != expected {
                    failures.push(format!(
                        "{} (wrap {wrapped}): copy {i} produced {} diagnostics, expected {expected}\n{text}",
                        mr.rule, per_copy[i]
                    ));
                }
            }
            checked += 1;
        }
    }

    if failures.is_empty() {
        Ok(format!(
            "{} (rule x placement) fixtures: suppression hits exactly the wrapped command",
            checked
        ))
    } else {
        Err(failures.join("\n    "))
    }
}

// ---------------------------------------------------------------------------
// 7. byte-exact round trip over the corpus
// ---------------------------------------------------------------------------

fn criterion_round_trip() -> CriterionResult {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for fixture in corpus_fixtures() {
        let files: Vec<PathBuf> = if fixture.is_dir() {
            walkdir::WalkDir::new(&fixture)
                .sort_by_file_name()
                .into_iter()
                .filter_map(Result::ok)
                .filter(|e| e.file_type().is_file())
                .map(|e| e.into_path())
                .filter(|p| p.extension().is_some_and(|e| e == "lean"))
                .collect()
        } else {
            vec![fixture.clone()]
        };
        for f in files {
            let text = std::fs::read_to_string(&f).unwrap();
            let (commands, _) = parse_module(&text);
            if reconstruct_source(&text, &commands) != text {
                failures.push(f.display().to_string());
            }
            checked += 1;
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} corpus files reconstruct byte-identically"))
    } else {
        Err(format!("round-trip failed for: {}", failures.join(", ")))
    }
}

// ---------------------------------------------------------------------------
// 8. debt delta arithmetic + regression exit codes
// ---------------------------------------------------------------------------

fn report_with(counts: &[(&str, u64)]) -> DebtReport {
    let mut r = DebtReport::empty("2026-08-10T00:00:00Z");
    for (k, v) in counts {
        r.counts.insert(k.to_string(), *v);
    }
    r
}

fn criterion_debt_delta() -> CriterionResult {
    let mut failures = Vec::new();

    // diff(r, r) == 0 on a few shapes
    for r in [
        report_with(&[]),
        report_with(&[("porting_notes", 1500)]),
        report_with(&[("porting_notes", 3), ("adaptation_notes", 9)]),
    ] {
        let d = diff_reports(&r, &r);
        if d.rows.iter().any(|row| row.delta != 0) {
            failures.push(format!("diff(r, r) != 0 for {r:?}"));
        }
    }

    // the -10 porting example
    let d = diff_reports(
        &report_with(&[("porting_notes", 1490)]),
        &report_with(&[("porting_notes", 1500)]),
    );
    let row = d
        .rows
        .iter()
        .find(|r| r.category == "porting_notes")
        .unwrap();
    if row.delta != -10 {
        failures.push(format!("porting delta: expected -10, got {}", row.delta));
    }

    // missing-category rule
    let mut current = DebtReport {
        timestamp: "t".into(),
        counts: BTreeMap::new(),
    };
    current.counts.insert("porting_notes".into(), 2);
    let baseline = DebtReport {
        timestamp: "t".into(),
        counts: BTreeMap::new(),
    };
    let d = diff_reports(&current, &baseline);
    let row = d
        .rows
        .iter()
        .find(|r| r.category == "porting_notes")
        .unwrap();
    if (row.baseline, row.delta) != (0, 2) {
        failures.push(format!(
            "missing-category rule: expected baseline 0 delta 2, got {} {}",
            row.baseline, row.delta
        ));
    }

    // exit-code truth table through the real binary:
    // (porting notes now, porting baseline, adaptation now, adaptation baseline,
    //  ratchet restricted to adaptation_notes?, expected exit)
    let table: [(u64, u64, u64, u64, bool, i32); 8] = [
        (2, 2, 1, 1, false, 0), // unchanged
        (3, 2, 1, 1, false, 1), // porting regressed
        (1, 2, 1, 1, false, 0), // improvement
        (3, 2, 1, 1, true, 0),  // porting regressed but not ratcheted
        (2, 2, 2, 1, true, 1),  // adaptation regressed and ratcheted
        (2, 2, 2, 1, false, 1), // adaptation regressed, full ratchet
        (0, 5, 0, 9, false, 0), // big improvements
        (3, 2, 0, 1, true, 0),  // mixed: only non-ratcheted category regressed
    ];
    for (idx, (p_now, p_base, a_now, a_base, restrict, expected)) in
        table.into_iter().enumerate()
    {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        let mut text = String::from("def x := 1\n");
        for _ in 0..p_now {
            text.push_str("-- Porting note: marker\n");
        }
        for _ in 0..a_now {
            text.push_str("-- #adaptation_note here\n");
        }
        std::fs::write(dir.join("M.lean"), text).unwrap();
        if restrict {
            std::fs::write(
                dir.join("mathlint.toml"),
                "[debt]\nratchet = [\"adaptation_notes\"]\n",
            )
            .unwrap();
        }
        let baseline = report_with(&[
            ("porting_notes", p_base),
            ("adaptation_notes", a_base),
        ]);
        let baseline_path = dir.join("baseline.txt");
        std::fs::write(&baseline_path, mathlint::debt::render_baseline(&baseline)).unwrap();

        let output = std::process::Command::new(env!("CARGO_BIN_EXE_mathlint"))
            .arg("debt")
            .arg("report")
            .arg(dir)
            .arg("--baseline")
            .arg(&baseline_path)
            .arg("--fail-on-regression")
            .current_dir(dir)
            .env("MATHLINT_TODAY", "2026-08-10")
            .env("MATHLINT_TIMESTAMP", "2026-08-10T00:00:00Z")
            .output()
            .expect("run mathlint");
        let code = output.status.code().unwrap_or(-1);
        if code != expected {
            failures.push(format!(
                "truth table row {idx}: expected exit {expected}, got {code}\nstdout: {}\nstderr: {}",
                String::from_utf8_lossy(&output.stdout),
                String::from_utf8_lossy(&output.stderr)
            ));
        }
    }

    if failures.is_empty() {
        Ok("delta arithmetic exact; 8-row regression truth table matches binary exit codes".into())
    } else {
        Err(failures.join("\n    "))
    }
}

// ---------------------------------------------------------------------------
// 9. throughput on a generated 200 kLOC project
// ---------------------------------------------------------------------------

fn generate_big_project() -> (Vec<(FileInput, String)>, usize) {
    let n_files = 400;
    let lines_per_file = 500;
    let mut inputs = Vec::new();
    let mut total_lines = 0usize;
    for i in 0..n_files {
        let mut text = String::with_capacity(lines_per_file * 40);
        text.push_str("/-\n");
        text.push_str(&format!(
            "Copyright (c) 2024 Generated Author {i}. All rights reserved.\n"
        ));
        text.push_str("Released under Apache 2.0 license as described in the file LICENSE.\n");
        text.push_str("Authors: Generated Author\n");
        text.push_str("-/\n");
        if i > 0 {
            text.push_str(&format!("import F{:03}\n", i - 1));
        }
        if i > 1 {
            text.push_str(&format!("import F{:03}\n", i / 2));
        }
        text.push_str(&format!("/-! Generated module {i}. -/\n"));
        if i > 0 {
            text.push_str(&format!("def f{i}_link := f{}_d0\n", i - 1));
        }
        if i > 1 {
            text.push_str(&format!("def f{i}_half := f{}_d1\n", i / 2));
        }
        let mut k = 0;
        while text.lines().count() + 8 <= lines_per_file {
            text.push_str(&format!("/-- Helper {k} for module {i}. -/\n"));
            text.push_str(&format!("def f{i}_d{k} (n : Nat) : Nat := n + {k}\n"));
            text.push_str("\n");
            text.push_str(&format!("theorem f{i}_t{k} : True := by\n"));
            text.push_str("  constructor\n");
            text.push_str("  · trivial\n");
            text.push_str("  · trivial\n");
            text.push_str("\n");
            k += 1;
        }
        while text.lines().count() < lines_per_file {
            text.push_str("-- filler line to reach the quota\n");
        }
        total_lines += text.lines().count();
        inputs.push((FileInput::named(&format!("F{i:03}.lean")), text));
    }
    (inputs, total_lines)
}

fn criterion_throughput() -> CriterionResult {
    let registry = default_registry();
    let config = LintConfig::default();
    let (inputs, total_lines) = generate_big_project();
    if total_lines < 200_000 {
        return Err(format!("generated only {total_lines} lines (need 200k)"));
    }

    let run = |jobs: usize| {
        let cloned = inputs.clone();
        let start = Instant::now();
        let project = lint_inputs(
            cloned,
            &registry,
            &config,
            &LintOptions { jobs: Some(jobs) },
        );
        (start.elapsed(), project.diagnostics.len())
    };

    let (t1, d1) = run(1);
    let (t4, d4) = run(4);
    if d1 != d4 {
        return Err(format!("diagnostic counts differ across jobs: {d1} vs {d4}"));
    }
    if t4.as_secs_f64() >= 30.0 {
        return Err(format!("lint of {total_lines} lines took {t4:.2?} (budget 30s)"));
    }
    let speedup = t1.as_secs_f64() / t4.as_secs_f64();
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let scaling_note = if cores >= 4 {
        if speedup < 2.5 {
            return Err(format!(
                "speedup jobs1->jobs4 is {speedup:.2}x on {cores} cores (need >= 2.5x)"
            ));
        }
        format!("speedup {speedup:.2}x on {cores} cores (>= 2.5x)")
    } else {
        format!(
            "SKIPPED scaling assertion: {cores} logical CPUs < the 4-core hardware this \
             criterion specifies (measured {speedup:.2}x)"
        )
    };
    Ok(format!(
        "{total_lines} lines linted in {t4:.2?} with 4 jobs ({} diagnostics); {scaling_note}",
        d4
    ))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(&str, fn() -> CriterionResult)> = vec![
        ("golden corpus reproduces expected diagnostics", criterion_golden_corpus),
        ("goal simulation agrees with brute-force oracle", criterion_goal_oracle),
        ("unused-import deletion is sound; closures match DFS", criterion_unused_import_soundness),
        ("deprecation auto-fix converges and is idempotent", criterion_deprecation_autofix),
        ("missingEnd warnings equal final scope depth (fuzz)", criterion_missing_end_fuzz),
        ("scoped suppression hits exactly one command", criterion_suppression_matrix),
        ("corpus files round-trip byte-identically", criterion_round_trip),
        ("debt deltas exact; regression exit codes correct", criterion_debt_delta),
        ("200 kLOC project lints inside the time budget", criterion_throughput),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}:\n    {why}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
