//! Import-graph analysis: the module DAG with transitive closures, unused
//! import detection, and directory dependency rules.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::diagnostics::Diagnostic;
use crate::environment::{Environment, Reference, ReferenceContext};
use crate::rules;
use crate::span::Span;

/// One `import` statement as seen in a file.
#[derive(Debug, Clone)]
pub struct ImportDecl {
    pub module: String,
    /// Span of the whole import command.
    pub span: Span,
    pub file: String,
}

/// Module inputs to the graph: a module path, its file, and its imports.
#[derive(Debug, Clone)]
pub struct ModuleImports {
    pub module: String,
    pub file: String,
    pub imports: Vec<ImportDecl>,
}

#[derive(Debug, Clone, Default)]
pub struct ImportGraph {
    /// All module paths, sorted.
    pub nodes: Vec<String>,
    /// Direct imports per module (sorted, deduplicated, existing only).
    pub edges: BTreeMap<String, Vec<String>>,
    /// Transitive import set per module.
    pub closure: BTreeMap<String, BTreeSet<String>>,
    /// Every module appears after all of its imports; lexicographic
    /// tie-break. Modules on a cycle are appended at the end.
    pub topo_order: Vec<String>,
    /// Cycles found during construction (the graph is then not a DAG and
    /// `imports.cycle` errors are emitted).
    pub cycles: Vec<Vec<String>>,
}

impl ImportGraph {
    pub fn direct_imports(&self, module: &str) -> &[String] {
        self.edges.get(module).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn closure_of(&self, module: &str) -> Option<&BTreeSet<String>> {
        self.closure.get(module)
    }

    /// DOT rendering of the direct-import edges, deterministically ordered.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph imports {\n");
        for node in &self.nodes {
            out.push_str(&format!("  \"{node}\";\n"));
        }
        for node in &self.nodes {
            for dep in self.direct_imports(node) {
                out.push_str(&format!("  \"{node}\" -> \"{dep}\";\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Build the import graph. Imports of modules that do not exist are dropped
/// from the graph and reported (`imports.missingModule`); cycles are
/// reported as `imports.cycle` errors naming one cycle each.
pub fn build_graph(modules: &[ModuleImports]) -> (ImportGraph, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let known: BTreeSet<&str> = modules.iter().map(|m| m.module.as_str()).collect();

    let mut graph = ImportGraph::default();
    graph.nodes = known.iter().map(|s| s.to_string()).collect();

    for m in modules {
        let mut deps: Vec<String> = Vec::new();
        for imp in &m.imports {
            if imp.module == m.module {
                // self import participates in cycle detection below
                deps.push(imp.module.clone());
                continue;
            }
            if !known.contains(imp.module.as_str()) {
                diags.push(
                    Diagnostic::new(
                        "imports.missingModule",
                        rules::default_severity("imports.missingModule"),
                        imp.span,
                        format!("imported module `{}` does not exist in this project", imp.module),
                    )
                    .in_file(&imp.file),
                );
                continue;
            }
            deps.push(imp.module.clone());
        }
        deps.sort();
        deps.dedup();
        graph.edges.insert(m.module.clone(), deps);
    }

    // DFS in lexicographic order: post-order gives a deps-first ordering,
    // back edges give cycles.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        InProgress,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut cycles: Vec<Vec<String>> = Vec::new();

    fn visit<'a>(
        node: &'a str,
        edges: &'a BTreeMap<String, Vec<String>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        order: &mut Vec<String>,
        cycles: &mut Vec<Vec<String>>,
        stack: &mut Vec<&'a str>,
    ) {
        match marks.get(node) {
            Some(Mark::Done) => return,
            Some(Mark::InProgress) => {
                let pos = stack.iter().position(|n| *n == node).unwrap_or(0);
                let mut cycle: Vec<String> =
                    stack[pos..].iter().map(|s| s.to_string()).collect();
                cycle.push(node.to_string());
                cycles.push(cycle);
                return;
            }
            None => {}
        }
        marks.insert(node, Mark::InProgress);
        stack.push(node);
        if let Some(deps) = edges.get(node) {
            for dep in deps {
                visit(dep, edges, marks, order, cycles, stack);
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
        order.push(node.to_string());
    }

    let mut stack = Vec::new();
    for node in &graph.nodes {
        visit(
            node,
            &graph.edges,
            &mut marks,
            &mut order,
            &mut cycles,
            &mut stack,
        );
    }
    graph.topo_order = order;

    for cycle in &cycles {
        let first_file = modules
            .iter()
            .find(|m| m.module == cycle[0])
            .map(|m| m.file.clone())
            .unwrap_or_default();
        let span = modules
            .iter()
            .find(|m| m.module == cycle[0])
            .and_then(|m| m.imports.first())
            .map(|i| i.span)
            .unwrap_or_default();
        diags.push(
            Diagnostic::new(
                "imports.cycle",
                rules::default_severity("imports.cycle"),
                span,
                format!("import cycle: {}", cycle.join(" -> ")),
            )
            .in_file(&first_file),
        );
    }
    graph.cycles = cycles;

    // closures in topo order: deps are computed before their importers
    for node in graph.topo_order.clone() {
        let mut closure: BTreeSet<String> = BTreeSet::new();
        for dep in graph.direct_imports(&node) {
            if dep == &node {
                continue;
            }
            closure.insert(dep.clone());
            if let Some(dep_closure) = graph.closure.get(dep) {
                closure.extend(dep_closure.iter().cloned());
            }
        }
        graph.closure.insert(node, closure);
    }

    (graph, diags)
}

/// Unused direct imports of one module.
///
/// `Need` is the set of modules defining some resolved reference of this
/// module; an import contributes nothing when neither it nor anything in its
/// closure is in `Need`. Any unresolved non-local reference makes the whole
/// module ineligible: removability cannot be proven. Sound, not minimal.
pub fn unused_imports(
    module_imports: &ModuleImports,
    graph: &ImportGraph,
    references: &[Reference],
    env: &Environment,
) -> Vec<Diagnostic> {
    let refs: Vec<&Reference> = references
        .iter()
        .filter(|r| r.module == module_imports.module && r.context != ReferenceContext::Import)
        .collect();
    if refs
        .iter()
        .any(|r| !r.is_local && r.resolved.is_none())
    {
        return Vec::new();
    }
    let mut need: BTreeSet<&str> = BTreeSet::new();
    for r in &refs {
        if let Some(resolved) = &r.resolved {
            if let Some(def_module) = env.defining_module(resolved) {
                if def_module != module_imports.module {
                    need.insert(def_module);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for imp in &module_imports.imports {
        if !seen.insert(imp.module.as_str()) {
            continue;
        }
        if !graph.edges.contains_key(imp.module.as_str()) {
            continue; // nonexistent module, reported elsewhere
        }
        let mut covered = need.contains(imp.module.as_str());
        if !covered {
            if let Some(closure) = graph.closure_of(&imp.module) {
                covered = closure.iter().any(|m| need.contains(m.as_str()));
            }
        }
        if !covered {
            out.push(
                Diagnostic::new(
                    "imports.unused",
                    rules::default_severity("imports.unused"),
                    imp.span,
                    format!(
                        "unused import `{}`: nothing it provides is referenced here",
                        imp.module
                    ),
                )
                .in_file(&imp.file)
                .with_fix(imp.span, ""),
            );
        }
    }
    out
}

/// A layering rule: modules under `from_prefix` must not (or must only)
/// depend on modules under the listed prefixes. Exactly one of the lists is
/// non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectoryRule {
    pub from_prefix: String,
    pub forbidden_prefixes: Vec<String>,
    pub allowed_prefixes: Vec<String>,
}

fn under_prefix(module: &str, prefix: &str) -> bool {
    module == prefix || module.starts_with(&format!("{prefix}."))
}

/// Shortest chain of direct imports from `from` to a module satisfying
/// `target`; BFS with sorted adjacency for determinism.
fn witness_path(
    graph: &ImportGraph,
    from: &str,
    target: &dyn Fn(&str) -> bool,
) -> Option<Vec<String>> {
    let mut queue = VecDeque::new();
    let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
    let mut visited: BTreeSet<&str> = BTreeSet::new();
    queue.push_back(from);
    visited.insert(from);
    while let Some(node) = queue.pop_front() {
        for dep in graph.direct_imports(node) {
            if !visited.insert(dep.as_str()) {
                continue;
            }
            prev.insert(dep.as_str(), node);
            if target(dep) {
                let mut path = vec![dep.as_str()];
                let mut cur = dep.as_str();
                while let Some(p) = prev.get(cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path.into_iter().map(str::to_string).collect());
            }
            queue.push_back(dep);
        }
    }
    None
}

/// Check every module covered by a rule against that rule, reporting one
/// witness chain of direct imports per violation.
pub fn check_directory_deps(
    graph: &ImportGraph,
    modules: &[ModuleImports],
    dir_rules: &[DirectoryRule],
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for rule in dir_rules {
        for m in modules {
            if !under_prefix(&m.module, &rule.from_prefix) {
                continue;
            }
            let mut reach: BTreeSet<String> = graph
                .closure_of(&m.module)
                .cloned()
                .unwrap_or_default();
            reach.extend(graph.direct_imports(&m.module).iter().cloned());

            let offender: Option<(&str, String)> = if !rule.forbidden_prefixes.is_empty() {
                let bad = |module: &str| {
                    rule.forbidden_prefixes
                        .iter()
                        .any(|p| under_prefix(module, p))
                };
                reach
                    .iter()
                    .find(|r| bad(r))
                    .map(|r| {
                        (
                            r.as_str(),
                            format!(
                                "modules under `{}` must not depend on `{}`",
                                rule.from_prefix,
                                rule.forbidden_prefixes.join("`, `")
                            ),
                        )
                    })
            } else {
                let ok = |module: &str| {
                    under_prefix(module, &rule.from_prefix)
                        || rule
                            .allowed_prefixes
                            .iter()
                            .any(|p| under_prefix(module, p))
                };
                reach
                    .iter()
                    .find(|r| !ok(r))
                    .map(|r| {
                        (
                            r.as_str(),
                            format!(
                                "modules under `{}` may only depend on `{}`",
                                rule.from_prefix,
                                rule.allowed_prefixes.join("`, `")
                            ),
                        )
                    })
            };

            let Some((offending, policy)) = offender else {
                continue;
            };
            // BFS gives the shortest witness; target the offending class so
            // the nearest offender is shown
            let target: Box<dyn Fn(&str) -> bool> = if !rule.forbidden_prefixes.is_empty() {
                let prefixes = rule.forbidden_prefixes.clone();
                Box::new(move |m: &str| prefixes.iter().any(|p| under_prefix(m, p)))
            } else {
                let from = rule.from_prefix.clone();
                let allowed = rule.allowed_prefixes.clone();
                Box::new(move |m: &str| {
                    !under_prefix(m, &from) && !allowed.iter().any(|p| under_prefix(m, p))
                })
            };
            let path = witness_path(graph, &m.module, &*target)
                .unwrap_or_else(|| vec![m.module.clone(), offending.to_string()]);
            let span = m
                .imports
                .iter()
                .find(|i| i.module == path[1])
                .map(|i| i.span)
                .or_else(|| m.imports.first().map(|i| i.span))
                .unwrap_or_default();
            out.push(
                Diagnostic::new(
                    "imports.directoryDependency",
                    rules::default_severity("imports.directoryDependency"),
                    span,
                    format!("{policy}: {}", path.join(" -> ")),
                )
                .in_file(&m.file),
            );
        }
    }
    out
}
