//! Technical-debt reporting: scan for debt markers, aggregate a categorized
//! report, and diff it against a stored baseline.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;
use thiserror::Error;

use crate::ast::{flatten_commands, CommandKind, OptionValue, SyntaxCommand};
use crate::config::LintConfig;
use crate::deprecation;
use crate::environment::Environment;
use crate::token::Token;

pub const CATEGORIES: [&str; 7] = [
    "adaptation_notes",
    "backcompat_options",
    "deprecations_active",
    "deprecations_expired",
    "disabled_linters",
    "lint_exceptions",
    "porting_notes",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DebtReport {
    pub timestamp: String,
    pub counts: BTreeMap<String, u64>,
}

impl DebtReport {
    pub fn empty(timestamp: &str) -> Self {
        DebtReport {
            timestamp: timestamp.to_string(),
            counts: CATEGORIES
                .iter()
                .map(|c| (c.to_string(), 0u64))
                .collect(),
        }
    }

    pub fn count(&self, category: &str) -> u64 {
        self.counts.get(category).copied().unwrap_or(0)
    }
}

/// Per-file inputs to the scan: the lexed tokens (comments matter even when
/// the file does not parse) and the parsed commands.
pub struct FileScan<'a> {
    pub tokens: &'a [Token],
    pub commands: &'a [SyntaxCommand],
}

/// Count debt markers over a whole project.
pub fn scan_debt(
    files: &[FileScan],
    env: &Environment,
    config: &LintConfig,
    today: NaiveDate,
    timestamp: &str,
) -> DebtReport {
    let mut report = DebtReport::empty(timestamp);
    let mut porting: u64 = 0;
    let mut adaptation: u64 = 0;
    let mut backcompat: u64 = 0;
    let mut disabled: u64 = 0;

    for file in files {
        for tok in file.tokens {
            let Some(content) = tok.comment_content() else {
                continue;
            };
            let trimmed = content.trim_start();
            if config
                .debt
                .porting_note_prefixes
                .iter()
                .any(|p| starts_with_ignore_case(trimmed, p))
            {
                porting += 1;
            }
            for marker in &config.debt.adaptation_markers {
                adaptation += count_occurrences(content, marker) as u64;
            }
        }
        for cmd in flatten_commands(file.commands) {
            if let CommandKind::SetOption { option, value, .. } = &cmd.kind {
                if config
                    .debt
                    .backcompat_prefixes
                    .iter()
                    .any(|p| option.text.starts_with(p.as_str()))
                {
                    backcompat += 1;
                }
                if option.text.starts_with("linter.") && *value == OptionValue::Bool(false) {
                    disabled += 1;
                }
            }
        }
    }

    report.counts.insert("porting_notes".to_string(), porting);
    report
        .counts
        .insert("adaptation_notes".to_string(), adaptation);
    report
        .counts
        .insert("backcompat_options".to_string(), backcompat);
    report
        .counts
        .insert("disabled_linters".to_string(), disabled);
    report.counts.insert(
        "deprecations_active".to_string(),
        env.deprecations.len() as u64,
    );
    report.counts.insert(
        "deprecations_expired".to_string(),
        deprecation::expired(&env.deprecations, today, config.deprecation.grace_days).len() as u64,
    );
    report.counts.insert(
        "lint_exceptions".to_string(),
        config.exceptions.len() as u64,
    );
    report
}

fn starts_with_ignore_case(text: &str, prefix: &str) -> bool {
    text.len() >= prefix.len()
        && text
            .chars()
            .zip(prefix.chars())
            .take(prefix.chars().count())
            .all(|(a, b)| a.to_lowercase().eq(b.to_lowercase()))
}

fn count_occurrences(haystack: &str, needle: &str) -> usize {
    if needle.is_empty() {
        return 0;
    }
    let mut count = 0;
    let mut rest = haystack;
    while let Some(i) = rest.find(needle) {
        count += 1;
        rest = &rest[i + needle.len()..];
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub category: String,
    pub current: u64,
    pub baseline: u64,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DebtDelta {
    pub rows: Vec<DeltaRow>,
}

impl DebtDelta {
    pub fn regressions<'a>(&'a self, ratchet: &'a [String]) -> impl Iterator<Item = &'a DeltaRow> {
        self.rows
            .iter()
            .filter(move |r| r.delta > 0 && ratchet.iter().any(|c| c == &r.category))
    }
}

/// Exact per-category subtraction; categories present on either side appear,
/// a missing side counts as zero.
pub fn diff_reports(current: &DebtReport, baseline: &DebtReport) -> DebtDelta {
    let mut categories: Vec<&String> = current
        .counts
        .keys()
        .chain(baseline.counts.keys())
        .collect();
    categories.sort_unstable();
    categories.dedup();
    DebtDelta {
        rows: categories
            .into_iter()
            .map(|c| {
                let cur = current.count(c);
                let base = baseline.count(c);
                DeltaRow {
                    category: c.clone(),
                    current: cur,
                    baseline: base,
                    delta: cur as i64 - base as i64,
                }
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// baseline persistence
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("cannot access baseline {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed baseline {path}: {message}")]
    Malformed { path: String, message: String },
}

const BASELINE_MAGIC: &str = "mathlint-baseline";
const BASELINE_VERSION: u32 = 1;

/// Stable plain-text key-value schema:
///
/// ```text
/// mathlint-baseline 1
/// timestamp 2026-08-10T00:00:00Z
/// adaptation_notes 3
/// porting_notes 1490
/// ```
pub fn render_baseline(report: &DebtReport) -> String {
    let mut out = format!("{BASELINE_MAGIC} {BASELINE_VERSION}\n");
    out.push_str(&format!("timestamp {}\n", report.timestamp));
    for (category, count) in &report.counts {
        out.push_str(&format!("{category} {count}\n"));
    }
    out
}

pub fn save_baseline(report: &DebtReport, path: &Path) -> Result<(), BaselineError> {
    std::fs::write(path, render_baseline(report)).map_err(|e| BaselineError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn parse_baseline(text: &str, path: &str) -> Result<DebtReport, BaselineError> {
    let malformed = |message: String| BaselineError::Malformed {
        path: path.to_string(),
        message,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| malformed("empty file".into()))?;
    match header.split_once(' ') {
        Some((magic, version)) if magic == BASELINE_MAGIC => {
            let v: u32 = version
                .trim()
                .parse()
                .map_err(|_| malformed(format!("bad version `{version}`")))?;
            if v != BASELINE_VERSION {
                return Err(malformed(format!("unsupported baseline version {v}")));
            }
        }
        _ => return Err(malformed(format!("unexpected header `{header}`"))),
    }
    let mut timestamp = String::new();
    let mut counts = BTreeMap::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(' ') else {
            return Err(malformed(format!("unexpected line `{line}`")));
        };
        if key == "timestamp" {
            timestamp = value.trim().to_string();
        } else {
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| malformed(format!("bad count for `{key}`")))?;
            counts.insert(key.to_string(), n);
        }
    }
    Ok(DebtReport { timestamp, counts })
}

pub fn load_baseline(path: &Path) -> Result<DebtReport, BaselineError> {
    let text = std::fs::read_to_string(path).map_err(|e| BaselineError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_baseline(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

pub fn render_human(report: &DebtReport, delta: Option<&DebtDelta>) -> String {
    let mut out = format!("Technical debt report ({})\n", report.timestamp);
    match delta {
        None => {
            for (category, count) in &report.counts {
                out.push_str(&format!("  {category:<24} {count}\n"));
            }
        }
        Some(delta) => {
            for row in &delta.rows {
                let marker = if row.delta > 0 {
                    format!("  +{} REGRESSION", row.delta)
                } else if row.delta < 0 {
                    format!("  {} (improved)", row.delta)
                } else {
                    String::new()
                };
                out.push_str(&format!(
                    "  {:<24} {} (baseline {}){}\n",
                    row.category, row.current, row.baseline, marker
                ));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct DebtJson<'a> {
    timestamp: &'a str,
    counts: &'a BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<&'a Vec<DeltaRow>>,
}

pub fn render_json(report: &DebtReport, delta: Option<&DebtDelta>) -> String {
    serde_json::to_string_pretty(&DebtJson {
        timestamp: &report.timestamp,
        counts: &report.counts,
        delta: delta.map(|d| &d.rows),
    })
    .expect("debt report serializes")
}
