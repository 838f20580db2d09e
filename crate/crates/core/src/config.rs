//! Configuration loading and defaults.
//!
//! One well-known file, `mathlint.toml`, at the project root. Unknown keys
//! and unknown rule names are hard errors so typos cannot silently disable a
//! rule. All defaults are documented by `mathlint rules`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::debt;
use crate::diagnostics::Severity;
use crate::environment::DEFAULT_BUILTINS;
use crate::imports::DirectoryRule;
use crate::linters::tactic::{Flexibility, GoalEffect, TacticTable};
use crate::rules;

pub const CONFIG_FILE_NAME: &str = "mathlint.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("unknown rule `{key}` in config (check for typos; see `mathlint rules`)")]
    UnknownRule { key: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StyleConfig {
    pub max_line_length: usize,
    pub forbidden_imports: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingConfig {
    pub watched_options: Vec<String>,
    pub global_only_attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PedagogyConfig {
    pub prop_heads: Vec<String>,
    pub papercut_guards: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeprecationConfig {
    pub grace_days: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DebtConfig {
    pub porting_note_prefixes: Vec<String>,
    pub adaptation_markers: Vec<String>,
    pub backcompat_prefixes: Vec<String>,
    /// Categories whose increase fails `debt report --fail-on-regression`.
    pub ratchet: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    /// Names usable without declaration (the ambient prelude).
    pub builtins: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LintConfig {
    pub enabled: BTreeMap<String, bool>,
    pub severities: BTreeMap<String, Severity>,
    pub style: StyleConfig,
    pub tracking: TrackingConfig,
    pub tactics: TacticTable,
    pub pedagogy: PedagogyConfig,
    pub deprecation: DeprecationConfig,
    pub directories: Vec<DirectoryRule>,
    pub debt: DebtConfig,
    pub env: EnvConfig,
    /// Grandfathered (file, rule) pairs, coarse by design.
    pub exceptions: Vec<(String, String)>,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig {
            enabled: BTreeMap::new(),
            severities: BTreeMap::new(),
            style: StyleConfig {
                max_line_length: 100,
                forbidden_imports: Vec::new(),
            },
            tracking: TrackingConfig {
                watched_options: vec![
                    "maxHeartbeats".to_string(),
                    "synthInstance.maxHeartbeats".to_string(),
                ],
                global_only_attributes: vec!["simp".to_string(), "instance".to_string()],
            },
            tactics: TacticTable::default(),
            pedagogy: PedagogyConfig {
                prop_heads: ["Eq", "Iff", "And", "Or", "Not", "Le", "Lt", "Dvd", "=", "≤", "<"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                papercut_guards: vec![
                    "le".to_string(),
                    "lt".to_string(),
                    "sub_pos".to_string(),
                ],
            },
            deprecation: DeprecationConfig { grace_days: 180 },
            directories: Vec::new(),
            debt: DebtConfig {
                porting_note_prefixes: vec!["Porting note".to_string()],
                adaptation_markers: vec!["#adaptation_note".to_string()],
                backcompat_prefixes: vec!["backward.".to_string()],
                ratchet: debt::CATEGORIES.iter().map(|s| s.to_string()).collect(),
            },
            env: EnvConfig {
                builtins: DEFAULT_BUILTINS.iter().map(|s| s.to_string()).collect(),
            },
            exceptions: Vec::new(),
        }
    }
}

impl LintConfig {
    /// Most specific `enabled` entry covering `rule` decides; default is on.
    pub fn rule_enabled(&self, rule: &str) -> bool {
        let mut suffix = rule;
        loop {
            if let Some(b) = self.enabled.get(suffix) {
                return *b;
            }
            match suffix.rfind('.') {
                Some(i) => suffix = &suffix[..i],
                None => return true,
            }
        }
    }

    pub fn severity_for(&self, rule: &str) -> Severity {
        self.severities
            .get(rule)
            .copied()
            .unwrap_or_else(|| rules::default_severity(rule))
    }

    pub fn is_exception(&self, file: &str, rule: &str) -> bool {
        self.exceptions.iter().any(|(f, r)| {
            f == file && (r == rule || rule.starts_with(&format!("{r}.")))
        })
    }
}

// ---------------------------------------------------------------------------
// raw TOML shape
// ---------------------------------------------------------------------------

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lint: Option<RawLint>,
    severities: Option<BTreeMap<String, String>>,
    style: Option<RawStyle>,
    tracking: Option<RawTracking>,
    tactics: Option<RawTactics>,
    pedagogy: Option<RawPedagogy>,
    deprecation: Option<RawDeprecation>,
    directories: Option<RawDirectories>,
    debt: Option<RawDebt>,
    env: Option<RawEnv>,
    exceptions: Option<RawExceptions>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLint {
    enabled: Option<BTreeMap<String, bool>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawStyle {
    max_line_length: Option<usize>,
    forbidden_imports: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTracking {
    watched_options: Option<Vec<String>>,
    global_only_attributes: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTactics {
    flexible: Option<Vec<String>>,
    normalizing: Option<Vec<String>>,
    rigid: Option<Vec<String>>,
    closes: Option<Vec<String>>,
    noop: Option<Vec<String>>,
    introduces: Option<Vec<String>>,
    splits: Option<BTreeMap<String, u32>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPedagogy {
    prop_heads: Option<Vec<String>>,
    papercut_guards: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawDeprecation {
    grace_days: Option<i64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawDirectories {
    rule: Option<BTreeMap<String, RawDirRule>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDirRule {
    from: String,
    forbidden: Option<Vec<String>>,
    allowed: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawDebt {
    porting_note_prefixes: Option<Vec<String>>,
    adaptation_markers: Option<Vec<String>>,
    backcompat_prefixes: Option<Vec<String>>,
    ratchet: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawEnv {
    builtins: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawExceptions {
    /// `"path/to/File.lean:rule.name"` entries.
    exceptions: Option<Vec<String>>,
}

fn validate_rule_key(key: &str) -> Result<(), ConfigError> {
    if rules::is_rule_or_group(key) {
        Ok(())
    } else {
        Err(ConfigError::UnknownRule {
            key: key.to_string(),
        })
    }
}

/// Parse a config document; `path` is only used in error messages.
pub fn parse_config_str(text: &str, path: &Path) -> Result<LintConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut config = LintConfig::default();

    if let Some(lint) = raw.lint {
        for (key, value) in lint.enabled.unwrap_or_default() {
            validate_rule_key(&key)?;
            config.enabled.insert(key, value);
        }
    }
    for (key, value) in raw.severities.unwrap_or_default() {
        validate_rule_key(&key)?;
        let sev: Severity = value
            .parse()
            .map_err(|e: String| ConfigError::Invalid(e))?;
        config.severities.insert(key, sev);
    }
    if let Some(style) = raw.style {
        if let Some(n) = style.max_line_length {
            if n == 0 {
                return Err(ConfigError::Invalid(
                    "style.max_line_length must be positive".to_string(),
                ));
            }
            config.style.max_line_length = n;
        }
        if let Some(v) = style.forbidden_imports {
            config.style.forbidden_imports = v;
        }
    }
    if let Some(tracking) = raw.tracking {
        if let Some(v) = tracking.watched_options {
            config.tracking.watched_options = v;
        }
        if let Some(v) = tracking.global_only_attributes {
            config.tracking.global_only_attributes = v;
        }
    }
    if let Some(tactics) = raw.tactics {
        for name in tactics.flexible.unwrap_or_default() {
            config.tactics.set_flexibility(&name, Flexibility::Flexible);
        }
        for name in tactics.normalizing.unwrap_or_default() {
            config
                .tactics
                .set_flexibility(&name, Flexibility::Normalizing);
        }
        for name in tactics.rigid.unwrap_or_default() {
            config.tactics.set_flexibility(&name, Flexibility::Rigid);
        }
        for name in tactics.closes.unwrap_or_default() {
            config.tactics.set_effect(&name, GoalEffect::Closes);
        }
        for name in tactics.noop.unwrap_or_default() {
            config.tactics.set_noop(&name, true);
        }
        for name in tactics.introduces.unwrap_or_default() {
            config.tactics.set_effect(&name, GoalEffect::Introduces);
        }
        for (name, k) in tactics.splits.unwrap_or_default() {
            if k < 2 {
                return Err(ConfigError::Invalid(format!(
                    "tactics.splits.{name} must be at least 2, got {k}"
                )));
            }
            config.tactics.set_effect(&name, GoalEffect::Splits(k));
        }
    }
    if let Some(pedagogy) = raw.pedagogy {
        if let Some(v) = pedagogy.prop_heads {
            config.pedagogy.prop_heads = v;
        }
        if let Some(v) = pedagogy.papercut_guards {
            for g in &v {
                if !matches!(g.as_str(), "le" | "lt" | "sub_pos") {
                    return Err(ConfigError::Invalid(format!(
                        "unknown papercut guard `{g}` (known: le, lt, sub_pos)"
                    )));
                }
            }
            config.pedagogy.papercut_guards = v;
        }
    }
    if let Some(dep) = raw.deprecation {
        if let Some(days) = dep.grace_days {
            if days < 0 {
                return Err(ConfigError::Invalid(
                    "deprecation.grace_days must not be negative".to_string(),
                ));
            }
            config.deprecation.grace_days = days;
        }
    }
    if let Some(dirs) = raw.directories {
        let mut keyed: Vec<(String, RawDirRule)> = dirs.rule.unwrap_or_default().into_iter().collect();
        // numeric keys sort numerically: rule.2 before rule.10
        keyed.sort_by_key(|(k, _)| (k.parse::<u64>().ok(), k.clone()));
        for (key, rule) in keyed {
            let forbidden = rule.forbidden.unwrap_or_default();
            let allowed = rule.allowed.unwrap_or_default();
            if forbidden.is_empty() == allowed.is_empty() {
                return Err(ConfigError::Invalid(format!(
                    "directories.rule.{key} needs exactly one of `forbidden` or `allowed`"
                )));
            }
            config.directories.push(DirectoryRule {
                from_prefix: rule.from,
                forbidden_prefixes: forbidden,
                allowed_prefixes: allowed,
            });
        }
    }
    if let Some(debt_raw) = raw.debt {
        if let Some(v) = debt_raw.porting_note_prefixes {
            config.debt.porting_note_prefixes = v;
        }
        if let Some(v) = debt_raw.adaptation_markers {
            config.debt.adaptation_markers = v;
        }
        if let Some(v) = debt_raw.backcompat_prefixes {
            config.debt.backcompat_prefixes = v;
        }
        if let Some(v) = debt_raw.ratchet {
            for c in &v {
                if !debt::CATEGORIES.contains(&c.as_str()) {
                    return Err(ConfigError::Invalid(format!(
                        "unknown debt category `{c}` in debt.ratchet"
                    )));
                }
            }
            config.debt.ratchet = v;
        }
    }
    if let Some(env) = raw.env {
        if let Some(v) = env.builtins {
            config.env.builtins = v;
        }
    }
    if let Some(exceptions) = raw.exceptions {
        for entry in exceptions.exceptions.unwrap_or_default() {
            let Some((file, rule)) = entry.rsplit_once(':') else {
                return Err(ConfigError::Invalid(format!(
                    "exception `{entry}` must look like `path/File.lean:rule.name`"
                )));
            };
            let rule = rule.trim();
            validate_rule_key(rule)?;
            config
                .exceptions
                .push((file.trim().to_string(), rule.to_string()));
        }
    }
    Ok(config)
}

pub fn load_config_file(path: &Path) -> Result<LintConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_str(&text, path)
}

/// Find and load the project config: an explicit `--config` path wins,
/// otherwise each search root is walked upward looking for `mathlint.toml`.
/// No file means shipped defaults.
pub fn load_config(
    explicit: Option<&Path>,
    search_roots: &[PathBuf],
) -> Result<(LintConfig, Option<PathBuf>), ConfigError> {
    if let Some(path) = explicit {
        return Ok((load_config_file(path)?, Some(path.to_path_buf())));
    }
    for root in search_roots {
        let mut dir = Some(root.as_path());
        while let Some(d) = dir {
            let candidate = d.join(CONFIG_FILE_NAME);
            if candidate.is_file() {
                return Ok((load_config_file(&candidate)?, Some(candidate)));
            }
            dir = d.parent();
        }
    }
    Ok((LintConfig::default(), None))
}
