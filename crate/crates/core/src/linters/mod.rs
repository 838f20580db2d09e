//! The shipped linter suite.

pub mod deprecated;
pub mod env_rules;
pub mod style;
pub mod tactic;
