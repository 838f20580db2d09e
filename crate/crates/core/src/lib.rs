//! mathlint: a static-analysis and maintenance toolkit for a small,
//! Lean-flavoured module language.
//!
//! The crate is organised around the lint pipeline:
//!
//! * [`lexer`] / [`parser`] turn source text into a lossless, span-carrying
//!   command stream ([`ast::SyntaxCommand`]),
//! * [`environment`] folds command streams (in import order) into an
//!   [`environment::Environment`] of declarations, references and scope state,
//! * [`lint`] runs the registered syntax and environment linters and formats
//!   the resulting [`diagnostics::Diagnostic`]s,
//! * [`deprecation`], [`imports`] and [`debt`] implement the rename-migration
//!   system, import-graph analysis and technical-debt reporting on top,
//! * [`project`] discovers files and drives the whole pipeline, [`cli`] wraps
//!   it into the `mathlint` binary.

pub mod ast;
pub mod cli;
pub mod config;
pub mod debt;
pub mod deprecation;
pub mod diagnostics;
pub mod edits;
pub mod environment;
pub mod imports;
pub mod lexer;
pub mod lint;
pub mod linters;
pub mod parser;
pub mod project;
pub mod rules;
pub mod span;
pub mod token;

pub use diagnostics::{Diagnostic, FixEdit, OutputFormat, Severity};
pub use span::Span;
