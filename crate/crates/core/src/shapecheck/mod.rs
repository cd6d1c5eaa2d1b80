//! A small matrix-expression language with shape inference, used to audit
//! the dimensional consistency of the M-FLMS convergence derivation.
//!
//! Grammar: infix `+`, `-`, `*`, `.*` (element-wise product), `^.`
//! (element-wise power), postfix `'` (transpose), `|x|` (element-wise
//! modulus), parentheses, identifiers, numeric literals, and a single
//! top-level `=`. See [`parser`] for the full grammar.

pub mod ast;
pub mod corpus;
pub mod infer;
pub mod parser;

pub use ast::ShapeExpr;
pub use corpus::{audit_corpus, audit_corpus_with, golden_diff, AuditEntry, Expected, GOLDEN};
pub use infer::{
    check_system, constraint_for, infer_shape, infer_shape_with, Binding, CheckerRules, Constraint, Rule, Shape,
    ShapeEnv, ShapeError, ShapeVerdict,
};
pub use parser::{parse_expr, ParseError};
