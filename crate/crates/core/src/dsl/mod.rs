//! Rule language: AST, evaluation and surface syntax.

pub mod ast;
pub mod eval;
pub mod syntax;

pub use ast::{Predicate, Program, Rule, RuleList, Transformation};
pub use eval::{apply_transformation, eval_predicate, run_pass, run_program, TokenOutcome};
pub use syntax::{parse_program, parse_rule, pretty_print};
