//! Closure logic: formulas, their parser and printer, and evaluation over a
//! [`SpaceModel`](crate::spaces::SpaceModel).

mod ast;
mod eval;
pub mod ops;
mod parser;

pub use ast::Formula;
pub use eval::{
    check_until_leq_surrounded, context_space, eval, eval_boundary, eval_formula, eval_reach, eval_surrounded, eval_until,
    eval_with, is_connected, Context, EvalOptions, UntilSurroundReport, IMPLICIT_VAR, MAX_CONTEXT,
};
pub use ops::Connectivity;
pub use parser::parse_formula;
