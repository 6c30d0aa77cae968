//! Traced evaluation, replay and backward slicing for a nested relational
//! calculus over labelled collections.
//!
//! Evaluating a query records a trace. Replaying the trace against changed
//! inputs follows the same control flow. Slicing the trace with an output
//! pattern yields the part of the input, the trace and the query that the
//! chosen part of the output depends on.

pub mod error;
pub mod eval;
pub mod expr;
pub mod json;
pub mod label;
pub mod oracle;
pub mod pattern;
pub mod qslice;
pub mod replay;
pub mod report;
pub mod slice;
pub mod syntax;
pub mod table;
pub mod trace;
pub mod types;
pub mod value;

pub use error::{Error, Result};
pub use eval::{eval, eval_value};
pub use expr::{Expr, PrimOp, Type};
pub use label::{Atom, Label};
pub use pattern::{
    diamondize, equiv_at, field_project, label_project, leq, lub, lub_env, matches, pattern_union,
    prepend_pattern, resolve, restrict, singleton_extract, Pattern, PatternEnv, Tail,
};
pub use qslice::{diff_query_slice, leq_expr, lub_expr, query_slice, query_slice_set};
pub use replay::replay;
pub use slice::{diff_slice, slice, slice_trace_set};
pub use syntax::{parse_pattern, parse_query, parse_type, parse_value, render_diff, render_trace};
pub use table::{load_table, Table};
pub use trace::{is_subtrace, Trace, TraceSet};
pub use types::{typecheck_expr, typecheck_trace, TypeEnv};
pub use value::{disjoint_union, prepend_label, Const, Env, Name, Value};
