//! Identity catalog: a small line-oriented language for identities, its parser,
//! an evaluator on top of the engine modules, and the suite runner.
//!
//! ```text
//! suite appendix
//! indices i j k
//! note omega(j) against S(i,j;1,1)
//! check product: omega(j)[0] S(i,j;1,1) == S(i,j;1,2)[-1] vac
//! ```

pub mod ast;
pub mod eval;
pub mod parse;
pub mod run;

pub use ast::{Expr, IdentityRecord, Item, Kind};
pub use eval::{eval_text, parse_state, Env, Value};
pub use parse::{parse_catalog, Catalog};
pub use run::{emit_report, render_report, run_suite, CheckResult, Report, ReportFormat, RunOptions, Status, SUITES};

/// Text of the shipped catalog.
pub const STANDARD_TEXT: &str = concat!(include_str!("../../catalog/appendix.voa"), "\n", include_str!("../../catalog/identities.voa"));

/// Frozen record counts per suite, `suite count` per line.
pub const GOLDEN_COUNTS: &str = include_str!("../../catalog/counts.golden");

/// The shipped catalog.
pub fn standard() -> Catalog {
    parse_catalog(STANDARD_TEXT).expect("the shipped catalog parses")
}
