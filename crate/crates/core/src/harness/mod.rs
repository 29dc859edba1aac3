//! End-to-end solving of problem files, metrics and reports.

pub mod metrics;
pub mod report;
pub mod solve;

pub use metrics::{chrf, exact_score};
pub use report::{load_problems, solve_all, Aggregate, RunReport};
pub use solve::{recount_exact, solve_problem, verify, ProblemReport, ProblemSolution, SolveOptions};
