//! Learning phonological rewrite programs from aligned word pairs.
//!
//! Programs are cascades of guarded rewrite rules applied in passes
//! ([`dsl`]). [`synth`] proposes rules from single token examples,
//! [`ndsyn`] picks a covering subset and loops over passes, and [`harness`]
//! runs the whole thing on problem matrices.

pub mod align;
pub mod dsl;
pub mod error;
pub mod harness;
pub mod ndsyn;
pub mod problem;
pub mod scalar;
pub mod synth;
pub mod token;

pub use align::{align_pair, AlignParams, Alignment, TokenExample};
pub use dsl::{parse_program, pretty_print, run_program, Predicate, Program, Rule, RuleList, Transformation};
pub use error::{Error, ProblemError, SyntaxError};
pub use harness::{solve_problem, RunReport, SolveOptions};
pub use ndsyn::{synthesize_program, SynthesisOutcome};
pub use problem::{parse_problem, Category, Cell, Problem};
pub use scalar::Scalar;
pub use synth::{SynthConfig, Variant};
pub use token::{tokenize, FeatureTable, Token, TransformationTag, Word};

/// Configuration with float scores, used by the CLI.
pub type Config = SynthConfig<f64>;
/// Configuration with exact rational scores.
pub type ExactConfig = SynthConfig<num_rational::Ratio<i64>>;
/// Single-precision configuration.
pub type Config32 = SynthConfig<f32>;
