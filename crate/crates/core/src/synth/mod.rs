//! Deductive rule synthesis from token examples.

pub mod config;
pub mod rank;
pub mod search;
pub mod witness;

pub use config::{SynthConfig, Variant};
pub use rank::{program_score, rank, ScoredRule};
pub use search::synthesize_rules;
pub use witness::{witness_predicate, witness_transformation, Expectation, Spec};
