use crate::dsl::ast::{Predicate, Program, Rule, Transformation};
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;

/// A rule together with its rank under some configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRule<S> {
    pub rule: Rule,
    pub score: S,
}

impl<S: Scalar> ScoredRule<S> {
    pub fn new(rule: Rule, cfg: &SynthConfig<S>) -> Self {
        let score = rank(&rule, cfg);
        ScoredRule { rule, score }
    }
}

fn literal<S: Scalar>(cfg: &SynthConfig<S>) -> S {
    -cfg.constant_penalty - cfg.length_penalty
}

fn offset<S: Scalar>(off: i32, cfg: &SynthConfig<S>) -> S {
    -cfg.offset_penalty * S::from_int(i64::from(off.unsigned_abs())) - cfg.length_penalty
}

fn node<S: Scalar>(op: &str, cfg: &SynthConfig<S>) -> S {
    cfg.op_score(op) - cfg.length_penalty
}

pub fn rank_predicate<S: Scalar>(p: &Predicate, cfg: &SynthConfig<S>) -> S {
    let own = node(p.op_name(), cfg);
    match p {
        Predicate::Not(inner) => own + rank_predicate(inner, cfg),
        _ => own + literal(cfg) + offset(p.offset(), cfg),
    }
}

pub fn rank_transformation<S: Scalar>(t: &Transformation, cfg: &SynthConfig<S>) -> S {
    let own = node(t.op_name(), cfg);
    match t {
        Transformation::ReplaceBy { .. } => own + literal(cfg) + literal(cfg),
        Transformation::ReplaceAnyBy { .. } => own + literal(cfg),
        Transformation::Insert(seq) => own + literal(cfg) * S::from_int(seq.len() as i64),
        Transformation::CopyReplace(off) | Transformation::CopyInsert(off) => own + offset(*off, cfg),
        Transformation::Delete | Transformation::Identity => own,
    }
}

/// Additive score of a rule: each node contributes its operator score minus
/// the length penalty; literal and offset arguments are nodes too and carry
/// their own penalties. Higher is better.
pub fn rank<S: Scalar>(rule: &Rule, cfg: &SynthConfig<S>) -> S {
    let guards = rule.guards.iter().fold(S::zero(), |acc, g| acc + node("IfThen", cfg) + rank_predicate(g, cfg));
    guards + rank_transformation(&rule.action, cfg)
}

/// Sum of the ranks of every rule in every pass.
pub fn program_score<S: Scalar>(p: &Program, cfg: &SynthConfig<S>) -> S {
    p.rules().fold(S::zero(), |acc, r| acc + rank(r, cfg))
}
