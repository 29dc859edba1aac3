//! Operator semantics and program execution.
//!
//! Within a pass every position is rewritten against the word as it was when
//! the pass started; deletions and insertions only take effect once all
//! positions have been processed. Each token produced by a transformation is
//! tagged with that transformation, and the tags are visible to the next pass
//! only.

use crate::dsl::ast::{Predicate, Program, Rule, RuleList, Transformation};
use crate::token::{FeatureTable, Token, TransformationTag, Word};

/// Result of applying one transformation at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenOutcome {
    /// Tokens that take the place of the input token (empty for `Delete`).
    pub emitted: Vec<Token>,
    /// Tokens materialized after the emitted ones at the end of the pass.
    pub inserted_after: Vec<Token>,
    pub tag: Option<TransformationTag>,
}

impl TokenOutcome {
    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.emitted.iter().chain(&self.inserted_after).map(|t| t.symbol.as_str())
    }

    fn into_tokens(self) -> impl Iterator<Item = Token> {
        let tag = self.tag;
        self.emitted.into_iter().chain(self.inserted_after).map(move |t| match &tag {
            Some(tag) => t.with_tag(tag.clone()),
            None => t.untagged(),
        })
    }
}

/// Evaluates `p` for the token at `pos`. Offsets that leave the word make the
/// base predicate false, so `Not` of them is true.
pub fn eval_predicate(p: &Predicate, w: &Word, pos: usize) -> bool {
    match p {
        Predicate::IsToken { symbol, offset } => w.at(pos, *offset).is_some_and(|t| t.symbol == *symbol),
        Predicate::Is { feature, offset } => w.at(pos, *offset).is_some_and(|t| t.has_feature(feature)),
        Predicate::TransformationApplied { tag, offset } => w.at(pos, *offset).is_some_and(|t| t.has_tag(tag)),
        Predicate::Not(inner) => !eval_predicate(inner, w, pos),
    }
}

/// Output symbols of `t` at `pos`, or `None` when it does not apply.
///
/// Cheaper than [`apply_transformation`] since no tokens are built.
pub fn transformation_output<'a>(t: &'a Transformation, w: &'a Word, pos: usize) -> Option<Vec<&'a str>> {
    let own = w.tokens[pos].symbol.as_str();
    match t {
        Transformation::ReplaceBy { from, to } => (own == from).then(|| vec![to.as_str()]),
        Transformation::ReplaceAnyBy { to } => Some(vec![to.as_str()]),
        Transformation::Insert(seq) => {
            let mut out = Vec::with_capacity(seq.len() + 1);
            out.push(own);
            out.extend(seq.iter().map(String::as_str));
            Some(out)
        }
        Transformation::Delete => Some(Vec::new()),
        Transformation::CopyReplace(off) => w.at(pos, *off).map(|src| vec![src.symbol.as_str()]),
        Transformation::CopyInsert(off) => w.at(pos, *off).map(|src| vec![own, src.symbol.as_str()]),
        Transformation::Identity => Some(vec![own]),
    }
}

/// The tag `t` leaves on its output at `pos`.
pub fn transformation_tag(t: &Transformation, w: &Word, pos: usize) -> Option<TransformationTag> {
    let payload = match t {
        Transformation::ReplaceBy { from, to } => {
            if w.tokens[pos].symbol != *from {
                return None;
            }
            Some(to.clone())
        }
        Transformation::ReplaceAnyBy { to } => Some(to.clone()),
        Transformation::Insert(seq) => Some(seq.join(" ")),
        Transformation::Delete | Transformation::Identity => None,
        Transformation::CopyReplace(off) | Transformation::CopyInsert(off) => Some(w.at(pos, *off)?.symbol.clone()),
    };
    Some(TransformationTag::new(t.op_name(), payload))
}

/// Applies `t` at `pos`; `None` means the transformation does not apply
/// (a `ReplaceBy` on another symbol, or a copy offset outside the word).
pub fn apply_transformation(t: &Transformation, w: &Word, pos: usize, table: &FeatureTable) -> Option<TokenOutcome> {
    let tag = transformation_tag(t, w, pos)?;
    let input = &w.tokens[pos];
    let (emitted, inserted_after) = match t {
        Transformation::ReplaceBy { to, .. } | Transformation::ReplaceAnyBy { to } => (vec![table.token(to)], vec![]),
        Transformation::Insert(seq) => (vec![input.clone()], seq.iter().map(|s| table.token(s)).collect()),
        Transformation::Delete => (vec![], vec![]),
        Transformation::CopyReplace(off) => (vec![w.at(pos, *off)?.clone()], vec![]),
        Transformation::CopyInsert(off) => (vec![input.clone()], vec![w.at(pos, *off)?.clone()]),
        Transformation::Identity => (vec![input.clone()], vec![]),
    };
    Some(TokenOutcome { emitted, inserted_after, tag: Some(tag) })
}

impl Rule {
    pub fn guards_hold(&self, w: &Word, pos: usize) -> bool {
        self.guards.iter().all(|g| eval_predicate(g, w, pos))
    }

    /// The rule's outcome at `pos`, or `None` if a guard fails or the action
    /// does not apply.
    pub fn apply(&self, w: &Word, pos: usize, table: &FeatureTable) -> Option<TokenOutcome> {
        if !self.guards_hold(w, pos) {
            return None;
        }
        apply_transformation(&self.action, w, pos, table)
    }

    /// Symbol-only version of [`Rule::apply`].
    pub fn output<'a>(&'a self, w: &'a Word, pos: usize) -> Option<Vec<&'a str>> {
        if !self.guards_hold(w, pos) {
            return None;
        }
        transformation_output(&self.action, w, pos)
    }
}

impl RuleList {
    /// First applicable rule at `pos` with its outcome.
    pub fn fire(&self, w: &Word, pos: usize, table: &FeatureTable) -> Option<(usize, TokenOutcome)> {
        self.rules.iter().enumerate().find_map(|(i, r)| r.apply(w, pos, table).map(|o| (i, o)))
    }
}

/// One pass of `Map(disjunction, input_tokens)`.
pub fn run_pass(rules: &RuleList, w: &Word, table: &FeatureTable) -> Word {
    let mut out = Vec::with_capacity(w.len());
    for pos in 0..w.len() {
        match rules.fire(w, pos, table) {
            Some((_, outcome)) => out.extend(outcome.into_tokens()),
            None => out.push(w.tokens[pos].clone().untagged()),
        }
    }
    Word::new(out)
}

/// Runs every pass in order. Tags are cleared on entry and stripped from the
/// result.
pub fn run_program(p: &Program, w: &Word, table: &FeatureTable) -> Word {
    let mut cur = w.clone().strip_tags();
    for pass in &p.passes {
        cur = run_pass(pass, &cur, table);
    }
    cur.strip_tags()
}
