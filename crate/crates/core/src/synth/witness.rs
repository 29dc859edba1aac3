//! Inverse semantics: from required outputs back to operators that produce
//! them.

use std::collections::BTreeSet;

use crate::align::TokenExample;
use crate::dsl::ast::{Predicate, Transformation};
use crate::dsl::eval::{eval_predicate, transformation_output};
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;

/// What one example must produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    /// A transformation must emit exactly these symbols.
    Emits(Vec<String>),
    /// A predicate must evaluate to this value.
    Holds(bool),
}

/// A disjunction of constraint sets. An operator satisfies the spec if it
/// satisfies every constraint of at least one set.
#[derive(Debug, Clone)]
pub struct Spec<'a> {
    pub alternatives: Vec<Vec<(&'a TokenExample, Expectation)>>,
}

impl<'a> Spec<'a> {
    /// The sampled example must produce its expected output.
    pub fn emits(example: &'a TokenExample) -> Self {
        let want = example.expected.iter().map(|t| t.symbol.clone()).collect();
        Spec { alternatives: vec![vec![(example, Expectation::Emits(want))]] }
    }

    /// Predicate spec: true on `positives`, false on `negatives`.
    pub fn separates(positives: &[&'a TokenExample], negatives: &[&'a TokenExample]) -> Self {
        let set = positives
            .iter()
            .map(|e| (*e, Expectation::Holds(true)))
            .chain(negatives.iter().map(|e| (*e, Expectation::Holds(false))))
            .collect();
        Spec { alternatives: vec![set] }
    }
}

fn emits(t: &Transformation, e: &TokenExample, want: &[String]) -> bool {
    transformation_output(t, &e.word, e.pos).is_some_and(|out| out.iter().eq(want.iter()))
}

/// Transformations that produce `want` at `e`.
fn transformations_for<S: Scalar>(e: &TokenExample, want: &[String], cfg: &SynthConfig<S>) -> Vec<Transformation> {
    let x = e.input().symbol.as_str();
    // CopyReplace(0) would be Identity, so only CopyInsert may copy the
    // token itself.
    let copies = |sym: &str, self_copy: bool| -> Vec<i32> {
        cfg.offsets()
            .into_iter()
            .filter(|&o| (self_copy || o != 0) && e.word.at(e.pos, o).is_some_and(|t| t.symbol == sym))
            .collect()
    };
    let mut out = Vec::new();
    match want {
        [] => out.push(Transformation::Delete),
        [y] if y == x => out.push(Transformation::Identity),
        [y] => {
            out.push(Transformation::ReplaceBy { from: x.to_string(), to: y.clone() });
            out.push(Transformation::ReplaceAnyBy { to: y.clone() });
            out.extend(copies(y, false).into_iter().map(Transformation::CopyReplace));
        }
        [first, rest @ ..] if first == x => {
            out.push(Transformation::Insert(rest.to_vec()));
            if let [only] = rest {
                out.extend(copies(only, true).into_iter().map(Transformation::CopyInsert));
            }
        }
        _ => {}
    }
    out
}

/// Every transformation consistent with all `Emits` constraints of some
/// alternative of `spec`. Empty when nothing fits.
pub fn witness_transformation<S: Scalar>(spec: &Spec<'_>, cfg: &SynthConfig<S>) -> Vec<Transformation> {
    let mut found = BTreeSet::new();
    for set in &spec.alternatives {
        let emits_only: Vec<(&TokenExample, &[String])> = set
            .iter()
            .filter_map(|(e, x)| match x {
                Expectation::Emits(w) => Some((*e, w.as_slice())),
                Expectation::Holds(_) => None,
            })
            .collect();
        let Some(&(first, want)) = emits_only.first() else { continue };
        for t in transformations_for(first, want, cfg) {
            if emits_only.iter().all(|(e, w)| emits(&t, e, w)) {
                found.insert(t);
            }
        }
    }
    found.into_iter().collect()
}

/// Edit distance between two symbol sequences.
pub fn levenshtein<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x.as_ref() != y.as_ref());
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// How an output relates to an example's expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Wrong,
    /// Closer to the expected output than leaving the token alone.
    Partial,
    Correct,
}

impl Verdict {
    pub fn credit(self) -> u32 {
        match self {
            Verdict::Wrong => 0,
            Verdict::Partial => 1,
            Verdict::Correct => 2,
        }
    }
}

pub fn judge<A: AsRef<str>>(e: &TokenExample, out: &[A]) -> Verdict {
    let want = e.expected_symbols();
    if out.len() == want.len() && out.iter().zip(&want).all(|(a, b)| a.as_ref() == *b) {
        return Verdict::Correct;
    }
    let stay = levenshtein(&[e.input().symbol.as_str()], &want);
    if levenshtein(out, &want) < stay {
        Verdict::Partial
    } else {
        Verdict::Wrong
    }
}

/// Single-token rewrites that move the sampled example closer to a
/// multi-token expectation it cannot reach in one step, e.g. `l` towards
/// `s h`. Only used when [`witness_transformation`] finds nothing; the rest
/// is left to later passes.
pub fn progress_transformations<S: Scalar>(e: &TokenExample, cfg: &SynthConfig<S>) -> Vec<Transformation> {
    let want = e.expected_symbols();
    let x = e.input().symbol.as_str();
    if want.len() < 2 || want.contains(&x) {
        return Vec::new();
    }
    let mut found = BTreeSet::new();
    for y in &want {
        found.insert(Transformation::ReplaceBy { from: x.to_string(), to: y.to_string() });
        found.insert(Transformation::ReplaceAnyBy { to: y.to_string() });
        for o in cfg.offsets() {
            if o != 0 && e.word.at(e.pos, o).is_some_and(|t| t.symbol == *y) {
                found.insert(Transformation::CopyReplace(o));
            }
        }
    }
    found
        .into_iter()
        .filter(|t| transformation_output(t, &e.word, e.pos).is_some_and(|o| judge(e, &o) == Verdict::Partial))
        .collect()
}

/// Base predicates (and their negations) true at `e`, within the window.
/// Negations are drawn from `vocabulary`, the symbols, features and tags seen
/// at each offset across the examples being separated.
pub fn predicates_true_at<S: Scalar>(
    e: &TokenExample,
    vocabulary: &[(i32, Predicate)],
    cfg: &SynthConfig<S>,
) -> Vec<Predicate> {
    let features = cfg.variant.allows_features();
    let mut out = BTreeSet::new();
    for o in cfg.offsets() {
        if let Some(t) = e.word.at(e.pos, o) {
            out.insert(Predicate::is_token(t.symbol.clone(), o));
            if features {
                for (f, &v) in t.features.iter() {
                    if v {
                        out.insert(Predicate::is(f.clone(), o));
                    }
                }
            }
            for tag in &t.tags {
                out.insert(Predicate::applied(tag.clone(), o));
            }
        }
    }
    for (o, p) in vocabulary {
        if !features && p.uses_features() {
            continue;
        }
        if *o >= -(cfg.window.0 as i32) && *o <= cfg.window.1 as i32 && !eval_predicate(p, &e.word, e.pos) {
            out.insert(p.clone().negate());
        }
    }
    out.into_iter().collect()
}

/// Positive base predicates occurring anywhere in `examples`, keyed by
/// offset; negations of these are the candidate `Not` guards.
pub fn vocabulary<S: Scalar>(examples: &[&TokenExample], cfg: &SynthConfig<S>) -> Vec<(i32, Predicate)> {
    let mut out = BTreeSet::new();
    for e in examples {
        for o in cfg.offsets() {
            if let Some(t) = e.word.at(e.pos, o) {
                out.insert((o, Predicate::is_token(t.symbol.clone(), o)));
                if cfg.variant.allows_features() {
                    for (f, &v) in t.features.iter() {
                        if v {
                            out.insert((o, Predicate::is(f.clone(), o)));
                        }
                    }
                }
                for tag in &t.tags {
                    out.insert((o, Predicate::applied(tag.clone(), o)));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Predicates (single base predicates or a single `Not` of one) true on
/// every positive and false on every negative of some alternative.
pub fn witness_predicate<S: Scalar>(spec: &Spec<'_>, cfg: &SynthConfig<S>) -> Vec<Predicate> {
    let mut found = BTreeSet::new();
    for set in &spec.alternatives {
        let labelled: Vec<(&TokenExample, bool)> = set
            .iter()
            .filter_map(|(e, x)| match x {
                Expectation::Holds(b) => Some((*e, *b)),
                Expectation::Emits(_) => None,
            })
            .collect();
        let all: Vec<&TokenExample> = labelled.iter().map(|(e, _)| *e).collect();
        let vocab = vocabulary(&all, cfg);
        let candidates: BTreeSet<Predicate> = match labelled.iter().find(|(_, b)| *b) {
            Some((pos, _)) => predicates_true_at(pos, &vocab, cfg).into_iter().collect(),
            // No positives: anything false everywhere will do, which only
            // negations of absent predicates could be; keep the base ones.
            None => vocab.iter().map(|(_, p)| p.clone()).chain(vocab.iter().map(|(_, p)| p.clone().negate())).collect(),
        };
        for p in candidates {
            if labelled.iter().all(|(e, b)| eval_predicate(&p, &e.word, e.pos) == *b) {
                found.insert(p);
            }
        }
    }
    found.into_iter().collect()
}
