//! Top-down rule search from one sampled example.

use std::cmp::Ordering;

use crate::align::TokenExample;
use crate::dsl::ast::{Predicate, Rule, Transformation};
use crate::dsl::eval::{eval_predicate, transformation_output};
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;
use crate::synth::rank::{rank, rank_predicate, ScoredRule};
use crate::synth::witness::{
    judge, predicates_true_at, progress_transformations, vocabulary, witness_transformation, Spec, Verdict,
};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Truth of one candidate guard over the positives and negatives of an action.
struct GuardStats {
    pred: Predicate,
    pos: Bits,
    neg: Bits,
}

/// Orders rules best first: higher rank, then structural order.
pub fn by_rank<S: Scalar>(a: &ScoredRule<S>, b: &ScoredRule<S>) -> Ordering {
    b.score.cmp_score(&a.score).then_with(|| a.rule.cmp(&b.rule))
}

/// Splits the examples an action applies to into those it helps (unsolved
/// examples it gets right or closer) and those it harms. Solved examples it
/// leaves correct count for neither.
pub fn classify(action: &Transformation, examples: &[TokenExample], unsolved: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, e) in examples.iter().enumerate() {
        let Some(out) = transformation_output(action, &e.word, e.pos) else { continue };
        match (judge(e, &out), unsolved[i]) {
            (Verdict::Correct | Verdict::Partial, true) => pos.push(i),
            (Verdict::Correct, false) => {}
            _ => neg.push(i),
        }
    }
    (pos, neg)
}

fn guard_rules<S: Scalar>(
    action: &Transformation,
    sample: usize,
    examples: &[TokenExample],
    pos: &[usize],
    neg: &[usize],
    cfg: &SynthConfig<S>,
) -> Vec<Rule> {
    let mut rules = Vec::new();
    if neg.is_empty() {
        rules.push(Rule::always(action.clone()));
    }
    if cfg.max_guards == 0 {
        return rules;
    }
    let involved: Vec<&TokenExample> = pos.iter().chain(neg).map(|&i| &examples[i]).collect();
    let vocab = vocabulary(&involved, cfg);
    let stats: Vec<GuardStats> = predicates_true_at(&examples[sample], &vocab, cfg)
        .into_iter()
        .map(|pred| {
            let mut p = Bits::new(pos.len());
            let mut n = Bits::new(neg.len());
            for (k, &i) in pos.iter().enumerate() {
                if eval_predicate(&pred, &examples[i].word, examples[i].pos) {
                    p.set(k);
                }
            }
            for (k, &i) in neg.iter().enumerate() {
                if eval_predicate(&pred, &examples[i].word, examples[i].pos) {
                    n.set(k);
                }
            }
            GuardStats { pred, pos: p, neg: n }
        })
        .collect();

    // Guards that keep every positive and drop every negative.
    let is_strict = |s: &GuardStats| s.pos.count() == pos.len() && s.neg.count() == 0;
    rules.extend(stats.iter().filter(|s| is_strict(s)).map(|s| Rule::new(vec![s.pred.clone()], action.clone())));
    if neg.is_empty() {
        return rules;
    }

    // Strict pairs. Two cheap guards can outrank one expensive guard, so
    // these are searched even when a single guard already separates.
    if cfg.max_guards >= 2 {
        let full: Vec<&GuardStats> = stats.iter().filter(|s| s.pos.count() == pos.len() && !is_strict(s)).collect();
        let guard_rank = |p: &Predicate| rank_predicate(p, cfg);
        let mut pairs: Vec<(S, &GuardStats, &GuardStats)> = Vec::new();
        for (a, sa) in full.iter().enumerate() {
            for sb in &full[a + 1..] {
                if sa.neg.and(&sb.neg).count() == 0 {
                    pairs.push((guard_rank(&sa.pred) + guard_rank(&sb.pred), sa, sb));
                }
            }
        }
        pairs.sort_by(|x, y| y.0.cmp_score(&x.0).then_with(|| (&x.1.pred, &x.2.pred).cmp(&(&y.1.pred, &y.2.pred))));
        pairs.truncate(cfg.top_k);
        rules
            .extend(pairs.into_iter().map(|(_, a, b)| Rule::new(vec![a.pred.clone(), b.pred.clone()], action.clone())));
    }
    if !rules.is_empty() {
        return rules;
    }

    // Guards that drop every negative but only some positives; those with the
    // widest coverage first.
    let mut sound: Vec<(&GuardStats, S)> =
        stats.iter().filter(|s| s.neg.count() == 0).map(|s| (s, rank_predicate(&s.pred, cfg))).collect();
    if !sound.is_empty() {
        sound.sort_by(|(a, ra), (b, rb)| {
            b.pos.count().cmp(&a.pos.count()).then_with(|| rb.cmp_score(ra)).then_with(|| a.pred.cmp(&b.pred))
        });
        sound.truncate(cfg.top_k);
        return sound.into_iter().map(|(s, _)| Rule::new(vec![s.pred.clone()], action.clone())).collect();
    }

    // Grow a conjunction greedily, each step removing as many negatives and as
    // few positives as possible.
    let mut guards: Vec<Predicate> = Vec::new();
    let mut live_pos = full_mask(pos.len());
    let mut live_neg = full_mask(neg.len());
    while live_neg.count() > 0 && guards.len() < cfg.max_guards {
        let best = stats
            .iter()
            .filter(|s| !guards.contains(&s.pred))
            .map(|s| {
                let np = s.pos.and(&live_pos);
                let nn = s.neg.and(&live_neg);
                let gain = (live_neg.count() - nn.count()) as i64 - (live_pos.count() - np.count()) as i64;
                (gain, rank_predicate(&s.pred, cfg), s, np, nn)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp_score(&b.1)).then_with(|| b.2.pred.cmp(&a.2.pred)));
        let Some((gain, _, s, np, nn)) = best else { break };
        if gain <= 0 {
            break;
        }
        guards.push(s.pred.clone());
        live_pos = np;
        live_neg = nn;
    }
    if !guards.is_empty() {
        rules.push(Rule::new(guards, action.clone()));
    }
    rules
}

fn full_mask(len: usize) -> Bits {
    let mut b = Bits::new(len);
    for i in 0..len {
        b.set(i);
    }
    b
}

/// Candidate rules that produce the sampled example's expected output (or,
/// when no single step can, move it closer), best `top_k` by rank.
///
/// `unsolved[i]` marks the examples the current rule list still gets wrong;
/// guards are grown to keep the helped ones and drop the harmed ones.
pub fn synthesize_rules<S: Scalar>(
    sample: usize,
    examples: &[TokenExample],
    unsolved: &[bool],
    cfg: &SynthConfig<S>,
) -> Vec<ScoredRule<S>> {
    let e = &examples[sample];
    let mut actions = witness_transformation(&Spec::emits(e), cfg);
    if actions.is_empty() {
        actions = progress_transformations(e, cfg);
    }
    let mut out: Vec<ScoredRule<S>> = Vec::new();
    for action in &actions {
        let (pos, neg) = classify(action, examples, unsolved);
        if !pos.contains(&sample) {
            continue;
        }
        for rule in guard_rules(action, sample, examples, &pos, &neg, cfg) {
            debug_assert!(rule.guards_hold(&e.word, e.pos));
            out.push(ScoredRule { score: rank(&rule, cfg), rule });
        }
    }
    out.sort_by(by_rank);
    out.dedup_by(|a, b| a.rule == b.rule);
    out.truncate(cfg.top_k);
    out
}
