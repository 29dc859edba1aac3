//! Rule selection by set cover, and the multi-pass synthesis loop.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::align::{align_pair, examples_for, TokenExample};
use crate::dsl::ast::{Program, Rule, RuleList};
use crate::dsl::eval::{run_pass, run_program};
use crate::problem::Category;
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;
use crate::synth::rank::ScoredRule;
use crate::synth::search::{by_rank, synthesize_rules};
use crate::synth::witness::{judge, Verdict};
use crate::token::{FeatureTable, Word};

/// Upper bound on sample/synthesize/select rounds within one pass.
pub const MAX_ITERATIONS: usize = 16;

/// How one rule fares on each example when it is the only rule.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRecord<S> {
    pub rule: ScoredRule<S>,
    pub correct: BTreeSet<usize>,
    /// Fires and moves the example closer to its expected output.
    pub partial: BTreeSet<usize>,
    pub incorrect: BTreeSet<usize>,
    /// Guards fail or the action does not apply.
    pub abstained: BTreeSet<usize>,
}

pub fn coverage<S: Scalar>(rule: &ScoredRule<S>, examples: &[TokenExample]) -> CoverageRecord<S> {
    let mut rec = CoverageRecord {
        rule: rule.clone(),
        correct: BTreeSet::new(),
        partial: BTreeSet::new(),
        incorrect: BTreeSet::new(),
        abstained: BTreeSet::new(),
    };
    for (i, e) in examples.iter().enumerate() {
        let set = match rule.rule.output(&e.word, e.pos) {
            None => &mut rec.abstained,
            Some(out) => match judge(e, &out) {
                Verdict::Correct => &mut rec.correct,
                Verdict::Partial => &mut rec.partial,
                Verdict::Wrong => &mut rec.incorrect,
            },
        };
        set.insert(i);
    }
    rec
}

/// A rule picked by [`select_rules`] and what it changed when picked.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<S> {
    pub rule: ScoredRule<S>,
    /// Examples it made correct.
    pub fixed: usize,
    /// Examples it moved closer without making them correct.
    pub improved: usize,
    /// Examples that were correct before and no longer are.
    pub broken: usize,
}

struct Candidate<S> {
    rule: ScoredRule<S>,
    /// (example, credit) for every example the rule fires on.
    fires: Vec<(usize, u32)>,
}

/// Greedy cover state. The selected rules form a first-match cascade in
/// rank order, so a candidate only affects the examples where it would be
/// the first rule to fire.
struct Selector<'a, S> {
    examples: &'a [TokenExample],
    cands: Vec<Candidate<S>>,
    known: BTreeSet<Rule>,
    selected: Vec<usize>,
    /// Per example: the candidate that currently fires first, and its credit.
    owner: Vec<Option<usize>>,
    credit: Vec<u32>,
    log: Vec<Selection<S>>,
}

impl<'a, S: Scalar> Selector<'a, S> {
    fn new(examples: &'a [TokenExample]) -> Self {
        let credit = examples.iter().map(|e| judge(e, &[e.input().symbol.as_str()]).credit()).collect();
        Selector {
            examples,
            cands: Vec::new(),
            known: BTreeSet::new(),
            selected: Vec::new(),
            owner: vec![None; examples.len()],
            credit,
            log: Vec::new(),
        }
    }

    fn add_candidates(&mut self, rules: Vec<ScoredRule<S>>) {
        let fresh: Vec<ScoredRule<S>> = rules.into_iter().filter(|r| self.known.insert(r.rule.clone())).collect();
        let examples = self.examples;
        let built: Vec<Candidate<S>> = fresh
            .into_par_iter()
            .map(|rule| {
                let fires = examples
                    .iter()
                    .enumerate()
                    .filter_map(|(i, e)| rule.rule.output(&e.word, e.pos).map(|o| (i, judge(e, &o).credit())))
                    .collect();
                Candidate { rule, fires }
            })
            .collect();
        self.cands.extend(built);
    }

    fn precedes(&self, a: usize, b: usize) -> bool {
        by_rank(&self.cands[a].rule, &self.cands[b].rule) == Ordering::Less
    }

    fn gain(&self, c: usize) -> (i64, usize, usize, usize) {
        let (mut gain, mut fixed, mut improved, mut broken) = (0i64, 0, 0, 0);
        for &(i, v) in &self.cands[c].fires {
            if self.owner[i].is_some_and(|o| !self.precedes(c, o)) {
                continue;
            }
            let cur = self.credit[i];
            gain += i64::from(v) - i64::from(cur);
            match (cur, v) {
                (c, 2) if c < 2 => fixed += 1,
                (2, v) if v < 2 => broken += 1,
                (c, v) if v > c => improved += 1,
                _ => {}
            }
        }
        (gain, fixed, improved, broken)
    }

    /// Adds rules while some candidate has positive net gain. Returns how many
    /// were added.
    fn run(&mut self) -> usize {
        let mut added = 0;
        loop {
            let chosen: BTreeSet<usize> = self.selected.iter().copied().collect();
            let best = (0..self.cands.len())
                .filter(|c| !chosen.contains(c))
                .map(|c| (c, self.gain(c)))
                .filter(|(_, g)| g.0 > 0)
                .min_by(|(a, ga), (b, gb)| {
                    gb.0.cmp(&ga.0).then_with(|| by_rank(&self.cands[*a].rule, &self.cands[*b].rule))
                });
            let Some((c, (_, fixed, improved, broken))) = best else { break };
            for &(i, v) in &self.cands[c].fires {
                if self.owner[i].is_none_or(|o| self.precedes(c, o)) {
                    self.owner[i] = Some(c);
                    self.credit[i] = v;
                }
            }
            self.selected.push(c);
            self.log.push(Selection { rule: self.cands[c].rule.clone(), fixed, improved, broken });
            added += 1;
        }
        added
    }

    fn unsolved(&self) -> Vec<usize> {
        (0..self.examples.len()).filter(|&i| self.credit[i] < 2).collect()
    }

    /// Selected rules that are first to fire somewhere, best rank first.
    fn rule_list(&self) -> RuleList {
        let owners: BTreeSet<usize> = self.owner.iter().flatten().copied().collect();
        let mut keep: Vec<&ScoredRule<S>> =
            self.selected.iter().filter(|c| owners.contains(c)).map(|&c| &self.cands[c].rule).collect();
        keep.sort_by(|a, b| by_rank(a, b));
        RuleList::new(keep.into_iter().map(|r| r.rule.clone()).collect())
    }
}

/// Greedy set cover over `candidates`: repeatedly adds the rule with the
/// largest net gain (two points per example made correct, one per example
/// moved closer, minus two per correct example broken), ties to the higher
/// rank. Rules are listed by descending rank.
pub fn select_rules<S: Scalar>(candidates: &[ScoredRule<S>], examples: &[TokenExample]) -> RuleList {
    select_with_log(candidates, examples).0
}

pub fn select_with_log<S: Scalar>(
    candidates: &[ScoredRule<S>],
    examples: &[TokenExample],
) -> (RuleList, Vec<Selection<S>>) {
    let mut sel = Selector::new(examples);
    sel.add_candidates(candidates.to_vec());
    sel.run();
    (sel.rule_list(), sel.log)
}

/// Outcome of one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct PassResult<S> {
    pub rules: RuleList,
    pub solved: BTreeSet<usize>,
    pub unsolved: BTreeSet<usize>,
    /// Every example sampled, in sampling order.
    pub sampled: Vec<usize>,
    pub candidates: usize,
    pub selections: Vec<Selection<S>>,
}

/// Samples unsolved examples, synthesizes candidates for each, and selects a
/// rule list; repeated until everything is solved or a round adds nothing.
pub fn ndsyn_pass<S: Scalar>(examples: &[TokenExample], cfg: &SynthConfig<S>, rng: &mut ChaCha8Rng) -> PassResult<S> {
    assert!(!examples.is_empty(), "ndsyn_pass needs at least one example");
    let mut sel = Selector::new(examples);
    let mut sampled = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let unsolved = sel.unsolved();
        if unsolved.is_empty() {
            break;
        }
        let mask: Vec<bool> = (0..examples.len()).map(|i| sel.credit[i] < 2).collect();
        let picks: Vec<usize> = unsolved.choose_multiple(rng, cfg.samples_per_iteration).copied().collect();
        let exhausted = picks.len() == unsolved.len();
        let found: Vec<Vec<ScoredRule<S>>> =
            picks.par_iter().map(|&s| synthesize_rules(s, examples, &mask, cfg)).collect();
        sampled.extend(&picks);
        sel.add_candidates(found.into_iter().flatten().collect());
        if sel.run() == 0 && exhausted {
            break;
        }
    }
    let rules = sel.rule_list();
    let mut solved = BTreeSet::new();
    let mut unsolved = BTreeSet::new();
    for (i, e) in examples.iter().enumerate() {
        let out: Vec<&str> = rules
            .rules
            .iter()
            .find_map(|r| r.output(&e.word, e.pos))
            .unwrap_or_else(|| vec![e.input().symbol.as_str()]);
        if judge(e, &out) == Verdict::Correct {
            solved.insert(i);
        } else {
            unsolved.insert(i);
        }
    }
    PassResult { rules, solved, unsolved, sampled, candidates: sel.cands.len(), selections: sel.log }
}

/// Non-matching alignment columns summed over all pairs; zero exactly when
/// every word equals its target.
pub fn residual<S: Scalar>(current: &[Word], targets: &[Word], cfg: &SynthConfig<S>) -> usize {
    current
        .iter()
        .zip(targets)
        .map(|(c, t)| match align_pair(c, t, &cfg.align) {
            Ok(a) => a.residual(c, t),
            Err(_) => c.len().max(t.len()),
        })
        .sum()
}

/// A learned program and how it was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOutcome<S> {
    pub program: Program,
    pub passes: Vec<PassResult<S>>,
    /// Per training pair: does the program reproduce the target exactly.
    pub reproduced: Vec<bool>,
}

impl<S> SynthesisOutcome<S> {
    pub fn solved(&self) -> usize {
        self.reproduced.iter().filter(|&&b| b).count()
    }

    pub fn total(&self) -> usize {
        self.reproduced.len()
    }

    pub fn accuracy(&self) -> f64 {
        if self.reproduced.is_empty() {
            0.0
        } else {
            self.solved() as f64 / self.total() as f64
        }
    }
}

/// Learns a multi-pass program mapping each source word to its target.
///
/// Each pass realigns the words as rewritten so far with their targets, so
/// the next pass sees the tags left by the previous one. A pass is kept only
/// if it strictly reduces the residual; the loop stops when nothing is left,
/// when a pass selects no rule, or after `max_passes`.
pub fn synthesize_program<S: Scalar>(
    pairs: &[(Word, Word)],
    category: Category,
    table: &FeatureTable,
    cfg: &SynthConfig<S>,
) -> SynthesisOutcome<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current: Vec<Word> = pairs.iter().map(|(s, _)| s.clone().strip_tags()).collect();
    let targets: Vec<Word> = pairs.iter().map(|(_, t)| t.clone()).collect();
    let mut program = Program::default();
    let mut passes = Vec::new();
    let mut left = residual(&current, &targets, cfg);
    for pass in 0..cfg.max_passes {
        if left == 0 {
            break;
        }
        let mut examples = Vec::new();
        for (c, t) in current.iter().zip(&targets) {
            match examples_for(category, c, t, &cfg.align) {
                Ok(ex) => examples.extend(ex),
                Err(e) => log::warn!("skipping pair {c} / {t}: {e}"),
            }
        }
        if examples.is_empty() {
            break;
        }
        let result = ndsyn_pass(&examples, cfg, &mut rng);
        if result.rules.is_empty() {
            break;
        }
        let next: Vec<Word> = current.iter().map(|w| run_pass(&result.rules, w, table)).collect();
        let after = residual(&next, &targets, cfg);
        log::debug!("pass {}: {} rules, residual {left} -> {after}", pass + 1, result.rules.len());
        if after >= left {
            break;
        }
        program.passes.push(result.rules.clone());
        passes.push(result);
        current = next;
        left = after;
    }
    let reproduced = pairs.iter().map(|(s, t)| run_program(&program, s, table).same_symbols(t)).collect();
    SynthesisOutcome { program, passes, reproduced }
}
