use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::align::{premap_matrix, premap_word, TranslitMap};
use crate::dsl::ast::Program;
use crate::dsl::eval::run_program;
use crate::dsl::syntax::pretty_print;
use crate::error::Error;
use crate::harness::metrics::{chrf, exact_score, CHRF_BETA, CHRF_MAX_N};
use crate::ndsyn::{synthesize_program, SynthesisOutcome};
use crate::problem::{column_pair_tasks, Category, ColumnTask, Problem};
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;
use crate::synth::rank::program_score;
use crate::token::Word;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Train only the column pairs some test cell can use.
    pub lazy: bool,
}

/// A program learned for one ordered column pair.
#[derive(Debug, Clone)]
pub struct PairProgram<S> {
    pub source: usize,
    pub target: usize,
    /// Training word pairs, source side already premapped.
    pub pairs: Vec<(Word, Word)>,
    pub translit: TranslitMap,
    pub outcome: SynthesisOutcome<S>,
    pub score: S,
}

impl<S: Scalar> PairProgram<S> {
    pub fn program(&self) -> &Program {
        &self.outcome.program
    }
}

/// Prediction for one test cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub row: usize,
    pub col: usize,
    /// Column the input was taken from; `None` when no column was usable.
    pub source: Option<usize>,
    pub predicted: Option<String>,
    pub gold: String,
    pub correct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chrf: Option<f64>,
    pub program: Option<String>,
    /// Set when no source column had a trained program.
    pub unsolvable: bool,
}

/// Summary of one trained column pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub source: usize,
    pub target: usize,
    pub passes: usize,
    pub rules: usize,
    pub score: f64,
    pub training_solved: usize,
    pub training_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemReport {
    pub id: String,
    pub category: Category,
    pub exact: f64,
    /// Mean chrF over the test cells; absent for stress problems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chrf: Option<f64>,
    pub cells: Vec<CellReport>,
    pub pairs: Vec<PairReport>,
}

/// Everything produced for one problem: the report and the programs behind it.
#[derive(Debug, Clone)]
pub struct ProblemSolution<S> {
    pub report: ProblemReport,
    pub programs: Vec<PairProgram<S>>,
}

fn needed_pairs(problem: &Problem) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for cell in problem.test_cells() {
        for k in 0..problem.cols() {
            if k != cell.col && problem.cell(cell.row, k).is_some() {
                out.insert((k, cell.col));
            }
        }
    }
    out
}

/// Learns the program for one column pair.
pub fn train_pair<S: Scalar>(problem: &Problem, task: &ColumnTask, cfg: &SynthConfig<S>) -> PairProgram<S> {
    let (translit, matrix) = premap_matrix(problem, task.source, task.target, &cfg.align);
    let pairs: Vec<(Word, Word)> = task
        .rows
        .iter()
        .filter_map(|&r| Some((matrix[r][task.source].clone()?, matrix[r][task.target].clone()?)))
        .collect();
    let outcome = synthesize_program(&pairs, problem.category, &problem.feature_table, cfg);
    let score = program_score(&outcome.program, cfg);
    PairProgram { source: task.source, target: task.target, pairs, translit, outcome, score }
}

/// Trains column-pair programs and fills every test cell.
///
/// Each cell takes its input from the column whose program reproduces the
/// most training pairs, then has the best score; remaining ties go to the
/// smallest column index.
pub fn solve_problem<S: Scalar>(problem: &Problem, cfg: &SynthConfig<S>, opts: SolveOptions) -> ProblemSolution<S> {
    let needed = needed_pairs(problem);
    let tasks: Vec<ColumnTask> = column_pair_tasks(problem)
        .into_iter()
        .filter(|t| t.usable() && (!opts.lazy || needed.contains(&(t.source, t.target))))
        .collect();
    let programs: Vec<PairProgram<S>> = tasks.par_iter().map(|t| train_pair(problem, t, cfg)).collect();

    let stress = problem.category == Category::Stress;
    let mut cells = Vec::new();
    for cell in problem.test_cells() {
        let gold = problem.gold(cell).expect("test cell has gold").clone();
        let best = programs
            .iter()
            .filter(|p| p.target == cell.col && problem.cell(cell.row, p.source).is_some())
            .min_by(|a, b| {
                b.outcome
                    .solved()
                    .cmp(&a.outcome.solved())
                    .then_with(|| b.score.cmp_score(&a.score))
                    .then_with(|| a.source.cmp(&b.source))
            });
        let report = match best {
            Some(p) => {
                let input = problem.cell(cell.row, p.source).expect("filtered above");
                let input = premap_word(input, &p.translit, &problem.feature_table);
                let predicted = run_program(p.program(), &input, &problem.feature_table);
                let score = (!stress).then(|| chrf(&predicted, &gold, CHRF_MAX_N, CHRF_BETA).unwrap_or(0.0));
                CellReport {
                    row: cell.row,
                    col: cell.col,
                    source: Some(p.source),
                    correct: predicted.same_symbols(&gold),
                    predicted: Some(predicted.to_text()),
                    gold: gold.to_text(),
                    chrf: score,
                    program: Some(pretty_print(p.program())),
                    unsolvable: false,
                }
            }
            None => {
                log::warn!("{}: no usable source column for cell ({}, {})", problem.id, cell.row, cell.col);
                CellReport {
                    row: cell.row,
                    col: cell.col,
                    source: None,
                    predicted: None,
                    gold: gold.to_text(),
                    correct: false,
                    chrf: (!stress).then_some(0.0),
                    program: None,
                    unsolvable: true,
                }
            }
        };
        cells.push(report);
    }

    let exact =
        if cells.is_empty() { 0.0 } else { cells.iter().filter(|c| c.correct).count() as f64 / cells.len() as f64 };
    let chrf_mean = (!stress && !cells.is_empty())
        .then(|| cells.iter().map(|c| c.chrf.unwrap_or(0.0)).sum::<f64>() / cells.len() as f64);
    let pairs = programs
        .iter()
        .map(|p| PairReport {
            source: p.source,
            target: p.target,
            passes: p.outcome.program.passes.len(),
            rules: p.outcome.program.rule_count(),
            score: p.score.as_f64(),
            training_solved: p.outcome.solved(),
            training_total: p.outcome.total(),
        })
        .collect();
    ProblemSolution {
        report: ProblemReport {
            id: problem.id.clone(),
            category: problem.category,
            exact,
            chrf: chrf_mean,
            cells,
            pairs,
        },
        programs,
    }
}

/// Exact score recomputed from the predicted and gold words of a report.
pub fn recount_exact(report: &ProblemReport) -> f64 {
    let pred: Vec<Option<Word>> = report.cells.iter().map(|c| c.predicted.as_deref().map(Word::from_symbols)).collect();
    let gold: Vec<Word> = report.cells.iter().map(|c| Word::from_symbols(&c.gold)).collect();
    exact_score(pred.iter().map(Option::as_ref).zip(&gold))
}

/// Rechecks a solution independently of the code that produced it: each
/// program reproduces the training pairs it claims to, stays within the pass
/// budget, and the reported Exact matches a recount.
pub fn verify<S: Scalar>(
    solution: &ProblemSolution<S>,
    table: &crate::token::FeatureTable,
    cfg: &SynthConfig<S>,
) -> Result<(), Error> {
    let id = &solution.report.id;
    for p in &solution.programs {
        if p.outcome.program.passes.len() > cfg.max_passes {
            return Err(Error::Invariant(format!("{id} {}->{}: too many passes", p.source, p.target)));
        }
        for ((src, tgt), &claimed) in p.pairs.iter().zip(&p.outcome.reproduced) {
            let out = run_program(p.program(), src, table);
            if out.same_symbols(tgt) != claimed {
                return Err(Error::Invariant(format!(
                    "{id} {}->{}: training pair {src} / {tgt} misreported",
                    p.source, p.target
                )));
            }
        }
    }
    let recount = recount_exact(&solution.report);
    if (recount - solution.report.exact).abs() > 1e-12 {
        return Err(Error::Invariant(format!("{id}: Exact {} but recount gives {recount}", solution.report.exact)));
    }
    Ok(())
}
