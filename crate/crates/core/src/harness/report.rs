use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::align::align_pair;
use crate::dsl::syntax::{pretty_print, rule_text};
use crate::error::Error;
use crate::harness::solve::{solve_problem, ProblemReport, ProblemSolution, SolveOptions};
use crate::problem::{parse_problem, Category, Problem};
use crate::scalar::Scalar;
use crate::synth::config::SynthConfig;

/// Shown in alignment dumps where one side has no token.
pub const GAP: &str = "\u{2014}";

/// Unweighted means over a set of problems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub problems: usize,
    pub exact: f64,
    /// Absent when every problem in the set is a stress problem.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chrf: Option<f64>,
}

impl Aggregate {
    pub fn over<'a>(reports: impl IntoIterator<Item = &'a ProblemReport>) -> Self {
        let reports: Vec<&ProblemReport> = reports.into_iter().collect();
        let exact = mean(reports.iter().map(|r| r.exact));
        let chrfs: Vec<f64> =
            reports.iter().filter(|r| r.category != Category::Stress).filter_map(|r| r.chrf).collect();
        Aggregate { problems: reports.len(), exact, chrf: (!chrfs.is_empty()).then(|| mean(chrfs.into_iter())) }
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// The machine-readable result of a run, keyed by problem id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub variant: String,
    pub seed: u64,
    pub problems: BTreeMap<String, ProblemReport>,
    pub categories: BTreeMap<String, Aggregate>,
    pub overall: Aggregate,
}

impl RunReport {
    pub fn new<S: Scalar>(reports: Vec<ProblemReport>, cfg: &SynthConfig<S>) -> Self {
        let problems: BTreeMap<String, ProblemReport> = reports.into_iter().map(|r| (r.id.clone(), r)).collect();
        let mut categories = BTreeMap::new();
        for c in Category::ALL {
            let members: Vec<&ProblemReport> = problems.values().filter(|r| r.category == c).collect();
            if !members.is_empty() {
                categories.insert(c.as_str().to_string(), Aggregate::over(members));
            }
        }
        let overall = Aggregate::over(problems.values());
        RunReport { variant: cfg.variant.as_str().to_string(), seed: cfg.seed, problems, categories, overall }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Reads every `*.json` file in `dir`, in file-name order.
pub fn load_problems(dir: &Path) -> Result<Vec<Problem>, Error> {
    let io = |source| Error::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|source| Error::Io { path: p.display().to_string(), source })?;
        let problem = parse_problem(&text).map_err(|e| {
            log::error!("{}: {e}", p.display());
            e
        })?;
        out.push(problem);
    }
    Ok(out)
}

/// Solves every problem; results are in input order.
pub fn solve_all<S: Scalar>(problems: &[Problem], cfg: &SynthConfig<S>, opts: SolveOptions) -> Vec<ProblemSolution<S>> {
    problems.par_iter().map(|p| solve_problem(p, cfg, opts)).collect()
}

/// Pretty-printed program of every trained column pair.
pub fn program_dump<S: Scalar>(solutions: &[ProblemSolution<S>]) -> String {
    let mut out = String::new();
    for s in solutions {
        for p in &s.programs {
            let _ = writeln!(out, "# {} {} -> {}", s.report.id, p.source, p.target);
            let _ = writeln!(out, "{}", pretty_print(p.program()));
        }
    }
    out
}

/// Per pass: what was sampled, how many candidates were pooled, and the
/// rules selected with their coverage counts.
pub fn trace_dump<S: Scalar>(solutions: &[ProblemSolution<S>]) -> String {
    let mut out = String::new();
    for s in solutions {
        for p in &s.programs {
            for (i, pass) in p.outcome.passes.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "# {} {} -> {} pass {}: sampled {:?}, {} candidates, {} solved, {} unsolved",
                    s.report.id,
                    p.source,
                    p.target,
                    i + 1,
                    pass.sampled,
                    pass.candidates,
                    pass.solved.len(),
                    pass.unsolved.len()
                );
                for sel in &pass.selections {
                    let _ = writeln!(
                        out,
                        "  +{} ~{} -{} [{}] {}",
                        sel.fixed,
                        sel.improved,
                        sel.broken,
                        sel.rule.score,
                        rule_text(&sel.rule.rule)
                    );
                }
            }
        }
    }
    out
}

/// Alignment of every training pair, one column per line.
pub fn alignment_dump<S: Scalar>(solutions: &[ProblemSolution<S>], cfg: &SynthConfig<S>) -> String {
    let mut out = String::new();
    for s in solutions {
        for p in &s.programs {
            for (src, tgt) in &p.pairs {
                let _ = writeln!(out, "# {} {} -> {}: {} / {}", s.report.id, p.source, p.target, src, tgt);
                if s.report.category == Category::Stress {
                    for (a, b) in src.symbols().zip(tgt.symbols()) {
                        let _ = writeln!(out, "{a}\t{b}");
                    }
                    continue;
                }
                let Ok(a) = align_pair(src, tgt, &cfg.align) else {
                    let _ = writeln!(out, "(empty word)");
                    continue;
                };
                for op in &a.ops {
                    let l = op.0.map_or(GAP, |i| src.tokens[i].symbol.as_str());
                    let r = op.1.map_or(GAP, |j| tgt.tokens[j].symbol.as_str());
                    let _ = writeln!(out, "{l}\t{r}");
                }
            }
        }
    }
    out
}
