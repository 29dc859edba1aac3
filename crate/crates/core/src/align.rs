//! Token alignment of word pairs and conversion into per-position examples.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::AlignError;
use crate::problem::{Category, Problem};
use crate::scalar::Scalar;
use crate::token::{FeatureTable, Token, Word};

/// Additive scores for a global alignment. Symbol equality is a match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignParams<S> {
    pub match_score: S,
    pub mismatch: S,
    pub gap: S,
}

impl<S: Scalar> Default for AlignParams<S> {
    fn default() -> Self {
        AlignParams { match_score: S::from_int(2), mismatch: S::from_int(-1), gap: S::from_int(-1) }
    }
}

/// One column of an alignment: `(Some(i), Some(j))` pairs source token `i`
/// with target token `j`; `None` on either side is a gap.
pub type AlignOp = (Option<usize>, Option<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment<S> {
    pub ops: Vec<AlignOp>,
    pub score: S,
}

impl<S> Alignment<S> {
    pub fn gap_openings(&self) -> usize {
        let mut count = 0;
        let mut prev = Step::Diag;
        for op in &self.ops {
            let step = Step::of(op);
            if step != Step::Diag && step != prev {
                count += 1;
            }
            prev = step;
        }
        count
    }

    /// Ops that are not exact matches, given the words they align.
    pub fn residual(&self, src: &Word, tgt: &Word) -> usize {
        self.ops
            .iter()
            .filter(|op| match op {
                (Some(i), Some(j)) => src.tokens[*i].symbol != tgt.tokens[*j].symbol,
                _ => true,
            })
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Diag,
    Del,
    Ins,
}

impl Step {
    fn of(op: &AlignOp) -> Step {
        match op {
            (Some(_), Some(_)) => Step::Diag,
            (Some(_), None) => Step::Del,
            _ => Step::Ins,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// (score, gap openings); higher score wins, then fewer openings.
#[derive(Clone, Copy)]
struct Cost<S> {
    score: S,
    openings: usize,
}

impl<S: Scalar> Cost<S> {
    fn better(&self, other: &Self) -> Ordering {
        match self.score.cmp_score(&other.score) {
            Ordering::Equal => other.openings.cmp(&self.openings),
            o => o,
        }
    }

    fn same(&self, other: &Self) -> bool {
        self.better(other) == Ordering::Equal
    }
}

/// Global alignment of `src` against `tgt`.
///
/// Among optimal alignments the one with the fewest gap openings is chosen,
/// then the one whose gaps come latest (matches are taken as early as
/// possible).
pub fn align_pair<S: Scalar>(src: &Word, tgt: &Word, params: &AlignParams<S>) -> Result<Alignment<S>, AlignError> {
    if src.is_empty() || tgt.is_empty() {
        return Err(AlignError::EmptyWord);
    }
    let (n, m) = (src.len(), tgt.len());
    let idx = |i: usize, j: usize, s: Step| (i * (m + 1) + j) * 3 + s.index();
    let mut best: Vec<Cost<S>> = vec![Cost { score: S::zero(), openings: 0 }; (n + 1) * (m + 1) * 3];

    // best[i][j][prev] is the optimum for aligning src[i..] with tgt[j..]
    // when the op before position (i, j) was `prev`.
    let options = |best: &Vec<Cost<S>>, i: usize, j: usize, prev: Step| -> [Option<Cost<S>>; 3] {
        let diag = (i < n && j < m).then(|| {
            let s = if src.tokens[i].symbol == tgt.tokens[j].symbol { params.match_score } else { params.mismatch };
            let rest = best[idx(i + 1, j + 1, Step::Diag)];
            Cost { score: s + rest.score, openings: rest.openings }
        });
        let del = (i < n).then(|| {
            let rest = best[idx(i + 1, j, Step::Del)];
            Cost { score: params.gap + rest.score, openings: rest.openings + usize::from(prev != Step::Del) }
        });
        let ins = (j < m).then(|| {
            let rest = best[idx(i, j + 1, Step::Ins)];
            Cost { score: params.gap + rest.score, openings: rest.openings + usize::from(prev != Step::Ins) }
        });
        [diag, del, ins]
    };
    let pick = |opts: &[Option<Cost<S>>; 3]| -> Option<Cost<S>> {
        opts.iter().flatten().fold(None, |acc: Option<Cost<S>>, c| match acc {
            Some(a) if a.better(c) != Ordering::Less => Some(a),
            _ => Some(*c),
        })
    };

    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            for prev in [Step::Diag, Step::Del, Step::Ins] {
                best[idx(i, j, prev)] = pick(&options(&best, i, j, prev)).expect("some op is available");
            }
        }
    }

    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j, mut prev) = (0, 0, Step::Diag);
    while i < n || j < m {
        let target = best[idx(i, j, prev)];
        let opts = options(&best, i, j, prev);
        let k = opts.iter().position(|o| o.as_ref().is_some_and(|c| c.same(&target))).expect("traceback");
        match k {
            0 => {
                ops.push((Some(i), Some(j)));
                i += 1;
                j += 1;
                prev = Step::Diag;
            }
            1 => {
                ops.push((Some(i), None));
                i += 1;
                prev = Step::Del;
            }
            _ => {
                ops.push((None, Some(j)));
                j += 1;
                prev = Step::Ins;
            }
        }
    }
    Ok(Alignment { ops, score: best[idx(0, 0, Step::Diag)].score })
}

/// One source position in its word context with the target tokens it must
/// produce. An empty `expected` is a deletion; more than one token is an
/// insertion after the position.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenExample {
    pub word: Arc<Word>,
    pub pos: usize,
    pub expected: Vec<Token>,
}

impl TokenExample {
    pub fn input(&self) -> &Token {
        &self.word.tokens[self.pos]
    }

    pub fn expected_symbols(&self) -> Vec<&str> {
        self.expected.iter().map(|t| t.symbol.as_str()).collect()
    }

    /// The expected output is the input token unchanged.
    pub fn is_identity(&self) -> bool {
        self.expected.len() == 1 && self.expected[0].symbol == self.input().symbol
    }
}

/// Splits an alignment into per-source-position examples.
///
/// Target tokens facing a gap attach to the nearest preceding source
/// position; before the first source position they go to position 0, ahead
/// of its own output.
pub fn examples_from_alignment<S>(src: &Arc<Word>, tgt: &Word, a: &Alignment<S>) -> Vec<TokenExample> {
    let mut expected: Vec<Vec<Token>> = vec![Vec::new(); src.len()];
    let mut leading = Vec::new();
    let mut last: Option<usize> = None;
    for op in &a.ops {
        match *op {
            (Some(i), Some(j)) => {
                expected[i].push(tgt.tokens[j].clone());
                last = Some(i);
            }
            (Some(i), None) => last = Some(i),
            (None, Some(j)) => match last {
                Some(i) => expected[i].push(tgt.tokens[j].clone()),
                None => leading.push(tgt.tokens[j].clone()),
            },
            (None, None) => {}
        }
    }
    if let Some(first) = expected.first_mut() {
        leading.append(first);
        *first = leading;
    }
    expected
        .into_iter()
        .enumerate()
        .map(|(pos, expected)| TokenExample { word: Arc::clone(src), pos, expected })
        .collect()
}

/// Aligns a word pair and returns its examples.
pub fn aligned_examples<S: Scalar>(
    src: &Word,
    tgt: &Word,
    params: &AlignParams<S>,
) -> Result<Vec<TokenExample>, AlignError> {
    let a = align_pair(src, tgt, params)?;
    Ok(examples_from_alignment(&Arc::new(src.clone()), tgt, &a))
}

/// Stress pairs are aligned position by position.
pub fn stress_examples(src: &Word, stress: &Word) -> Result<Vec<TokenExample>, AlignError> {
    if src.len() != stress.len() {
        return Err(AlignError::LengthMismatch { source_len: src.len(), stress_len: stress.len() });
    }
    let word = Arc::new(src.clone());
    Ok(stress
        .tokens
        .iter()
        .enumerate()
        .map(|(pos, t)| TokenExample { word: Arc::clone(&word), pos, expected: vec![t.clone()] })
        .collect())
}

/// How a category turns word pairs into examples.
pub fn examples_for<S: Scalar>(
    category: Category,
    src: &Word,
    tgt: &Word,
    params: &AlignParams<S>,
) -> Result<Vec<TokenExample>, AlignError> {
    match category {
        Category::Stress => stress_examples(src, tgt),
        _ => aligned_examples(src, tgt, params),
    }
}

/// Symbol-to-symbol map for transliteration problems.
pub type TranslitMap = BTreeMap<String, String>;

/// Maps each source symbol to the target symbol it is most often aligned
/// with. Ties go to the lexicographically smallest target; symbols never
/// aligned to a target token map to themselves.
pub fn build_translit_map<S: Scalar>(pairs: &[(Word, Word)], params: &AlignParams<S>) -> TranslitMap {
    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for (src, tgt) in pairs {
        for s in src.symbols() {
            counts.entry(s.to_string()).or_default();
        }
        let Ok(a) = align_pair(src, tgt, params) else { continue };
        for op in &a.ops {
            if let (Some(i), Some(j)) = *op {
                *counts
                    .entry(src.tokens[i].symbol.clone())
                    .or_default()
                    .entry(tgt.tokens[j].symbol.clone())
                    .or_default() += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|(s, targets)| {
            // BTreeMap iterates targets in order, so the first maximum is the
            // lexicographically smallest.
            let mut best: Option<(&String, usize)> = None;
            for (t, &c) in &targets {
                if best.is_none_or(|(_, b)| c > b) {
                    best = Some((t, c));
                }
            }
            let to = best.map_or_else(|| s.clone(), |(t, _)| t.clone());
            (s, to)
        })
        .collect()
}

/// Applies `map` symbol by symbol; features come from `table`.
pub fn premap_word(w: &Word, map: &TranslitMap, table: &FeatureTable) -> Word {
    Word::new(
        w.symbols()
            .map(|s| match map.get(s) {
                Some(to) => table.token(to),
                None => table.token(s),
            })
            .collect(),
    )
}

/// Training matrix with column `s` rewritten into the script of column `t`.
/// Other columns, and non-transliteration problems, are returned as they are.
pub fn premap_matrix<S: Scalar>(
    problem: &Problem,
    s: usize,
    t: usize,
    params: &AlignParams<S>,
) -> (TranslitMap, Vec<Vec<Option<Word>>>) {
    let mut matrix: Vec<Vec<Option<Word>>> =
        (0..problem.rows()).map(|r| (0..problem.cols()).map(|c| problem.cell(r, c).cloned()).collect()).collect();
    if problem.category != Category::Transliteration {
        return (TranslitMap::new(), matrix);
    }
    let pairs: Vec<(Word, Word)> =
        (0..problem.rows()).filter_map(|r| Some((problem.cell(r, s)?.clone(), problem.cell(r, t)?.clone()))).collect();
    let map = build_translit_map(&pairs, params);
    for row in &mut matrix {
        if let Some(w) = &row[s] {
            row[s] = Some(premap_word(w, &map, &problem.feature_table));
        }
    }
    (map, matrix)
}
