use std::collections::BTreeMap;

use crate::error::MetricError;
use crate::token::Word;

pub const CHRF_MAX_N: usize = 3;
pub const CHRF_BETA: f64 = 3.0;

/// Fraction of predictions identical to their gold word; 0 for no cells.
pub fn exact_score<'a>(cells: impl IntoIterator<Item = (Option<&'a Word>, &'a Word)>) -> f64 {
    let (mut hit, mut total) = (0usize, 0usize);
    for (pred, gold) in cells {
        total += 1;
        if pred.is_some_and(|p| p.same_symbols(gold)) {
            hit += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

fn ngrams<'a>(w: &'a [&'a str], n: usize) -> BTreeMap<&'a [&'a str], usize> {
    let mut out = BTreeMap::new();
    if w.len() >= n {
        for g in w.windows(n) {
            *out.entry(g).or_insert(0) += 1;
        }
    }
    out
}

/// Token-level chrF: clipped n-gram precision and recall for `n = 1..=max_n`,
/// averaged over the orders the reference is long enough for, then combined
/// as an F-beta score.
pub fn chrf(pred: &Word, gold: &Word, max_n: usize, beta: f64) -> Result<f64, MetricError> {
    if gold.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let p: Vec<&str> = pred.symbols().collect();
    let g: Vec<&str> = gold.symbols().collect();
    let (mut prec, mut rec, mut orders) = (0.0, 0.0, 0usize);
    for n in 1..=max_n {
        let reference = ngrams(&g, n);
        let ref_total: usize = reference.values().sum();
        if ref_total == 0 {
            continue;
        }
        let hyp = ngrams(&p, n);
        let hyp_total: usize = hyp.values().sum();
        let matched: usize = hyp.iter().map(|(k, &c)| c.min(reference.get(k).copied().unwrap_or(0))).sum();
        if hyp_total > 0 {
            prec += matched as f64 / hyp_total as f64;
        }
        rec += matched as f64 / ref_total as f64;
        orders += 1;
    }
    let (prec, rec) = (prec / orders as f64, rec / orders as f64);
    if prec == 0.0 && rec == 0.0 {
        return Ok(0.0);
    }
    let b2 = beta * beta;
    Ok((1.0 + b2) * prec * rec / (b2 * prec + rec))
}
