use std::collections::HashMap;

use super::{harmonic, tokenize};

const MAX_N: usize = 4;

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], usize> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Sentence BLEU of `candidate` against `reference`: clipped n-gram
/// precisions for n = 1..4 with uniform weights, add-one smoothing for
/// n >= 2, times the brevity penalty. Two empty strings score 1.
pub fn bleu_similarity(reference: &str, candidate: &str) -> f64 {
    let r = tokenize(reference);
    let c = tokenize(candidate);
    if r.is_empty() && c.is_empty() {
        return 1.0;
    }
    if c.is_empty() || r.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=MAX_N {
        let cand = ngram_counts(&c, n);
        let refc = ngram_counts(&r, n);
        let total: usize = cand.values().sum();
        let clipped: usize = cand
            .iter()
            .map(|(g, &k)| k.min(refc.get(g).copied().unwrap_or(0)))
            .sum();
        let p = if n == 1 {
            if clipped == 0 {
                return 0.0;
            }
            clipped as f64 / total as f64
        } else {
            (clipped as f64 + 1.0) / (total as f64 + 1.0)
        };
        log_sum += p.ln() / MAX_N as f64;
    }
    let (rl, cl) = (r.len() as f64, c.len() as f64);
    let bp = if cl > rl { 1.0 } else { (1.0 - rl / cl).exp() };
    (bp * log_sum.exp()).clamp(0.0, 1.0)
}

pub fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// ROUGE-L with precision over the candidate and recall over the reference.
pub fn rouge_l(reference: &str, candidate: &str) -> RougeScore {
    let r = tokenize(reference);
    let c = tokenize(candidate);
    if r.is_empty() && c.is_empty() {
        return RougeScore {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        };
    }
    if r.is_empty() || c.is_empty() {
        return RougeScore {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        };
    }
    let l = lcs_len(&r, &c) as f64;
    let precision = l / c.len() as f64;
    let recall = l / r.len() as f64;
    RougeScore {
        precision,
        recall,
        f1: harmonic(precision, recall),
    }
}

/// ROUGE-L F-measure.
pub fn rouge_similarity(reference: &str, candidate: &str) -> f64 {
    rouge_l(reference, candidate).f1
}
