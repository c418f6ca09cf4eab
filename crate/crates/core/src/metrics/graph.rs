use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::embed::greedy_scores;
use super::{bleu_similarity, harmonic, optimal_match, rouge_similarity, tokenize, triple_to_sentence};
use super::{EmbeddingProvider, MetricError, SimilarityMatrix};
use crate::Triple;

/// Pairwise triple similarity used by [`g_score`].
#[derive(Clone, Copy)]
pub enum SimFn<'a> {
    Bleu,
    Rouge,
    Bert(&'a dyn EmbeddingProvider),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `(pred index, ref index, similarity)`
    pub alignment: Vec<(usize, usize, f64)>,
}

impl GraphScore {
    fn constant(x: f64) -> Self {
        Self {
            precision: x,
            recall: x,
            f1: x,
            alignment: Vec::new(),
        }
    }
}

type Embedded<'s> = (Vec<&'s str>, Vec<Vec<f64>>);

fn embed<'s>(provider: &dyn EmbeddingProvider, s: &'s str) -> Result<Embedded<'s>, MetricError> {
    let toks = tokenize(s);
    let vecs = provider.embed_tokens(&toks)?;
    Ok((toks, vecs))
}

/// Similarity matrix with `[i][j] = sim(reference j, predicted i)`.
pub fn similarity_matrix(pred: &[String], refs: &[String], sim: SimFn<'_>) -> Result<SimilarityMatrix, MetricError> {
    match sim {
        SimFn::Bleu => Ok(SimilarityMatrix::from_fn(pred.len(), refs.len(), |i, j| {
            bleu_similarity(&refs[j], &pred[i])
        })),
        SimFn::Rouge => Ok(SimilarityMatrix::from_fn(pred.len(), refs.len(), |i, j| {
            rouge_similarity(&refs[j], &pred[i])
        })),
        SimFn::Bert(provider) => {
            let pe = pred.iter().map(|s| embed(provider, s)).collect::<Result<Vec<_>, _>>()?;
            let re = refs.iter().map(|s| embed(provider, s)).collect::<Result<Vec<_>, _>>()?;
            Ok(SimilarityMatrix::from_fn(pred.len(), refs.len(), |i, j| {
                greedy_scores(&pe[i].0, &pe[i].1, &re[j].0, &re[j].1).f1
            }))
        }
    }
}

/// Aligns predicted and reference triples one-to-one to maximize total
/// similarity, then reports `P = sum / |pred|`, `R = sum / |ref|` and their
/// harmonic mean. One empty side scores 0; both empty score 1.
pub fn g_score(pred: &[Triple], refs: &[Triple], sim: SimFn<'_>) -> Result<GraphScore, MetricError> {
    match (pred.is_empty(), refs.is_empty()) {
        (true, true) => return Ok(GraphScore::constant(1.0)),
        (true, false) | (false, true) => return Ok(GraphScore::constant(0.0)),
        _ => {}
    }
    let ps: Vec<String> = pred.iter().map(triple_to_sentence).collect();
    let rs: Vec<String> = refs.iter().map(triple_to_sentence).collect();
    let m = similarity_matrix(&ps, &rs, sim)?;
    let alignment = optimal_match(&m);
    let total: f64 = alignment.iter().map(|a| a.2).sum();
    let precision = (total / pred.len() as f64).min(1.0);
    let recall = (total / refs.len() as f64).min(1.0);
    Ok(GraphScore {
        precision,
        recall,
        f1: harmonic(precision, recall),
        alignment,
    })
}

/// Scores many (pred, ref) pairs in parallel, preserving order.
pub fn g_score_many(pairs: &[(Vec<Triple>, Vec<Triple>)], sim: SimFn<'_>) -> Result<Vec<GraphScore>, MetricError> {
    pairs.par_iter().map(|(p, r)| g_score(p, r, sim)).collect()
}
