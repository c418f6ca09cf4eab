//! Graph-level metrics (G-BLEU, G-ROUGE, G-BERTScore) and text-level
//! BERTScore.
//!
//! Every G-metric serializes a triple with [`triple_to_sentence`], scores all
//! predicted/reference pairs, finds the maximum-weight one-to-one alignment
//! and reports similarity-weighted precision, recall and F1.

mod assign;
mod embed;
mod graph;
mod text;

pub use assign::{optimal_match, SimilarityMatrix};
pub use embed::{
    bertscore_text, EmbeddingProvider, HttpEmbedder, StubEmbedder, TableEmbedder, TokenScores, ENV_EMB_KEY,
    ENV_EMB_MODEL, ENV_EMB_URL,
};
pub use graph::{g_score, g_score_many, similarity_matrix, GraphScore, SimFn};
pub use text::{bleu_similarity, lcs_len, rouge_l, rouge_similarity, RougeScore};

use crate::Triple;

/// Version tag for the sentence serialization and the alignment F1.
pub const METRIC_VERSION: &str = "v1";

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("embedding backend error: {0}")]
    Backend(String),
    #[error("embedding backend not configured: {0}")]
    Config(String),
}

/// `"subject predicate object"`, lowercased.
pub fn triple_to_sentence(t: &Triple) -> String {
    format!("{} {} {}", t.subject, t.predicate, t.object).to_lowercase()
}

pub fn tokenize(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

pub(crate) fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence_serialization() {
        let t = Triple::new("A", "likes", "B").unwrap();
        assert_eq!(triple_to_sentence(&t), "a likes b");
        let t = Triple::new("New York City", "located in", "USA").unwrap();
        assert_eq!(triple_to_sentence(&t), "new york city located in usa");
    }
}
