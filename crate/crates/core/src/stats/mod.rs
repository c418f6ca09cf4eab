//! Dataset statistics, distribution distances and paired significance
//! testing.

mod bootstrap;
mod describe;
mod wasserstein;
mod wilcoxon;

pub use bootstrap::{bootstrap_ci, bootstrap_ci_default, quantile, BOOTSTRAP_ITERS, CI_LEVEL};
pub use describe::{count_histogram, describe, describe_with, summarize, whitespace_tokens, DistributionSummary, Side};
pub use wasserstein::wasserstein1;
pub use wilcoxon::{signed_ranks, wilcoxon_signed_rank, StatsError, WilcoxonMethod, WilcoxonResult, EXACT_MAX_N};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}
