use rand::Rng as _;
use rayon::prelude::*;

use crate::rng;

pub const BOOTSTRAP_ITERS: usize = 10_000;
pub const CI_LEVEL: f64 = 0.95;
const CHUNK: usize = 1_000;

/// Linear-interpolation quantile of sorted data, `h = (n - 1) q`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for the mean. Resampling runs in chunks
/// of 1000 with per-chunk RNG streams derived from `seed`, so the result
/// does not depend on thread count. Returns `None` for empty input.
pub fn bootstrap_ci(scores: &[f64], iters: usize, level: f64, seed: u64) -> Option<(f64, f64)> {
    if scores.is_empty() || iters == 0 {
        return None;
    }
    if scores.iter().all(|s| *s == scores[0]) {
        return Some((scores[0], scores[0]));
    }
    let n = scores.len();
    let chunks = iters.div_ceil(CHUNK);
    let mut means: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut r = rng::derived(seed, &[c as u64]);
            let len = CHUNK.min(iters - c * CHUNK);
            (0..len)
                .map(|_| (0..n).map(|_| scores[r.gen_range(0..n)]).sum::<f64>() / n as f64)
                .collect::<Vec<_>>()
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    Some((quantile(&means, alpha), quantile(&means, 1.0 - alpha)))
}

/// 10,000 resamples at the 95% level.
pub fn bootstrap_ci_default(scores: &[f64], seed: u64) -> Option<(f64, f64)> {
    bootstrap_ci(scores, BOOTSTRAP_ITERS, CI_LEVEL, seed)
}
