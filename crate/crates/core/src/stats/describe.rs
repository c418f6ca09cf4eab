use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::synth::DatasetSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Triples,
    Tokens,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub n: usize,
    pub min: f64,
    pub avg: f64,
    pub median: f64,
    pub max: f64,
}

impl DistributionSummary {
    /// Average rounded to two decimals, as reported in tables.
    pub fn avg_2dp(&self) -> f64 {
        (self.avg * 100.0).round() / 100.0
    }
}

pub fn whitespace_tokens(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Min, mean, median (mean of the two middle values for even n) and max.
/// Returns `None` for an empty slice.
pub fn summarize(values: &[f64]) -> Option<DistributionSummary> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    };
    Some(DistributionSummary {
        n,
        min: v[0],
        avg: v.iter().sum::<f64>() / n as f64,
        median,
        max: v[n - 1],
    })
}

pub fn describe_with(
    samples: &[DatasetSample],
    side: Side,
    tokenizer: &dyn Fn(&str) -> usize,
) -> Option<DistributionSummary> {
    let counts: Vec<f64> = samples
        .iter()
        .map(|s| match side {
            Side::Triples => s.triples.len() as f64,
            Side::Tokens => tokenizer(&s.text) as f64,
        })
        .collect();
    summarize(&counts)
}

/// Per-sample triple counts or whitespace token counts, summarized.
pub fn describe(samples: &[DatasetSample], side: Side) -> Option<DistributionSummary> {
    describe_with(samples, side, &whitespace_tokens)
}

/// `(value, frequency)` pairs sorted by value.
pub fn count_histogram(counts: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut h = BTreeMap::new();
    for c in counts {
        *h.entry(c).or_insert(0) += 1;
    }
    h.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::SampleMeta;
    use crate::Triple;

    fn sample(n_triples: usize, text: &str) -> DatasetSample {
        DatasetSample {
            text: text.into(),
            triples: (0..n_triples)
                .map(|i| Triple::new("s", format!("p{i}"), "o").unwrap())
                .collect(),
            meta: SampleMeta::default(),
        }
    }

    #[test]
    fn triple_side() {
        let d = describe(&[sample(1, ""), sample(3, ""), sample(5, "")], Side::Triples).unwrap();
        assert_eq!((d.n, d.min, d.avg, d.median, d.max), (3, 1.0, 3.0, 3.0, 5.0));
        let d = describe(&[sample(4, "a b")], Side::Triples).unwrap();
        assert!(d.min == d.avg && d.avg == d.median && d.median == d.max);
        assert!(describe(&[], Side::Triples).is_none());
    }

    #[test]
    fn token_side_and_hook() {
        let s = [
            sample(1, "one two"),
            sample(1, "a b c d"),
            sample(1, "x  y\tz"),
            sample(1, "w"),
        ];
        let d = describe(&s, Side::Tokens).unwrap();
        assert_eq!((d.min, d.median, d.max), (1.0, 2.5, 4.0));
        assert_eq!(d.avg, 2.5);
        let chars = |t: &str| t.chars().count();
        assert_eq!(describe_with(&s, Side::Tokens, &chars).unwrap().max, 7.0);
    }

    #[test]
    fn histogram() {
        assert_eq!(count_histogram([3, 1, 3, 2]), vec![(1, 1), (2, 1), (3, 2)]);
    }
}
