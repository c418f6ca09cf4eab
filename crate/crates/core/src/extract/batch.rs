use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExtractError, ExtractionConfig, Extractor, RandomSampler, Subgraph};
use crate::kb::KbError;
use crate::rng;

/// The mixture used for the 12k-sample dataset: (count, m, k).
pub const CE12K_PRESET: [RecipeEntry; 4] = [
    RecipeEntry {
        count: 6000,
        m: 4,
        k: 6,
    },
    RecipeEntry {
        count: 2000,
        m: 6,
        k: 1,
    },
    RecipeEntry {
        count: 2000,
        m: 2,
        k: 3,
    },
    RecipeEntry {
        count: 2000,
        m: 3,
        k: 2,
    },
];

pub const DEFAULT_RETRY_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeEntry {
    pub count: usize,
    pub m: usize,
    pub k: usize,
}

/// Parses recipe lines of the form `count m k`; `#` starts a comment.
pub fn parse_recipe(text: &str) -> Result<Vec<RecipeEntry>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
        match nums.as_deref() {
            Ok(&[count, m, k]) if count > 0 && m > 0 && k > 0 => out.push(RecipeEntry { count, m, k }),
            _ => return Err(format!("line {}: expected three positive integers `count m k`", no + 1)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BatchConfig {
    pub seed_category: String,
    pub rng_seed: u64,
    /// Seeds drawn per sample before giving up on it.
    pub retry_budget: usize,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
}

impl Default for BatchConfig {
    fn default() -> Self {
        Self {
            seed_category: crate::kb::HUMAN_CATEGORY.to_string(),
            rng_seed: 0,
            retry_budget: DEFAULT_RETRY_BUDGET,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shortfall {
    pub recipe_index: usize,
    pub requested: usize,
    pub produced: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BatchOutput {
    pub subgraphs: Vec<Subgraph>,
    /// Recipe entries that could not be filled within the retry budget.
    pub shortfalls: Vec<Shortfall>,
}

impl BatchOutput {
    pub fn is_complete(&self) -> bool {
        self.shortfalls.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

/// Runs every recipe entry, drawing seeds from the configured category.
///
/// Sample `j` of entry `i` uses an RNG derived from `(rng_seed, i, j)`, so
/// the output does not depend on the number of workers. Seeds whose
/// subgraph is empty are redrawn up to `retry_budget` times.
pub fn batch_extract(
    extractor: &Extractor<'_>,
    recipe: &[RecipeEntry],
    cfg: &BatchConfig,
) -> Result<BatchOutput, BatchError> {
    // Surface an empty category before fanning out.
    if extractor.kb().category(&cfg.seed_category).is_empty() {
        return Err(KbError::NoSeedAvailable(cfg.seed_category.clone()).into());
    }
    let jobs: Vec<(usize, usize)> = recipe
        .iter()
        .enumerate()
        .flat_map(|(i, e)| (0..e.count).map(move |j| (i, j)))
        .collect();
    let run = || -> Result<Vec<Option<Subgraph>>, BatchError> {
        jobs.par_iter()
            .map(|&(i, j)| sample_one(extractor, &recipe[i], i, j, cfg))
            .collect()
    };
    let results = if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| ExtractError::InvalidConfig(e.to_string()))?
            .install(run)?
    } else {
        run()?
    };

    let mut out = BatchOutput::default();
    let mut produced = vec![0usize; recipe.len()];
    for ((i, _), r) in jobs.iter().zip(results) {
        if let Some(sg) = r {
            produced[*i] += 1;
            out.subgraphs.push(sg);
        }
    }
    for (i, e) in recipe.iter().enumerate() {
        if produced[i] < e.count {
            log::warn!(
                "recipe entry {i} ({} x m={} k={}): produced only {}",
                e.count,
                e.m,
                e.k,
                produced[i]
            );
            out.shortfalls.push(Shortfall {
                recipe_index: i,
                requested: e.count,
                produced: produced[i],
            });
        }
    }
    Ok(out)
}

fn sample_one(
    extractor: &Extractor<'_>,
    entry: &RecipeEntry,
    entry_index: usize,
    sample_index: usize,
    cfg: &BatchConfig,
) -> Result<Option<Subgraph>, BatchError> {
    let mut r = rng::derived(cfg.rng_seed, &[entry_index as u64, sample_index as u64]);
    let ecfg = ExtractionConfig {
        m: entry.m,
        k: entry.k,
        seed_category: cfg.seed_category.clone(),
        rng_seed: cfg.rng_seed,
    };
    for _ in 0..cfg.retry_budget.max(1) {
        let seed = extractor.kb().sample_seed(&cfg.seed_category, &mut r)?;
        let sg = extractor.extract(seed, &ecfg, &mut RandomSampler(&mut r))?;
        if !sg.is_empty() {
            return Ok(Some(sg));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::Blacklist;
    use crate::kb::KnowledgeBase;
    use crate::Triple;

    #[test]
    fn preset_totals_twelve_thousand() {
        assert_eq!(CE12K_PRESET.iter().map(|e| e.count).sum::<usize>(), 12_000);
    }

    #[test]
    fn recipe_parsing() {
        let r = parse_recipe("# c m k\n6000 4 6\n2000 6 1 # trailing\n\n").unwrap();
        assert_eq!(
            r,
            vec![
                RecipeEntry {
                    count: 6000,
                    m: 4,
                    k: 6
                },
                RecipeEntry {
                    count: 2000,
                    m: 6,
                    k: 1
                }
            ]
        );
        assert!(parse_recipe("1 2\n").is_err());
        assert!(parse_recipe("0 2 3\n").is_err());
    }

    fn chain_kb() -> KnowledgeBase {
        let mut b = KnowledgeBase::builder();
        for (s, o) in [("a", "b"), ("b", "c"), ("c", "d")] {
            b.add_triple(Triple::new(s, "next", o).unwrap());
        }
        b.add_triple(Triple::new("a", "other", "z").unwrap());
        b.add_triple(Triple::new("a", "third", "y").unwrap());
        b.add_category("a", "Human");
        b.build()
    }

    #[test]
    fn single_entry_bounded_by_m() {
        let kb = chain_kb();
        let bl = Blacklist::new();
        let ex = Extractor::new(&kb, &bl);
        let out = batch_extract(&ex, &[RecipeEntry { count: 1, m: 2, k: 1 }], &BatchConfig::default()).unwrap();
        assert_eq!(out.subgraphs.len(), 1);
        assert!(out.subgraphs[0].triples.len() <= 2);
        assert!(out.subgraphs[0].hops.iter().all(|&h| h == 1));
    }

    #[test]
    fn exhausted_budget_reports_shortfall() {
        let mut b = KnowledgeBase::builder();
        b.add_triple(Triple::new("lonely", "p", "lonely").unwrap());
        b.add_category("lonely", "Human");
        let kb = b.build();
        let bl = Blacklist::new();
        let ex = Extractor::new(&kb, &bl);
        let cfg = BatchConfig {
            retry_budget: 3,
            ..Default::default()
        };
        let out = batch_extract(&ex, &[RecipeEntry { count: 2, m: 2, k: 2 }], &cfg).unwrap();
        assert!(out.subgraphs.is_empty());
        assert_eq!(
            out.shortfalls,
            vec![Shortfall {
                recipe_index: 0,
                requested: 2,
                produced: 0
            }]
        );
    }

    #[test]
    fn missing_category_is_an_error() {
        let kb = chain_kb();
        let bl = Blacklist::new();
        let cfg = BatchConfig {
            seed_category: "Nope".into(),
            ..Default::default()
        };
        let err = batch_extract(&Extractor::new(&kb, &bl), &[RecipeEntry { count: 1, m: 1, k: 1 }], &cfg);
        assert!(matches!(err, Err(BatchError::Kb(KbError::NoSeedAvailable(_)))));
    }
}
