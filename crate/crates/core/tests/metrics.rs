mod common;

use std::collections::BTreeMap;

use common::t;
use kgforge::metrics::{
    bertscore_text, bleu_similarity, g_score, optimal_match, rouge_l, rouge_similarity, triple_to_sentence, SimFn,
    SimilarityMatrix, StubEmbedder, TableEmbedder,
};
use kgforge::{rng, Triple};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

// Textbook sentence BLEU: clipped counts, uniform weights, add-one for
// n >= 2 (an order with no candidate n-grams contributes 1/1).
fn oracle_bleu(reference: &str, candidate: &str) -> f64 {
    let r: Vec<&str> = reference.split_whitespace().collect();
    let c: Vec<&str> = candidate.split_whitespace().collect();
    if r.is_empty() || c.is_empty() {
        return if r.is_empty() && c.is_empty() { 1.0 } else { 0.0 };
    }
    let grams = |toks: &[&str], n: usize| {
        let mut m: BTreeMap<String, i64> = BTreeMap::new();
        for i in 0..(toks.len() + 1).saturating_sub(n) {
            *m.entry(toks[i..i + n].join("\u{1}")).or_default() += 1;
        }
        m
    };
    let mut prod = 1.0f64;
    for n in 1..=4 {
        let (cg, rg) = (grams(&c, n), grams(&r, n));
        let mut num = 0i64;
        let mut den = 0i64;
        for (g, k) in &cg {
            num += (*k).min(*rg.get(g).unwrap_or(&0));
            den += k;
        }
        let p = if n == 1 {
            num as f64 / den as f64
        } else {
            (num + 1) as f64 / (den + 1) as f64
        };
        if p == 0.0 {
            return 0.0;
        }
        prod *= p.powf(0.25);
    }
    let bp = if c.len() > r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / c.len() as f64).exp()
    };
    bp * prod
}

fn oracle_lcs(a: &[&str], b: &[&str]) -> usize {
    // memoized recursion over suffixes
    fn go(a: &[&str], b: &[&str], i: usize, j: usize, memo: &mut Vec<Vec<Option<usize>>>) -> usize {
        if i == a.len() || j == b.len() {
            return 0;
        }
        if let Some(v) = memo[i][j] {
            return v;
        }
        let v = if a[i] == b[j] {
            1 + go(a, b, i + 1, j + 1, memo)
        } else {
            go(a, b, i + 1, j, memo).max(go(a, b, i, j + 1, memo))
        };
        memo[i][j] = Some(v);
        v
    }
    let mut memo = vec![vec![None; b.len()]; a.len()];
    go(a, b, 0, 0, &mut memo)
}

fn oracle_rouge(reference: &str, candidate: &str) -> f64 {
    let r: Vec<&str> = reference.split_whitespace().collect();
    let c: Vec<&str> = candidate.split_whitespace().collect();
    if r.is_empty() || c.is_empty() {
        return if r.is_empty() && c.is_empty() { 1.0 } else { 0.0 };
    }
    let l = oracle_lcs(&r, &c) as f64;
    if l == 0.0 {
        return 0.0;
    }
    let (p, rec) = (l / c.len() as f64, l / r.len() as f64);
    2.0 * p * rec / (p + rec)
}

fn random_pairs(n: usize, seed: u64) -> Vec<(String, String)> {
    let vocab = ["a", "b", "c", "d", "born", "in", "paris", "of"];
    let mut r = rng::seeded(seed);
    let sentence = |r: &mut rand_chacha::ChaCha8Rng| {
        let len = r.gen_range(0..9);
        (0..len)
            .map(|_| *vocab.choose(r).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    };
    (0..n).map(|_| (sentence(&mut r), sentence(&mut r))).collect()
}

#[test]
fn bleu_and_rouge_match_reference_implementations() {
    for (a, b) in random_pairs(50, 1) {
        assert!(
            (bleu_similarity(&a, &b) - oracle_bleu(&a, &b)).abs() < 1e-9,
            "{a:?} / {b:?}"
        );
        assert!(
            (rouge_similarity(&a, &b) - oracle_rouge(&a, &b)).abs() < 1e-9,
            "{a:?} / {b:?}"
        );
    }
}

#[test]
fn bleu_matches_frozen_external_values() {
    // produced once by a widely used toolkit with add-one smoothing for n >= 2
    let frozen = [
        ("a b c d", "a b c e", 0.6580370064762462),
        ("the cat sat on the mat", "the cat is on the mat", 0.48549177170732344),
        (
            "barack obama born in honolulu hawaii",
            "obama was born in hawaii",
            0.33085163614992613,
        ),
        ("x y z w v", "x y z w v u t", 0.672126440078521),
        (
            "one two three four five six",
            "six five four three two one",
            0.3021375397356768,
        ),
        ("a a a a b", "a a b b b", 0.4949232003839765),
    ];
    for (r, c, v) in frozen {
        assert!((bleu_similarity(r, c) - v).abs() < 1e-9, "{r} / {c}");
    }
}

#[test]
fn rouge_l_hand_example() {
    let s = rouge_l("a b c d", "a c d");
    assert_eq!((s.precision, s.recall), (1.0, 0.75));
    assert!((s.f1 - 6.0 / 7.0).abs() < 1e-12);
}

fn brute_force(m: &SimilarityMatrix) -> f64 {
    let (small, large, tr) = if m.rows() <= m.cols() {
        (m.rows(), m.cols(), false)
    } else {
        (m.cols(), m.rows(), true)
    };
    let mut best = 0.0f64;
    let mut perm: Vec<usize> = (0..large).collect();
    // Heap's algorithm over the larger side, first `small` entries used
    fn heap(k: usize, perm: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(perm);
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, visit);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(large, &mut perm, &mut |p| {
        let total: f64 = (0..small)
            .map(|i| if tr { m.get(p[i], i) } else { m.get(i, p[i]) })
            .sum();
        best = best.max(total);
    });
    best
}

#[test]
fn hungarian_matches_permutation_enumeration() {
    let mut r = rng::seeded(77);
    for case in 0..200u32 {
        let (rows, cols) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let coarse = case.is_multiple_of(3);
        let m = SimilarityMatrix::from_fn(rows, cols, |_, _| {
            if coarse {
                r.gen_range(0..4) as f64 / 4.0
            } else {
                r.gen::<f64>()
            }
        });
        let a = optimal_match(&m);
        let total: f64 = a.iter().map(|x| x.2).sum();
        assert!((total - brute_force(&m)).abs() < 1e-12, "case {case}");
        assert_eq!(a.len(), rows.min(cols));
        let mut rs: Vec<_> = a.iter().map(|x| x.0).collect();
        let mut cs: Vec<_> = a.iter().map(|x| x.1).collect();
        rs.dedup();
        cs.sort();
        cs.dedup();
        assert_eq!((rs.len(), cs.len()), (a.len(), a.len()));
    }
}

#[test]
fn two_versus_three_triples_hand_pipeline() {
    let pred = [t("Paris", "capital of", "France"), t("Obama", "born in", "Hawaii")];
    let refs = [
        t("Barack Obama", "born in", "Honolulu"),
        t("Paris", "capital of", "France"),
        t("Honolulu", "located in", "Hawaii"),
    ];
    let sent = |x: &Triple| triple_to_sentence(x);
    let table: Vec<Vec<f64>> = pred
        .iter()
        .map(|p| refs.iter().map(|q| oracle_bleu(&sent(q), &sent(p))).collect())
        .collect();
    let mut best = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                best = best.max(table[0][i] + table[1][j]);
            }
        }
    }
    let (p, r) = (best / 2.0, best / 3.0);
    let g = g_score(&pred, &refs, SimFn::Bleu).unwrap();
    assert!((g.precision - p).abs() < 1e-12);
    assert!((g.recall - r).abs() < 1e-12);
    assert!((g.f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
}

#[test]
fn self_score_is_one_for_every_similarity() {
    let g = [
        t("JOSÉ EDUARDO DOS SANTOS", "religion or worldview", "CATHOLICISM"),
        t("JOSÉ EDUARDO DOS SANTOS", "place of death", "BARCELONA"),
        t("JOSÉ EDUARDO DOS SANTOS", "country of citizenship", "ANGOLA"),
    ];
    let stub = StubEmbedder::default();
    for sim in [SimFn::Bleu, SimFn::Rouge, SimFn::Bert(&stub)] {
        let s = g_score(&g, &g, sim).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }
    let e = g_score(&[], &g, SimFn::Bleu).unwrap();
    assert_eq!((e.precision, e.recall, e.f1), (0.0, 0.0, 0.0));
}

#[test]
fn bertscore_hand_values() {
    let h = 0.75f64.sqrt();
    let emb = TableEmbedder::new([
        ("x", vec![1.0, 0.0, 0.0]),
        ("y", vec![0.5, h, 0.0]),
        ("z", vec![0.0, 0.0, 1.0]),
        ("w", vec![0.0, 0.6, 0.8]),
    ]);
    let s = bertscore_text("x", "y", &emb).unwrap();
    for v in [s.precision, s.recall, s.f1] {
        assert!((v - 0.5).abs() < 1e-12);
    }
    // candidate x y w, reference x z
    // cos: x-x 1, y-x .5, w-x 0, x-z 0, y-z 0, w-z .8
    let s = bertscore_text("x y w", "x z", &emb).unwrap();
    let (p, r) = ((1.0 + 0.5 + 0.8) / 3.0, (1.0 + 0.8) / 2.0);
    assert!((s.precision - p).abs() < 1e-12);
    assert!((s.recall - r).abs() < 1e-12);
    assert!((s.f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
}

fn arb_graph() -> impl Strategy<Value = Vec<Triple>> {
    let word = prop::sample::select(vec!["a", "b", "c", "paris", "born", "in", "x y"]);
    prop::collection::vec((word.clone(), word.clone(), word), 1..6).prop_map(|v| {
        let mut out: Vec<Triple> = v.into_iter().map(|(s, p, o)| t(s, p, o)).collect();
        out.dedup();
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_score_ignores_order(pred in arb_graph(), refs in arb_graph(), seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let (mut p2, mut r2) = (pred.clone(), refs.clone());
        p2.shuffle(&mut r);
        r2.shuffle(&mut r);
        for sim in [SimFn::Bleu, SimFn::Rouge] {
            let a = g_score(&pred, &refs, sim).unwrap();
            let b = g_score(&p2, &r2, sim).unwrap();
            prop_assert!((a.f1 - b.f1).abs() < 1e-9);
            prop_assert!((a.recall - b.recall).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&a.f1));
        }
    }

    #[test]
    fn dropping_a_matched_prediction_never_raises_recall(pred in arb_graph(), refs in arb_graph(), pick in any::<prop::sample::Index>()) {
        let full = g_score(&pred, &refs, SimFn::Rouge).unwrap();
        if let Some(&(i, _, _)) = full.alignment.get(pick.index(full.alignment.len().max(1))) {
            let mut fewer = pred.clone();
            fewer.remove(i);
            let less = g_score(&fewer, &refs, SimFn::Rouge).unwrap();
            prop_assert!(less.recall <= full.recall + 1e-12);
        }
    }
}
