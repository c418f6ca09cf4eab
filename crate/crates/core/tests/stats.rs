use kgforge::rng;
use kgforge::stats::{
    bootstrap_ci, mean, quantile, summarize, wasserstein1, wilcoxon_signed_rank, StatsError, WilcoxonMethod,
};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Two-sided p by visiting every sign assignment of the absolute ranks.
fn enumerate_p(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|x| *x != 0.0).collect();
    let n = d.len();
    // average ranks by counting strictly smaller and equal magnitudes
    let rank = |x: f64| {
        let less = d.iter().filter(|y| y.abs() < x.abs()).count() as f64;
        let eq = d.iter().filter(|y| y.abs() == x.abs()).count() as f64;
        less + (eq + 1.0) / 2.0
    };
    let ranks: Vec<f64> = d.iter().map(|x| rank(*x)).collect();
    let observed: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).map(|(_, r)| r).sum();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w <= observed {
            le += 1;
        }
        if w >= observed {
            ge += 1;
        }
    }
    (2.0 * le.min(ge) as f64 / 2f64.powi(n as i32)).min(1.0)
}

#[test]
fn exact_wilcoxon_equals_enumeration() {
    let mut r = rng::seeded(5);
    for case in 0..300 {
        let n = r.gen_range(1..=10);
        // coarse grid so ties and zeros appear
        let a: Vec<f64> = (0..n).map(|_| r.gen_range(0..6) as f64 * 0.5).collect();
        let b: Vec<f64> = (0..n).map(|_| r.gen_range(0..6) as f64 * 0.5).collect();
        let res = wilcoxon_signed_rank(&a, &b).unwrap();
        if res.n == 0 {
            assert_eq!(res.method, WilcoxonMethod::Degenerate);
            continue;
        }
        assert_eq!(res.method, WilcoxonMethod::Exact);
        assert_eq!(res.p_value, enumerate_p(&a, &b), "case {case}: {a:?} {b:?}");
    }
}

#[test]
fn normal_approximation_matches_frozen_reference_values() {
    // values frozen from a standard scientific library, normal approximation
    // with tie and continuity correction, zeros dropped
    let round = |x: f64| x.round_ties_even();
    let a: Vec<f64> = (0..100)
        .map(|i| round(((i as f64) * 0.37).sin() * 10.0) / 4.0 + 0.5)
        .collect();
    let b: Vec<f64> = (0..100)
        .map(|i| round(((i as f64) * 1.13).cos() * 10.0) / 4.0)
        .collect();
    let r = wilcoxon_signed_rank(&a, &b).unwrap();
    assert_eq!(r.method, WilcoxonMethod::Normal);
    assert_eq!(r.n, 97);
    let w_minus = (r.n * (r.n + 1)) as f64 / 2.0 - r.w_plus;
    assert_eq!(r.w_plus.min(w_minus), 1827.5);
    assert!((r.p_value / 0.04831720108271605 - 1.0).abs() < 1e-6, "{}", r.p_value);

    let a: Vec<f64> = (0..100).map(|i| (i as f64 * 0.91).sin() + 0.25).collect();
    let b: Vec<f64> = (0..100).map(|i| (i as f64 * 0.53).cos()).collect();
    let r = wilcoxon_signed_rank(&a, &b).unwrap();
    let w_minus = (r.n * (r.n + 1)) as f64 / 2.0 - r.w_plus;
    assert_eq!(r.w_plus.min(w_minus), 1808.0);
    assert!((r.p_value / 0.0137564964666926 - 1.0).abs() < 1e-6, "{}", r.p_value);
}

#[test]
fn wilcoxon_input_errors() {
    assert_eq!(wilcoxon_signed_rank(&[1.0], &[]), Err(StatsError::LengthMismatch(1, 0)));
    assert_eq!(wilcoxon_signed_rank(&[], &[]), Err(StatsError::Empty));
}

#[test]
fn bootstrap_width_on_standard_normal() {
    let mut r = rng::seeded(2024);
    let xs: Vec<f64> = (0..1000).map(|_| StandardNormal.sample(&mut r)).collect();
    let (lo, hi) = bootstrap_ci(&xs, 10_000, 0.95, 1).unwrap();
    // sample sd stands in for sigma
    let m = mean(&xs);
    let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 999.0).sqrt();
    let expected = 2.0 * 1.96 * sd / (1000f64).sqrt();
    assert!(
        ((hi - lo) / expected - 1.0).abs() < 0.15,
        "width {} vs {expected}",
        hi - lo
    );
    assert!(lo < m && m < hi);
}

#[test]
fn bootstrap_degenerate_and_deterministic() {
    assert_eq!(bootstrap_ci(&[0.42; 50], 1000, 0.95, 3), Some((0.42, 0.42)));
    assert_eq!(bootstrap_ci(&[], 1000, 0.95, 3), None);
    let xs: Vec<f64> = (0..40).map(|i| (i as f64).sqrt()).collect();
    assert_eq!(bootstrap_ci(&xs, 2500, 0.9, 8), bootstrap_ci(&xs, 2500, 0.9, 8));
}

#[test]
fn quantile_interpolates() {
    let s = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(quantile(&s, 0.0), 1.0);
    assert_eq!(quantile(&s, 1.0), 4.0);
    assert_eq!(quantile(&s, 0.5), 2.5);
    assert!((quantile(&s, 0.25) - 1.75).abs() < 1e-12);
}

#[test]
fn wasserstein_fixtures() {
    assert_eq!(wasserstein1(&[0.0, 1.0], &[0.5, 1.5]), Some(0.5));
    assert_eq!(wasserstein1(&[0.0], &[1.0]), Some(1.0));
    assert_eq!(wasserstein1(&[3.0, 1.0, 2.0], &[2.0, 3.0, 1.0]), Some(0.0));
    assert_eq!(wasserstein1(&[], &[1.0]), None);
    // unequal sizes: mean absolute gap between quantile functions
    let w = wasserstein1(&[0.0, 0.0, 3.0], &[1.0, 2.0]).unwrap();
    // CDF gap: on [0,1) 2/3, [1,2) 1/6, [2,3) 1/3
    assert!((w - (2.0 / 3.0 + 1.0 / 6.0 + 1.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn summary_of_small_sample() {
    let s = summarize(&[5.0, 1.0, 3.0, 10.0]).unwrap();
    assert_eq!((s.n, s.min, s.max, s.median), (4, 1.0, 10.0, 4.0));
    assert_eq!(s.avg_2dp(), 4.75);
}

fn grid() -> impl Strategy<Value = Vec<(i32, i32)>> {
    prop::collection::vec((-8..8i32, -8..8i32), 1..18)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ci_brackets_the_mean(xs in prop::collection::vec(-100.0..100.0f64, 2..60), seed in any::<u64>()) {
        let (lo, hi) = bootstrap_ci(&xs, 500, 0.95, seed).unwrap();
        let m = mean(&xs);
        prop_assert!(lo <= hi);
        prop_assert!(lo <= m + 1e-9 && m <= hi + 1e-9);
    }

    #[test]
    fn wilcoxon_is_shift_and_sign_invariant(pairs in grid(), shift in -4..4i32) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0 as f64 * 0.25).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1 as f64 * 0.25).collect();
        let base = wilcoxon_signed_rank(&a, &b).unwrap();
        let s = shift as f64 * 0.25;
        let a2: Vec<f64> = a.iter().map(|x| x + s).collect();
        let b2: Vec<f64> = b.iter().map(|x| x + s).collect();
        prop_assert_eq!(wilcoxon_signed_rank(&a2, &b2).unwrap().p_value, base.p_value);
        let swapped = wilcoxon_signed_rank(&b, &a).unwrap();
        prop_assert_eq!(swapped.p_value, base.p_value);
        prop_assert!((0.0..=1.0).contains(&base.p_value));
    }

    #[test]
    fn wasserstein_is_a_symmetric_shift(xs in prop::collection::vec(-10.0..10.0f64, 1..20), c in -5.0..5.0f64) {
        let ys: Vec<f64> = xs.iter().map(|x| x + c).collect();
        let w = wasserstein1(&xs, &ys).unwrap();
        prop_assert!((w - c.abs()).abs() < 1e-9);
        prop_assert_eq!(wasserstein1(&ys, &xs), Some(w));
    }
}
