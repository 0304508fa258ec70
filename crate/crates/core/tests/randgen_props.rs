use proptest::prelude::*;
use qrmt::randgen::{count_truncated, sample_matrix, stream_rng, truncate_centralize, EntryDistribution, TruncationSchedule};
use qrmt::Quaternion;

fn norm_sq_mean(dist: &EntryDistribution, p: usize, n: usize, seed: u64) -> f64 {
    let x = sample_matrix(dist, p, n, seed, 0);
    x.as_slice().iter().map(|q| q.norm_sqr()).sum::<f64>() / (p * n) as f64
}

#[test]
fn gaussian_second_moment() {
    // norm² = (σ²/4)·χ²₄ has variance σ⁴/2
    let mean = norm_sq_mean(&EntryDistribution::gaussian(1.0), 1000, 1000, 1);
    let se = (0.5f64 / 1e6).sqrt();
    assert!((0.99..=1.01).contains(&mean));
    assert!((mean - 1.0).abs() <= 4.0 * se, "{mean}");
}

#[test]
fn gaussian_components_have_quarter_variance() {
    let x = sample_matrix(&EntryDistribution::gaussian(2.0), 500, 2000, 2, 0);
    let n = x.as_slice().len() as f64;
    let parts: [fn(&Quaternion) -> f64; 4] = [|q| q.a, |q| q.b, |q| q.c, |q| q.d];
    let se = 0.5 * (2.0f64 / n).sqrt();
    for get in parts {
        let var = x.as_slice().iter().map(|q| get(q).powi(2)).sum::<f64>() / n;
        assert!((var - 0.5).abs() <= 4.0 * se, "{var}");
    }
}

#[test]
fn pareto_norm_tail_index_is_below_four() {
    // Hill estimate over the top order statistics; a tail index under 4 means E norm⁴ = ∞
    let dist = EntryDistribution::pareto_heavy(1.0);
    let top = 2_000;
    for seed in 0..5 {
        let mut rng = stream_rng(40 + seed, 0);
        let mut norms: Vec<f64> = (0..200_000).map(|_| dist.sample(&mut rng).norm()).collect();
        norms.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let floor = norms[top].ln();
        let hill = top as f64 / norms[..top].iter().map(|v| v.ln() - floor).sum::<f64>();
        assert!((2.6..=3.4).contains(&hill), "seed {seed}: {hill}");
    }
}

#[test]
fn pareto_second_moment_is_finite_and_calibrated() {
    let mean = norm_sq_mean(&EntryDistribution::pareto_heavy(1.0), 1000, 1000, 3);
    // the sample mean of a variable with infinite variance converges slowly
    assert!((mean - 1.0).abs() < 0.05, "{mean}");
}

#[test]
fn streams_are_uncorrelated() {
    let dist = EntryDistribution::gaussian(1.0);
    let a = sample_matrix(&dist, 300, 300, 9, 0);
    let b = sample_matrix(&dist, 300, 300, 9, 1);
    let n = a.as_slice().len() as f64;
    let corr = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.a * y.a).sum::<f64>() / n / 0.25;
    assert!(corr.abs() <= 4.0 / n.sqrt(), "{corr}");
}

#[test]
fn pareto_truncation_rate_matches_tail() {
    let dist = EntryDistribution::pareto_heavy(1.0);
    let sched = TruncationSchedule::default();
    let (p, n) = (100, 100);
    let x = sample_matrix(&dist, p, n, 5, 0);
    let prob = dist.norm_tail(sched.threshold(n)).unwrap();
    let total = (p * n) as f64;
    let expected = total * prob;
    let sd = (total * prob * (1.0 - prob)).sqrt();
    let got = count_truncated(&x, n, &sched) as f64;
    assert!((got - expected).abs() <= 3.0 * sd, "{got} vs {expected} +/- {sd}");
}

#[test]
fn schedule_shrinks_but_threshold_grows() {
    let s = TruncationSchedule::default();
    assert!(s.delta(1000) < s.delta(100) && s.delta(100) < 1.0);
    assert!(s.threshold(1000) > s.threshold(100));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), stream in 0u64..1000, p in 1usize..6, n in 1usize..6) {
        for dist in [
            EntryDistribution::gaussian(1.0),
            EntryDistribution::signed_unit(0.5),
            EntryDistribution::pareto_heavy(2.0),
            EntryDistribution::shifted_mean(1.0, Quaternion::E),
        ] {
            prop_assert_eq!(sample_matrix(&dist, p, n, seed, stream), sample_matrix(&dist, p, n, seed, stream));
        }
    }

    #[test]
    fn signed_unit_norm_is_sigma(seed in any::<u64>(), s2 in 0.1..4.0f64) {
        let x = sample_matrix(&EntryDistribution::signed_unit(s2), 4, 5, seed, 0);
        for q in x.as_slice() {
            prop_assert!((q.norm() - s2.sqrt()).abs() <= 1e-15 * (1.0 + s2));
        }
    }

    #[test]
    fn centralized_output_has_zero_grand_mean(seed in any::<u64>()) {
        let x = sample_matrix(&EntryDistribution::pareto_heavy(1.0), 6, 7, seed, 0);
        let y = truncate_centralize(&x, 7, &TruncationSchedule::default());
        let mean = y.as_slice().iter().copied().sum::<Quaternion>().scale(1.0 / 42.0);
        prop_assert!(mean.norm() <= 1e-12 * (1.0 + x.max_entry_norm()));
    }
}
