use proptest::prelude::*;
use qrmt::experiments::{
    expansion_residual_for, ks_distance, moment_compare, recursion_residual_for, row_mean_statistic, run_extremes,
    sample_covariance, triangle_decomposition_for, TrialConfig,
};
use qrmt::randgen::EntryDistribution;
use qrmt::spectra::spectrum;
use qrmt::{HermitianSpectrum, MpLaw, QMatrix};

fn dist(kind: u8) -> EntryDistribution {
    match kind {
        0 => EntryDistribution::gaussian(1.0),
        1 => EntryDistribution::signed_unit(1.0),
        2 => EntryDistribution::pareto_heavy(1.0),
        _ => EntryDistribution::shifted_mean(1.0, qrmt::Quaternion::E),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn largest_eigenvalue_dominates_row_means(p in 2usize..12, n in 2usize..12, kind in 0u8..4, seed in any::<u64>()) {
        let cfg = TrialConfig::new(p, n, dist(kind), 1, seed);
        let x = cfg.sample(0);
        let s_max = spectrum(&sample_covariance(&x)).unwrap().max();
        prop_assert!(s_max >= row_mean_statistic(&x) - 1e-9);
    }

    #[test]
    fn triangle_decomposition(p in 2usize..10, n in 2usize..12, kind in 0u8..4, seed in any::<u64>()) {
        let x = TrialConfig::new(p, n, dist(kind), 1, seed).sample(0);
        let (lhs, rhs) = triangle_decomposition_for(&x, 1.0).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn records_are_reproducible(p in 2usize..8, n in 2usize..8, kind in 0u8..4, seed in any::<u64>()) {
        let cfg = TrialConfig::new(p, n, dist(kind), 2, seed);
        let a = run_extremes(&cfg).unwrap();
        let b = run_extremes(&cfg).unwrap();
        prop_assert_eq!(&a, &b);
        for r in &a {
            prop_assert!(r.s_min <= r.s_max);
            prop_assert!((0.0..=1.0).contains(&r.ks));
        }
    }

    #[test]
    fn first_moment_is_mean_squared_norm(p in 2usize..8, n in 2usize..8, seed in any::<u64>()) {
        let cfg = TrialConfig::new(p, n, dist(0), 1, seed);
        let x = cfg.sample(0);
        let grand = x.as_slice().iter().map(|q| q.norm_sqr()).sum::<f64>() / (p * n) as f64;
        let m1 = run_extremes(&cfg).unwrap()[0].moments[0];
        prop_assert!((m1 - grand).abs() <= 1e-10 * (1.0 + grand));
    }

    #[test]
    fn expansion_at_first_order_is_exact(p in 2usize..7, n in 2usize..9, seed in any::<u64>(), s2 in 0.2..3.0f64) {
        let x = TrialConfig::new(p, n, dist(0), 1, seed).sample(0);
        prop_assert!(expansion_residual_for(&x, 1, s2).unwrap() <= 1e-9);
    }
}

#[test]
fn zero_data_gives_y_sigma4_recursion_residual() {
    let x = QMatrix::zeros(4, 10);
    let r = recursion_residual_for(&x, 1, 1.5).unwrap();
    assert!((r - 0.4 * 1.5 * 1.5).abs() < 1e-15);
}

#[test]
fn ks_far_point_mass_is_near_one() {
    let law = MpLaw::new(0.25, 1.0).unwrap();
    let ks = ks_distance(&HermitianSpectrum::from_paired_values(&[50.0; 8]), &law).unwrap();
    assert!(ks > 0.999);
}

#[test]
fn moment_table_small_run() {
    let cfg = TrialConfig::new(40, 160, EntryDistribution::gaussian(1.0), 2, 3);
    let rows = moment_compare(&cfg, 3).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].rel_error < 0.05);
    assert!(moment_compare(&cfg, 9).is_err());
}
