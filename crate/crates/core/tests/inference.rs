//! Scheme validation, dataset I/O, estimator invariances, execution-mode
//! equivalence and scheme enumeration.

use bjpc::dataset::{scheme1, scheme2, Dataset};
use bjpc::estimate::{fit_amle, fit_mle, profile_score, XiRule};
use bjpc::experiments::{coverage_study, estimation_study};
use bjpc::intervals::{asymptotic_ci, bootstrap_ci};
use bjpc::ocs::{enumerate_schemes, exhaustive_count, search_optimum, SchemeFamily, SearchConfig};
use bjpc::region::{joint_region, region_volume};
use bjpc::rng::RngStream;
use bjpc::simulate::simulate_spacings;
use bjpc::{BjpcSample, CensoringScheme, Error, Execution, Probability, WeibullParams};
use proptest::prelude::*;

fn p(v: f64) -> Probability {
    Probability::new(v).unwrap()
}

#[test]
fn scheme_validation() {
    assert!(matches!(
        CensoringScheme::new(10, 1, vec![]),
        Err(Error::InvalidScheme(_))
    ));
    assert!(matches!(
        CensoringScheme::new(3, 4, vec![0, 0, 0]),
        Err(Error::InvalidScheme(_))
    ));
    assert!(matches!(
        CensoringScheme::new(10, 3, vec![0]),
        Err(Error::InvalidScheme(_))
    ));
    // sum (R_i + 1) must stay below m
    assert!(CensoringScheme::new(10, 3, vec![4, 4]).is_err());
    let s = CensoringScheme::new(10, 3, vec![4, 2]).unwrap();
    assert_eq!(s.weights(), &[5, 3, 2]);
    assert_eq!(s.alive(), &[10, 5, 2]);
    assert_eq!(s.weights().iter().sum::<usize>(), 10);
}

#[test]
fn sample_validation() {
    let scheme = CensoringScheme::new(6, 3, vec![0, 0]).unwrap();
    assert!(BjpcSample::new(scheme.clone(), vec![1.0, 0.5, 2.0], vec![true, false, true]).is_err());
    assert!(BjpcSample::new(
        scheme.clone(),
        vec![-1.0, 0.5, 2.0],
        vec![true, false, true]
    )
    .is_err());
    assert!(BjpcSample::new(scheme.clone(), vec![1.0, 2.0], vec![true, false]).is_err());
    assert!(BjpcSample::new(scheme, vec![0.5, 1.0, 2.0], vec![true, false, true]).is_ok());
}

#[test]
fn dataset_json_round_trip_is_exact() {
    for sample in [scheme1(), scheme2()] {
        let json = Dataset::from_sample(&sample).to_json().unwrap();
        let back = Dataset::from_json(&json).unwrap().to_sample().unwrap();
        assert_eq!(back, sample);
    }
    let scheme = CensoringScheme::new(12, 6, vec![1, 0, 2, 0, 0]).unwrap();
    let truth = WeibullParams::new(1.7, 0.3, 2.1).unwrap();
    let sample = simulate_spacings(&scheme, &truth, &mut RngStream::new(3, 4).rng());
    let json = Dataset::from_sample(&sample).to_json().unwrap();
    assert_eq!(
        Dataset::from_json(&json).unwrap().to_sample().unwrap(),
        sample
    );
    assert!(
        Dataset::from_json(r#"{"m":4,"k":2,"R":[0],"w":[1,2],"z":[1,2]}"#)
            .unwrap()
            .to_sample()
            .is_err()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rescaling every time by `c` leaves alpha unchanged and scales each
    /// lambda by `c^-alpha`.
    #[test]
    fn mle_is_scale_equivariant(seed in 0u64..1_000, c in 0.05f64..20.0, alpha in 0.4f64..3.0) {
        let scheme = CensoringScheme::new(20, 12, vec![1, 0, 0, 2, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        let truth = WeibullParams::new(alpha, 0.6, 1.2).unwrap();
        let sample = simulate_spacings(&scheme, &truth, &mut RngStream::new(seed, 1).rng());
        prop_assume!(sample.k1() > 0 && sample.k2() > 0);
        let scaled = sample.map_times(|t| c * t).unwrap();
        let (a, _) = fit_mle(&sample).unwrap();
        let (b, _) = fit_mle(&scaled).unwrap();
        prop_assert!((a.alpha - b.alpha).abs() < 1e-8 * a.alpha);
        let factor = c.powf(-a.alpha);
        prop_assert!((b.lambda1 - a.lambda1 * factor).abs() < 1e-6 * b.lambda1);
        prop_assert!((b.lambda2 - a.lambda2 * factor).abs() < 1e-6 * b.lambda2);
        prop_assert!(profile_score(&sample, a.alpha).abs() < 1e-8);
    }

    /// The exact pivot region is invariant in the same way, so the alpha
    /// interval does not move under rescaling.
    #[test]
    fn alpha_interval_is_scale_invariant(seed in 0u64..500, c in 0.1f64..10.0) {
        let scheme = CensoringScheme::new(15, 8, vec![0, 1, 0, 0, 2, 0, 0]).unwrap();
        let truth = WeibullParams::new(1.3, 1.0, 0.5).unwrap();
        let sample = simulate_spacings(&scheme, &truth, &mut RngStream::new(seed, 2).rng());
        let scaled = sample.map_times(|t| c * t).unwrap();
        let a = joint_region(&sample, p(0.1), None, 401).unwrap();
        let b = joint_region(&scaled, p(0.1), None, 401).unwrap();
        prop_assert!((a.alpha_interval.0 - b.alpha_interval.0).abs() < 1e-7);
        prop_assert!((a.alpha_interval.1 - b.alpha_interval.1).abs() < 1e-7);
    }

    /// The region volume shrinks as the confidence level drops.
    #[test]
    fn volume_increases_with_confidence(seed in 0u64..200) {
        let scheme = CensoringScheme::new(20, 10, vec![0; 9]).unwrap();
        let truth = WeibullParams::new(1.0, 0.5, 1.0).unwrap();
        let sample = simulate_spacings(&scheme, &truth, &mut RngStream::new(seed, 3).rng());
        let small = region_volume(&sample, p(0.1), p(0.1), 401).unwrap();
        let large = region_volume(&sample, p(0.02), p(0.02), 401).unwrap();
        prop_assert!(large > small);
    }
}

#[test]
fn amle_is_close_to_mle_on_real_data() {
    for sample in [scheme1(), scheme2()] {
        let (mle, _) = fit_mle(&sample).unwrap();
        let amle = fit_amle(&sample).unwrap();
        assert!((mle.alpha - amle.alpha).abs() < 0.02 * mle.alpha);
    }
}

#[test]
fn execution_modes_agree() {
    let scheme = CensoringScheme::new(15, 8, vec![2, 0, 0, 1, 0, 0, 0]).unwrap();
    let truth = WeibullParams::new(1.5, 0.5, 1.0).unwrap();
    let run = |exec| estimation_study(&scheme, &truth, 300, 11, XiRule::LogOfMean, exec).unwrap();
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));

    let cov = |exec| coverage_study(&scheme, &truth, p(0.9), 40, Some(100), 11, exec).unwrap();
    assert_eq!(cov(Execution::Sequential), cov(Execution::Parallel));

    let sample = scheme2();
    let (fit, _) = fit_mle(&sample).unwrap();
    let boot = |exec| bootstrap_ci(&sample, &fit, p(0.9), 200, 5, exec).unwrap();
    assert_eq!(boot(Execution::Sequential), boot(Execution::Parallel));

    let cfg = |exec| SearchConfig {
        gamma: p(0.1),
        reps: 60,
        seed: 9,
        grid: 401,
        exec,
    };
    let a = search_optimum(
        7,
        4,
        &truth,
        SchemeFamily::Exhaustive,
        &cfg(Execution::Sequential),
    )
    .unwrap();
    let b = search_optimum(
        7,
        4,
        &truth,
        SchemeFamily::Exhaustive,
        &cfg(Execution::Parallel),
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn bootstrap_rejects_too_few_replications() {
    let sample = scheme1();
    let (fit, _) = fit_mle(&sample).unwrap();
    assert!(bootstrap_ci(&sample, &fit, p(0.9), 50, 1, Execution::Sequential).is_err());
    let asym = asymptotic_ci(&sample, &fit, p(0.9)).unwrap();
    assert!(asym.iter().all(|ci| ci.lower >= 0.0 && ci.lower < ci.upper));
}

#[test]
fn exhaustive_enumeration_is_complete_and_unique() {
    for (m, k) in [(6, 3), (8, 4), (10, 5), (9, 2), (5, 5)] {
        let schemes = enumerate_schemes(m, k, SchemeFamily::Exhaustive, 10_000).unwrap();
        assert_eq!(schemes.len() as u128, exhaustive_count(m, k));
        let mut seen: Vec<Vec<usize>> = schemes.iter().map(|s| s.removals().to_vec()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), schemes.len());
        assert!(schemes
            .iter()
            .all(|s| s.removals().iter().sum::<usize>() <= m - k));
    }
    assert_eq!(exhaustive_count(25, 20), 42_504);
    assert!(matches!(
        enumerate_schemes(40, 20, SchemeFamily::Exhaustive, 1000),
        Err(Error::TooManySchemes { .. })
    ));
}

#[test]
fn single_block_family_has_one_scheme_per_position() {
    let schemes = enumerate_schemes(25, 20, SchemeFamily::SingleBlock { size: 5 }, 0).unwrap();
    assert_eq!(schemes.len(), 19);
    for (i, s) in schemes.iter().enumerate() {
        assert_eq!(s.removals()[i], 5);
        assert_eq!(s.removals().iter().sum::<usize>(), 5);
    }
}

#[test]
fn search_is_sorted_by_expected_volume() {
    let truth = WeibullParams::new(1.0, 0.5, 1.0).unwrap();
    let cfg = SearchConfig {
        gamma: p(0.1),
        reps: 200,
        seed: 4,
        grid: 401,
        exec: Execution::default(),
    };
    let ranked =
        search_optimum(10, 6, &truth, SchemeFamily::SingleBlock { size: 2 }, &cfg).unwrap();
    assert_eq!(ranked.len(), 5);
    assert!(ranked
        .windows(2)
        .all(|w| w[0].expected_volume <= w[1].expected_volume));
    assert!(ranked.iter().all(|e| e.volume_se > 0.0 && e.etot > 0.0));
}
