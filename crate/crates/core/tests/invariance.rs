//! Cross-module checks: oracle equivalence, invariance of the determinant,
//! the boundary limit, and frozen regression values.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stardet::geom::{Configuration, Space};
use stardet::maps::{normalized_determinant, ConstructionMode};
use stardet::verify::{
    classical_as_determinant, run_invariance_campaign, sample_configuration, CampaignSpec,
};

#[test]
fn observer_mode_at_d1_matches_the_classical_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for space in [Space::Euclidean, Space::Hyperbolic] {
        for n in 2..=6usize {
            for _ in 0..20 {
                let cfg: Configuration<f64> = sample_configuration(space, n, &mut rng).unwrap();
                let oracle = classical_as_determinant(&cfg).unwrap();
                let rep =
                    normalized_determinant(&cfg, 1, ConstructionMode::Observer, 0, 0).unwrap();
                let rel = (oracle - rep.value).norm() / oracle.norm();
                assert!(rel <= 1e-9, "{space} n={n}: oracle {oracle} vs D {}", rep.value);
            }
        }
    }
}

/// The equilateral triangle in a plane: |D| = 9/8 in the single-observer
/// construction. Frozen from the independent oracle.
#[test]
fn equilateral_triangle_value() {
    let h = 3.0f64.sqrt() / 2.0;
    let cfg = Configuration::euclidean(vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, h, 0.0],
    ])
    .unwrap();
    let oracle = classical_as_determinant(&cfg).unwrap();
    assert!((oracle.norm() - 1.125).abs() < 1e-12, "oracle {oracle}");
    let rep = normalized_determinant(&cfg, 1, ConstructionMode::Observer, 0, 0).unwrap();
    assert!((rep.abs - 1.125).abs() < 1e-12, "D {}", rep.value);
    assert!(rep.abs >= 1.0);
}

/// A square (n = 4, coplanar): the classical determinant and both modes at
/// every split stay above 1, and the d = 1 value is gauge independent.
#[test]
fn square_configuration_bounds() {
    let cfg = Configuration::euclidean(vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
    ])
    .unwrap();
    for d in 1..4 {
        for mode in [ConstructionMode::Observer, ConstructionMode::Star] {
            let rep = normalized_determinant(&cfg, d, mode, 5, 5).unwrap();
            assert!(rep.abs >= 1.0 - 1e-12, "{mode} d={d}: |D| = {}", rep.abs);
            assert!(rep.gauge_spread.unwrap() <= 1e-10, "{mode} d={d}");
        }
    }
}

#[test]
fn determinant_invariance_small_grid() {
    for space in [Space::Euclidean, Space::Hyperbolic] {
        for (n, d) in [(3, 1), (3, 2), (4, 2), (5, 3)] {
            for star in [false, true] {
                let mode = ConstructionMode::for_space(space, star);
                let spec = CampaignSpec::new(n, d, mode, space).with_trials(5).with_seed(11);
                let report = run_invariance_campaign::<f64>(&spec).unwrap();
                assert!(
                    report.passed(),
                    "{space} n={n} d={d} {mode}: {:?}",
                    report.violations
                );
            }
        }
    }
}

#[test]
fn hyperbolic_determinant_converges_to_euclidean() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [3usize, 4] {
        for _ in 0..5 {
            let cfg: Configuration<f64> =
                sample_configuration(Space::Euclidean, n, &mut rng).unwrap();
            let d = n.div_ceil(2);
            let euc = normalized_determinant(&cfg, d, ConstructionMode::Observer, 0, 0).unwrap();
            let mut errs = Vec::new();
            for eps in [1e-2, 1e-3, 1e-4] {
                let pts: Vec<[f64; 3]> = cfg
                    .spatial_points()
                    .iter()
                    .map(|p| [p[0] * eps, p[1] * eps, p[2] * eps])
                    .collect();
                let hyp = Configuration::hyperbolic(pts).unwrap();
                let rep =
                    normalized_determinant(&hyp, d, ConstructionMode::Observer, 0, 0).unwrap();
                errs.push((rep.value - euc.value).norm());
            }
            // one decade of epsilon buys about a decade of error
            assert!(errs[1] < errs[0] * 0.2, "n={n}: {errs:?}");
            assert!(errs[2] < errs[1] * 0.2, "n={n}: {errs:?}");
        }
    }
}

#[test]
fn campaign_reports_are_bitwise_reproducible() {
    let spec = CampaignSpec::new(5, 2, ConstructionMode::Star, Space::Hyperbolic)
        .with_trials(6)
        .with_seed(77);
    let a = run_invariance_campaign::<f64>(&spec).unwrap().to_json();
    let b = run_invariance_campaign::<f64>(&spec).unwrap().to_json();
    assert_eq!(a, b);
}
