use fraclab::analysis::{
    binomial_residual, estimate_correlations, generalized_binomial, leak_summary, run_experiment, wiener_solution,
};
use fraclab::filters::{FilterConfig, PowerInterpretation};
use fraclab::plant::{generate_sequence, Dataset, HarxPlant, InputKind, Regressor};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian_dataset(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regressors: Vec<Regressor> = (0..n)
        .map(|t| Regressor {
            values: (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect(),
            time_index: t + 1,
        })
        .collect();
    let outputs = regressors.iter().map(|r| r.values[0]).collect();
    Dataset {
        m: 1,
        inputs: vec![0.0; n + 1],
        regressors,
        outputs,
        plant_truth: vec![0.0; dim],
    }
}

#[test]
fn white_regressors_give_identity_correlation() {
    let est = estimate_correlations(&gaussian_dataset(100_000, 5, 3)).unwrap();
    let max_dev = (&est.r - DMatrix::<f64>::identity(5, 5)).amax();
    assert!(max_dev < 0.05, "max |R - I| = {max_dev}");
}

/// Compares the incremental estimate with `Psi' Psi / N` formed as a single
/// matrix product.
#[test]
fn correlation_matches_stacked_product() {
    let data = generate_sequence(&HarxPlant::muscle_preset().with_seed(4), &InputKind::Uniform, 2000).unwrap();
    let n = data.len();
    let psi = DMatrix::from_fn(n, 9, |r, c| data.regressors[r].values[c]);
    let s = nalgebra::DVector::from_vec(data.outputs.clone());
    let r = psi.transpose() * &psi / n as f64;
    let p = psi.transpose() * s / n as f64;
    let est = estimate_correlations(&data).unwrap();
    assert!((&est.r - r).amax() < 1e-12);
    assert!((&est.p - p).amax() < 1e-12);
}

#[test]
fn wiener_gap_shrinks_like_inverse_root_n() {
    let plant = HarxPlant::muscle_preset();
    let gap = |n: usize| {
        (0..8u64)
            .map(|seed| {
                let data = generate_sequence(&plant.with_seed(seed), &InputKind::WhiteGaussian, n).unwrap();
                let w = wiener_solution(&estimate_correlations(&data).unwrap(), 0.0).unwrap();
                w.iter()
                    .zip(&data.plant_truth)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum::<f64>()
            / 8.0
    };
    let (small, large) = (gap(1_000), gap(100_000));
    // ideal ratio is 10; allow for sampling spread
    let ratio = small / large;
    assert!((4.0..25.0).contains(&ratio), "gap ratio {ratio}");
}

#[test]
fn curves_are_reproducible_byte_for_byte() {
    let plant = HarxPlant::muscle_preset();
    let cfg = FilterConfig::flms_signed(9, 0.01, 0.2, 0.6);
    let a = run_experiment(&plant, &cfg, 1500, 77).unwrap();
    let b = run_experiment(&plant, &cfg, 1500, 77).unwrap();
    let (mut x, mut y) = (Vec::new(), Vec::new());
    a.write_curves_csv(&mut x).unwrap();
    b.write_curves_csv(&mut y).unwrap();
    assert_eq!(x, y);
    assert_eq!(a.summary_json().to_pretty(), b.summary_json().to_pretty());
    let c = run_experiment(&plant, &cfg, 1500, 78).unwrap();
    assert_ne!(a.mse_curve, c.mse_curve);
}

#[test]
fn euclidean_reading_runs_on_the_preset() {
    let plant = HarxPlant::muscle_preset();
    let cfg = FilterConfig::mflms(9, 0.01, 0.1, 0.75, PowerInterpretation::EuclideanNorm);
    let rec = run_experiment(&plant, &cfg, 3000, 5).unwrap();
    assert!(!rec.diverged);
    assert!(rec.imag_curve.iter().all(|&x| x == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_is_symmetric_and_psd(seed in any::<u64>(), len in 20usize..300) {
        let data = generate_sequence(&HarxPlant::muscle_preset().with_seed(seed), &InputKind::WhiteGaussian, len).unwrap();
        let est = estimate_correlations(&data).unwrap();
        prop_assert_eq!(&est.r, &est.r.transpose());
        prop_assert!(est.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let scale = est.lambda_max().max(1.0);
        prop_assert!(est.lambda_min() >= -1e-10 * scale);
    }

    /// The truncated series agrees with the direct power inside the radius of
    /// convergence; the coefficient recursion is checked against the
    /// falling-factorial definition.
    #[test]
    fn series_converges_inside_radius(omega in 0.2..5.0f64, ratio in -0.5..0.5f64, j in -2.0..3.0f64) {
        let delta = ratio * omega;
        let r = binomial_residual(omega, delta, j, 60).unwrap();
        let direct = (omega + delta).powf(j);
        prop_assert!((r.partial_sums[60] - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        let mut sum = 0.0;
        for k in 0..=5 {
            sum += generalized_binomial(j, k) * omega.powf(j - k as f64) * delta.powi(k as i32);
            prop_assert!((r.partial_sums[k] - sum).abs() <= 1e-12 * sum.abs().max(1.0));
        }
    }

    #[test]
    fn leak_summary_counts_threshold_crossings(curve in prop::collection::vec(prop_oneof![Just(0.0), 1e-12..1.0f64], 1..50)) {
        let s = leak_summary(&curve);
        let leaking = curve.iter().filter(|&&x| x > 1e-15).count();
        prop_assert_eq!(s.leak_fraction, leaking as f64 / curve.len() as f64);
        prop_assert_eq!(s.first_leak_iter, curve.iter().position(|&x| x > 1e-15));
    }
}
