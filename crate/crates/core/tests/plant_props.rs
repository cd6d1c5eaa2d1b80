use fraclab::plant::{
    build_regressor, generate_sequence, plant_output, true_weight_vector, BasisSet, HarxPlant, InputKind, Regressor,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plant(q: Vec<f64>, c: Vec<f64>, noise: f64, seed: u64) -> HarxPlant {
    let l = c.len();
    HarxPlant::new(BasisSet::polynomial(l).unwrap(), q, c, noise, seed).unwrap()
}

fn nonzero_coeffs(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-2.0..-0.1f64, 0.1..2.0f64], 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn regressor_blocks_follow_delay_then_basis(
        history in prop::collection::vec(-2.0..2.0f64, 6..20),
        m in 1usize..5,
        l in 1usize..5,
    ) {
        let basis = BasisSet::polynomial(l).unwrap();
        let t = history.len();
        prop_assume!(t >= m);
        let reg = build_regressor(&history, t, &basis, m).unwrap();
        prop_assert_eq!(reg.len(), m * l);
        for i in 1..=m {
            for k in 1..=l {
                let expected = history[t - i].powi(k as i32);
                prop_assert_eq!(reg.values[(i - 1) * l + (k - 1)], expected);
            }
        }
    }

    #[test]
    fn weight_vector_is_delay_major(q in nonzero_coeffs(4), c in nonzero_coeffs(4)) {
        let p = plant(q.clone(), c.clone(), 0.0, 0);
        let w = true_weight_vector(&p);
        for (i, qi) in q.iter().enumerate() {
            for (k, ck) in c.iter().enumerate() {
                prop_assert_eq!(w[i * c.len() + k], qi * ck);
            }
        }
    }

    /// Noise-free data determine the stacked weight vector, checked with an
    /// SVD least-squares solve independent of the correlation route.
    #[test]
    fn noise_free_data_identify_the_weights(q in nonzero_coeffs(3), c in nonzero_coeffs(3), seed in 0u64..1000) {
        let p = plant(q, c, 0.0, seed);
        let data = generate_sequence(&p, &InputKind::Uniform, 400).unwrap();
        let n = p.dim();
        let a = DMatrix::from_fn(data.len(), n, |r, j| data.regressors[r].values[j]);
        let b = DVector::from_vec(data.outputs.clone());
        let w = a.svd(true, true).solve(&b, 1e-12).unwrap();
        let truth = true_weight_vector(&p);
        for j in 0..n {
            prop_assert!((w[j] - truth[j]).abs() <= 1e-8, "component {}: {} vs {}", j, w[j], truth[j]);
        }
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        let p = HarxPlant::muscle_preset().with_seed(seed);
        let a = generate_sequence(&p, &InputKind::WhiteGaussian, 50).unwrap();
        let b = generate_sequence(&p, &InputKind::WhiteGaussian, 50).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn output_noise_has_the_configured_moments() {
    let p = plant(vec![0.6, 0.3, 0.1], vec![1.0, 0.5, 0.25], 0.2, 0);
    let reg = Regressor {
        values: vec![0.5, -1.0, 0.25, 1.0, 0.0, -0.5, 2.0, 1.5, -1.0],
        time_index: 3,
    };
    let clean = reg.dot(&true_weight_vector(&p));
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 100_000;
    let samples: Vec<f64> = (0..n)
        .map(|_| plant_output(&p, &reg, &mut rng).unwrap() - clean)
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // 5 standard errors
    assert!(mean.abs() < 5.0 * 0.2 / (n as f64).sqrt(), "mean {mean}");
    assert!(
        (var.sqrt() - 0.2).abs() < 5.0 * 0.2 / (2.0 * n as f64).sqrt(),
        "std {}",
        var.sqrt()
    );
}

#[test]
fn uniform_input_has_unit_variance() {
    let p = HarxPlant::muscle_preset().with_seed(9);
    let data = generate_sequence(&p, &InputKind::Uniform, 100_000).unwrap();
    let n = data.inputs.len() as f64;
    let mean = data.inputs.iter().sum::<f64>() / n;
    let var = data.inputs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    assert!(mean.abs() < 0.02);
    assert!((var - 1.0).abs() < 0.02);
}

#[test]
fn noise_level_does_not_change_the_inputs() {
    let quiet = HarxPlant::muscle_preset().with_noise_std(0.0).unwrap().with_seed(5);
    let loud = quiet.with_noise_std(1.0).unwrap();
    let a = generate_sequence(&quiet, &InputKind::Uniform, 100).unwrap();
    let b = generate_sequence(&loud, &InputKind::Uniform, 100).unwrap();
    assert_eq!(a.inputs, b.inputs);
    assert_eq!(a.regressors, b.regressors);
    assert_ne!(a.outputs, b.outputs);
}
