//! Wiener solution against the true weights as the sample count grows, and
//! the terminal gap of the fractional update against that solution.

use fraclab::analysis::{estimate_correlations, run_experiment, wiener_solution};
use fraclab::filters::{FilterConfig, PowerInterpretation};
use fraclab::plant::{generate_sequence, HarxPlant, InputKind};

fn main() -> fraclab::Result<()> {
    let plant = HarxPlant::muscle_preset();
    for n in [1_000, 10_000, 100_000] {
        let data = generate_sequence(&plant.with_seed(1), &InputKind::WhiteGaussian, n)?;
        let est = estimate_correlations(&data)?;
        let w = wiener_solution(&est, 0.0)?;
        let gap: f64 = w
            .iter()
            .zip(&data.plant_truth)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        println!(
            "N = {n:>6}: |omega_opt - w_true| = {gap:.3e}, lambda in [{:.3e}, {:.3e}]",
            est.lambda_min(),
            est.lambda_max()
        );
    }
    for v in [0.5, 0.75, 1.0] {
        let cfg = FilterConfig::mflms(plant.dim(), 0.01, 0.1, v, PowerInterpretation::ElementwiseAbs);
        let rec = run_experiment(&plant, &cfg, 10_000, 3)?;
        println!(
            "mflms v = {v:<4}: terminal |Re(w) - omega_opt| = {:.3e}",
            rec.terminal_weight_error()
        );
    }
    Ok(())
}
