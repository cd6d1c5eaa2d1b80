//! Empirical LMS divergence fraction over a step-size grid around the
//! classical bound `2 / lambda_max`.

use fraclab::analysis::{log_grid, reference_lambda_max, stability_probe};
use fraclab::filters::FilterConfig;
use fraclab::plant::{HarxPlant, InputKind};

fn main() -> fraclab::Result<()> {
    let plant = HarxPlant::muscle_preset();
    let seeds: Vec<u64> = (0..10).collect();
    let bound = 2.0 / reference_lambda_max(&plant, &InputKind::Uniform, 5000, seeds[0])?;
    let grid = log_grid(0.05 * bound, 5.0 * bound, 8);
    let report = stability_probe(&plant, &FilterConfig::lms(plant.dim(), 0.01), &grid, 5000, &seeds)?;
    println!("2/lambda_max = {:.4}", report.reference_eta);
    for row in &report.rows {
        println!(
            "eta = {:.4} ({:>5.2} x bound): diverged {:>4.0}%  mean terminal error {:.3e}",
            row.value,
            row.value / report.reference_eta,
            100.0 * row.diverged_fraction,
            row.terminal_weight_error_mean
        );
    }
    Ok(())
}
