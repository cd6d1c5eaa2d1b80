//! Element-wise modulus against Euclidean-norm readings of `|w|^(1-v)` in the
//! fractional update, over a few fractional orders.

use fraclab::analysis::{parameter_sweep, ExperimentOptions, SweepParam};
use fraclab::filters::{FilterConfig, PowerInterpretation};
use fraclab::plant::HarxPlant;

fn main() -> fraclab::Result<()> {
    let plant = HarxPlant::muscle_preset();
    let orders = [0.25, 0.5, 0.75, 1.0];
    let seeds = [1, 2, 3, 4];
    for interp in [PowerInterpretation::ElementwiseAbs, PowerInterpretation::EuclideanNorm] {
        let template = FilterConfig::mflms(plant.dim(), 0.01, 0.1, 1.0, interp);
        let rows = parameter_sweep(
            &plant,
            &template,
            SweepParam::V,
            &orders,
            4000,
            &seeds,
            &ExperimentOptions::default(),
        )?;
        println!("{}:", interp.name());
        for row in rows {
            println!(
                "  v = {:<4} diverged {:.2}  mean terminal error {:.3e}",
                row.value, row.diverged_fraction, row.terminal_weight_error_mean
            );
        }
    }
    Ok(())
}
