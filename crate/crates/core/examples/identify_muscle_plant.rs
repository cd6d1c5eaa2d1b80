//! Identifies the muscle-stimulation preset with LMS, momentum LMS and the
//! modulus-form fractional update, printing learning-curve checkpoints.

use fraclab::analysis::run_experiment;
use fraclab::filters::{FilterConfig, PowerInterpretation};
use fraclab::plant::HarxPlant;

fn main() -> fraclab::Result<()> {
    let plant = HarxPlant::muscle_preset();
    let n = plant.dim();
    let configs = [
        ("lms", FilterConfig::lms(n, 0.01)),
        ("momentum_lms", FilterConfig::momentum_lms(n, 0.01, 0.5)),
        (
            "mflms v=0.5",
            FilterConfig::mflms(n, 0.01, 0.1, 0.5, PowerInterpretation::ElementwiseAbs),
        ),
    ];
    println!(
        "{:<14} {:>12} {:>12} {:>12} {:>12}",
        "filter", "iter 0", "iter 100", "iter 1000", "final"
    );
    for (name, cfg) in configs {
        let rec = run_experiment(&plant, &cfg, 5000, 1)?;
        let e = &rec.weight_error_curve;
        println!(
            "{name:<14} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            rec.initial_weight_error,
            e[100],
            e[1000],
            rec.terminal_weight_error()
        );
    }
    Ok(())
}
