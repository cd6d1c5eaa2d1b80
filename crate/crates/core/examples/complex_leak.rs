//! Shows the signed fractional update leaving the reals once a weight turns
//! negative, while the real-only variants stay real on the same data.

use fraclab::analysis::{complex_leak_report, run_experiment};
use fraclab::filters::{FilterConfig, PowerInterpretation};
use fraclab::plant::{BasisSet, HarxPlant};

fn main() -> fraclab::Result<()> {
    // c has a negative entry, so the ideal weights do too
    let plant = HarxPlant::new(
        BasisSet::polynomial(3)?,
        vec![0.6, 0.3, 0.1],
        vec![1.0, -0.5, 0.25],
        0.01,
        0,
    )?;
    let n = plant.dim();
    for (name, cfg) in [
        ("flms_signed v=0.5", FilterConfig::flms_signed(n, 0.01, 0.0, 0.5)),
        (
            "mflms v=0.5",
            FilterConfig::mflms(n, 0.01, 0.0, 0.5, PowerInterpretation::ElementwiseAbs),
        ),
        ("lms", FilterConfig::lms(n, 0.01)),
    ] {
        let rec = run_experiment(&plant, &cfg, 3000, 7)?;
        let leak = complex_leak_report(&rec);
        println!(
            "{name:<18} complex steps {:>5}  first leak {:>5}  max |Im w| {:.3e}",
            rec.final_state.complex_events,
            leak.first_leak_iter.map_or("-".to_string(), |i| i.to_string()),
            leak.max_imag
        );
    }
    Ok(())
}
