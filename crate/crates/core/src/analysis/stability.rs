//! Empirical divergence probes and single-parameter sweeps.

use super::correlation::estimate_correlations;
use super::experiment::{complex_leak_report, run_experiment_with, ExperimentOptions};
use crate::error::{Error, Result};
use crate::filters::FilterConfig;
use crate::plant::{generate_sequence, HarxPlant, InputKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eta,
    Beta,
    V,
}

impl SweepParam {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eta" => Some(SweepParam::Eta),
            "beta" => Some(SweepParam::Beta),
            "v" => Some(SweepParam::V),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Eta => "eta",
            SweepParam::Beta => "beta",
            SweepParam::V => "v",
        }
    }

    pub fn apply(self, cfg: &FilterConfig, value: f64) -> FilterConfig {
        match self {
            SweepParam::Eta => FilterConfig { eta: value, ..*cfg },
            SweepParam::Beta => FilterConfig { beta: value, ..*cfg },
            SweepParam::V => FilterConfig { v: value, ..*cfg },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub diverged_fraction: f64,
    /// Mean over the seeds that did not diverge; NaN when all diverged.
    pub terminal_weight_error_mean: f64,
    pub leak_fraction_mean: f64,
}

/// Runs every seed at one configuration and aggregates.
pub fn evaluate_config(
    plant: &HarxPlant,
    cfg: &FilterConfig,
    value: f64,
    t_len: usize,
    seeds: &[u64],
    opts: &ExperimentOptions,
) -> Result<SweepRow> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter {
            name: "seeds",
            reason: "need at least one seed".into(),
        });
    }
    let mut diverged = 0usize;
    let mut err_sum = 0.0;
    let mut leak_sum = 0.0;
    for &seed in seeds {
        let rec = run_experiment_with(plant, cfg, t_len, seed, opts)?;
        leak_sum += complex_leak_report(&rec).leak_fraction;
        if rec.diverged {
            diverged += 1;
        } else {
            err_sum += rec.terminal_weight_error();
        }
    }
    let total = seeds.len() as f64;
    let converged = seeds.len() - diverged;
    Ok(SweepRow {
        value,
        diverged_fraction: diverged as f64 / total,
        terminal_weight_error_mean: if converged == 0 {
            f64::NAN
        } else {
            err_sum / converged as f64
        },
        leak_fraction_mean: leak_sum / total,
    })
}

pub fn parameter_sweep(
    plant: &HarxPlant,
    template: &FilterConfig,
    param: SweepParam,
    grid: &[f64],
    t_len: usize,
    seeds: &[u64],
    opts: &ExperimentOptions,
) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&value| {
            let cfg = param.apply(template, value);
            cfg.validate()?;
            evaluate_config(plant, &cfg, value, t_len, seeds, opts)
        })
        .collect()
}

/// Largest eigenvalue of the empirical regressor correlation for the first
/// seed's data.
pub fn reference_lambda_max(plant: &HarxPlant, input: &InputKind, t_len: usize, seed: u64) -> Result<f64> {
    let data = generate_sequence(&plant.with_seed(seed), input, t_len)?;
    Ok(estimate_correlations(&data)?.lambda_max())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub lambda_max: f64,
    /// Classical LMS bound `2 / lambda_max`.
    pub reference_eta: f64,
    pub rows: Vec<SweepRow>,
}

impl StabilityReport {
    pub fn is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].diverged_fraction >= w[0].diverged_fraction)
    }
}

/// Divergence fraction per step size over `seeds`, with the classical bound
/// for reference. `eta_grid` must be positive and strictly ascending.
pub fn stability_probe(
    plant: &HarxPlant,
    template: &FilterConfig,
    eta_grid: &[f64],
    t_len: usize,
    seeds: &[u64],
) -> Result<StabilityReport> {
    stability_probe_with(plant, template, eta_grid, t_len, seeds, &ExperimentOptions::default())
}

pub fn stability_probe_with(
    plant: &HarxPlant,
    template: &FilterConfig,
    eta_grid: &[f64],
    t_len: usize,
    seeds: &[u64],
    opts: &ExperimentOptions,
) -> Result<StabilityReport> {
    if eta_grid.is_empty()
        || eta_grid.iter().any(|&e| !e.is_finite() || e <= 0.0)
        || eta_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidParameter {
            name: "eta_grid",
            reason: "must be nonempty, positive and strictly ascending".into(),
        });
    }
    let first_seed = *seeds.first().ok_or(Error::InvalidParameter {
        name: "seeds",
        reason: "need at least one seed".into(),
    })?;
    let lambda_max = reference_lambda_max(plant, &opts.input, t_len, first_seed)?;
    let rows = parameter_sweep(plant, template, SweepParam::Eta, eta_grid, t_len, seeds, opts)?;
    Ok(StabilityReport {
        lambda_max,
        reference_eta: 2.0 / lambda_max,
        rows,
    })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        let plant = HarxPlant::muscle_preset();
        let cfg = FilterConfig::lms(9, 0.01);
        assert!(stability_probe(&plant, &cfg, &[0.1, 0.05], 100, &[1]).is_err());
        assert!(stability_probe(&plant, &cfg, &[0.0, 0.05], 100, &[1]).is_err());
        assert!(stability_probe(&plant, &cfg, &[0.01], 100, &[]).is_err());
    }

    #[test]
    fn sweep_rejects_illegal_values() {
        let plant = HarxPlant::muscle_preset();
        let cfg = FilterConfig::momentum_lms(9, 0.01, 0.1);
        let opts = ExperimentOptions::default();
        assert!(parameter_sweep(&plant, &cfg, SweepParam::Beta, &[0.5, 1.0], 100, &[1], &opts).is_err());
        assert!(parameter_sweep(&plant, &cfg, SweepParam::V, &[0.0], 100, &[1], &opts).is_err());
        assert!(parameter_sweep(&plant, &cfg, SweepParam::Eta, &[-0.1], 100, &[1], &opts).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.1, 10.0, 3);
        assert!((g[0] - 0.1).abs() < 1e-15);
        assert!((g[1] - 1.0).abs() < 1e-14);
        assert!((g[2] - 10.0).abs() < 1e-13);
    }
}
