use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::correlation::{estimate_correlations, wiener_solution};
use crate::error::{Error, Result};
use crate::filters::{self, FilterConfig, FilterState};
use crate::format::{fmt_g17, Json};
use crate::plant::{generate_sequence, Dataset, HarxPlant, InputKind};

/// Any curve value above this (or non-finite) marks a run as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Imaginary norms above this count as leakage.
pub const LEAK_THRESHOLD: f64 = 1e-15;

const INIT_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    Zeros,
    SmallUniform { scale: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOptions {
    pub input: InputKind,
    pub init: Init,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            input: InputKind::default(),
            init: Init::Zeros,
        }
    }
}

/// Where the reference optimum of a run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimumSource {
    /// Wiener solution of the run's own data.
    Wiener,
    /// Plant weights, used when the run's correlation matrix is singular.
    PlantTruth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// `e(t)^2` per iteration.
    pub mse_curve: Vec<f64>,
    /// `||Re(w(t)) - omega_opt||` after each update.
    pub weight_error_curve: Vec<f64>,
    /// `||Im(w(t))||` after each update.
    pub imag_curve: Vec<f64>,
    pub diverged: bool,
    pub final_state: FilterState,
    pub omega_opt: Vec<f64>,
    pub optimum_source: OptimumSource,
    /// Weight error of the initial state.
    pub initial_weight_error: f64,
}

impl RunRecord {
    pub fn iterations(&self) -> usize {
        self.mse_curve.len()
    }

    pub fn terminal_weight_error(&self) -> f64 {
        self.weight_error_curve
            .last()
            .copied()
            .unwrap_or(self.initial_weight_error)
    }

    pub fn terminal_mse(&self) -> f64 {
        self.mse_curve.last().copied().unwrap_or(f64::NAN)
    }

    /// `iter,mse,weight_error,imag_norm`, iterations counted from 0.
    pub fn write_curves_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "iter,mse,weight_error,imag_norm")?;
        for (i, ((mse, we), im)) in self
            .mse_curve
            .iter()
            .zip(&self.weight_error_curve)
            .zip(&self.imag_curve)
            .enumerate()
        {
            writeln!(out, "{i},{},{},{}", fmt_g17(*mse), fmt_g17(*we), fmt_g17(*im))?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> Json {
        let leak = complex_leak_report(self);
        Json::object([
            ("iterations", Json::Int(self.iterations() as i64)),
            ("diverged", Json::Bool(self.diverged)),
            ("initial_weight_error", Json::Num(self.initial_weight_error)),
            ("terminal_weight_error", Json::Num(self.terminal_weight_error())),
            ("terminal_mse", Json::Num(self.terminal_mse())),
            (
                "optimum_source",
                Json::str(match self.optimum_source {
                    OptimumSource::Wiener => "wiener",
                    OptimumSource::PlantTruth => "plant_truth",
                }),
            ),
            ("omega_opt", Json::nums(&self.omega_opt)),
            ("final_weights_re", Json::nums(&self.final_state.real_weights())),
            ("complex_events", Json::Int(self.final_state.complex_events as i64)),
            ("leak", leak.to_json()),
        ])
    }
}

fn distance(w: &FilterState, target: &[f64]) -> f64 {
    w.w.iter()
        .zip(target)
        .map(|(z, t)| (z.re - t) * (z.re - t))
        .sum::<f64>()
        .sqrt()
}

fn out_of_range(x: f64) -> bool {
    !x.is_finite() || x > DIVERGENCE_THRESHOLD
}

/// Runs `cfg` over `dataset` from `init`, measuring weight error against
/// `omega_opt`. Stops at the first diverged iteration.
pub fn run_on_dataset(
    dataset: &Dataset,
    cfg: &FilterConfig,
    init: FilterState,
    omega_opt: Vec<f64>,
    optimum_source: OptimumSource,
) -> Result<RunRecord> {
    cfg.validate()?;
    if init.dim() != cfg.dim || omega_opt.len() != cfg.dim {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim,
            actual: if init.dim() != cfg.dim {
                init.dim()
            } else {
                omega_opt.len()
            },
        });
    }
    let n = dataset.len();
    let mut record = RunRecord {
        mse_curve: Vec::with_capacity(n),
        weight_error_curve: Vec::with_capacity(n),
        imag_curve: Vec::with_capacity(n),
        diverged: false,
        initial_weight_error: distance(&init, &omega_opt),
        final_state: init,
        omega_opt,
        optimum_source,
    };
    for (reg, desired) in dataset.regressors.iter().zip(&dataset.outputs) {
        let (next, step) = filters::step(&record.final_state, cfg, reg, *desired)?;
        let mse = step.error * step.error;
        let we = distance(&next, &record.omega_opt);
        record.mse_curve.push(mse);
        record.weight_error_curve.push(we);
        record.imag_curve.push(step.imag_norm);
        record.final_state = next;
        if out_of_range(mse) || out_of_range(we) || out_of_range(step.imag_norm) {
            record.diverged = true;
            break;
        }
    }
    Ok(record)
}

/// Generates `t_len` input samples with `seed` and adapts over the resulting
/// `t_len - m` pairs, using the default input and zero initial weights.
pub fn run_experiment(plant: &HarxPlant, cfg: &FilterConfig, t_len: usize, seed: u64) -> Result<RunRecord> {
    run_experiment_with(plant, cfg, t_len, seed, &ExperimentOptions::default())
}

pub fn run_experiment_with(
    plant: &HarxPlant,
    cfg: &FilterConfig,
    t_len: usize,
    seed: u64,
    opts: &ExperimentOptions,
) -> Result<RunRecord> {
    if cfg.dim != plant.dim() {
        return Err(Error::DimensionMismatch {
            expected: plant.dim(),
            actual: cfg.dim,
        });
    }
    let plant = plant.with_seed(seed);
    let dataset = generate_sequence(&plant, &opts.input, t_len)?;
    let (omega_opt, source) = match estimate_correlations(&dataset).and_then(|est| wiener_solution(&est, 0.0)) {
        Ok(w) => (w, OptimumSource::Wiener),
        Err(Error::SingularCorrelation { .. }) => (dataset.plant_truth.clone(), OptimumSource::PlantTruth),
        Err(e) => return Err(e),
    };
    let init = match opts.init {
        Init::Zeros => FilterState::zeros(cfg.dim),
        Init::SmallUniform { scale } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(INIT_STREAM);
            FilterState::small_uniform(cfg.dim, scale, &mut rng)
        }
    };
    run_on_dataset(&dataset, cfg, init, omega_opt, source)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakSummary {
    pub first_leak_iter: Option<usize>,
    pub max_imag: f64,
    /// Fraction of iterations whose imaginary norm exceeds [`LEAK_THRESHOLD`].
    pub leak_fraction: f64,
}

impl LeakSummary {
    pub fn to_json(&self) -> Json {
        Json::object([
            ("first_leak_iter", Json::opt_int(self.first_leak_iter)),
            ("max_imag", Json::Num(self.max_imag)),
            ("leak_fraction", Json::Num(self.leak_fraction)),
        ])
    }
}

pub fn leak_summary(imag_curve: &[f64]) -> LeakSummary {
    let leaking = |x: &f64| *x > LEAK_THRESHOLD;
    let count = imag_curve.iter().filter(|x| leaking(x)).count();
    LeakSummary {
        first_leak_iter: imag_curve.iter().position(leaking),
        max_imag: imag_curve.iter().copied().fold(0.0, f64::max),
        leak_fraction: if imag_curve.is_empty() {
            0.0
        } else {
            count as f64 / imag_curve.len() as f64
        },
    }
}

pub fn complex_leak_report(record: &RunRecord) -> LeakSummary {
    leak_summary(&record.imag_curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::PowerInterpretation;

    #[test]
    fn leak_scan_example() {
        let s = leak_summary(&[0.0, 0.0, 0.5, 0.2]);
        assert_eq!(s.first_leak_iter, Some(2));
        assert_eq!(s.max_imag, 0.5);
        assert_eq!(s.leak_fraction, 0.5);
        let s = leak_summary(&[0.0; 10]);
        assert_eq!((s.first_leak_iter, s.max_imag, s.leak_fraction), (None, 0.0, 0.0));
        assert_eq!(leak_summary(&[]).leak_fraction, 0.0);
    }

    #[test]
    fn curves_share_length() {
        let plant = HarxPlant::muscle_preset();
        let cfg = FilterConfig::mflms(9, 0.01, 0.2, 0.9, PowerInterpretation::ElementwiseAbs);
        let rec = run_experiment(&plant, &cfg, 503, 1).unwrap();
        assert_eq!(rec.iterations(), 500);
        assert_eq!(rec.weight_error_curve.len(), 500);
        assert_eq!(rec.imag_curve.len(), 500);
        assert_eq!(rec.final_state.iter, 500);
        assert_eq!(rec.optimum_source, OptimumSource::Wiener);
    }

    #[test]
    fn dimension_checks() {
        let plant = HarxPlant::muscle_preset();
        assert!(matches!(
            run_experiment(&plant, &FilterConfig::lms(4, 0.01), 100, 0),
            Err(Error::DimensionMismatch { expected: 9, actual: 4 })
        ));
        assert!(matches!(
            run_experiment(&plant, &FilterConfig::lms(9, 0.01), 3, 0),
            Err(Error::BadLength { .. })
        ));
        assert!(run_experiment(&plant, &FilterConfig::lms(9, -1.0), 100, 0).is_err());
    }

    #[test]
    fn divergence_stops_the_run() {
        let plant = HarxPlant::muscle_preset();
        let rec = run_experiment(&plant, &FilterConfig::lms(9, 50.0), 2000, 4).unwrap();
        assert!(rec.diverged);
        assert!(rec.iterations() < 1997);
        let last = rec.mse_curve.last().unwrap();
        assert!(
            !last.is_finite() || *last > DIVERGENCE_THRESHOLD || rec.terminal_weight_error() > DIVERGENCE_THRESHOLD
        );
    }

    #[test]
    fn small_uniform_init_is_seeded() {
        let plant = HarxPlant::muscle_preset();
        let opts = ExperimentOptions {
            init: Init::SmallUniform { scale: 0.01 },
            ..Default::default()
        };
        let cfg = FilterConfig::lms(9, 0.01);
        let a = run_experiment_with(&plant, &cfg, 50, 9, &opts).unwrap();
        let b = run_experiment_with(&plant, &cfg, 50, 9, &opts).unwrap();
        assert_eq!(a, b);
        let zero = run_experiment(&plant, &cfg, 50, 9).unwrap();
        assert_ne!(a.initial_weight_error, zero.initial_weight_error);
    }

    #[test]
    fn curves_csv_layout() {
        let plant = HarxPlant::muscle_preset();
        let rec = run_experiment(&plant, &FilterConfig::lms(9, 0.01), 6, 0).unwrap();
        let mut buf = Vec::new();
        rec.write_curves_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iter,mse,weight_error,imag_norm");
        assert_eq!(lines.len(), 4);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
        assert!(lines[3].starts_with("2,"));
    }
}
