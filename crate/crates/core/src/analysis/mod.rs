//! Wiener solutions, identification runs, leakage scans, the binomial-series
//! oracle and step-size probes.

pub mod binomial;
pub mod correlation;
pub mod experiment;
pub mod stability;

pub use binomial::{binomial_residual, binomial_vector_verdict, generalized_binomial, BinomialReport};
pub use correlation::{estimate_correlations, wiener_solution, CorrelationEstimate};
pub use experiment::{
    complex_leak_report, leak_summary, run_experiment, run_experiment_with, run_on_dataset, ExperimentOptions, Init,
    LeakSummary, OptimumSource, RunRecord, DIVERGENCE_THRESHOLD, LEAK_THRESHOLD,
};
pub use stability::{
    evaluate_config, log_grid, parameter_sweep, reference_lambda_max, stability_probe, stability_probe_with,
    StabilityReport, SweepParam, SweepRow,
};
