//! Adaptive-filtering laboratory for the LMS family on Hammerstein ARX plants.
//!
//! * [`plant`] simulates Hammerstein ARX systems and their regressors.
//! * [`filters`] holds the LMS, momentum LMS, signed fractional LMS and
//!   modulus-guarded M-FLMS updates as pure state transitions.
//! * [`analysis`] estimates correlations and Wiener solutions, runs
//!   identification experiments, measures complex leakage, checks the
//!   binomial series against direct powers and probes step-size stability.
//! * [`shapecheck`] parses matrix expressions and infers their shapes.
//! * [`cli`] drives batch experiments and audits from key-value spec files.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod filters;
pub mod format;
pub mod plant;
pub mod shapecheck;

pub use error::{Error, Result};
