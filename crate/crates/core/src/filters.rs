//! LMS family update rules as pure state transitions.
//!
//! Every variant shares the momentum form
//!
//! ```text
//! w(t+1) = w(t) + beta (w(t) - w(t-1)) + eta e(t) psi(t) (x) g(w(t))
//! ```
//!
//! where `g = 0` for plain LMS and momentum LMS, `g = 1 + w^(1-v)` with a
//! component-wise complex power for the signed fractional variant, and
//! `g = 1 + |w|^(1-v)` for the modulus-guarded M-FLMS. The modulus has two
//! readings: an element-wise absolute value, or the Euclidean norm (a scalar
//! broadcast over `psi`).
//!
//! Weights are stored as complex numbers so the signed fractional variant can
//! show where a negative weight raised to a non-integer power leaves the real
//! line. Predictions only read the real parts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::plant::Regressor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Lms,
    MomentumLms,
    FlmsSigned,
    MflmsModulus,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Lms => "lms",
            Variant::MomentumLms => "momentum_lms",
            Variant::FlmsSigned => "flms_signed",
            Variant::MflmsModulus => "mflms_modulus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lms" => Some(Variant::Lms),
            "momentum_lms" => Some(Variant::MomentumLms),
            "flms_signed" => Some(Variant::FlmsSigned),
            "mflms_modulus" => Some(Variant::MflmsModulus),
            _ => None,
        }
    }

    /// Variants whose weights can never acquire an imaginary part.
    pub fn is_real_only(self) -> bool {
        !matches!(self, Variant::FlmsSigned)
    }
}

/// How `|w|^(1-v)` is read in the modulus-guarded update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerInterpretation {
    ElementwiseAbs,
    EuclideanNorm,
}

impl PowerInterpretation {
    pub fn name(self) -> &'static str {
        match self {
            PowerInterpretation::ElementwiseAbs => "elementwise_abs",
            PowerInterpretation::EuclideanNorm => "euclidean_norm",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "elementwise_abs" => Some(PowerInterpretation::ElementwiseAbs),
            "euclidean_norm" => Some(PowerInterpretation::EuclideanNorm),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub variant: Variant,
    /// Step size.
    pub eta: f64,
    /// Momentum, `0 <= beta < 1`.
    pub beta: f64,
    /// Fractional order, `0 < v <= 1`.
    pub v: f64,
    pub power_interpretation: PowerInterpretation,
    /// Floor applied to `|w|` before the fractional power.
    pub epsilon_guard: f64,
    /// Weight dimension `n = m * l`.
    pub dim: usize,
}

impl FilterConfig {
    pub fn lms(dim: usize, eta: f64) -> Self {
        FilterConfig {
            variant: Variant::Lms,
            eta,
            beta: 0.0,
            v: 1.0,
            power_interpretation: PowerInterpretation::ElementwiseAbs,
            epsilon_guard: 0.0,
            dim,
        }
    }

    pub fn momentum_lms(dim: usize, eta: f64, beta: f64) -> Self {
        FilterConfig {
            variant: Variant::MomentumLms,
            beta,
            ..Self::lms(dim, eta)
        }
    }

    pub fn flms_signed(dim: usize, eta: f64, beta: f64, v: f64) -> Self {
        FilterConfig {
            variant: Variant::FlmsSigned,
            beta,
            v,
            ..Self::lms(dim, eta)
        }
    }

    pub fn mflms(dim: usize, eta: f64, beta: f64, v: f64, interpretation: PowerInterpretation) -> Self {
        FilterConfig {
            variant: Variant::MflmsModulus,
            beta,
            v,
            power_interpretation: interpretation,
            ..Self::lms(dim, eta)
        }
    }

    pub fn with_guard(self, epsilon_guard: f64) -> Self {
        FilterConfig { epsilon_guard, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "must be positive".into(),
            });
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: format!("must be positive and finite, got {}", self.eta),
            });
        }
        if !(0.0..1.0).contains(&self.beta) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must lie in [0, 1), got {}", self.beta),
            });
        }
        if !(self.v > 0.0 && self.v <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "v",
                reason: format!("must lie in (0, 1], got {}", self.v),
            });
        }
        if !(self.epsilon_guard >= 0.0 && self.epsilon_guard.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon_guard",
                reason: format!("must be finite and nonnegative, got {}", self.epsilon_guard),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    pub w: Vec<Complex64>,
    pub w_prev: Vec<Complex64>,
    pub iter: usize,
    /// Steps after which at least one weight had a nonzero imaginary part.
    pub complex_events: usize,
    pub max_imag: f64,
}

impl FilterState {
    pub fn zeros(dim: usize) -> Self {
        Self::from_real(&vec![0.0; dim])
    }

    /// Starts at `w` with no momentum (`w_prev = w`).
    pub fn from_real(w: &[f64]) -> Self {
        let w: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FilterState {
            w_prev: w.clone(),
            w,
            iter: 0,
            complex_events: 0,
            max_imag: 0.0,
        }
    }

    /// Small uniform initialisation on `[-scale, scale]`.
    pub fn small_uniform<R: rand::Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> Self {
        let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-scale..=scale)).collect();
        Self::from_real(&w)
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn real_weights(&self) -> Vec<f64> {
        self.w.iter().map(|z| z.re).collect()
    }

    pub fn imag_norm(&self) -> f64 {
        self.w.iter().map(|z| z.im * z.im).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub error: f64,
    pub weight_update_norm: f64,
    pub imag_norm: f64,
}

/// Either a per-component factor vector or a single broadcast scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum FractionalFactor {
    Vector(Vec<Complex64>),
    Scalar(f64),
}

fn check_dim(state: &FilterState, reg: &Regressor) -> Result<()> {
    if reg.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: reg.len(),
        });
    }
    if state.w_prev.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: state.w_prev.len(),
        });
    }
    Ok(())
}

fn require(cfg: &FilterConfig, variant: Variant) -> Result<()> {
    if cfg.variant != variant {
        return Err(Error::UnsupportedVariant(cfg.variant.name()));
    }
    Ok(())
}

/// `e(t) = desired - psi . Re(w)`.
pub fn predict_error(state: &FilterState, reg: &Regressor, desired: f64) -> Result<f64> {
    if reg.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            actual: reg.len(),
        });
    }
    let y: f64 = reg.values.iter().zip(&state.w).map(|(p, w)| p * w.re).sum();
    Ok(desired - y)
}

/// Real power of a nonnegative magnitude with `0^0 = 1` and `0^a = 0` for `a > 0`.
fn magnitude_power(x: f64, exponent: f64) -> f64 {
    x.powf(exponent)
}

/// Principal-branch `x^a` for real `x`: negative bases map to
/// `|x|^a (cos(a pi) + i sin(a pi))`.
pub fn signed_power(x: f64, exponent: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(magnitude_power(x, exponent), 0.0)
    } else {
        Complex64::from_polar(x.abs().powf(exponent), exponent * std::f64::consts::PI)
    }
}

pub fn fractional_factor(state: &FilterState, cfg: &FilterConfig) -> Result<FractionalFactor> {
    let exponent = 1.0 - cfg.v;
    match cfg.variant {
        Variant::Lms | Variant::MomentumLms => Err(Error::UnsupportedVariant(cfg.variant.name())),
        Variant::FlmsSigned => Ok(FractionalFactor::Vector(
            state
                .w
                .iter()
                .map(|z| {
                    let x = z.re;
                    let guarded = if x < 0.0 {
                        -x.abs().max(cfg.epsilon_guard)
                    } else {
                        x.max(cfg.epsilon_guard)
                    };
                    signed_power(guarded, exponent)
                })
                .collect(),
        )),
        Variant::MflmsModulus => match cfg.power_interpretation {
            PowerInterpretation::ElementwiseAbs => Ok(FractionalFactor::Vector(
                state
                    .w
                    .iter()
                    .map(|z| Complex64::new(magnitude_power(z.re.abs().max(cfg.epsilon_guard), exponent), 0.0))
                    .collect(),
            )),
            PowerInterpretation::EuclideanNorm => {
                let norm = state.w.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
                Ok(FractionalFactor::Scalar(magnitude_power(
                    norm.max(cfg.epsilon_guard),
                    exponent,
                )))
            }
        },
    }
}

fn finish(state: &FilterState, w: Vec<Complex64>, error: f64) -> (FilterState, StepRecord) {
    let weight_update_norm = w
        .iter()
        .zip(&state.w)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let max_imag_now = w.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let leaked = w.iter().any(|z| z.im != 0.0);
    let next = FilterState {
        w_prev: state.w.clone(),
        w,
        iter: state.iter + 1,
        complex_events: state.complex_events + usize::from(leaked),
        max_imag: state.max_imag.max(max_imag_now),
    };
    let imag_norm = next.imag_norm();
    (
        next,
        StepRecord {
            error,
            weight_update_norm,
            imag_norm,
        },
    )
}

/// Real-only update `w + beta (w - w_prev) + eta e psi_j g_j`, with imaginary
/// parts pinned to zero.
fn real_update(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    error: f64,
    gain: impl Fn(usize) -> f64,
) -> Vec<Complex64> {
    state
        .w
        .iter()
        .zip(&state.w_prev)
        .zip(&reg.values)
        .enumerate()
        .map(|(j, ((w, wp), psi))| {
            let re = w.re + cfg.beta * (w.re - wp.re) + cfg.eta * error * psi * gain(j);
            Complex64::new(re, 0.0)
        })
        .collect()
}

/// `w' = w + eta e psi`.
pub fn lms_step(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    desired: f64,
) -> Result<(FilterState, StepRecord)> {
    require(cfg, Variant::Lms)?;
    check_dim(state, reg)?;
    let e = predict_error(state, reg, desired)?;
    let w = state
        .w
        .iter()
        .zip(&reg.values)
        .map(|(w, psi)| Complex64::new(w.re + cfg.eta * e * psi, 0.0))
        .collect();
    Ok(finish(state, w, e))
}

/// `w' = w + beta (w - w_prev) + eta e psi`.
pub fn momentum_lms_step(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    desired: f64,
) -> Result<(FilterState, StepRecord)> {
    require(cfg, Variant::MomentumLms)?;
    check_dim(state, reg)?;
    let e = predict_error(state, reg, desired)?;
    let w = real_update(state, cfg, reg, e, |_| 1.0);
    Ok(finish(state, w, e))
}

/// Modulus-guarded fractional momentum update; `(x)` is a component-wise
/// product for the element-wise reading and a scalar broadcast for the norm
/// reading.
pub fn mflms_step(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    desired: f64,
) -> Result<(FilterState, StepRecord)> {
    require(cfg, Variant::MflmsModulus)?;
    check_dim(state, reg)?;
    let e = predict_error(state, reg, desired)?;
    let w = match fractional_factor(state, cfg)? {
        FractionalFactor::Vector(f) => real_update(state, cfg, reg, e, |j| 1.0 + f[j].re),
        FractionalFactor::Scalar(s) => real_update(state, cfg, reg, e, |_| 1.0 + s),
    };
    Ok(finish(state, w, e))
}

/// Signed fractional momentum update with principal-branch powers of
/// `Re(w)`. Imaginary parts ride along through the momentum term.
pub fn flms_signed_step(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    desired: f64,
) -> Result<(FilterState, StepRecord)> {
    require(cfg, Variant::FlmsSigned)?;
    check_dim(state, reg)?;
    let e = predict_error(state, reg, desired)?;
    let FractionalFactor::Vector(factor) = fractional_factor(state, cfg)? else {
        unreachable!("signed variant yields a vector factor")
    };
    let w = state
        .w
        .iter()
        .zip(&state.w_prev)
        .zip(reg.values.iter().zip(&factor))
        .map(|((w, wp), (psi, f))| w + (w - wp) * cfg.beta + (Complex64::new(1.0, 0.0) + f) * (cfg.eta * e * psi))
        .collect();
    Ok(finish(state, w, e))
}

/// Dispatches on `cfg.variant`.
pub fn step(
    state: &FilterState,
    cfg: &FilterConfig,
    reg: &Regressor,
    desired: f64,
) -> Result<(FilterState, StepRecord)> {
    match cfg.variant {
        Variant::Lms => lms_step(state, cfg, reg, desired),
        Variant::MomentumLms => momentum_lms_step(state, cfg, reg, desired),
        Variant::FlmsSigned => flms_signed_step(state, cfg, reg, desired),
        Variant::MflmsModulus => mflms_step(state, cfg, reg, desired),
    }
}
