//! Truncated binomial series for `(omega + delta)^j` in the scalar case,
//! checked against the direct power, and the shape verdict for the same
//! expansion applied to vectors.

use crate::error::{Error, Result};
use crate::format::Json;
use crate::shapecheck::corpus::binomial_expansion_verdict;
use crate::shapecheck::{CheckerRules, ShapeVerdict};

/// Generalized binomial coefficient `j (j-1) .. (j-k+1) / k!`.
pub fn generalized_binomial(j: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (j - i as f64) / (i + 1) as f64)
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

fn real_power(base: f64, exponent: f64, what: &str) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(exponent))
    } else if is_integer(exponent) {
        Ok(base.powi(exponent as i32))
    } else {
        Err(Error::DomainError(format!(
            "{what} = {base} raised to non-integer exponent {exponent}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinomialReport {
    pub omega_opt: f64,
    pub delta: f64,
    pub exponent: f64,
    /// Direct power `(omega + delta)^exponent`.
    pub direct: f64,
    /// `partial_sums[K] = sum_{k=0..K} C(exponent, k) omega^(exponent-k) delta^k`.
    pub partial_sums: Vec<f64>,
    /// `|direct - partial_sums[K]|`.
    pub scalar_residuals: Vec<f64>,
    /// `|delta| > |omega|` with a non-terminating series.
    pub divergent: bool,
    /// Verdict for the same expansion with vector operands, if requested.
    pub vector_verdict: Option<ShapeVerdict>,
    pub notes: String,
}

impl BinomialReport {
    /// Residual at the largest truncation exceeds the residual of the first
    /// term alone.
    pub fn residual_grows(&self) -> bool {
        match (self.scalar_residuals.first(), self.scalar_residuals.last()) {
            (Some(a), Some(b)) => b > a,
            _ => false,
        }
    }

    /// Attaches the vector-case verdict at dimension `n`.
    pub fn with_vector_verdict(mut self, n: usize) -> Self {
        self.vector_verdict = Some(binomial_vector_verdict(n));
        self
    }

    pub fn to_json(&self) -> Json {
        Json::object([
            ("omega_opt", Json::Num(self.omega_opt)),
            ("delta", Json::Num(self.delta)),
            ("exponent", Json::Num(self.exponent)),
            ("direct", Json::Num(self.direct)),
            ("scalar_residuals", Json::nums(&self.scalar_residuals)),
            ("divergent", Json::Bool(self.divergent)),
            (
                "vector_verdict",
                self.vector_verdict.as_ref().map_or(Json::Null, |v| Json::str(v.kind())),
            ),
            ("notes", Json::str(self.notes.clone())),
        ])
    }
}

/// Residuals of the truncated scalar series for `K = 0..=k_max`.
pub fn binomial_residual(omega_opt: f64, delta: f64, exponent: f64, k_max: usize) -> Result<BinomialReport> {
    if omega_opt == 0.0 || !omega_opt.is_finite() || !delta.is_finite() || !exponent.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega_opt",
            reason: "expansion point must be finite and nonzero".into(),
        });
    }
    let direct = real_power(omega_opt + delta, exponent, "omega_opt + delta")?;
    let lead = real_power(omega_opt, exponent, "omega_opt")?;

    let ratio = delta / omega_opt;
    let mut term = lead;
    let mut sum = 0.0;
    let mut partial_sums = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        sum += term;
        partial_sums.push(sum);
        term *= (exponent - k as f64) / (k + 1) as f64 * ratio;
    }
    let scalar_residuals = partial_sums.iter().map(|s| (direct - s).abs()).collect();

    let terminates = is_integer(exponent) && exponent >= 0.0;
    let divergent = ratio.abs() > 1.0 && !terminates;
    let notes = if divergent {
        format!("|delta/omega| = {} > 1: the series diverges", ratio.abs())
    } else if terminates {
        "non-negative integer exponent: the series terminates".to_string()
    } else {
        format!("|delta/omega| = {} <= 1: the series converges", ratio.abs())
    };
    Ok(BinomialReport {
        omega_opt,
        delta,
        exponent,
        direct,
        partial_sums,
        scalar_residuals,
        divergent,
        vector_verdict: None,
        notes,
    })
}

/// Shape verdict for the expansion with `n`-dimensional vectors under
/// component-wise powers. For `n >= 2` the left side is a vector and the
/// right side a scalar; `n = 1` degenerates to the scalar identity.
pub fn binomial_vector_verdict(n: usize) -> ShapeVerdict {
    binomial_expansion_verdict(n.max(1), CheckerRules::default())
}
