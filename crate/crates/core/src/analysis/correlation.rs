use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::format::Json;
use crate::plant::Dataset;

/// Smallest admissible `lambda_min + ridge` for a Wiener solve.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Empirical second-order statistics of a regressor/output sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    /// `(1/N) sum psi psi'`, exactly symmetric.
    pub r: DMatrix<f64>,
    /// `(1/N) sum psi s`.
    pub p: DVector<f64>,
    /// Eigenvalues of `r`, descending.
    pub eigenvalues: Vec<f64>,
    pub sample_count: usize,
}

impl CorrelationEstimate {
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty")
    }

    /// Classical mean-square stability limit `2 / lambda_max` for LMS.
    pub fn lms_step_bound(&self) -> f64 {
        2.0 / self.lambda_max()
    }

    pub fn to_json(&self) -> Json {
        let rows = (0..self.dim())
            .map(|i| Json::nums(&self.r.row(i).iter().copied().collect::<Vec<_>>()))
            .collect();
        Json::object([
            ("sample_count", Json::Int(self.sample_count as i64)),
            ("R", Json::Array(rows)),
            ("p", Json::nums(self.p.as_slice())),
            ("eigenvalues", Json::nums(&self.eigenvalues)),
            ("lambda_max", Json::Num(self.lambda_max())),
            ("lambda_min", Json::Num(self.lambda_min())),
        ])
    }
}

pub fn estimate_correlations(dataset: &Dataset) -> Result<CorrelationEstimate> {
    let first = dataset.regressors.first().ok_or(Error::EmptyDataset)?;
    let n = first.len();
    let count = dataset.len();
    let mut r = DMatrix::<f64>::zeros(n, n);
    let mut p = DVector::<f64>::zeros(n);
    for (reg, s) in dataset.regressors.iter().zip(&dataset.outputs) {
        if reg.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: reg.len(),
            });
        }
        let x = &reg.values;
        for i in 0..n {
            p[i] += x[i] * s;
            for j in i..n {
                r[(i, j)] += x[i] * x[j];
            }
        }
    }
    let scale = 1.0 / count as f64;
    for i in 0..n {
        p[i] *= scale;
        for j in i..n {
            r[(i, j)] *= scale;
            r[(j, i)] = r[(i, j)];
        }
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(r.clone()).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(CorrelationEstimate {
        r,
        p,
        eigenvalues,
        sample_count: count,
    })
}

/// Solves `(R + ridge I) w = p`. No regularisation is applied unless asked
/// for, so rank deficiency surfaces as [`Error::SingularCorrelation`].
pub fn wiener_solution(est: &CorrelationEstimate, ridge: f64) -> Result<Vec<f64>> {
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "ridge",
            reason: format!("must be finite and nonnegative, got {ridge}"),
        });
    }
    let min_eigenvalue = est.lambda_min();
    if min_eigenvalue + ridge <= SINGULAR_TOLERANCE {
        return Err(Error::SingularCorrelation { min_eigenvalue, ridge });
    }
    let n = est.dim();
    let a = &est.r + DMatrix::<f64>::identity(n, n) * ridge;
    let chol = a
        .cholesky()
        .ok_or(Error::SingularCorrelation { min_eigenvalue, ridge })?;
    Ok(chol.solve(&est.p).iter().copied().collect())
}
