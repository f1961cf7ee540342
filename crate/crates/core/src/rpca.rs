//! Robust principal component analysis.
//!
//! Splits an observed matrix `A` into a low-rank backbone `X` and a sparse
//! noise term `E` by solving
//!
//! ```text
//! min ||X||_* + lambda * ||E||_1   subject to   X + E = A
//! ```
//!
//! with the inexact augmented Lagrange multiplier method. This is the convex
//! surrogate of the (intractable) `rank(X) + gamma * ||E||_0` program.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::linalg::{
    frobenius_norm, l1_norm, nuclear_norm, singular_value_threshold, soft_threshold, svd,
    DenseMatrix,
};

/// Solver settings. `None` fields are resolved from the input matrix:
/// `lambda = 1/sqrt(n)`, `mu_initial = 1.25 / sigma_max(A)` and
/// `mu_max = 1e7 * mu_initial`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpcaOptions {
    pub lambda: Option<f64>,
    /// Relative residual `||A - X - E||_F / ||A||_F` at which iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    pub mu_initial: Option<f64>,
    /// Penalty growth factor, strictly greater than one.
    pub rho: f64,
    pub mu_max: Option<f64>,
}

impl Default for RpcaOptions {
    fn default() -> Self {
        Self {
            lambda: None,
            tol: 1e-7,
            max_iter: 1000,
            mu_initial: None,
            rho: 1.5,
            mu_max: None,
        }
    }
}

impl RpcaOptions {
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    /// Checks the fields that do not depend on the input matrix.
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid(format!("lambda must be positive, got {l}")));
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return Err(invalid(format!("rho must exceed 1, got {}", self.rho)));
        }
        for (name, value) in [("mu_initial", self.mu_initial), ("mu_max", self.mu_max)] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(invalid(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (self.mu_initial, self.mu_max) {
            if lo > hi {
                return Err(invalid("mu_initial must not exceed mu_max"));
            }
        }
        Ok(())
    }
}

/// Backbone/noise pair with convergence telemetry.
#[derive(Debug, Clone)]
pub struct RpcaSolution {
    /// Low-rank part `X`.
    pub backbone: DenseMatrix,
    /// Sparse part `E`.
    pub noise: DenseMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// `||A - X - E||_F / ||A||_F` of the returned iterate.
    pub final_residual: f64,
    /// Relative residual after each iteration.
    pub residual_history: Vec<f64>,
    /// The weight actually used (after default resolution).
    pub lambda: f64,
}

impl RpcaSolution {
    /// `(||X||_*, ||E||_1)`.
    pub fn objective_terms(&self) -> Result<(f64, f64)> {
        Ok((nuclear_norm(&self.backbone)?, l1_norm(&self.noise)))
    }

    pub fn objective(&self) -> Result<f64> {
        let (nuclear, l1) = self.objective_terms()?;
        Ok(nuclear + self.lambda * l1)
    }
}

/// Decomposes a square matrix into low-rank plus sparse parts.
///
/// Running out of iterations is not an error: the last iterate is returned
/// with `converged == false`.
pub fn solve_rpca(a: &DenseMatrix, opts: &RpcaOptions) -> Result<RpcaSolution> {
    opts.validate()?;
    if !a.is_square() {
        return Err(invalid(format!(
            "robust PCA expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n < 2 {
        return Err(invalid("robust PCA needs n >= 2"));
    }
    let lambda = opts.lambda.unwrap_or(1.0 / libm::sqrt(n as f64));

    let norm_a = frobenius_norm(a);
    if norm_a == 0.0 {
        return Ok(RpcaSolution {
            backbone: DenseMatrix::zeros(n, n),
            noise: DenseMatrix::zeros(n, n),
            iterations: 0,
            converged: true,
            final_residual: 0.0,
            residual_history: Vec::new(),
            lambda,
        });
    }

    let spectral = svd(a)?.singular_values[0];
    let dual_scale = spectral.max(a.max_abs() / lambda);
    let mut multiplier = a.scale(1.0 / dual_scale);
    let mut mu = opts.mu_initial.unwrap_or(1.25 / spectral);
    let mu_max = opts.mu_max.unwrap_or(mu * 1e7);
    if mu > mu_max {
        return Err(invalid("mu_initial must not exceed mu_max"));
    }

    let mut backbone = DenseMatrix::zeros(n, n);
    let mut noise = DenseMatrix::zeros(n, n);
    let mut history = Vec::new();
    let mut converged = false;

    for _ in 0..opts.max_iter {
        let inv_mu = 1.0 / mu;

        let mut target = a.sub(&noise)?;
        target.add_scaled_assign(inv_mu, &multiplier)?;
        backbone = singular_value_threshold(&target, inv_mu)?;

        let mut target = a.sub(&backbone)?;
        target.add_scaled_assign(inv_mu, &multiplier)?;
        noise = soft_threshold(&target, lambda * inv_mu)?;

        let mut residual = a.sub(&backbone)?;
        residual.add_scaled_assign(-1.0, &noise)?;
        multiplier.add_scaled_assign(mu, &residual)?;
        mu = (mu * opts.rho).min(mu_max);

        let relative = frobenius_norm(&residual) / norm_a;
        history.push(relative);
        if relative < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(RpcaSolution {
        backbone,
        noise,
        iterations: history.len(),
        converged,
        final_residual: history.last().copied().unwrap_or(0.0),
        residual_history: history,
        lambda,
    })
}

/// `m / (n^1.2 * r * ln n)`: observed entries relative to the
/// exact-recovery sample bound, without the unknown constant.
pub fn recoverability_index(m_observed: u64, n: u64, r: u64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("recoverability index needs n >= 2"));
    }
    if r == 0 {
        return Err(invalid("recoverability index needs rank r >= 1"));
    }
    let n = n as f64;
    Ok(m_observed as f64 / (libm::pow(n, 1.2) * r as f64 * libm::log(n)))
}
