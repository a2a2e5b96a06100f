use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Returns `Some(m)` when `lambda` is (to rounding) the reciprocal of a
/// positive integer `m`; the λ-falling factorial (1)_{n,λ} then vanishes for
/// every n > m.
pub fn finite_support(lambda: f64) -> Option<u64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return None;
    }
    let m = (1.0 / lambda).round();
    if !(1.0..=1e15).contains(&m) {
        return None;
    }
    if (m * lambda - 1.0).abs() <= 8.0 * f64::EPSILON {
        Some(m as u64)
    } else {
        None
    }
}

/// The validated pair (α, λ) shared by every distribution-level operation.
///
/// Valid means α > 0 and either λ ∈ (−1/α, 0] or λ = 1/m for a positive
/// integer m. Inside this domain every (1)_{n,λ} is nonnegative and the
/// degenerate exponential series at α converges, so the degenerate
/// (zero-truncated) Poisson mass functions are genuine probability laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegeneracyParams {
    alpha: f64,
    lambda: f64,
    #[serde(skip)]
    support: Option<u64>,
}

impl DegeneracyParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(domain(format!("alpha must be a finite positive number, got {alpha}")));
        }
        if !lambda.is_finite() {
            return Err(domain(format!("lambda must be finite, got {lambda}")));
        }
        if lambda <= 0.0 {
            if 1.0 + alpha * lambda <= 0.0 {
                return Err(domain(format!(
                    "lambda = {lambda} is outside the valid domain for alpha = {alpha}: \
                     need lambda in (-1/alpha, 0] = ({}, 0] or lambda = 1/m for a positive integer m",
                    -1.0 / alpha
                )));
            }
            return Ok(Self {
                alpha,
                lambda,
                support: None,
            });
        }
        match finite_support(lambda) {
            Some(m) => Ok(Self {
                alpha,
                lambda,
                support: Some(m),
            }),
            None => Err(domain(format!(
                "lambda = {lambda} is outside the valid domain for alpha = {alpha}: \
                 need lambda in (-1/alpha, 0] = ({}, 0] or lambda = 1/m for a positive integer m",
                -1.0 / alpha
            ))),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Largest support point m when λ = 1/m, `None` for unbounded support.
    pub fn support_max(&self) -> Option<u64> {
        self.support
    }
}

/// Truncation policy for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tail_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tail_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tail_tol > 0.0 && rel_tail_tol < 1.0) {
            return Err(domain(format!("rel_tail_tol must lie in (0, 1), got {rel_tail_tol}")));
        }
        if max_terms == 0 {
            return Err(domain("max_terms must be at least 1"));
        }
        Ok(Self {
            rel_tail_tol,
            max_terms,
        })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tail_tol: 1e-15,
            max_terms: 10_000,
        }
    }
}
