use serde::Serialize;

use super::falling::{one_minus, term_ratio_bound};
use super::params::SeriesControl;
use crate::error::{domain, Error, Result};

/// Below this |λt| the power is evaluated through `ln_1p` so that small λ
/// does not lose digits in `1 + λt`.
const SMALL_SHIFT: f64 = 0.25;

fn log_base(x: f64, t: f64, lambda: f64) -> Result<f64> {
    let base = 1.0 + lambda * t;
    if !(base > 0.0) {
        return Err(domain(format!(
            "degenerate exponential undefined: 1 + lambda*t = {base} <= 0 (lambda = {lambda}, t = {t})"
        )));
    }
    Ok((x / lambda) * (lambda * t).ln_1p())
}

/// The degenerate exponential e_λ^x(t) = (1 + λt)^{x/λ}; λ = 0 is the
/// analytic branch exp(x·t).
pub fn degenerate_exp(x: f64, t: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok((x * t).exp());
    }
    let shift = lambda * t;
    if shift.abs() < SMALL_SHIFT {
        return log_base(x, t, lambda).map(f64::exp);
    }
    let base = 1.0 + shift;
    if !(base > 0.0) {
        return log_base(x, t, lambda);
    }
    Ok(base.powf(x / lambda))
}

/// e_λ^x(t) − 1 without cancellation for small arguments.
pub fn degenerate_exp_m1(x: f64, t: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok((x * t).exp_m1());
    }
    if (lambda * t).abs() < SMALL_SHIFT {
        return log_base(x, t, lambda).map(f64::exp_m1);
    }
    degenerate_exp(x, t, lambda).map(|v| v - 1.0)
}

/// The partial sum e_{λ,b}(a) = Σ_{k=0}^{b} a^k (1)_{k,λ} / k!.
pub fn degenerate_exp_partial(a: f64, b: u64, lambda: f64) -> f64 {
    1.0 + degenerate_exp_partial_m1(a, b, lambda)
}

/// e_{λ,b}(a) − 1 = Σ_{k=1}^{b} a^k (1)_{k,λ} / k!.
///
/// Summation stops early once the remaining terms are certified to be
/// below half an ulp of the running sum, so huge `b` costs nothing extra.
pub(crate) fn degenerate_exp_partial_m1(a: f64, b: u64, lambda: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=b {
        term *= a * one_minus(k - 1, lambda) / k as f64;
        if term == 0.0 {
            break;
        }
        sum += term;
        let rho = term_ratio_bound(a, k, lambda);
        if rho < 1.0 && (term * rho / (1.0 - rho)).abs() < 0.5 * f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

/// Result of a truncated series with a certified bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms summed (index of the last term plus one).
    pub terms: usize,
    /// Upper bound on the absolute value of the omitted tail.
    pub tail_bound: f64,
}

/// e_λ(t) by its power series Σ_k (1)_{k,λ} t^k / k!, truncated once a
/// geometric bound certifies the tail below `ctl.rel_tail_tol` relative to
/// the partial sum.
pub fn degenerate_exp_series(t: f64, lambda: f64, ctl: &SeriesControl) -> Result<SeriesSum> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..ctl.max_terms as u64 {
        term *= t * one_minus(k - 1, lambda) / k as f64;
        if term == 0.0 {
            return Ok(SeriesSum {
                value: sum,
                terms: k as usize,
                tail_bound: 0.0,
            });
        }
        sum += term;
        let rho = term_ratio_bound(t, k, lambda);
        if rho < 1.0 {
            let tail = term.abs() * rho / (1.0 - rho);
            if tail <= ctl.rel_tail_tol * sum.abs() {
                return Ok(SeriesSum {
                    value: sum,
                    terms: k as usize + 1,
                    tail_bound: tail,
                });
            }
        }
    }
    Err(Error::Convergence {
        max_terms: ctl.max_terms,
        context: format!("degenerate exponential series at t = {t}, lambda = {lambda}"),
    })
}
