use statrs::function::factorial::ln_factorial;

use super::{exp_m1_at, PmfTable, SampleStream};
use crate::error::{domain, Error, Result};
use crate::kernel::{
    bell_degenerate, degenerate_exp_partial_m1, log_falling_factorial_one, one_minus, term_ratio_bound,
    DegeneracyParams, SeriesControl,
};

/// The degenerate zero-truncated Poisson law
/// P(n) = α^n (1)_{n,λ} / (n!·(e_λ(α) − 1)), n = 1, 2, …
///
/// Support is finite, {1, …, m}, when λ = 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DztpDist {
    params: DegeneracyParams,
    /// e_λ(α) − 1
    norm_m1: f64,
}

impl DztpDist {
    pub fn new(params: DegeneracyParams) -> Self {
        let norm_m1 = exp_m1_at(&params, params.alpha()).expect("valid params");
        Self { params, norm_m1 }
    }

    /// Shorthand for `DztpDist::new(DegeneracyParams::new(alpha, lambda)?)`.
    pub fn with(alpha: f64, lambda: f64) -> Result<Self> {
        DegeneracyParams::new(alpha, lambda).map(Self::new)
    }

    pub fn params(&self) -> DegeneracyParams {
        self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda()
    }

    /// e_λ(α) − 1, the normalizing constant.
    pub fn normalizer(&self) -> f64 {
        self.norm_m1
    }

    /// P(X = 1) = α / (e_λ(α) − 1).
    pub(crate) fn first_mass(&self) -> f64 {
        self.alpha() / self.norm_m1
    }

    /// P(n + 1) / P(n) = α(1 − nλ)/(n + 1).
    #[inline]
    pub(crate) fn mass_ratio(&self, n: u64) -> f64 {
        self.alpha() * one_minus(n, self.lambda()) / (n + 1) as f64
    }

    pub fn pmf(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(domain("the zero-truncated law has no mass at 0 (n must be >= 1)"));
        }
        if n <= 20 {
            let mut p = 1.0 / self.norm_m1;
            for j in 0..n {
                p *= self.alpha() * one_minus(j, self.lambda()) / (j + 1) as f64;
            }
            return Ok(p);
        }
        self.log_pmf_series(n).map(f64::exp)
    }

    /// ln P(n); `-inf` where the mass is exactly zero.
    pub fn log_pmf(&self, n: u64) -> Result<f64> {
        if n <= 20 {
            return self.pmf(n).map(f64::ln);
        }
        self.log_pmf_series(n)
    }

    fn log_pmf_series(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(domain("the zero-truncated law has no mass at 0 (n must be >= 1)"));
        }
        let (sign, ln_ff) = log_falling_factorial_one(n, self.lambda());
        if sign == 0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(n as f64 * self.alpha().ln() + ln_ff - ln_factorial(n) - self.norm_m1.ln())
    }

    /// Certified table from n = 1 with omitted mass below `tail_tol`.
    pub fn pmf_table(&self, tail_tol: f64) -> Result<PmfTable> {
        self.pmf_table_with(tail_tol, 1, SeriesControl::default().max_terms)
    }

    /// As [`pmf_table`](Self::pmf_table), but listing at least `min_last`
    /// support points (when the support reaches that far) and failing once
    /// more than `max_terms` entries would be needed.
    pub fn pmf_table_with(&self, tail_tol: f64, min_last: u64, max_terms: usize) -> Result<PmfTable> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(domain(format!("tail_tol must lie in (0, 1), got {tail_tol}")));
        }
        let mut p = self.first_mass();
        let mut probs = vec![p];
        let mut n = 1u64;
        loop {
            if Some(n) == self.params.support_max() {
                return Ok(PmfTable {
                    support_start: 1,
                    probs,
                    tail_mass: 0.0,
                });
            }
            let rho = term_ratio_bound(self.alpha(), n, self.lambda());
            if n >= min_last && rho < 1.0 {
                let tail = p * rho / (1.0 - rho);
                if tail < tail_tol {
                    return Ok(PmfTable {
                        support_start: 1,
                        probs,
                        tail_mass: tail,
                    });
                }
            }
            if probs.len() >= max_terms {
                return Err(Error::Convergence {
                    max_terms,
                    context: format!("pmf table for alpha = {}, lambda = {}", self.alpha(), self.lambda()),
                });
            }
            p *= self.mass_ratio(n);
            probs.push(p);
            n += 1;
        }
    }

    /// P(X ≤ x) = (e_{λ,[x]}(α) − 1)/(e_λ(α) − 1).
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x >= 1.0) {
            return 0.0;
        }
        let b = if x >= u64::MAX as f64 {
            u64::MAX
        } else {
            x.floor() as u64
        };
        if matches!(self.params.support_max(), Some(m) if b >= m) {
            return 1.0;
        }
        (degenerate_exp_partial_m1(self.alpha(), b, self.lambda()) / self.norm_m1).min(1.0)
    }

    /// E[X] = (α/(1 + αλ))·e_λ(α)/(e_λ(α) − 1).
    pub fn mean(&self) -> f64 {
        let a = self.alpha();
        a / (1.0 + a * self.lambda()) * (1.0 + 1.0 / self.norm_m1)
    }

    /// E[X²] = ((1 + α)/(1 + αλ))·E[X].
    pub fn second_moment(&self) -> f64 {
        let a = self.alpha();
        (1.0 + a) / (1.0 + a * self.lambda()) * self.mean()
    }

    /// Var[X] = α(1 + α)/(1 + αλ)²·e_λ(α)/(e_λ(α) − 1) − E[X]², clamped to 0
    /// when rounding pushes it just below zero.
    pub fn variance(&self) -> f64 {
        let a = self.alpha();
        let m = self.mean();
        let v = m * ((1.0 + a) / (1.0 + a * self.lambda()) - m);
        if (-1e-12..0.0).contains(&v) {
            0.0
        } else {
            v
        }
    }

    /// E[X^n] = β_{n,λ}(α)/(1 − e_λ^{−1}(α)), with E[X^0] = 1.
    pub fn moment(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(1.0);
        }
        let beta = bell_degenerate(n, self.alpha(), self.lambda())?;
        Ok(beta * (1.0 + 1.0 / self.norm_m1))
    }

    /// E[e^{tX}] = (e_λ(αe^t) − 1)/(e_λ(α) − 1); requires 1 + λαe^t > 0.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let z = self.alpha() * t.exp();
        exp_m1_at(&self.params, z)
            .map(|v| v / self.norm_m1)
            .map_err(|_| domain(format!("the moment generating function does not exist at t = {t}")))
    }

    /// E[t^X] = (e_λ(αt) − 1)/(e_λ(α) − 1); requires 1 + λαt > 0 unless the
    /// support is finite, where the generating function is a polynomial.
    pub fn pgf(&self, t: f64) -> Result<f64> {
        exp_m1_at(&self.params, self.alpha() * t)
            .map(|v| v / self.norm_m1)
            .map_err(|_| domain(format!("the probability generating function does not exist at t = {t}")))
    }

    /// A reproducible variate stream seeded with `seed`.
    pub fn stream(&self, seed: u64) -> SampleStream {
        SampleStream::new(*self, seed)
    }
}
