use statrs::function::factorial::ln_factorial;

use super::exp_m1_at;
use crate::kernel::{log_falling_factorial_one, one_minus, DegeneracyParams};

/// The degenerate Poisson law P(i) = e_λ^{−1}(α)·α^i·(1)_{i,λ}/i!, i ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneratePoissonDist {
    params: DegeneracyParams,
    /// e_λ(α)
    norm: f64,
}

impl DegeneratePoissonDist {
    pub fn new(params: DegeneracyParams) -> Self {
        let norm = 1.0 + exp_m1_at(&params, params.alpha()).expect("valid params");
        Self { params, norm }
    }

    pub fn params(&self) -> DegeneracyParams {
        self.params
    }

    pub fn pmf(&self, i: u64) -> f64 {
        let (alpha, lambda) = (self.params.alpha(), self.params.lambda());
        if i <= 20 {
            let mut p = 1.0 / self.norm;
            for j in 0..i {
                p *= alpha * one_minus(j, lambda) / (j + 1) as f64;
            }
            return p;
        }
        let (sign, ln_ff) = log_falling_factorial_one(i, lambda);
        if sign == 0 {
            return 0.0;
        }
        (i as f64 * alpha.ln() + ln_ff - ln_factorial(i) - self.norm.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: f64, l: f64) -> DegeneratePoissonDist {
        DegeneratePoissonDist::new(DegeneracyParams::new(a, l).unwrap())
    }

    #[test]
    fn worked_values() {
        assert!((dist(1.0, 0.0).pmf(0) - (-1f64).exp()).abs() < 1e-16);
        assert!((dist(2.0, -0.25).pmf(0) - 1.0 / 16.0).abs() < 1e-16);
        assert!((dist(1.0, 0.5).pmf(1) - 1.0 / 2.25).abs() < 1e-16);
        assert_eq!(dist(1.0, 0.5).pmf(3), 0.0);
    }

    #[test]
    fn sums_to_one() {
        for &(a, l) in &[(1.0, 0.0), (2.0, -0.25), (5.0, -0.1), (3.0, 1.0 / 3.0)] {
            let d = dist(a, l);
            let s: f64 = (0..400).map(|i| d.pmf(i)).sum();
            assert!((s - 1.0).abs() < 1e-13, "({a}, {l}): {s}");
        }
    }

    #[test]
    fn classical_branch_is_poisson() {
        let d = dist(3.0, 0.0);
        for i in 0..40u64 {
            let want = (i as f64 * 3f64.ln() - 3.0 - ln_factorial(i)).exp();
            assert!((d.pmf(i) - want).abs() <= 1e-13 * want);
        }
    }
}
