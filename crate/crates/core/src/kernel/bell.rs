use super::exp::degenerate_exp;
use super::falling::{one_minus, term_ratio_bound};
use super::params::{DegeneracyParams, SeriesControl};
use super::stirling::stirling_classical;
use crate::error::{Error, Result};

/// Bell polynomial Bel_n(x) = Σ_{k=0}^{n} S_2(n, k) x^k.
pub fn bell_classical(n: usize, x: f64) -> f64 {
    let t = stirling_classical(n);
    t.rows()[n].iter().rev().fold(0.0, |acc, &s| acc * x + s)
}

/// Degenerate Bell polynomial β_{n,λ}(x), the coefficients of
/// e_λ^{−1}(x)·e_λ(x e^t) in t^n/n!.
///
/// Evaluated by the finite form
/// β_{n,λ}(x) = Σ_{j=0}^{n} S_2(n, j)·(1)_{j,λ}·(x / (1 + λx))^j,
/// obtained by writing k^n = Σ_j S_2(n, j)(k)_j inside the termwise
/// expansion and resumming each inner series as a degenerate exponential.
/// [`bell_degenerate_series`] evaluates the expansion directly.
pub fn bell_degenerate(n: usize, x: f64, lambda: f64) -> Result<f64> {
    DegeneracyParams::new(x, lambda)?;
    if lambda == 0.0 {
        return Ok(bell_classical(n, x));
    }
    let stirling = stirling_classical(n);
    let y = x / (1.0 + lambda * x);
    let mut weight = 1.0; // (1)_{j,λ} y^j
    let mut acc = 0.0;
    for j in 0..=n {
        if j > 0 {
            weight *= one_minus(j as u64 - 1, lambda) * y;
            if weight == 0.0 {
                break;
            }
        }
        acc += stirling.get(n, j) * weight;
    }
    Ok(acc)
}

/// β_{n,λ}(x) from the truncated series e_λ^{−1}(x)·Σ_{k≥0} k^n x^k (1)_{k,λ}/k!.
pub fn bell_degenerate_series(n: usize, x: f64, lambda: f64, ctl: &SeriesControl) -> Result<f64> {
    DegeneracyParams::new(x, lambda)?;
    let norm = degenerate_exp(1.0, x, lambda)?;
    let mut coef = 1.0; // x^k (1)_{k,λ} / k!
    let mut sum = if n == 0 { 1.0 } else { 0.0 };
    for k in 1..ctl.max_terms as u64 {
        coef *= x * one_minus(k - 1, lambda) / k as f64;
        if coef == 0.0 {
            return Ok(sum / norm);
        }
        let kf = k as f64;
        let term = kf.powi(n as i32) * coef;
        sum += term;
        let growth = ((kf + 1.0) / kf).powi(n as i32);
        let rho = growth * term_ratio_bound(x, k, lambda);
        if rho < 1.0 && term * rho / (1.0 - rho) <= ctl.rel_tail_tol * sum {
            return Ok(sum / norm);
        }
    }
    Err(Error::Convergence {
        max_terms: ctl.max_terms,
        context: format!("degenerate Bell series n = {n}, x = {x}, lambda = {lambda}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_worked_values() {
        assert_eq!(bell_classical(0, 3.7), 1.0);
        assert_eq!(bell_classical(3, 1.0), 5.0);
        assert_eq!(bell_classical(2, 2.0), 6.0);
        let bell_numbers = [1.0, 1.0, 2.0, 5.0, 15.0, 52.0, 203.0, 877.0, 4140.0];
        for (n, b) in bell_numbers.iter().enumerate() {
            assert_eq!(bell_classical(n, 1.0), *b);
        }
    }

    #[test]
    fn degenerate_worked_values() {
        assert_eq!(bell_degenerate(0, 1.3, -0.2).unwrap(), 1.0);
        assert_eq!(bell_degenerate(1, 1.0, -0.5).unwrap(), 2.0);
        for n in 0..8 {
            assert_eq!(bell_degenerate(n, 1.7, 0.0).unwrap(), bell_classical(n, 1.7));
        }
        // high-precision series oracle values (50 digits, truncated here)
        let cases = [
            (2, 1.0, -0.5, 8.0),
            (3, 2.0, -0.25, 184.0),
            (5, 0.5, -1.0, 541.0),
            (4, 1.5, -0.3, 542.217_061_676_114_95),
        ];
        for (n, x, l, want) in cases {
            let got = bell_degenerate(n, x, l).unwrap();
            assert!(
                (got - want).abs() <= 1e-13 * want,
                "β_{n},{l}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn closed_form_matches_series() {
        let ctl = SeriesControl::default();
        for &x in &[0.5, 1.0, 2.0, 5.0] {
            for &c in &[-0.9, -0.5, -0.1] {
                let lambda = c / x;
                for n in 0..=10 {
                    let a = bell_degenerate(n, x, lambda).unwrap();
                    let b = bell_degenerate_series(n, x, lambda, &ctl).unwrap();
                    assert!((a - b).abs() <= 1e-9 * a, "n={n} x={x} λ={lambda}: {a} vs {b}");
                }
            }
            for &lambda in &[0.0, 0.5, 1.0, 0.25] {
                for n in 0..=10 {
                    let a = bell_degenerate(n, x, lambda).unwrap();
                    let b = bell_degenerate_series(n, x, lambda, &ctl).unwrap();
                    assert!((a - b).abs() <= 1e-9 * a, "n={n} x={x} λ={lambda}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn small_lambda_limit() {
        for &x in &[0.5, 1.0, 2.0] {
            for n in 0..=8 {
                let b = bell_classical(n, x);
                let d = bell_degenerate(n, x, 1e-7).unwrap();
                assert!(((d - b) / b).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn rejects_invalid_domain() {
        assert!(matches!(bell_degenerate(2, 1.0, 0.7), Err(Error::Domain(_))));
        assert!(bell_degenerate_series(2, 2.0, -0.5, &SeriesControl::default()).is_err());
        let ctl = SeriesControl::new(1e-15, 5).unwrap();
        assert!(matches!(
            bell_degenerate_series(4, 2.0, -0.45, &ctl),
            Err(Error::Convergence { .. })
        ));
    }
}
