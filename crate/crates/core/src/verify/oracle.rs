//! Brute-force oracles. Each one computes its quantity along a route that
//! shares nothing with the closed form it checks beyond the λ-falling
//! factorial and the mass function itself.

use serde::Serialize;

use crate::distributions::{DztpDist, PmfTable};
use crate::error::{Error, Result};
use crate::kernel::{bell_degenerate_series, term_ratio_bound, DegeneracyParams, SeriesControl};

/// A truncated sum together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// E[X^n] as Σ_k k^n·P(k), continued until the weighted tail is certified
/// below `tail_tol` relative to the running sum.
pub fn oracle_moment_by_summation(params: DegeneracyParams, n: u32, tail_tol: f64) -> Result<OracleSum> {
    if n == 0 {
        return Ok(OracleSum {
            value: 1.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let dist = DztpDist::new(params);
    let max_terms = SeriesControl::default().max_terms as u64;
    let mut sum = 0.0;
    for k in 1..=max_terms {
        let kf = k as f64;
        let term = kf.powi(n as i32) * dist.pmf(k)?;
        sum += term;
        if Some(k) == params.support_max() {
            return Ok(OracleSum {
                value: sum,
                tail_bound: 0.0,
                terms: k,
            });
        }
        let rho = ((kf + 1.0) / kf).powi(n as i32) * term_ratio_bound(params.alpha(), k, params.lambda());
        if rho < 1.0 {
            let tail = term * rho / (1.0 - rho);
            if tail <= tail_tol * sum {
                return Ok(OracleSum {
                    value: sum,
                    tail_bound: tail,
                    terms: k,
                });
            }
        }
    }
    Err(Error::Convergence {
        max_terms: max_terms as usize,
        context: format!("moment oracle of order {n}"),
    })
}

/// Number of set partitions of an n-set into k nonempty blocks, by
/// enumerating restricted growth strings. Limited to n ≤ 10.
pub fn oracle_partitions_stirling(n: usize, k: usize) -> Result<u64> {
    if n > 10 {
        return Err(Error::CombinatorialLimit(format!(
            "partition enumeration is capped at n <= 10 (got {n})"
        )));
    }
    fn walk(i: usize, n: usize, k: usize, used: usize) -> u64 {
        if i == n {
            return (used == k) as u64;
        }
        // too few elements left to open the missing blocks
        if k - used.min(k) > n - i {
            return 0;
        }
        (0..=used.min(k.saturating_sub(1)))
            .map(|b| walk(i + 1, n, k, used.max(b + 1)))
            .sum()
    }
    if k > n {
        return Ok(0);
    }
    if n == 0 {
        return Ok(1);
    }
    if k == 0 {
        return Ok(0);
    }
    Ok(walk(0, n, k, 0))
}

/// β_{n,λ}(x) from the termwise expansion e_λ^{−1}(x)·Σ_k k^n x^k (1)_{k,λ}/k!.
pub fn oracle_dobinski_bell(n: usize, x: f64, lambda: f64, ctl: &SeriesControl) -> Result<f64> {
    bell_degenerate_series(n, x, lambda, ctl)
}

/// Distribution of a sum by repeated direct convolution of the factor
/// mass functions, evaluated straight from `pmf` at every point up to `n_max`.
pub fn oracle_convolution(dists: &[DztpDist], n_max: u64) -> Result<PmfTable> {
    let mut acc = PmfTable {
        support_start: 0,
        probs: vec![1.0],
        tail_mass: 0.0,
    };
    for d in dists {
        let width = (n_max + 1).saturating_sub(acc.support_start + 1) as usize;
        let factor: Vec<f64> = (1..=width as u64).map(|n| d.pmf(n)).collect::<Result<_>>()?;
        let mut probs = vec![0.0; width];
        for (i, &a) in acc.probs.iter().enumerate() {
            for (j, &b) in factor.iter().enumerate() {
                if i + j < width {
                    probs[i + j] += a * b;
                }
            }
        }
        acc = PmfTable {
            support_start: acc.support_start + 1,
            probs,
            tail_mass: 0.0,
        };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn moment_oracle_worked_values() {
        let p = DegeneracyParams::new(3.0, 1.0).unwrap();
        assert!((oracle_moment_by_summation(p, 7, 1e-15).unwrap().value - 1.0).abs() < 1e-15);
        let p = DegeneracyParams::new(1.0, 0.5).unwrap();
        assert!((oracle_moment_by_summation(p, 2, 1e-15).unwrap().value - 1.6).abs() < 1e-15);
        let p = DegeneracyParams::new(1.0, 0.0).unwrap();
        let m = oracle_moment_by_summation(p, 1, 1e-15).unwrap();
        assert!((m.value - E / (E - 1.0)).abs() < 1e-14);
        assert!(m.tail_bound <= 1e-15 * m.value);
    }

    #[test]
    fn partition_oracle() {
        assert_eq!(oracle_partitions_stirling(4, 2).unwrap(), 7);
        for n in 0..=10 {
            assert_eq!(oracle_partitions_stirling(n, n).unwrap(), 1);
        }
        assert_eq!(oracle_partitions_stirling(3, 0).unwrap(), 0);
        assert_eq!(oracle_partitions_stirling(10, 3).unwrap(), 9330);
        // Bell number B_10
        let b10: u64 = (0..=10).map(|k| oracle_partitions_stirling(10, k).unwrap()).sum();
        assert_eq!(b10, 115_975);
        assert!(matches!(
            oracle_partitions_stirling(11, 2),
            Err(Error::CombinatorialLimit(_))
        ));
    }

    #[test]
    fn dobinski_oracle() {
        let ctl = SeriesControl::default();
        assert!((oracle_dobinski_bell(0, 1.3, -0.2, &ctl).unwrap() - 1.0).abs() < 1e-12);
        assert!((oracle_dobinski_bell(1, 1.0, -0.5, &ctl).unwrap() - 2.0).abs() < 1e-9);
        assert!((oracle_dobinski_bell(3, 1.0, 0.0, &ctl).unwrap() - 5.0).abs() < 1e-9);
    }

    #[test]
    fn convolution_oracle_two_point() {
        let d = DztpDist::with(1.0, 0.5).unwrap();
        let t = oracle_convolution(&[d, d], 6).unwrap();
        assert_eq!(t.support_start, 2);
        for (n, want) in [(2, 0.64), (3, 0.32), (4, 0.04), (5, 0.0), (6, 0.0)] {
            assert!((t.get(n) - want).abs() < 1e-15, "n={n}");
        }
    }
}
