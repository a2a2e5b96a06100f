//! Monte Carlo summaries and the chi-square goodness-of-fit test.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::distributions::PmfTable;

/// Minimum expected count per chi-square bin.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// Goodness of fit of integer `draws` against `table`.
///
/// Bins are formed left to right until each expects at least five draws;
/// the last bin is open-ended and absorbs the table's tail mass together
/// with any draw beyond the listed support. A draw below the support fails
/// the test outright.
pub fn chi_square_gof(draws: &[u64], table: &PmfTable, significance: f64) -> ChiSquareOutcome {
    let total = draws.len() as f64;
    // bin edges: bins[i] starts at edges[i]
    let mut edges = Vec::new();
    let mut expected = Vec::new();
    let mut acc = 0.0;
    let mut start = table.support_start;
    for (n, p) in table.iter() {
        acc += p * total;
        if acc >= MIN_EXPECTED {
            edges.push(start);
            expected.push(acc);
            acc = 0.0;
            start = n + 1;
        }
    }
    acc += table.tail_mass * total;
    match expected.last_mut() {
        Some(last) if acc < MIN_EXPECTED => *last += acc,
        _ => {
            edges.push(start);
            expected.push(acc);
        }
    }
    let mut observed = vec![0.0; expected.len()];
    let mut below = false;
    for &x in draws {
        if x < table.support_start {
            below = true;
            continue;
        }
        let bin = edges.partition_point(|&e| e <= x) - 1;
        observed[bin] += 1.0;
    }
    let statistic: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| {
            if *e > 0.0 {
                (o - e) * (o - e) / e
            } else if *o > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    let dof = expected.len().saturating_sub(1);
    if dof == 0 {
        return ChiSquareOutcome {
            statistic,
            dof,
            critical: 0.0,
            p_value: if below { 0.0 } else { 1.0 },
            pass: !below,
        };
    }
    let chi = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let critical = chi.inverse_cdf(1.0 - significance);
    let p_value = chi.sf(statistic);
    ChiSquareOutcome {
        statistic,
        dof,
        critical,
        p_value,
        pass: !below && statistic <= critical,
    }
}

/// Sample mean of `f(x)` with its standard error.
pub fn mean_and_stderr(draws: &[u64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = draws.len() as f64;
    let (mut s, mut s2) = (0.0, 0.0);
    for &x in draws {
        let v = f(x as f64);
        s += v;
        s2 += v * v;
    }
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}
