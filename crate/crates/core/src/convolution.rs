//! Laws of sums of independent DZTP variables sharing one λ.
//!
//! For k iid summands with parameter α,
//! P(X₁ + … + X_k = n) = k!/(e_λ(α) − 1)^k · α^n/n! · S_{2,λ}(n, k) for n ≥ k,
//! which follows from raising the generating function
//! (e_λ(αt) − 1)/(e_λ(α) − 1) to the k-th power. Unequal parameters are
//! handled by numeric convolution, with direct enumeration of compositions
//! as a small-scale oracle.

use statrs::function::factorial::ln_factorial;

use crate::distributions::{DztpDist, PmfTable};
use crate::error::{domain, Error, Result};
use crate::kernel::{degenerate_exp, falling_factorial, shifted, stirling_degenerate, DegeneracyParams, SeriesControl};
use crate::tolerances::DEFAULT_TAIL_TOL;

/// Rows at or below this index use the Stirling triangle directly.
const DIRECT_ROWS: u64 = 20;

/// Largest n and k accepted by the composition-enumeration oracle.
pub const ENUMERATION_MAX_N: u64 = 15;
pub const ENUMERATION_MAX_K: usize = 4;

/// k independent summands sharing (α, λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IidSumSpec {
    k: usize,
    params: DegeneracyParams,
}

impl IidSumSpec {
    pub fn new(k: usize, params: DegeneracyParams) -> Result<Self> {
        if k == 0 {
            return Err(domain("a sum needs at least one summand (k >= 1)"));
        }
        Ok(Self { k, params })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> DegeneracyParams {
        self.params
    }

    fn dist(&self) -> DztpDist {
        DztpDist::new(self.params)
    }

    /// k!/(e_λ(α) − 1)^k
    fn prefactor(&self) -> f64 {
        let norm = self.dist().normalizer();
        (1..=self.k).fold(1.0, |acc, i| acc * i as f64 / norm)
    }

    /// P(X = n) through the degenerate Stirling numbers S_{2,λ}(n, k).
    ///
    /// Up to n = 20 the triangle entry is used as is. Beyond that S_{2,λ}(n, k)
    /// and α^n/n! leave the f64 range, so the column is carried scaled as
    /// W(n, j) = S_{2,λ}(n, j)·α^n/n!, which obeys
    /// W(n+1, j) = α/(n+1)·[(j − nλ)·W(n, j) + W(n, j−1)].
    pub fn pmf(&self, n: u64) -> f64 {
        let k = self.k as u64;
        if n < k {
            return 0.0;
        }
        let alpha = self.params.alpha();
        if n <= DIRECT_ROWS {
            let s = stirling_degenerate(n as usize, self.params.lambda()).get(n as usize, self.k);
            let weight = (1..=n).fold(1.0, |acc, i| acc * alpha / i as f64);
            return (self.prefactor() * weight * s).max(0.0);
        }
        let column = self.scaled_stirling_column(n);
        (self.prefactor() * column[n as usize]).max(0.0)
    }

    /// W(j, k) for j = 0..=n_max.
    fn scaled_stirling_column(&self, n_max: u64) -> Vec<f64> {
        let (alpha, lambda) = (self.params.alpha(), self.params.lambda());
        let mut row = vec![0.0; self.k + 1];
        row[0] = 1.0;
        let mut column = Vec::with_capacity(n_max as usize + 1);
        column.push(row[self.k]);
        for n in 0..n_max {
            let scale = alpha / (n + 1) as f64;
            for j in (1..=self.k).rev() {
                row[j] = scale * (shifted(j as f64, n, lambda) * row[j] + row[j - 1]);
            }
            row[0] = 0.0;
            column.push(row[self.k]);
        }
        column
    }

    /// P(X = n) through the alternating sum
    /// α^n/(n!(e_λ(α) − 1)^k)·Σ_l C(k, l)(−1)^{k−l}(l)_{n,λ}.
    pub fn pmf_altsum(&self, n: u64) -> f64 {
        let k = self.k as u64;
        if n < k {
            return 0.0;
        }
        let (sign, ln_s) = crate::kernel::stirling_degenerate_altsum_ln(n, k, self.params.lambda());
        if sign <= 0 {
            return 0.0;
        }
        let norm = self.dist().normalizer();
        let ln_p =
            ln_factorial(k) - self.k as f64 * norm.ln() + n as f64 * self.params.alpha().ln() - ln_factorial(n) + ln_s;
        ln_p.exp()
    }

    /// k-fold numeric convolution of the single-summand table, each factor
    /// certified to `tail_tol / k`.
    pub fn convolution_table(&self, tail_tol: f64) -> Result<PmfTable> {
        let single = self.dist().pmf_table(tail_tol / self.k as f64)?;
        Ok(convolve_all(std::iter::repeat_n(&single, self.k)))
    }

    /// Certified table of the sum from n = k on, listing closed-form values.
    ///
    /// The numeric convolution of the single-summand tables is a lower bound
    /// on the true masses, so its tail certificate plus whatever it lists past
    /// the cut bounds the omitted mass of this table.
    pub fn table(&self, tail_tol: f64) -> Result<PmfTable> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(domain(format!("tail_tol must lie in (0, 1), got {tail_tol}")));
        }
        let conv = self.convolution_table(tail_tol / 2.0)?;
        let mut beyond: f64 = conv.total();
        let mut cut = conv.last();
        for (n, p) in conv.iter() {
            beyond -= p;
            if conv.tail_mass + beyond.max(0.0) < tail_tol {
                cut = n;
                break;
            }
        }
        let column = self.scaled_stirling_column(cut);
        let prefactor = self.prefactor();
        let k = self.k as u64;
        let probs = (k..=cut).map(|n| (prefactor * column[n as usize]).max(0.0)).collect();
        let listed: f64 = conv.iter().take_while(|&(n, _)| n <= cut).map(|(_, p)| p).sum();
        let tail_mass = if self.params.support_max().is_some() && cut == conv.last() {
            0.0
        } else {
            conv.tail_mass + (conv.total() - listed).max(0.0)
        };
        Ok(PmfTable {
            support_start: k,
            probs,
            tail_mass,
        })
    }
}

/// Independent summands with a shared λ and their own α_i.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroSumSpec {
    lambda: f64,
    alphas: Vec<f64>,
    dists: Vec<DztpDist>,
}

impl HeteroSumSpec {
    pub fn new(lambda: f64, alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(domain("a sum needs at least one summand (k >= 1)"));
        }
        let dists = alphas
            .iter()
            .map(|&a| DztpDist::with(a, lambda))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lambda, alphas, dists })
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// P(X = n) by numeric convolution; each factor table reaches far enough
    /// that every composition of n is included.
    pub fn pmf(&self, n: u64) -> Result<f64> {
        let k = self.k() as u64;
        if n < k {
            return Ok(0.0);
        }
        let max_terms = SeriesControl::default().max_terms.max((n - k + 1) as usize);
        let tables = self
            .dists
            .iter()
            .map(|d| d.pmf_table_with(DEFAULT_TAIL_TOL, n - k + 1, max_terms))
            .collect::<Result<Vec<_>>>()?;
        Ok(convolve_all(tables.iter()).get(n))
    }

    /// Convolution of the factor tables, each certified to `tail_tol / k`.
    pub fn table(&self, tail_tol: f64) -> Result<PmfTable> {
        let per = tail_tol / self.k() as f64;
        let tables = self
            .dists
            .iter()
            .map(|d| d.pmf_table(per))
            .collect::<Result<Vec<_>>>()?;
        Ok(convolve_all(tables.iter()))
    }

    /// P(X = n) by enumerating compositions n₁ + … + n_k = n with n_i ≥ 1:
    /// (1/n!)·Π_i 1/(e_λ(α_i) − 1)·Σ C(n; n₁, …, n_k)·Π_i α_i^{n_i}(1)_{n_i,λ}.
    ///
    /// Limited to n ≤ 15 and k ≤ 4.
    pub fn pmf_enumerated(&self, n: u64) -> Result<f64> {
        let k = self.k();
        if n > ENUMERATION_MAX_N || k > ENUMERATION_MAX_K {
            return Err(Error::CombinatorialLimit(format!(
                "composition enumeration is capped at n <= {ENUMERATION_MAX_N}, k <= {ENUMERATION_MAX_K} \
                 (got n = {n}, k = {k})"
            )));
        }
        if n < k as u64 {
            return Ok(0.0);
        }
        let factorial = |m: u64| (1..=m).product::<u64>() as f64;
        let mut parts = vec![0u64; k];
        let mut total = 0.0;
        enumerate_compositions(n, &mut parts, 0, &mut |parts| {
            let multinomial = factorial(n) / parts.iter().map(|&p| factorial(p)).product::<f64>();
            let weight: f64 = parts
                .iter()
                .zip(&self.alphas)
                .map(|(&p, &a)| a.powi(p as i32) * falling_factorial(1.0, p, self.lambda))
                .product();
            total += multinomial * weight;
        });
        let mut norm = 1.0;
        for &a in &self.alphas {
            norm *= degenerate_exp(1.0, a, self.lambda)? - 1.0;
        }
        Ok(total / factorial(n) / norm)
    }
}

fn enumerate_compositions(remaining: u64, parts: &mut [u64], at: usize, visit: &mut impl FnMut(&[u64])) {
    let left = (parts.len() - at) as u64;
    if left == 1 {
        parts[at] = remaining;
        visit(parts);
        return;
    }
    for first in 1..=remaining - (left - 1) {
        parts[at] = first;
        enumerate_compositions(remaining - first, parts, at + 1, visit);
    }
}

fn convolve_all<'a>(mut tables: impl Iterator<Item = &'a PmfTable>) -> PmfTable {
    let first = tables.next().expect("at least one table").clone();
    tables.fold(first, |acc, t| acc.convolve(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn iid(k: usize, a: f64, l: f64) -> IidSumSpec {
        IidSumSpec::new(k, DegeneracyParams::new(a, l).unwrap()).unwrap()
    }

    #[test]
    fn iid_worked_values() {
        assert_eq!(iid(3, 2.0, -0.1).pmf(2), 0.0);
        assert_eq!(iid(3, 2.0, -0.1).pmf_altsum(2), 0.0);
        assert!((iid(3, 1.7, 1.0).pmf(3) - 1.0).abs() < 1e-15);
        assert!((iid(2, 1.0, 0.5).pmf(2) - 0.64).abs() < 1e-15);
        assert!((iid(2, 1.0, 0.5).pmf_altsum(2) - 0.64).abs() < 1e-14);
        let classical = 1.0 / ((E - 1.0) * (E - 1.0));
        assert!((iid(2, 1.0, 0.0).pmf_altsum(2) - classical).abs() < 1e-15);
        assert!((classical - 0.338_696_887_338_465_9).abs() < 1e-15);
        assert!(IidSumSpec::new(0, DegeneracyParams::new(1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn single_summand_is_the_dztp_law() {
        let d = DztpDist::with(2.0, -0.3).unwrap();
        let s = iid(1, 2.0, -0.3);
        for n in 1..40 {
            let p = d.pmf(n).unwrap();
            assert!((s.pmf(n) - p).abs() <= 1e-12 * p, "n={n}");
            assert!((s.pmf_altsum(n) - p).abs() <= 1e-12 * p, "n={n}");
        }
    }

    #[test]
    fn direct_and_scaled_rows_agree() {
        let s = iid(3, 1.5, -0.2);
        let column = s.scaled_stirling_column(20);
        for n in 3..=20u64 {
            let scaled = s.prefactor() * column[n as usize];
            assert!((scaled - s.pmf(n)).abs() <= 1e-13 * s.pmf(n));
        }
    }

    #[test]
    fn iid_tables() {
        let t = iid(2, 3.0, 1.0).table(1e-12).unwrap();
        assert_eq!(t.support_start, 2);
        assert_eq!(t.probs.len(), 1);
        assert!((t.probs[0] - 1.0).abs() < 1e-14);

        let t = iid(2, 1.0, 0.5).table(1e-12).unwrap();
        assert_eq!((t.support_start, t.tail_mass), (2, 0.0));
        for (got, want) in t.probs.iter().zip([0.64, 0.32, 0.04]) {
            assert!((got - want).abs() < 1e-15);
        }

        let t = iid(3, 1.0, 0.0).table(1e-12).unwrap();
        assert!(t.tail_mass < 1e-12);
        assert!((t.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tables_survive_large_rows() {
        // means near 50 per summand: S_{2,λ}(n, k) itself overflows f64 here
        let s = iid(5, 5.0, -0.18);
        let t = s.table(1e-12).unwrap();
        assert!(t.last() > 300);
        assert!((t.total() + t.tail_mass - 1.0).abs() < 1e-11);
        let mean_sum = 5.0 * DztpDist::with(5.0, -0.18).unwrap().mean();
        assert!((t.mean() - mean_sum).abs() < 1e-8 * mean_sum);
    }

    #[test]
    fn hetero_worked_values() {
        let h = HeteroSumSpec::new(0.0, vec![1.0, 2.0]).unwrap();
        let want2 = 1.0 / (E - 1.0) * 2.0 / (E * E - 1.0);
        assert!((h.pmf(2).unwrap() - want2).abs() < 1e-16);
        assert!((h.pmf_enumerated(2).unwrap() - want2).abs() < 1e-16);
        assert!((want2 - 0.182_179_244_588_800_24).abs() < 1e-16);
        assert!((h.pmf(3).unwrap() - 0.273_268_866_883_200_36).abs() < 1e-15);
        assert_eq!(h.pmf(1).unwrap(), 0.0);

        let single = HeteroSumSpec::new(-0.2, vec![2.0]).unwrap();
        let d = DztpDist::with(2.0, -0.2).unwrap();
        for n in 1..12 {
            assert!((single.pmf(n).unwrap() - d.pmf(n).unwrap()).abs() < 1e-15);
        }
        assert!(HeteroSumSpec::new(0.7, vec![1.0]).is_err());
        assert!(HeteroSumSpec::new(0.0, vec![]).is_err());
    }

    #[test]
    fn enumeration_caps() {
        let h = HeteroSumSpec::new(0.0, vec![1.0, 1.0]).unwrap();
        assert!(matches!(h.pmf_enumerated(16), Err(Error::CombinatorialLimit(_))));
        let h = HeteroSumSpec::new(0.0, vec![1.0; 5]).unwrap();
        assert!(matches!(h.pmf_enumerated(6), Err(Error::CombinatorialLimit(_))));
    }

    #[test]
    fn hetero_far_point_includes_all_compositions() {
        let h = HeteroSumSpec::new(-0.1, vec![0.5, 3.0]).unwrap();
        let p = h.pmf(80).unwrap();
        let a = DztpDist::with(0.5, -0.1).unwrap();
        let b = DztpDist::with(3.0, -0.1).unwrap();
        let direct: f64 = (1..80).map(|i| a.pmf(i).unwrap() * b.pmf(80 - i).unwrap()).sum();
        assert!((p - direct).abs() <= 1e-12 * direct);
    }
}
