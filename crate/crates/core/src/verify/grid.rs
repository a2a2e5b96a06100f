use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::kernel::DegeneracyParams;

/// The parameter grid a verification run covers.
///
/// Every α is paired with every entry of `lambdas` and with `c / α` for
/// every `c` in `lambda_scaled`; the latter expresses points such as
/// λ = −0.9/α that sit at a fixed fraction of the domain boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub lambda_scaled: Vec<f64>,
    pub n_max: u64,
    pub k_max: usize,
    pub seed: u64,
    /// Draws per Monte Carlo check.
    pub mc_samples: usize,
}

impl Default for GridSpec {
    /// An empty grid with the standard limits.
    fn default() -> Self {
        Self {
            alphas: vec![],
            lambdas: vec![],
            lambda_scaled: vec![],
            n_max: 30,
            k_max: 5,
            seed: 0,
            mc_samples: 1_000_000,
        }
    }
}

/// One (α, λ) pair of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub index: usize,
    pub alpha: f64,
    pub lambda: f64,
}

impl GridSpec {
    /// α ∈ {0.5, 1, 2, 5}, λ ∈ {−0.9/α, −0.5/α, −0.1, 0, 1/2, 1}.
    pub fn standard() -> Self {
        Self {
            alphas: vec![0.5, 1.0, 2.0, 5.0],
            lambdas: vec![-0.1, 0.0, 0.5, 1.0],
            lambda_scaled: vec![-0.9, -0.5],
            ..Self::default()
        }
    }

    /// All grid points in a fixed order, each validated.
    pub fn points(&self) -> Result<Vec<GridPoint>> {
        if self.k_max == 0 {
            return Err(domain("k_max must be at least 1"));
        }
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            let lambdas = self
                .lambda_scaled
                .iter()
                .map(|c| c / alpha)
                .chain(self.lambdas.iter().copied());
            for lambda in lambdas {
                DegeneracyParams::new(alpha, lambda)?;
                out.push(GridPoint {
                    index: out.len(),
                    alpha,
                    lambda,
                });
            }
        }
        Ok(out)
    }
}

/// Seed for grid point `index`: the SplitMix64 finalizer applied to
/// `seed + (index + 1)·0x9E3779B97F4A7C15` (wrapping).
pub fn point_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
