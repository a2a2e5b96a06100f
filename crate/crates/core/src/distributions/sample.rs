use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DztpDist;
use crate::error::{Error, Result};
use crate::kernel::{term_ratio_bound, DegeneracyParams, SeriesControl};

/// Variate generation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    /// Draw u ~ U(0, 1) and return the first n with P(1) + … + P(n) > u,
    /// accumulating the masses with the ratio recurrence.
    InverseCdfSequential,
}

/// Reproducible stream of DZTP variates.
///
/// The generator is ChaCha8 seeded from `seed`, so identical
/// `(seed, method, params)` give the identical sequence. A stream is
/// single-owner; independent streams should use independent seeds.
#[derive(Debug, Clone)]
pub struct SampleStream {
    seed: u64,
    method: SampleMethod,
    dist: DztpDist,
    rng: ChaCha8Rng,
    /// `cumulative[i]` = P(1) + … + P(i + 1), extended on demand.
    cumulative: Vec<f64>,
    last_mass: f64,
    max_terms: usize,
}

impl SampleStream {
    pub fn new(dist: DztpDist, seed: u64) -> Self {
        let p1 = dist.first_mass();
        Self {
            seed,
            method: SampleMethod::InverseCdfSequential,
            dist,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cumulative: vec![p1],
            last_mass: p1,
            max_terms: SeriesControl::default().max_terms,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> SampleMethod {
        self.method
    }

    pub fn params(&self) -> DegeneracyParams {
        self.dist.params()
    }

    /// Appends P(n + 1) to the cumulative cache; `false` when the support or
    /// the representable mass is exhausted.
    fn extend(&mut self) -> Result<bool> {
        let n = self.cumulative.len() as u64;
        if Some(n) == self.dist.params().support_max() {
            return Ok(false);
        }
        let cum = *self.cumulative.last().unwrap();
        let rho = term_ratio_bound(self.dist.alpha(), n, self.dist.lambda());
        if rho < 1.0 && self.last_mass * rho / (1.0 - rho) < f64::EPSILON * cum {
            return Ok(false);
        }
        if self.cumulative.len() >= self.max_terms {
            return Err(Error::Convergence {
                max_terms: self.max_terms,
                context: "inverse-cdf search".into(),
            });
        }
        self.last_mass *= self.dist.mass_ratio(n);
        self.cumulative.push(cum + self.last_mass);
        Ok(true)
    }

    /// One variate.
    pub fn next_variate(&mut self) -> Result<u64> {
        let u: f64 = self.rng.random();
        let mut i = 0;
        loop {
            if i == self.cumulative.len() && !self.extend()? {
                // u sits in the rounding gap above the last partial sum
                return Ok(i as u64);
            }
            if self.cumulative[i] > u {
                return Ok(i as u64 + 1);
            }
            i += 1;
        }
    }

    /// `count` variates.
    pub fn sample(&mut self, count: usize) -> Result<Vec<u64>> {
        (0..count).map(|_| self.next_variate()).collect()
    }
}
