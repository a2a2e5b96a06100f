use serde::Serialize;

/// A truncated probability table: `probs[i]` is the mass at
/// `support_start + i`, and `tail_mass` is a certified upper bound on the
/// mass of everything not listed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfTable {
    pub support_start: u64,
    pub probs: Vec<f64>,
    pub tail_mass: f64,
}

impl PmfTable {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Largest listed support point.
    pub fn last(&self) -> u64 {
        self.support_start + self.probs.len() as u64 - 1
    }

    /// Listed mass at `n`; 0 outside the listed range.
    pub fn get(&self, n: u64) -> f64 {
        n.checked_sub(self.support_start)
            .and_then(|i| self.probs.get(i as usize))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// (value, mass) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.support_start + i as u64, p))
    }

    /// Σ n^order·P(n) over the listed support.
    pub fn moment(&self, order: u32) -> f64 {
        self.iter().map(|(n, p)| (n as f64).powi(order as i32) * p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    /// Running sums of the listed masses.
    pub fn cumulative(&self) -> Vec<f64> {
        self.probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// Σ P(n)·t^n over the listed support.
    pub fn pgf(&self, t: f64) -> f64 {
        // Horner in t, then shift by t^support_start
        let poly = self.probs.iter().rev().fold(0.0, |acc, &p| acc * t + p);
        poly * t.powi(self.support_start as i32)
    }

    /// Drops entries beyond `n_max`, moving their mass into `tail_mass`.
    pub fn truncate_to(&mut self, n_max: u64) {
        if n_max < self.support_start {
            self.tail_mass += self.total();
            self.probs.clear();
            return;
        }
        let keep = (n_max - self.support_start + 1) as usize;
        if keep < self.probs.len() {
            let dropped: f64 = self.probs[keep..].iter().sum();
            self.probs.truncate(keep);
            self.tail_mass += dropped;
        }
    }

    /// Distribution of the sum of two independent variables. The omitted mass
    /// of the result is at most the sum of the two tail certificates.
    pub fn convolve(&self, other: &PmfTable) -> PmfTable {
        let mut probs = vec![0.0; self.len() + other.len() - 1];
        for (i, &a) in self.probs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.probs.iter().enumerate() {
                probs[i + j] += a * b;
            }
        }
        PmfTable {
            support_start: self.support_start + other.support_start,
            probs,
            tail_mass: self.tail_mass + other.tail_mass,
        }
    }
}
