//! The degenerate Poisson and degenerate zero-truncated Poisson laws.

mod dztp;
mod poisson;
mod sample;
mod table;

pub use dztp::DztpDist;
pub use poisson::DegeneratePoissonDist;
pub use sample::{SampleMethod, SampleStream};
pub use table::PmfTable;

use crate::kernel::{degenerate_exp_m1, degenerate_exp_partial_m1, DegeneracyParams};
use crate::Result;

/// e_λ(z) − 1 for the parameters' λ. With finite support (λ = 1/m) this is
/// the degree-m polynomial Σ_{k=1}^{m} z^k (1)_{k,λ}/k!, which equals
/// (1 + z/m)^m − 1 for every real z.
pub(crate) fn exp_m1_at(params: &DegeneracyParams, z: f64) -> Result<f64> {
    match params.support_max() {
        Some(m) => Ok(degenerate_exp_partial_m1(z, m, params.lambda())),
        None => degenerate_exp_m1(1.0, z, params.lambda()),
    }
}
