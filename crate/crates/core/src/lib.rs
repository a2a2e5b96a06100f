//! Degenerate zero-truncated Poisson (DZTP) distributions.
//!
//! The crate is split into four layers:
//!
//! * [`kernel`]: λ-falling factorials, degenerate exponentials, Stirling
//!   numbers of the second kind and Bell polynomials (classical and degenerate).
//! * [`distributions`]: the degenerate Poisson and DZTP laws, with mass
//!   function, CDF, exact moments, generating functions and a sampler.
//! * [`convolution`]: laws of sums of independent DZTP variables.
//! * [`verify`]: independent brute-force oracles and the grid verification
//!   harness that cross-checks every closed form.
//!
//! ```
//! use degen_poisson::{DegeneracyParams, DztpDist};
//!
//! let d = DztpDist::new(DegeneracyParams::new(1.0, 0.5).unwrap());
//! assert!((d.mean() - 1.2).abs() < 1e-12);
//! assert!((d.pmf(1).unwrap() - 0.8).abs() < 1e-12);
//! ```

pub mod convolution;
pub mod distributions;
mod error;
pub mod kernel;
pub mod tolerances;
pub mod verify;

pub use convolution::{HeteroSumSpec, IidSumSpec};
pub use distributions::{DegeneratePoissonDist, DztpDist, PmfTable, SampleMethod, SampleStream};
pub use error::{Error, Result};
pub use kernel::{DegeneracyParams, SeriesControl, StirlingTriangle};
pub use tolerances::Tolerances;
