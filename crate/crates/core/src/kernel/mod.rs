//! Special-function kernels.
//!
//! All functions here are pure. Falling factorials and Stirling triangles
//! are defined for every real λ; functions that need a convergent series
//! or a genuine probability law take their parameters through
//! [`DegeneracyParams`].

mod bell;
mod exp;
mod falling;
mod params;
mod stirling;

pub use bell::{bell_classical, bell_degenerate, bell_degenerate_series};
pub use exp::{degenerate_exp, degenerate_exp_m1, degenerate_exp_partial, degenerate_exp_series, SeriesSum};
pub use falling::{falling_factorial, log_falling_factorial_one};
pub use params::{finite_support, DegeneracyParams, SeriesControl};
pub use stirling::{
    stirling_classical, stirling_classical_exact, stirling_degenerate, stirling_degenerate_altsum, StirlingTriangle,
};

pub(crate) use exp::degenerate_exp_partial_m1;
pub(crate) use falling::{one_minus, shifted, term_ratio_bound};
pub(crate) use stirling::stirling_degenerate_altsum_ln;
