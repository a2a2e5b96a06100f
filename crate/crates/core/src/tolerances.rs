//! Every numeric tolerance used by the verification harness, in one place.
//!
//! The values are tuned for 64-bit floating point at desk scale
//! (n ≤ 30, α ≤ 20). A [`Tolerances`] value can be loaded from JSON so a
//! run can be audited or deliberately perturbed; missing fields fall back
//! to the defaults below.

use serde::{Deserialize, Serialize};

/// Default tail tolerance for certified probability tables.
pub const DEFAULT_TAIL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    // kernel
    pub falling_recurrence_rel: f64,
    pub exp_inverse_abs: f64,
    pub partial_exp_abs: f64,
    pub stirling_rel: f64,
    pub bell_dobinski_rel: f64,
    pub bell_limit_rel: f64,
    pub bell_classical_rel: f64,
    // distributions
    pub normalization_abs: f64,
    pub conditional_poisson_rel: f64,
    pub cdf_abs: f64,
    pub mean_rel: f64,
    pub variance_rel: f64,
    /// Absolute floor applied to variance comparisons; point masses have variance 0.
    pub variance_abs_floor: f64,
    pub variance_identity_rel: f64,
    pub classical_limit_abs: f64,
    pub moment_rel: f64,
    pub moment_mean_rel: f64,
    pub mgf_fd_rel: f64,
    pub mgf_taylor_rel: f64,
    pub pgf_abs: f64,
    // convolution
    pub sum_altsum_rel: f64,
    pub sum_convolution_abs: f64,
    pub pgf_factorization_abs: f64,
    pub mean_additivity_rel: f64,
    pub hetero_abs: f64,
    pub hetero_iid_rel: f64,
    // statistics
    pub mc_sigmas: f64,
    pub chi_square_significance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            falling_recurrence_rel: 1e-12,
            exp_inverse_abs: 1e-12,
            partial_exp_abs: 1e-10,
            stirling_rel: 1e-9,
            bell_dobinski_rel: 1e-9,
            bell_limit_rel: 1e-5,
            bell_classical_rel: 1e-12,
            normalization_abs: 1e-12,
            conditional_poisson_rel: 1e-12,
            cdf_abs: 1e-12,
            mean_rel: 1e-10,
            variance_rel: 1e-9,
            variance_abs_floor: 1e-12,
            variance_identity_rel: 1e-10,
            classical_limit_abs: 1e-12,
            moment_rel: 1e-9,
            moment_mean_rel: 1e-12,
            mgf_fd_rel: 1e-4,
            mgf_taylor_rel: 1e-3,
            pgf_abs: 1e-12,
            sum_altsum_rel: 1e-9,
            sum_convolution_abs: 1e-9,
            pgf_factorization_abs: 1e-9,
            mean_additivity_rel: 1e-8,
            hetero_abs: 1e-9,
            hetero_iid_rel: 1e-9,
            mc_sigmas: 3.0,
            chi_square_significance: 1e-3,
        }
    }
}

/// `|a - b| <= rel * max(|a|, |b|)`, with exact equality always accepted.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Relative discrepancy `|a - b| / max(|a|, |b|)`, 0 when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
