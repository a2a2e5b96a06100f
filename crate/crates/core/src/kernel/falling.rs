/// `x - j·λ`, snapped to exactly zero when the difference is within rounding
/// of zero. This keeps (l)_{n,1/m} and (1)_{n,1/m} exactly zero where the
/// exact product vanishes even though 1/m is not representable.
#[inline]
pub(crate) fn shifted(x: f64, j: u64, lambda: f64) -> f64 {
    let s = j as f64 * lambda;
    let d = x - s;
    if d != 0.0 && d.abs() <= 4.0 * f64::EPSILON * x.abs().max(s.abs()) {
        0.0
    } else {
        d
    }
}

/// The factor `1 - jλ` of (1)_{n,λ}.
#[inline]
pub(crate) fn one_minus(j: u64, lambda: f64) -> f64 {
    shifted(1.0, j, lambda)
}

/// Upper bound on `|t·(1 - jλ)/(j + 1)|` over all j ≥ k, i.e. on the ratio
/// of consecutive terms of the series Σ (1)_{j,λ} t^j / j! from index k on.
pub(crate) fn term_ratio_bound(t: f64, k: u64, lambda: f64) -> f64 {
    let at_k = one_minus(k, lambda).abs() / (k as f64 + 1.0);
    t.abs() * at_k.max(lambda.abs())
}

/// The λ-falling factorial (x)_{n,λ} = x(x − λ)(x − 2λ)…(x − (n − 1)λ), with
/// (x)_{0,λ} = 1. Defined for every real λ.
pub fn falling_factorial(x: f64, n: u64, lambda: f64) -> f64 {
    let mut acc = 1.0;
    for j in 0..n {
        let f = shifted(x, j, lambda);
        if f == 0.0 {
            return 0.0;
        }
        acc *= f;
    }
    acc
}

/// Log-space form of (1)_{n,λ}: returns `(sign, ln|(1)_{n,λ}|)`.
///
/// When the product is exactly zero (λ = 1/m and n > m) the result is
/// `(0, -inf)`.
pub fn log_falling_factorial_one(n: u64, lambda: f64) -> (i8, f64) {
    let mut sign = 1i8;
    let mut log_abs = 0.0;
    for j in 1..n {
        let f = one_minus(j, lambda);
        if f == 0.0 {
            return (0, f64::NEG_INFINITY);
        }
        if f < 0.0 {
            sign = -sign;
        }
        log_abs += f.abs().ln();
    }
    (sign, log_abs)
}
