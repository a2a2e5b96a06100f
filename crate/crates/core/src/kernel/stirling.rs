use serde::Serialize;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[cfg(test)]
use super::falling::falling_factorial;
use super::falling::shifted;
use super::params::finite_support;

/// Rows at or below this index are computed with exact integers when λ = 0.
const EXACT_CLASSICAL_ROWS: usize = 20;

/// Triangular array of S_{2,λ}(n, k) for 0 ≤ k ≤ n ≤ `max_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StirlingTriangle {
    lambda: f64,
    max_n: usize,
    rows: Vec<Vec<f64>>,
}

impl StirlingTriangle {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// S_{2,λ}(n, k); zero for k > n.
    ///
    /// # Panics
    ///
    /// Panics if `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> f64 {
        self.rows[n].get(k).copied().unwrap_or(0.0)
    }
}

/// Classical Stirling numbers of the second kind S_2(n, k).
pub fn stirling_classical(max_n: usize) -> StirlingTriangle {
    stirling_degenerate(max_n, 0.0)
}

/// Exact classical triangle as integers; `None` once an entry overflows `u128`.
pub fn stirling_classical_exact(max_n: usize) -> Option<Vec<Vec<u128>>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_n + 1);
    rows.push(vec![1]);
    for n in 0..max_n {
        let prev = &rows[n];
        let mut next = vec![0u128; n + 2];
        for k in 1..=n + 1 {
            let stay = prev.get(k).copied().unwrap_or(0).checked_mul(k as u128)?;
            next[k] = stay.checked_add(prev[k - 1])?;
        }
        rows.push(next);
    }
    Some(rows)
}

/// Degenerate Stirling numbers of the second kind from
/// S_{2,λ}(n+1, k) = (k − nλ)·S_{2,λ}(n, k) + S_{2,λ}(n, k−1),
/// with S_{2,λ}(0, 0) = 1 and S_{2,λ}(n, 0) = 0 for n ≥ 1.
pub fn stirling_degenerate(max_n: usize, lambda: f64) -> StirlingTriangle {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max_n + 1);
    let exact_rows = if lambda == 0.0 {
        max_n.min(EXACT_CLASSICAL_ROWS)
    } else {
        0
    };
    if exact_rows > 0 {
        let exact = stirling_classical_exact(exact_rows).expect("rows <= 20 fit in u128");
        rows.extend(exact.into_iter().map(|r| r.into_iter().map(|v| v as f64).collect()));
    } else {
        rows.push(vec![1.0]);
    }
    for n in rows.len() - 1..max_n {
        let prev = &rows[n];
        let mut next = vec![0.0; n + 2];
        for k in 1..=n + 1 {
            let stay = prev.get(k).copied().unwrap_or(0.0);
            next[k] = shifted(k as f64, n as u64, lambda) * stay + prev[k - 1];
        }
        rows.push(next);
    }
    StirlingTriangle { lambda, max_n, rows }
}

/// Splits a finite `x` into `(p, s)` with `x = p / 2^s` exactly.
fn dyadic(x: f64) -> (BigInt, u32) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let tz = mant.trailing_zeros();
    mant >>= tz;
    exp += tz as i32;
    let p = BigInt::from(mant) * sign;
    if exp >= 0 {
        (p << exp as usize, 0)
    } else {
        (p, (-exp) as u32)
    }
}

/// λ as an exact fraction p/q: 1/m when λ is taken to be 1/m, otherwise
/// the dyadic value of the float.
fn exact_lambda(lambda: f64) -> (BigInt, BigInt) {
    if let Some(m) = finite_support(lambda) {
        return (BigInt::one(), BigInt::from(m));
    }
    let (p, s) = dyadic(lambda);
    (p, BigInt::one() << s as usize)
}

/// Numerator and denominator of the alternating sum, exact for the given λ:
/// S = num / den with den > 0.
fn altsum_exact(n: u64, k: u64, lambda: f64) -> (BigInt, BigInt) {
    let (p, q) = exact_lambda(lambda);
    let mut num = BigInt::zero();
    let mut binom = BigInt::one();
    for l in 0..=k {
        if l > 0 {
            binom = binom * (k - l + 1) / l;
        }
        let base = &q * l;
        let mut prod = BigInt::one();
        for j in 0..n {
            let f = &base - &p * j;
            if f.is_zero() {
                prod = BigInt::zero();
                break;
            }
            prod *= f;
        }
        if (k - l) % 2 == 0 {
            num += &binom * prod;
        } else {
            num -= &binom * prod;
        }
    }
    let factorial: BigInt = (1..=k).map(BigInt::from).product();
    let den = factorial * num_traits::pow(q, n as usize);
    (num, den)
}

/// Rounds `num / den` (den > 0) to the nearest f64 without intermediate overflow.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // scale so the integer quotient carries at least 64 significant bits
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num.abs() << shift as usize) / den
    } else {
        num.abs() / (den << (-shift) as usize)
    };
    let mut v = q.to_f64().unwrap_or(f64::INFINITY);
    let mut e = -shift;
    while e > 0 && v.is_finite() {
        let step = e.min(1000);
        v *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 && v != 0.0 {
        let step = (-e).min(1000);
        v *= 2f64.powi(-(step as i32));
        e += step;
    }
    if num.is_negative() {
        -v
    } else {
        v
    }
}

/// `(sign, ln|num / den|)` for den > 0.
fn ratio_ln(num: &BigInt, den: &BigInt) -> (i8, f64) {
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        let drop = bits.saturating_sub(64);
        let top = (x.abs() >> drop as usize).to_f64().unwrap();
        top.ln() + drop as f64 * std::f64::consts::LN_2
    }
    if num.is_zero() {
        return (0, f64::NEG_INFINITY);
    }
    let sign = if num.is_negative() { -1 } else { 1 };
    (sign, ln_big(num) - ln_big(den))
}

/// S_{2,λ}(n, k) by the alternating sum
/// (1/k!) Σ_{l=0}^{k} C(k, l) (−1)^{k−l} (l)_{n,λ}.
///
/// The sum cancels heavily, so it is carried out exactly in integer
/// arithmetic (every f64 λ is a dyadic rational, and λ read as 1/m is used as exactly
/// 1/m) and rounded once. It
/// vanishes identically for n < k, and 0 is returned there.
pub fn stirling_degenerate_altsum(n: u64, k: u64, lambda: f64) -> f64 {
    if n < k {
        return 0.0;
    }
    let (num, den) = altsum_exact(n, k, lambda);
    ratio_to_f64(&num, &den)
}

/// `(sign, ln|S_{2,λ}(n, k)|)` from the exact alternating sum; usable where
/// the value itself would overflow.
pub(crate) fn stirling_degenerate_altsum_ln(n: u64, k: u64, lambda: f64) -> (i8, f64) {
    if n < k {
        return (0, f64::NEG_INFINITY);
    }
    let (num, den) = altsum_exact(n, k, lambda);
    ratio_ln(&num, &den)
}
