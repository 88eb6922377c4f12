//! Exact binomial coefficients and base-2 logarithms of large quantities.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Exact `C(n, r)`; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 1..=r {
        // acc = C(n - r + i, i) after each step, always an integer
        acc *= n - r + i;
        acc /= i;
    }
    acc
}

/// `log2(x)` for an arbitrarily large positive integer; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.to_u64().unwrap().to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.to_u64().unwrap() as f64).log2() + shift as f64
}

/// Terms above which [`log2_binomial`] switches from the product form to
/// log-gamma.
const PRODUCT_TERMS_LIMIT: f64 = 1.0e6;

/// `log2 C(n, r)` for real `n >= r >= 0`, without materializing the value.
///
/// Uses `sum_{i=1}^{s} log2(1 + (n - s)/i)` with `s = min(r, n - r)` when `s`
/// is a small integer, which avoids the cancellation in
/// `lgamma(n+1) - lgamma(r+1) - lgamma(n-r+1)` at large `n`; otherwise falls
/// back to log-gamma.
pub fn log2_binomial(n: f64, r: f64) -> f64 {
    assert!(r >= 0.0 && n >= r, "log2_binomial({n}, {r}) out of range");
    let s = r.min(n - r);
    if s.fract() == 0.0 && s <= PRODUCT_TERMS_LIMIT {
        let base = n - s;
        let ln: f64 = (1..=s as u64).map(|i| (base / i as f64).ln_1p()).sum();
        return ln / std::f64::consts::LN_2;
    }
    (ln_gamma(n + 1.0) - ln_gamma(r + 1.0) - ln_gamma(n - r + 1.0)) / std::f64::consts::LN_2
}
