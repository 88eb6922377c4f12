//! Numerical checks of the capacity conditions for Reed-Muller
//! identification codes.
//!
//! A noiseless identification code achieves capacity when, asymptotically,
//!
//! 1. the tag is a vanishing part of the challenge: `log T / log R -> 0`,
//! 2. the identification rate matches the randomness rate:
//!    `log log I / log R -> 1`,
//! 3. the false-accept bound vanishes: `E -> 0`.
//!
//! The family `q = 2^(t^2)`, `k = 2^(t^2 - t)`, `m = 2^t` satisfies all three.
//! Everything here works in the log domain so that `q = 2^36` and beyond
//! never has to be materialized.

use std::fmt::Write as _;

use crate::combinatorics::{binomial, log2_biguint, log2_binomial};

/// The three condition ratios for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionRatios {
    /// `log T / log R = 1/m`
    pub randomness_ratio: f64,
    /// `log log I / log R`
    pub rate_ratio: f64,
    /// `E = k/q`
    pub error: f64,
}

/// Condition ratios for a concrete code, with the binomial computed exactly.
pub fn condition_check(q: u64, k: u64, m: u64) -> ConditionRatios {
    assert!(q > k && m >= 1, "condition_check needs q > k and m >= 1");
    let log_q = (q as f64).log2();
    let log_log_i = log2_biguint(&binomial(k + m, m)) + log_q.log2();
    ConditionRatios {
        randomness_ratio: 1.0 / m as f64,
        rate_ratio: log_log_i / (m as f64 * log_q),
        error: k as f64 / q as f64,
    }
}

/// Condition ratios from `log2 q` and real-valued `k`, `m`; usable far beyond
/// any field that could be built.
pub fn condition_check_log(log2_q: f64, k: f64, m: f64) -> ConditionRatios {
    let log_log_i = log2_binomial(k + m, m) + log2_q.log2();
    ConditionRatios {
        randomness_ratio: 1.0 / m,
        rate_ratio: log_log_i / (m * log2_q),
        error: (k.log2() - log2_q).exp2(),
    }
}

/// One member of the capacity-achieving family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub t: u32,
    /// `t^2`
    pub q_log2: u32,
    /// `t^2 - t`
    pub k_log2: u32,
    /// `2^t`
    pub m: u64,
    pub randomness_ratio: f64,
    pub rate_ratio: f64,
    pub error: f64,
    /// `(t^2 - t) / t^2`, the value `rate_ratio` tracks as `t` grows
    pub rate_limit: f64,
}

/// Largest supported `t`; `m = 2^t` must stay a small exact integer.
pub const MAX_T: u32 = 16;

/// The point `q = 2^(t^2)`, `k = 2^(t^2 - t)`, `m = 2^t`.
///
/// `t = 1` is valid but degenerate (`q = 2`, `k = 1`, `m = 2`).
pub fn capacity_point(t: u32) -> CapacityPoint {
    assert!((1..=MAX_T).contains(&t), "t = {t} outside 1..={MAX_T}");
    let q_log2 = t * t;
    let k_log2 = q_log2 - t;
    let m = 1u64 << t;
    let log_log_i =
        log2_binomial((k_log2 as f64).exp2() + m as f64, m as f64) + (q_log2 as f64).log2();
    CapacityPoint {
        t,
        q_log2,
        k_log2,
        m,
        // both are exactly 2^-t
        randomness_ratio: (-(t as f64)).exp2(),
        rate_ratio: log_log_i / (m as f64 * q_log2 as f64),
        error: (k_log2 as f64 - q_log2 as f64).exp2(),
        rate_limit: k_log2 as f64 / q_log2 as f64,
    }
}

/// Points for `t = 2..=t_max`.
pub fn capacity_sequence(t_max: u32) -> Vec<CapacityPoint> {
    (2..=t_max).map(capacity_point).collect()
}

/// Direction of each ratio along a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trends {
    pub randomness_decreasing: bool,
    pub error_decreasing: bool,
    pub rate_increasing: bool,
    pub rate_below_one: bool,
}

pub fn trends(points: &[CapacityPoint]) -> Trends {
    let pairs = || points.windows(2).map(|w| (&w[0], &w[1]));
    Trends {
        randomness_decreasing: pairs().all(|(a, b)| b.randomness_ratio < a.randomness_ratio),
        error_decreasing: pairs().all(|(a, b)| b.error < a.error),
        rate_increasing: pairs().all(|(a, b)| b.rate_ratio > a.rate_ratio),
        rate_below_one: points.iter().all(|p| p.rate_ratio < 1.0),
    }
}

pub const CAPACITY_CSV_HEADER: &str = "t,q_log2,k_log2,m,randomness_ratio,rate_ratio,error";

pub fn capacity_csv(points: &[CapacityPoint]) -> String {
    let mut out = String::from(CAPACITY_CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.t, p.q_log2, p.k_log2, p.m, p.randomness_ratio, p.rate_ratio, p.error
        );
    }
    out
}

/// Rate ratio of a code with fixed `q`, `k` and its upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeilingRow {
    pub m: u64,
    pub n: u64,
    /// `log log I / (n m log q)`
    pub ratio: f64,
    /// `(log log q + k log(e (k+m) / k)) / (n m log q)`
    pub bound: f64,
}

/// With `q` (hence `k`) bounded, the rate ratio decays like
/// `O(log m / (m n))`; tabulates the exact ratio against that bound.
pub fn bounded_q_ceiling(
    q: u64,
    k: u64,
    m_range: impl IntoIterator<Item = u64>,
    n: u64,
) -> Vec<CeilingRow> {
    assert!(
        q > k && k >= 1 && n >= 1,
        "bounded_q_ceiling needs q > k >= 1, n >= 1"
    );
    let log_q = (q as f64).log2();
    let log_log_q = log_q.log2();
    m_range
        .into_iter()
        .map(|m| {
            let denom = n as f64 * m as f64 * log_q;
            let log_log_i = log2_binomial((k + m) as f64, m as f64) + log_log_q;
            let binom_bound = k as f64 * (std::f64::consts::E * (k + m) as f64 / k as f64).log2();
            CeilingRow {
                m,
                n,
                ratio: log_log_i / denom,
                bound: (log_log_q + binom_bound) / denom,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn randomness_ratio_is_one_over_m() {
        for (q, k, m) in [(7, 3, 1), (256, 17, 5), (65521, 100, 12)] {
            assert_eq!(condition_check(q, k, m).randomness_ratio, 1.0 / m as f64);
        }
    }

    #[test]
    fn t2_point() {
        let exact = condition_check(16, 4, 4);
        let expected = 280f64.log2() / 16.0;
        assert!((exact.rate_ratio - expected).abs() / expected < 1e-12);
        let p = capacity_point(2);
        assert!((p.rate_ratio - expected).abs() / expected < 1e-12);
        assert_eq!((p.q_log2, p.k_log2, p.m), (4, 2, 4));
    }

    #[test]
    fn t3_error() {
        assert_eq!(capacity_point(3).error, 0.125);
        let exact = condition_check(512, 64, 8);
        assert_eq!(exact.error, 0.125);
        assert!((exact.rate_ratio - capacity_point(3).rate_ratio).abs() < 1e-12);
    }

    #[test]
    fn log_domain_agrees_with_exact() {
        for (q, k, m) in [
            (16u64, 4u64, 4u64),
            (512, 64, 8),
            (8192, 100, 6),
            (49, 48, 30),
        ] {
            let exact = condition_check(q, k, m);
            let approx = condition_check_log((q as f64).log2(), k as f64, m as f64);
            assert!((exact.rate_ratio - approx.rate_ratio).abs() / exact.rate_ratio < 1e-9);
            assert!((exact.error - approx.error).abs() / exact.error < 1e-12);
        }
    }

    #[test]
    fn sequence_converges() {
        let points = capacity_sequence(8);
        assert_eq!(points.len(), 7);
        let tr = trends(&points);
        assert!(tr.randomness_decreasing && tr.error_decreasing);
        assert!(tr.rate_increasing && tr.rate_below_one);
        for p in &points {
            assert_eq!(p.randomness_ratio, 1.0 / p.m as f64);
            assert_eq!(p.error, (-(p.t as f64)).exp2());
            assert!(p.rate_ratio < 1.0);
        }
        // the gap to (t^2 - t)/t^2 shrinks
        let gaps: Vec<f64> = points.iter().map(|p| p.rate_limit - p.rate_ratio).collect();
        assert!(gaps.windows(2).skip(1).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn csv_shape() {
        let csv = capacity_csv(&capacity_sequence(6));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CAPACITY_CSV_HEADER);
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("2,4,2,4,0.25,"));
    }

    #[test]
    fn ceiling_bounds_ratio_and_decays() {
        let rows = bounded_q_ceiling(8192, 100, (1..=400).map(|i| i * 5), 1);
        assert!(rows.iter().all(|r| r.ratio <= r.bound));
        let tail: Vec<f64> = rows.iter().skip(10).map(|r| r.ratio).collect();
        assert!(tail.windows(2).all(|w| w[1] < w[0]));
        assert!(rows.last().unwrap().bound < 0.1);
    }

    #[test]
    fn doubling_n_halves_exactly() {
        let one = bounded_q_ceiling(8191, 50, [3, 10, 77, 1000], 1);
        let two = bounded_q_ceiling(8191, 50, [3, 10, 77, 1000], 2);
        for (a, b) in one.iter().zip(&two) {
            assert_eq!(a.ratio / 2.0, b.ratio);
            assert_eq!(a.bound / 2.0, b.bound);
        }
    }

    #[test]
    fn binomial_sandwich() {
        // (a/b)^b <= C(a, b) <= (e a / b)^b for all 1 <= b <= a <= 1000
        let mut row = vec![BigUint::from(1u32)];
        for a in 1..=1000u64 {
            let mut next = vec![BigUint::from(1u32); a as usize + 1];
            for b in 1..a as usize {
                next[b] = &row[b - 1] + &row[b];
            }
            row = next;
            for b in 1..=a {
                let log_c = log2_biguint(&row[b as usize]);
                let ratio = (a as f64 / b as f64).log2();
                let lower = b as f64 * ratio;
                let upper = b as f64 * (ratio + std::f64::consts::LOG2_E);
                let slack = 1e-9 * log_c.max(1.0);
                assert!(lower <= log_c + slack, "lower bound fails at ({a},{b})");
                assert!(log_c <= upper + slack, "upper bound fails at ({a},{b})");
            }
        }
    }
}
