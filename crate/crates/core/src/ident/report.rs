use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{Pow, ToPrimitive};

use crate::combinatorics::log2_biguint;
use crate::rmpoly::RmParams;

/// `[length, dimension, distance]_q` of the full-length Reed-Muller block code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockParams {
    /// `q^m`
    pub length: BigUint,
    /// `C(k+m, m)`
    pub dimension: BigUint,
    /// `(q - k) q^(m-1)`
    pub distance: BigUint,
}

/// Size, transmission cost and error bound of a code. All logarithms are
/// base 2 and all sizes in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeReport {
    pub params: RmParams,
    pub block: BlockParams,
    /// `log I = C(k+m, m) log q`; infinite if it overflows `f64`
    pub log_i_bits: f64,
    /// `log log I`, finite even when `log_i_bits` is not
    pub log_log_i: f64,
    /// `log C = (m+1) log q`, one challenge
    pub log_c_bits: f64,
    /// `log R = m log q`
    pub log_r_bits: f64,
    /// `log T = log q`
    pub log_t_bits: f64,
    /// `E = k/q`
    pub error_bound: Ratio<u64>,
    /// `E^n`
    pub error_bound_n: f64,
    /// `C(k+m, m) / (n (m+1))`
    pub rate_ratio: Ratio<BigUint>,
    /// Bytes on the wire for all `n` challenges, header excluded.
    pub payload_bytes: u64,
}

impl CodeReport {
    /// `E^n` as an exact fraction.
    pub fn error_bound_n_exact(&self) -> Ratio<BigUint> {
        let e = Ratio::new(
            BigUint::from(*self.error_bound.numer()),
            BigUint::from(*self.error_bound.denom()),
        );
        Pow::pow(e, self.params.n())
    }

    pub fn rate_ratio_f64(&self) -> f64 {
        if let (Some(num), Some(den)) = (
            self.rate_ratio.numer().to_f64(),
            self.rate_ratio.denom().to_f64(),
        ) {
            if num.is_finite() && den.is_finite() {
                return num / den;
            }
        }
        let num = log2_biguint(self.rate_ratio.numer());
        let den = log2_biguint(self.rate_ratio.denom());
        (num - den).exp2()
    }
}

/// Derived quantities of the code `params`.
pub fn report(params: RmParams) -> CodeReport {
    let q = params.q() as u64;
    let (k, m, n) = (params.k() as u64, params.m(), params.n() as u64);
    let dimension = params.num_coefficients();
    let log_q = (q as f64).log2();

    let log_i_bits = dimension.to_f64().map_or(f64::INFINITY, |c| c * log_q);
    let log_log_i = log2_biguint(&dimension) + log_q.log2();

    let q_big = BigUint::from(q);
    let block = BlockParams {
        length: Pow::pow(&q_big, m),
        dimension: dimension.clone(),
        distance: BigUint::from(q - k) * Pow::pow(&q_big, m - 1),
    };

    let error_bound = Ratio::new(k, q);
    CodeReport {
        params,
        block,
        log_i_bits,
        log_log_i,
        log_c_bits: (m as f64 + 1.0) * log_q,
        log_r_bits: m as f64 * log_q,
        log_t_bits: log_q,
        error_bound,
        error_bound_n: (k as f64 / q as f64).powi(n as i32),
        rate_ratio: Ratio::new(dimension, BigUint::from(n * (m as u64 + 1))),
        payload_bytes: n * (m as u64 + 1) * 2,
    }
}

impl fmt::Display for CodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(
            f,
            "code: RM_{}(k={}, m={}) with n={} challenge(s) over {}",
            p.q(),
            p.k(),
            p.m(),
            p.n(),
            p.field()
        )?;
        writeln!(
            f,
            "block code: [{}, {}, {}]_{}",
            self.block.length,
            self.block.dimension,
            self.block.distance,
            p.q()
        )?;
        writeln!(f, "log_I: {} bits", fmt_bits(self.log_i_bits))?;
        writeln!(f, "log_C: {} bits per challenge", fmt_bits(self.log_c_bits))?;
        writeln!(f, "log_R: {} bits", fmt_bits(self.log_r_bits))?;
        writeln!(f, "log_T: {} bits", fmt_bits(self.log_t_bits))?;
        writeln!(
            f,
            "E: {} = {}",
            self.error_bound,
            fmt_float(*self.error_bound.numer() as f64 / *self.error_bound.denom() as f64)
        )?;
        writeln!(f, "E^n: {}", fmt_float(self.error_bound_n))?;
        writeln!(f, "rate_ratio: {}", fmt_float(self.rate_ratio_f64()))?;
        write!(f, "wire_bytes: {}", self.payload_bytes)
    }
}

fn fmt_bits(x: f64) -> String {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        fmt_float(x)
    }
}

fn fmt_float(x: f64) -> String {
    if x != 0.0 && (x.abs() >= 1e9 || x.abs() < 1e-4) {
        format!("{x:.6e}")
    } else {
        format!("{}", (x * 1e9).round() / 1e9)
    }
}
