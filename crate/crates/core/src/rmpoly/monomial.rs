use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::PolyError;
use crate::combinatorics::binomial;

/// Exponent vector `z` of the monomial `r^z = prod_j r_j^{z_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|z|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(z: Vec<u32>) -> Self {
        Self(z)
    }
}

/// `C(k + m, m)`: the number of monomials in `m` variables of total degree
/// at most `k`.
pub fn monomial_count_exact(k: u32, m: u32) -> BigUint {
    binomial(k as u64 + m as u64, m as u64)
}

/// [`monomial_count_exact`] as a `usize`, or `OverflowingCount`.
pub fn monomial_count(k: u32, m: u32) -> Result<usize, PolyError> {
    monomial_count_exact(k, m)
        .to_usize()
        .ok_or(PolyError::OverflowingCount { k, m })
}

/// Walks all `z` with `|z| <= k` in ascending lexicographic order, first
/// variable most significant.
///
/// In this order the monomials with `z_1 = k'` form one contiguous block for
/// each `k'`, and each block is itself in the same order over the remaining
/// variables. The recursive evaluator and the file formats rely on this.
#[derive(Debug, Clone)]
pub struct Monomials {
    current: Vec<u32>,
    degree: u32,
    total: u32,
    done: bool,
}

impl Monomials {
    pub fn new(k: u32, m: u32) -> Self {
        assert!(m >= 1, "monomials need at least one variable");
        Self {
            current: vec![0; m as usize],
            degree: k,
            total: 0,
            done: false,
        }
    }

    /// Exponents of the monomial the next call to `advance` moves away from.
    pub fn current(&self) -> Option<&[u32]> {
        (!self.done).then_some(self.current.as_slice())
    }

    /// Steps to the lexicographic successor; false once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        // The successor bumps the last position whose prefix sum leaves room
        // for one more degree, and zeroes everything after it.
        let mut prefix: u32 = self.total;
        for j in (0..self.current.len()).rev() {
            let tail = self.current[j];
            if prefix < self.degree {
                // prefix here is sum(current[..=j]) with positions > j zeroed
                self.current[j] += 1;
                self.total = prefix + 1;
                return true;
            }
            prefix -= tail;
            self.current[j] = 0;
        }
        self.done = true;
        false
    }
}

impl Iterator for Monomials {
    type Item = Monomial;

    fn next(&mut self) -> Option<Monomial> {
        let out = Monomial(self.current()?.to_vec());
        self.advance();
        Some(out)
    }
}

/// All `C(k+m, m)` monomials of degree at most `k` in `m` variables, in the
/// coefficient order used throughout the crate.
pub fn enumerate_monomials(k: u32, m: u32) -> Result<Vec<Monomial>, PolyError> {
    if m == 0 {
        return Err(PolyError::NoVariables);
    }
    let count = monomial_count(k, m)?;
    let mut out = Vec::with_capacity(count);
    out.extend(Monomials::new(k, m));
    Ok(out)
}

/// `sizes[v][d] = C(d + v, v)` for `v < vars`, `d <= degree`: the length of
/// the coefficient block of a `v`-variable polynomial of degree `d`.
#[derive(Debug, Clone)]
pub(crate) struct BlockSizes {
    stride: usize,
    sizes: Vec<usize>,
}

impl BlockSizes {
    pub(crate) fn new(degree: u32, vars: u32) -> Self {
        let stride = degree as usize + 1;
        let mut sizes = vec![1usize; stride * vars as usize];
        // C(d + v, v) = C(d + v - 1, v - 1) + C(d - 1 + v, v)
        for v in 1..vars as usize {
            for d in 1..stride {
                sizes[v * stride + d] = sizes[(v - 1) * stride + d] + sizes[v * stride + d - 1];
            }
        }
        Self { stride, sizes }
    }

    #[inline]
    pub(crate) fn get(&self, vars: usize, degree: u32) -> usize {
        self.sizes[vars * self.stride + degree as usize]
    }
}
