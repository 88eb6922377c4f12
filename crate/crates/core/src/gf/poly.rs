//! Polynomial-representation arithmetic over GF(p^d).
//!
//! Elements are vector-representation indices: the base-p digits of the index
//! are the coefficients of the residue polynomial, constant term first. This
//! backend does every operation with digit loops and schoolbook reduction, so
//! it is slow but has no size limit beyond `u32` and shares no tables with
//! [`FieldCtx`](super::FieldCtx). It serves as the correctness oracle for the
//! table backend and as the large-field fallback in the benchmarks.

use super::FieldError;

/// Returns true if `n` is prime.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut i = 3u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

/// Splits `q` into `(p, d)` with `q = p^d`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let q = q as u32;
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= q as u64 && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // no factor below sqrt(q): q is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut d = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p, d))
}

/// Multiplies the residue with digits `digits` by `x` modulo the monic
/// polynomial `x^d + modulus[d-1] x^{d-1} + ... + modulus[0]`.
fn mul_by_x(digits: &mut [u32], modulus: &[u32], p: u32) {
    let d = digits.len();
    let top = digits[d - 1];
    for i in (1..d).rev() {
        digits[i] = digits[i - 1];
    }
    digits[0] = 0;
    if top != 0 {
        for (digit, &c) in digits.iter_mut().zip(modulus) {
            let sub = (top as u64 * c as u64 % p as u64) as u32;
            *digit = (*digit + p - sub) % p;
        }
    }
}

/// Order of `x` modulo the given monic polynomial, stopping early once it
/// exceeds `limit`.
fn order_of_x(modulus: &[u32], p: u32, limit: u64) -> Option<u64> {
    let d = modulus.len();
    let mut digits = vec![0u32; d];
    digits[0] = 1;
    for step in 1..=limit {
        mul_by_x(&mut digits, modulus, p);
        if digits[0] == 1 && digits[1..].iter().all(|&c| c == 0) {
            return Some(step);
        }
        if digits.iter().all(|&c| c == 0) {
            return None;
        }
    }
    None
}

/// Finds the lexicographically smallest primitive polynomial of degree `d`
/// over GF(p).
///
/// Candidates are the monic polynomials `x^d + c_{d-1} x^{d-1} + ... + c_0`
/// ordered by the integer `sum c_i p^i`, i.e. compared from the highest
/// non-leading coefficient down. A candidate is primitive exactly when `x`
/// has multiplicative order `p^d - 1` in the quotient ring; that also makes
/// the quotient a field, so no separate irreducibility test is needed.
///
/// Returns the coefficients `c_0..c_{d-1}`.
pub fn find_primitive_polynomial(p: u32, d: u32) -> Option<Vec<u32>> {
    let q = (p as u64).checked_pow(d)?;
    let group_order = q - 1;
    let mut coeffs = vec![0u32; d as usize];
    for _ in 0..q {
        // increment the base-p counter, c_0 least significant
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
        if coeffs[0] == 0 {
            continue;
        }
        if order_of_x(&coeffs, p, group_order) == Some(group_order) {
            return Some(coeffs);
        }
    }
    None
}

/// GF(p^d) with elements as vector-representation indices, computed by
/// polynomial arithmetic.
#[derive(Clone, Debug)]
pub struct PolyField {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
}

impl PolyField {
    /// Builds the field using the smallest primitive polynomial, the same
    /// modulus [`FieldCtx`](super::FieldCtx) uses, so indices agree.
    pub fn new(p: u32, d: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if d == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(d)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(FieldError::FieldTooLarge { p, d })? as u32;
        let modulus =
            find_primitive_polynomial(p, d).ok_or(FieldError::NoPrimitivePolynomial { p, d })?;
        Ok(Self::with_modulus(p, d, q, modulus))
    }

    pub(crate) fn with_modulus(p: u32, d: u32, q: u32, modulus: Vec<u32>) -> Self {
        Self { p, d, q, modulus }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Index of the primitive element `x`.
    pub fn generator(&self) -> u32 {
        if self.d == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.d as usize];
        for digit in out.iter_mut() {
            *digit = a % self.p;
            a /= self.p;
        }
        out
    }

    fn index(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.d == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.d {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let digits: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.index(&digits)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        let p = self.p as u64;
        if self.d == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let d = self.d as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^{d+j} = -x^j * sum c_i x^i
        for top in (d..2 * d - 1).rev() {
            let t = prod[top];
            if t == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &c) in self.modulus.iter().enumerate() {
                let idx = top - d + i;
                prod[idx] = (prod[idx] + p - t * c as u64 % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..d].iter().map(|&c| c as u32).collect();
        self.index(&digits)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }
}
