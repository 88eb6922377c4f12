//! Finite fields GF(p^d) with `p^d < 2^16`, backed by discrete-log and Zech
//! logarithm tables.
//!
//! Elements are stored by vector-representation index: the base-p digits of
//! the index are the coefficients of the element as a polynomial in the
//! primitive element `g`, constant term first. The tables translate between
//! that index and the discrete log `e` with `g^e = x`.
//!
//! With `Z(e)` defined by `g^Z(e) = 1 + g^e`, addition of nonzero operands is
//! `g^a + g^b = g^(a + Z(b - a))`, so both addition and multiplication are a
//! constant number of table lookups.

mod poly;

use std::fmt;

use rand::RngCore;
use thiserror::Error;

pub use poly::{find_primitive_polynomial, is_prime, prime_power, PolyField};

/// Field orders handled by the table backend are strictly below this.
pub const TABLE_LIMIT: u32 = 1 << 16;

/// Marks `Z(e)` where `1 + g^e = 0`.
const NO_ZECH: u16 = u16::MAX;

// Tables have fixed power-of-two lengths so indices can be masked instead of
// bounds checked.
const LOG_LEN: usize = 1 << 16;
const SUM_LEN: usize = 1 << 17;
const SUM_MASK: u32 = SUM_LEN as u32 - 1;
const CACHE_LEN: usize = 1 << 19;
const CACHE_MASK: u32 = CACHE_LEN as u32 - 1;

#[cold]
#[inline(never)]
fn not_in_field(a: FieldElement, params: FieldParams) -> ! {
    panic!("element {a} not in {params}")
}

fn table<T: Copy + Default, const N: usize>() -> Box<[T; N]> {
    vec![T::default(); N]
        .into_boxed_slice()
        .try_into()
        .ok()
        .unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{d} is not below 2^16")]
    FieldTooLarge { p: u32, d: u32 },
    #[error("no primitive polynomial of degree {d} over GF({p})")]
    NoPrimitivePolynomial { p: u32, d: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Characteristic, extension degree and order of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u16,
    d: u8,
    q: u32,
}

impl FieldParams {
    pub fn new(p: u32, d: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if d == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match (p as u64).checked_pow(d) {
            Some(q) if q < TABLE_LIMIT as u64 => Ok(Self {
                p: p as u16,
                d: d as u8,
                q: q as u32,
            }),
            _ => Err(FieldError::FieldTooLarge { p, d }),
        }
    }

    /// Resolves a field order `q` into its prime-power decomposition.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, d) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, d)
    }

    pub fn characteristic(&self) -> u32 {
        self.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.d as u32
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// `(p: u16 LE, d: u8)`.
    pub fn to_bytes(&self) -> [u8; 3] {
        let p = self.p.to_le_bytes();
        [p[0], p[1], self.d]
    }

    pub fn from_bytes(bytes: [u8; 3]) -> Result<Self, FieldError> {
        Self::new(
            u16::from_le_bytes([bytes[0], bytes[1]]) as u32,
            bytes[2] as u32,
        )
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.d)
        }
    }
}

/// An element of some [`FieldCtx`], by vector-representation index.
///
/// Elements carry no reference to their field; using an element with a
/// context of a different order is a logic error caught only by debug
/// assertions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps a raw index without range checking; see [`FieldCtx::element`].
    pub const fn from_index(index: u16) -> Self {
        Self(index)
    }

    pub const fn index(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_le_bytes(self) -> [u8; 2] {
        self.0.to_le_bytes()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Widened tables for the element-cache mode.
///
/// Zero gets the log `2g` (with `g = q - 1`), and `exp` and `zech` are
/// extended so that every case of addition and multiplication, zeros and
/// cancellation included, is a plain chain of table lookups:
///
/// - `a * b = exp[log a + log b]`, with `exp` zero from index `2g` on;
/// - `a + b = exp[log a + zech[log b - log a + 3g]]` in wrapping `u32`
///   arithmetic. Slots `(2g, 4g)` of `zech` hold the Zech logarithms (or
///   `2g` for cancellation), slots `[g, 2g)` send `0 + b` back to `log b`
///   and slots `(4g, 5g]` send `a + 0` to `log a`.
///
/// Logs stay 16 bits wide, so the tables exist only while `2g < 2^16`.
#[derive(Clone, Debug)]
struct ElementCache {
    log: Box<[u16; LOG_LEN]>,
    exp: Box<[u16; CACHE_LEN]>,
    zech: Box<[u32; CACHE_LEN]>,
}

/// A fully tabulated finite field.
///
/// Immutable after construction; share it freely across threads.
#[derive(Clone)]
pub struct FieldCtx {
    params: FieldParams,
    modulus: Vec<u16>,
    /// index -> discrete log; entry 0 unused
    log: Box<[u16; LOG_LEN]>,
    /// discrete log -> index, doubled so sums of two logs need no reduction;
    /// `log a + NO_ZECH` also stays in range
    exp: Box<[u16; SUM_LEN]>,
    /// Z(e) for e in [0, q-1), NO_ZECH where 1 + g^e = 0; doubled like `exp`
    zech: Box<[u16; SUM_LEN]>,
    /// log of -1: (q-1)/2 in odd characteristic, 0 in characteristic 2
    neg_one_log: u32,
    sample_bits: u32,
    cache: Option<ElementCache>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("params", &self.params)
            .field("modulus", &self.modulus)
            .field("cache", &self.cache.is_some())
            .finish_non_exhaustive()
    }
}

/// Builds GF(p^d) with all tables populated. Same inputs give the same
/// tables and element numbering.
pub fn build_field(p: u32, d: u32) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(p, d)
}

impl FieldCtx {
    pub fn new(p: u32, d: u32) -> Result<Self, FieldError> {
        Self::with_cache(p, d, false)
    }

    /// Builds the field from its order.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let params = FieldParams::from_order(q)?;
        Self::new(params.characteristic(), params.degree())
    }

    /// Builds the field, optionally with the widened element-cache tables.
    /// Those need `2(q - 1) < 2^16`; larger fields are built without them,
    /// which `has_cache` reports.
    pub fn with_cache(p: u32, d: u32, cache: bool) -> Result<Self, FieldError> {
        let params = FieldParams::new(p, d)?;
        let modulus =
            find_primitive_polynomial(p, d).ok_or(FieldError::NoPrimitivePolynomial { p, d })?;
        let q = params.order();
        let oracle = PolyField::with_modulus(p, d, q, modulus.clone());
        let group = (q - 1) as usize;

        let mut exp = table::<u16, SUM_LEN>();
        let mut log = table::<u16, LOG_LEN>();
        let g = oracle.generator();
        let mut x = 1u32;
        for e in 0..group {
            exp[e] = x as u16;
            exp[e + group] = x as u16;
            log[x as usize] = e as u16;
            x = oracle.mul(x, g);
        }
        if x != 1 || (group > 1 && exp[1..group].contains(&1)) {
            return Err(FieldError::NoPrimitivePolynomial { p, d });
        }

        let mut zech = table::<u16, SUM_LEN>();
        for e in 0..group {
            let s = oracle.add(1, exp[e] as u32);
            zech[e] = if s == 0 { NO_ZECH } else { log[s as usize] };
            zech[e + group] = zech[e];
        }

        let neg_one_log = if p == 2 { 0 } else { (q - 1) / 2 };
        let sample_bits = 32 - (q - 1).leading_zeros();
        let mut ctx = Self {
            params,
            modulus: modulus.iter().map(|&c| c as u16).collect(),
            log,
            exp,
            zech,
            neg_one_log,
            sample_bits: sample_bits.max(1),
            cache: None,
        };
        if cache {
            ctx.cache = ctx.build_cache();
        }
        #[cfg(debug_assertions)]
        if q <= 1 << 12 {
            ctx.check_zech(&oracle);
        }
        Ok(ctx)
    }

    fn build_cache(&self) -> Option<ElementCache> {
        let g = self.group_order();
        if 2 * g > u16::MAX as u32 {
            return None;
        }
        let mut log = self.log.clone();
        log[0] = 2 * g as u16;
        let mut exp = table::<u16, CACHE_LEN>();
        exp[..2 * g as usize].copy_from_slice(&self.exp[..2 * g as usize]);
        let mut zech = table::<u32, CACHE_LEN>();
        for (i, slot) in (0..=6 * g).zip(zech.iter_mut()) {
            *slot = if i >= g && i < 2 * g {
                // 0 + b: log b - 2g
                i.wrapping_sub(3 * g)
            } else if i > 2 * g && i < 4 * g {
                match self.zech[(i - 2 * g) as usize % g as usize] {
                    NO_ZECH => 2 * g,
                    z => z as u32,
                }
            } else {
                // a + 0, and unreachable slots
                0
            };
        }
        Some(ElementCache { log, exp, zech })
    }

    /// Checks `g^Z(e) = 1 + g^e` against polynomial arithmetic that never
    /// touches the tables.
    #[cfg(debug_assertions)]
    fn check_zech(&self, oracle: &PolyField) {
        let g = oracle.generator();
        let mut ge = 1u32;
        for e in 0..self.group_order() {
            let expected = oracle.add(1, ge);
            let z = self.zech[e as usize];
            if expected == 0 {
                assert_eq!(z, NO_ZECH, "Zech sentinel misplaced at e={e}");
                assert_eq!(e, self.neg_one_log, "1 + g^e = 0 away from log(-1)");
            } else {
                assert_eq!(
                    oracle.pow(g, z as u64),
                    expected,
                    "Zech table wrong at e={e}"
                );
            }
            ge = oracle.mul(ge, g);
        }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn order(&self) -> u32 {
        self.params.q
    }

    pub fn characteristic(&self) -> u32 {
        self.params.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.params.d as u32
    }

    /// Size of the multiplicative group, `q - 1`.
    pub fn group_order(&self) -> u32 {
        self.params.q - 1
    }

    /// Coefficients `c_0..c_{d-1}` of the monic primitive modulus.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn has_cache(&self) -> bool {
        self.cache.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The primitive element `g`.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.exp[(1 % self.group_order()) as usize])
    }

    /// Validates a raw index.
    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index < self.params.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(FieldError::ElementOutOfRange {
                index,
                q: self.params.q,
            })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.params.q).map(|i| FieldElement(i as u16))
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as u32)
    }

    /// `g^e`.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp[(e % self.group_order() as u64) as usize])
    }

    /// Zech logarithm `Z(e)`, or `None` where `1 + g^e = 0`.
    pub fn zech(&self, e: u32) -> Option<u32> {
        let z = self.zech[(e % self.group_order()) as usize];
        (z != NO_ZECH).then_some(z as u32)
    }

    #[inline]
    fn debug_check(&self, a: FieldElement) {
        if cfg!(debug_assertions) && a.0 as u32 >= self.params.q {
            not_in_field(a, self.params);
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.debug_check(b);
        if let Some(cache) = &self.cache {
            return self.add_cached(cache, a, b);
        }
        // Every path is computed and the result selected, so the cost does
        // not depend on how often zeros or cancellations occur.
        let la = self.log[a.0 as usize] as u32;
        let lb = self.log[b.0 as usize] as u32;
        let z =
            self.zech[(lb.wrapping_add(self.group_order()).wrapping_sub(la) & SUM_MASK) as usize];
        let r = self.exp[(la.wrapping_add(z as u32) & SUM_MASK) as usize];
        let r = if z == NO_ZECH { 0 } else { r };
        // with a zero operand the sum is the other one, which is a | b
        FieldElement(if a.0 == 0 || b.0 == 0 { a.0 | b.0 } else { r })
    }

    #[inline]
    fn add_cached(&self, cache: &ElementCache, a: FieldElement, b: FieldElement) -> FieldElement {
        let la = cache.log[a.0 as usize] as u32;
        let lb = cache.log[b.0 as usize] as u32;
        let z = cache.zech
            [(lb.wrapping_add(3 * self.group_order()).wrapping_sub(la) & CACHE_MASK) as usize];
        FieldElement(cache.exp[(la.wrapping_add(z) & CACHE_MASK) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.debug_check(a);
        if a.0 == 0 || self.neg_one_log == 0 {
            return a;
        }
        let la = self.log[a.0 as usize] as u32;
        FieldElement(self.exp[(la + self.neg_one_log) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.debug_check(b);
        if let Some(cache) = &self.cache {
            let s = cache.log[a.0 as usize] as u32 + cache.log[b.0 as usize] as u32;
            return FieldElement(cache.exp[(s & CACHE_MASK) as usize]);
        }
        let s = (self.log[a.0 as usize] as u32).wrapping_add(self.log[b.0 as usize] as u32);
        let r = self.exp[(s & SUM_MASK) as usize];
        FieldElement(if a.0 == 0 || b.0 == 0 { 0 } else { r })
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.debug_check(a);
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let group = self.group_order();
        let la = self.log[a.0 as usize] as u32;
        Ok(FieldElement(self.exp[((group - la) % group) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`; one table round trip for nonzero `a`.
    #[inline]
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.debug_check(a);
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = self.group_order() as u64;
        let la = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[(la * (e % group) % group) as usize])
    }

    /// Uniform element by rejection over the smallest power-of-two range
    /// covering the field.
    pub fn sample_uniform<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mask = (1u32 << self.sample_bits) - 1;
        loop {
            let v = rng.next_u32() & mask;
            if v < self.params.q {
                return FieldElement(v as u16);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn el(i: u16) -> FieldElement {
        FieldElement::from_index(i)
    }

    #[test]
    fn gf2_is_trivial() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(f.add(f.one(), f.one()), f.zero());
        assert_eq!(f.mul(f.one(), f.one()), f.one());
        assert_eq!(f.zech(0), None);
    }

    #[test]
    fn gf4_zech_table() {
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1]);
        // g = x has index 2, g^2 = x + 1 has index 3
        assert_eq!(f.generator(), el(2));
        assert_eq!(f.exp(2), el(3));
        assert_eq!(f.zech(0), None);
        assert_eq!(f.zech(1), Some(2));
        assert_eq!(f.zech(2), Some(1));
    }

    #[test]
    fn too_large_and_bad_inputs() {
        assert_eq!(
            build_field(2, 17).unwrap_err(),
            FieldError::FieldTooLarge { p: 2, d: 17 }
        );
        assert_eq!(
            build_field(2, 16).unwrap_err(),
            FieldError::FieldTooLarge { p: 2, d: 16 }
        );
        assert_eq!(build_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(build_field(3, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(build_field(65521, 1).is_ok());
        assert_eq!(
            FieldParams::from_order(12),
            Err(FieldError::NotPrimePower(12))
        );
    }

    #[test]
    fn construction_is_deterministic() {
        let a = build_field(3, 5).unwrap();
        let b = build_field(3, 5).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.exp, b.exp);
        assert_eq!(a.zech, b.zech);
    }

    #[test]
    fn gf5_arithmetic() {
        let f = build_field(5, 1).unwrap();
        assert_eq!(f.add(el(3), el(4)), el(2));
        assert_eq!(f.mul(el(3), el(4)), el(2));
        assert_eq!(f.pow(el(2), 3), el(3));
        assert_eq!(f.sub(el(1), el(3)), el(3));
        assert_eq!(f.neg(el(1)), el(4));
        assert_eq!(f.div(el(1), el(2)).unwrap(), el(3));
    }

    #[test]
    fn gf4_arithmetic() {
        let f = build_field(2, 2).unwrap();
        let g = f.generator();
        let g2 = f.mul(g, g);
        assert_eq!(f.add(g, g), f.zero());
        assert_eq!(f.add(f.one(), g), g2);
        assert_eq!(f.mul(g, g2), f.one());
        assert_eq!(f.pow(g, 5), g2);
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.pow(f.zero(), 0), f.one());
        assert_eq!(f.pow(f.zero(), 3), f.zero());
    }

    #[test]
    fn division_by_zero() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.inv(f.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(f.div(f.one(), f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn sentinel_position() {
        for (p, d) in [(2, 4), (3, 3), (5, 2), (13, 1)] {
            let f = build_field(p, d).unwrap();
            let expected = if p == 2 { 0 } else { f.group_order() / 2 };
            let missing: Vec<u32> = (0..f.group_order())
                .filter(|&e| f.zech(e).is_none())
                .collect();
            assert_eq!(missing, vec![expected]);
        }
    }

    #[test]
    fn matches_polynomial_backend() {
        for (p, d) in [(2, 5), (3, 4), (5, 3), (7, 2), (31, 1)] {
            let f = build_field(p, d).unwrap();
            let o = PolyField::new(p, d).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let (x, y) = (a.index() as u32, b.index() as u32);
                    assert_eq!(f.add(a, b).index() as u32, o.add(x, y));
                    assert_eq!(f.mul(a, b).index() as u32, o.mul(x, y));
                    assert_eq!(f.sub(a, b).index() as u32, o.sub(x, y));
                }
            }
        }
    }

    #[test]
    fn cache_mode_agrees() {
        for (p, d) in [(2, 6), (3, 3), (251, 1)] {
            let plain = FieldCtx::new(p, d).unwrap();
            let cached = FieldCtx::with_cache(p, d, true).unwrap();
            assert!(cached.has_cache());
            for a in plain.elements() {
                for b in plain.elements() {
                    assert_eq!(plain.add(a, b), cached.add(a, b));
                    assert_eq!(plain.mul(a, b), cached.mul(a, b));
                }
            }
        }
    }

    #[test]
    fn cache_limits() {
        // 2(q - 1) = 65534 is the widest that still fits
        let top = FieldCtx::with_cache(2, 15, true).unwrap();
        assert!(top.has_cache());
        let plain = FieldCtx::new(2, 15).unwrap();
        let q = plain.order();
        let picks: Vec<u32> = [0, 1, 2, q - 2, q - 1]
            .into_iter()
            .chain((0..300u32).map(|i| i.wrapping_mul(2_654_435_761) % q))
            .collect();
        for &x in &picks {
            for &y in &picks {
                let (a, b) = (FieldElement(x as u16), FieldElement(y as u16));
                assert_eq!(plain.add(a, b), top.add(a, b));
                assert_eq!(plain.mul(a, b), top.mul(a, b));
            }
        }
        for (p, d) in [(3, 10), (65521, 1)] {
            assert!(!FieldCtx::with_cache(p, d, true).unwrap().has_cache());
        }
    }

    #[test]
    fn fermat_little() {
        for q in [8u64, 9, 25, 49, 121, 256, 343] {
            let f = FieldCtx::from_order(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, q - 1), f.one());
            }
        }
    }

    #[test]
    fn params_bytes() {
        let params = FieldParams::new(3, 9).unwrap();
        assert_eq!(params.to_bytes(), [3, 0, 9]);
        assert_eq!(FieldParams::from_bytes(params.to_bytes()), Ok(params));
        assert_eq!(params.to_string(), "GF(3^9)");
    }

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let f = build_field(2, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        assert!((0..1000).all(|_| f.sample_uniform(&mut rng).index() < 2));

        let f = build_field(257, 1).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..64)
                .map(|_| f.sample_uniform(&mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn sampling_frequencies_gf257() {
        let f = build_field(257, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2024);
        let draws = 1_000_000u32;
        let mut counts = vec![0u32; 257];
        for _ in 0..draws {
            counts[f.sample_uniform(&mut rng).index() as usize] += 1;
        }
        let expected = draws as f64 / 257.0;
        let sigma = (expected * (1.0 - 1.0 / 257.0)).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() < 5.0 * sigma,
                "element {i}: {c}"
            );
        }
        // chi-square with 256 dof: mean 256, sd ~22.6
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 256.0 + 5.0 * (512f64).sqrt(), "chi2 = {chi2}");
    }
}
