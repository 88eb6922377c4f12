//! Evaluation of `p_w(r) = sum_z w_z r^z`.

use std::cell::Cell;

use super::monomial::{BlockSizes, Monomials};
use crate::gf::{FieldCtx, FieldElement};

/// The two field operations the recursive evaluator performs.
///
/// Implemented by [`FieldCtx`] for real use and by [`CountingArith`] to
/// count what the evaluator does.
pub trait Arith {
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement;
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement;

    /// Called once per evaluator invocation (including the top level).
    #[inline]
    fn enter(&self) {}
}

impl Arith for FieldCtx {
    #[inline]
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldCtx::add(self, a, b)
    }

    #[inline]
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldCtx::mul(self, a, b)
    }
}

/// Operation tallies from an instrumented evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub adds: u64,
    pub muls: u64,
    /// Evaluator invocations, i.e. nodes of the recursion tree.
    pub calls: u64,
}

/// Wraps a field and counts every add, mul and evaluator call.
#[derive(Debug)]
pub struct CountingArith<'a> {
    ctx: &'a FieldCtx,
    adds: Cell<u64>,
    muls: Cell<u64>,
    calls: Cell<u64>,
}

impl<'a> CountingArith<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        Self {
            ctx,
            adds: Cell::new(0),
            muls: Cell::new(0),
            calls: Cell::new(0),
        }
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            adds: self.adds.get(),
            muls: self.muls.get(),
            calls: self.calls.get(),
        }
    }
}

impl Arith for CountingArith<'_> {
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.adds.set(self.adds.get() + 1);
        self.ctx.add(a, b)
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.muls.set(self.muls.get() + 1);
        self.ctx.mul(a, b)
    }

    fn enter(&self) {
        self.calls.set(self.calls.get() + 1);
    }
}

/// Reference evaluation: each monomial's value from table powers, summed.
pub(crate) fn naive(
    ctx: &FieldCtx,
    coeffs: &[FieldElement],
    degree: u32,
    r: &[FieldElement],
) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    let mut walk = Monomials::new(degree, r.len() as u32);
    for &w in coeffs {
        let z = walk.current().expect("coefficient count matches monomials");
        let term = z
            .iter()
            .zip(r)
            .fold(w, |t, (&e, &x)| ctx.mul(t, ctx.pow(x, e as u64)));
        acc = ctx.add(acc, term);
        walk.advance();
    }
    acc
}

/// Recursion over variables:
/// `p(r) = sum_{k'=0}^{k} r_1^{k'} * p_{k'}(r_2, ..., r_m)`
/// where `p_{k'}` is the degree `k - k'` polynomial on the block of
/// coefficients with `z_1 = k'`.
///
/// Powers of `r_1` accumulate with one multiplication per step. A
/// single-variable node of degree `k` costs `k` additions and `2k`
/// multiplications; an inner node costs the same plus its children.
pub(crate) fn recursive<A: Arith>(
    arith: &A,
    coeffs: &[FieldElement],
    degree: u32,
    r: &[FieldElement],
) -> FieldElement {
    let sizes = BlockSizes::new(degree, r.len() as u32);
    recurse(arith, coeffs, degree, r, &sizes)
}

fn recurse<A: Arith>(
    arith: &A,
    coeffs: &[FieldElement],
    degree: u32,
    r: &[FieldElement],
    sizes: &BlockSizes,
) -> FieldElement {
    arith.enter();
    let x = r[0];
    if r.len() == 1 {
        debug_assert_eq!(coeffs.len(), degree as usize + 1);
        let mut acc = coeffs[0];
        let mut power = FieldElement::ONE;
        for &w in &coeffs[1..] {
            power = arith.mul(power, x);
            acc = arith.add(acc, arith.mul(w, power));
        }
        return acc;
    }
    let rest = &r[1..];
    let inner_vars = rest.len();
    let first = sizes.get(inner_vars, degree);
    let mut acc = recurse(arith, &coeffs[..first], degree, rest, sizes);
    let mut offset = first;
    let mut power = FieldElement::ONE;
    for step in 1..=degree {
        let len = sizes.get(inner_vars, degree - step);
        let inner = recurse(
            arith,
            &coeffs[offset..offset + len],
            degree - step,
            rest,
            sizes,
        );
        power = arith.mul(power, x);
        acc = arith.add(acc, arith.mul(power, inner));
        offset += len;
    }
    debug_assert_eq!(offset, coeffs.len());
    acc
}
