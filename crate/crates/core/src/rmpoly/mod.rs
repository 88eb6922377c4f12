//! Reed-Muller polynomials `RM_q(k, m)`: every polynomial in `m` variables of
//! total degree at most `k` over GF(q). One polynomial is one identity.
//!
//! Coefficients are stored in ascending lexicographic order of the exponent
//! vector, first variable most significant (see [`Monomials`]). For `k = 2`,
//! `m = 2` with variables `(x, y)` that is `1, y, y^2, x, xy, x^2`.

mod eval;
mod monomial;

use num_bigint::BigUint;
use rand::RngCore;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, FieldError, FieldParams};

pub use eval::{Arith, CountingArith, OpCounts};
pub use monomial::{
    enumerate_monomials, monomial_count, monomial_count_exact, Monomial, Monomials,
};

/// Largest coefficient vector [`sample_identity`] will allocate (512 MiB of
/// `u16` coefficients).
pub const MAX_COEFFICIENTS: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degree k = {k} must be below the field order q = {q} (q > k)")]
    DegreeTooLarge { k: u32, q: u32 },
    #[error("degree k must be at least 1")]
    ZeroDegree,
    #[error("at least one variable is required")]
    NoVariables,
    #[error("at least one challenge is required")]
    NoChallenges,
    #[error("{name} = {value} does not fit the 16-bit file fields")]
    FieldWidth { name: &'static str, value: u32 },
    #[error("C({k}+{m}, {m}) coefficients exceed the addressable size")]
    OverflowingCount { k: u32, m: u32 },
    #[error("{count} coefficients exceed the budget of {budget}")]
    ExceedsBudget { count: usize, budget: usize },
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("partition degree {k_prime} exceeds k = {k}")]
    BadDegree { k_prime: u32, k: u32 },
    #[error("identity is over {identity} but the field context is {ctx}")]
    FieldMismatch {
        identity: FieldParams,
        ctx: FieldParams,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Parameters `(q, k, m, n)` of a Reed-Muller identification code with `n`
/// challenges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RmParams {
    field: FieldParams,
    k: u32,
    m: u32,
    n: u32,
}

impl std::fmt::Display for RmParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} k={} m={} n={}", self.field, self.k, self.m, self.n)
    }
}

impl RmParams {
    pub fn new(field: FieldParams, k: u32, m: u32, n: u32) -> Result<Self, PolyError> {
        if k == 0 {
            return Err(PolyError::ZeroDegree);
        }
        if k >= field.order() {
            return Err(PolyError::DegreeTooLarge {
                k,
                q: field.order(),
            });
        }
        if m == 0 {
            return Err(PolyError::NoVariables);
        }
        if n == 0 {
            return Err(PolyError::NoChallenges);
        }
        for (name, value) in [("m", m), ("n", n)] {
            if value > u16::MAX as u32 {
                return Err(PolyError::FieldWidth { name, value });
            }
        }
        Ok(Self { field, k, m, n })
    }

    /// Shorthand resolving `q` to its prime-power decomposition.
    pub fn from_order(q: u64, k: u32, m: u32, n: u32) -> Result<Self, PolyError> {
        Self::new(FieldParams::from_order(q)?, k, m, n)
    }

    /// Same code with a different number of challenges.
    pub fn with_challenges(self, n: u32) -> Result<Self, PolyError> {
        Self::new(self.field, self.k, self.m, n)
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `C(k + m, m)`, exact.
    pub fn num_coefficients(&self) -> BigUint {
        monomial_count_exact(self.k, self.m)
    }

    pub fn coefficient_count(&self) -> Result<usize, PolyError> {
        monomial_count(self.k, self.m)
    }
}

/// A polynomial of total degree at most `degree` in `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    degree: u32,
    vars: u32,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn new(degree: u32, vars: u32, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        if vars == 0 {
            return Err(PolyError::NoVariables);
        }
        let expected = monomial_count(degree, vars)?;
        if coeffs.len() != expected {
            return Err(PolyError::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            degree,
            vars,
            coeffs,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> u32 {
        self.vars
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.coeffs
    }

    fn check_point(&self, r: &[FieldElement]) -> Result<(), PolyError> {
        if r.len() != self.vars as usize {
            return Err(PolyError::DimensionMismatch {
                expected: self.vars as usize,
                got: r.len(),
            });
        }
        Ok(())
    }

    pub fn eval_naive(
        &self,
        ctx: &FieldCtx,
        r: &[FieldElement],
    ) -> Result<FieldElement, PolyError> {
        self.check_point(r)?;
        Ok(eval::naive(ctx, &self.coeffs, self.degree, r))
    }

    pub fn eval_recursive(
        &self,
        ctx: &FieldCtx,
        r: &[FieldElement],
    ) -> Result<FieldElement, PolyError> {
        self.eval_with(ctx, r)
    }

    /// Recursive evaluation through any [`Arith`], e.g. a [`CountingArith`].
    pub fn eval_with<A: Arith>(
        &self,
        arith: &A,
        r: &[FieldElement],
    ) -> Result<FieldElement, PolyError> {
        self.check_point(r)?;
        Ok(eval::recursive(arith, &self.coeffs, self.degree, r))
    }

    /// The block of coefficients with first exponent `k_prime`, as a
    /// polynomial of degree `degree - k_prime` in the remaining variables.
    pub fn partition(&self, k_prime: u32) -> Result<Polynomial, PolyError> {
        if self.vars < 2 {
            return Err(PolyError::NoVariables);
        }
        if k_prime > self.degree {
            return Err(PolyError::BadDegree {
                k_prime,
                k: self.degree,
            });
        }
        let inner = self.vars - 1;
        let offset: usize = (0..k_prime)
            .map(|j| monomial_count(self.degree - j, inner))
            .sum::<Result<usize, _>>()?;
        let len = monomial_count(self.degree - k_prime, inner)?;
        Polynomial::new(
            self.degree - k_prime,
            inner,
            self.coeffs[offset..offset + len].to_vec(),
        )
    }
}

/// One identity: a coefficient vector `w` of length `C(k+m, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    params: RmParams,
    poly: Polynomial,
}

impl Identity {
    /// Wraps coefficients, checking their number and range.
    pub fn new(params: RmParams, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        let q = params.q();
        if let Some(bad) = coeffs.iter().find(|w| w.index() as u32 >= q) {
            return Err(FieldError::ElementOutOfRange {
                index: bad.index() as u32,
                q,
            }
            .into());
        }
        let poly = Polynomial::new(params.k, params.m, coeffs)?;
        Ok(Self { params, poly })
    }

    pub fn zero(params: RmParams) -> Result<Self, PolyError> {
        Self::constant(params, FieldElement::ZERO)
    }

    pub fn constant(params: RmParams, c: FieldElement) -> Result<Self, PolyError> {
        let mut coeffs = vec![FieldElement::ZERO; params.coefficient_count()?];
        coeffs[0] = c;
        Self::new(params, coeffs)
    }

    pub fn params(&self) -> RmParams {
        self.params
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        self.poly.coefficients()
    }

    /// Same polynomial under a different challenge count.
    pub fn with_challenges(self, n: u32) -> Result<Self, PolyError> {
        Ok(Self {
            params: self.params.with_challenges(n)?,
            poly: self.poly,
        })
    }

    fn check_field(&self, ctx: &FieldCtx) -> Result<(), PolyError> {
        if ctx.params() != self.params.field {
            return Err(PolyError::FieldMismatch {
                identity: self.params.field,
                ctx: ctx.params(),
            });
        }
        Ok(())
    }
}

/// Reference evaluator: the monomial sum term by term.
pub fn eval_naive(
    ctx: &FieldCtx,
    id: &Identity,
    r: &[FieldElement],
) -> Result<FieldElement, PolyError> {
    id.check_field(ctx)?;
    id.poly.eval_naive(ctx, r)
}

/// Recursion-over-variables evaluator; the one used to compute tags.
pub fn eval_recursive(
    ctx: &FieldCtx,
    id: &Identity,
    r: &[FieldElement],
) -> Result<FieldElement, PolyError> {
    id.check_field(ctx)?;
    id.poly.eval_recursive(ctx, r)
}

/// Coefficient block `w_{k'}` of an identity.
pub fn coefficient_partition(id: &Identity, k_prime: u32) -> Result<Polynomial, PolyError> {
    id.poly.partition(k_prime)
}

/// Draws every coefficient i.i.d. uniform over the field.
pub fn sample_identity<R: RngCore + ?Sized>(
    ctx: &FieldCtx,
    params: RmParams,
    rng: &mut R,
) -> Result<Identity, PolyError> {
    sample_identity_within(ctx, params, rng, MAX_COEFFICIENTS)
}

/// [`sample_identity`] with an explicit coefficient budget.
pub fn sample_identity_within<R: RngCore + ?Sized>(
    ctx: &FieldCtx,
    params: RmParams,
    rng: &mut R,
    budget: usize,
) -> Result<Identity, PolyError> {
    if ctx.params() != params.field {
        return Err(PolyError::FieldMismatch {
            identity: params.field,
            ctx: ctx.params(),
        });
    }
    let count = params.coefficient_count()?;
    if count > budget {
        return Err(PolyError::ExceedsBudget { count, budget });
    }
    let coeffs = (0..count).map(|_| ctx.sample_uniform(rng)).collect();
    Identity::new(params, coeffs)
}
