//! Identification by randomness-tag pairs.
//!
//! The sender of identity `w` draws randomness `r` uniformly from GF(q)^m and
//! transmits `(r, p_w(r))`. A receiver interested in identity `w'` recomputes
//! `p_w'(r)` and accepts on equality. The issuing identity is always
//! accepted; a different identity is accepted for at most a `k/q` fraction of
//! randomness values, and with `n` independent challenges that must all pass
//! the bound becomes `(k/q)^n`.

mod report;
mod wire;

use rand::RngCore;
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};
use crate::rmpoly::{eval_recursive, Identity, PolyError, RmParams};

pub use report::{report, BlockParams, CodeReport};
pub use wire::{
    decode_identity, decode_record, decode_wire, decode_wire_for, encode_identity,
    encode_identity_text, encode_wire, encode_wire_text, Record, RecordKind, WireError,
    IDENTITY_HEADER_LEN, MAGIC, VERSION, WIRE_HEADER_LEN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentError {
    #[error("challenge set is for {got} but the identity has {expected}")]
    ParameterMismatch { expected: RmParams, got: RmParams },
    #[error("challenge carries {got} randomness values, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A randomness vector `r` and the tag `t = p_w(r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Challenge {
    randomness: Vec<FieldElement>,
    tag: FieldElement,
}

impl Challenge {
    /// Computes the tag of `id` at `randomness`.
    pub fn issue(
        ctx: &FieldCtx,
        id: &Identity,
        randomness: Vec<FieldElement>,
    ) -> Result<Self, IdentError> {
        let tag = eval_recursive(ctx, id, &randomness)?;
        Ok(Self { randomness, tag })
    }

    /// Reassembles a received challenge; the tag is taken as given.
    pub fn from_parts(randomness: Vec<FieldElement>, tag: FieldElement) -> Self {
        Self { randomness, tag }
    }

    pub fn randomness(&self) -> &[FieldElement] {
        &self.randomness
    }

    pub fn tag(&self) -> FieldElement {
        self.tag
    }
}

/// The `n` challenges sent for one identification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiChallenge {
    params: RmParams,
    challenges: Vec<Challenge>,
}

impl MultiChallenge {
    /// Checks that there are `params.n()` challenges with `params.m()`
    /// randomness values each.
    pub fn new(params: RmParams, challenges: Vec<Challenge>) -> Result<Self, IdentError> {
        if challenges.len() != params.n() as usize {
            return Err(IdentError::DimensionMismatch {
                expected: params.n() as usize,
                got: challenges.len(),
            });
        }
        if let Some(c) = challenges
            .iter()
            .find(|c| c.randomness.len() != params.m() as usize)
        {
            return Err(IdentError::DimensionMismatch {
                expected: params.m() as usize,
                got: c.randomness.len(),
            });
        }
        Ok(Self { params, challenges })
    }

    pub fn params(&self) -> RmParams {
        self.params
    }

    pub fn challenges(&self) -> &[Challenge] {
        &self.challenges
    }

    pub fn len(&self) -> usize {
        self.challenges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.challenges.is_empty()
    }
}

/// Outcome of checking every challenge against one identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationResult {
    pub accepted: bool,
    pub per_challenge: Vec<bool>,
}

/// Draws `n = id.params().n()` challenges with i.i.d. uniform randomness.
pub fn issue_challenges<R: RngCore + ?Sized>(
    ctx: &FieldCtx,
    id: &Identity,
    rng: &mut R,
) -> Result<MultiChallenge, IdentError> {
    let params = id.params();
    let m = params.m() as usize;
    let challenges = (0..params.n())
        .map(|_| {
            let r: Vec<FieldElement> = (0..m).map(|_| ctx.sample_uniform(rng)).collect();
            Challenge::issue(ctx, id, r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    MultiChallenge::new(params, challenges)
}

/// Recomputes every tag for `id`; accepts only if all match.
///
/// The challenge count may differ from `id.params().n()`, but the field,
/// degree and number of variables must agree.
pub fn verify(
    ctx: &FieldCtx,
    id: &Identity,
    mc: &MultiChallenge,
) -> Result<VerificationResult, IdentError> {
    let expected = id.params();
    let got = mc.params();
    if (expected.field(), expected.k(), expected.m()) != (got.field(), got.k(), got.m()) {
        return Err(IdentError::ParameterMismatch { expected, got });
    }
    let per_challenge = mc
        .challenges
        .iter()
        .map(|c| Ok(eval_recursive(ctx, id, &c.randomness)? == c.tag))
        .collect::<Result<Vec<bool>, IdentError>>()?;
    Ok(VerificationResult {
        accepted: per_challenge.iter().all(|&ok| ok),
        per_challenge,
    })
}
