//! Fixtures shared by the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rmid_core::{sample_identity, FieldCtx, FieldElement, Identity, RmParams};

/// Field orders swept by the operation benches.
pub const FIELD_SIZES: [u32; 5] = [16, 256, 257, 4096, 19683];

/// Identification codes over GF(256), smallest to largest.
pub const CODES: [(u32, u32); 6] = [(8, 2), (32, 2), (8, 3), (16, 3), (32, 3), (16, 4)];

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Two operand vectors of `len` uniform elements.
pub fn operands(ctx: &FieldCtx, len: usize, seed: u64) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let mut rng = rng(seed);
    let a = (0..len).map(|_| ctx.sample_uniform(&mut rng)).collect();
    let b = (0..len).map(|_| ctx.sample_uniform(&mut rng)).collect();
    (a, b)
}

/// A random identity and evaluation point for `RM_q(k, m)` with `n` challenges.
pub fn identity(
    ctx: &FieldCtx,
    k: u32,
    m: u32,
    n: u32,
    seed: u64,
) -> (Identity, Vec<FieldElement>) {
    let params = RmParams::new(ctx.params(), k, m, n).expect("valid code");
    let mut rng = rng(seed);
    let id = sample_identity(ctx, params, &mut rng).expect("identity fits in memory");
    let r = (0..m).map(|_| ctx.sample_uniform(&mut rng)).collect();
    (id, r)
}
