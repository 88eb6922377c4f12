//! Reed-Muller identification codes over small finite fields.
//!
//! An identity is a polynomial of total degree at most `k` in `m` variables
//! over GF(q). To identify, the sender transmits a random point `r` together
//! with the polynomial's value there; a receiver checks the value against
//! its own polynomial. Only `(m + 1) log q` bits travel per challenge while
//! there are `q^C(k+m, m)` identities.
//!
//! - [`gf`]: table-driven field arithmetic for `q < 2^16`
//! - [`rmpoly`]: monomial order, identities and polynomial evaluation
//! - [`ident`]: challenges, verification, code parameters, byte formats
//! - [`capacity`]: the capacity conditions along the `q = 2^(t^2)` family
//! - [`costmodel`]: exact operation counts of the recursive evaluator
//! - [`bench`]: timing harness and CSV output

pub mod bench;
pub mod capacity;
pub mod combinatorics;
pub mod costmodel;
pub mod gf;
pub mod ident;
pub mod rmpoly;

pub use gf::{build_field, FieldCtx, FieldElement, FieldError, FieldParams};
pub use ident::{
    issue_challenges, report, verify, Challenge, CodeReport, IdentError, MultiChallenge,
    VerificationResult, WireError,
};
pub use rmpoly::{
    coefficient_partition, enumerate_monomials, eval_naive, eval_recursive, sample_identity,
    Identity, Monomial, PolyError, Polynomial, RmParams,
};
