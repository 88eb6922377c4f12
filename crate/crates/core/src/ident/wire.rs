//! Byte formats for identities and challenge sets.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! "RMID" | version u8 = 1 | kind u8 | p u16 | d u8 | k u16 | m u16 | [n u16] | elements u16...
//! ```
//!
//! Kind 1 is an identity followed by its `C(k+m, m)` coefficients. Kind 2 is
//! a challenge set with `n` records of `m` randomness elements and one tag.
//!
//! The text form is a comma-separated header line `RMID,1,<kind>,p,d,k,m[,n]`
//! followed by one line per coefficient or per challenge.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Challenge, MultiChallenge};
use crate::gf::{FieldElement, FieldParams};
use crate::rmpoly::{Identity, PolyError, RmParams};

pub const MAGIC: &[u8; 4] = b"RMID";
pub const VERSION: u8 = 1;
/// Bytes before the coefficients of an identity record.
pub const IDENTITY_HEADER_LEN: usize = 13;
/// Bytes before the challenge records of a challenge set.
pub const WIRE_HEADER_LEN: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum RecordKind {
    Identity = 1,
    ChallengeSet = 2,
}

impl RecordKind {
    fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(Self::Identity),
            2 => Some(Self::ChallengeSet),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::ChallengeSet => "challenges",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated payload: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },
    #[error("{0} unexpected bytes after the payload")]
    TrailingBytes(usize),
    #[error("record holds {got}, expected {expected}")]
    ParameterMismatch { expected: RmParams, got: RmParams },
    #[error("expected a {expected} record")]
    WrongKind { expected: &'static str },
    #[error("element {index} at position {position} is not below q = {q}")]
    InvalidElement { index: u32, position: usize, q: u32 },
    #[error("invalid parameters in header: {0}")]
    InvalidParams(#[from] PolyError),
}

/// A decoded record of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    Identity(Identity),
    Challenges(MultiChallenge),
}

fn put_header(out: &mut Vec<u8>, kind: RecordKind, params: RmParams) {
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(kind as u8);
    out.extend_from_slice(&params.field().to_bytes());
    out.extend_from_slice(&(params.k() as u16).to_le_bytes());
    out.extend_from_slice(&(params.m() as u16).to_le_bytes());
}

fn put_elements<'a>(out: &mut Vec<u8>, elements: impl IntoIterator<Item = &'a FieldElement>) {
    for e in elements {
        out.extend_from_slice(&e.to_le_bytes());
    }
}

pub fn encode_identity(id: &Identity) -> Vec<u8> {
    let coeffs = id.coefficients();
    let mut out = Vec::with_capacity(IDENTITY_HEADER_LEN + 2 * coeffs.len());
    put_header(&mut out, RecordKind::Identity, id.params());
    put_elements(&mut out, coeffs);
    out
}

/// Encodes a challenge set; the payload is `n (m + 1)` elements of 2 bytes.
pub fn encode_wire(mc: &MultiChallenge) -> Vec<u8> {
    let params = mc.params();
    let mut out = Vec::with_capacity(WIRE_HEADER_LEN + mc.len() * (params.m() as usize + 1) * 2);
    put_header(&mut out, RecordKind::ChallengeSet, params);
    out.extend_from_slice(&(params.n() as u16).to_le_bytes());
    for c in mc.challenges() {
        put_elements(&mut out, c.randomness());
        out.extend_from_slice(&c.tag().to_le_bytes());
    }
    out
}

struct Header {
    kind: RecordKind,
    field: FieldParams,
    k: u32,
    m: u32,
}

fn u16_at(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn read_header(bytes: &[u8]) -> Result<Header, WireError> {
    if bytes.len() < IDENTITY_HEADER_LEN {
        if bytes.len() >= 4 && &bytes[..4] == MAGIC {
            return Err(WireError::TruncatedPayload {
                expected: IDENTITY_HEADER_LEN,
                got: bytes.len(),
            });
        }
        return Err(WireError::MalformedHeader("too short for a header".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(WireError::MalformedHeader("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(WireError::MalformedHeader(format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let kind = RecordKind::from_byte(bytes[5])
        .ok_or_else(|| WireError::MalformedHeader(format!("unknown record type {}", bytes[5])))?;
    let field = FieldParams::from_bytes([bytes[6], bytes[7], bytes[8]])
        .map_err(|e| WireError::MalformedHeader(e.to_string()))?;
    Ok(Header {
        kind,
        field,
        k: u16_at(bytes, 9) as u32,
        m: u16_at(bytes, 11) as u32,
    })
}

fn read_elements(
    bytes: &[u8],
    q: u32,
    count: usize,
    base_position: usize,
) -> Result<Vec<FieldElement>, WireError> {
    bytes
        .chunks_exact(2)
        .take(count)
        .enumerate()
        .map(|(i, pair)| {
            let index = u16::from_le_bytes([pair[0], pair[1]]);
            if index as u32 >= q {
                Err(WireError::InvalidElement {
                    index: index as u32,
                    position: base_position + i,
                    q,
                })
            } else {
                Ok(FieldElement::from_index(index))
            }
        })
        .collect()
}

fn check_length(payload: &[u8], expected: usize) -> Result<(), WireError> {
    match payload.len() {
        len if len < expected => Err(WireError::TruncatedPayload { expected, got: len }),
        len if len > expected => Err(WireError::TrailingBytes(len - expected)),
        _ => Ok(()),
    }
}

fn decode_binary(bytes: &[u8]) -> Result<Record, WireError> {
    let header = read_header(bytes)?;
    match header.kind {
        RecordKind::Identity => {
            let params = RmParams::new(header.field, header.k, header.m, 1)?;
            let count = params.coefficient_count()?;
            let payload = &bytes[IDENTITY_HEADER_LEN..];
            let expected = count.checked_mul(2).ok_or(PolyError::OverflowingCount {
                k: header.k,
                m: header.m,
            })?;
            check_length(payload, expected)?;
            let coeffs = read_elements(payload, params.q(), count, 0)?;
            Ok(Record::Identity(Identity::new(params, coeffs)?))
        }
        RecordKind::ChallengeSet => {
            if bytes.len() < WIRE_HEADER_LEN {
                return Err(WireError::TruncatedPayload {
                    expected: WIRE_HEADER_LEN,
                    got: bytes.len(),
                });
            }
            let n = u16_at(bytes, 13) as u32;
            let params = RmParams::new(header.field, header.k, header.m, n)?;
            let per = params.m() as usize + 1;
            let payload = &bytes[WIRE_HEADER_LEN..];
            check_length(payload, n as usize * per * 2)?;
            let elements = read_elements(payload, params.q(), n as usize * per, 0)?;
            let challenges = elements
                .chunks_exact(per)
                .map(|rec| Challenge::from_parts(rec[..per - 1].to_vec(), rec[per - 1]))
                .collect();
            Ok(Record::Challenges(MultiChallenge { params, challenges }))
        }
    }
}

fn malformed(msg: impl Into<String>) -> WireError {
    WireError::MalformedHeader(msg.into())
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str) -> Result<T, WireError> {
    field
        .trim()
        .parse()
        .map_err(|_| malformed(format!("cannot parse {what} from {field:?}")))
}

fn decode_text(text: &str) -> Result<Record, WireError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head: Vec<&str> = lines
        .next()
        .ok_or_else(|| malformed("empty input"))?
        .split(',')
        .map(str::trim)
        .collect();
    if head.len() < 7 || head[0] != "RMID" {
        return Err(malformed("bad text header"));
    }
    if parse_num::<u8>(head[1], "version")? != VERSION {
        return Err(malformed(format!("unsupported version {}", head[1])));
    }
    let field = FieldParams::new(parse_num(head[3], "p")?, parse_num(head[4], "d")?)
        .map_err(|e| malformed(e.to_string()))?;
    let (k, m): (u32, u32) = (parse_num(head[5], "k")?, parse_num(head[6], "m")?);
    let q = field.order();
    let parse_element = |s: &str, position: usize| -> Result<FieldElement, WireError> {
        let index: u32 = parse_num(s, "element")?;
        if index >= q {
            return Err(WireError::InvalidElement { index, position, q });
        }
        Ok(FieldElement::from_index(index as u16))
    };
    match head[2] {
        "identity" => {
            let params = RmParams::new(field, k, m, 1)?;
            let count = params.coefficient_count()?;
            let coeffs = lines
                .enumerate()
                .map(|(i, l)| parse_element(l, i))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() < count {
                return Err(WireError::TruncatedPayload {
                    expected: count,
                    got: coeffs.len(),
                });
            }
            if coeffs.len() > count {
                return Err(WireError::TrailingBytes(coeffs.len() - count));
            }
            Ok(Record::Identity(Identity::new(params, coeffs)?))
        }
        "challenges" => {
            let n: u32 = parse_num(head.get(7).ok_or_else(|| malformed("missing n"))?, "n")?;
            let params = RmParams::new(field, k, m, n)?;
            let mut challenges = Vec::with_capacity(n as usize);
            for (i, line) in lines.enumerate() {
                let elements = line
                    .split(',')
                    .enumerate()
                    .map(|(j, s)| parse_element(s, i * (m as usize + 1) + j))
                    .collect::<Result<Vec<_>, _>>()?;
                if elements.len() != m as usize + 1 {
                    return Err(malformed(format!(
                        "challenge line {} has {} fields",
                        i + 1,
                        elements.len()
                    )));
                }
                challenges.push(Challenge::from_parts(
                    elements[..m as usize].to_vec(),
                    elements[m as usize],
                ));
            }
            if challenges.len() < n as usize {
                return Err(WireError::TruncatedPayload {
                    expected: n as usize,
                    got: challenges.len(),
                });
            }
            if challenges.len() > n as usize {
                return Err(WireError::TrailingBytes(challenges.len() - n as usize));
            }
            Ok(Record::Challenges(MultiChallenge { params, challenges }))
        }
        other => Err(malformed(format!("unknown record type {other:?}"))),
    }
}

/// Decodes either record kind, in binary or text form.
pub fn decode_record(bytes: &[u8]) -> Result<Record, WireError> {
    if bytes.starts_with(b"RMID,") {
        let text = std::str::from_utf8(bytes).map_err(|_| malformed("text record is not UTF-8"))?;
        decode_text(text)
    } else {
        decode_binary(bytes)
    }
}

pub fn decode_identity(bytes: &[u8]) -> Result<Identity, WireError> {
    match decode_record(bytes)? {
        Record::Identity(id) => Ok(id),
        Record::Challenges(_) => Err(WireError::WrongKind {
            expected: RecordKind::Identity.name(),
        }),
    }
}

pub fn decode_wire(bytes: &[u8]) -> Result<MultiChallenge, WireError> {
    match decode_record(bytes)? {
        Record::Challenges(mc) => Ok(mc),
        Record::Identity(_) => Err(WireError::WrongKind {
            expected: RecordKind::ChallengeSet.name(),
        }),
    }
}

/// [`decode_wire`], rejecting a header whose field, `k` or `m` differ from
/// `expected`.
pub fn decode_wire_for(bytes: &[u8], expected: RmParams) -> Result<MultiChallenge, WireError> {
    let mc = decode_wire(bytes)?;
    let got = mc.params();
    if (got.field(), got.k(), got.m()) != (expected.field(), expected.k(), expected.m()) {
        return Err(WireError::ParameterMismatch { expected, got });
    }
    Ok(mc)
}

fn text_header(kind: RecordKind, params: RmParams) -> String {
    let f = params.field();
    format!(
        "RMID,{VERSION},{},{},{},{},{}",
        kind.name(),
        f.characteristic(),
        f.degree(),
        params.k(),
        params.m()
    )
}

pub fn encode_identity_text(id: &Identity) -> String {
    let mut out = text_header(RecordKind::Identity, id.params());
    out.push('\n');
    for w in id.coefficients() {
        let _ = writeln!(out, "{w}");
    }
    out
}

pub fn encode_wire_text(mc: &MultiChallenge) -> String {
    let mut out = text_header(RecordKind::ChallengeSet, mc.params());
    let _ = writeln!(out, ",{}", mc.params().n());
    for c in mc.challenges() {
        for r in c.randomness() {
            let _ = write!(out, "{r},");
        }
        let _ = writeln!(out, "{}", c.tag());
    }
    out
}
