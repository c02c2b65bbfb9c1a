//! graph6 text encoding.
//!
//! Layout: a size header (`n + 63` for `n <= 62`, otherwise `~` followed by
//! three 6-bit groups), then the upper triangle `x(0,1), x(0,2), x(1,2),
//! x(0,3), ...` packed big-endian into 6-bit groups, each offset by 63. The
//! final group is zero padded.

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet, MAX_ORDER};

/// Optional file header written by some generators.
pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is not a graph6 character")]
    NonPrintable { offset: usize, byte: u8 },
    #[error("malformed size header")]
    MalformedHeader,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(u64),
    #[error("payload has {found} bytes, expected {expected}")]
    PayloadLength { expected: usize, found: usize },
    #[error("padding bits in the final byte are not zero")]
    NonZeroPadding,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Encode a labelled graph.
pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + payload_len(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        for i in 0..j {
            group = group << 1 | row.contains(i) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    // every byte is in 63..=126
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Decode one record. A leading `>>graph6<<` header and trailing line
/// terminators are ignored.
pub fn decode(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some((offset, &byte)) = bytes.iter().enumerate().find(|(_, &b)| !(63..=126).contains(&b)) {
        return Err(Graph6Error::NonPrintable { offset, byte });
    }
    let (n, body) = parse_order(bytes)?;
    if n > MAX_ORDER as u64 {
        return Err(Graph6Error::TooLarge(n));
    }
    let n = n as usize;
    let expected = payload_len(n);
    if body.len() != expected {
        return Err(Graph6Error::PayloadLength { expected, found: body.len() });
    }
    let mut rows = vec![0u64; n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let group = body[bit / 6] - 63;
            if group >> (5 - bit % 6) & 1 == 1 {
                rows[i] |= 1u64 << j;
                rows[j] |= 1u64 << i;
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let pad_mask = (1u8 << (6 - bit % 6)) - 1;
        if (body[expected - 1] - 63) & pad_mask != 0 {
            return Err(Graph6Error::NonZeroPadding);
        }
    }
    if n == 0 {
        return Err(GraphError::OrderOutOfRange(0).into());
    }
    let g = Graph::from_rows(&rows)?;
    debug_assert!(g.vertices() == VertexSet::full(n));
    Ok(g)
}

fn parse_order(bytes: &[u8]) -> Result<(u64, &[u8]), Graph6Error> {
    let groups = |slice: &[u8]| slice.iter().fold(0u64, |acc, &b| acc << 6 | u64::from(b - 63));
    match bytes {
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Graph6Error::MalformedHeader);
            }
            Ok((groups(&rest[..6]), &rest[6..]))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::MalformedHeader);
            }
            Ok((groups(&rest[..3]), &rest[3..]))
        }
        [first, rest @ ..] => Ok((u64::from(first - 63), rest)),
        [] => Err(Graph6Error::Empty),
    }
}
