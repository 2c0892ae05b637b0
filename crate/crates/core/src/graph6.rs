//! graph6 encoding: `N(n)` header followed by the upper triangle of the
//! adjacency matrix, column by column, packed big-endian into 6-bit groups
//! offset by 63.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};

const HEADER: &str = ">>graph6<<";

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

pub fn decode(text: &str) -> Result<Graph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::MalformedGraph6(format!("byte {b:#04x} outside the printable range")));
    }
    let (n, body) = match bytes {
        [] => return Err(Error::MalformedGraph6("empty input".into())),
        [126, 126, ..] => {
            return Err(Error::MalformedGraph6("orders beyond 258047 are not supported".into()))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::MalformedGraph6("truncated order header".into()));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
            (n, &rest[3..])
        }
        [b, rest @ ..] => ((b - 63) as usize, rest),
    };
    if n == 0 {
        return Err(Error::MalformedGraph6("order zero".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::OrderOverflow { order: n, max: MAX_ORDER });
    }
    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    if body.len() < need {
        return Err(Error::MalformedGraph6(format!(
            "truncated bit stream: expected {need} data bytes, found {}",
            body.len()
        )));
    }
    if body.len() > need {
        return Err(Error::MalformedGraph6(format!(
            "{} trailing bytes after the bit stream",
            body.len() - need
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}
