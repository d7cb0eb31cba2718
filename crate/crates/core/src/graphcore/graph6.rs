use thiserror::Error;

use super::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty input")]
    Empty,
    #[error("malformed vertex-count header")]
    BadHeader,
    #[error("byte {0:#04x} at offset {1} is outside the graph6 range")]
    BadByte(u8, usize),
    #[error("expected {expected} data bytes, found {found}")]
    Length { expected: usize, found: usize },
    #[error("nonzero padding bits")]
    Padding,
    #[error("graph with {0} vertices is too large")]
    TooLarge(u64),
}

const MAX_VERTICES: u64 = (1 << 36) - 1;

fn encode_n(n: u64, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// Standard graph6 encoding (no trailing newline).
pub fn encode_graph6(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::new();
    encode_n(n as u64, &mut out);
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    out
}

/// Decodes one graph6 string. A single trailing newline is accepted; any
/// other trailing byte is an error.
pub fn decode_graph6(bytes: &[u8]) -> Result<Graph, Graph6Error> {
    let bytes = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte(b, i));
        }
    }
    let six = |s: &[u8]| s.iter().fold(0u64, |acc, &b| (acc << 6) | (b - 63) as u64);
    let (n, rest) = if bytes[0] != 126 {
        (six(&bytes[..1]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(Graph6Error::BadHeader);
        }
        let n = six(&bytes[2..8]);
        if n <= 258_047 {
            return Err(Graph6Error::BadHeader);
        }
        (n, &bytes[8..])
    } else {
        if bytes.len() < 4 {
            return Err(Graph6Error::BadHeader);
        }
        let n = six(&bytes[1..4]);
        if n <= 62 {
            return Err(Graph6Error::BadHeader);
        }
        (n, &bytes[4..])
    };
    if n > MAX_VERTICES || n > usize::MAX as u64 {
        return Err(Graph6Error::TooLarge(n));
    }
    let n = n as usize;
    let total_bits = n * n.saturating_sub(1) / 2;
    let expected = total_bits.div_ceil(6);
    if rest.len() != expected {
        return Err(Graph6Error::Length { expected, found: rest.len() });
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if total_bits % 6 != 0 {
        let last = rest[expected - 1] - 63;
        let pad = 6 - total_bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::Padding);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        assert_eq!(encode_graph6(&Graph::empty(1)), b"@");
        assert_eq!(encode_graph6(&Graph::complete(2)), b"A_");
        assert_eq!(encode_graph6(&Graph::cycle(5)), b"Dhc");
        assert_eq!(encode_graph6(&Graph::empty(0)), b"?");
    }

    #[test]
    fn long_headers() {
        let g = Graph::cycle(100);
        let e = encode_graph6(&g);
        assert_eq!(&e[..4], &[126, 63, 64, 99]);
        assert_eq!(decode_graph6(&e).unwrap(), g);
        let mut buf = Vec::new();
        encode_n(300_000, &mut buf);
        assert_eq!(buf.len(), 8);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(decode_graph6(b""), Err(Graph6Error::Empty));
        assert_eq!(decode_graph6(b"A_x"), Err(Graph6Error::Length { expected: 1, found: 2 }));
        assert_eq!(decode_graph6(b"A_\n\n"), Err(Graph6Error::BadByte(b'\n', 2)));
        assert_eq!(decode_graph6(b"A`"), Err(Graph6Error::Padding));
        assert_eq!(decode_graph6(b"~??"), Err(Graph6Error::BadHeader));
        assert!(decode_graph6(b"A_\n").is_ok());
    }
}
