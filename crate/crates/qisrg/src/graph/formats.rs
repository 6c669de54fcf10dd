//! graph6 and DIMACS edge-list import/export, bit-exact per the public
//! format definitions.

use super::Graph;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("graph6: invalid byte 0x{byte:02x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6: input truncated at offset {offset}: expected {expected} more bytes")]
    Truncated { offset: usize, expected: usize },
    #[error("graph6: trailing data at offset {offset}")]
    TrailingData { offset: usize },
    #[error("graph6: graphs on more than 258047 vertices are not supported (n = {n})")]
    TooLarge { n: u64 },
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

/// Encodes a graph in graph6: the vertex count, then the upper triangle of
/// the adjacency matrix in column order, six bits per byte, offset by 63.
pub fn graph6_encode(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    } else {
        unreachable!("graphs this large are never constructed here");
    }
    let mut bit_acc: u8 = 0;
    let mut bit_count = 0;
    for col in 1..n {
        for row in 0..col {
            bit_acc = (bit_acc << 1) | u8::from(g.has_edge(row, col));
            bit_count += 1;
            if bit_count == 6 {
                out.push(bit_acc + 63);
                bit_acc = 0;
                bit_count = 0;
            }
        }
    }
    if bit_count > 0 {
        out.push((bit_acc << (6 - bit_count)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decodes a graph6 string; errors carry the byte offset of the problem.
pub fn graph6_decode(text: &str) -> Result<Graph, FormatError> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let mut pos = 0usize;
    let take = |pos: &mut usize| -> Result<u8, FormatError> {
        let b = *bytes.get(*pos).ok_or(FormatError::Truncated {
            offset: *pos,
            expected: 1,
        })?;
        if !(63..=126).contains(&b) {
            return Err(FormatError::InvalidByte { offset: *pos, byte: b });
        }
        *pos += 1;
        Ok(b)
    };
    let first = take(&mut pos)?;
    let n: u64 = if first != 126 {
        (first - 63) as u64
    } else {
        let second = take(&mut pos)?;
        if second == 126 {
            // 36-bit counts exist in the format but are beyond this tool
            return Err(FormatError::TooLarge { n: u64::MAX });
        }
        let b1 = (second - 63) as u64;
        let b2 = (take(&mut pos)? - 63) as u64;
        let b3 = (take(&mut pos)? - 63) as u64;
        (b1 << 12) | (b2 << 6) | b3
    };
    if n > 258_047 {
        return Err(FormatError::TooLarge { n });
    }
    let n = n as usize;
    let pair_bits = n * n.saturating_sub(1) / 2;
    let needed = pair_bits.div_ceil(6);
    if bytes.len() < pos + needed {
        return Err(FormatError::Truncated {
            offset: bytes.len(),
            expected: pos + needed - bytes.len(),
        });
    }
    let mut g = Graph::empty(n);
    let mut bit_index = 0usize;
    for _ in 0..needed {
        let b = take(&mut pos)? - 63;
        for k in 0..6 {
            if bit_index >= pair_bits {
                break;
            }
            if (b >> (5 - k)) & 1 == 1 {
                let (row, col) = pair_from_index(bit_index);
                g.set_edge(row, col, true);
            }
            bit_index += 1;
        }
    }
    if pos != bytes.len() {
        return Err(FormatError::TrailingData { offset: pos });
    }
    Ok(g)
}

/// Inverse of the column-order bit layout: bit i corresponds to the pair
/// (row, col) with col minimal such that col(col-1)/2 > i.
fn pair_from_index(i: usize) -> (usize, usize) {
    let mut col = 1usize;
    while col * (col + 1) / 2 <= i {
        col += 1;
    }
    let row = i - col * (col - 1) / 2;
    (row, col)
}

/// DIMACS edge format: a `p edge n m` header and one `e u v` line per edge,
/// 1-indexed.
pub fn dimacs_encode(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p edge {} {}\n", g.n(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn dimacs_decode(text: &str) -> Result<Graph, FormatError> {
    let mut g: Option<Graph> = None;
    let mut declared_edges = 0usize;
    let mut seen_edges = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if g.is_some() {
                    return Err(FormatError::Dimacs {
                        line,
                        message: "duplicate problem line".into(),
                    });
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(FormatError::Dimacs {
                        line,
                        message: format!("expected 'p edge <n> <m>', got {l:?}"),
                    });
                }
                let n: usize = fields[2].parse().map_err(|_| FormatError::Dimacs {
                    line,
                    message: format!("bad vertex count {:?}", fields[2]),
                })?;
                declared_edges = fields[3].parse().map_err(|_| FormatError::Dimacs {
                    line,
                    message: format!("bad edge count {:?}", fields[3]),
                })?;
                g = Some(Graph::empty(n));
            }
            "e" => {
                let graph = g.as_mut().ok_or(FormatError::Dimacs {
                    line,
                    message: "edge before problem line".into(),
                })?;
                if fields.len() != 3 {
                    return Err(FormatError::Dimacs {
                        line,
                        message: format!("expected 'e <u> <v>', got {l:?}"),
                    });
                }
                let parse = |s: &str| -> Result<usize, FormatError> {
                    let v: usize = s.parse().map_err(|_| FormatError::Dimacs {
                        line,
                        message: format!("bad vertex {s:?}"),
                    })?;
                    if v == 0 || v > graph.n() {
                        return Err(FormatError::Dimacs {
                            line,
                            message: format!("vertex {v} out of range 1..={}", graph.n()),
                        });
                    }
                    Ok(v - 1)
                };
                let u = parse(fields[1])?;
                let v = parse(fields[2])?;
                if u == v {
                    return Err(FormatError::Dimacs {
                        line,
                        message: format!("loop at vertex {}", u + 1),
                    });
                }
                graph.set_edge(u, v, true);
                seen_edges += 1;
            }
            other => {
                return Err(FormatError::Dimacs {
                    line,
                    message: format!("unknown record {other:?}"),
                });
            }
        }
    }
    let graph = g.ok_or(FormatError::Dimacs {
        line: 0,
        message: "missing problem line".into(),
    })?;
    if seen_edges != declared_edges {
        return Err(FormatError::Dimacs {
            line: 0,
            message: format!("header declared {declared_edges} edges, found {seen_edges}"),
        });
    }
    Ok(graph)
}
