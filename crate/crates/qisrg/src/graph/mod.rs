//! General finite-graph machinery: bit-row adjacency, strong regularity,
//! distances, automorphism checks, independence numbers by branch and bound,
//! isomorphism testing with certificates, and graph6/DIMACS IO.

mod clique;
mod formats;
mod iso;

pub use clique::{count_cliques, independence_number, IndependenceMode, IndependenceOutcome};
pub use formats::{dimacs_decode, dimacs_encode, graph6_decode, graph6_encode, FormatError};
pub use iso::{are_isomorphic, color_refinement_histogram, IsoBudget, IsoOutcome, NonIsoCertificate, NonIsoReason};

use crate::exact::{rat, RationalMatrix};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {index} out of range for a graph on {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("loops are not allowed: edge ({0}, {0})")]
    Loop(usize),
    #[error("not a bijection on {n} vertices: {detail}")]
    NotABijection { n: usize, detail: String },
}

/// A finite simple graph on vertices `0..n`, with symmetric bit-row
/// adjacency and zero diagonal. Immutable after construction in practice;
/// mutation helpers are internal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        Graph {
            n,
            words_per_row,
            bits: vec![0; n.max(1) * words_per_row],
        }
    }

    /// Builds a graph from an undirected edge list. Loops and out-of-range
    /// indices are rejected, not silently fixed.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { index: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { index: v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (wu, bu) = (v / 64, v % 64);
        let (wv, bv) = (u / 64, u % 64);
        if present {
            self.bits[u * self.words_per_row + wu] |= 1 << bu;
            self.bits[v * self.words_per_row + wv] |= 1 << bv;
        } else {
            self.bits[u * self.words_per_row + wu] &= !(1 << bu);
            self.bits[v * self.words_per_row + wv] &= !(1 << bv);
        }
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }

    /// The bit row of vertex `u`.
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words_per_row..(u + 1) * self.words_per_row]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(u));
        for (wi, &w) in self.row(u).iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Self::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v, true);
                }
            }
        }
        g
    }

    /// The subgraph induced on `verts`, relabeled to `0..verts.len()` in the
    /// given order. Panics on out-of-range or repeated vertices.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let k = verts.len();
        let mut seen = vec![false; self.n];
        let mut g = Self::empty(k);
        for (i, &u) in verts.iter().enumerate() {
            assert!(u < self.n && !seen[u], "invalid induced vertex list");
            seen[u] = true;
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Adjacency matrix lifted to exact rationals.
    pub fn to_rational_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.n, self.n, |r, c| {
            if r != c && self.has_edge(r, c) {
                rat(1)
            } else {
                rat(0)
            }
        })
    }
}

/// Strongly regular parameters `(n, k, lambda, mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

/// Returns the strongly regular parameters iff the graph is regular and has
/// constant common-neighbor counts on edges and on non-adjacent distinct
/// pairs; `None` otherwise.
pub fn srg_parameters(g: &Graph) -> Option<SrgParams> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let k = g.degree(0);
    if (1..n).any(|v| g.degree(v) != k) {
        return None;
    }
    let mut lambda: Option<usize> = None;
    let mut mu: Option<usize> = None;
    for u in 0..n {
        for v in (u + 1)..n {
            let c = g.common_neighbors(u, v);
            let slot = if g.has_edge(u, v) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(c),
                Some(x) if *x == c => {}
                Some(_) => return None,
            }
        }
    }
    Some(SrgParams {
        n,
        k,
        lambda: lambda.unwrap_or(0),
        mu: mu.unwrap_or(0),
    })
}

/// Shortest-path length between `u` and `v` by breadth-first search;
/// `None` if unreachable.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<usize>, GraphError> {
    let n = g.n();
    for idx in [u, v] {
        if idx >= n {
            return Err(GraphError::VertexOutOfRange { index: idx, n });
        }
    }
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![usize::MAX; n];
    dist[u] = 0;
    let mut queue = std::collections::VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                if y == v {
                    return Ok(Some(dist[y]));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

/// True iff `perm` (as the map `v -> perm[v]`) preserves adjacency in both
/// directions. Errors if `perm` is not a bijection on the vertex set.
pub fn is_automorphism(g: &Graph, perm: &[usize]) -> Result<bool, GraphError> {
    check_bijection(g.n(), perm)?;
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if g.has_edge(u, v) != g.has_edge(perm[u], perm[v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff `map` is an isomorphism from `g` onto `h`.
pub fn is_isomorphism(g: &Graph, h: &Graph, map: &[usize]) -> Result<bool, GraphError> {
    if g.n() != h.n() {
        return Ok(false);
    }
    check_bijection(h.n(), map)?;
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if g.has_edge(u, v) != h.has_edge(map[u], map[v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_bijection(n: usize, perm: &[usize]) -> Result<(), GraphError> {
    if perm.len() != n {
        return Err(GraphError::NotABijection {
            n,
            detail: format!("length {} != {}", perm.len(), n),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(GraphError::NotABijection {
                n,
                detail: format!("image {p} out of range"),
            });
        }
        if seen[p] {
            return Err(GraphError::NotABijection {
                n,
                detail: format!("image {p} repeated"),
            });
        }
        seen[p] = true;
    }
    Ok(())
}
