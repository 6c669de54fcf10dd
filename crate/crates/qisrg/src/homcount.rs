//! Exact homomorphism counting from small pattern graphs, pattern
//! enumeration up to isomorphism with planarity flags, and the profile
//! comparison that checks two target graphs against every connected planar
//! pattern up to a size cap.
//!
//! Counting runs over an elimination order of the pattern; the boundary
//! tables are dense arrays indexed by images of at most three pattern
//! vertices (the treewidth of connected planar patterns on up to six
//! vertices), with conditioning on a vertex image when a pattern is denser
//! than that. Complete patterns short-circuit to ordered clique counts.

use crate::graph::{count_cliques, graph6_encode, Graph};
use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("pattern has {n} vertices, the cap is {cap}")]
    PatternTooLarge { n: usize, cap: usize },
    #[error("counts for {pattern_vertices} pattern vertices into {target_vertices} target vertices may overflow the 64-bit tables")]
    CountOverflow {
        pattern_vertices: usize,
        target_vertices: usize,
    },
}

pub const ENUMERATION_CAP: usize = 7;
pub const PLANARITY_CAP: usize = 8;

/// A connected pattern up to isomorphism, in canonical form.
#[derive(Debug, Clone, Serialize)]
pub struct PatternGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// graph6 encoding of the canonical representative
    pub graph6: String,
    pub vertices: usize,
    pub connected: bool,
    pub planar: bool,
}

/// Small-graph adjacency as one bitmask per vertex.
fn masks(g: &Graph) -> Vec<u8> {
    (0..g.n())
        .map(|v| {
            let mut m = 0u8;
            for u in g.neighbors(v) {
                m |= 1 << u;
            }
            m
        })
        .collect()
}

fn is_connected_masks(adj: &[u8], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut reached: u8 = 1;
    loop {
        let mut next = reached;
        let mut bits = reached;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= adj[v];
        }
        if next == reached {
            break;
        }
        reached = next;
    }
    reached.count_ones() as usize == n
}

/// Canonical form of a graph on at most 7 vertices: the lexicographically
/// least upper-triangle bit string over all vertex orderings, found by
/// backtracking with prefix pruning.
fn canonical_key(adj: &[u8], n: usize) -> u64 {
    let total_bits: u32 = (n * (n - 1) / 2) as u32;
    let mut best = u64::MAX >> (64 - total_bits.max(1));
    let mut used = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);

    fn rec(
        adj: &[u8],
        n: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        prefix: u64,
        bits_so_far: u32,
        total_bits: u32,
        best: &mut u64,
    ) {
        let p = order.len();
        if p == n {
            if prefix < *best {
                *best = prefix;
            }
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // adjacency bits of v against the already placed vertices
            let mut bits: u64 = 0;
            for &u in order.iter() {
                bits = (bits << 1) | u64::from(adj[v] >> u & 1 == 1);
            }
            let new_prefix = (prefix << p) | bits;
            let new_bits = bits_so_far + p as u32;
            // lexicographic prefix pruning against the best complete key
            if new_bits > 0 && new_prefix > (*best >> (total_bits - new_bits)) {
                continue;
            }
            used[v] = true;
            order.push(v);
            rec(adj, n, used, order, new_prefix, new_bits, total_bits, best);
            order.pop();
            used[v] = false;
        }
    }

    if n <= 1 {
        return 0;
    }
    rec(adj, n, &mut used, &mut order, 0, 0, total_bits, &mut best);
    best
}

/// Rebuilds the graph encoded by a canonical key.
fn graph_from_key(key: u64, n: usize) -> Graph {
    let mut g = Graph::empty(n);
    let total_bits = n * (n - 1) / 2;
    let mut bit = total_bits;
    for p in 1..n {
        for u in 0..p {
            bit -= 1;
            if key >> bit & 1 == 1 {
                g.set_edge(u, p, true);
            }
        }
    }
    g
}

/// Whether the graph contains a minor with the given branch-set adjacency
/// requirements: `pattern_edges` over `parts` branch sets. Every vertex is
/// assigned to one part or none; parts must be nonempty, induce connected
/// subgraphs, and have an edge for every pattern edge.
fn has_minor(adj: &[u8], n: usize, parts: usize, pattern_edges: &[(usize, usize)]) -> bool {
    let mut assignment = vec![usize::MAX; n];

    fn feasible(adj: &[u8], assignment: &[usize], parts: usize, edges: &[(usize, usize)]) -> bool {
        let mut part_mask = vec![0u8; parts];
        for (v, &p) in assignment.iter().enumerate() {
            if p != usize::MAX {
                part_mask[p] |= 1 << v;
            }
        }
        if part_mask.iter().any(|&m| m == 0) {
            return false;
        }
        // each part connected
        for &m in &part_mask {
            let start = m.trailing_zeros() as usize;
            let mut reached: u8 = 1 << start;
            loop {
                let mut next = reached;
                let mut bits = reached;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    next |= adj[v] & m;
                }
                if next == reached {
                    break;
                }
                reached = next;
            }
            if reached != m {
                return false;
            }
        }
        // each pattern edge realized between the parts
        for &(a, b) in edges {
            let mut hit = false;
            let mut bits = part_mask[a];
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if adj[v] & part_mask[b] != 0 {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return false;
            }
        }
        true
    }

    fn rec(
        adj: &[u8],
        n: usize,
        parts: usize,
        edges: &[(usize, usize)],
        assignment: &mut Vec<usize>,
        v: usize,
    ) -> bool {
        if v == n {
            return feasible(adj, assignment, parts, edges);
        }
        // not enough vertices left for the still-empty parts
        let mut empty = 0;
        for p in 0..parts {
            if !assignment[..v].contains(&p) {
                empty += 1;
            }
        }
        if empty > n - v {
            return false;
        }
        for p in 0..parts {
            assignment[v] = p;
            if rec(adj, n, parts, edges, assignment, v + 1) {
                return true;
            }
        }
        assignment[v] = usize::MAX;
        rec(adj, n, parts, edges, assignment, v + 1)
    }

    rec(adj, n, parts, pattern_edges, &mut assignment, 0)
}

/// Planarity for graphs on at most eight vertices: the edge-count filter
/// `m <= 3n - 6`, then exhaustive search for a 5-clique or 3,3-biclique
/// minor.
pub fn is_planar_small(g: &Graph) -> Result<bool, HomError> {
    let n = g.n();
    if n > PLANARITY_CAP {
        return Err(HomError::PatternTooLarge {
            n,
            cap: PLANARITY_CAP,
        });
    }
    if n < 5 {
        return Ok(true);
    }
    if g.edge_count() > 3 * n - 6 {
        return Ok(false);
    }
    let adj = masks(g);
    let k5_edges: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))
        .collect();
    if has_minor(&adj, n, 5, &k5_edges) {
        return Ok(false);
    }
    let k33_edges: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    if has_minor(&adj, n, 6, &k33_edges) {
        return Ok(false);
    }
    Ok(true)
}

/// All connected graphs with up to `n_max` vertices, one canonical
/// representative per isomorphism class, each with its planarity flag.
/// Counts per size are 1, 1, 2, 6, 21, 112, 853.
pub fn enumerate_connected_graphs(n_max: usize) -> Result<Vec<PatternGraph>, HomError> {
    if n_max == 0 || n_max > ENUMERATION_CAP {
        return Err(HomError::PatternTooLarge {
            n: n_max,
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .collect();
        let mut seen = std::collections::HashSet::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut adj = vec![0u8; n];
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
            if !is_connected_masks(&adj, n) {
                continue;
            }
            let key = canonical_key(&adj, n);
            if !seen.insert(key) {
                continue;
            }
            let graph = graph_from_key(key, n);
            let planar = is_planar_small(&graph)?;
            out.push(PatternGraph {
                graph6: graph6_encode(&graph),
                vertices: n,
                connected: true,
                planar,
                graph,
            });
        }
    }
    Ok(out)
}

/// Adjacency bitset rows of the target, in plain u64 words.
struct TargetAdj {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl TargetAdj {
    fn new(g: &Graph) -> TargetAdj {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for v in 0..n {
            for u in g.neighbors(v) {
                rows[v * words + u / 64] |= 1 << (u % 64);
            }
        }
        TargetAdj { n, words, rows }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
}

/// A dense factor over a sorted scope of pattern vertices; the table is
/// indexed mixed-radix with scope[0] as the least significant digit.
struct Factor {
    scope: Vec<usize>,
    table: Vec<u64>,
}

/// Exact number of adjacency-preserving maps from `h` into `g`. The pattern
/// cap is 7 vertices; counts are returned as big integers but must fit the
/// internal 64-bit tables, which holds whenever `g.n()^h.n() < 2^64`.
pub fn hom_count(h: &Graph, g: &Graph) -> Result<BigUint, HomError> {
    let hn = h.n();
    if hn > ENUMERATION_CAP {
        return Err(HomError::PatternTooLarge {
            n: hn,
            cap: ENUMERATION_CAP,
        });
    }
    // counts and all partial sums are bounded by g.n()^h.n()
    let mut bound: u128 = 1;
    for _ in 0..hn {
        bound = bound.checked_mul(g.n() as u128).unwrap_or(u128::MAX);
        if bound > u64::MAX as u128 {
            return Err(HomError::CountOverflow {
                pattern_vertices: hn,
                target_vertices: g.n(),
            });
        }
    }
    if hn == 0 {
        return Ok(BigUint::one());
    }
    if g.n() == 0 {
        return Ok(BigUint::from(0u32));
    }
    let target = TargetAdj::new(g);
    // split the pattern into connected components; hom is multiplicative
    let mut seen = vec![false; hn];
    let mut total = BigUint::one();
    for start in 0..hn {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for u in h.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    queue.push(u);
                }
            }
        }
        comp.sort_unstable();
        let local = h.induced(&comp);
        total *= BigUint::from(component_hom_count(&local, g, &target));
    }
    Ok(total)
}

/// Count for one connected pattern component, with a fast path for complete
/// patterns and conditioning when the elimination width exceeds 3.
fn component_hom_count(h: &Graph, g: &Graph, target: &TargetAdj) -> u64 {
    let hn = h.n();
    if hn * (hn - 1) / 2 == h.edge_count() {
        // complete pattern: ordered clique count
        use num_traits::ToPrimitive;
        let cliques = count_cliques(g, hn).to_u64().expect("bounded by n^h");
        let mut factorial = 1u64;
        for i in 2..=hn {
            factorial *= i as u64;
        }
        return cliques * factorial;
    }
    let edges: Vec<(usize, usize)> = h.edges();
    let unary: Vec<Option<Vec<u64>>> = vec![None; hn];
    eliminate(vec![true; hn], edges, unary, Vec::new(), target)
}

/// Greedy elimination: repeatedly remove the active pattern vertex with the
/// fewest remaining neighbors, folding the factors that touch it into a new
/// boundary factor. Conditions on the image of a busiest vertex whenever the
/// boundary would exceed three vertices.
fn eliminate(
    active: Vec<bool>,
    mut edges: Vec<(usize, usize)>,
    mut unary: Vec<Option<Vec<u64>>>,
    mut dense: Vec<Factor>,
    target: &TargetAdj,
) -> u64 {
    let gn = target.n;
    let hn = active.len();
    let mut alive = active;
    let mut scalar: u64 = 1;
    loop {
        let remaining: Vec<usize> = (0..hn).filter(|&v| alive[v]).collect();
        if remaining.is_empty() {
            return scalar;
        }
        // current neighbor sets from edges and dense scopes
        let neighbor_set = |v: usize, edges: &Vec<(usize, usize)>, dense: &Vec<Factor>| {
            let mut s = std::collections::BTreeSet::new();
            for &(a, b) in edges.iter() {
                if a == v {
                    s.insert(b);
                }
                if b == v {
                    s.insert(a);
                }
            }
            for f in dense.iter() {
                if f.scope.contains(&v) {
                    for &u in &f.scope {
                        if u != v {
                            s.insert(u);
                        }
                    }
                }
            }
            s
        };
        let (&v, bag) = remaining
            .iter()
            .map(|v| (v, neighbor_set(*v, &edges, &dense)))
            .min_by_key(|(v, s)| (s.len(), **v))
            .expect("nonempty");
        if bag.len() > 3 {
            // condition on the image of a busiest vertex and recurse
            let (&cv, _) = remaining
                .iter()
                .map(|v| (v, neighbor_set(*v, &edges, &dense).len()))
                .max_by_key(|(v, d)| (*d, **v))
                .expect("nonempty");
            let mut total = 0u64;
            'images: for a in 0..gn {
                if let Some(u) = &unary[cv] {
                    if u[a] == 0 {
                        continue;
                    }
                }
                // assigning cv -> a turns its edges into unary constraints
                let mut sub_edges: Vec<(usize, usize)> = Vec::new();
                let mut sub_unary = unary.clone();
                sub_unary[cv] = None;
                for &(x, y) in edges.iter() {
                    let other = if x == cv {
                        Some(y)
                    } else if y == cv {
                        Some(x)
                    } else {
                        sub_edges.push((x, y));
                        None
                    };
                    if let Some(o) = other {
                        let row = target.row(a);
                        let table = sub_unary[o].get_or_insert_with(|| vec![1u64; gn]);
                        let mut any = false;
                        for (img, t) in table.iter_mut().enumerate() {
                            if row[img / 64] >> (img % 64) & 1 == 0 {
                                *t = 0;
                            }
                            any |= *t != 0;
                        }
                        if !any {
                            continue 'images;
                        }
                    }
                }
                // dense factors lose the cv coordinate by slicing at a
                let mut sub_dense: Vec<Factor> = Vec::new();
                for f in dense.iter() {
                    if let Some(pos) = f.scope.iter().position(|&u| u == cv) {
                        let rest: Vec<usize> =
                            f.scope.iter().copied().filter(|&u| u != cv).collect();
                        let mut table = vec![0u64; gn.pow(rest.len() as u32)];
                        for (idx, slot) in table.iter_mut().enumerate() {
                            // rebuild the full index with cv -> a inserted
                            let mut full = 0usize;
                            let mut rem = idx;
                            let mut stride = 1usize;
                            for (k, _) in f.scope.iter().enumerate() {
                                let digit = if k == pos {
                                    a
                                } else {
                                    let d = rem % gn;
                                    rem /= gn;
                                    d
                                };
                                full += digit * stride;
                                stride *= gn;
                            }
                            *slot = f.table[full];
                        }
                        sub_dense.push(Factor { scope: rest, table });
                    } else {
                        sub_dense.push(Factor {
                            scope: f.scope.clone(),
                            table: f.table.clone(),
                        });
                    }
                }
                let mut sub_active = alive.clone();
                sub_active[cv] = false;
                let contribution =
                    eliminate(sub_active, sub_edges, sub_unary, sub_dense, target);
                total = total.checked_add(contribution).expect("bounded by n^h");
            }
            return total.checked_mul(scalar).expect("bounded by n^h");
        }
        // fold everything that touches v into a new factor over the bag
        let bag: Vec<usize> = bag.into_iter().collect();
        let edge_neighbors: Vec<usize> = edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        let dense_with_v: Vec<Factor> = {
            let (with, without): (Vec<Factor>, Vec<Factor>) =
                dense.drain(..).partition(|f| f.scope.contains(&v));
            dense = without;
            with
        };
        edges.retain(|&(a, b)| a != v && b != v);
        let v_unary = unary[v].take();
        let table_len = gn.pow(bag.len() as u32);
        let mut table = vec![0u64; table_len];
        let words = target.words;
        let mut allowed = vec![0u64; words];
        for (idx, slot) in table.iter_mut().enumerate() {
            // decode bag images
            let mut digits = [0usize; 3];
            let mut rem = idx;
            for d in digits.iter_mut().take(bag.len()) {
                *d = rem % gn;
                rem /= gn;
            }
            // allowed images of v: adjacent to every edge-neighbor's image
            for (wi, a) in allowed.iter_mut().enumerate() {
                let spare = words * 64 - gn;
                *a = if wi == words - 1 && spare > 0 {
                    u64::MAX >> spare
                } else {
                    u64::MAX
                };
            }
            for &u in &edge_neighbors {
                let pos = bag.iter().position(|&b| b == u).expect("bag covers");
                let row = target.row(digits[pos]);
                for (a, r) in allowed.iter_mut().zip(row) {
                    *a &= r;
                }
            }
            let mut sum = 0u64;
            if dense_with_v.is_empty() && v_unary.is_none() {
                sum = allowed.iter().map(|w| w.count_ones() as u64).sum();
            } else {
                for (wi, &word) in allowed.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let a = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let mut value = v_unary.as_ref().map_or(1, |u| u[a]);
                        if value == 0 {
                            continue;
                        }
                        for f in &dense_with_v {
                            let mut fidx = 0usize;
                            let mut stride = 1usize;
                            for &u in &f.scope {
                                let digit = if u == v {
                                    a
                                } else {
                                    digits[bag.iter().position(|&b| b == u).expect("bag")]
                                };
                                fidx += digit * stride;
                                stride *= gn;
                            }
                            value = value.checked_mul(f.table[fidx]).expect("bounded");
                            if value == 0 {
                                break;
                            }
                        }
                        sum = sum.checked_add(value).expect("bounded by n^h");
                    }
                }
            }
            *slot = sum;
        }
        alive[v] = false;
        if bag.is_empty() {
            scalar = scalar.checked_mul(table[0]).expect("bounded by n^h");
        } else {
            dense.push(Factor { scope: bag, table });
        }
    }
}

/// Number of homomorphisms from the k-cycle: the trace of the k-th power of
/// the adjacency matrix.
pub fn hom_cycle(k: usize, g: &Graph) -> BigUint {
    assert!(k >= 3, "cycles start at 3 vertices");
    let a = int_adjacency(g);
    let p = int_matrix_power(&a, g.n(), k);
    let mut trace: u128 = 0;
    for i in 0..g.n() {
        trace += p[i * g.n() + i];
    }
    BigUint::from(trace)
}

/// Number of homomorphisms from the k-vertex path: the total of all entries
/// of the (k-1)-th power of the adjacency matrix.
pub fn hom_path(k: usize, g: &Graph) -> BigUint {
    assert!(k >= 1);
    if k == 1 {
        return BigUint::from(g.n());
    }
    let a = int_adjacency(g);
    let p = int_matrix_power(&a, g.n(), k - 1);
    BigUint::from(p.iter().sum::<u128>())
}

/// Number of homomorphisms from the complete pattern on k vertices: every
/// such map is injective onto a clique, so this is the ordered clique count.
pub fn hom_complete(k: usize, g: &Graph) -> BigUint {
    let mut factorial = BigUint::one();
    for i in 2..=k {
        factorial *= BigUint::from(i);
    }
    count_cliques(g, k) * factorial
}

fn int_adjacency(g: &Graph) -> Vec<u128> {
    let n = g.n();
    let mut a = vec![0u128; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1;
        a[v * n + u] = 1;
    }
    a
}

fn int_matrix_power(a: &[u128], n: usize, k: usize) -> Vec<u128> {
    let mut acc = a.to_vec();
    for _ in 1..k {
        let mut next = vec![0u128; n * n];
        for r in 0..n {
            for m in 0..n {
                let x = acc[r * n + m];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    let y = a[m * n + c];
                    if y != 0 {
                        next[r * n + c] = next[r * n + c]
                            .checked_add(x.checked_mul(y).expect("small powers"))
                            .expect("small powers");
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

fn biguint_as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One pattern's counts against the two target graphs.
#[derive(Debug, Clone, Serialize)]
pub struct PatternCompare {
    pub graph6: String,
    pub vertices: usize,
    pub planar: bool,
    #[serde(serialize_with = "biguint_as_decimal")]
    pub count_left: BigUint,
    #[serde(serialize_with = "biguint_as_decimal")]
    pub count_right: BigUint,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomCompareReport {
    pub pattern_cap: usize,
    pub planar_only: bool,
    pub patterns: Vec<PatternCompare>,
}

impl HomCompareReport {
    pub fn all_equal(&self) -> bool {
        self.patterns.iter().all(|p| p.equal)
    }

    pub fn differing(&self) -> Vec<&PatternCompare> {
        self.patterns.iter().filter(|p| !p.equal).collect()
    }

    /// Plain-text profile: one line per pattern,
    /// `graph6 count_left count_right equal?`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            out.push_str(&format!(
                "{} {} {} {}\n",
                p.graph6,
                p.count_left,
                p.count_right,
                if p.equal { "equal" } else { "DIFFER" }
            ));
        }
        out
    }
}

/// Counts homomorphisms from every connected pattern with up to `n_max`
/// vertices (planar patterns only, when the flag is set) into both graphs
/// and reports every difference.
pub fn hom_profile_compare(
    g1: &Graph,
    g2: &Graph,
    n_max: usize,
    planar_only: bool,
) -> Result<HomCompareReport, HomError> {
    let patterns = enumerate_connected_graphs(n_max)?;
    let mut rows = Vec::new();
    for p in &patterns {
        if planar_only && !p.planar {
            continue;
        }
        let count_left = hom_count(&p.graph, g1)?;
        let count_right = hom_count(&p.graph, g2)?;
        rows.push(PatternCompare {
            graph6: p.graph6.clone(),
            vertices: p.vertices,
            planar: p.planar,
            equal: count_left == count_right,
            count_left,
            count_right,
        });
    }
    Ok(HomCompareReport {
        pattern_cap: n_max,
        planar_only,
        patterns: rows,
    })
}
