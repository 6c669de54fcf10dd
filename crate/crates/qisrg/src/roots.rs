//! The 120 lines of the E8 root system, their orthogonality graph, the orbit
//! partition and stabilizers under the Pauli-word group `L`, the edge-flipped
//! companion graphs `G^w`, and the coset clique graph they complement to.

use crate::exact::{ratio, RationalMatrix};
use crate::graph::Graph;
use crate::pauli::{enumerate_l, GroupElementL};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootsError {
    #[error("coordinates {0:?} do not span a root line")]
    NotARootLine([i64; 8]),
    #[error("vertex {0} is not a root line index (expected 0..120)")]
    BadVertex(usize),
    #[error("orbit structure is not 15 cells of size 8: got sizes {0:?}")]
    BadOrbitStructure(Vec<usize>),
    #[error("computed orbit cell {cell} differs from the reference table: computed {computed:?}, reference {reference:?}")]
    OrbitTableMismatch {
        cell: usize,
        computed: Vec<String>,
        reference: Vec<String>,
    },
    #[error("stabilizer of cell {cell} does not match the reference generators: computed {computed:?}, reference span {reference:?}")]
    StabilizerMismatch {
        cell: usize,
        computed: Vec<String>,
        reference: Vec<String>,
    },
    #[error("representative {vertex} does not lie in cell {cell}")]
    RepOutsideCell { vertex: usize, cell: usize },
    #[error("expected {expected} representatives, got {got}")]
    WrongRepCount { expected: usize, got: usize },
    #[error("no projection identity sign pattern works for line {0}")]
    NoSignPattern(usize),
    #[error("verified map failed: {0}")]
    MapVerificationFailed(String),
    #[error("clique construction problem: {0}")]
    CliqueConstruction(String),
}

/// An E8 root vector up to global sign, in canonical form: either
/// `+-e_i +- e_j` or an all-`+-1` vector with an even number of minus signs,
/// stored with its first nonzero coordinate positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    coords: [i64; 8],
}

impl Line {
    /// Canonicalizes and validates.
    pub fn new(coords: [i64; 8]) -> Result<Line, RootsError> {
        let canonical = canonicalize(coords).ok_or(RootsError::NotARootLine(coords))?;
        let norm: i64 = canonical.iter().map(|c| c * c).sum();
        let valid = match norm {
            2 => canonical.iter().all(|&c| c.abs() <= 1),
            8 => {
                canonical.iter().all(|&c| c.abs() == 1)
                    && canonical.iter().filter(|&&c| c < 0).count() % 2 == 0
            }
            _ => false,
        };
        if !valid {
            return Err(RootsError::NotARootLine(coords));
        }
        Ok(Line { coords: canonical })
    }

    pub fn coords(&self) -> [i64; 8] {
        self.coords
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &Line) -> i64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn is_orthogonal(&self, other: &Line) -> bool {
        self.dot(other) == 0
    }

    /// The rank-1 projection onto the line, `x x^T / |x|^2`.
    pub fn projection(&self) -> RationalMatrix {
        let norm = self.norm_sq();
        RationalMatrix::from_fn(8, 8, |r, c| ratio(self.coords[r] * self.coords[c], norm))
    }

    /// Compact rendering such as "e1+e2" or "x{3,4}".
    pub fn label(&self) -> String {
        if self.norm_sq() == 2 {
            let mut parts = Vec::new();
            for (i, &c) in self.coords.iter().enumerate() {
                if c != 0 {
                    parts.push((i + 1, c));
                }
            }
            let (i, _) = parts[0];
            let (j, cj) = parts[1];
            format!("e{}{}e{}", i, if cj > 0 { "+" } else { "-" }, j)
        } else {
            let neg: Vec<String> = self
                .coords
                .iter()
                .enumerate()
                .filter(|(_, &c)| c < 0)
                .map(|(i, _)| (i + 1).to_string())
                .collect();
            format!("x{{{}}}", neg.join(","))
        }
    }
}

fn canonicalize(mut coords: [i64; 8]) -> Option<[i64; 8]> {
    let first = coords.iter().find(|&&c| c != 0)?;
    if *first < 0 {
        for c in coords.iter_mut() {
            *c = -*c;
        }
    }
    Some(coords)
}

/// The vector `e_i + sign * e_j`, 1-indexed.
pub fn e_pair(i: usize, j: usize, sign: i64) -> Line {
    let mut coords = [0i64; 8];
    coords[i - 1] = 1;
    coords[j - 1] = sign;
    Line::new(coords).expect("valid type-1 root")
}

/// The all-ones vector with sign flipped on the 1-indexed positions in `s`.
pub fn x_set(s: &[usize]) -> Line {
    let mut coords = [1i64; 8];
    for &i in s {
        coords[i - 1] = -1;
    }
    Line::new(coords).expect("valid type-2 root")
}

/// All 120 canonical root lines: the 56 of type `e_i +- e_j` first, then the
/// 64 all-`+-1` lines, each group in lexicographic coordinate order.
pub fn build_root_lines() -> Vec<Line> {
    let mut type1 = Vec::with_capacity(56);
    for i in 1..=8 {
        for j in (i + 1)..=8 {
            for sign in [1, -1] {
                type1.push(e_pair(i, j, sign));
            }
        }
    }
    let mut type2 = Vec::with_capacity(64);
    for bits in 0u32..128 {
        let mut coords = [1i64; 8];
        for (k, c) in coords.iter_mut().skip(1).enumerate() {
            if bits >> k & 1 == 1 {
                *c = -1;
            }
        }
        if coords.iter().filter(|&&c| c < 0).count() % 2 == 0 {
            type2.push(Line::new(coords).expect("valid type-2 root"));
        }
    }
    type1.sort_by_key(|l| l.coords());
    type2.sort_by_key(|l| l.coords());
    type1.extend(type2);
    type1
}

/// The root lines together with the precomputed action of all 64 elements
/// of `L`. Most operations in this module and in `magic` go through this.
pub struct RootSystem {
    lines: Vec<Line>,
    index: std::collections::HashMap<[i64; 8], usize>,
    elements: Vec<GroupElementL>,
    /// perms[e][v] = image of line v under elements[e]
    perms: Vec<Vec<usize>>,
}

impl RootSystem {
    pub fn new() -> RootSystem {
        let lines = build_root_lines();
        let index: std::collections::HashMap<[i64; 8], usize> = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.coords(), i))
            .collect();
        let elements = enumerate_l();
        let perms: Vec<Vec<usize>> = elements
            .iter()
            .map(|g| {
                lines
                    .iter()
                    .map(|l| {
                        let image = canonicalize(g.apply(&l.coords()))
                            .expect("group elements preserve nonzero vectors");
                        *index
                            .get(&image)
                            .expect("the group permutes the root lines")
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            lines,
            index,
            elements,
            perms,
        }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, v: usize) -> &Line {
        &self.lines[v]
    }

    pub fn index_of(&self, line: &Line) -> Option<usize> {
        self.index.get(&line.coords()).copied()
    }

    /// The 64 elements of `L` in lexicographic order.
    pub fn elements(&self) -> &[GroupElementL] {
        &self.elements
    }

    pub fn element_index(&self, g: &GroupElementL) -> usize {
        self.elements
            .binary_search(g)
            .expect("every sign-free word is an element of L")
    }

    /// The permutation induced on line indices by the element with index
    /// `e` in `elements()` order.
    pub fn perm(&self, e: usize) -> &[usize] {
        &self.perms[e]
    }

    /// Image of the line with index `v` under `g`.
    pub fn act_vertex(&self, g: &GroupElementL, v: usize) -> Result<usize, RootsError> {
        if v >= self.n() {
            return Err(RootsError::BadVertex(v));
        }
        Ok(self.perms[self.element_index(g)][v])
    }

    /// Image of a line under `g`, canonicalized to one of the 120 lines.
    pub fn act_on_line(&self, g: &GroupElementL, x: &Line) -> Result<Line, RootsError> {
        let v = self
            .index_of(x)
            .ok_or(RootsError::NotARootLine(x.coords()))?;
        Ok(self.lines[self.perms[self.element_index(g)][v]])
    }

    /// The stabilizer of a line in `L`; always a subgroup of order 8.
    pub fn stabilizer(&self, v: usize) -> Result<Vec<GroupElementL>, RootsError> {
        if v >= self.n() {
            return Err(RootsError::BadVertex(v));
        }
        Ok(self
            .elements
            .iter()
            .enumerate()
            .filter(|(e, _)| self.perms[*e][v] == v)
            .map(|(_, g)| *g)
            .collect())
    }
}

impl Default for RootSystem {
    fn default() -> Self {
        Self::new()
    }
}

/// Orthogonality graph on the root lines: two lines adjacent iff their
/// representatives have inner product zero.
pub fn build_orthogonality_graph(lines: &[Line]) -> Graph {
    let n = lines.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if lines[u].is_orthogonal(&lines[v]) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("orthogonality edges are simple")
}

/// The 15 orbit cells of `L` acting on the root lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl OrbitPartition {
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }
}

/// Distinguished member used to give computed orbits their stable labels:
/// cell i < 7 contains e1 + e_{i+2}, cells 7..14 contain x{1, i-5}, and the
/// last cell contains the all-ones line.
fn cell_label_line(i: usize) -> Line {
    match i {
        0..=6 => e_pair(1, i + 2, 1),
        7..=13 => x_set(&[1, i - 5]),
        14 => x_set(&[]),
        _ => unreachable!("cell labels run 0..15"),
    }
}

/// Computes the orbit partition of `L` on the root lines and labels the
/// cells by their distinguished members. Errors if the structure is not
/// 15 cells of size 8.
pub fn compute_orbits(rs: &RootSystem) -> Result<OrbitPartition, RootsError> {
    let n = rs.n();
    let mut seen = vec![false; n];
    let mut raw_cells: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for perm in &rs.perms {
            orbit.insert(perm[v]);
        }
        let orbit: Vec<usize> = orbit.into_iter().collect();
        for &u in &orbit {
            seen[u] = true;
        }
        raw_cells.push(orbit);
    }
    if raw_cells.len() != 15 || raw_cells.iter().any(|c| c.len() != 8) {
        return Err(RootsError::BadOrbitStructure(
            raw_cells.iter().map(|c| c.len()).collect(),
        ));
    }
    let mut cells = Vec::with_capacity(15);
    for i in 0..15 {
        let marker = rs
            .index_of(&cell_label_line(i))
            .expect("distinguished members are root lines");
        let cell = raw_cells
            .iter()
            .find(|c| c.contains(&marker))
            .expect("marker lies in some orbit")
            .clone();
        cells.push(cell);
    }
    let mut cell_of = vec![usize::MAX; n];
    for (i, cell) in cells.iter().enumerate() {
        for &v in cell {
            if cell_of[v] != usize::MAX {
                return Err(RootsError::BadOrbitStructure(
                    cells.iter().map(|c| c.len()).collect(),
                ));
            }
            cell_of[v] = i;
        }
    }
    Ok(OrbitPartition { cells, cell_of })
}

/// The known orbit table, cell by cell, used as a construction cross-check.
pub fn reference_orbit_table() -> Vec<Vec<Line>> {
    let mut rows: Vec<Vec<Line>> = Vec::with_capacity(15);
    let pair_rows: [[(usize, usize); 4]; 7] = [
        [(1, 2), (3, 4), (5, 6), (7, 8)],
        [(1, 3), (2, 4), (5, 7), (6, 8)],
        [(1, 4), (2, 3), (5, 8), (6, 7)],
        [(1, 5), (2, 6), (3, 7), (4, 8)],
        [(1, 6), (2, 5), (3, 8), (4, 7)],
        [(1, 7), (2, 8), (3, 5), (4, 6)],
        [(1, 8), (2, 7), (3, 6), (4, 5)],
    ];
    for row in pair_rows {
        let mut cell = Vec::with_capacity(8);
        for (i, j) in row {
            cell.push(e_pair(i, j, 1));
            cell.push(e_pair(i, j, -1));
        }
        rows.push(cell);
    }
    let quad_rows: [[&[usize]; 8]; 8] = [
        [&[1, 2], &[3, 4], &[5, 6], &[7, 8], &[1, 4, 6, 8], &[2, 3, 6, 8], &[2, 4, 5, 8], &[2, 4, 6, 7]],
        [&[1, 3], &[2, 4], &[5, 7], &[6, 8], &[1, 4, 7, 8], &[1, 4, 5, 6], &[1, 2, 6, 7], &[1, 2, 5, 8]],
        [&[1, 4], &[2, 3], &[5, 8], &[6, 7], &[1, 3, 7, 8], &[1, 3, 5, 6], &[1, 2, 5, 7], &[1, 2, 6, 8]],
        [&[1, 5], &[2, 6], &[3, 7], &[4, 8], &[1, 6, 7, 8], &[2, 5, 7, 8], &[4, 5, 6, 7], &[1, 2, 4, 7]],
        [&[1, 6], &[2, 5], &[3, 8], &[4, 7], &[1, 5, 7, 8], &[2, 6, 7, 8], &[3, 5, 6, 7], &[4, 5, 6, 8]],
        [&[1, 7], &[2, 8], &[3, 5], &[4, 6], &[1, 5, 6, 8], &[3, 6, 7, 8], &[2, 5, 6, 7], &[4, 5, 7, 8]],
        [&[1, 8], &[2, 7], &[3, 6], &[4, 5], &[1, 5, 6, 7], &[4, 6, 7, 8], &[2, 5, 6, 8], &[3, 5, 7, 8]],
        [&[], &[5, 6, 7, 8], &[3, 4, 7, 8], &[2, 4, 6, 8], &[3, 4, 5, 6], &[2, 4, 5, 7], &[2, 3, 6, 7], &[2, 3, 5, 8]],
    ];
    for row in quad_rows {
        rows.push(row.iter().map(|s| x_set(s)).collect());
    }
    rows
}

/// The known stabilizer generator triples, one per cell.
pub fn reference_stabilizer_generators() -> Vec<[GroupElementL; 3]> {
    const TRIPLES: [[&str; 3]; 15] = [
        ["IIX", "IZI", "ZII"],
        ["ZII", "IXI", "IIZ"],
        ["ZII", "IXX", "IZZ"],
        ["XII", "IIZ", "IZI"],
        ["XIX", "IZI", "ZIZ"],
        ["XXI", "IIZ", "ZZI"],
        ["XXX", "ZZI", "IZZ"],
        ["IIX", "ZXI", "XZI"],
        ["IXI", "ZIX", "XIZ"],
        ["IXX", "ZXI", "XZZ"],
        ["XII", "IXZ", "IZX"],
        ["XIX", "IZX", "ZXZ"],
        ["XXI", "IXZ", "ZZX"],
        ["XXX", "ZZX", "XZZ"],
        ["XII", "IXI", "IIX"],
    ];
    TRIPLES
        .iter()
        .map(|t| {
            [
                GroupElementL::parse(t[0]).expect("valid word"),
                GroupElementL::parse(t[1]).expect("valid word"),
                GroupElementL::parse(t[2]).expect("valid word"),
            ]
        })
        .collect()
}

/// Subgroup generated by a set of elements of `L`.
pub fn span(generators: &[GroupElementL]) -> BTreeSet<GroupElementL> {
    let mut set = BTreeSet::new();
    set.insert(GroupElementL::identity());
    loop {
        let mut grew = false;
        let current: Vec<GroupElementL> = set.iter().cloned().collect();
        for g in generators {
            for e in &current {
                if set.insert(e.mul(g)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

/// Checks the computed orbits cell-by-cell against the reference table and
/// the computed stabilizers against the reference generator triples. Any
/// discrepancy is reported verbatim.
pub fn crosscheck_reference_tables(
    rs: &RootSystem,
    partition: &OrbitPartition,
) -> Result<(), RootsError> {
    let table = reference_orbit_table();
    for (i, row) in table.iter().enumerate() {
        let reference: BTreeSet<usize> = row
            .iter()
            .map(|l| rs.index_of(l).expect("reference lines are root lines"))
            .collect();
        let computed: BTreeSet<usize> = partition.cell(i).iter().copied().collect();
        if reference != computed {
            return Err(RootsError::OrbitTableMismatch {
                cell: i + 1,
                computed: computed.iter().map(|&v| rs.line(v).label()).collect(),
                reference: reference.iter().map(|&v| rs.line(v).label()).collect(),
            });
        }
    }
    let gens = reference_stabilizer_generators();
    for (i, triple) in gens.iter().enumerate() {
        let expected: BTreeSet<GroupElementL> = span(triple);
        let computed: BTreeSet<GroupElementL> =
            rs.stabilizer(partition.cell(i)[0])?.into_iter().collect();
        if expected != computed {
            return Err(RootsError::StabilizerMismatch {
                cell: i + 1,
                computed: computed.iter().map(|g| g.name()).collect(),
                reference: expected.iter().map(|g| g.name()).collect(),
            });
        }
    }
    Ok(())
}

/// A choice of one representative line per orbit cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WChoice {
    reps: Vec<usize>,
}

impl WChoice {
    /// Validates that `reps[i]` lies in cell `i`.
    pub fn new(partition: &OrbitPartition, reps: Vec<usize>) -> Result<WChoice, RootsError> {
        if reps.len() != partition.cell_count() {
            return Err(RootsError::WrongRepCount {
                expected: partition.cell_count(),
                got: reps.len(),
            });
        }
        for (i, &v) in reps.iter().enumerate() {
            if !partition.cell(i).contains(&v) {
                return Err(RootsError::RepOutsideCell { vertex: v, cell: i });
            }
        }
        Ok(WChoice { reps })
    }

    /// The default representatives: `e1 - e_j` for the first seven cells,
    /// `x{1,j}` for the next seven, and the all-ones line for the last.
    /// Under this choice exactly 14 cell pairs have orthogonal
    /// representatives.
    pub fn default_choice(
        rs: &RootSystem,
        partition: &OrbitPartition,
    ) -> Result<WChoice, RootsError> {
        let mut reps = Vec::with_capacity(15);
        for i in 0..15 {
            let line = match i {
                0..=6 => e_pair(1, i + 2, -1),
                7..=13 => x_set(&[1, i - 5]),
                _ => x_set(&[]),
            };
            reps.push(rs.index_of(&line).expect("default reps are root lines"));
        }
        WChoice::new(partition, reps)
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn rep(&self, cell: usize) -> usize {
        self.reps[cell]
    }
}

/// Builds the companion graph for a representative choice: edges inside a
/// cell and between cells with non-orthogonal representatives are copied
/// from the orthogonality graph; edges between cells with orthogonal
/// representatives are complemented.
pub fn build_gw(rs: &RootSystem, partition: &OrbitPartition, w: &WChoice) -> Graph {
    let mut g = build_orthogonality_graph(rs.lines());
    for i in 0..partition.cell_count() {
        for j in (i + 1)..partition.cell_count() {
            if rs.line(w.rep(i)).is_orthogonal(rs.line(w.rep(j))) {
                for &a in partition.cell(i) {
                    for &b in partition.cell(j) {
                        g.toggle_edge(a, b);
                    }
                }
            }
        }
    }
    g
}

/// The explicit isomorphism between the companion graphs of two
/// representative choices: a vertex in cell `i` maps through the transporter
/// taking `w1[i]` to `w2[i]`. The map is verified edge-by-edge before it is
/// returned.
pub fn gw_choice_isomorphism(
    rs: &RootSystem,
    partition: &OrbitPartition,
    w1: &WChoice,
    w2: &WChoice,
) -> Result<Vec<usize>, RootsError> {
    let mut map = vec![0usize; rs.n()];
    for i in 0..partition.cell_count() {
        let t = transporter(rs, w1.rep(i), w2.rep(i))?;
        for &v in partition.cell(i) {
            map[v] = rs.act_vertex(&t, v)?;
        }
    }
    let g1 = build_gw(rs, partition, w1);
    let g2 = build_gw(rs, partition, w2);
    match crate::graph::is_isomorphism(&g1, &g2, &map) {
        Ok(true) => Ok(map),
        _ => Err(RootsError::MapVerificationFailed(
            "representative-change map does not preserve edges".into(),
        )),
    }
}

/// The lexicographically least element of `L` taking line `y` to line `z`.
pub fn transporter(rs: &RootSystem, y: usize, z: usize) -> Result<GroupElementL, RootsError> {
    if y >= rs.n() {
        return Err(RootsError::BadVertex(y));
    }
    if z >= rs.n() {
        return Err(RootsError::BadVertex(z));
    }
    for (e, g) in rs.elements().iter().enumerate() {
        if rs.perms[e][y] == z {
            return Ok(*g);
        }
    }
    Err(RootsError::MapVerificationFailed(format!(
        "no group element takes line {y} to line {z}: different orbits"
    )))
}

/// A vertex of the coset clique graph: a set of 8 sign-free Pauli words,
/// namely a left coset of some cell stabilizer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CliqueLabel {
    words: Vec<GroupElementL>,
}

impl CliqueLabel {
    fn from_set(set: BTreeSet<GroupElementL>) -> CliqueLabel {
        CliqueLabel {
            words: set.into_iter().collect(),
        }
    }

    /// Sorted member words.
    pub fn words(&self) -> &[GroupElementL] {
        &self.words
    }

    pub fn names(&self) -> Vec<String> {
        self.words.iter().map(|w| w.name()).collect()
    }

    fn intersection_size(&self, other: &CliqueLabel) -> usize {
        let set: BTreeSet<&GroupElementL> = self.words.iter().collect();
        other.words.iter().filter(|w| set.contains(w)).count()
    }
}

/// Builds the 56-regular rank 4 graph on 120 stabilizer cosets: the 15 cell
/// stabilizers and their 105 proper translates, two cosets adjacent iff they
/// share exactly two words. Intersection sizes other than 0 and 2 between
/// distinct cosets are reported as errors rather than accepted silently.
pub fn build_gamma1(
    rs: &RootSystem,
    partition: &OrbitPartition,
) -> Result<(Graph, Vec<CliqueLabel>), RootsError> {
    let mut labels: Vec<CliqueLabel> = Vec::with_capacity(120);
    let mut seen: BTreeSet<Vec<GroupElementL>> = BTreeSet::new();
    for i in 0..partition.cell_count() {
        let base: BTreeSet<GroupElementL> =
            rs.stabilizer(partition.cell(i)[0])?.into_iter().collect();
        for n_word in rs.elements() {
            let coset: BTreeSet<GroupElementL> = base.iter().map(|m| n_word.mul(m)).collect();
            let label = CliqueLabel::from_set(coset);
            if seen.insert(label.words.clone()) {
                labels.push(label);
            }
        }
    }
    if labels.len() != 120 {
        return Err(RootsError::CliqueConstruction(format!(
            "expected 120 distinct cosets, got {}",
            labels.len()
        )));
    }
    let mut edges = Vec::new();
    for a in 0..labels.len() {
        for b in (a + 1)..labels.len() {
            match labels[a].intersection_size(&labels[b]) {
                0 => {}
                2 => edges.push((a, b)),
                other => {
                    return Err(RootsError::CliqueConstruction(format!(
                        "cosets {a} and {b} share {other} words; expected 0 or 2"
                    )));
                }
            }
        }
    }
    let graph = Graph::from_edges(120, &edges).expect("coset adjacency is simple");
    Ok((graph, labels))
}

/// The explicit relabeling witnessing that the complement of the companion
/// graph is isomorphic to the coset clique graph: the vertex `x` in cell `i`
/// maps to the coset of transporters taking `w_i` to `x`. Verified over all
/// vertex pairs before returning.
pub fn gamma1_isomorphism_witness(
    rs: &RootSystem,
    partition: &OrbitPartition,
    w: &WChoice,
    gw: &Graph,
    gamma1: &Graph,
    labels: &[CliqueLabel],
) -> Result<Vec<usize>, RootsError> {
    let position: std::collections::BTreeMap<Vec<GroupElementL>, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.words.clone(), i))
        .collect();
    let mut map = vec![0usize; rs.n()];
    for i in 0..partition.cell_count() {
        let stab: BTreeSet<GroupElementL> =
            rs.stabilizer(partition.cell(i)[0])?.into_iter().collect();
        for &x in partition.cell(i) {
            let t = transporter(rs, w.rep(i), x)?;
            let coset: Vec<GroupElementL> = {
                let set: BTreeSet<GroupElementL> = stab.iter().map(|m| t.mul(m)).collect();
                set.into_iter().collect()
            };
            map[x] = *position.get(&coset).ok_or_else(|| {
                RootsError::CliqueConstruction(format!(
                    "transporter coset of vertex {x} is not a clique label"
                ))
            })?;
        }
    }
    let complement = gw.complement();
    match crate::graph::is_isomorphism(&complement, gamma1, &map) {
        Ok(true) => Ok(map),
        _ => Err(RootsError::MapVerificationFailed(
            "coset relabeling does not carry the complement onto the clique graph".into(),
        )),
    }
}

/// Checks, for every root line, that its projection factors through the
/// reference stabilizer generators of its cell: there is a sign pattern with
/// `P_x = (1/8)(1 +- N1)(1 +- N2)(1 +- N3)` exactly.
pub fn verify_projection_identities(
    rs: &RootSystem,
    partition: &OrbitPartition,
) -> Result<(), RootsError> {
    let gens = reference_stabilizer_generators();
    let identity = RationalMatrix::identity(8);
    let half = ratio(1, 2);
    for v in 0..rs.n() {
        let triple = &gens[partition.cell_of(v)];
        let target = rs.line(v).projection();
        let mut found = false;
        for pattern in 0..8u8 {
            let mut acc = identity.clone();
            for (b, gen) in triple.iter().enumerate() {
                let m = gen.word().matrix();
                let signed = if pattern >> b & 1 == 1 {
                    identity.sub(&m).expect("8x8")
                } else {
                    identity.add(&m).expect("8x8")
                };
                acc = acc.mul(&signed.scale(&half)).expect("8x8");
            }
            if acc == target {
                found = true;
                break;
            }
        }
        if !found {
            return Err(RootsError::NoSignPattern(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::srg_parameters;
    use crate::pauli::PauliLetter;

    fn setup() -> (RootSystem, OrbitPartition, WChoice) {
        let rs = RootSystem::new();
        let partition = compute_orbits(&rs).unwrap();
        let w = WChoice::default_choice(&rs, &partition).unwrap();
        (rs, partition, w)
    }

    #[test]
    fn line_canonicalization_and_validation() {
        let l = Line::new([-1, -1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(l.coords(), [1, 1, 0, 0, 0, 0, 0, 0]);
        assert!(Line::new([0; 8]).is_err());
        assert!(Line::new([1, 0, 0, 0, 0, 0, 0, 0]).is_err());
        assert!(Line::new([1, 1, 1, 0, 0, 0, 0, 0]).is_err());
        // odd number of minus signs is not a root
        assert!(Line::new([1, -1, 1, 1, 1, 1, 1, 1]).is_err());
        assert_eq!(e_pair(1, 2, 1).label(), "e1+e2");
        assert_eq!(x_set(&[3, 4]).label(), "x{3,4}");
    }

    #[test]
    fn line_counts_and_types() {
        let lines = build_root_lines();
        assert_eq!(lines.len(), 120);
        let type1 = lines.iter().filter(|l| l.norm_sq() == 2).count();
        assert_eq!(type1, 56);
        assert_eq!(lines.len() - type1, 64);
        // type-1 block comes first
        assert!(lines[..56].iter().all(|l| l.norm_sq() == 2));
        // no duplicates
        let set: BTreeSet<_> = lines.iter().map(|l| l.coords()).collect();
        assert_eq!(set.len(), 120);
    }

    #[test]
    fn orthogonality_graph_is_strongly_regular() {
        let lines = build_root_lines();
        let g = build_orthogonality_graph(&lines);
        let params = srg_parameters(&g).unwrap();
        assert_eq!(
            (params.n, params.k, params.lambda, params.mu),
            (120, 63, 30, 36)
        );
        let rs = RootSystem::new();
        let i12 = rs.index_of(&e_pair(1, 2, 1)).unwrap();
        let i12m = rs.index_of(&e_pair(1, 2, -1)).unwrap();
        let i13 = rs.index_of(&e_pair(1, 3, 1)).unwrap();
        assert!(g.has_edge(i12, i12m));
        assert!(!g.has_edge(i12, i13));
    }

    #[test]
    fn group_action_examples() {
        let rs = RootSystem::new();
        let e12 = rs.index_of(&e_pair(1, 2, 1)).unwrap();
        let iix = GroupElementL::parse("IIX").unwrap();
        assert_eq!(rs.act_vertex(&iix, e12).unwrap(), e12);
        let xii = GroupElementL::parse("XII").unwrap();
        let e56 = rs.index_of(&e_pair(5, 6, 1)).unwrap();
        assert_eq!(rs.act_vertex(&xii, e12).unwrap(), e56);
        let id = GroupElementL::identity();
        for v in [0usize, 17, 119] {
            assert_eq!(rs.act_vertex(&id, v).unwrap(), v);
        }
        assert!(rs.act_vertex(&id, 200).is_err());
    }

    #[test]
    fn action_permutes_and_preserves_orthogonality() {
        let rs = RootSystem::new();
        for e in 0..rs.elements().len() {
            let perm = rs.perm(e);
            let mut seen = vec![false; 120];
            for &img in perm {
                assert!(!seen[img]);
                seen[img] = true;
            }
            for u in 0..120 {
                for v in (u + 1)..120 {
                    let before = rs.line(u).is_orthogonal(rs.line(v));
                    let after = rs.line(perm[u]).is_orthogonal(rs.line(perm[v]));
                    assert_eq!(before, after);
                }
            }
        }
    }

    #[test]
    fn orbits_match_reference_table() {
        let (rs, partition, _) = setup();
        assert_eq!(partition.cell_count(), 15);
        crosscheck_reference_tables(&rs, &partition).unwrap();
        // cells are cliques of pairwise orthogonal lines and L-invariant
        for cell in partition.cells() {
            for (ai, &a) in cell.iter().enumerate() {
                for &b in cell.iter().skip(ai + 1) {
                    assert!(rs.line(a).is_orthogonal(rs.line(b)));
                }
            }
            for g in rs.elements() {
                for &v in cell {
                    let image = rs.act_vertex(g, v).unwrap();
                    assert!(cell.contains(&image));
                }
            }
        }
    }

    #[test]
    fn stabilizers() {
        let (rs, partition, _) = setup();
        for cell in partition.cells() {
            let stab0 = rs.stabilizer(cell[0]).unwrap();
            assert_eq!(stab0.len(), 8);
            for &v in cell {
                assert_eq!(rs.stabilizer(v).unwrap(), stab0);
            }
        }
        // pairwise intersections have size exactly 2
        for i in 0..15 {
            let a: BTreeSet<_> = rs
                .stabilizer(partition.cell(i)[0])
                .unwrap()
                .into_iter()
                .collect();
            for j in (i + 1)..15 {
                let b: BTreeSet<_> = rs
                    .stabilizer(partition.cell(j)[0])
                    .unwrap()
                    .into_iter()
                    .collect();
                assert_eq!(a.intersection(&b).count(), 2, "cells {i} {j}");
            }
        }
    }

    #[test]
    fn four_neighbors_in_every_foreign_cell() {
        let (rs, partition, _) = setup();
        let g = build_orthogonality_graph(rs.lines());
        for i in 0..15 {
            for j in 0..15 {
                if i == j {
                    continue;
                }
                for &v in partition.cell(i) {
                    let count = partition
                        .cell(j)
                        .iter()
                        .filter(|&&u| g.has_edge(v, u))
                        .count();
                    assert_eq!(count, 4);
                }
            }
        }
    }

    #[test]
    fn default_choice_flips_fourteen_pairs() {
        let (rs, _, w) = setup();
        let mut flipped = Vec::new();
        for i in 0..15 {
            for j in (i + 1)..15 {
                if rs.line(w.rep(i)).is_orthogonal(rs.line(w.rep(j))) {
                    flipped.push((i, j));
                }
            }
        }
        let mut expected: Vec<(usize, usize)> =
            (0..7).flat_map(|i| [(i, i + 7), (i, 14)]).collect();
        expected.sort_unstable();
        flipped.sort_unstable();
        assert_eq!(flipped, expected);
    }

    #[test]
    fn gw_is_strongly_regular_with_independent_reps() {
        let (rs, partition, w) = setup();
        let gw = build_gw(&rs, &partition, &w);
        let params = srg_parameters(&gw).unwrap();
        assert_eq!(
            (params.n, params.k, params.lambda, params.mu),
            (120, 63, 30, 36)
        );
        for (ai, &a) in w.reps().iter().enumerate() {
            for &b in w.reps().iter().skip(ai + 1) {
                assert!(!gw.has_edge(a, b));
            }
        }
        // every group element acts as an automorphism of both graphs
        let ge8 = build_orthogonality_graph(rs.lines());
        for e in 0..rs.elements().len() {
            let perm: Vec<usize> = rs.perm(e).to_vec();
            assert!(crate::graph::is_automorphism(&ge8, &perm).unwrap());
            assert!(crate::graph::is_automorphism(&gw, &perm).unwrap());
        }
    }

    #[test]
    fn gw_non_edges_are_group_translates_of_rep_pairs() {
        let (rs, partition, w) = setup();
        let gw = build_gw(&rs, &partition, &w);
        for i in 0..15 {
            for j in (i + 1)..15 {
                for &x in partition.cell(i) {
                    for &y in partition.cell(j) {
                        let translate_exists = (0..rs.elements().len()).any(|e| {
                            rs.perm(e)[w.rep(i)] == x && rs.perm(e)[w.rep(j)] == y
                        });
                        assert_eq!(!gw.has_edge(x, y), translate_exists);
                    }
                }
            }
        }
    }

    #[test]
    fn choice_isomorphisms() {
        let (rs, partition, w) = setup();
        // identity choice
        let map = gw_choice_isomorphism(&rs, &partition, &w, &w).unwrap();
        assert_eq!(map, (0..120).collect::<Vec<_>>());
        // vary one cell: replace the cell-0 representative by another member
        let mut reps = w.reps().to_vec();
        reps[0] = partition.cell(0)[3];
        let w2 = WChoice::new(&partition, reps).unwrap();
        let map = gw_choice_isomorphism(&rs, &partition, &w, &w2).unwrap();
        for (v, &img) in map.iter().enumerate() {
            assert_eq!(partition.cell_of(v), partition.cell_of(img));
        }
        // a representative outside its cell is rejected
        assert!(WChoice::new(&partition, vec![0; 15]).is_err());
    }

    #[test]
    fn transporter_basics() {
        let (rs, partition, _) = setup();
        // same line: the identity is the lexicographically least stabilizer
        assert_eq!(transporter(&rs, 0, 0).unwrap(), GroupElementL::identity());
        // different orbits have no transporter
        let a = partition.cell(0)[0];
        let b = partition.cell(1)[0];
        assert!(transporter(&rs, a, b).is_err());
    }

    #[test]
    fn gamma1_construction() {
        let (rs, partition, w) = setup();
        let (gamma1, labels) = build_gamma1(&rs, &partition).unwrap();
        assert_eq!(labels.len(), 120);
        let params = srg_parameters(&gamma1).unwrap();
        assert_eq!(
            (params.n, params.k, params.lambda, params.mu),
            (120, 56, 28, 24)
        );
        // cell i contributes 8 cosets starting with its stabilizer, so the
        // base coset of cell i sits at index 8*i; the first two base cosets
        // share exactly III and ZII
        let c1: BTreeSet<_> = labels[0].words().iter().cloned().collect();
        let c2: BTreeSet<_> = labels[8].words().iter().cloned().collect();
        let inter: Vec<String> = c1.intersection(&c2).map(|g| g.name()).collect();
        assert_eq!(inter, vec!["III".to_string(), "ZII".to_string()]);
        let gw = build_gw(&rs, &partition, &w);
        let map =
            gamma1_isomorphism_witness(&rs, &partition, &w, &gw, &gamma1, &labels).unwrap();
        // the representative of cell i maps to the base coset of cell i
        for i in 0..15 {
            assert_eq!(map[w.rep(i)], 8 * i);
        }
    }

    #[test]
    fn projection_identities_hold() {
        let (rs, partition, _) = setup();
        verify_projection_identities(&rs, &partition).unwrap();
        // the displayed special case: P(e1+e2) = (1/8)(1+IIX)(1+IZI)(1+ZII)
        let p = e_pair(1, 2, 1).projection();
        let m = |s: &str| GroupElementL::parse(s).unwrap().word().matrix();
        let id = RationalMatrix::identity(8);
        let half = ratio(1, 2);
        let product = id
            .add(&m("IIX"))
            .unwrap()
            .scale(&half)
            .mul(&id.add(&m("IZI")).unwrap().scale(&half))
            .unwrap()
            .mul(&id.add(&m("ZII")).unwrap().scale(&half))
            .unwrap();
        assert_eq!(p, product);
    }

    #[test]
    fn quadratic_form_translation_maps_first_stabilizer_to_second() {
        // F_2^6 coordinates of a word: (x-exponent, z-exponent) per leg;
        // cosets are cliques for the form Q(z) = z1 z2 + z3 z4 + z5 z6, and
        // the maps x -> x + q(x,v) v with Q(v) = 1 generate the even part of
        // the automorphism group moving base cosets onto each other.
        let to_f2 = |g: &GroupElementL| -> [u8; 6] {
            let mut out = [0u8; 6];
            for (leg, letter) in g.letters().iter().enumerate() {
                let (x, z) = match letter {
                    PauliLetter::I => (0, 0),
                    PauliLetter::X => (1, 0),
                    PauliLetter::Z => (0, 1),
                    PauliLetter::Y => (1, 1),
                };
                out[2 * leg] = x;
                out[2 * leg + 1] = z;
            }
            out
        };
        let from_f2 = |x: [u8; 6]| -> GroupElementL {
            let mut letters = [PauliLetter::I; 3];
            for (leg, letter) in letters.iter_mut().enumerate() {
                *letter = match (x[2 * leg], x[2 * leg + 1]) {
                    (0, 0) => PauliLetter::I,
                    (1, 0) => PauliLetter::X,
                    (0, 1) => PauliLetter::Z,
                    _ => PauliLetter::Y,
                };
            }
            GroupElementL::new(letters)
        };
        let q = |z: [u8; 6]| (z[0] * z[1] + z[2] * z[3] + z[4] * z[5]) % 2;
        let add = |a: [u8; 6], b: [u8; 6]| {
            let mut out = [0u8; 6];
            for i in 0..6 {
                out[i] = (a[i] + b[i]) % 2;
            }
            out
        };
        let translate = |v: [u8; 6], x: [u8; 6]| {
            if (q(add(x, v)) + q(x) + q(v)) % 2 == 1 {
                add(x, v)
            } else {
                x
            }
        };
        let v = [0, 0, 1, 1, 0, 0];
        let w = [0, 0, 0, 0, 1, 1];
        assert_eq!(q(v), 1);
        assert_eq!(q(w), 1);
        let rs = RootSystem::new();
        let partition = compute_orbits(&rs).unwrap();
        let c1: BTreeSet<GroupElementL> = rs
            .stabilizer(partition.cell(0)[0])
            .unwrap()
            .into_iter()
            .collect();
        let c2: BTreeSet<GroupElementL> = rs
            .stabilizer(partition.cell(1)[0])
            .unwrap()
            .into_iter()
            .collect();
        let image: BTreeSet<GroupElementL> = c1
            .iter()
            .map(|g| from_f2(translate(v, translate(w, to_f2(g)))))
            .collect();
        assert_eq!(image, c2);
    }
}
