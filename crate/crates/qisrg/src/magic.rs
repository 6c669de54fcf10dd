//! The block quantum permutation matrix: a 120x120 array of 8x8 rational
//! projections, block-diagonal over the orbit cells, whose entry at (y, z)
//! inside cell i is the projection onto the transporter image of the chosen
//! representative. Verifiers check the magic-unitary axioms, the adjacency
//! intertwining relation and the pairwise product relations, all in exact
//! arithmetic.

use crate::exact::{RationalMatrix, Rational};
use crate::graph::{independence_number, Graph, IndependenceMode};
use crate::roots::{transporter, Line, OrbitPartition, RootSystem, RootsError, WChoice};
use crate::pauli::GroupElementL;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MagicError {
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error("entry ({row},{col}) of block {cell} is not a projection")]
    EntryNotProjection { cell: usize, row: usize, col: usize },
    #[error("row {row} of block {cell} does not sum to the identity")]
    RowSumNotIdentity { cell: usize, row: usize },
    #[error("column {col} of block {cell} does not sum to the identity")]
    ColSumNotIdentity { cell: usize, col: usize },
    #[error("conjugation and direct projection disagree at entry ({row},{col}) of block {cell}")]
    ConjugationMismatch { cell: usize, row: usize, col: usize },
    #[error("graph has {got} vertices, the unitary acts on {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("cell subset must contain at least 9 cells, got {0}")]
    SubsetTooSmall(usize),
    #[error("cell subset index {0} out of range")]
    SubsetOutOfRange(usize),
    #[error("malformed unitary file: {0}")]
    Malformed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Block quantum permutation matrix over a cell partition of `0..n`:
/// `blocks[i]` holds the k x k array of 8x8 entries for cell i (row-major in
/// cell order), interned into a pool of distinct matrices.
pub struct MagicUnitary {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
    pos_in_cell: Vec<usize>,
    /// entry key per cell, row-major; keys index `distinct`
    blocks: Vec<Vec<u32>>,
    distinct: Vec<RationalMatrix>,
    /// construction metadata, present when built from projections
    meta: Option<ProjectorMeta>,
}

struct ProjectorMeta {
    /// global line index of the projection at each entry
    entry_lines: Vec<Vec<usize>>,
    transporters: Vec<Vec<GroupElementL>>,
    w_lines: Vec<Line>,
}

impl PartialEq for MagicUnitary {
    fn eq(&self, other: &Self) -> bool {
        if self.cells != other.cells {
            return false;
        }
        for i in 0..self.cells.len() {
            for e in 0..self.blocks[i].len() {
                if self.distinct[self.blocks[i][e] as usize]
                    != other.distinct[other.blocks[i][e] as usize]
                {
                    return false;
                }
            }
        }
        true
    }
}

impl MagicUnitary {
    /// Number of vertices the unitary acts on.
    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// The 8x8 entry for row vertex `y` and column vertex `z`; `None` when
    /// the two vertices lie in different cells (a zero block).
    pub fn entry(&self, y: usize, z: usize) -> Option<&RationalMatrix> {
        let ci = self.cell_of[y];
        if self.cell_of[z] != ci {
            return None;
        }
        let k = self.cells[ci].len();
        let key = self.blocks[ci][self.pos_in_cell[y] * k + self.pos_in_cell[z]];
        Some(&self.distinct[key as usize])
    }

    fn entry_key(&self, y: usize, z: usize) -> Option<u32> {
        let ci = self.cell_of[y];
        if self.cell_of[z] != ci {
            return None;
        }
        let k = self.cells[ci].len();
        Some(self.blocks[ci][self.pos_in_cell[y] * k + self.pos_in_cell[z]])
    }

    /// The chosen representative lines, when the unitary was built from
    /// projections.
    pub fn w_lines(&self) -> Option<&[Line]> {
        self.meta.as_ref().map(|m| m.w_lines.as_slice())
    }

    fn from_parts(
        cells: Vec<Vec<usize>>,
        blocks: Vec<Vec<u32>>,
        distinct: Vec<RationalMatrix>,
        meta: Option<ProjectorMeta>,
    ) -> Result<MagicUnitary, MagicError> {
        let n: usize = cells.iter().map(|c| c.len()).sum();
        let mut cell_of = vec![usize::MAX; n];
        let mut pos_in_cell = vec![usize::MAX; n];
        for (i, cell) in cells.iter().enumerate() {
            for (p, &v) in cell.iter().enumerate() {
                if v >= n || cell_of[v] != usize::MAX {
                    return Err(MagicError::Malformed(format!(
                        "cells do not partition 0..{n}: vertex {v}"
                    )));
                }
                cell_of[v] = i;
                pos_in_cell[v] = p;
            }
        }
        if cell_of.iter().any(|&c| c == usize::MAX) {
            return Err(MagicError::Malformed("cells do not cover the vertex set".into()));
        }
        let u = MagicUnitary {
            cells,
            cell_of,
            pos_in_cell,
            blocks,
            distinct,
            meta,
        };
        u.verify_construction()?;
        Ok(u)
    }

    /// Construction-time invariants: every entry is a projection and every
    /// block row and column sums to the 8x8 identity.
    fn verify_construction(&self) -> Result<(), MagicError> {
        let id = RationalMatrix::identity(8);
        for (ci, cell) in self.cells.iter().enumerate() {
            let k = cell.len();
            for r in 0..k {
                for c in 0..k {
                    let m = &self.distinct[self.blocks[ci][r * k + c] as usize];
                    if !m.is_projection().map_err(|_| MagicError::Malformed(
                        "entries must be 8x8".into(),
                    ))? {
                        return Err(MagicError::EntryNotProjection {
                            cell: ci,
                            row: r,
                            col: c,
                        });
                    }
                }
            }
            for r in 0..k {
                let mut sum = RationalMatrix::zero(8, 8);
                for c in 0..k {
                    sum = sum
                        .add(&self.distinct[self.blocks[ci][r * k + c] as usize])
                        .expect("8x8");
                }
                if sum != id {
                    return Err(MagicError::RowSumNotIdentity { cell: ci, row: r });
                }
            }
            for c in 0..k {
                let mut sum = RationalMatrix::zero(8, 8);
                for r in 0..k {
                    sum = sum
                        .add(&self.distinct[self.blocks[ci][r * k + c] as usize])
                        .expect("8x8");
                }
                if sum != id {
                    return Err(MagicError::ColSumNotIdentity { cell: ci, col: c });
                }
            }
        }
        Ok(())
    }

    /// The identity permutation written as a magic unitary over the given
    /// cells: diagonal entries are the 8x8 identity, off-diagonal entries in
    /// a block are zero.
    pub fn permutation_identity(cells: Vec<Vec<usize>>) -> MagicUnitary {
        let distinct = vec![RationalMatrix::zero(8, 8), RationalMatrix::identity(8)];
        let blocks = cells
            .iter()
            .map(|cell| {
                let k = cell.len();
                let mut b = vec![0u32; k * k];
                for r in 0..k {
                    b[r * k + r] = 1;
                }
                b
            })
            .collect();
        Self::from_parts(cells, blocks, distinct, None).expect("identity blocks are magic")
    }

    /// Serializes to the versioned certificate structure: per block, the
    /// list of (row, col, transporter word, projection line, numerators over
    /// the common denominator 8).
    pub fn to_file(&self) -> MagicUnitaryFile {
        let denominator = 8u32;
        let blocks = self
            .cells
            .iter()
            .enumerate()
            .map(|(ci, cell)| {
                let k = cell.len();
                let mut entries = Vec::with_capacity(k * k);
                for r in 0..k {
                    for c in 0..k {
                        let m = &self.distinct[self.blocks[ci][r * k + c] as usize];
                        let numerators: Vec<Vec<i64>> = (0..8)
                            .map(|a| {
                                (0..8)
                                    .map(|b| {
                                        let scaled = m.entry(a, b) * crate::exact::rat(denominator as i64);
                                        debug_assert!(scaled.is_integer());
                                        int_to_i64(&scaled.to_integer())
                                    })
                                    .collect()
                            })
                            .collect();
                        let meta = self.meta.as_ref();
                        entries.push(MagicEntryFile {
                            row: r,
                            col: c,
                            transporter: meta
                                .map(|m| m.transporters[ci][r * k + c].name())
                                .unwrap_or_default(),
                            line: meta.map(|m| m.entry_lines[ci][r * k + c]),
                            numerators,
                        });
                    }
                }
                MagicBlockFile {
                    cell: ci,
                    vertices: cell.clone(),
                    entries,
                }
            })
            .collect();
        MagicUnitaryFile {
            schema_version: 1,
            kind: "magic-unitary".into(),
            denominator,
            w: self
                .meta
                .as_ref()
                .map(|m| m.w_lines.iter().map(|l| l.coords().to_vec()).collect())
                .unwrap_or_default(),
            blocks,
        }
    }

    /// Reconstructs a unitary from its file form, re-validating every
    /// construction invariant.
    pub fn from_file(file: &MagicUnitaryFile) -> Result<MagicUnitary, MagicError> {
        if file.schema_version != 1 {
            return Err(MagicError::Malformed(format!(
                "unsupported schema version {}",
                file.schema_version
            )));
        }
        if file.denominator == 0 {
            return Err(MagicError::Malformed("zero denominator".into()));
        }
        let mut cells = Vec::with_capacity(file.blocks.len());
        let mut blocks = Vec::with_capacity(file.blocks.len());
        let mut distinct: Vec<RationalMatrix> = Vec::new();
        for (ci, block) in file.blocks.iter().enumerate() {
            if block.cell != ci {
                return Err(MagicError::Malformed(format!(
                    "block {ci} labeled {}",
                    block.cell
                )));
            }
            let k = block.vertices.len();
            if block.entries.len() != k * k {
                return Err(MagicError::Malformed(format!(
                    "block {ci} has {} entries for cell size {k}",
                    block.entries.len()
                )));
            }
            let mut keys = vec![u32::MAX; k * k];
            for entry in &block.entries {
                if entry.row >= k || entry.col >= k {
                    return Err(MagicError::Malformed(format!(
                        "entry ({},{}) outside block {ci}",
                        entry.row, entry.col
                    )));
                }
                if entry.numerators.len() != 8
                    || entry.numerators.iter().any(|r| r.len() != 8)
                {
                    return Err(MagicError::Malformed("entries must be 8x8".into()));
                }
                let m = RationalMatrix::from_fn(8, 8, |a, b| {
                    Rational::new(
                        BigInt::from(entry.numerators[a][b]),
                        BigInt::from(file.denominator),
                    )
                });
                let key = match distinct.iter().position(|d| *d == m) {
                    Some(k) => k as u32,
                    None => {
                        distinct.push(m);
                        (distinct.len() - 1) as u32
                    }
                };
                keys[entry.row * k + entry.col] = key;
            }
            if keys.iter().any(|&k| k == u32::MAX) {
                return Err(MagicError::Malformed(format!(
                    "block {ci} is missing entries"
                )));
            }
            cells.push(block.vertices.clone());
            blocks.push(keys);
        }
        Self::from_parts(cells, blocks, distinct, None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MagicUnitary, MagicError> {
        let file: MagicUnitaryFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }
}

fn int_to_i64(v: &BigInt) -> i64 {
    use num_traits::ToPrimitive;
    v.to_i64().expect("projection numerators fit i64")
}

/// Versioned file form of a magic unitary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MagicUnitaryFile {
    pub schema_version: u32,
    pub kind: String,
    pub denominator: u32,
    /// chosen representative lines, one per cell (empty if not applicable)
    pub w: Vec<Vec<i64>>,
    pub blocks: Vec<MagicBlockFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MagicBlockFile {
    pub cell: usize,
    pub vertices: Vec<usize>,
    pub entries: Vec<MagicEntryFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MagicEntryFile {
    pub row: usize,
    pub col: usize,
    pub transporter: String,
    pub line: Option<usize>,
    pub numerators: Vec<Vec<i64>>,
}

/// Builds the magic unitary for a partition and representative choice. The
/// entry for row y, column z of cell i is computed two ways, as the
/// conjugation `M P M^T` of the representative's projection by the
/// transporter M taking y to z, and directly as the projection onto the
/// transported line; a mismatch is an error. All construction invariants
/// are verified before returning.
pub fn build_magic_unitary(
    rs: &RootSystem,
    partition: &OrbitPartition,
    w: &WChoice,
) -> Result<MagicUnitary, MagicError> {
    let mut cells = Vec::with_capacity(partition.cell_count());
    let mut blocks = Vec::with_capacity(partition.cell_count());
    let mut distinct: Vec<RationalMatrix> = Vec::new();
    let mut line_key: HashMap<usize, u32> = HashMap::new();
    let mut entry_lines = Vec::with_capacity(partition.cell_count());
    let mut transporters = Vec::with_capacity(partition.cell_count());
    let mut w_lines = Vec::with_capacity(partition.cell_count());
    for i in 0..partition.cell_count() {
        let cell = partition.cell(i).to_vec();
        let k = cell.len();
        let wi = w.rep(i);
        w_lines.push(*rs.line(wi));
        let p_wi = rs.line(wi).projection();
        let mut keys = vec![0u32; k * k];
        let mut lines = vec![0usize; k * k];
        let mut trans = vec![GroupElementL::identity(); k * k];
        for (r, &y) in cell.iter().enumerate() {
            for (c, &z) in cell.iter().enumerate() {
                let t = transporter(rs, y, z)?;
                let image = rs.act_vertex(&t, wi)?;
                let m = t.word().matrix();
                let conjugated = m
                    .mul(&p_wi)
                    .expect("8x8")
                    .mul(&m.transpose())
                    .expect("8x8");
                let direct = rs.line(image).projection();
                if conjugated != direct {
                    return Err(MagicError::ConjugationMismatch { cell: i, row: r, col: c });
                }
                let key = *line_key.entry(image).or_insert_with(|| {
                    distinct.push(direct);
                    (distinct.len() - 1) as u32
                });
                keys[r * k + c] = key;
                lines[r * k + c] = image;
                trans[r * k + c] = t;
            }
        }
        cells.push(cell);
        blocks.push(keys);
        entry_lines.push(lines);
        transporters.push(trans);
    }
    MagicUnitary::from_parts(
        cells,
        blocks,
        distinct,
        Some(ProjectorMeta {
            entry_lines,
            transporters,
            w_lines,
        }),
    )
}

/// One named check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

/// Outcome of re-checking the magic-unitary axioms entry by entry.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub entries_checked: usize,
    pub sum_conditions_checked: usize,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Re-checks, exactly, that every entry is a projection and that every block
/// row and column sums to the identity. Also records the largest entry
/// denominator seen (the construction keeps it a divisor of 8).
pub fn verify_magic_axioms(u: &MagicUnitary) -> AxiomReport {
    let id = RationalMatrix::identity(8);
    let mut checks = Vec::new();
    let mut entries = 0usize;
    let mut sums = 0usize;
    let mut max_denominator = BigInt::one();
    for (ci, cell) in u.cells.iter().enumerate() {
        let k = cell.len();
        let mut bad_entries = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let m = &u.distinct[u.blocks[ci][r * k + c] as usize];
                entries += 1;
                let d = m.max_denominator();
                if d.abs() > max_denominator {
                    max_denominator = d.abs();
                }
                if !m.is_projection().unwrap_or(false) {
                    bad_entries.push((r, c));
                }
            }
        }
        checks.push(AxiomCheck {
            name: format!("block_{ci}_entries_are_projections"),
            pass: bad_entries.is_empty(),
            details: if bad_entries.is_empty() {
                format!("{} entries", k * k)
            } else {
                format!("failing entries: {bad_entries:?}")
            },
        });
        let mut bad_rows = Vec::new();
        for r in 0..k {
            let mut sum = RationalMatrix::zero(8, 8);
            for c in 0..k {
                sum = sum.add(&u.distinct[u.blocks[ci][r * k + c] as usize]).expect("8x8");
            }
            if sum != id {
                bad_rows.push(r);
            }
        }
        sums += 1;
        checks.push(AxiomCheck {
            name: format!("block_{ci}_row_sums_are_identity"),
            pass: bad_rows.is_empty(),
            details: if bad_rows.is_empty() {
                format!("{k} rows")
            } else {
                format!("failing rows: {bad_rows:?}")
            },
        });
        let mut bad_cols = Vec::new();
        for c in 0..k {
            let mut sum = RationalMatrix::zero(8, 8);
            for r in 0..k {
                sum = sum.add(&u.distinct[u.blocks[ci][r * k + c] as usize]).expect("8x8");
            }
            if sum != id {
                bad_cols.push(c);
            }
        }
        sums += 1;
        checks.push(AxiomCheck {
            name: format!("block_{ci}_column_sums_are_identity"),
            pass: bad_cols.is_empty(),
            details: if bad_cols.is_empty() {
                format!("{k} columns")
            } else {
                format!("failing columns: {bad_cols:?}")
            },
        });
    }
    checks.push(AxiomCheck {
        name: "entry_denominators_divide_8".into(),
        pass: BigInt::from(8) % &max_denominator == BigInt::from(0),
        details: format!("largest denominator {max_denominator}"),
    });
    AxiomReport {
        checks,
        entries_checked: entries,
        sum_conditions_checked: sums,
    }
}

/// Exact check of the intertwining relation `A_{g1} u = u A_{g2}` by block
/// summation: for every vertex pair (k, s), the sum of entries `u_{l s}`
/// over neighbors l of k in g1 (within the cell of s) must equal the sum of
/// `u_{k t}` over neighbors t of s in g2 (within the cell of k).
pub fn verify_intertwiner(
    u: &MagicUnitary,
    g1: &Graph,
    g2: &Graph,
) -> Result<bool, MagicError> {
    for g in [g1, g2] {
        if g.n() != u.n() {
            return Err(MagicError::SizeMismatch {
                expected: u.n(),
                got: g.n(),
            });
        }
    }
    let zero = RationalMatrix::zero(8, 8);
    for k in 0..u.n() {
        let ci = u.cell_of[k];
        for s in 0..u.n() {
            let cj = u.cell_of[s];
            let mut lhs = zero.clone();
            for &l in &u.cells[cj] {
                if g1.has_edge(k, l) {
                    lhs = lhs.add(u.entry(l, s).expect("same cell")).expect("8x8");
                }
            }
            let mut rhs = zero.clone();
            for &t in &u.cells[ci] {
                if g2.has_edge(t, s) {
                    rhs = rhs.add(u.entry(k, t).expect("same cell")).expect("8x8");
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Report of the exhaustive cross-block product sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ProductRelationReport {
    pub quadruples_checked: u64,
    pub zero_products: u64,
    /// quadruples violating "u_ks u_lt = 0 iff adjacency disagrees between
    /// g1(k,l) and g2(s,t)" (at most 20 listed)
    pub intertwiner_rule_violations: Vec<String>,
    pub intertwiner_rule_violation_count: u64,
    /// quadruples violating the representative-orthogonality dichotomy
    pub dichotomy_violations: Vec<String>,
    pub dichotomy_violation_count: u64,
    /// for cells with orthogonal representatives, every entry annihilates
    /// exactly four entries per foreign row
    pub annihilation_count_ok: bool,
    /// every product denominator divides 64
    pub denominators_divide_64: bool,
    pub cells_are_cliques_in_both: bool,
}

impl ProductRelationReport {
    pub fn all_pass(&self) -> bool {
        self.intertwiner_rule_violation_count == 0
            && self.dichotomy_violation_count == 0
            && self.annihilation_count_ok
            && self.denominators_divide_64
            && self.cells_are_cliques_in_both
    }
}

/// Runs the full cross-block quadruple sweep: for all cells i != j and all
/// (k, s) in cell i, (l, t) in cell j, the product `u_{ks} u_{lt}` is
/// computed exactly and compared against both characterizations: it must
/// vanish iff g1-adjacency of (k, l) disagrees with g2-adjacency of (s, t),
/// and iff the orthogonality of the chosen representatives matches the
/// g1-adjacency agreement of (k, l) and (s, t). Products of identical entry
/// pairs are computed once and reused; this changes nothing about the
/// values, which are exact 8x8 rational matrices either way.
pub fn verify_product_relations(
    u: &MagicUnitary,
    g1: &Graph,
    g2: &Graph,
) -> Result<ProductRelationReport, MagicError> {
    for g in [g1, g2] {
        if g.n() != u.n() {
            return Err(MagicError::SizeMismatch {
                expected: u.n(),
                got: g.n(),
            });
        }
    }
    let cells_are_cliques_in_both = u.cells.iter().all(|cell| {
        cell.iter().enumerate().all(|(ai, &a)| {
            cell.iter()
                .skip(ai + 1)
                .all(|&b| g1.has_edge(a, b) && g2.has_edge(a, b))
        })
    });
    // orthogonality of representatives per cell pair, when known
    let w_orth: Option<Vec<Vec<bool>>> = u.meta.as_ref().map(|m| {
        let k = m.w_lines.len();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| m.w_lines[i].is_orthogonal(&m.w_lines[j]))
                    .collect()
            })
            .collect()
    });
    let mut product_zero: HashMap<(u32, u32), bool> = HashMap::new();
    let mut quadruples = 0u64;
    let mut zeros = 0u64;
    let mut rule_violations: Vec<String> = Vec::new();
    let mut rule_violation_count = 0u64;
    let mut dichotomy_violations: Vec<String> = Vec::new();
    let mut dichotomy_violation_count = 0u64;
    let mut annihilation_ok = true;
    let mut denominators_ok = true;
    let cell_count = u.cells.len();
    for i in 0..cell_count {
        for j in 0..cell_count {
            if i == j {
                continue;
            }
            for &k in &u.cells[i] {
                for &s in &u.cells[i] {
                    let a = u.entry_key(k, s).expect("same cell");
                    for &l in &u.cells[j] {
                        let mut zero_count_this_row = 0usize;
                        for &t in &u.cells[j] {
                            let b = u.entry_key(l, t).expect("same cell");
                            let zero = *product_zero.entry((a, b)).or_insert_with(|| {
                                let prod = u.distinct[a as usize]
                                    .mul(&u.distinct[b as usize])
                                    .expect("8x8");
                                if BigInt::from(64) % prod.max_denominator()
                                    != BigInt::from(0)
                                {
                                    denominators_ok = false;
                                }
                                prod.is_zero()
                            });
                            quadruples += 1;
                            if zero {
                                zeros += 1;
                                zero_count_this_row += 1;
                            }
                            let disagree = g1.has_edge(k, l) != g2.has_edge(s, t);
                            if zero != disagree {
                                rule_violation_count += 1;
                                if rule_violations.len() < 20 {
                                    rule_violations.push(format!(
                                        "cells ({i},{j}) vertices (k={k},s={s},l={l},t={t}): zero={zero}, adjacency disagreement={disagree}"
                                    ));
                                }
                            }
                            if let Some(orth) = &w_orth {
                                let same_distance = g1.has_edge(k, l) == g1.has_edge(s, t);
                                let expected_zero = orth[i][j] == same_distance;
                                if zero != expected_zero {
                                    dichotomy_violation_count += 1;
                                    if dichotomy_violations.len() < 20 {
                                        dichotomy_violations.push(format!(
                                            "cells ({i},{j}) vertices (k={k},s={s},l={l},t={t}): zero={zero}, expected {expected_zero}"
                                        ));
                                    }
                                }
                            }
                        }
                        if let Some(orth) = &w_orth {
                            if orth[i][j] && zero_count_this_row != 4 {
                                annihilation_ok = false;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(ProductRelationReport {
        quadruples_checked: quadruples,
        zero_products: zeros,
        intertwiner_rule_violations: rule_violations,
        intertwiner_rule_violation_count: rule_violation_count,
        dichotomy_violations,
        dichotomy_violation_count,
        annihilation_count_ok: annihilation_ok,
        denominators_divide_64: denominators_ok,
        cells_are_cliques_in_both,
    })
}

/// An induced sub-pair on a union of cells, with the restricted unitary and
/// the verification outcomes for it.
pub struct InducedPair {
    /// global vertex ids, in the order used for the induced graphs
    pub vertices: Vec<usize>,
    pub graph_left: Graph,
    pub graph_right: Graph,
    pub unitary: MagicUnitary,
    pub intertwiner_ok: bool,
    /// exact independence number of the left induced graph
    pub alpha_left: usize,
    /// an independent set in the right induced graph, one vertex per chosen
    /// cell (local indices)
    pub witness_right: Vec<usize>,
}

/// Restricts the pair (g1, g2, u) to the union of the cells in `t_cells`
/// (at least 9 of them), re-verifies the intertwining relation on the
/// sub-pair, computes the exact independence number of the left side and a
/// size-|T| independent witness on the right side.
pub fn induced_subpair(
    u: &MagicUnitary,
    g1: &Graph,
    g2: &Graph,
    w: &WChoice,
    t_cells: &[usize],
) -> Result<InducedPair, MagicError> {
    let mut t: Vec<usize> = t_cells.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() < 9 {
        return Err(MagicError::SubsetTooSmall(t.len()));
    }
    for &i in &t {
        if i >= u.cells.len() {
            return Err(MagicError::SubsetOutOfRange(i));
        }
    }
    for g in [g1, g2] {
        if g.n() != u.n() {
            return Err(MagicError::SizeMismatch {
                expected: u.n(),
                got: g.n(),
            });
        }
    }
    let vertices: Vec<usize> = t.iter().flat_map(|&i| u.cells[i].iter().copied()).collect();
    let graph_left = g1.induced(&vertices);
    let graph_right = g2.induced(&vertices);
    let local_of: HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(l, &v)| (v, l)).collect();
    let sub_cells: Vec<Vec<usize>> = t
        .iter()
        .map(|&i| u.cells[i].iter().map(|v| local_of[v]).collect())
        .collect();
    let sub_blocks: Vec<Vec<u32>> = t.iter().map(|&i| u.blocks[i].clone()).collect();
    let sub_meta = u.meta.as_ref().map(|m| ProjectorMeta {
        entry_lines: t.iter().map(|&i| m.entry_lines[i].clone()).collect(),
        transporters: t.iter().map(|&i| m.transporters[i].clone()).collect(),
        w_lines: t.iter().map(|&i| m.w_lines[i]).collect(),
    });
    let unitary = MagicUnitary::from_parts(
        sub_cells,
        sub_blocks,
        u.distinct.clone(),
        sub_meta,
    )?;
    let intertwiner_ok = verify_intertwiner(&unitary, &graph_left, &graph_right)?;
    let alpha_left = independence_number(&graph_left, IndependenceMode::Exact).value;
    let witness_right: Vec<usize> = t.iter().map(|&i| local_of[&w.rep(i)]).collect();
    // the witness really is independent on the right side
    for (ai, &a) in witness_right.iter().enumerate() {
        for &b in witness_right.iter().skip(ai + 1) {
            if graph_right.has_edge(a, b) {
                return Err(MagicError::Malformed(format!(
                    "representative witness is not independent: edge ({a},{b})"
                )));
            }
        }
    }
    Ok(InducedPair {
        vertices,
        graph_left,
        graph_right,
        unitary,
        intertwiner_ok,
        alpha_left,
        witness_right,
    })
}
