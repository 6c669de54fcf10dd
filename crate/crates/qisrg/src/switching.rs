//! Godsil-McKay switching: partition validation, the switch itself, its
//! matrix form through the block involution Q, the commutation of Q with a
//! block magic unitary, and cospectrality via exact characteristic
//! polynomials.

use crate::exact::{rat, ratio, ExactError, RationalMatrix};
use crate::graph::Graph;
use crate::magic::{verify_intertwiner, MagicError, MagicUnitary};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SwitchError {
    #[error("cells and D do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("partition does not satisfy the switching conditions: {0:?}")]
    ConditionsViolated(Vec<String>),
    #[error("cell {cell} is not a union of the unitary's cells (vertex {vertex} splits one)")]
    MisalignedCell { cell: String, vertex: usize },
    #[error("graphs have different vertex counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Magic(#[from] MagicError),
}

/// A switching partition: cells C_1..C_k plus the distinguished set D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmPartition {
    cells: Vec<Vec<usize>>,
    d: Vec<usize>,
    n: usize,
}

impl GmPartition {
    /// Validates that the cells and D partition `0..n` and that cells are
    /// nonempty.
    pub fn new(n: usize, cells: Vec<Vec<usize>>, d: Vec<usize>) -> Result<GmPartition, SwitchError> {
        let mut seen = vec![false; n];
        let mut mark = |v: usize| -> Result<(), SwitchError> {
            if v >= n {
                return Err(SwitchError::NotAPartition(format!(
                    "vertex {v} out of range 0..{n}"
                )));
            }
            if seen[v] {
                return Err(SwitchError::NotAPartition(format!("vertex {v} repeated")));
            }
            seen[v] = true;
            Ok(())
        };
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(SwitchError::NotAPartition(format!("cell {i} is empty")));
            }
            for &v in cell {
                mark(v)?;
            }
        }
        for &v in &d {
            mark(v)?;
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(SwitchError::NotAPartition(format!("vertex {v} uncovered")));
        }
        Ok(GmPartition { cells, d, n })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Per-partition validation report: condition (i) is constant row counts
/// between cell pairs, condition (ii) is 0, half or full joins from every
/// D-vertex into every cell.
#[derive(Debug, Clone, Serialize)]
pub struct GmReport {
    pub violations: Vec<String>,
    /// for each D-vertex, the cells it is half-joined to
    pub half_joined: Vec<(usize, Vec<usize>)>,
}

impl GmReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks conditions (i) and (ii) for a partition on a graph; every
/// violation is listed with the indices involved.
pub fn validate_gm_partition(g: &Graph, p: &GmPartition) -> Result<GmReport, SwitchError> {
    if g.n() != p.n() {
        return Err(SwitchError::NotAPartition(format!(
            "partition covers 0..{} but the graph has {} vertices",
            p.n(),
            g.n()
        )));
    }
    let mut violations = Vec::new();
    for (i, ci) in p.cells.iter().enumerate() {
        for (j, cj) in p.cells.iter().enumerate() {
            let counts: Vec<usize> = ci
                .iter()
                .map(|&v| cj.iter().filter(|&&u| u != v && g.has_edge(v, u)).count())
                .collect();
            if counts.windows(2).any(|w| w[0] != w[1]) {
                violations.push(format!(
                    "condition (i): cells {i} and {j} have non-constant neighbor counts {counts:?}"
                ));
            }
        }
    }
    let mut half_joined = Vec::new();
    for &v in &p.d {
        let mut halves = Vec::new();
        for (i, ci) in p.cells.iter().enumerate() {
            let count = ci.iter().filter(|&&u| g.has_edge(v, u)).count();
            let m = ci.len();
            if count == m / 2 && m % 2 == 0 && count != 0 && count != m {
                halves.push(i);
            } else if count != 0 && count != m && !(m % 2 == 0 && count == m / 2) {
                violations.push(format!(
                    "condition (ii): D-vertex {v} has {count} neighbors in cell {i} of size {m}"
                ));
            }
        }
        half_joined.push((v, halves));
    }
    Ok(GmReport {
        violations,
        half_joined,
    })
}

/// Applies the switch: for every D-vertex and every cell it is half-joined
/// to, its neighborhood inside the cell is complemented. Everything else is
/// unchanged. Requires a valid partition; switching twice returns the
/// original graph.
pub fn gm_switch(g: &Graph, p: &GmPartition) -> Result<Graph, SwitchError> {
    let report = validate_gm_partition(g, p)?;
    if !report.is_valid() {
        return Err(SwitchError::ConditionsViolated(report.violations));
    }
    let mut out = g.clone();
    for (v, halves) in &report.half_joined {
        for &i in halves {
            for &u in &p.cells[i] {
                out.toggle_edge(*v, u);
            }
        }
    }
    Ok(out)
}

/// The switching involution in the graph's native vertex order: the block
/// `(2/m) J - I` on each cell and the identity on D.
pub fn build_q(p: &GmPartition) -> RationalMatrix {
    let n = p.n();
    let mut q = RationalMatrix::zero(n, n);
    for cell in &p.cells {
        let m = cell.len() as i64;
        for &a in cell {
            for &b in cell {
                let v = if a == b {
                    ratio(2, m) - rat(1)
                } else {
                    ratio(2, m)
                };
                q.set_entry(a, b, v);
            }
        }
    }
    for &v in &p.d {
        q.set_entry(v, v, rat(1));
    }
    q
}

/// Exact check that the adjacency matrix of the switched graph equals
/// `Q A Q`.
pub fn verify_qaq(g: &Graph, p: &GmPartition) -> Result<bool, SwitchError> {
    let switched = gm_switch(g, p)?;
    let q = build_q(p);
    let a = g.to_rational_matrix();
    let qaq = q.mul(&a)?.mul(&q)?;
    Ok(qaq == switched.to_rational_matrix())
}

/// Exact check that the block magic unitary commutes with Q, where Q is
/// lifted over the scalar-to-block embedding. The partition's cells and D
/// must each be unions of the unitary's cells.
pub fn verify_uq_commute(u: &MagicUnitary, p: &GmPartition) -> Result<bool, SwitchError> {
    if u.n() != p.n() {
        return Err(SwitchError::SizeMismatch(u.n(), p.n()));
    }
    // alignment: every unitary cell lies inside one partition part
    let mut part_of = vec![usize::MAX; p.n()];
    for (i, cell) in p.cells.iter().enumerate() {
        for &v in cell {
            part_of[v] = i;
        }
    }
    for &v in &p.d {
        part_of[v] = usize::MAX - 1; // D marker
    }
    for ucell in u.cells() {
        let first = part_of[ucell[0]];
        for &v in ucell {
            if part_of[v] != first {
                let name = if first == usize::MAX - 1 {
                    "D".to_string()
                } else {
                    format!("C{first}")
                };
                return Err(SwitchError::MisalignedCell { cell: name, vertex: v });
            }
        }
    }
    let q = build_q(p);
    let zero = RationalMatrix::zero(8, 8);
    let cell_of: Vec<usize> = {
        let mut c = vec![0usize; u.n()];
        for (i, cell) in u.cells().iter().enumerate() {
            for &v in cell {
                c[v] = i;
            }
        }
        c
    };
    for k in 0..u.n() {
        for s in 0..u.n() {
            // (uQ)_{k,s} = sum_t u_{k,t} Q[t,s], t in the cell of k
            let mut lhs = zero.clone();
            for &t in &u.cells()[cell_of[k]] {
                let coeff = q.entry(t, s);
                if !num_traits::Zero::is_zero(coeff) {
                    lhs = lhs
                        .add(&u.entry(k, t).expect("same cell").scale(coeff))
                        .expect("8x8");
                }
            }
            // (Qu)_{k,s} = sum_l Q[k,l] u_{l,s}, l in the cell of s
            let mut rhs = zero.clone();
            for &l in &u.cells()[cell_of[s]] {
                let coeff = q.entry(k, l);
                if !num_traits::Zero::is_zero(coeff) {
                    rhs = rhs
                        .add(&u.entry(l, s).expect("same cell").scale(coeff))
                        .expect("8x8");
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coefficientwise equality of the exact characteristic polynomials.
pub fn cospectral(g: &Graph, h: &Graph) -> Result<bool, SwitchError> {
    if g.n() != h.n() {
        return Err(SwitchError::SizeMismatch(g.n(), h.n()));
    }
    let pg = g.to_rational_matrix().char_poly()?;
    let ph = h.to_rational_matrix().char_poly()?;
    Ok(pg == ph)
}

/// Everything the switching suite certifies for one (pair, partition) run.
#[derive(Debug, Clone, Serialize)]
pub struct SwitchCertificate {
    pub cell_sizes: Vec<usize>,
    pub d_size: usize,
    pub condition_report_left: GmReport,
    pub condition_report_right: GmReport,
    pub q_squares_to_identity: bool,
    pub qaq_matches_left: bool,
    pub qaq_matches_right: bool,
    pub uq_commutes: bool,
    pub switched_pair_intertwines: bool,
    pub cospectral_left: bool,
    pub cospectral_right: bool,
}

impl SwitchCertificate {
    pub fn all_pass(&self) -> bool {
        self.condition_report_left.is_valid()
            && self.condition_report_right.is_valid()
            && self.q_squares_to_identity
            && self.qaq_matches_left
            && self.qaq_matches_right
            && self.uq_commutes
            && self.switched_pair_intertwines
            && self.cospectral_left
            && self.cospectral_right
    }
}

/// Runs the full switching verification for a quantum-isomorphic pair and an
/// aligned partition, returning the switched graphs along with the
/// certificate.
pub fn run_switch_suite(
    g1: &Graph,
    g2: &Graph,
    u: &MagicUnitary,
    p: &GmPartition,
) -> Result<(Graph, Graph, SwitchCertificate), SwitchError> {
    let report1 = validate_gm_partition(g1, p)?;
    let report2 = validate_gm_partition(g2, p)?;
    let s1 = gm_switch(g1, p)?;
    let s2 = gm_switch(g2, p)?;
    let q = build_q(p);
    let q_sq = q.mul(&q)?;
    let certificate = SwitchCertificate {
        cell_sizes: p.cells.iter().map(|c| c.len()).collect(),
        d_size: p.d.len(),
        condition_report_left: report1,
        condition_report_right: report2,
        q_squares_to_identity: q_sq == RationalMatrix::identity(p.n()),
        qaq_matches_left: verify_qaq(g1, p)?,
        qaq_matches_right: verify_qaq(g2, p)?,
        uq_commutes: verify_uq_commute(u, p)?,
        switched_pair_intertwines: verify_intertwiner(u, &s1, &s2)?,
        cospectral_left: cospectral(g1, &s1)?,
        cospectral_right: cospectral(g2, &s2)?,
    };
    Ok((s1, s2, certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::srg_parameters;
    use crate::magic::build_magic_unitary;
    use crate::roots::{build_gw, build_orthogonality_graph, compute_orbits, OrbitPartition, RootSystem, WChoice};

    fn setup() -> (RootSystem, OrbitPartition, WChoice, Graph, Graph) {
        let rs = RootSystem::new();
        let partition = compute_orbits(&rs).unwrap();
        let w = WChoice::default_choice(&rs, &partition).unwrap();
        let ge8 = build_orthogonality_graph(rs.lines());
        let gw = build_gw(&rs, &partition, &w);
        (rs, partition, w, ge8, gw)
    }

    /// The partition with the first 14 orbit cells as switching cells and
    /// the last as D.
    fn v15_partition(partition: &OrbitPartition) -> GmPartition {
        let cells: Vec<Vec<usize>> = partition.cells()[..14].to_vec();
        let d = partition.cell(14).to_vec();
        GmPartition::new(120, cells, d).unwrap()
    }

    #[test]
    fn partition_construction_errors() {
        assert!(GmPartition::new(4, vec![vec![0, 1]], vec![2]).is_err()); // uncovered
        assert!(GmPartition::new(4, vec![vec![0, 1], vec![1, 2]], vec![3]).is_err()); // repeated
        assert!(GmPartition::new(4, vec![vec![0, 9]], vec![1, 2, 3]).is_err()); // out of range
        assert!(GmPartition::new(4, vec![vec![], vec![0, 1, 2, 3]], vec![]).is_err()); // empty cell
    }

    #[test]
    fn orbit_partition_validates_on_both_graphs() {
        let (_, partition, _, ge8, gw) = setup();
        let p = v15_partition(&partition);
        for g in [&ge8, &gw] {
            let report = validate_gm_partition(g, &p).unwrap();
            assert!(report.is_valid(), "{:?}", report.violations);
            // every D-vertex is half-joined to every cell
            for (_, halves) in &report.half_joined {
                assert_eq!(halves.len(), 14);
            }
        }
    }

    #[test]
    fn trivial_partition_on_a_regular_graph() {
        let (_, _, _, ge8, _) = setup();
        let p = GmPartition::new(120, vec![(0..120).collect()], vec![]).unwrap();
        let report = validate_gm_partition(&ge8, &p).unwrap();
        assert!(report.is_valid());
        // no D-vertices, so switching changes nothing
        let switched = gm_switch(&ge8, &p).unwrap();
        assert_eq!(switched, ge8);
        assert!(verify_qaq(&ge8, &p).unwrap());
    }

    #[test]
    fn switch_is_involutive_and_preserves_parameters() {
        let (_, partition, _, ge8, gw) = setup();
        let p = v15_partition(&partition);
        for g in [&ge8, &gw] {
            let s = gm_switch(g, &p).unwrap();
            assert_ne!(&s, g);
            let params = srg_parameters(&s).unwrap();
            assert_eq!(
                (params.n, params.k, params.lambda, params.mu),
                (120, 63, 30, 36)
            );
            let back = gm_switch(&s, &p).unwrap();
            assert_eq!(&back, g);
        }
    }

    #[test]
    fn q_matrix_shape() {
        let p = GmPartition::new(5, vec![vec![0, 1], vec![2, 3]], vec![4]).unwrap();
        let q = build_q(&p);
        // size-2 cell gives the swap block
        assert_eq!(*q.entry(0, 1), rat(1));
        assert_eq!(*q.entry(0, 0), rat(0));
        // D keeps the identity
        assert_eq!(*q.entry(4, 4), rat(1));
        assert_eq!(q.mul(&q).unwrap(), RationalMatrix::identity(5));
        // size-8 cell gives (1/4) J - I
        let (_, partition, _, _, _) = setup();
        let p = v15_partition(&partition);
        let q = build_q(&p);
        let c0 = partition.cell(0);
        assert_eq!(*q.entry(c0[0], c0[1]), ratio(1, 4));
        assert_eq!(*q.entry(c0[0], c0[0]), ratio(1, 4) - rat(1));
        assert_eq!(q.mul(&q).unwrap(), RationalMatrix::identity(120));
    }

    #[test]
    fn qaq_matches_switched_adjacency() {
        let (_, partition, _, ge8, gw) = setup();
        let p = v15_partition(&partition);
        assert!(verify_qaq(&ge8, &p).unwrap());
        assert!(verify_qaq(&gw, &p).unwrap());
    }

    #[test]
    fn uq_commutes_and_alignment_is_enforced() {
        let (rs, partition, w, _, _) = setup();
        let u = build_magic_unitary(&rs, &partition, &w).unwrap();
        let p = v15_partition(&partition);
        assert!(verify_uq_commute(&u, &p).unwrap());
        // a union of two orbit cells is still aligned
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut joined = partition.cell(0).to_vec();
        joined.extend_from_slice(partition.cell(1));
        cells.push(joined);
        cells.extend(partition.cells()[2..14].iter().cloned());
        let p_union = GmPartition::new(120, cells, partition.cell(14).to_vec()).unwrap();
        assert!(verify_uq_commute(&u, &p_union).unwrap());
        // splitting an orbit cell across parts is rejected
        let mut split_a = partition.cell(0)[..4].to_vec();
        split_a.extend_from_slice(partition.cell(1));
        let mut split_b = partition.cell(0)[4..].to_vec();
        split_b.extend(partition.cells()[2..14].iter().flatten().copied());
        let p_split = GmPartition::new(
            120,
            vec![split_a, split_b],
            partition.cell(14).to_vec(),
        )
        .unwrap();
        match verify_uq_commute(&u, &p_split) {
            Err(SwitchError::MisalignedCell { .. }) => {}
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn union_cell_partition_still_validates_and_switches() {
        let (_, partition, _, ge8, gw) = setup();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut joined = partition.cell(0).to_vec();
        joined.extend_from_slice(partition.cell(1));
        cells.push(joined);
        cells.extend(partition.cells()[2..14].iter().cloned());
        let p = GmPartition::new(120, cells, partition.cell(14).to_vec()).unwrap();
        for g in [&ge8, &gw] {
            let report = validate_gm_partition(g, &p).unwrap();
            assert!(report.is_valid(), "{:?}", report.violations);
            assert!(verify_qaq(g, &p).unwrap());
        }
    }

    #[test]
    fn cospectrality_small_cases() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!cospectral(&c4, &p4).unwrap());
        assert!(cospectral(&c4, &c4).unwrap());
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(cospectral(&c4, &k2).is_err());
    }

    #[test]
    fn full_suite_on_the_pair() {
        let (rs, partition, w, ge8, gw) = setup();
        let u = build_magic_unitary(&rs, &partition, &w).unwrap();
        let p = v15_partition(&partition);
        let (s1, s2, cert) = run_switch_suite(&ge8, &gw, &u, &p).unwrap();
        assert!(cert.all_pass(), "{cert:?}");
        // switched graphs are valid inputs for another round
        let report = validate_gm_partition(&s1, &p).unwrap();
        assert!(report.is_valid());
        assert_ne!(s1, ge8);
        assert_ne!(s2, gw);
    }
}
