//! Isomorphism testing: cheap invariant separation first, then
//! individualization-refinement backtracking with an explicit node budget.
//! The answer is never wrong; running out of budget is a distinct
//! `Inconclusive` outcome.

use super::{count_cliques, independence_number, is_isomorphism, IndependenceMode};
use super::Graph;
use std::collections::BTreeMap;

/// Evidence that two graphs differ in an isomorphism-invariant quantity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NonIsoCertificate {
    /// Name of the separating invariant.
    pub kind: String,
    pub value_left: String,
    pub value_right: String,
}

/// Why two graphs were found non-isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoReason {
    /// A named invariant takes different values; re-checkable independently.
    Invariant(NonIsoCertificate),
    /// The individualization-refinement search exhausted every branch.
    SearchExhausted { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An explicit vertex bijection, verified edge-by-edge before returning.
    Isomorphic(Vec<usize>),
    NonIsomorphic(NonIsoReason),
    /// The search budget ran out before a decision was reached.
    Inconclusive { nodes: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct IsoBudget {
    /// Node limit for the individualization-refinement search.
    pub search_nodes: u64,
    /// Node limit for the independence-number invariant; 0 skips it.
    pub independence_nodes: u64,
}

impl Default for IsoBudget {
    fn default() -> Self {
        IsoBudget {
            search_nodes: 200_000,
            independence_nodes: 5_000_000,
        }
    }
}

/// Joint color refinement of two graphs. Colors are shared between the
/// graphs, so equal color histograms are a necessary condition for
/// isomorphism.
enum RefineOutcome {
    Stable {
        colors_g: Vec<usize>,
        colors_h: Vec<usize>,
    },
    Distinguished,
}

fn refine_pair(g: &Graph, h: &Graph, init_g: Vec<usize>, init_h: Vec<usize>) -> RefineOutcome {
    let n = g.n();
    let mut colors_g = init_g;
    let mut colors_h = init_h;
    let mut palette = colors_g.iter().chain(&colors_h).max().map_or(1, |m| m + 1);
    loop {
        let signature = |graph: &Graph, colors: &[usize], v: usize| {
            let mut neigh: BTreeMap<usize, usize> = BTreeMap::new();
            for u in graph.neighbors(v) {
                *neigh.entry(colors[u]).or_insert(0) += 1;
            }
            (colors[v], neigh.into_iter().collect::<Vec<_>>())
        };
        let mut ids: BTreeMap<(usize, Vec<(usize, usize)>), usize> = BTreeMap::new();
        let mut next_g = vec![0usize; n];
        let mut next_h = vec![0usize; n];
        // deterministic shared ids: collect signatures from both graphs first
        let sigs_g: Vec<_> = (0..n).map(|v| signature(g, &colors_g, v)).collect();
        let sigs_h: Vec<_> = (0..n).map(|v| signature(h, &colors_h, v)).collect();
        for s in sigs_g.iter().chain(sigs_h.iter()) {
            let fresh = ids.len();
            ids.entry(s.clone()).or_insert(fresh);
        }
        for v in 0..n {
            next_g[v] = ids[&sigs_g[v]];
            next_h[v] = ids[&sigs_h[v]];
        }
        let mut hist_g = vec![0usize; ids.len()];
        let mut hist_h = vec![0usize; ids.len()];
        for v in 0..n {
            hist_g[next_g[v]] += 1;
            hist_h[next_h[v]] += 1;
        }
        if hist_g != hist_h {
            return RefineOutcome::Distinguished;
        }
        let color_count = ids.len();
        if color_count == palette {
            return RefineOutcome::Stable {
                colors_g: next_g,
                colors_h: next_h,
            };
        }
        palette = color_count;
        colors_g = next_g;
        colors_h = next_h;
    }
}

/// The stable color-class size histogram of a single graph under
/// self-refinement, usable as an isomorphism invariant.
pub fn color_refinement_histogram(g: &Graph) -> Vec<usize> {
    match refine_pair(g, g, vec![0; g.n()], vec![0; g.n()]) {
        RefineOutcome::Stable { colors_g, .. } => {
            let max = colors_g.iter().max().copied().unwrap_or(0);
            let mut hist = vec![0usize; max + 1];
            for &c in &colors_g {
                hist[c] += 1;
            }
            hist.retain(|&c| c > 0);
            hist.sort_unstable();
            hist
        }
        RefineOutcome::Distinguished => unreachable!("a graph cannot differ from itself"),
    }
}

enum SearchResult {
    Found(Vec<usize>),
    Exhausted,
    BudgetExceeded,
}

fn search(
    g: &Graph,
    h: &Graph,
    colors_g: Vec<usize>,
    colors_h: Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> SearchResult {
    *nodes += 1;
    if *nodes > budget {
        return SearchResult::BudgetExceeded;
    }
    let (colors_g, colors_h) = match refine_pair(g, h, colors_g, colors_h) {
        RefineOutcome::Distinguished => return SearchResult::Exhausted,
        RefineOutcome::Stable { colors_g, colors_h } => (colors_g, colors_h),
    };
    let n = g.n();
    // color classes in g, smallest non-singleton first
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        classes.entry(colors_g[v]).or_default().push(v);
    }
    let target = classes
        .iter()
        .filter(|(_, vs)| vs.len() > 1)
        .min_by_key(|(color, vs)| (vs.len(), **color));
    let (target_color, class_g) = match target {
        None => {
            // discrete partition: read off the candidate bijection
            let mut by_color: BTreeMap<usize, usize> = BTreeMap::new();
            for v in 0..n {
                by_color.insert(colors_h[v], v);
            }
            let map: Vec<usize> = colors_g.iter().map(|c| by_color[c]).collect();
            return match is_isomorphism(g, h, &map) {
                Ok(true) => SearchResult::Found(map),
                _ => SearchResult::Exhausted,
            };
        }
        Some((color, vs)) => (*color, vs.clone()),
    };
    let v = class_g[0];
    let fresh = 2 * n + 7; // outside any refinement palette of size <= 2n
    let candidates: Vec<usize> = (0..n).filter(|&w| colors_h[w] == target_color).collect();
    for w in candidates {
        let mut next_g = colors_g.clone();
        let mut next_h = colors_h.clone();
        next_g[v] = fresh;
        next_h[w] = fresh;
        match search(g, h, next_g, next_h, nodes, budget) {
            SearchResult::Found(map) => return SearchResult::Found(map),
            SearchResult::Exhausted => {}
            SearchResult::BudgetExceeded => return SearchResult::BudgetExceeded,
        }
    }
    SearchResult::Exhausted
}

fn degree_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..g.n() {
        *hist.entry(g.degree(v)).or_insert(0) += 1;
    }
    hist.into_iter().collect()
}

fn triangle_per_edge_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        *hist.entry(g.common_neighbors(u, v)).or_insert(0) += 1;
    }
    hist.into_iter().collect()
}

/// Decides isomorphism of `g` and `h`. Invariant separation is attempted
/// first (degree sequence, triangles per edge, color refinement, 4-clique
/// count, independence number when affordable, 5-clique count); if all
/// invariants agree, an individualization-refinement search runs up to the
/// node budget.
///
/// The 4-clique count is checked before the independence number and the
/// 5-clique count after it, so quantum-isomorphic pairs (which share all
/// planar pattern counts, 4-cliques included) are certified by the
/// independence number rather than by a clique count.
pub fn are_isomorphic(g: &Graph, h: &Graph, budget: IsoBudget) -> IsoOutcome {
    if g.n() != h.n() {
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "vertex_count".into(),
            value_left: g.n().to_string(),
            value_right: h.n().to_string(),
        }));
    }
    if g == h {
        return IsoOutcome::Isomorphic((0..g.n()).collect());
    }
    let dg = degree_histogram(g);
    let dh = degree_histogram(h);
    if dg != dh {
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "degree_sequence".into(),
            value_left: format!("{dg:?}"),
            value_right: format!("{dh:?}"),
        }));
    }
    let tg = triangle_per_edge_histogram(g);
    let th = triangle_per_edge_histogram(h);
    if tg != th {
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "triangle_per_edge_histogram".into(),
            value_left: format!("{tg:?}"),
            value_right: format!("{th:?}"),
        }));
    }
    if let RefineOutcome::Distinguished =
        refine_pair(g, h, vec![0; g.n()], vec![0; h.n()])
    {
        let hg = color_refinement_histogram(g);
        let hh = color_refinement_histogram(h);
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "color_refinement_histogram".into(),
            value_left: format!("{hg:?}"),
            value_right: format!("{hh:?}"),
        }));
    }
    let k4g = count_cliques(g, 4);
    let k4h = count_cliques(h, 4);
    if k4g != k4h {
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "k4_count".into(),
            value_left: k4g.to_string(),
            value_right: k4h.to_string(),
        }));
    }
    if budget.independence_nodes > 0 {
        let ag = independence_number(
            g,
            IndependenceMode::LowerWitness {
                node_budget: budget.independence_nodes,
            },
        );
        let ah = independence_number(
            h,
            IndependenceMode::LowerWitness {
                node_budget: budget.independence_nodes,
            },
        );
        // only exact values on both sides certify anything
        if ag.exact && ah.exact && ag.value != ah.value {
            return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
                kind: "independence_number".into(),
                value_left: ag.value.to_string(),
                value_right: ah.value.to_string(),
            }));
        }
    }
    let k5g = count_cliques(g, 5);
    let k5h = count_cliques(h, 5);
    if k5g != k5h {
        return IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(NonIsoCertificate {
            kind: "k5_count".into(),
            value_left: k5g.to_string(),
            value_right: k5h.to_string(),
        }));
    }
    let mut nodes = 0u64;
    match search(
        g,
        h,
        vec![0; g.n()],
        vec![0; h.n()],
        &mut nodes,
        budget.search_nodes,
    ) {
        SearchResult::Found(map) => IsoOutcome::Isomorphic(map),
        SearchResult::Exhausted => IsoOutcome::NonIsomorphic(NonIsoReason::SearchExhausted { nodes }),
        SearchResult::BudgetExceeded => IsoOutcome::Inconclusive { nodes },
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{complete, cycle, path};
    use super::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        let mut h = Graph::empty(g.n());
        for (u, v) in g.edges() {
            h.set_edge(perm[u], perm[v], true);
        }
        h
    }

    /// 4x4 rook's graph: vertices are grid cells, adjacent in same row/column.
    fn rook4() -> Graph {
        let mut g = Graph::empty(16);
        for a in 0..16 {
            for b in (a + 1)..16 {
                if a / 4 == b / 4 || a % 4 == b % 4 {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    /// Shrikhande graph: Cayley graph of Z4 x Z4 with connection set
    /// {(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)}; same parameters as rook4 but
    /// not isomorphic to it.
    fn shrikhande() -> Graph {
        let conn = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
        let mut g = Graph::empty(16);
        for a in 0..16usize {
            let (ax, ay) = (a / 4, a % 4);
            for &(dx, dy) in &conn {
                let b = ((ax + dx) % 4) * 4 + (ay + dy) % 4;
                if a != b {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    #[test]
    fn identical_graphs_give_identity() {
        let g = cycle(7);
        match are_isomorphic(&g, &g, IsoBudget::default()) {
            IsoOutcome::Isomorphic(map) => assert_eq!(map, (0..7).collect::<Vec<_>>()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degree_certificate() {
        match are_isomorphic(&cycle(3), &path(3), IsoBudget::default()) {
            IsoOutcome::NonIsomorphic(NonIsoReason::Invariant(c)) => {
                assert_eq!(c.kind, "degree_sequence");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finds_isomorphism_of_relabeled_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in [6usize, 10, 14] {
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.4) {
                        g.set_edge(u, v, true);
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = relabel(&g, &perm);
            match are_isomorphic(&g, &h, IsoBudget::default()) {
                IsoOutcome::Isomorphic(map) => {
                    assert!(is_isomorphism(&g, &h, &map).unwrap());
                }
                other => panic!("unexpected {other:?} for n = {n}"),
            }
        }
    }

    #[test]
    fn srg_16_pair_is_separated() {
        // rook4 and shrikhande share SRG(16,6,2,2) and defeat plain color
        // refinement; the 4-clique count or search must separate them.
        let r = rook4();
        let s = shrikhande();
        assert_eq!(
            super::super::srg_parameters(&r),
            super::super::srg_parameters(&s)
        );
        match are_isomorphic(&r, &s, IsoBudget::default()) {
            IsoOutcome::NonIsomorphic(_) => {}
            other => panic!("unexpected {other:?}"),
        }
        // and each is isomorphic to a relabeling of itself
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut perm: Vec<usize> = (0..16).collect();
        perm.shuffle(&mut rng);
        let rr = relabel(&r, &perm);
        match are_isomorphic(&r, &rr, IsoBudget::default()) {
            IsoOutcome::Isomorphic(map) => assert!(is_isomorphism(&r, &rr, &map).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn search_exhaustion_on_invariant_twins() {
        // C6 versus 2x C3: same degree sequence; triangles differ, so the
        // triangle histogram separates. Bypass it by comparing C4+C4 vs C8:
        // both 2-regular, triangle-free, bipartite. Refinement cannot split
        // regular graphs, K4/K5 counts are 0, independence numbers both 4.
        let c8 = cycle(8);
        let two_c4 = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)],
        )
        .unwrap();
        match are_isomorphic(&c8, &two_c4, IsoBudget::default()) {
            IsoOutcome::NonIsomorphic(NonIsoReason::SearchExhausted { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let r = rook4();
        let s = shrikhande();
        let tiny = IsoBudget {
            search_nodes: 1,
            independence_nodes: 0,
        };
        // k4 counts differ for this pair, so disable nothing else: compare
        // rook with a relabeling of itself under a tiny budget instead.
        let mut perm: Vec<usize> = (0..16).collect();
        perm.swap(0, 7);
        perm.swap(3, 12);
        let rr = relabel(&r, &perm);
        match are_isomorphic(&r, &rr, tiny) {
            IsoOutcome::Inconclusive { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        // sanity: certificates stay sound whatever the budget
        match are_isomorphic(&r, &s, tiny) {
            IsoOutcome::NonIsomorphic(_) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetric_and_reflexive() {
        let g = cycle(9);
        let h = path(9);
        let gh = are_isomorphic(&g, &h, IsoBudget::default());
        let hg = are_isomorphic(&h, &g, IsoBudget::default());
        match (gh, hg) {
            (IsoOutcome::NonIsomorphic(_), IsoOutcome::NonIsomorphic(_)) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            are_isomorphic(&g, &g, IsoBudget::default()),
            IsoOutcome::Isomorphic(_)
        ));
    }
}
