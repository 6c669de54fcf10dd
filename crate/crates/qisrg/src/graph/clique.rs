//! Independence numbers by branch-and-bound max-clique on the complement,
//! with greedy-coloring upper bounds, plus exact clique counting.

use super::Graph;
use num_bigint::BigUint;

/// How much work the search is allowed to do and what it must return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndependenceMode {
    /// Full branch-and-bound; the result is the exact independence number.
    Exact,
    /// Budgeted search; the result is a lower bound with a witness.
    LowerWitness { node_budget: u64 },
    /// Greedy coloring bound only; the result is an upper bound, no witness.
    UpperOnly,
}

#[derive(Debug, Clone)]
pub struct IndependenceOutcome {
    pub value: usize,
    pub witness: Option<Vec<usize>>,
    /// True iff `value` is the exact independence number.
    pub exact: bool,
    pub nodes: u64,
}

/// Bitset over the vertex set, kept as plain u64 words.
#[derive(Clone, PartialEq, Eq)]
struct VSet(Vec<u64>);

impl VSet {
    fn empty(words: usize) -> Self {
        VSet(vec![0; words])
    }

    fn full(words: usize, n: usize) -> Self {
        let mut v = vec![u64::MAX; words];
        let spare = words * 64 - n;
        if spare > 0 {
            v[words - 1] >>= spare;
        }
        VSet(v)
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Lowest set bit, if any.
    fn first(&self) -> Option<usize> {
        for (wi, &w) in self.0.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn intersect(&self, rows: &[u64]) -> VSet {
        VSet(self.0.iter().zip(rows).map(|(a, b)| a & b).collect())
    }

}

/// Max-clique search state over a relabeled adjacency.
struct CliqueSearch {
    adj: Vec<VSet>,
    words: usize,
    best: usize,
    best_set: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl CliqueSearch {
    /// Greedy coloring of `cand`; returns (vertex, color) with colors
    /// non-decreasing. The color of a vertex bounds any clique through it
    /// inside `cand`.
    fn color_sort(&self, cand: &VSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(cand.count());
        let mut rem = cand.clone();
        let mut color = 0;
        while !rem.is_empty() {
            color += 1;
            let mut avail = rem.clone();
            while let Some(v) = avail.first() {
                out.push((v, color));
                rem.remove(v);
                avail.remove(v);
                for (a, b) in avail.0.iter_mut().zip(&self.adj[v].0) {
                    *a &= !b;
                }
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, cand: &VSet) {
        self.nodes += 1;
        if self.budget > 0 && self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let order = self.color_sort(cand);
        let mut cand = cand.clone();
        for &(v, color) in order.iter().rev() {
            if current.len() + color <= self.best {
                return;
            }
            current.push(v);
            let next = cand.intersect(&self.adj[v].0);
            if next.is_empty() {
                if current.len() > self.best {
                    self.best = current.len();
                    self.best_set = current.clone();
                }
            } else {
                self.expand(current, &next);
            }
            current.pop();
            cand.remove(v);
            if self.aborted {
                return;
            }
        }
    }
}

/// Independence number of `g`, computed as a maximum clique of the
/// complement. Vertices are ordered by descending complement degree before
/// the search.
pub fn independence_number(g: &Graph, mode: IndependenceMode) -> IndependenceOutcome {
    let comp = g.complement();
    let n = comp.n();
    if n == 0 {
        return IndependenceOutcome {
            value: 0,
            witness: Some(vec![]),
            exact: true,
            nodes: 0,
        };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(comp.degree(v)));
    let position: Vec<usize> = {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let words = n.div_ceil(64);
    let mut adj: Vec<VSet> = vec![VSet::empty(words); n];
    for u in 0..n {
        for v in comp.neighbors(u) {
            adj[position[u]].insert(position[v]);
        }
    }
    let mut search = CliqueSearch {
        adj,
        words,
        best: 0,
        best_set: Vec::new(),
        nodes: 0,
        budget: match mode {
            IndependenceMode::LowerWitness { node_budget } => node_budget,
            _ => 0,
        },
        aborted: false,
    };
    if let IndependenceMode::UpperOnly = mode {
        let full = VSet::full(search.words, n);
        let bound = search.color_sort(&full).last().map(|&(_, c)| c).unwrap_or(0);
        return IndependenceOutcome {
            value: bound,
            witness: None,
            exact: false,
            nodes: 0,
        };
    }
    let full = VSet::full(search.words, n);
    let mut current = Vec::new();
    search.expand(&mut current, &full);
    let witness: Vec<usize> = {
        let mut w: Vec<usize> = search.best_set.iter().map(|&i| order[i]).collect();
        w.sort_unstable();
        w
    };
    debug_assert!(witness
        .iter()
        .enumerate()
        .all(|(i, &u)| witness[..i].iter().all(|&v| !g.has_edge(u, v))));
    IndependenceOutcome {
        value: search.best,
        witness: Some(witness),
        exact: !search.aborted,
        nodes: search.nodes,
    }
}

/// Exact number of k-vertex cliques, by ordered backtracking over bit rows.
pub fn count_cliques(g: &Graph, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::from(1u32);
    }
    let n = g.n();
    if k > n {
        return BigUint::from(0u32);
    }
    let words = n.div_ceil(64);
    let mut adj: Vec<VSet> = vec![VSet::empty(words); n];
    for u in 0..n {
        for v in g.neighbors(u) {
            adj[u].insert(v);
        }
    }
    fn rec(adj: &[VSet], cand: &VSet, depth: usize, k: usize, total: &mut u128) {
        if depth == k {
            *total += 1;
            return;
        }
        let mut rem = cand.clone();
        loop {
            let next = match rem.first() {
                Some(v) => v,
                None => return,
            };
            rem.remove(next);
            // only keep candidates above `next` to count each clique once
            if rem.count() + 1 < k - depth {
                return;
            }
            let sub = rem.intersect(&adj[next].0);
            if sub.count() >= k - depth - 1 {
                rec(adj, &sub, depth + 1, k, total);
            } else if k - depth == 1 {
                *total += 1;
            }
        }
    }
    let mut total: u128 = 0;
    let full = VSet::full(words, n);
    rec(&adj, &full, 0, k, &mut total);
    BigUint::from(total)
}
