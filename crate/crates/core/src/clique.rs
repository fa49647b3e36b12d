//! Maximal clique machinery.
//!
//! Enumeration uses Bron–Kerbosch with bitset candidate (`P`) and excluded
//! (`X`) sets and the pivot maximizing `|P ∩ Γ(u)|` over `u ∈ P ∪ X`.
//! Starting from `P = W`, `X = V \ W` restricts the output to the cliques
//! that lie inside `W` and are inclusion-maximal in the whole graph.

use std::ops::ControlFlow;

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A clique as a sorted list of 0-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clique(Vec<usize>);

impl Clique {
    /// Wraps a vertex list, sorting it.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Size-1 cliques (isolated vertices) are maximal but never constrain a
    /// clique coloring.
    pub fn is_trivial(&self) -> bool {
        self.0.len() < 2
    }

    pub fn to_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_with_capacity(n, self.0.iter().copied())
    }

    /// 1-based vertex ids.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

/// Limits for [`find_clique_dominating_outside`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Deepest clique size explored by the exhaustive phase.
    pub k_max: usize,
    /// Search-tree nodes allowed in the exhaustive phase.
    pub node_limit: u64,
    /// Randomized greedy restarts after the exhaustive phase.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            k_max: 6,
            node_limit: 2_000_000,
            restarts: 1000,
            seed: 0,
        }
    }
}

impl SearchBudget {
    /// Budget with `k_max = max(k, 6)`.
    pub fn for_clique_size(k: usize) -> Self {
        Self {
            k_max: k.max(6),
            ..Self::default()
        }
    }
}

/// Why a search stopped before exhausting the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Halt {
    Visitor,
    NodeLimit,
}

/// A Bron–Kerbosch search tree node as seen by a visitor.
pub struct Node<'a> {
    /// Current clique `R`, in insertion order.
    pub clique: &'a [usize],
    pub candidates: &'a VertexSet,
    pub excluded: &'a VertexSet,
}

impl Node<'_> {
    /// `R` is maximal (within the search's universe) iff `P = X = ∅`.
    pub fn is_maximal(&self) -> bool {
        self.candidates.is_empty() && self.excluded.is_empty()
    }
}

/// Configurable pivoted Bron–Kerbosch search.
pub struct BronKerbosch<'g> {
    g: &'g Graph,
    node_limit: Option<u64>,
    max_depth: Option<usize>,
    nodes: u64,
    truncated: bool,
}

impl<'g> BronKerbosch<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Self {
            g,
            node_limit: None,
            max_depth: None,
            nodes: 0,
            truncated: false,
        }
    }

    pub fn node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    /// Do not grow `R` beyond `depth` vertices.
    pub fn max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    /// Nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// True if the depth limit cut off some branch.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Runs the search from `(P, X)`, calling `visit` on every node
    /// (including the root). Returns `Break` if the visitor stopped or the
    /// node limit was hit.
    pub fn run<F>(&mut self, p: VertexSet, x: VertexSet, visit: &mut F) -> ControlFlow<Halt>
    where
        F: FnMut(&Node<'_>) -> ControlFlow<()>,
    {
        let mut r = Vec::new();
        self.expand(&mut r, p, x, visit)
    }

    fn expand<F>(&mut self, r: &mut Vec<usize>, mut p: VertexSet, mut x: VertexSet, visit: &mut F) -> ControlFlow<Halt>
    where
        F: FnMut(&Node<'_>) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return ControlFlow::Break(Halt::NodeLimit);
            }
        }
        let node = Node {
            clique: r,
            candidates: &p,
            excluded: &x,
        };
        if visit(&node).is_break() {
            return ControlFlow::Break(Halt::Visitor);
        }
        if p.is_empty() {
            return ControlFlow::Continue(());
        }
        if self.max_depth.is_some_and(|d| r.len() >= d) {
            self.truncated = true;
            return ControlFlow::Continue(());
        }
        let pivot = self.choose_pivot(&p, &x);
        let branch = p.difference(self.g.neighbors(pivot));
        for v in branch.iter() {
            let nv = self.g.neighbors(v);
            r.push(v);
            let flow = self.expand(r, p.intersection(nv), x.intersection(nv), visit);
            r.pop();
            flow?;
            p.remove(v);
            x.insert(v);
        }
        ControlFlow::Continue(())
    }

    fn choose_pivot(&self, p: &VertexSet, x: &VertexSet) -> usize {
        let target = p.len();
        let mut best = (0usize, usize::MAX);
        for u in p.iter().chain(x.iter()) {
            let c = self.g.degree_into(u, p);
            if best.1 == usize::MAX || c > best.0 {
                best = (c, u);
                if c + 1 >= target {
                    break;
                }
            }
        }
        best.1
    }
}

/// Calls `f` on every inclusion-maximal clique (sorted, size-1 included).
pub fn for_each_maximal_clique<F>(g: &Graph, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    for_each_maximal_clique_within(g, &VertexSet::full(g.n()), &mut f)
}

/// Calls `f` on every clique contained in `w` that is inclusion-maximal in `g`.
pub fn for_each_maximal_clique_within<F>(g: &Graph, w: &VertexSet, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut sorted = Vec::new();
    let mut visit = |node: &Node<'_>| {
        if node.is_maximal() && !node.clique.is_empty() {
            sorted.clear();
            sorted.extend_from_slice(node.clique);
            sorted.sort_unstable();
            return f(&sorted);
        }
        ControlFlow::Continue(())
    };
    match BronKerbosch::new(g).run(w.clone(), w.complement(), &mut visit) {
        ControlFlow::Continue(()) => ControlFlow::Continue(()),
        ControlFlow::Break(_) => ControlFlow::Break(()),
    }
}

/// All inclusion-maximal cliques, stopping after `limit` if given.
pub fn enumerate_maximal_cliques(g: &Graph, limit: Option<usize>) -> Vec<Clique> {
    let mut out = Vec::new();
    let _ = for_each_maximal_clique(g, |c| {
        out.push(Clique(c.to_vec()));
        if limit.is_some_and(|l| out.len() >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Maximal cliques of size at least 2, failing once `node_limit` search
/// nodes have been spent.
pub fn nontrivial_maximal_cliques(g: &Graph, node_limit: u64) -> Result<Vec<Clique>> {
    let mut out = Vec::new();
    let mut visit = |node: &Node<'_>| {
        if node.is_maximal() && node.clique.len() >= 2 {
            out.push(Clique::new(node.clique.to_vec()));
        }
        ControlFlow::Continue(())
    };
    let mut bk = BronKerbosch::new(g).node_limit(node_limit);
    match bk.run(VertexSet::full(g.n()), VertexSet::new(g.n()), &mut visit) {
        ControlFlow::Break(_) => Err(Error::BudgetExceeded { nodes: bk.nodes() }),
        ControlFlow::Continue(()) => {
            out.sort();
            Ok(out)
        }
    }
}

/// True iff `k` is a nonempty clique no outside vertex is adjacent to all of.
pub fn is_maximal_clique(g: &Graph, k: &VertexSet) -> bool {
    !k.is_empty() && g.is_clique(k) && g.common_neighbors(k).is_empty()
}

/// Greedily extends the clique `k` to a maximal one, adding the smallest
/// admissible vertex outside `forbidden` first and touching `forbidden`
/// only when nothing else fits.
pub fn extend_to_maximal(g: &Graph, k: &VertexSet, forbidden: &VertexSet) -> Result<Clique> {
    if !g.is_clique(k) {
        return Err(Error::NotAClique);
    }
    let mut members = k.clone();
    let mut cand = g.common_neighbors(k);
    while !cand.is_empty() {
        let v = cand.difference(forbidden).first().or_else(|| cand.first()).expect("nonempty");
        members.insert(v);
        cand.intersect_with(g.neighbors(v));
    }
    Ok(Clique(members.to_vec()))
}

/// Outcome of [`find_clique_dominating_outside_detailed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingSearch {
    /// The maximal clique found inside `w`, if any.
    pub clique: Option<Clique>,
    /// Nodes spent by the exhaustive phase.
    pub nodes: u64,
    /// True if the exhaustive phase covered the whole tree, so `None` is a
    /// proof of absence.
    pub exhaustive: bool,
    /// Restarts spent by the randomized phase.
    pub restarts: usize,
}

/// Finds a clique `K ⊆ w` such that every vertex outside `w` has a
/// non-neighbor in `K`, and returns its extension inside `w`, which is an
/// inclusion-maximal clique of `g`.
pub fn find_clique_dominating_outside(g: &Graph, w: &VertexSet, budget: &SearchBudget) -> Option<Clique> {
    find_clique_dominating_outside_detailed(g, w, budget).clique
}

pub fn find_clique_dominating_outside_detailed(g: &Graph, w: &VertexSet, budget: &SearchBudget) -> DominatingSearch {
    find_clique_dominating_outside_with(g, w, budget, false)
}

/// As [`find_clique_dominating_outside_detailed`]; with `nontrivial` set,
/// hits that extend only to an isolated vertex are skipped, since no
/// coloring constrains them.
pub fn find_clique_dominating_outside_with(
    g: &Graph,
    w: &VertexSet,
    budget: &SearchBudget,
    nontrivial: bool,
) -> DominatingSearch {
    let outside = w.complement();
    let mut found: Option<Vec<usize>> = None;
    let mut visit = |node: &Node<'_>| {
        let trivial = node.clique.len() == 1 && node.candidates.is_empty();
        if !node.clique.is_empty() && !(nontrivial && trivial) && node.excluded.is_disjoint(&outside) {
            found = Some(node.clique.to_vec());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    };
    let mut bk = BronKerbosch::new(g).node_limit(budget.node_limit).max_depth(budget.k_max);
    let flow = bk.run(w.clone(), outside.clone(), &mut visit);
    let nodes = bk.nodes();
    let exhaustive = flow.is_continue() && !bk.truncated();
    if let Some(k) = found {
        let k = VertexSet::from_iter_with_capacity(g.n(), k);
        let clique = extend_to_maximal(g, &k, &outside).expect("search yields cliques");
        return DominatingSearch {
            clique: Some(clique),
            nodes,
            exhaustive,
            restarts: 0,
        };
    }
    if exhaustive || w.is_empty() {
        return DominatingSearch {
            clique: None,
            nodes,
            exhaustive: true,
            restarts: 0,
        };
    }
    let members = w.to_vec();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(budget.seed);
    for attempt in 0..budget.restarts {
        let start = members[rng.random_range(0..members.len())];
        let mut clique = VertexSet::from_iter_with_capacity(g.n(), [start]);
        let mut cand = g.neighbors(start).intersection(w);
        while !cand.is_empty() {
            let pool = cand.to_vec();
            let v = pool[rng.random_range(0..pool.len())];
            clique.insert(v);
            cand.intersect_with(g.neighbors(v));
        }
        if (!nontrivial || clique.len() >= 2) && g.common_neighbors(&clique).is_disjoint(&outside) {
            return DominatingSearch {
                clique: Some(Clique(clique.to_vec())),
                nodes,
                exhaustive: false,
                restarts: attempt + 1,
            };
        }
    }
    DominatingSearch {
        clique: None,
        nodes,
        exhaustive: false,
        restarts: budget.restarts,
    }
}
